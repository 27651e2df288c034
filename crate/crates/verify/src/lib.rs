//! Holds the acceptance suite in `tests/acceptance.rs`. Kept as its own package so that
//! a failing criterion does not stop `cargo test --workspace` before the other suites run.
