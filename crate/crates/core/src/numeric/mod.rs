//! Certified real arithmetic and the special values built on it.

mod lfun;
mod prec;

pub use lfun::{
    bernoulli, dirichlet_l, gamma_half, gamma_half_rational, hurwitz_zeta, kronecker, zeta,
    RealChar,
};
pub(crate) use lfun::{dirichlet_l_bits, gamma_half_bits, two_pi_pow_bits, zeta_bits};
pub use prec::{bits_for_digits, ratio_to_decimal, ratio_to_f64, round_half_even, PrecReal, GUARD_BITS};
