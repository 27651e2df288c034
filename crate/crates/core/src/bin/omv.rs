use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use omv_core::catalog::{evaluate_picard_row, picard_rows, run_r_values, run_family_scan};
use omv_core::disc::discriminant_form;
use omv_core::eisenstein::{c10_coefficient, c10_genus, CharacterConvention, DEFAULT_DIGITS};
use omv_core::lattice::{lattice, EvenLattice};
use omv_core::report::{self, analyze, CoefficientJson};
use omv_core::surrogate::{find_surrogate, SurrogateSpec};
use omv_core::Result;

#[derive(Parser)]
#[command(name = "omv", version, about = "Uniruledness tests for orthogonal modular varieties")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariants, bound and c10 test for one lattice.
    Analyze {
        expr: String,
        #[arg(long)]
        json: bool,
        /// Decimal digits of working precision.
        #[arg(long, env = "OMV_PREC", default_value_t = DEFAULT_DIGITS)]
        prec: u32,
        /// Number of split hyperbolic planes to assume.
        #[arg(long = "assert-u")]
        assert_u: Option<usize>,
    },
    /// Reproduce a built-in table.
    Table {
        which: TableId,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, env = "OMV_PREC", default_value_t = DEFAULT_DIGITS)]
        prec: u32,
    },
    /// The c10 coefficient with its ingredients.
    Coeff {
        expr: String,
        #[arg(long)]
        json: bool,
        #[arg(long, env = "OMV_PREC", default_value_t = DEFAULT_DIGITS)]
        prec: u32,
    },
    /// Search for a lattice with given rank, determinant, signature mod 8 and form.
    Surrogate {
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        det: i64,
        #[arg(long)]
        sig8: u8,
        /// Take the discriminant form of this lattice.
        #[arg(long = "form-from")]
        form_from: String,
        /// Negate the form.
        #[arg(long)]
        flip: bool,
        #[arg(long, default_value_t = 8)]
        bound: i64,
        #[arg(long = "core-rank", default_value_t = 4)]
        core_rank: usize,
        /// Time budget in seconds.
        #[arg(long, default_value_t = 600)]
        budget: u64,
        #[arg(long)]
        json: bool,
        #[arg(long, env = "OMV_PREC", default_value_t = DEFAULT_DIGITS)]
        prec: u32,
    },
    /// Diagnostics.
    Diag {
        which: DiagId,
        #[arg(long, env = "OMV_PREC", default_value_t = DEFAULT_DIGITS)]
        prec: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableId {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Nv,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagId {
    /// b − |c10|/4 for polarized K3 surfaces of degree 2d, d = 1..5.
    F2d,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cmd: Cmd) -> Result<String> {
    match cmd {
        Cmd::Analyze { expr, json, prec, assert_u } => {
            let r = analyze(&expr, prec, assert_u)?;
            Ok(if json { r.to_json() + "\n" } else { r.to_text() })
        }
        Cmd::Table { which, csv, json, prec } => table(which, csv, json, prec),
        Cmd::Coeff { expr, json, prec } => {
            let lat = lattice(&expr)?.normalize_b2()?;
            let c = c10_coefficient(&lat, prec)?;
            let j = CoefficientJson::new(&expr, &c);
            if json {
                return Ok(report::to_json(&j) + "\n");
            }
            let mut s = format!(
                "k = {}   det = {}   D = {}   N = {}   character = ({}/.)\n\
                 archimedean  {}\n\
                 L ratio      {}\n",
                j.k, j.det, j.d, j.n, j.character, j.archimedean, j.l_ratio
            );
            for f in &j.local_factors {
                s += &format!("p = {:<3} w = {}   N10 = {:<14} factor = {}\n", f.p, f.w, f.n10, f.factor);
            }
            s += &format!("local product {}\nc10          {}  (± {:.1e})\n", j.local_product, j.c10, j.error);
            Ok(s)
        }
        Cmd::Surrogate { rank, det, sig8, form_from, flip, bound, core_rank, budget, json, prec } => {
            let mut form = discriminant_form(&lattice(&form_from)?)?;
            if flip {
                form = form.flip();
            }
            let mut spec = SurrogateSpec::new(rank, BigInt::from(det), sig8, form);
            spec.entry_bound = bound;
            spec.core_rank_max = core_rank;
            spec.time_budget = Duration::from_secs(budget);
            let lat = find_surrogate(&spec)?;
            surrogate_output(&lat, json, prec)
        }
        Cmd::Diag { which: DiagId::F2d, prec } => {
            let mut s = String::from("d   c10                      b - |c10|/4\n");
            for d in 1..=5 {
                let lat = lattice(&format!("U^2 + E8(-1)^2 + <{}>", -2 * d))?.normalize_b2()?;
                let c = c10_coefficient(&lat, prec)?;
                let v = c.value.to_f64();
                s += &format!("{d}   {:<24} {:.6}\n", c.value.to_decimal(12), 19.0 - v.abs() / 4.0);
            }
            Ok(s)
        }
    }
}

fn table(which: TableId, csv: bool, json: bool, prec: u32) -> Result<String> {
    fn emit<T: Serialize>(rows: &[T], csv: bool, json: bool, text: impl FnOnce() -> String) -> Result<String> {
        if csv {
            report::to_csv(rows)
        } else if json {
            Ok(report::to_json(&rows) + "\n")
        } else {
            Ok(text())
        }
    }
    match which {
        TableId::One => {
            let rows = report::r_value_rows(&run_r_values(prec)?);
            emit(&rows, csv, json, || {
                let mut s = String::from("b    k      r(k)              truncated  printed  match\n");
                for r in &rows {
                    s += &format!(
                        "{:<4} {:<6} {:<17} {:<10} {:<8} {}\n",
                        r.b, r.k, r.value, r.truncated, r.printed, r.matches
                    );
                }
                s
            })
        }
        TableId::Two => {
            let results = run_family_scan(prec)?;
            let rows = report::family_rows(&results);
            emit(&rows, csv, json, || {
                let mut s = String::new();
                for r in &results {
                    let fmt = |v: &[Vec<u32>]| v.iter().map(|p| report::params_string(p)).collect::<Vec<_>>().join(" ");
                    s += &format!(
                        "{:<22} {} instances  patterns {}  printed set {}\n",
                        r.name,
                        r.instances.len(),
                        if r.patterns_match() { "ok" } else { "MISMATCH" },
                        if r.sets_match() { "reproduced".to_string() } else {
                            format!("differs: missing [{}] extra [{}]", fmt(&r.missing()), fmt(&r.extra()))
                        }
                    );
                }
                s
            })
        }
        TableId::Nv => {
            let reports = picard_rows()
                .iter()
                .map(|row| evaluate_picard_row(row, prec))
                .collect::<Result<Vec<_>>>()?;
            let rows = report::picard_table_rows(&reports);
            emit(&rows, csv, json, || {
                let mut s = String::from("id  triple            printed           c10          verdict          printed    flags\n");
                for r in &rows {
                    s += &format!(
                        "{:<3} {:<17} {:<17} {:<12} {:<16} {:<10} {}\n",
                        r.id, r.triple, r.printed_triple, r.c10, r.verdict.to_string(), r.printed_verdict, r.flags
                    );
                }
                s
            })
        }
    }
}

#[derive(Serialize)]
struct SurrogateJson {
    rank: usize,
    det: String,
    signature: (usize, usize),
    gram: Vec<Vec<String>>,
    c10: Option<String>,
}

fn surrogate_output(lat: &EvenLattice, json: bool, prec: u32) -> Result<String> {
    let sig = lat.signature();
    let c10 = if lat.rank() >= 5 {
        Some(c10_genus(lat, prec, CharacterConvention::default())?.value.to_decimal(15))
    } else {
        None
    };
    let gram: Vec<Vec<String>> = lat.gram().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    if json {
        let j = SurrogateJson {
            rank: lat.rank(),
            det: lat.determinant().to_string(),
            signature: (sig.n_plus, sig.n_minus),
            gram,
            c10,
        };
        return Ok(report::to_json(&j) + "\n");
    }
    let rows: Vec<String> = gram.iter().map(|r| format!("[{}]", r.join(","))).collect();
    let mut s = format!(
        "rank {}   det {}   signature ({}, {})\ngram [{}]\n",
        lat.rank(),
        lat.determinant(),
        sig.n_plus,
        sig.n_minus,
        rows.join(",")
    );
    if let Some(c) = c10 {
        s += &format!("c10  {c}\n");
    }
    Ok(s)
}
