//! Explicit lattices with a prescribed rank, determinant, signature mod 8 and
//! discriminant form.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::disc::{discriminant_form, iso_check, milgram_signature, DiscriminantForm, DiscriminantFormJson};
use crate::error::{OmvError, Result};
use crate::lattice::{lattice, EvenLattice};

#[derive(Debug, Clone)]
pub struct SurrogateSpec {
    pub target_rank: usize,
    pub target_det: BigInt,
    pub target_sig_mod8: u8,
    pub target_form: DiscriminantForm,
    /// Largest core rank enumerated.
    pub core_rank_max: usize,
    /// Largest absolute Gram entry of an enumerated core.
    pub entry_bound: i64,
    pub time_budget: Duration,
    /// Cores tried, in order, before enumeration.
    pub seed_cores: Vec<EvenLattice>,
}

impl SurrogateSpec {
    pub fn new(target_rank: usize, target_det: BigInt, target_sig_mod8: u8, target_form: DiscriminantForm) -> Self {
        SurrogateSpec {
            target_rank,
            target_det,
            target_sig_mod8: target_sig_mod8 % 8,
            target_form,
            core_rank_max: 4,
            entry_bound: 8,
            time_budget: Duration::from_secs(600),
            seed_cores: Vec::new(),
        }
    }

    /// A lattice exists only if `|det| = |A|` and the signature agrees with the Gauss sum.
    pub fn validate(&self) -> Result<()> {
        let order = BigInt::from(self.target_form.order());
        if self.target_det.abs() != order {
            return Err(OmvError::Precondition(format!(
                "|det| = {} but the form has order {order}",
                self.target_det.abs()
            )));
        }
        let s = milgram_signature(&self.target_form)?;
        if s != self.target_sig_mod8 {
            return Err(OmvError::Precondition(format!(
                "signature {} mod 8 contradicts the form's Gauss sum, which forces {s}",
                self.target_sig_mod8
            )));
        }
        Ok(())
    }
}

/// JSON shape of a search request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurrogateRequest {
    pub rank: usize,
    pub det: i64,
    pub sig8: u8,
    pub form: DiscriminantFormJson,
    #[serde(default = "default_core_rank")]
    pub core_rank_max: usize,
    #[serde(default = "default_bound")]
    pub entry_bound: i64,
    #[serde(default = "default_budget")]
    pub time_budget_secs: u64,
}

fn default_core_rank() -> usize {
    4
}
fn default_bound() -> i64 {
    8
}
fn default_budget() -> u64 {
    600
}

impl SurrogateRequest {
    pub fn to_spec(&self) -> Result<SurrogateSpec> {
        let mut s = SurrogateSpec::new(
            self.rank,
            BigInt::from(self.det),
            self.sig8,
            DiscriminantForm::from_json(&self.form)?,
        );
        s.core_rank_max = self.core_rank_max;
        s.entry_bound = self.entry_bound;
        s.time_budget = Duration::from_secs(self.time_budget_secs);
        Ok(s)
    }
}

/// Search seeds first, then cores by rank, then by largest entry, then lexicographically.
pub fn find_surrogate(spec: &SurrogateSpec) -> Result<EvenLattice> {
    spec.validate()?;
    let target_sign: i8 = if spec.target_det.is_negative() { -1 } else { 1 };
    let d = spec.target_form.order();
    let start = Instant::now();

    let try_core = |core: &EvenLattice| -> Result<Option<EvenLattice>> {
        let sig = core.signature();
        if sig.mod8() != spec.target_sig_mod8 || core.rank() > spec.target_rank {
            return Ok(None);
        }
        let f = discriminant_form(core)?;
        if !iso_check(&f, &spec.target_form)? {
            return Ok(None);
        }
        match pad(core, spec.target_rank, target_sign, spec.target_sig_mod8) {
            Ok(l) => Ok(Some(l)),
            Err(OmvError::SearchExhausted(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };

    if spec.target_form.is_trivial() {
        if let Some(l) = try_core(&EvenLattice::zero())? {
            return confirm(spec, l);
        }
    }
    for seed in &spec.seed_cores {
        if seed.determinant().abs() == spec.target_det.abs() {
            if let Some(l) = try_core(seed)? {
                return confirm(spec, l);
            }
        }
    }

    let mut tried: u64 = 0;
    for r in 1..=spec.core_rank_max.min(spec.target_rank) {
        let cells: Vec<(usize, usize)> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
        for bound in 1..=spec.entry_bound {
            let mut vals = vec![-bound; cells.len()];
            loop {
                let in_shell = vals.iter().any(|v| v.abs() == bound);
                let even_diag = cells.iter().zip(&vals).all(|(&(i, j), v)| i != j || v % 2 == 0);
                if in_shell && even_diag {
                    tried += 1;
                    if tried % 4096 == 0 && start.elapsed() > spec.time_budget {
                        return Err(OmvError::SearchExhausted(format!(
                            "time budget {:?} spent after {tried} cores (rank ≤ {r}, entries ≤ {bound})",
                            spec.time_budget
                        )));
                    }
                    let mut g = vec![vec![0i64; r]; r];
                    for (&(i, j), &v) in cells.iter().zip(&vals) {
                        g[i][j] = v;
                        g[j][i] = v;
                    }
                    if small_det(&g).unsigned_abs() as u64 == d {
                        let core = EvenLattice::from_i64(&g)?;
                        if let Some(l) = try_core(&core)? {
                            return confirm(spec, l);
                        }
                    }
                }
                if !odometer(&mut vals, bound) {
                    break;
                }
            }
        }
    }
    Err(OmvError::SearchExhausted(format!(
        "{tried} cores tried with rank ≤ {} and entries ≤ {}",
        spec.core_rank_max, spec.entry_bound
    )))
}

fn odometer(vals: &mut [i64], bound: i64) -> bool {
    for v in vals.iter_mut().rev() {
        if *v < bound {
            *v += 1;
            return true;
        }
        *v = -bound;
    }
    false
}

fn small_det(g: &[Vec<i64>]) -> i128 {
    match g.len() {
        0 => 1,
        1 => g[0][0] as i128,
        n => (0..n)
            .map(|c| {
                if g[0][c] == 0 {
                    return 0;
                }
                let minor: Vec<Vec<i64>> = g[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * g[0][c] as i128 * small_det(&minor)
            })
            .sum(),
    }
}

fn confirm(spec: &SurrogateSpec, l: EvenLattice) -> Result<EvenLattice> {
    let sig = l.signature();
    let ok = l.rank() == spec.target_rank
        && l.determinant() == spec.target_det
        && sig.mod8() == spec.target_sig_mod8
        && iso_check(&discriminant_form(&l)?, &spec.target_form)?;
    if !ok {
        return Err(OmvError::Internal("surrogate fails its own specification".into()));
    }
    Ok(l)
}

/// Number of each unimodular summand added by [`pad`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Padding {
    pub u: usize,
    pub e8: usize,
    pub e8_neg: usize,
}

/// All ways to fill the rank deficit with `U`, `E8`, `E8(−1)` that give the target
/// determinant sign, best first: `n_minus` closest to 2, then fewest summands.
pub fn paddings(core: &EvenLattice, target_rank: usize, target_det_sign: i8, target_sig_mod8: u8) -> Vec<Padding> {
    let n = core.rank();
    if target_rank < n || (target_rank - n) % 2 != 0 {
        return Vec::new();
    }
    let sig = core.signature();
    if sig.mod8() != target_sig_mod8 % 8 {
        return Vec::new();
    }
    let core_sign: i8 = if core.determinant().is_negative() { -1 } else { 1 };
    let half = (target_rank - n) / 2;
    let mut out = Vec::new();
    for u in 0..=half {
        let rest = half - u;
        if rest % 4 != 0 {
            continue;
        }
        let sign = if u % 2 == 0 { core_sign } else { -core_sign };
        if sign != target_det_sign {
            continue;
        }
        for e8 in 0..=rest / 4 {
            out.push(Padding {
                u,
                e8,
                e8_neg: rest / 4 - e8,
            });
        }
    }
    out.sort_by_key(|p| {
        let n_minus = sig.n_minus + p.u + 8 * p.e8_neg;
        ((n_minus as i64 - 2).abs(), p.u + p.e8 + p.e8_neg, p.u)
    });
    out
}

/// Core plus the preferred padding.
pub fn pad(core: &EvenLattice, target_rank: usize, target_det_sign: i8, target_sig_mod8: u8) -> Result<EvenLattice> {
    let p = paddings(core, target_rank, target_det_sign, target_sig_mod8)
        .into_iter()
        .next()
        .ok_or_else(|| {
            OmvError::SearchExhausted(format!(
                "no U/E8/E8(-1) combination takes rank {} to {target_rank} with det sign {target_det_sign} and signature {target_sig_mod8} mod 8",
                core.rank()
            ))
        })?;
    apply_padding(core, p)
}

pub fn apply_padding(core: &EvenLattice, p: Padding) -> Result<EvenLattice> {
    let u = lattice("U")?;
    let e8 = lattice("E8")?;
    let e8n = lattice("E8(-1)")?;
    let mut parts = vec![core.clone()];
    parts.extend(std::iter::repeat_n(u, p.u));
    parts.extend(std::iter::repeat_n(e8, p.e8));
    parts.extend(std::iter::repeat_n(e8n, p.e8_neg));
    Ok(EvenLattice::sum_all(&parts))
}

/// Sign of the determinant as `±1`.
pub fn det_sign(l: &EvenLattice) -> i8 {
    let d = l.determinant();
    if d.is_zero() {
        0
    } else if d.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_arithmetic() {
        let core = lattice("S4").unwrap();
        assert!(pad(&core, 4, 1, 7).is_err());
        let l = pad(&core, 19, 1, 7).unwrap();
        assert_eq!(l.rank(), 19);
        let s = l.signature();
        assert_eq!((s.n_plus, s.n_minus), (17, 2));
    }

    #[test]
    fn unimodular_target() {
        let spec = SurrogateSpec::new(10, BigInt::from(-1), 0, discriminant_form(&lattice("E8").unwrap()).unwrap());
        let l = find_surrogate(&spec).unwrap();
        assert_eq!(l, lattice("U + E8").unwrap());
    }

    #[test]
    fn milgram_violation_rejected() {
        let f = discriminant_form(&lattice("E8").unwrap()).unwrap();
        let spec = SurrogateSpec::new(10, BigInt::from(1), 2, f);
        assert!(matches!(find_surrogate(&spec), Err(OmvError::Precondition(_))));
    }
}
