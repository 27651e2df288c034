//! The `(1,0)` Fourier coefficient of the Eisenstein series of weight
//! `k = rank/2` and the two uniruledness tests built on it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::disc::{self, prime_factors};
use crate::error::{OmvError, Result};
use crate::lattice::EvenLattice;
use crate::local::{local_factor, LocalFactor};
use crate::numeric::{
    bits_for_digits, dirichlet_l_bits, gamma_half_bits, ratio_to_f64, two_pi_pow_bits, zeta_bits,
    PrecReal, RealChar,
};

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 30;

/// A positive half-integer weight, stored as `2k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(u32);

impl Weight {
    pub fn from_twice(twice: u32) -> Self {
        Weight(twice)
    }

    /// `k = b/2 + 1`.
    pub fn from_b(b: u32) -> Self {
        Weight(b + 2)
    }

    /// `k = rank/2`.
    pub fn from_rank(rank: usize) -> Self {
        Weight(rank as u32)
    }

    pub fn twice(&self) -> u32 {
        self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0 % 2 == 0
    }

    pub fn floor(&self) -> u32 {
        self.0 / 2
    }

    /// `b = 2k − 2`.
    pub fn b(&self) -> Option<u32> {
        self.0.checked_sub(2)
    }

    pub fn to_f64(&self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.0), BigInt::from(2))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Weight {
    type Err = OmvError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || OmvError::Parse {
            pos: 0,
            msg: format!("'{s}' is not a half-integer weight"),
        };
        let s = s.trim();
        if let Some(num) = s.strip_suffix("/2") {
            return num.trim().parse().map(Weight).map_err(|_| bad());
        }
        if let Some(int) = s.strip_suffix(".5") {
            return int.parse::<u32>().map(|k| Weight(2 * k + 1)).map_err(|_| bad());
        }
        s.parse::<u32>().map(|k| Weight(2 * k)).map_err(|_| bad())
    }
}

/// Which character enters the L-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterConvention {
    /// `Δ = 4D` (even rank) and `Δ = D′` (odd rank) exactly as written.
    AsPrinted,
    /// `Δ = 4D` and `Δ = −D′`. Reproduces the known exact coefficients.
    #[default]
    FlipOddDiscriminant,
    /// `Δ = −4D` and `Δ = D′`.
    FlipEvenDiscriminant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// Discriminant of the character for a lattice of rank `twice` and determinant `det`.
///
/// Even rank: `D = (−1)^k det`, `Δ = 4D`. Odd rank: `D′ = 2(−1)^{k+1/2} det`, `Δ = ±D′`.
pub fn character_discriminant(det: &BigInt, k: Weight, conv: CharacterConvention) -> Result<i64> {
    let det = det
        .to_i64()
        .filter(|d| d.unsigned_abs() < (1 << 58))
        .ok_or_else(|| OmvError::SizeLimit("determinant too large for a character".into()))?;
    let t = k.twice() as i64;
    Ok(if k.is_integral() {
        let d = if (t / 2) % 2 == 0 { det } else { -det };
        match conv {
            CharacterConvention::FlipEvenDiscriminant => -4 * d,
            _ => 4 * d,
        }
    } else {
        let e = (t + 1) / 2;
        let d = 2 * if e % 2 == 0 { det } else { -det };
        match conv {
            CharacterConvention::FlipOddDiscriminant => -d,
            _ => d,
        }
    })
}

/// `c₁,₀` with its ingredients.
#[derive(Debug, Clone)]
pub struct CoefficientResult {
    pub weight: Weight,
    pub rank: usize,
    pub det: BigInt,
    /// `D = |det|`.
    pub discriminant: u64,
    pub level: u64,
    pub parity: Parity,
    pub convention: CharacterConvention,
    pub character: i64,
    /// `(2π)^k / (√D·Γ(k))`.
    pub archimedean: PrecReal,
    /// `1/L(k, χ)` (even) or `L(k−1/2, χ)/ζ(2k−1)` (odd).
    pub l_ratio: PrecReal,
    pub local_factors: Vec<LocalFactor>,
    pub local_product: BigRational,
    pub value: PrecReal,
}

/// `c₁,₀` of a lattice in normalized signature `(b, 2)`, `b > 2`.
pub fn c10_coefficient(lat: &EvenLattice, digits: u32) -> Result<CoefficientResult> {
    require_normalized(lat)?;
    c10_genus(lat, digits, CharacterConvention::default())
}

fn require_normalized(lat: &EvenLattice) -> Result<usize> {
    let sig = lat.signature();
    match sig.b() {
        Some(b) if b > 2 => Ok(b),
        _ => Err(OmvError::Signature {
            n_plus: sig.n_plus,
            n_minus: sig.n_minus,
            reason: "expected (b,2) with b > 2".into(),
        }),
    }
}

/// `c₁,₀` from rank, determinant and local data only; the signature is not inspected.
/// This is how surrogates stand in for lattices of the same genus.
pub fn c10_genus(lat: &EvenLattice, digits: u32, conv: CharacterConvention) -> Result<CoefficientResult> {
    let n = lat.rank();
    if n <= 4 {
        return Err(OmvError::Precondition(format!(
            "rank {n} gives weight ≤ 2; need rank ≥ 5"
        )));
    }
    let k = Weight::from_rank(n);
    let det = lat.determinant();
    let d = det
        .abs()
        .to_u64()
        .ok_or_else(|| OmvError::SizeLimit("determinant does not fit in 64 bits".into()))?;
    let level = disc::level(lat)?.n;
    let character = character_discriminant(&det, k, conv)?;

    let mut local_factors = Vec::new();
    let mut local_product = BigRational::one();
    for p in prime_factors(2 * level) {
        let f = local_factor(lat, p, k)?;
        local_product *= &f.normalized;
        local_factors.push(f);
    }
    if local_product.is_zero() {
        return Err(OmvError::Internal("a local factor vanished".into()));
    }

    let mut guard = 0;
    loop {
        let bits = bits_for_digits(digits) + guard;
        let t = k.twice();
        let sqrt_d = PrecReal::from_int(&BigInt::from(d), bits).sqrt();
        let archimedean = &two_pi_pow_bits(t, bits) / &(&sqrt_d * &gamma_half_bits(t, bits));
        let chi = RealChar::new(character)?;
        let l_ratio = if k.is_integral() {
            &PrecReal::from_i64(1, bits) / &dirichlet_l_bits(k.floor(), &chi, bits)
        } else {
            // k − 1/2 = (t−1)/2 and 2k − 1 = t − 1
            &dirichlet_l_bits((t - 1) / 2, &chi, bits) / &zeta_bits(t - 1, bits)
        };
        let value = -&(&archimedean * &l_ratio).mul_ratio(&local_product);
        let tol = 10f64.powi(-(digits as i32)) * ratio_to_f64(&value.midpoint()).abs().max(1.0);
        if value.error_bound() <= tol {
            return Ok(CoefficientResult {
                weight: k,
                rank: n,
                det,
                discriminant: d,
                level,
                parity: if k.is_integral() { Parity::Even } else { Parity::Odd },
                convention: conv,
                character,
                archimedean,
                l_ratio,
                local_factors,
                local_product,
                value,
            });
        }
        guard += 64;
        if guard > 512 {
            return Err(OmvError::PrecisionExhausted(format!(
                "c10 error {:.2e} above tolerance {tol:.2e}",
                value.error_bound()
            )));
        }
    }
}

/// `r(k) = (2π)^k / (Γ(k)·ζ(⌊k⌋))` with `k = b/2 + 1`.
pub fn r_of_k(b: u32, digits: u32) -> Result<PrecReal> {
    if b < 3 {
        return Err(OmvError::Precondition(format!("r(k) needs b ≥ 3, got {b}")));
    }
    Ok(r_of_k_bits(Weight::from_b(b), bits_for_digits(digits)))
}

fn r_of_k_bits(k: Weight, bits: u32) -> PrecReal {
    let t = k.twice();
    &two_pi_pow_bits(t, bits) / &(&gamma_half_bits(t, bits) * &zeta_bits(k.floor(), bits))
}

/// `C(N,k)`: product over `p | 2N`, choosing the one-plane or two-plane variant by
/// `u_count` and the parity of `b = 2k − 2`.
pub fn c_of_nk(n: u64, k: Weight, u_count: usize) -> BigRational {
    let two = u_count >= 2;
    let b_even = k.is_integral();
    let mut c = BigRational::one();
    for p in prime_factors(2 * n) {
        let p = BigInt::from(p);
        let pp = if two { &p * &p } else { p.clone() };
        // 1 − 1/p (or 1 − 1/p²)
        let mut f = BigRational::new(&pp - 1, pp.clone());
        if !b_even {
            // divided by 1 − p^{1−2k}
            let q = p.pow(k.twice() - 1);
            f *= BigRational::new(q.clone(), q - 1);
        }
        c *= f;
    }
    c
}

/// Outcome of the simplified bound `4b < r(k)/√D · C(N,k)`.
#[derive(Debug, Clone)]
pub struct BoundOutcome {
    pub r_k: PrecReal,
    pub c_nk: BigRational,
    pub rhs: PrecReal,
    pub four_b: u64,
    /// `None` when the ball straddles `4b`.
    pub holds: Option<bool>,
}

impl BoundOutcome {
    pub fn margin(&self) -> f64 {
        self.rhs.to_f64() - self.four_b as f64
    }

    /// `r(k)/√D`.
    pub fn archimedean_quotient(&self) -> PrecReal {
        self.rhs.mul_ratio(&self.c_nk.recip())
    }
}

/// Right-hand side of the simplified bound, without the applicability check.
pub fn bound_rhs(d: u64, n: u64, k: Weight, u_count: usize, digits: u32) -> Result<BoundOutcome> {
    if k.twice() < 5 {
        return Err(OmvError::Precondition(format!("weight {k} needs b ≥ 3")));
    }
    if d == 0 || n == 0 {
        return Err(OmvError::Precondition("D and N must be positive".into()));
    }
    let bits = bits_for_digits(digits);
    let r_k = r_of_k_bits(k, bits);
    let c_nk = c_of_nk(n, k, u_count);
    let sqrt_d = PrecReal::from_int(&BigInt::from(d), bits).sqrt();
    let rhs = (&r_k / &sqrt_d).mul_ratio(&c_nk);
    let four_b = 4 * k.b().unwrap() as u64;
    let holds = rhs
        .less_than(&BigRational::from_integer(BigInt::from(four_b)))
        .map(|below| !below);
    Ok(BoundOutcome {
        r_k,
        c_nk,
        rhs,
        four_b,
        holds,
    })
}

/// The simplified bound; needs at least one split hyperbolic plane.
pub fn bound_verdict(d: u64, n: u64, k: Weight, b: u32, u_count: usize, digits: u32) -> Result<BoundOutcome> {
    if u_count == 0 {
        return Err(OmvError::NotApplicable(
            "no hyperbolic plane is known to split off".into(),
        ));
    }
    if k != Weight::from_b(b) {
        return Err(OmvError::Precondition(format!("weight {k} does not match b = {b}")));
    }
    bound_rhs(d, n, k, u_count, digits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "UNIRULED_BOUND")]
    UniruledByBound,
    #[serde(rename = "UNIRULED_COEFFICIENT")]
    UniruledByCoefficient,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::UniruledByBound => "UNIRULED_BOUND",
            Verdict::UniruledByCoefficient => "UNIRULED_COEFFICIENT",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Everything entering both tests for one lattice.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub b: u32,
    pub rank: usize,
    pub det: BigInt,
    pub d: u64,
    pub n: u64,
    pub k: Weight,
    pub u_count: usize,
    /// The bound is only proved when `u_count ≥ 1`; it is computed regardless.
    pub bound: BoundOutcome,
    pub bound_applicable: bool,
    pub c10: CoefficientResult,
    /// `4b < |c₁,₀|`, decided with the error bound.
    pub coefficient_holds: Option<bool>,
    pub verdict: Verdict,
}

impl CriterionReport {
    pub fn four_b(&self) -> u64 {
        4 * self.b as u64
    }

    pub fn bound_holds(&self) -> Option<bool> {
        if self.bound_applicable {
            self.bound.holds
        } else {
            None
        }
    }

    pub fn coefficient_margin(&self) -> f64 {
        self.c10.value.to_f64().abs() - self.four_b() as f64
    }
}

/// Both tests for a lattice in normalized signature `(b, 2)`.
pub fn coefficient_verdict(lat: &EvenLattice, digits: u32) -> Result<CriterionReport> {
    require_normalized(lat)?;
    criterion_report(lat, lat.u_count(), digits)
}

/// Both tests from genus data, with `b = rank − 2`. Raises precision until every
/// comparison is decided.
pub fn criterion_report(lat: &EvenLattice, u_count: usize, digits: u32) -> Result<CriterionReport> {
    let mut digits = digits.max(10);
    for _ in 0..4 {
        let r = criterion_report_once(lat, u_count, digits)?;
        let bound_open = r.bound_applicable && r.bound.holds.is_none();
        if !bound_open && r.coefficient_holds.is_some() {
            return Ok(r);
        }
        digits *= 2;
    }
    Err(OmvError::PrecisionExhausted(format!(
        "comparisons still undecided at {digits} digits"
    )))
}

fn criterion_report_once(lat: &EvenLattice, u_count: usize, digits: u32) -> Result<CriterionReport> {
    let c10 = c10_genus(lat, digits, CharacterConvention::default())?;
    let k = c10.weight;
    let b = k.b().unwrap();
    let bound = bound_rhs(c10.discriminant, c10.level, k, u_count.max(1), digits)?;
    let four_b = BigRational::from_integer(BigInt::from(4 * b as u64));
    let coefficient_holds = c10.value.abs().less_than(&four_b).map(|below| !below);
    let applicable = u_count >= 1;
    let verdict = if applicable && bound.holds == Some(true) {
        Verdict::UniruledByBound
    } else if coefficient_holds == Some(true) {
        Verdict::UniruledByCoefficient
    } else {
        Verdict::Inconclusive
    };
    Ok(CriterionReport {
        b,
        rank: c10.rank,
        det: c10.det.clone(),
        d: c10.discriminant,
        n: c10.level,
        k,
        u_count,
        bound,
        bound_applicable: applicable,
        c10,
        coefficient_holds,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice;

    #[test]
    fn weight_text() {
        assert_eq!("17/2".parse::<Weight>().unwrap(), Weight::from_twice(17));
        assert_eq!("8.5".parse::<Weight>().unwrap(), Weight::from_twice(17));
        assert_eq!("8".parse::<Weight>().unwrap(), Weight::from_twice(16));
        assert_eq!(Weight::from_b(15).to_string(), "17/2");
    }

    #[test]
    fn c_of_nk_values() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(c_of_nk(4, Weight::from_twice(17), 2), r(16384, 21845));
        assert_eq!(c_of_nk(1, Weight::from_twice(8), 1), r(1, 2));
        assert_eq!(c_of_nk(1, Weight::from_twice(8), 2), r(3, 4));
    }

    #[test]
    fn r_of_k_exact_at_ten() {
        // (2π)^6 / (5!·π⁶/945) = 64·945/120 = 504
        let r = r_of_k(10, 30).unwrap();
        assert!(r.contains(&BigRational::from_integer(504.into())));
    }

    #[test]
    fn small_anchor() {
        let l = lattice("U^2 + A1(-13)").unwrap().normalize_b2().unwrap();
        let c = c10_coefficient(&l, 30).unwrap();
        let exact = BigRational::new((-264).into(), 17.into());
        assert!((c.value.midpoint() - &exact).abs() < BigRational::new(1.into(), BigInt::from(10).pow(25)));
        let rep = coefficient_verdict(&l, 30).unwrap();
        assert_eq!(rep.verdict, Verdict::UniruledByCoefficient);
    }

    #[test]
    fn bound_needs_a_plane() {
        assert!(matches!(
            bound_verdict(8, 4, Weight::from_twice(17), 15, 0, 30),
            Err(OmvError::NotApplicable(_))
        ));
    }
}
