//! Kronecker characters, Hurwitz and Riemann zeta, Dirichlet L-values and Γ at
//! half-integers, all as certified balls.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::prec::{bits_for_digits, PrecReal};
use crate::error::{OmvError, Result};

/// Kronecker symbol `(a | n)`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut k: i8 = 1;
    let mut n = n as i128;
    let a = a as i128;
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            k = -k;
        }
        n >>= v;
    }
    k * jacobi(a.rem_euclid(n), n)
}

/// Jacobi symbol for odd positive `n` and `0 ≤ a < n`.
fn jacobi(mut a: i128, mut n: i128) -> i8 {
    let mut k: i8 = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                k = -k;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        a %= n;
    }
    if n == 1 {
        k
    } else {
        0
    }
}

/// The real character `n ↦ (Δ | n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealChar {
    disc: i64,
}

impl RealChar {
    pub fn new(disc: i64) -> Result<Self> {
        if disc == 0 {
            return Err(OmvError::Precondition("character discriminant must be nonzero".into()));
        }
        Ok(RealChar { disc })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn modulus(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    /// A period of `n ↦ (Δ|n)` on positive integers.
    pub fn period(&self) -> u64 {
        if matches!(self.disc.rem_euclid(4), 0 | 1) {
            self.modulus()
        } else {
            4 * self.modulus()
        }
    }

    pub fn value(&self, n: i64) -> i8 {
        kronecker(self.disc, n)
    }
}

fn bernoulli_cache() -> &'static Mutex<Vec<BigRational>> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]))
}

/// Bernoulli numbers `B_0 … B_m` (with `B_1 = −1/2`).
pub fn bernoulli(m: usize) -> Vec<BigRational> {
    let mut cache = bernoulli_cache().lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() <= m {
        // Σ_{j=0}^{n} C(n+1, j) B_j = 0
        let n = cache.len();
        let mut s = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, b) in cache.iter().enumerate() {
            s += b * BigRational::from_integer(binom.clone());
            binom = binom * (n + 1 - j) / (j + 1);
        }
        let next = -s / BigRational::from_integer(BigInt::from(n + 1));
        cache.push(next);
    }
    cache[..=m].to_vec()
}

fn ratio_pow(x: &BigRational, e: u32) -> BigRational {
    BigRational::new(x.numer().pow(e), x.denom().pow(e))
}

/// `ζ(s, a)` for integer `s ≥ 2`, `0 < a ≤ 1`, by Euler–Maclaurin.
///
/// The first `n` terms are summed directly, then the tail
/// `x^{1−s}/(s−1) + x^{−s}/2 + Σ_j B_{2j}/(2j)!·(s)_{2j−1}·x^{−s−2j+1}` with `x = n + a`.
/// The correction terms alternate and eventually shrink; the truncation error is bounded
/// by twice the first omitted term.
pub fn hurwitz_zeta(s: u32, a: &BigRational, bits: u32) -> PrecReal {
    assert!(s >= 2, "hurwitz_zeta needs s ≥ 2");
    assert!(a.is_positive() && a <= &BigRational::one());
    let mut n = (bits / 10 + s / 2 + 8) as u64;
    loop {
        if let Some(v) = hurwitz_em(s, a, n, bits) {
            return v;
        }
        n *= 2;
    }
}

fn hurwitz_em(s: u32, a: &BigRational, n: u64, bits: u32) -> Option<PrecReal> {
    let mut sum = PrecReal::zero(bits);
    for i in 0..n {
        let x = BigRational::from_integer(BigInt::from(i)) + a;
        sum = &sum + &PrecReal::from_ratio(&ratio_pow(&x.recip(), s), bits);
    }
    let x = BigRational::from_integer(BigInt::from(n)) + a;
    let xinv = x.recip();
    let xs = ratio_pow(&xinv, s);
    let head = &x * &xs / BigRational::from_integer(BigInt::from(s - 1))
        + &xs / BigRational::from_integer(BigInt::from(2));
    sum = &sum + &PrecReal::from_ratio(&head, bits);

    let tol = BigRational::new(BigInt::one(), BigInt::one() << (bits + 2));
    let xinv2 = &xinv * &xinv;
    // term_j = B_{2j}/(2j)! · s(s+1)…(s+2j−2) · x^{−s−2j+1}
    let mut rising = BigRational::from_integer(BigInt::from(s)); // (s)_1
    let mut fact = BigRational::from_integer(BigInt::from(2)); // 2!
    let mut xpow = &xs * &xinv; // x^{−s−1}
    let mut prev: Option<BigRational> = None;
    for j in 1usize.. {
        let b = bernoulli(2 * j).pop().unwrap();
        let term = &b / &fact * &rising * &xpow;
        let mag = term.abs();
        if let Some(p) = &prev {
            if &mag > p {
                return None;
            }
        }
        if mag < tol {
            let mut out = sum;
            out.add_error(&(mag * BigRational::from_integer(BigInt::from(2))));
            return Some(out);
        }
        sum = &sum + &PrecReal::from_ratio(&term, bits);
        prev = Some(mag);
        let sj = BigInt::from(s) + 2 * j as i64;
        rising *= BigRational::from_integer((&sj - 1) * &sj);
        fact *= BigRational::from_integer(BigInt::from((2 * j + 1) * (2 * j + 2)));
        xpow *= &xinv2;
    }
    unreachable!()
}

/// `ζ(s)` for integer `s ≥ 2` to `digits` decimals.
pub fn zeta(s: u32, digits: u32) -> PrecReal {
    hurwitz_zeta(s, &BigRational::one(), bits_for_digits(digits))
}

pub(crate) fn zeta_bits(s: u32, bits: u32) -> PrecReal {
    hurwitz_zeta(s, &BigRational::one(), bits)
}

/// `L(s, χ) = m^{−s} Σ_{r=1}^{m} χ(r) ζ(s, r/m)` with `m` a period of `χ`.
pub fn dirichlet_l(s: u32, chi: &RealChar, digits: u32) -> PrecReal {
    dirichlet_l_bits(s, chi, bits_for_digits(digits))
}

pub(crate) fn dirichlet_l_bits(s: u32, chi: &RealChar, bits: u32) -> PrecReal {
    let m = chi.period();
    let mut sum = PrecReal::zero(bits);
    for r in 1..=m {
        let c = chi.value(r as i64);
        if c == 0 {
            continue;
        }
        let a = BigRational::new(BigInt::from(r), BigInt::from(m));
        let h = hurwitz_zeta(s, &a, bits);
        sum = if c > 0 { &sum + &h } else { &sum - &h };
    }
    sum.div_int(&BigInt::from(m).pow(s))
}

/// `Γ(k)` for `k = twice/2`: exact for integers, a rational multiple of `√π` otherwise.
pub fn gamma_half(twice: u32, digits: u32) -> PrecReal {
    gamma_half_bits(twice, bits_for_digits(digits))
}

/// The rational `c` with `Γ(twice/2) = c` (even `twice`) or `c·√π` (odd `twice`).
pub fn gamma_half_rational(twice: u32) -> BigRational {
    assert!(twice >= 1);
    if twice % 2 == 0 {
        let k = twice / 2;
        BigRational::from_integer((1..k).fold(BigInt::one(), |acc, i| acc * i))
    } else {
        // Γ(n + 1/2) = (2n−1)!!/2^n · √π
        let n = (twice - 1) / 2;
        let dfact = (0..n).fold(BigInt::one(), |acc, i| acc * (2 * i + 1));
        BigRational::new(dfact, BigInt::one() << n)
    }
}

pub(crate) fn gamma_half_bits(twice: u32, bits: u32) -> PrecReal {
    let c = gamma_half_rational(twice);
    if twice % 2 == 0 {
        PrecReal::from_ratio(&c, bits)
    } else {
        PrecReal::pi(bits).sqrt().mul_ratio(&c)
    }
}

/// `(2π)^{twice/2}`.
pub(crate) fn two_pi_pow_bits(twice: u32, bits: u32) -> PrecReal {
    let two_pi = PrecReal::pi(bits).mul_int(&BigInt::from(2));
    let whole = two_pi.powi(twice / 2);
    if twice % 2 == 0 {
        whole
    } else {
        &whole * &two_pi.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_small() {
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 5), 1);
        for d in [-52, -4, 1, 5, 12, 13] {
            assert_eq!(kronecker(d, 1), 1);
        }
        let table: Vec<i8> = (1..=12).map(|n| kronecker(12, n)).collect();
        assert_eq!(table, vec![1, 0, 0, 0, -1, 0, -1, 0, 0, 0, 1, 0]);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(-1, -1), -1);
        assert_eq!(kronecker(3, -1), 1);
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(12);
        assert_eq!(b[1], BigRational::new((-1).into(), 2.into()));
        assert_eq!(b[2], BigRational::new(1.into(), 6.into()));
        assert_eq!(b[12], BigRational::new((-691).into(), 2730.into()));
        assert!(b[11].is_zero());
    }

    #[test]
    fn zeta_closed_forms() {
        let z2 = zeta(2, 30);
        assert!(z2.to_decimal(15).starts_with("1.644934066848226"));
        let bits = bits_for_digits(30);
        let pi6 = PrecReal::pi(bits).powi(6).div_int(&BigInt::from(945));
        let z6 = zeta_bits(6, bits);
        assert!((&z6 - &pi6).abs().upper() < BigRational::new(1.into(), BigInt::from(10).pow(25)));
        assert!(z6.error_bound() < 1e-30);
    }

    #[test]
    fn l_minus_four_at_three() {
        let bits = bits_for_digits(30);
        let l = dirichlet_l_bits(3, &RealChar::new(-4).unwrap(), bits);
        let closed = PrecReal::pi(bits).powi(3).div_int(&BigInt::from(32));
        assert!(l.overlaps(&closed));
        assert!(l.to_decimal(15).starts_with("0.968946146259369"));
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_half(8, 30).to_decimal(10), "6.0000000000");
        assert!(gamma_half(5, 30).to_decimal(15).starts_with("1.329340388179137"));
        // Γ(19/2) = 17!!/2^9 · √π, checked against the recursion Γ(x+1) = xΓ(x)
        let mut g = BigRational::one();
        for i in 0..9 {
            g *= BigRational::new(BigInt::from(2 * i + 1), BigInt::from(2));
        }
        assert_eq!(gamma_half_rational(19), g);
    }
}
