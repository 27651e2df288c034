//! Fixed-point ball arithmetic: a midpoint and a radius, both integers in units
//! of `2^-bits`. Every operation rounds the midpoint and widens the radius so the
//! true value stays inside.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecReal {
    mid: BigInt,
    rad: BigInt,
    bits: u32,
}

/// Extra binary digits carried beyond the requested decimal precision.
pub const GUARD_BITS: u32 = 64;

/// Working bits for `digits` significant decimals plus guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// `⌈x / 2^s⌉` for nonnegative `x`.
fn shr_ceil(x: &BigInt, s: u32) -> BigInt {
    (x + pow2(s) - 1u32) >> s
}

impl PrecReal {
    pub fn zero(bits: u32) -> Self {
        PrecReal {
            mid: BigInt::zero(),
            rad: BigInt::zero(),
            bits,
        }
    }

    pub fn from_int(x: &BigInt, bits: u32) -> Self {
        PrecReal {
            mid: x << bits,
            rad: BigInt::zero(),
            bits,
        }
    }

    pub fn from_i64(x: i64, bits: u32) -> Self {
        Self::from_int(&BigInt::from(x), bits)
    }

    pub fn from_ratio(x: &BigRational, bits: u32) -> Self {
        let num = x.numer() << bits;
        let (q, r) = num.div_mod_floor(x.denom());
        PrecReal {
            mid: q,
            rad: if r.is_zero() { BigInt::zero() } else { BigInt::one() },
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Widen by an exact nonnegative error.
    pub fn add_error(&mut self, err: &BigRational) {
        let e = (err.abs() * BigRational::from_integer(pow2(self.bits))).ceil().to_integer();
        self.rad += e;
    }

    pub fn midpoint(&self) -> BigRational {
        BigRational::new(self.mid.clone(), pow2(self.bits))
    }

    pub fn radius(&self) -> BigRational {
        BigRational::new(self.rad.clone(), pow2(self.bits))
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, pow2(self.bits))
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, pow2(self.bits))
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.midpoint())
    }

    /// Upper bound on the absolute error, rounded up to an `f64`.
    pub fn error_bound(&self) -> f64 {
        let r = ratio_to_f64(&self.radius());
        if r == 0.0 {
            0.0
        } else {
            r * (1.0 + 1e-12)
        }
    }

    pub fn is_positive(&self) -> bool {
        self.mid > self.rad
    }

    pub fn is_negative(&self) -> bool {
        -&self.mid > self.rad
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    pub fn overlaps(&self, other: &PrecReal) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// `Some(true)` when certainly `self < x`, `Some(false)` when certainly `self > x`.
    pub fn less_than(&self, x: &BigRational) -> Option<bool> {
        if &self.upper() < x {
            Some(true)
        } else if &self.lower() > x {
            Some(false)
        } else {
            None
        }
    }

    pub fn abs(&self) -> PrecReal {
        PrecReal {
            mid: self.mid.abs(),
            rad: self.rad.clone(),
            bits: self.bits,
        }
    }

    fn aligned(&self, other: &PrecReal) {
        assert_eq!(self.bits, other.bits, "mixing precisions");
    }

    pub fn mul_int(&self, k: &BigInt) -> PrecReal {
        PrecReal {
            mid: &self.mid * k,
            rad: &self.rad * k.abs(),
            bits: self.bits,
        }
    }

    pub fn div_int(&self, k: &BigInt) -> PrecReal {
        assert!(!k.is_zero(), "division by zero");
        let (q, r) = self.mid.div_mod_floor(k);
        let ka = k.abs();
        PrecReal {
            mid: q,
            rad: (&self.rad + &ka - 1u32) / &ka + if r.is_zero() { 0u32 } else { 1u32 },
            bits: self.bits,
        }
    }

    pub fn mul_ratio(&self, x: &BigRational) -> PrecReal {
        self.mul_int(x.numer()).div_int(x.denom())
    }

    pub fn powi(&self, e: u32) -> PrecReal {
        let mut result = PrecReal::from_i64(1, self.bits);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Square root of a ball whose lower end is positive.
    pub fn sqrt(&self) -> PrecReal {
        assert!(self.is_positive(), "square root of a ball touching 0");
        let scale = |x: &BigInt| -> BigInt { (x << self.bits).sqrt() };
        let mid = scale(&self.mid);
        let low = scale(&(&self.mid - &self.rad));
        // |√x − √m| ≤ r / (√(m−r) + √m), in units after scaling by 2^bits
        let den = &low + &mid;
        let num = &self.rad << self.bits;
        let rad = (&num + &den - 1u32) / &den + 1u32;
        PrecReal {
            mid,
            rad,
            bits: self.bits,
        }
    }

    pub fn pi(bits: u32) -> PrecReal {
        let work = bits + 32;
        let (a, ea) = atan_inv(5, work);
        let (b, eb) = atan_inv(239, work);
        let mid = a * 16 - b * 4;
        let err = ea * 16 + eb * 4;
        PrecReal {
            mid: &mid >> 32,
            rad: shr_ceil(&BigInt::from(err), 32) + 1u32,
            bits,
        }
    }

    /// Decimal string of the midpoint with `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        ratio_to_decimal(&self.midpoint(), digits)
    }
}

/// `atan(1/x)·2^prec` by its Taylor series, with an error count in units.
fn atan_inv(x: u32, prec: u32) -> (BigInt, u64) {
    let x2 = BigInt::from(x) * x;
    let mut term = pow2(prec) / x;
    let mut sum = term.clone();
    let mut k: u64 = 1;
    let mut errors: u64 = 2;
    loop {
        term /= &x2;
        if term.is_zero() {
            break;
        }
        let t = &term / (2 * k + 1);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
        errors += 2;
    }
    (sum, errors)
}

pub fn ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Round half to even at `digits` fractional places.
pub fn ratio_to_decimal(x: &BigRational, digits: u32) -> String {
    let scaled = x * BigRational::from_integer(BigInt::from(10).pow(digits));
    let v = round_half_even(&scaled);
    let neg = v.sign() == Sign::Minus;
    let s = v.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits as usize + 1);
    let (int, frac) = s.split_at(s.len() - digits as usize);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

pub fn round_half_even(x: &BigRational) -> BigInt {
    let fl = x.floor().to_integer();
    let frac = x - BigRational::from_integer(fl.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if frac > half || (frac == half && fl.is_odd()) {
        fl + 1
    } else {
        fl
    }
}

impl Add for &PrecReal {
    type Output = PrecReal;
    fn add(self, o: &PrecReal) -> PrecReal {
        self.aligned(o);
        PrecReal {
            mid: &self.mid + &o.mid,
            rad: &self.rad + &o.rad,
            bits: self.bits,
        }
    }
}

impl Sub for &PrecReal {
    type Output = PrecReal;
    fn sub(self, o: &PrecReal) -> PrecReal {
        self.aligned(o);
        PrecReal {
            mid: &self.mid - &o.mid,
            rad: &self.rad + &o.rad,
            bits: self.bits,
        }
    }
}

impl Neg for &PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        PrecReal {
            mid: -&self.mid,
            rad: self.rad.clone(),
            bits: self.bits,
        }
    }
}

impl Mul for &PrecReal {
    type Output = PrecReal;
    fn mul(self, o: &PrecReal) -> PrecReal {
        self.aligned(o);
        let b = self.bits;
        // (m1 ± r1)(m2 ± r2) ⊂ m1m2 ± (|m1|r2 + |m2|r1 + r1r2)
        let prod = &self.mid * &o.mid;
        let mid = &prod >> b;
        let err = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        PrecReal {
            mid,
            rad: shr_ceil(&err, b) + 1u32,
            bits: b,
        }
    }
}

impl Div for &PrecReal {
    type Output = PrecReal;
    /// Panics if the divisor ball contains zero.
    fn div(self, o: &PrecReal) -> PrecReal {
        self.aligned(o);
        assert!(
            o.is_positive() || o.is_negative(),
            "division by a ball containing 0"
        );
        let b = self.bits;
        let mid = (&self.mid << b).div_floor(&o.mid);
        // |x/y − m1/m2| ≤ (r1|m2| + |m1|r2) / (|m2|(|m2| − r2))
        let m2 = o.mid.abs();
        let num = (&self.rad * &m2 + self.mid.abs() * &o.rad) << b;
        let den = &m2 * (&m2 - &o.rad);
        PrecReal {
            mid,
            rad: (&num + &den - 1u32) / &den + 1u32,
            bits: b,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PrecReal {
            type Output = PrecReal;
            fn $m(self, o: PrecReal) -> PrecReal {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Display for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.bits.saturating_sub(GUARD_BITS)) as f64 / std::f64::consts::LOG2_10) as u32;
        write!(f, "{} ± {:.1e}", self.to_decimal(digits.clamp(3, 40)), self.error_bound())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = PrecReal::pi(200);
        assert!(p.to_decimal(45).starts_with("3.1415926535897932384626433832795028841971"));
        assert!(p.error_bound() < 1e-55);
    }

    #[test]
    fn sqrt_two() {
        let two = PrecReal::from_i64(2, 160);
        let r = two.sqrt();
        assert!(r.to_decimal(40).starts_with("1.414213562373095048801688724209"));
        let sq = &r * &r;
        assert!(sq.contains(&BigRational::from_integer(2.into())));
    }

    #[test]
    fn division_encloses() {
        let one = PrecReal::from_i64(1, 100);
        let three = PrecReal::from_i64(3, 100);
        let t = &one / &three;
        assert!(t.contains(&BigRational::new(1.into(), 3.into())));
        let back = &t * &three;
        assert!(back.contains(&BigRational::from_integer(1.into())));
    }

    #[test]
    fn rounding() {
        let r = |n: i64, d: i64| ratio_to_decimal(&BigRational::new(n.into(), d.into()), 3);
        assert_eq!(r(45254834, 1000000), "45.255");
        assert_eq!(r(10005, 10000), "1.000");
        assert_eq!(r(10015, 10000), "1.002");
        assert_eq!(r(-1, 3), "-0.333");
        assert_eq!(r(504, 1), "504.000");
    }
}
