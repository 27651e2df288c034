//! Discriminant forms `L∨/L` with their finite quadratic form.
//!
//! Values are stored as integer numerators over the level `N`: a generator's norm
//! `qq = t/N` lives in `ℚ/2ℤ` (so `t` is kept mod `2N`), the bilinear form `b = t/N`
//! lives in `ℚ/ℤ` (`t` mod `N`), and `q = qq/2`.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{OmvError, Result};
use crate::lattice::EvenLattice;
use crate::linalg;

/// Largest group order `iso_check` accepts.
pub const ISO_CHECK_LIMIT: u64 = 10_000;
/// Largest group order `milgram_signature` accepts.
pub const MILGRAM_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantForm {
    invariant_factors: Vec<u64>,
    /// Coordinates of generators in `L ⊗ ℚ` (empty when built from values).
    generators: Vec<Vec<BigRational>>,
    level: u64,
    gen_qq: Vec<u64>,
    gen_b: Vec<Vec<u64>>,
}

/// Smallest `N` with `N·q` integral on `L∨`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelResult {
    pub n: u64,
}

/// Level from the inverse Gram matrix.
///
/// The dual basis has Gram `G⁻¹`, so for `x = Σ cᵢ eᵢ*` we get
/// `q(x) = Σ cᵢ² (G⁻¹)ᵢᵢ/2 + Σ_{i<j} cᵢcⱼ (G⁻¹)ᵢⱼ`. Hence `N·q` is integral on `L∨`
/// exactly when `N·G⁻¹` is integral with even diagonal.
pub fn level(lat: &EvenLattice) -> Result<LevelResult> {
    let inv = linalg::inverse(lat.gram()).ok_or(OmvError::Degenerate)?;
    let mut n = BigInt::one();
    for (i, row) in inv.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let v = if i == j {
                x / BigRational::from_integer(BigInt::from(2))
            } else {
                x.clone()
            };
            n = n.lcm(v.denom());
        }
    }
    let n = n
        .to_u64()
        .ok_or_else(|| OmvError::SizeLimit("level does not fit in 64 bits".into()))?;
    Ok(LevelResult { n })
}

/// Discriminant form via the Smith normal form of the Gram matrix.
///
/// With `U·G·V = diag(d)`, the vectors `gᵢ = V·eᵢ/dᵢ` generate `L∨/L` and
/// `⟨gᵢ,gⱼ⟩ = (VᵀGV)ᵢⱼ/(dᵢdⱼ)`.
pub fn discriminant_form(lat: &EvenLattice) -> Result<DiscriminantForm> {
    let g = lat.gram();
    let n = lat.rank();
    let snf = linalg::smith_normal_form(g);
    if snf.diagonal.len() < n {
        return Err(OmvError::Degenerate);
    }
    let idx: Vec<usize> = (0..n).filter(|&i| !snf.diagonal[i].is_one()).collect();
    let mut factors = Vec::with_capacity(idx.len());
    for &i in &idx {
        factors.push(
            snf.diagonal[i]
                .to_u64()
                .ok_or_else(|| OmvError::SizeLimit("invariant factor too large".into()))?,
        );
    }
    let v = &snf.right;
    let col = |i: usize| -> Vec<BigInt> { (0..n).map(|r| v[r][i].clone()).collect() };
    let pair = |x: &[BigInt], y: &[BigInt]| -> BigInt {
        let mut s = BigInt::zero();
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                s += &x[a] * &g[a][b] * &y[b];
            }
        }
        s
    };
    let cols: Vec<Vec<BigInt>> = idx.iter().map(|&i| col(i)).collect();
    let m = idx.len();
    let mut gram_q = vec![vec![BigRational::zero(); m]; m];
    for i in 0..m {
        for j in 0..=i {
            let num = pair(&cols[i], &cols[j]);
            let den = BigInt::from(factors[i]) * BigInt::from(factors[j]);
            let r = BigRational::new(num, den);
            gram_q[i][j] = r.clone();
            gram_q[j][i] = r;
        }
    }
    let generators = (0..m)
        .map(|i| {
            cols[i]
                .iter()
                .map(|c| reduce_mod1(&BigRational::new(c.clone(), BigInt::from(factors[i]))))
                .collect()
        })
        .collect();
    let mut df = DiscriminantForm::from_rational_gram(factors, &gram_q)?;
    df.generators = generators;
    let lv = level(lat)?;
    if lv.n != df.level {
        return Err(OmvError::Internal(format!(
            "level {} from the inverse Gram disagrees with {} from the form",
            lv.n, df.level
        )));
    }
    Ok(df)
}

fn reduce_mod1(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(x.floor().to_integer())
}

fn frac_mod(x: &BigRational, modulus: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(modulus));
    let q = (x / &m).floor();
    x - q * m
}

impl DiscriminantForm {
    /// Form on `⊕ ℤ/dᵢ` from generator values: diagonal entries are `qq(gᵢ)` mod 2,
    /// off-diagonal entries are `b(gᵢ,gⱼ)` mod 1.
    pub fn from_values(invariant_factors: Vec<u64>, values: &[Vec<Rational64>]) -> Result<Self> {
        let big: Vec<Vec<BigRational>> = values
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom())))
                    .collect()
            })
            .collect();
        Self::from_rational_gram(invariant_factors, &big)
    }

    fn from_rational_gram(invariant_factors: Vec<u64>, gram: &[Vec<BigRational>]) -> Result<Self> {
        let m = invariant_factors.len();
        if gram.len() != m || gram.iter().any(|r| r.len() != m) {
            return Err(OmvError::InvalidForm("value table has the wrong shape".into()));
        }
        if invariant_factors.iter().any(|&d| d < 2) {
            return Err(OmvError::InvalidForm("invariant factors must exceed 1".into()));
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let mut level = BigInt::one();
        for i in 0..m {
            for j in 0..m {
                let v = if i == j { &gram[i][i] / &two } else { gram[i][j].clone() };
                level = level.lcm(v.denom());
            }
        }
        let level = level
            .to_u64()
            .ok_or_else(|| OmvError::SizeLimit("level does not fit in 64 bits".into()))?;
        let nb = BigRational::from_integer(BigInt::from(level));
        let numer = |x: BigRational, modulus: u64| -> Result<u64> {
            let t = x * &nb;
            if !t.is_integer() {
                return Err(OmvError::Internal("value not integral at the level".into()));
            }
            Ok(t.to_integer().mod_floor(&BigInt::from(modulus)).to_u64().unwrap())
        };
        let mut gen_qq = Vec::with_capacity(m);
        let mut gen_b = vec![vec![0u64; m]; m];
        for i in 0..m {
            gen_qq.push(numer(frac_mod(&gram[i][i], 2), 2 * level)?);
            for j in 0..m {
                gen_b[i][j] = if i == j {
                    gen_qq[i] % level
                } else {
                    numer(frac_mod(&gram[i][j], 1), level)?
                };
            }
        }
        if (0..m).any(|i| (0..i).any(|j| gen_b[i][j] != gen_b[j][i])) {
            return Err(OmvError::InvalidForm("bilinear table is not symmetric".into()));
        }
        let df = DiscriminantForm {
            invariant_factors,
            generators: Vec::new(),
            level,
            gen_qq,
            gen_b,
        };
        // dᵢ·gᵢ = 0 forces dᵢ·b(gᵢ,·) ≡ 0 and dᵢ²·qq(gᵢ) ≡ 0
        for i in 0..m {
            let d = df.invariant_factors[i] as u128;
            let l = level as u128;
            if (d * d * df.gen_qq[i] as u128) % (2 * l) != 0
                || (0..m).any(|j| (d * df.gen_b[i][j] as u128) % l != 0)
            {
                return Err(OmvError::InvalidForm(format!(
                    "values of generator {i} are incompatible with its order {}",
                    df.invariant_factors[i]
                )));
            }
        }
        Ok(df)
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    /// Group order `D`.
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// `qq` numerator over `N`, in `0..2N`.
    pub fn qq_numer(&self, x: &[u64]) -> u64 {
        let n2 = 2 * self.level as u128;
        let m = self.invariant_factors.len();
        let mut s: u128 = 0;
        for i in 0..m {
            let xi = x[i] as u128;
            if xi == 0 {
                continue;
            }
            s = (s + xi * xi % n2 * self.gen_qq[i] as u128) % n2;
            for j in i + 1..m {
                s = (s + 2 * (xi * x[j] as u128 % n2) * self.gen_b[i][j] as u128) % n2;
            }
        }
        s as u64
    }

    /// `b` numerator over `N`, in `0..N`.
    pub fn b_numer(&self, x: &[u64], y: &[u64]) -> u64 {
        let l = self.level as u128;
        let m = self.invariant_factors.len();
        let mut s: u128 = 0;
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in 0..m {
                s = (s + (x[i] as u128 * y[j] as u128 % l) * self.gen_b[i][j] as u128) % l;
            }
        }
        s as u64
    }

    /// `⟨x,x⟩ ∈ ℚ/2ℤ`, reduced into `[0,2)`.
    pub fn qq_value(&self, x: &[u64]) -> Rational64 {
        Rational64::new(self.qq_numer(x) as i64, self.level as i64)
    }

    /// `q(x) = ⟨x,x⟩/2 ∈ ℚ/ℤ`, reduced into `[0,1)`.
    pub fn q_value(&self, x: &[u64]) -> Rational64 {
        Rational64::new(self.qq_numer(x) as i64, 2 * self.level as i64)
    }

    /// `⟨x,y⟩ ∈ ℚ/ℤ`, reduced into `[0,1)`.
    pub fn b_value(&self, x: &[u64], y: &[u64]) -> Rational64 {
        Rational64::new(self.b_numer(x, y) as i64, self.level as i64)
    }

    /// Every element as a coefficient vector, in mixed-radix order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let d = &self.invariant_factors;
        let total = self.order() as usize;
        let mut out = Vec::with_capacity(total);
        let mut x = vec![0u64; d.len()];
        for _ in 0..total {
            out.push(x.clone());
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += 1;
                if *xi < d[i] {
                    break;
                }
                *xi = 0;
            }
        }
        out
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.invariant_factors)
            .fold(1u64, |acc, (&xi, &d)| acc.lcm(&(d / xi.gcd(&d))))
    }

    /// Same group with every value negated.
    pub fn flip(&self) -> DiscriminantForm {
        let l = self.level;
        DiscriminantForm {
            invariant_factors: self.invariant_factors.clone(),
            generators: self.generators.clone(),
            level: l,
            gen_qq: self.gen_qq.iter().map(|&t| (2 * l - t) % (2 * l)).collect(),
            gen_b: self
                .gen_b
                .iter()
                .map(|r| r.iter().map(|&t| (l - t) % l).collect())
                .collect(),
        }
    }

    /// Generator norms as reduced fractions in `[0,2)`.
    pub fn generator_qq(&self) -> Vec<Rational64> {
        self.gen_qq
            .iter()
            .map(|&t| Rational64::new(t as i64, self.level as i64))
            .collect()
    }

    pub fn to_json(&self) -> DiscriminantFormJson {
        let m = self.invariant_factors.len();
        DiscriminantFormJson {
            invariant_factors: self.invariant_factors.clone(),
            level: self.level,
            generator_qq: self.generator_qq().iter().map(|r| r.to_string()).collect(),
            generator_b: (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| Rational64::new(self.gen_b[i][j] as i64, self.level as i64).to_string())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(j: &DiscriminantFormJson) -> Result<Self> {
        let parse = |s: &str| -> Result<Rational64> {
            s.parse::<Rational64>()
                .map_err(|_| OmvError::InvalidForm(format!("bad fraction '{s}'")))
        };
        let m = j.invariant_factors.len();
        let mut table = vec![vec![Rational64::zero(); m]; m];
        for i in 0..m {
            for k in 0..m {
                table[i][k] = if i == k {
                    parse(&j.generator_qq[i])?
                } else {
                    parse(&j.generator_b[i][k])?
                };
            }
        }
        Self::from_values(j.invariant_factors.clone(), &table)
    }
}

/// Serialized form: invariant factors with generator norms and pairings as fractions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantFormJson {
    pub invariant_factors: Vec<u64>,
    pub level: u64,
    pub generator_qq: Vec<String>,
    pub generator_b: Vec<Vec<String>>,
}

/// Is there a group isomorphism carrying `qq` of `a` to `qq` of `b`?
pub fn iso_check(a: &DiscriminantForm, b: &DiscriminantForm) -> Result<bool> {
    for df in [a, b] {
        if df.order() > ISO_CHECK_LIMIT {
            return Err(OmvError::SizeLimit(format!(
                "iso_check needs group order ≤ {ISO_CHECK_LIMIT}, got {}",
                df.order()
            )));
        }
    }
    if a.invariant_factors != b.invariant_factors || a.level != b.level {
        return Ok(false);
    }
    if a.is_trivial() {
        return Ok(true);
    }
    let elems = b.elements();
    let mut buckets: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (i, x) in elems.iter().enumerate() {
        buckets
            .entry((b.element_order(x), b.qq_numer(x)))
            .or_default()
            .push(i);
    }
    let m = a.invariant_factors.len();
    let mut candidates = Vec::with_capacity(m);
    for i in 0..m {
        let key = (a.invariant_factors[i], a.gen_qq[i]);
        match buckets.get(&key) {
            Some(v) => candidates.push(v.clone()),
            None => return Ok(false),
        }
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    Ok(backtrack(a, b, &elems, &candidates, &mut chosen))
}

fn backtrack(
    a: &DiscriminantForm,
    b: &DiscriminantForm,
    elems: &[Vec<u64>],
    candidates: &[Vec<usize>],
    chosen: &mut Vec<usize>,
) -> bool {
    let i = chosen.len();
    if i == candidates.len() {
        return is_injective(a, b, elems, chosen);
    }
    for &c in &candidates[i] {
        let ok = chosen
            .iter()
            .enumerate()
            .all(|(j, &h)| b.b_numer(&elems[c], &elems[h]) == a.gen_b[i][j]);
        if ok {
            chosen.push(c);
            if backtrack(a, b, elems, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn is_injective(a: &DiscriminantForm, b: &DiscriminantForm, elems: &[Vec<u64>], chosen: &[usize]) -> bool {
    let mut seen = std::collections::HashSet::new();
    for x in a.elements() {
        let mut img = vec![0u64; b.invariant_factors.len()];
        for (i, &xi) in x.iter().enumerate() {
            for (k, v) in img.iter_mut().enumerate() {
                *v = (*v + xi * elems[chosen[i]][k]) % b.invariant_factors[k];
            }
        }
        if !seen.insert(img) {
            return false;
        }
    }
    true
}

/// `s ∈ ℤ/8` with `Σ_x exp(πi·qq(x)) = √D·exp(πi·s/4)`.
///
/// Each p-primary Gauss sum is evaluated exactly in `ℤ[ζ_M]`; its square pins `s`
/// modulo 4 and a floating-point evaluation of the real part fixes the sign.
pub fn milgram_signature(df: &DiscriminantForm) -> Result<u8> {
    let d = df.order();
    if d > MILGRAM_LIMIT {
        return Err(OmvError::SizeLimit(format!(
            "Gauss sum needs group order ≤ {MILGRAM_LIMIT}, got {d}"
        )));
    }
    let mut total = 0u64;
    for p in prime_factors(d) {
        total += primary_gauss_exponent(df, p)? as u64;
    }
    Ok((total % 8) as u8)
}

fn primary_gauss_exponent(df: &DiscriminantForm, p: u64) -> Result<u8> {
    // generators of the p-part and their values
    let mut orders = Vec::new();
    let mut scale = Vec::new();
    let mut src = Vec::new();
    for (i, &d) in df.invariant_factors.iter().enumerate() {
        let mut pe = 1u64;
        while d % (pe * p) == 0 {
            pe *= p;
        }
        if pe > 1 {
            orders.push(pe);
            scale.push(d / pe);
            src.push(i);
        }
    }
    let n2 = 2 * df.level as u128;
    let m = orders.len();
    let qq: Vec<u128> = (0..m)
        .map(|a| (scale[a] as u128 * scale[a] as u128 % n2) * df.gen_qq[src[a]] as u128 % n2)
        .collect();
    let bb: Vec<Vec<u128>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|c| (scale[a] as u128 * scale[c] as u128 % n2) * df.gen_b[src[a]][src[c]] as u128 % n2)
                .collect()
        })
        .collect();
    let size: u64 = orders.iter().product();
    // q takes values in (1/L)ℤ/ℤ with L the p-part of 2N
    let mut lp = 1u64;
    while (2 * df.level) % (lp * p) == 0 {
        lp *= p;
    }
    let mut counts = vec![0i128; lp as usize];
    let mut x = vec![0u64; m];
    for _ in 0..size {
        let mut t: u128 = 0;
        for a in 0..m {
            let xa = x[a] as u128;
            if xa == 0 {
                continue;
            }
            t = (t + xa * xa % n2 * qq[a]) % n2;
            for c in a + 1..m {
                t = (t + 2 * (xa * x[c] as u128 % n2) * bb[a][c]) % n2;
            }
        }
        // q = t/(2N) = j/L
        let scaled = t * lp as u128;
        if scaled % n2 != 0 {
            return Err(OmvError::Internal("q-value outside the primary denominator".into()));
        }
        counts[(scaled / n2) as usize] += 1;
        for (a, xa) in x.iter_mut().enumerate() {
            *xa += 1;
            if *xa < orders[a] {
                break;
            }
            *xa = 0;
        }
    }
    let big_m = lp.lcm(&4);
    if big_m > 8192 {
        return Err(OmvError::SizeLimit(format!(
            "cyclotomic order {big_m} too large for exact Gauss sums"
        )));
    }
    let step = (big_m / lp) as usize;
    let mut g = vec![0i128; big_m as usize];
    for (j, &c) in counts.iter().enumerate() {
        g[j * step] += c;
    }
    let phi = cyclotomic(big_m);
    let g2 = reduce_cyclotomic(&square_mod_xm(&g), &phi);
    let mut s4 = None;
    for s in 0..4u64 {
        let mut t = vec![0i128; big_m as usize];
        t[(s * big_m / 4) as usize] = size as i128;
        if reduce_cyclotomic(&t, &phi) == g2 {
            s4 = Some(s as u8);
            break;
        }
    }
    let s = s4.ok_or_else(|| {
        OmvError::InvalidForm(format!(
            "Gauss sum of the {p}-part does not have modulus √{size}"
        ))
    })?;
    let re: f64 = counts
        .iter()
        .enumerate()
        .map(|(j, &c)| c as f64 * (2.0 * PI * (j as f64 / lp as f64 - s as f64 / 8.0)).cos())
        .sum();
    let root = (size as f64).sqrt();
    if (re.abs() - root).abs() > 1e-6 * root.max(1.0) {
        return Err(OmvError::Internal("Gauss sum sign evaluation is inconsistent".into()));
    }
    Ok(if re > 0.0 { s } else { s + 4 })
}

fn square_mod_xm(g: &[i128]) -> Vec<i128> {
    let m = g.len();
    let nz: Vec<(usize, i128)> = g.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
    let mut out = vec![0i128; m];
    for &(i, a) in &nz {
        for &(j, b) in &nz {
            out[(i + j) % m] += a * b;
        }
    }
    out
}

/// Φ_m for `m = 2^a` or `m = 4·p^a` (p odd), low degree first.
fn cyclotomic(m: u64) -> Vec<i128> {
    if m.is_power_of_two() {
        let mut v = vec![0i128; (m / 2) as usize + 1];
        v[0] = 1;
        v[(m / 2) as usize] = 1;
        return v;
    }
    // Φ_{4q}(x) = Φ_q(−x²) with q = p^a
    let q = m / 4;
    let p = prime_factors(q)[0];
    let stride = (2 * q / p) as usize;
    let mut v = vec![0i128; stride * (p as usize - 1) + 1];
    for j in 0..p as usize {
        v[j * stride] = if j % 2 == 0 { 1 } else { -1 };
    }
    v
}

fn reduce_cyclotomic(a: &[i128], phi: &[i128]) -> Vec<i128> {
    let deg = phi.len() - 1;
    let mut r = a.to_vec();
    for i in (deg..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        for (t, &f) in phi.iter().enumerate() {
            if f != 0 {
                r[i - deg + t] -= c * f;
            }
        }
    }
    r.truncate(deg);
    r
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice;

    fn form(s: &str) -> DiscriminantForm {
        discriminant_form(&lattice(s).unwrap()).unwrap()
    }

    #[test]
    fn unimodular_is_trivial() {
        let f = form("E8");
        assert!(f.is_trivial());
        assert_eq!(f.order(), 1);
        assert_eq!(f.level(), 1);
        assert_eq!(milgram_signature(&f).unwrap(), 0);
    }

    #[test]
    fn cyclic_examples() {
        let f = form("U^2 + A1(-13)");
        assert_eq!(f.invariant_factors(), &[26]);
        assert_eq!(f.level(), 52);
        assert_eq!(form("U^2 + E6").level(), 3);
        assert_eq!(form("U").level(), 1);
    }

    #[test]
    fn s4_generator_norm() {
        let f = form("S4");
        assert_eq!(f.invariant_factors(), &[20]);
        let has = |df: &DiscriminantForm, v: Rational64| {
            df.elements()
                .iter()
                .any(|x| df.element_order(x) == 20 && df.qq_value(x) == v)
        };
        assert!(has(&f, Rational64::new(3, 20)));
        // −3/20 ≡ 37/20 mod 2
        assert!(has(&f.flip(), Rational64::new(37, 20)));
        assert_eq!(milgram_signature(&f).unwrap(), 7);
    }

    #[test]
    fn small_milgram_values() {
        assert_eq!(milgram_signature(&form("A1")).unwrap(), 1);
        assert_eq!(milgram_signature(&form("A1(-1)")).unwrap(), 7);
        assert_eq!(milgram_signature(&form("A2")).unwrap(), 2);
        assert_eq!(milgram_signature(&form("D4")).unwrap(), 4);
        assert_eq!(milgram_signature(&form("E7")).unwrap(), 7);
        assert_eq!(milgram_signature(&form("U(2)")).unwrap(), 0);
    }

    #[test]
    fn rejects_fake_form() {
        // ℤ/4 with qq = 1/2 is not a valid nondegenerate form
        let f = DiscriminantForm::from_values(vec![4], &[vec![Rational64::new(1, 2)]]);
        if let Ok(f) = f { assert!(milgram_signature(&f).is_err()) }
    }

    #[test]
    fn iso_examples() {
        let a = DiscriminantForm::from_values(vec![2], &[vec![Rational64::new(1, 2)]]).unwrap();
        let b = DiscriminantForm::from_values(vec![2], &[vec![Rational64::new(3, 2)]]).unwrap();
        assert!(!iso_check(&a, &b).unwrap());
        assert!(iso_check(&a, &a.flip().flip()).unwrap());
        let s4 = form("S4");
        assert!(iso_check(&form("U + S4(-1)"), &s4.flip()).unwrap());
        assert!(!iso_check(&s4, &s4.flip()).unwrap());
    }

    #[test]
    fn json_roundtrip() {
        let f = form("U + A1(-1)^2 + A2(-1)");
        let j = f.to_json();
        let g = DiscriminantForm::from_json(&j).unwrap();
        assert!(iso_check(&f, &g).unwrap());
    }
}
