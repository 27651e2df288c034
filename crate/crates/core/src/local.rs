//! Counting `q(v) mod a` over `L/aL`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::eisenstein::Weight;
use crate::error::{OmvError, Result};
use crate::lattice::EvenLattice;

/// Largest `aⁿ` the exhaustive count accepts.
pub const BRUTE_LIMIT: u64 = 100_000_000;

/// `counts[c] = #{v ∈ (ℤ/a)ⁿ : q(v) ≡ c mod a}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueDistribution {
    modulus: u64,
    counts: Vec<BigUint>,
}

impl ValueDistribution {
    pub fn new(modulus: u64, counts: Vec<BigUint>) -> Self {
        assert_eq!(counts.len() as u64, modulus);
        ValueDistribution { modulus, counts }
    }

    /// Distribution of the rank-0 form: everything at 0.
    pub fn point(modulus: u64) -> Self {
        let mut counts = vec![BigUint::zero(); modulus as usize];
        counts[0] = BigUint::one();
        ValueDistribution { modulus, counts }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `N₁,₀(a)`.
    pub fn n10(&self) -> BigUint {
        self.counts[(1 % self.modulus) as usize].clone()
    }

    /// Cyclic convolution: the distribution of an orthogonal sum.
    pub fn convolve(&self, other: &ValueDistribution) -> ValueDistribution {
        assert_eq!(self.modulus, other.modulus);
        let a = self.modulus as usize;
        let mut out = vec![BigUint::zero(); a];
        for (i, x) in self.counts.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.counts.iter().enumerate() {
                if !y.is_zero() {
                    out[(i + j) % a] += x * y;
                }
            }
        }
        ValueDistribution {
            modulus: self.modulus,
            counts: out,
        }
    }
}

fn gram_mod(lat: &EvenLattice, m: u64) -> Vec<Vec<u64>> {
    let mb = num_bigint::BigInt::from(m);
    lat.gram()
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(&mb).to_u64().unwrap()).collect())
        .collect()
}

/// Exhaustive count over `(ℤ/a)ⁿ`. `q(v) = vᵀGv/2` is well defined mod `a`
/// because `G` has even diagonal.
pub fn brute_distribution(lat: &EvenLattice, a: u64) -> Result<ValueDistribution> {
    if a == 0 {
        return Err(OmvError::Precondition("modulus must be positive".into()));
    }
    let n = lat.rank();
    let size = (a as u128).checked_pow(n as u32).filter(|&s| s <= BRUTE_LIMIT as u128);
    let Some(size) = size else {
        return Err(OmvError::SizeLimit(format!("{a}^{n} exceeds {BRUTE_LIMIT}")));
    };
    if a == 1 {
        return Ok(ValueDistribution::point(1));
    }
    // with diagonal halved mod a and off-diagonal mod a:
    // q(v) = Σ hᵢ vᵢ² + Σ_{i<j} gᵢⱼ vᵢ vⱼ
    let g = gram_mod(lat, 2 * a);
    let h: Vec<u64> = (0..n).map(|i| (g[i][i] / 2) % a).collect();
    let off: Vec<Vec<u64>> = g.iter().map(|r| r.iter().map(|x| x % a).collect()).collect();
    let mut counts = vec![0u64; a as usize];
    let mut v = vec![0u64; n];
    // gv[i] = Σ_{j<i} g_ij v_j, kept incrementally
    let mut q = 0u64;
    for _ in 0..size {
        counts[q as usize] += 1;
        // odometer step at position i: v_i → v_i + 1, or wrap to 0
        for i in 0..n {
            let old = v[i];
            let new = if old + 1 == a { 0 } else { old + 1 };
            // q(new) − q(old) = h_i (new² − old²) + (new − old) Σ_{j≠i} g_ij v_j
            let cross: u64 = (0..n)
                .filter(|&j| j != i)
                .fold(0, |acc, j| (acc + off[i][j] * v[j]) % a);
            let d_sq = (new * new + a * a - old * old % a) % a;
            let d_lin = (new + a - old) % a;
            q = (q + h[i] * d_sq % a + d_lin * cross) % a;
            v[i] = new;
            if new != 0 {
                break;
            }
        }
    }
    Ok(ValueDistribution::new(
        a,
        counts.into_iter().map(BigUint::from).collect(),
    ))
}

/// A Jordan-type block over `ℤ/M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    One(u64),
    Two([[u64; 2]; 2]),
}

impl Block {
    pub fn size(&self) -> usize {
        match self {
            Block::One(_) => 1,
            Block::Two(_) => 2,
        }
    }
}

fn valuation(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    let mut y = x;
    while y % p == 0 && v < cap {
        y /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// Block diagonalization of the Gram matrix modulo `p^{w+3}`.
///
/// The result has the same distribution of `q mod p^w` as the input. Every step is a
/// symmetric elementary operation with determinant a unit, and the final congruence
/// `SᵀGS ≡ blocks` is checked before returning.
pub fn block_diagonalize_mod(lat: &EvenLattice, p: u64, w: u32) -> Result<Vec<Block>> {
    if !is_prime(p) {
        return Err(OmvError::Precondition(format!("{p} is not prime")));
    }
    let k = w + 3;
    let m = p
        .checked_pow(k)
        .filter(|&m| m < (1 << 31))
        .ok_or_else(|| OmvError::SizeLimit(format!("{p}^{k} too large")))?;
    let n = lat.rank();
    let g0 = gram_mod(lat, m);
    let mut a = g0.clone();
    let mut s: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut blocks = Vec::new();

    // column op col_i += c·col_j together with the matching row op
    let add = |a: &mut Vec<Vec<u64>>, s: &mut Vec<Vec<u64>>, i: usize, j: usize, c: u64| {
        for r in 0..n {
            a[r][i] = (a[r][i] + c * a[r][j]) % m;
            s[r][i] = (s[r][i] + c * s[r][j]) % m;
        }
        for col in 0..n {
            a[i][col] = (a[i][col] + c * a[j][col]) % m;
        }
    };
    let swap = |a: &mut Vec<Vec<u64>>, s: &mut Vec<Vec<u64>>, i: usize, j: usize| {
        if i == j {
            return;
        }
        a.swap(i, j);
        for r in 0..n {
            a[r].swap(i, j);
            s[r].swap(i, j);
        }
    };

    let mut t = 0;
    while t < n {
        let mut best_diag = (k, t);
        for i in t..n {
            let v = valuation(a[i][i], p, k);
            if v < best_diag.0 {
                best_diag = (v, i);
            }
        }
        let mut best_off = (k, (t, t));
        for i in t..n {
            for j in i + 1..n {
                let v = valuation(a[i][j], p, k);
                if v < best_off.0 {
                    best_off = (v, (i, j));
                }
            }
        }
        let best = best_diag.0.min(best_off.0);
        let diag_at = (best_diag.0 == best).then_some(best_diag.1);
        let off_at = Some(best_off.1);
        if best >= k {
            blocks.extend((t..n).map(|_| Block::One(0)));
            break;
        }
        let pv = p.pow(best);
        let mr = m / pv;
        let unit = |x: u64| x / pv % mr;
        match (diag_at, off_at) {
            (Some(i), _) => {
                swap(&mut a, &mut s, i, t);
                let inv = inv_mod(unit(a[t][t]), mr)
                    .ok_or_else(|| OmvError::Internal("pivot is not a unit".into()))?;
                for i in t + 1..n {
                    if a[i][t] == 0 {
                        continue;
                    }
                    let c = unit(a[i][t]) * inv % mr;
                    add(&mut a, &mut s, i, t, (m - c) % m);
                }
                blocks.push(Block::One(a[t][t]));
                t += 1;
            }
            (None, Some((i, j))) if p != 2 => {
                // e_i += e_j makes a diagonal of valuation `best` (p odd)
                add(&mut a, &mut s, i, j, 1);
                continue;
            }
            (None, Some((i, j))) => {
                swap(&mut a, &mut s, i, t);
                let j = if j == t { i } else { j };
                swap(&mut a, &mut s, j, t + 1);
                let (x, y, z) = (unit(a[t][t]), unit(a[t][t + 1]), unit(a[t + 1][t + 1]));
                let det = (x * z % mr + mr - y * y % mr) % mr;
                let dinv = inv_mod(det, mr)
                    .ok_or_else(|| OmvError::Internal("2×2 pivot is not unimodular".into()))?;
                // B₀⁻¹ = det⁻¹ [[z, −y], [−y, x]]
                let binv = [
                    [z * dinv % mr, (mr - y) * dinv % mr],
                    [(mr - y) * dinv % mr, x * dinv % mr],
                ];
                for r in t + 2..n {
                    let (g0r, g1r) = (unit(a[r][t]), unit(a[r][t + 1]));
                    let c0 = (g0r * binv[0][0] + g1r * binv[1][0]) % mr;
                    let c1 = (g0r * binv[0][1] + g1r * binv[1][1]) % mr;
                    if c0 != 0 {
                        add(&mut a, &mut s, r, t, (m - c0) % m);
                    }
                    if c1 != 0 {
                        add(&mut a, &mut s, r, t + 1, (m - c1) % m);
                    }
                }
                blocks.push(Block::Two([
                    [a[t][t], a[t][t + 1]],
                    [a[t + 1][t], a[t + 1][t + 1]],
                ]));
                t += 2;
            }
            (None, None) => unreachable!("a finite valuation was found"),
        }
    }

    verify_blocks(&g0, &s, &blocks, m, p)?;
    Ok(blocks)
}

fn verify_blocks(g: &[Vec<u64>], s: &[Vec<u64>], blocks: &[Block], m: u64, p: u64) -> Result<()> {
    let n = g.len();
    let mut target = vec![vec![0u64; n]; n];
    let mut t = 0;
    for b in blocks {
        match b {
            Block::One(x) => target[t][t] = *x,
            Block::Two(v) => {
                for i in 0..2 {
                    for j in 0..2 {
                        target[t + i][t + j] = v[i][j];
                    }
                }
            }
        }
        t += b.size();
    }
    let mul = |x: &[Vec<u64>], y: &[Vec<u64>], tx: bool| -> Vec<Vec<u64>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(0u64, |acc, l| {
                            let xv = if tx { x[l][i] } else { x[i][l] };
                            (acc + xv * y[l][j]) % m
                        })
                    })
                    .collect()
            })
            .collect()
    };
    let gs = mul(g, s, false);
    let sgs = mul(s, &gs, true);
    if sgs != target {
        return Err(OmvError::Internal("block form is not congruent to the Gram matrix".into()));
    }
    let det = crate::linalg::determinant(&crate::linalg::to_big(
        &s.iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect::<Vec<_>>(),
    ));
    if det.mod_floor(&num_bigint::BigInt::from(p)).is_zero() {
        return Err(OmvError::Internal("transformation is not invertible".into()));
    }
    Ok(())
}

fn block_distribution(b: &Block, a: u64) -> ValueDistribution {
    let mut counts = vec![0u64; a as usize];
    // diagonal entries are even representatives, so halving before reducing is exact
    match b {
        Block::One(x) => {
            let h = (x / 2) % a;
            for v in 0..a {
                counts[(h * (v * v % a) % a) as usize] += 1;
            }
        }
        Block::Two(g) => {
            let h0 = (g[0][0] / 2) % a;
            let h1 = (g[1][1] / 2) % a;
            let c = g[0][1] % a;
            for x in 0..a {
                for y in 0..a {
                    let q = (h0 * (x * x % a) + h1 * (y * y % a) + c * (x * y % a)) % a;
                    counts[q as usize] += 1;
                }
            }
        }
    }
    ValueDistribution::new(a, counts.into_iter().map(BigUint::from).collect())
}

/// Distribution of `q mod p^w` from the block form, `p^w ≤ 128`.
pub fn fast_distribution(lat: &EvenLattice, p: u64, w: u32) -> Result<ValueDistribution> {
    let a = p
        .checked_pow(w)
        .filter(|&a| a <= 128)
        .ok_or_else(|| OmvError::SizeLimit(format!("{p}^{w} exceeds 128")))?;
    let blocks = block_diagonalize_mod(lat, p, w)?;
    // odd p: a 1×1 entry may be odd as a residue mod p^{w+3}; halve with 2⁻¹
    let m = p.pow(w + 3);
    let mut dist = ValueDistribution::point(a);
    for b in &blocks {
        let b = match b {
            Block::One(x) if p != 2 && x % 2 == 1 => Block::One((x + m) % (2 * m)),
            other => other.clone(),
        };
        dist = dist.convolve(&block_distribution(&b, a));
    }
    Ok(dist)
}

/// One factor of the local product: `N₁,₀(p^w)/p^{(2k−1)w}`, divided further by
/// `1 − p^{1−2k}` when `2k` is odd. Meant for primes `p | 2N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactor {
    pub p: u64,
    pub w: u32,
    pub n10: BigUint,
    pub normalized: BigRational,
}

pub fn local_factor(lat: &EvenLattice, p: u64, k: Weight) -> Result<LocalFactor> {
    let w = if p == 2 { 3 } else { 1 };
    let dist = fast_distribution(lat, p, w)?;
    let n10 = dist.n10();
    let twice = k.twice();
    let pb = num_bigint::BigInt::from(p);
    let den = pb.pow((twice - 1) * w);
    let mut normalized = BigRational::new(num_bigint::BigInt::from(n10.clone()), den);
    if twice % 2 == 1 {
        // 1 − p^{1−2k} = (p^{2k−1} − 1)/p^{2k−1}
        let q = pb.pow(twice - 1);
        normalized *= BigRational::new(q.clone(), q - 1u32);
    }
    Ok(LocalFactor {
        p,
        w,
        n10,
        normalized,
    })
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice;

    fn brute(s: &str, a: u64) -> ValueDistribution {
        brute_distribution(&lattice(s).unwrap(), a).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(brute("A1", 8).n10(), BigUint::from(4u32));
        for p in [3, 5, 7] {
            assert_eq!(brute("U", p).n10(), BigUint::from(p - 1));
        }
        assert_eq!(brute("U", 8).n10(), BigUint::from(4u32));
        assert_eq!(brute("E8", 3).total(), BigUint::from(3u32).pow(8));
    }

    #[test]
    fn u_blocks() {
        let u = lattice("U").unwrap();
        let b = block_diagonalize_mod(&u, 2, 3).unwrap();
        assert_eq!(b, vec![Block::Two([[0, 1], [1, 0]])]);
        let b = block_diagonalize_mod(&u, 5, 1).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|x| matches!(x, Block::One(_))));
        assert_eq!(fast_distribution(&u, 5, 1).unwrap(), brute("U", 5));
    }

    #[test]
    fn fast_matches_brute_on_examples() {
        for s in ["A1", "A2", "D4", "U + A1(-3)", "S4", "A1^2 + A2(-1)", "[[2,1],[1,-4]]", "<6> + <-10>"] {
            let l = lattice(s).unwrap();
            for (p, w) in [(2, 3), (3, 1), (5, 1), (7, 1)] {
                assert_eq!(
                    fast_distribution(&l, p, w).unwrap(),
                    brute_distribution(&l, p.pow(w)).unwrap(),
                    "{s} at {p}^{w}"
                );
            }
        }
    }

    #[test]
    fn local_factor_denominator() {
        let l = lattice("U^2 + A2").unwrap();
        let f = local_factor(&l, 3, Weight::from_twice(6)).unwrap();
        assert_eq!(f.n10, brute_distribution(&l, 3).unwrap().n10());
        assert_eq!(
            f.normalized,
            BigRational::new(f.n10.clone().into(), num_bigint::BigInt::from(243))
        );
    }
}
