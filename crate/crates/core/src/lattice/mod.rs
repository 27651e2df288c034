//! Even lattices given by integer Gram matrices.

mod expr;

pub use expr::{parse, Atom, LatticeExpr};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{OmvError, Result};
use crate::linalg;

/// Counts of positive and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureInfo {
    pub n_plus: usize,
    pub n_minus: usize,
}

impl SignatureInfo {
    /// `b` for signature `(b, 2)`.
    pub fn b(&self) -> Option<usize> {
        (self.n_minus == 2).then_some(self.n_plus)
    }

    /// `n_plus − n_minus` reduced into `0..8`.
    pub fn mod8(&self) -> u8 {
        (self.n_plus as i64 - self.n_minus as i64).rem_euclid(8) as u8
    }
}

/// A nondegenerate even lattice plus the number of hyperbolic planes known to split off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenLattice {
    gram: Vec<Vec<BigInt>>,
    u_count: usize,
}

impl EvenLattice {
    /// Validates symmetry, even diagonal, nonzero determinant and `u_count ≤ rank/2`.
    pub fn new(gram: Vec<Vec<BigInt>>, u_count: usize) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(OmvError::InvalidGram("matrix is not square".into()));
        }
        for i in 0..n {
            if gram[i][i].is_odd() {
                return Err(OmvError::InvalidGram(format!("diagonal entry {i} is odd")));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(OmvError::InvalidGram(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        if u_count > n / 2 {
            return Err(OmvError::InvalidGram(format!(
                "u_count {u_count} exceeds half the rank {n}"
            )));
        }
        if linalg::determinant(&gram).is_zero() {
            return Err(OmvError::Degenerate);
        }
        Ok(EvenLattice { gram, u_count })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(linalg::to_big(rows), 0)
    }

    /// The rank-0 lattice, neutral for direct sums.
    pub fn zero() -> Self {
        EvenLattice {
            gram: Vec::new(),
            u_count: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn u_count(&self) -> usize {
        self.u_count
    }

    /// Records a caller-asserted number of split hyperbolic planes.
    pub fn with_u_count(mut self, u_count: usize) -> Result<Self> {
        if u_count > self.rank() / 2 {
            return Err(OmvError::InvalidGram(format!(
                "u_count {u_count} exceeds half the rank {}",
                self.rank()
            )));
        }
        self.u_count = u_count;
        Ok(self)
    }

    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&self.gram)
    }

    pub fn signature(&self) -> SignatureInfo {
        let (n_plus, n_minus, _) = linalg::inertia(&self.gram);
        SignatureInfo { n_plus, n_minus }
    }

    /// Orthogonal direct sum; `u_count` adds.
    pub fn direct_sum(&self, other: &EvenLattice) -> EvenLattice {
        let (n, m) = (self.rank(), other.rank());
        let mut g = vec![vec![BigInt::zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                g[n + i][n + j] = other.gram[i][j].clone();
            }
        }
        EvenLattice {
            gram: g,
            u_count: self.u_count + other.u_count,
        }
    }

    pub fn sum_all<'a>(parts: impl IntoIterator<Item = &'a EvenLattice>) -> EvenLattice {
        parts
            .into_iter()
            .fold(EvenLattice::zero(), |acc, l| acc.direct_sum(l))
    }

    /// `L(d)`: Gram multiplied by `d`. Split planes survive only for `d = ±1`.
    pub fn rescale(&self, d: i64) -> Result<EvenLattice> {
        if d == 0 {
            return Err(OmvError::Range {
                pos: 0,
                msg: "rescale factor must be nonzero".into(),
            });
        }
        let g = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x * d).collect())
            .collect();
        Ok(EvenLattice {
            gram: g,
            u_count: if d.abs() == 1 { self.u_count } else { 0 },
        })
    }

    /// Bring signature `(2, b)` to `(b, 2)` by negation; `(b, 2)` is returned unchanged.
    pub fn normalize_b2(&self) -> Result<EvenLattice> {
        let sig = self.signature();
        let out = match (sig.n_plus, sig.n_minus) {
            (b, 2) if b > 2 => self.clone(),
            (2, b) if b > 2 => self.rescale(-1)?,
            (p, m) => {
                return Err(OmvError::Signature {
                    n_plus: p,
                    n_minus: m,
                    reason: "need (b,2) or (2,b) with b > 2".into(),
                })
            }
        };
        Ok(out)
    }

    /// Gram matrix as machine integers, if every entry fits.
    pub fn gram_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.gram
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    /// Largest absolute entry.
    pub fn max_entry(&self) -> BigInt {
        self.gram
            .iter()
            .flatten()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

/// Evaluate an expression. `u_count` is the number of top-level unrescaled `U` atoms.
pub fn build(expr: &LatticeExpr) -> Result<EvenLattice> {
    let lat = build_gram(expr)?;
    lat.with_u_count(expr.u_count())
}

/// Parse and build in one step.
pub fn lattice(text: &str) -> Result<EvenLattice> {
    build(&parse(text)?)
}

fn build_gram(expr: &LatticeExpr) -> Result<EvenLattice> {
    match expr {
        LatticeExpr::Atom(a) => EvenLattice::from_i64(&atom_gram(a)),
        LatticeExpr::Rescale(inner, d) => build_gram(inner)?.rescale(*d),
        LatticeExpr::Power(inner, e) => {
            let one = build_gram(inner)?;
            Ok(EvenLattice::sum_all(std::iter::repeat_n(&one, *e as usize)))
        }
        LatticeExpr::Sum(terms) => {
            let parts = terms.iter().map(build_gram).collect::<Result<Vec<_>>>()?;
            Ok(EvenLattice::sum_all(&parts))
        }
    }
}

pub fn atom_gram(a: &Atom) -> Vec<Vec<i64>> {
    match a {
        Atom::U => vec![vec![0, 1], vec![1, 0]],
        Atom::A(n) => a_gram(*n as usize),
        Atom::D(n) => d_gram(*n as usize),
        Atom::E(n) => e_gram(*n as usize),
        Atom::Gen(v) => vec![vec![*v]],
        Atom::S4 => vec![vec![2, 1, 2], vec![1, -2, 1], vec![2, 1, -2]],
        Atom::Gram(rows) => rows.clone(),
    }
}

fn a_gram(n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; n]; n];
    for i in 0..n {
        g[i][i] = 2;
        if i + 1 < n {
            g[i][i + 1] = -1;
            g[i + 1][i] = -1;
        }
    }
    g
}

// basis e1−e2, …, e_{n−1}−e_n, e_{n−1}+e_n
fn d_gram(n: usize) -> Vec<Vec<i64>> {
    let mut vecs = Vec::with_capacity(n);
    for i in 0..n - 1 {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v[i + 1] = -1;
        vecs.push(v);
    }
    let mut v = vec![0i64; n];
    v[n - 2] = 1;
    v[n - 1] = 1;
    vecs.push(v);
    vecs.iter()
        .map(|x| vecs.iter().map(|y| x.iter().zip(y).map(|(a, b)| a * b).sum()).collect())
        .collect()
}

// Bourbaki numbering: chain 1-3-4-5-…-n, node 2 attached to node 4
fn e_gram(n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; n]; n];
    for i in 0..n {
        g[i][i] = 2;
    }
    let mut edges = vec![(1, 3), (2, 4), (3, 4)];
    for i in 4..n {
        edges.push((i, i + 1));
    }
    for (a, b) in edges {
        g[a - 1][b - 1] = -1;
        g[b - 1][a - 1] = -1;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_lattice_determinants() {
        for (text, det) in [
            ("A1", 2),
            ("A4", 5),
            ("D4", 4),
            ("D5", 4),
            ("E6", 3),
            ("E7", 2),
            ("E8", 1),
            ("U", -1),
            ("S4", 20),
            ("U^2 + <-26>", -26),
        ] {
            assert_eq!(lattice(text).unwrap().determinant(), BigInt::from(det), "{text}");
        }
    }

    #[test]
    fn signatures() {
        let s = lattice("S4").unwrap().signature();
        assert_eq!((s.n_plus, s.n_minus), (1, 2));
        let s = lattice("E8(-1)").unwrap().signature();
        assert_eq!((s.n_plus, s.n_minus), (0, 8));
        let s = lattice("U").unwrap().signature();
        assert_eq!((s.n_plus, s.n_minus), (1, 1));
    }

    #[test]
    fn build_metadata() {
        let l = lattice("U^2 + E8(-1) + A1(-1)").unwrap();
        assert_eq!((l.rank(), l.u_count()), (13, 2));
        let l = lattice("A1(-13)").unwrap();
        assert_eq!(l.gram()[0][0], BigInt::from(-26));
        assert_eq!(l.u_count(), 0);
    }

    #[test]
    fn normalization() {
        let l = lattice("U^2 + A1(-13)").unwrap();
        let n = l.normalize_b2().unwrap();
        assert_eq!(n.signature(), SignatureInfo { n_plus: 3, n_minus: 2 });
        assert_eq!(n.u_count(), 2);
        assert!(matches!(
            lattice("U^3").unwrap().normalize_b2(),
            Err(OmvError::Signature { .. })
        ));
        let s = lattice("U^2 + A1^17").unwrap();
        assert_eq!(s.normalize_b2().unwrap(), s);
    }

    #[test]
    fn rejects_bad_grams() {
        assert!(matches!(
            EvenLattice::from_i64(&[vec![2, 2], vec![2, 2]]),
            Err(OmvError::Degenerate)
        ));
        assert!(matches!(
            EvenLattice::from_i64(&[vec![1]]),
            Err(OmvError::InvalidGram(_))
        ));
    }
}
