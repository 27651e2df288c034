//! Built-in tables: `r(k)` values, the families with two split planes, and the
//! K3 Picard lattices with finite automorphism group.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::disc::discriminant_form;
use crate::eisenstein::{
    c10_genus, criterion_report, r_of_k, bound_rhs, bound_verdict, CharacterConvention,
    CriterionReport, BoundOutcome, Verdict, Weight,
};
use crate::error::{OmvError, Result};
use crate::lattice::{lattice, parse, EvenLattice, LatticeExpr};
use crate::numeric::{ratio_to_decimal, PrecReal};
use crate::surrogate::{find_surrogate, SurrogateSpec};

// ---------------------------------------------------------------- r(k)

/// Printed `r(k)` for `b = 3..=20`.
pub const PRINTED_R_VALUES: [&str; 18] = [
    "45.254", "103.177", "155.642", "240.000", "310.318", "393.495", "452.255", "504.000",
    "526.601", "532.495", "513.576", "480.000", "432.083", "377.769", "320.054", "264.000",
    "211.894", "165.959",
];

#[derive(Debug, Clone)]
pub struct RValueEntry {
    pub b: u32,
    pub value: PrecReal,
    /// Three decimals, truncated toward zero (the printed convention).
    pub truncated: String,
    /// Three decimals, round half to even.
    pub half_even: String,
    pub printed: &'static str,
}

impl RValueEntry {
    pub fn matches(&self) -> bool {
        self.truncated == self.printed
    }
}

/// Truncate to `digits` decimals. The upper end of the ball is used so that values
/// sitting on a grid point (such as `r(k) = 504` exactly) are not pushed below it.
pub fn truncate_decimal(x: &PrecReal, digits: u32) -> String {
    let scale = BigRational::from_integer(BigInt::from(10).pow(digits));
    let t = (x.upper() * &scale).trunc();
    ratio_to_decimal(&(t / scale), digits)
}

pub fn run_r_values(digits: u32) -> Result<Vec<RValueEntry>> {
    (3..=20u32)
        .zip(PRINTED_R_VALUES)
        .map(|(b, printed)| {
            let value = r_of_k(b, digits)?;
            Ok(RValueEntry {
                b,
                truncated: truncate_decimal(&value, 3),
                half_even: ratio_to_decimal(&value.midpoint(), 3),
                value,
                printed,
            })
        })
        .collect()
}

// ---------------------------------------------------------------- families with U²

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Root {
    AOdd,
    AEven,
    DOdd,
    DEven,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// `U² ⊕ R^s` with `R` of type A/D indexed by `n`; parameters `(n, s)`.
    Roots(Root),
    /// `U² ⊕ E_m^s`; parameter `s`.
    E(u32),
    /// `U² ⊕ A₁(−d)`; parameter `d`.
    A1Neg,
    /// `U² ⊕ E₈(−1) ⊕ A₁(−d)`; parameter `d`.
    E8NegA1Neg,
}

#[derive(Debug, Clone)]
pub struct Family {
    pub id: &'static str,
    pub name: &'static str,
    pub kind: FamilyKind,
    pub printed: BTreeSet<Vec<u32>>,
}

fn set(items: &[&[u32]]) -> BTreeSet<Vec<u32>> {
    items.iter().map(|x| x.to_vec()).collect()
}

fn range2(n: std::ops::RangeInclusive<u32>, s: std::ops::RangeInclusive<u32>) -> Vec<Vec<u32>> {
    n.flat_map(|a| s.clone().map(move |b| vec![a, b])).collect()
}

pub fn families() -> Vec<Family> {
    let mut a_odd = set(&[&[2, 1], &[2, 2], &[3, 1]]);
    a_odd.extend(range2(0..=0, 1..=6));
    a_odd.extend(range2(1..=1, 1..=3));
    let mut a_even = set(&[&[2, 1], &[2, 2]]);
    a_even.extend(range2(1..=1, 1..=3));
    a_even.extend(range2(3..=6, 1..=1));
    let mut d_odd = set(&[&[2, 1], &[2, 2]]);
    d_odd.extend(range2(3..=8, 1..=1));
    let mut d_even = set(&[&[2, 2], &[3, 2]]);
    d_even.extend(range2(2..=8, 1..=1));
    let ones = |r: std::ops::RangeInclusive<u32>| -> BTreeSet<Vec<u32>> { r.map(|x| vec![x]).collect() };
    vec![
        Family { id: "A_odd", name: "U^2+A_{2n+1}^s", kind: FamilyKind::Roots(Root::AOdd), printed: a_odd },
        Family { id: "A_even", name: "U^2+A_{2n}^s", kind: FamilyKind::Roots(Root::AEven), printed: a_even },
        Family { id: "D_odd", name: "U^2+D_{2n+1}^s", kind: FamilyKind::Roots(Root::DOdd), printed: d_odd },
        Family { id: "D_even", name: "U^2+D_{2n}^s", kind: FamilyKind::Roots(Root::DEven), printed: d_even },
        Family { id: "E8", name: "U^2+E_8^s", kind: FamilyKind::E(8), printed: ones(1..=2) },
        Family { id: "E7", name: "U^2+E_7^s", kind: FamilyKind::E(7), printed: ones(1..=2) },
        Family { id: "E6", name: "U^2+E_6^s", kind: FamilyKind::E(6), printed: ones(1..=2) },
        Family { id: "A1(-d)", name: "U^2+A_1(-d)", kind: FamilyKind::A1Neg, printed: ones(1..=4) },
        Family {
            id: "E8(-1)+A1(-d)",
            name: "U^2+E_8(-1)+A_1(-d)",
            kind: FamilyKind::E8NegA1Neg,
            printed: ones(1..=38),
        },
    ]
}

impl Root {
    fn index(self, n: u32) -> u32 {
        match self {
            Root::AOdd | Root::DOdd => 2 * n + 1,
            Root::AEven | Root::DEven => 2 * n,
        }
    }
    fn min_n(self) -> u32 {
        match self {
            Root::AOdd => 0,
            Root::AEven => 1,
            Root::DOdd | Root::DEven => 2,
        }
    }
    fn letter(self) -> char {
        match self {
            Root::AOdd | Root::AEven => 'A',
            Root::DOdd | Root::DEven => 'D',
        }
    }
}

impl Family {
    pub fn expr(&self, p: &[u32]) -> String {
        match self.kind {
            FamilyKind::Roots(r) => format!("U^2 + {}{}^{}", r.letter(), r.index(p[0]), p[1]),
            FamilyKind::E(m) => format!("U^2 + E{m}^{}", p[0]),
            FamilyKind::A1Neg => format!("U^2 + A1(-{})", p[0]),
            FamilyKind::E8NegA1Neg => format!("U^2 + E8(-1) + A1(-{})", p[0]),
        }
    }

    /// The printed `(D, N, k)` pattern.
    pub fn pattern(&self, p: &[u32]) -> (u64, u64, Weight) {
        let pw = |base: u64, e: u32| base.pow(e);
        match self.kind {
            FamilyKind::Roots(Root::AOdd) => {
                let (n, s) = (p[0] as u64, p[1]);
                (pw(2 * n + 2, s), 4 * (n + 1), Weight::from_twice((2 * p[0] + 1) * s + 4))
            }
            FamilyKind::Roots(Root::AEven) => {
                let (n, s) = (p[0] as u64, p[1]);
                (pw(2 * n + 1, s), 2 * n + 1, Weight::from_twice(2 * p[0] * s + 4))
            }
            FamilyKind::Roots(Root::DOdd) => (pw(4, p[1]), 8, Weight::from_twice((2 * p[0] + 1) * p[1] + 4)),
            FamilyKind::Roots(Root::DEven) => {
                let n = if p[0] % 2 == 1 { 4 } else { 2 };
                (pw(4, p[1]), n, Weight::from_twice(2 * p[0] * p[1] + 4))
            }
            FamilyKind::E(8) => (1, 1, Weight::from_twice(8 * p[0] + 4)),
            FamilyKind::E(7) => (pw(2, p[0]), 4, Weight::from_twice(7 * p[0] + 4)),
            FamilyKind::E(_) => (pw(3, p[0]), 3, Weight::from_twice(6 * p[0] + 4)),
            FamilyKind::A1Neg => (2 * p[0] as u64, 4 * p[0] as u64, Weight::from_twice(5)),
            FamilyKind::E8NegA1Neg => (2 * p[0] as u64, 4 * p[0] as u64, Weight::from_twice(13)),
        }
    }

    /// Every parameter where the bound could possibly hold, given the cutoff `b_cut`
    /// past which `r(k) < 4b` and the largest `d` allowed by `r(k)/√(2d) ≥ 4b`.
    fn window(&self, b_cut: u32, d_max: impl Fn(u32) -> u32) -> Vec<Vec<u32>> {
        match self.kind {
            FamilyKind::Roots(r) => {
                let mut out = Vec::new();
                for n in r.min_n().. {
                    let rank = r.index(n);
                    if 2 + rank >= b_cut {
                        break;
                    }
                    for s in 1.. {
                        if 2 + s * rank >= b_cut {
                            break;
                        }
                        out.push(vec![n, s]);
                    }
                }
                out
            }
            FamilyKind::E(m) => (1..).take_while(|s| 2 + s * m < b_cut).map(|s| vec![s]).collect(),
            FamilyKind::A1Neg => (1..=d_max(3).max(5)).map(|d| vec![d]).collect(),
            FamilyKind::E8NegA1Neg => (1..=d_max(11).max(39)).map(|d| vec![d]).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyInstance {
    pub params: Vec<u32>,
    pub expr: String,
    pub d: u64,
    pub n: u64,
    pub k: String,
    pub pattern_ok: bool,
    pub rhs: f64,
    pub four_b: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyScan {
    pub id: &'static str,
    pub name: &'static str,
    pub printed: BTreeSet<Vec<u32>>,
    pub computed: BTreeSet<Vec<u32>>,
    pub instances: Vec<FamilyInstance>,
}

impl FamilyScan {
    pub fn sets_match(&self) -> bool {
        self.printed == self.computed
    }

    pub fn patterns_match(&self) -> bool {
        self.instances.iter().all(|i| i.pattern_ok)
    }

    pub fn missing(&self) -> Vec<Vec<u32>> {
        self.printed.difference(&self.computed).cloned().collect()
    }

    pub fn extra(&self) -> Vec<Vec<u32>> {
        self.computed.difference(&self.printed).cloned().collect()
    }
}

/// Smallest `b ≥ 12` with `r(b) < 4b` and `r(b+1) < 4(b+1)`.
///
/// For `k ≥ 7`, `r(k+1)/r(k) = (2π/k)·ζ(⌊k⌋)/ζ(⌊k⌋+1) ≤ (2π/7)·ζ(7) < 1`, so `r` decreases
/// along each parity class from `b = 12` on while `4b` grows: the bound fails for all
/// larger `b` as well.
pub fn family_scan_cutoff(digits: u32) -> Result<u32> {
    let below = |b: u32| -> Result<bool> {
        Ok(r_of_k(b, digits)?.upper() < BigRational::from_integer(BigInt::from(4 * b)))
    };
    for b in 12u32.. {
        if below(b)? && below(b + 1)? {
            return Ok(b);
        }
    }
    unreachable!()
}

/// Evaluate every family on its whole feasible window with two-plane constants.
pub fn run_family_scan(digits: u32) -> Result<Vec<FamilyScan>> {
    let b_cut = family_scan_cutoff(digits)?;
    let d_max = |b: u32| -> u32 {
        // r(b)/√(2d) < 4b once 2d > (r(b)/4b)²
        let r = r_of_k(b, digits).expect("b ≥ 3").upper().to_f64().unwrap();
        (r * r / (32.0 * (b * b) as f64)).floor() as u32 + 1
    };
    families()
        .into_iter()
        .map(|fam| {
            let mut instances = Vec::new();
            let mut computed = BTreeSet::new();
            for p in fam.window(b_cut, d_max) {
                let inst = family_instance(&fam, &p, digits)?;
                if inst.holds {
                    computed.insert(p.clone());
                }
                instances.push(inst);
            }
            Ok(FamilyScan {
                id: fam.id,
                name: fam.name,
                printed: fam.printed,
                computed,
                instances,
            })
        })
        .collect()
}

pub fn family_instance(fam: &Family, p: &[u32], digits: u32) -> Result<FamilyInstance> {
    let expr = fam.expr(p);
    let lat = lattice(&expr)?.normalize_b2()?;
    let form = discriminant_form(&lat)?;
    let (d, n) = (form.order(), form.level());
    let k = Weight::from_rank(lat.rank());
    let b = k.b().unwrap();
    let mut dg = digits;
    let out = loop {
        let o = bound_verdict(d, n, k, b, lat.u_count(), dg)?;
        if o.holds.is_some() {
            break o;
        }
        dg *= 2;
        if dg > 8 * digits {
            return Err(OmvError::PrecisionExhausted(format!("{expr}: bound undecided")));
        }
    };
    Ok(FamilyInstance {
        params: p.to_vec(),
        pattern_ok: fam.pattern(p) == (d, n, k),
        expr,
        d,
        n,
        k: k.to_string(),
        rhs: out.rhs.to_f64(),
        four_b: out.four_b,
        holds: out.holds == Some(true),
    })
}

// ---------------------------------------------------------------- K3 Picard lattices

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Source {
    /// A parametrized family with two split planes.
    #[serde(rename = "FAMILY")]
    Family,
    /// A K3 Picard lattice with finite automorphism group.
    #[serde(rename = "PICARD")]
    Picard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrintedVerdict {
    /// Uniruled by the bound on `r(k)/√D · C(N,k)`.
    #[serde(rename = "bound")]
    Bound,
    /// Uniruled by the size of `c₁,₀` itself.
    #[serde(rename = "coefficient")]
    Coefficient,
    /// Left open.
    #[serde(rename = "open")]
    Open,
    /// Known to be rational, and the bound holds as well.
    #[serde(rename = "rational+bound")]
    RationalAndBound,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogRow {
    pub id: u32,
    pub source: Source,
    pub name: &'static str,
    /// Picard lattice as an expression; absent when no Gram matrix is available.
    pub expr: Option<&'static str>,
    pub printed_d: u64,
    pub printed_n: u64,
    pub printed_k: Weight,
    pub printed_verdict: PrintedVerdict,
    pub printed_dim: u32,
    pub printed_aut: &'static str,
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

type RowData = (u32, &'static str, Option<&'static str>, u64, u64, u32, &'static str, PrintedVerdict);

const Z2: &str = "Z/2";
const Z2SQ: &str = "(Z/2)^2";
const TRIV: &str = "{1}";

#[rustfmt::skip]
const PICARD_ROWS: [RowData; 55] = {
    use PrintedVerdict::*;
    [
        (1, "S_4", Some("S4"), 20, 40, 19, Z2, Coefficient),
        (2, "S_{1,1,6}", None, 72, 36, 19, Z2, Open),
        (3, "S_{1,1,8}", None, 128, 64, 19, TRIV, Open),
        (4, "S_{1,9,1}", None, 162, 108, 19, TRIV, Open),
        (5, "S_{7,1,1}", None, 98, 14, 19, TRIV, Open),
        (6, "S_{10,1,1}", None, 200, 20, 19, Z2, Open),
        (7, "S_{12,1,1}", None, 288, 12, 19, TRIV, Open),
        (8, "S'_{4,1,2}", None, 32, 8, 19, Z2, Open),
        (9, "L(24)", None, 28, 14, 18, Z2, Coefficient),
        (10, "L(27)", None, 60, 30, 18, Z2, Open),
        (11, "[4]+[-4]+A_2(-1)", Some("<4> + <-4> + A2(-1)"), 48, 24, 18, Z2, Open),
        (12, "U+A_1(-1)^3", Some("U + A1(-1)^3"), 8, 4, 17, Z2, Bound),
        (13, "U(2)+A_1(-1)^3", Some("U(2) + A1(-1)^3"), 32, 4, 17, Z2, Coefficient),
        (14, "U(4)+A_1(-1)^3", Some("U(4) + A1(-1)^3"), 128, 4, 17, Z2, Open),
        (15, "[4]+D_4(-1)", Some("<4> + D4(-1)"), 16, 8, 17, Z2, Bound),
        (16, "[8]+D_4(-1)", Some("<8> + D4(-1)"), 32, 16, 17, Z2, Coefficient),
        (17, "[16]+D_4(-1)", Some("<16> + D4(-1)"), 64, 32, 17, Z2, Open),
        (18, "U(4)+D_4(-1)", Some("U(4) + D4(-1)"), 64, 4, 16, Z2, Coefficient),
        (19, "U+A_4(-1)", Some("U + A4(-1)"), 5, 5, 16, Z2, Bound),
        (20, "U+A_1(-1)+A_3(-1)", Some("U + A1(-1) + A3(-1)"), 8, 8, 16, Z2, Bound),
        (21, "U+A_2(-1)^2", Some("U + A2(-1)^2"), 9, 3, 16, Z2, Bound),
        (22, "U+A_1(-1)^2+A_2(-1)", Some("U + A1(-1)^2 + A2(-1)"), 12, 12, 16, Z2, Bound),
        (23, "U+A_1(-1)^4", Some("U + A1(-1)^4"), 16, 4, 16, Z2, Bound),
        (24, "U+D_4(-1)+A_1(-1)", Some("U + D4(-1) + A1(-1)"), 8, 4, 15, Z2, Bound),
        (25, "U+A_1(-1)+A_2(-1)^2", Some("U + A1(-1) + A2(-1)^2"), 18, 12, 15, Z2, Bound),
        (26, "U+A_1(-1)^2+A_3(-1)", Some("U + A1(-1)^2 + A3(-1)"), 16, 8, 15, Z2, Bound),
        (27, "U+A_2(-1)+A_3(-1)", Some("U + A2(-1) + A3(-1)"), 12, 24, 15, Z2, Bound),
        (28, "U+A_1(-1)+A_4(-1)", Some("U + A1(-1) + A4(-1)"), 10, 20, 15, Z2, Bound),
        (29, "U+A_5(-1)", Some("U + A5(-1)"), 6, 12, 15, Z2, Bound),
        (30, "U+D_6(-1)", Some("U + D6(-1)"), 4, 4, 14, Z2, Bound),
        (31, "U+D_4(-1)+A_1(-1)^2", Some("U + D4(-1) + A1(-1)^2"), 16, 4, 14, Z2, Bound),
        (32, "U+A_2(-1)^3", Some("U + A2(-1)^3"), 27, 8, 14, Z2, Bound),
        (33, "U+A_3(-1)^2", Some("U + A3(-1)^2"), 16, 8, 14, Z2, Bound),
        (34, "U+A_2(-1)+A_4(-1)", Some("U + A2(-1) + A4(-1)"), 15, 30, 14, Z2, Bound),
        (35, "U+A_1(-1)+A_5(-1)", Some("U + A1(-1) + A5(-1)"), 12, 12, 14, Z2, Bound),
        (36, "U+A_6(-1)", Some("U + A6(-1)"), 7, 7, 14, Z2, Bound),
        (37, "U+D_5(-1)+A_1(-1)", Some("U + D5(-1) + A1(-1)"), 8, 4, 14, Z2, Bound),
        (38, "U+D_6(-1)+A_1(-1)", Some("U + D6(-1) + A1(-1)"), 8, 4, 13, Z2, Bound),
        (39, "U+D_4(-1)+A_1(-1)^3", Some("U + D4(-1) + A1(-1)^3"), 32, 4, 13, Z2, Bound),
        (40, "U+A_7(-1)", Some("U + A7(-1)"), 8, 16, 13, Z2, Bound),
        (41, "U+D_4(-1)+A_3(-1)", Some("U + D4(-1) + A3(-1)"), 16, 8, 13, Z2, Bound),
        (42, "U+D_5(-1)+A_2(-1)", Some("U + D5(-1) + A2(-1)"), 12, 24, 13, Z2, Bound),
        (43, "U+D_7(-1)", Some("U + D7(-1)"), 4, 8, 13, Z2, Bound),
        (44, "U+D_8(-1)", Some("U + D8(-1)"), 4, 2, 12, Z2, Bound),
        (45, "U+D_6(-1)+A_1(-1)^2", Some("U + D6(-1) + A1(-1)^2"), 16, 4, 12, Z2, Bound),
        (46, "U+A_1(-1)^8", Some("U + A1(-1)^8"), 256, 4, 12, Z2SQ, Open),
        (47, "U+D_8(-1)+A_1(-1)", Some("U + D8(-1) + A1(-1)"), 8, 4, 11, Z2, Bound),
        (48, "U+D_4(-1)^2+A_1(-1)", Some("U + D4(-1)^2 + A1(-1)"), 32, 4, 11, Z2, Bound),
        (49, "U+D_4(-1)+A_1(-1)^5", Some("U + D4(-1) + A1(-1)^5"), 128, 4, 11, Z2SQ, Coefficient),
        (50, "U+E_8(-1)+A_1(-1)^2", Some("U + E8(-1) + A1(-1)^2"), 4, 4, 10, Z2, Bound),
        (51, "U+D_8(-1)+A_1(-1)^2", Some("U + D8(-1) + A1(-1)^2"), 16, 4, 10, Z2, Bound),
        (52, "U+D_4(-1)^2+A_1(-1)^2", Some("U + D4(-1)^2 + A1(-1)^2"), 64, 4, 10, Z2SQ, Bound),
        (53, "U+E_8(-1)+A_3(-1)", Some("U + E8(-1) + A3(-1)"), 4, 8, 9, Z2, Bound),
        (54, "U+E_8(-1)+A_1(-1)^4", Some("U + E8(-1) + A1(-1)^4"), 16, 4, 8, Z2SQ, RationalAndBound),
        (55, "U+E_8(-1)+D_4(-1)+A_1(-1)", Some("U + E8(-1) + D4(-1) + A1(-1)"), 8, 4, 7, Z2SQ, RationalAndBound),
    ]
};

/// The 55 Picard lattices, in printed order.
pub fn picard_rows() -> Vec<CatalogRow> {
    PICARD_ROWS
        .iter()
        .map(|&(id, name, expr, d, n, twice, aut, verdict)| CatalogRow {
            id,
            source: Source::Picard,
            name,
            expr,
            printed_d: d,
            printed_n: n,
            printed_k: Weight::from_twice(twice),
            printed_verdict: verdict,
            printed_dim: twice - 2,
            printed_aut: aut,
        })
        .collect()
}

pub fn picard_row(id: u32) -> Option<CatalogRow> {
    picard_rows().into_iter().find(|r| r.id == id)
}

/// `(D, N, k)` of the orthogonal complement in the K3 lattice, from the Picard lattice:
/// the two discriminant forms agree up to sign, and `k = (22 − ρ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TripleCheck {
    pub d: u64,
    pub n: u64,
    pub k: Weight,
    pub matches: bool,
}

pub fn picard_triple_check(row: &CatalogRow) -> Result<TripleCheck> {
    let expr = row
        .expr
        .ok_or_else(|| OmvError::NotApplicable(format!("row {} has no Gram matrix", row.id)))?;
    let ns = picard_lattice(expr)?;
    let form = discriminant_form(&ns)?;
    let rho = ns.rank();
    let k = Weight::from_twice(22 - rho as u32);
    let (d, n) = (form.order(), form.level());
    Ok(TripleCheck {
        d,
        n,
        k,
        matches: (d, n, k) == (row.printed_d, row.printed_n, row.printed_k),
    })
}

fn picard_lattice(expr: &str) -> Result<EvenLattice> {
    let ns = lattice(expr)?;
    let sig = ns.signature();
    if sig.n_plus != 1 || ns.rank() > 20 {
        return Err(OmvError::Signature {
            n_plus: sig.n_plus,
            n_minus: sig.n_minus,
            reason: "a Picard lattice has signature (1, ρ−1) with ρ ≤ 20".into(),
        });
    }
    Ok(ns)
}

/// The Picard lattice with its top-level `U` summands removed.
pub fn seed_core(expr: &LatticeExpr) -> Result<Option<EvenLattice>> {
    let rest: Vec<LatticeExpr> = expr.summands().into_iter().filter(|t| !t.is_unrescaled_u()).collect();
    match rest.len() {
        0 => Ok(None),
        1 => Ok(Some(crate::lattice::build(&rest[0])?)),
        _ => Ok(Some(crate::lattice::build(&LatticeExpr::Sum(rest))?)),
    }
}

/// An explicit lattice in the genus of the complement, normalized to `(20 − ρ, 2)`:
/// rank `22 − ρ`, determinant `+D`, the Picard lattice's own discriminant form (two sign
/// flips cancel), and signature `≡ 18 − ρ (mod 8)`.
pub fn complement_surrogate(row: &CatalogRow) -> Result<EvenLattice> {
    let expr_text = row
        .expr
        .ok_or_else(|| OmvError::NotApplicable(format!("row {} has no Gram matrix", row.id)))?;
    let ns = picard_lattice(expr_text)?;
    let form = discriminant_form(&ns)?;
    let rho = ns.rank();
    let mut spec = SurrogateSpec::new(
        22 - rho,
        BigInt::from(form.order()),
        ((18 - rho as i64).rem_euclid(8)) as u8,
        form,
    );
    if let Some(core) = seed_core(&parse(expr_text)?)? {
        spec.seed_cores.push(core);
    }
    spec.seed_cores.push(ns.with_u_count(0)?);
    find_surrogate(&spec)
}

#[derive(Debug, Clone)]
pub struct PicardReport {
    pub row: CatalogRow,
    pub check: Option<TripleCheck>,
    /// Triple used for the bound: recomputed when possible, printed otherwise.
    pub d: u64,
    pub n: u64,
    pub k: Weight,
    pub bound_one_u: BoundOutcome,
    pub bound_two_u: BoundOutcome,
    /// The bound holds only with the two-plane constant, which is assumed.
    pub assumes_two_u: bool,
    pub criterion: Option<CriterionReport>,
    pub verdict: Verdict,
    pub flags: Vec<String>,
}

impl PicardReport {
    /// Does the verdict coincide with the printed column?
    pub fn agrees_with_print(&self) -> bool {
        match self.row.printed_verdict {
            PrintedVerdict::Bound | PrintedVerdict::RationalAndBound => self.verdict == Verdict::UniruledByBound,
            PrintedVerdict::Coefficient => match self.criterion {
                Some(_) => self.verdict == Verdict::UniruledByCoefficient,
                None => self.flags.iter().any(|f| f == "coefficient_requires_gram"),
            },
            PrintedVerdict::Open => self.verdict == Verdict::Inconclusive,
        }
    }

    pub fn c10(&self) -> Option<&PrecReal> {
        self.criterion.as_ref().map(|c| &c.c10.value)
    }
}

pub fn evaluate_picard_row(row: &CatalogRow, digits: u32) -> Result<PicardReport> {
    let mut flags = Vec::new();
    let check = match row.expr {
        Some(_) => Some(picard_triple_check(row)?),
        None => {
            flags.push("gram_unavailable".to_string());
            None
        }
    };
    let (d, n, k) = match &check {
        Some(c) => {
            if !c.matches {
                flags.push("triple_mismatch".to_string());
            }
            (c.d, c.n, c.k)
        }
        None => (row.printed_d, row.printed_n, row.printed_k),
    };
    let b = k.b().unwrap();
    let one = bound_verdict(d, n, k, b, 1, digits)?;
    let two = bound_verdict(d, n, k, b, 2, digits)?;
    let assumes_two_u = one.holds != Some(true) && two.holds == Some(true);
    if assumes_two_u {
        flags.push("assumes_two_u".to_string());
    }
    let u_count = if assumes_two_u { 2 } else { 1 };
    let criterion = match row.expr {
        Some(_) => {
            let s = complement_surrogate(row)?;
            Some(criterion_report(&s, u_count, digits)?)
        }
        None => {
            if row.printed_verdict == PrintedVerdict::Coefficient {
                flags.push("coefficient_requires_gram".to_string());
            }
            None
        }
    };
    let verdict = match &criterion {
        Some(c) => c.verdict,
        None if two.holds == Some(true) => Verdict::UniruledByBound,
        None => Verdict::Inconclusive,
    };
    Ok(PicardReport {
        row: row.clone(),
        check,
        d,
        n,
        k,
        bound_one_u: one,
        bound_two_u: two,
        assumes_two_u,
        criterion,
        verdict,
        flags,
    })
}

// ---------------------------------------------------------------- bound chain inputs

/// A catalog lattice with the number of split planes used for the bound.
#[derive(Debug, Clone)]
pub struct CatalogLattice {
    pub label: String,
    pub lattice: EvenLattice,
    pub u_count: usize,
}

/// Lattices the bound-chain property is checked on: every printed family instance
/// plus the boundary instances, the abelian-surface lattice of degree 13, and the
/// genus stand-ins for the Picard-lattice complements.
pub fn catalog_lattices() -> Result<Vec<CatalogLattice>> {
    let mut out = Vec::new();
    for fam in families() {
        let mut params: Vec<Vec<u32>> = fam.printed.iter().cloned().collect();
        if matches!(fam.kind, FamilyKind::E8NegA1Neg) {
            params.push(vec![39]);
        }
        if matches!(fam.kind, FamilyKind::A1Neg) {
            params.push(vec![5]);
        }
        for p in params {
            let expr = fam.expr(&p);
            let l = lattice(&expr)?.normalize_b2()?;
            out.push(CatalogLattice {
                label: expr,
                u_count: l.u_count(),
                lattice: l,
            });
        }
    }
    let l = lattice("U^2 + A1(-13)")?.normalize_b2()?;
    out.push(CatalogLattice {
        label: "U^2 + A1(-13)".into(),
        u_count: 2,
        lattice: l,
    });
    for row in picard_rows() {
        if row.expr.is_some() {
            out.push(CatalogLattice {
                label: format!("complement of row {}", row.id),
                lattice: complement_surrogate(&row)?,
                u_count: 1,
            });
        }
    }
    Ok(out)
}

/// `r(k)/√D · C(N,k) ≤ |c₁,₀| + error` for one lattice; returns `(lhs, |c10|)`.
pub fn bound_chain(l: &CatalogLattice, digits: u32) -> Result<(PrecReal, PrecReal, bool)> {
    let c10 = c10_genus(&l.lattice, digits, CharacterConvention::default())?;
    let rhs = bound_rhs(c10.discriminant, c10.level, c10.weight, l.u_count, digits)?;
    let abs = c10.value.abs();
    // certainly violated only if the lower end of the bound exceeds the upper end of |c10|
    let ok = rhs.rhs.lower() <= abs.upper();
    Ok((rhs.rhs, abs, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_patterns_at_one_instance() {
        for fam in families() {
            let p = fam.printed.iter().next().unwrap().clone();
            let i = family_instance(&fam, &p, 20).unwrap();
            assert!(i.pattern_ok, "{} {:?}", fam.name, p);
        }
    }

    #[test]
    fn row_checks() {
        let c = picard_triple_check(&picard_row(12).unwrap()).unwrap();
        assert_eq!((c.d, c.n, c.k), (8, 4, Weight::from_twice(17)));
        let c = picard_triple_check(&picard_row(1).unwrap()).unwrap();
        assert_eq!((c.d, c.n, c.k), (20, 40, Weight::from_twice(19)));
        let c = picard_triple_check(&picard_row(55).unwrap()).unwrap();
        assert!(c.matches);
    }

    #[test]
    fn truncation_keeps_exact_grid_points() {
        let r = r_of_k(10, 30).unwrap();
        assert_eq!(truncate_decimal(&r, 3), "504.000");
    }
}
