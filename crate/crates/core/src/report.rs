//! Machine-readable reports for single lattices and for the built-in tables.

use serde::{Deserialize, Serialize};

use crate::catalog::{PicardReport, RValueEntry, FamilyScan};
use crate::eisenstein::{criterion_report, CoefficientResult, CriterionReport, Verdict};
use crate::error::{OmvError, Result};
use crate::lattice::{parse, EvenLattice};

pub const SCHEMA_VERSION: &str = "1";

/// Decimal places printed for high-precision values.
const PRINT_DIGITS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: String,
    pub input: String,
    pub invariants: Invariants,
    pub bound: BoundJson,
    pub coefficient: CoefficientTestJson,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub rank: usize,
    pub b: u32,
    pub det: String,
    #[serde(rename = "D")]
    pub d: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub k: String,
    pub u_count: usize,
    /// `"expression"` when counted from the input, `"asserted"` when supplied.
    pub u_count_source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundJson {
    pub rhs: String,
    pub c_nk: String,
    pub four_b: u64,
    pub margin: f64,
    /// `null` when no split plane is known.
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTestJson {
    pub c10: String,
    pub error: f64,
    pub margin: f64,
    pub holds: Option<bool>,
}

impl AnalysisReport {
    pub fn from_criterion(input: &str, r: &CriterionReport, u_source: &str) -> Self {
        AnalysisReport {
            schema_version: SCHEMA_VERSION.into(),
            input: input.into(),
            invariants: Invariants {
                rank: r.rank,
                b: r.b,
                det: r.det.to_string(),
                d: r.d,
                n: r.n,
                k: r.k.to_string(),
                u_count: r.u_count,
                u_count_source: u_source.into(),
            },
            bound: BoundJson {
                rhs: r.bound.rhs.to_decimal(PRINT_DIGITS),
                c_nk: r.bound.c_nk.to_string(),
                four_b: r.four_b(),
                margin: r.bound.margin(),
                holds: r.bound_holds(),
            },
            coefficient: CoefficientTestJson {
                c10: r.c10.value.to_decimal(PRINT_DIGITS),
                error: r.c10.value.error_bound(),
                margin: r.coefficient_margin(),
                holds: r.coefficient_holds,
            },
            verdict: r.verdict,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| OmvError::Parse {
            pos: e.column(),
            msg: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let i = &self.invariants;
        let t = &self.bound;
        let p = &self.coefficient;
        let holds = |h: Option<bool>| match h {
            Some(true) => "holds",
            Some(false) => "fails",
            None => "not applicable",
        };
        format!(
            "input      {}\n\
             rank       {}   b = {}   det = {}\n\
             D, N, k    {}, {}, {}\n\
             U summands {} ({})\n\
             bound      r(k)/sqrt(D)*C(N,k) = {}   C = {}   vs 4b = {}: {}\n\
             c10        {}  (± {:.1e})   |c10| vs 4b: {}\n\
             verdict    {}\n",
            self.input,
            i.rank,
            i.b,
            i.det,
            i.d,
            i.n,
            i.k,
            i.u_count,
            i.u_count_source,
            t.rhs,
            t.c_nk,
            t.four_b,
            holds(t.holds),
            p.c10,
            p.error,
            holds(p.holds),
            self.verdict
        )
    }
}

/// Parse, normalize to `(b, 2)`, and run both tests.
pub fn analyze(text: &str, digits: u32, assert_u: Option<usize>) -> Result<AnalysisReport> {
    let expr = parse(text)?;
    let lat = crate::lattice::build(&expr)?.normalize_b2()?;
    let (u, source) = match assert_u {
        Some(u) => (u, "asserted"),
        None => (lat.u_count(), "expression"),
    };
    let r = criterion_report(&lat, u, digits)?;
    Ok(AnalysisReport::from_criterion(text, &r, source))
}

/// Lattice analysis without parsing, for callers holding a Gram matrix.
pub fn analyze_lattice(label: &str, lat: &EvenLattice, digits: u32) -> Result<AnalysisReport> {
    let lat = lat.normalize_b2()?;
    let r = criterion_report(&lat, lat.u_count(), digits)?;
    Ok(AnalysisReport::from_criterion(label, &r, "expression"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientJson {
    pub schema_version: String,
    pub input: String,
    pub rank: usize,
    pub k: String,
    pub det: String,
    #[serde(rename = "D")]
    pub d: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub character: i64,
    pub archimedean: String,
    pub l_ratio: String,
    pub local_factors: Vec<LocalFactorJson>,
    pub local_product: String,
    pub c10: String,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFactorJson {
    pub p: u64,
    pub w: u32,
    pub n10: String,
    pub factor: String,
}

impl CoefficientJson {
    pub fn new(input: &str, c: &CoefficientResult) -> Self {
        CoefficientJson {
            schema_version: SCHEMA_VERSION.into(),
            input: input.into(),
            rank: c.rank,
            k: c.weight.to_string(),
            det: c.det.to_string(),
            d: c.discriminant,
            n: c.level,
            character: c.character,
            archimedean: c.archimedean.to_decimal(PRINT_DIGITS),
            l_ratio: c.l_ratio.to_decimal(PRINT_DIGITS),
            local_factors: c
                .local_factors
                .iter()
                .map(|f| LocalFactorJson {
                    p: f.p,
                    w: f.w,
                    n10: f.n10.to_string(),
                    factor: f.normalized.to_string(),
                })
                .collect(),
            local_product: c.local_product.to_string(),
            c10: c.value.to_decimal(PRINT_DIGITS),
            error: c.value.error_bound(),
        }
    }
}

// ---------------------------------------------------------------- table rows

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RValueRow {
    pub b: u32,
    pub k: String,
    pub value: String,
    pub truncated: String,
    pub half_even: String,
    pub printed: String,
    pub matches: bool,
}

pub fn r_value_rows(entries: &[RValueEntry]) -> Vec<RValueRow> {
    entries
        .iter()
        .map(|e| RValueRow {
            b: e.b,
            k: crate::eisenstein::Weight::from_b(e.b).to_string(),
            value: e.value.to_decimal(12),
            truncated: e.truncated.clone(),
            half_even: e.half_even.clone(),
            printed: e.printed.into(),
            matches: e.matches(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub family: String,
    pub params: String,
    pub expr: String,
    #[serde(rename = "D")]
    pub d: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub k: String,
    pub pattern_ok: bool,
    pub rhs: f64,
    pub four_b: u64,
    pub holds: bool,
    pub printed: bool,
}

pub fn family_rows(results: &[FamilyScan]) -> Vec<FamilyRow> {
    let mut out = Vec::new();
    for r in results {
        for i in &r.instances {
            out.push(FamilyRow {
                family: r.name.into(),
                params: params_string(&i.params),
                expr: i.expr.clone(),
                d: i.d,
                n: i.n,
                k: i.k.clone(),
                pattern_ok: i.pattern_ok,
                rhs: i.rhs,
                four_b: i.four_b,
                holds: i.holds,
                printed: r.printed.contains(&i.params),
            });
        }
    }
    out
}

pub fn params_string(p: &[u32]) -> String {
    let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(","))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardRow {
    pub id: u32,
    pub name: String,
    pub expr: String,
    pub printed_triple: String,
    pub triple: String,
    pub triple_matches: Option<bool>,
    pub rhs_one_u: f64,
    pub rhs_two_u: f64,
    pub four_b: u64,
    pub c10: String,
    pub verdict: Verdict,
    pub printed_verdict: String,
    pub agrees: bool,
    pub flags: String,
}

pub fn picard_table_rows(reports: &[PicardReport]) -> Vec<PicardRow> {
    reports
        .iter()
        .map(|r| PicardRow {
            id: r.row.id,
            name: r.row.name.into(),
            expr: r.row.expr.unwrap_or("").into(),
            printed_triple: format!("({}, {}, {})", r.row.printed_d, r.row.printed_n, r.row.printed_k),
            triple: format!("({}, {}, {})", r.d, r.n, r.k),
            triple_matches: r.check.map(|c| c.matches),
            rhs_one_u: r.bound_one_u.rhs.to_f64(),
            rhs_two_u: r.bound_two_u.rhs.to_f64(),
            four_b: r.bound_one_u.four_b,
            c10: r.c10().map(|c| c.to_decimal(6)).unwrap_or_default(),
            verdict: r.verdict,
            printed_verdict: serde_json::to_value(r.row.printed_verdict)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            agrees: r.agrees_with_print(),
            flags: r.flags.join(";"),
        })
        .collect()
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| OmvError::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| OmvError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| OmvError::Internal(e.to_string()))
}

pub fn to_json<T: Serialize>(rows: &T) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_round_trip() {
        let r = analyze("U^2 + A1(-13)", 30, None).unwrap();
        assert_eq!(r.invariants.d, 26);
        assert_eq!(r.invariants.u_count, 2);
        assert!(r.coefficient.c10.starts_with("-15.52941176"));
        assert_eq!(r.verdict, Verdict::UniruledByCoefficient);
        let back = AnalysisReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn definite_input_is_rejected() {
        let e = analyze("E8", 30, None).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }
}
