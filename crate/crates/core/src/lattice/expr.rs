//! Lattice expressions: AST, parser and canonical printer.

use std::fmt;

use crate::error::{OmvError, Result};

/// Base lattices an expression can name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// Hyperbolic plane.
    U,
    /// Root lattice A_n, n ≥ 1.
    A(u32),
    /// Root lattice D_n, n ≥ 2.
    D(u32),
    /// Root lattice E_n, n ∈ {6,7,8}.
    E(u32),
    /// Rank-one lattice with Gram `[value]`; `value` is even and nonzero.
    Gen(i64),
    /// The rank-3 lattice `[[2,1,2],[1,-2,1],[2,1,-2]]`.
    S4,
    /// Literal Gram matrix.
    Gram(Vec<Vec<i64>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeExpr {
    Atom(Atom),
    /// Multiply the Gram matrix by a nonzero integer.
    Rescale(Box<LatticeExpr>, i64),
    /// Orthogonal sum of `exponent ≥ 1` copies.
    Power(Box<LatticeExpr>, u32),
    /// Orthogonal sum, at least two terms.
    Sum(Vec<LatticeExpr>),
}

impl LatticeExpr {
    /// Number of top-level unrescaled `U` summands, counting powers.
    pub fn u_count(&self) -> usize {
        match self {
            LatticeExpr::Atom(Atom::U) => 1,
            LatticeExpr::Power(inner, e) => match inner.as_ref() {
                LatticeExpr::Atom(Atom::U) => *e as usize,
                _ => 0,
            },
            LatticeExpr::Sum(terms) => terms.iter().map(|t| t.u_count()).sum(),
            _ => 0,
        }
    }

    /// Top-level summands, with powers expanded.
    pub fn summands(&self) -> Vec<LatticeExpr> {
        match self {
            LatticeExpr::Sum(terms) => terms.iter().flat_map(|t| t.summands()).collect(),
            LatticeExpr::Power(inner, e) => (0..*e).map(|_| inner.as_ref().clone()).collect(),
            other => vec![other.clone()],
        }
    }

    pub fn is_unrescaled_u(&self) -> bool {
        matches!(self, LatticeExpr::Atom(Atom::U))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::U => write!(f, "U"),
            Atom::A(n) => write!(f, "A{n}"),
            Atom::D(n) => write!(f, "D{n}"),
            Atom::E(n) => write!(f, "E{n}"),
            Atom::Gen(v) => write!(f, "<{v}>"),
            Atom::S4 => write!(f, "S4"),
            Atom::Gram(rows) => {
                write!(f, "[")?;
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                    write!(f, "[{}]", cells.join(","))?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Atom(a) => write!(f, "{a}"),
            LatticeExpr::Rescale(inner, d) => write!(f, "{inner}({d})"),
            LatticeExpr::Power(inner, e) => write!(f, "{inner}^{e}"),
            LatticeExpr::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::str::FromStr for LatticeExpr {
    type Err = OmvError;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Parse the lattice expression language. Whitespace is ignored; `⊕` is accepted for `+`.
///
/// ```text
/// U^2 + A1(-13)        U ⊕ E8(-1) ⊕ A1(-1)        <4> + [[2,1],[1,-4]]        D4(-1)^2
/// ```
pub fn parse(text: &str) -> Result<LatticeExpr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> OmvError {
        OmvError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn range(&self, pos: usize, msg: impl Into<String>) -> OmvError {
        OmvError::Range {
            pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<LatticeExpr> {
        let mut terms = vec![self.term()?];
        while matches!(self.peek(), Some('+') | Some('⊕')) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            LatticeExpr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<LatticeExpr> {
        let atom = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let at = self.pos;
            let e = self.unsigned()?;
            if e == 0 {
                return Err(self.range(at, "power exponent must be at least 1"));
            }
            let e = u32::try_from(e).map_err(|_| self.range(at, "power exponent too large"))?;
            return Ok(LatticeExpr::Power(Box::new(atom), e));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<LatticeExpr> {
        let base = LatticeExpr::Atom(self.base()?);
        if self.eat('(') {
            self.skip_ws();
            let at = self.pos;
            let d = self.signed()?;
            if d == 0 {
                return Err(self.range(at, "rescale factor must be nonzero"));
            }
            self.expect(')')?;
            return Ok(LatticeExpr::Rescale(Box::new(base), d));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Atom> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some('U') => {
                self.pos += 1;
                Ok(Atom::U)
            }
            Some('S') => {
                self.pos += 1;
                if self.chars.get(self.pos) == Some(&'4') {
                    self.pos += 1;
                    Ok(Atom::S4)
                } else {
                    Err(self.err("expected 'S4'"))
                }
            }
            Some(c @ ('A' | 'D' | 'E')) => {
                self.pos += 1;
                if !self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    return Err(self.err(format!("expected index after '{c}'")));
                }
                let n = self.unsigned()?;
                let n = u32::try_from(n).unwrap_or(u32::MAX);
                match c {
                    'A' if n >= 1 => Ok(Atom::A(n)),
                    'D' if n >= 2 => Ok(Atom::D(n)),
                    'E' if (6..=8).contains(&n) => Ok(Atom::E(n)),
                    _ => Err(self.range(start, format!("no root lattice {c}{n}"))),
                }
            }
            Some('<') => {
                self.pos += 1;
                self.skip_ws();
                let at = self.pos;
                let v = self.signed()?;
                self.expect('>')?;
                if v == 0 || v % 2 != 0 {
                    return Err(self.range(at, format!("<{v}> is not a nonzero even value")));
                }
                Ok(Atom::Gen(v))
            }
            Some('[') => self.gram(),
            Some(c) => Err(self.err(format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn gram(&mut self) -> Result<Atom> {
        let start = self.pos;
        self.expect('[')?;
        let mut rows = Vec::new();
        loop {
            self.expect('[')?;
            let mut row = vec![self.signed()?];
            while self.eat(',') {
                row.push(self.signed()?);
            }
            self.expect(']')?;
            rows.push(row);
            if !self.eat(',') {
                break;
            }
        }
        self.expect(']')?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(self.range(start, "Gram matrix is not square"));
        }
        for i in 0..n {
            if rows[i][i] % 2 != 0 {
                return Err(self.range(start, "Gram matrix has an odd diagonal entry"));
            }
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(self.range(start, "Gram matrix is not symmetric"));
                }
            }
        }
        Ok(Atom::Gram(rows))
    }

    fn unsigned(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| self.range(start, format!("integer {s} too large")))
    }

    fn signed(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let neg = if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
            true
        } else {
            if self.chars.get(self.pos) == Some(&'+') {
                self.pos += 1;
            }
            false
        };
        let v = self.unsigned()?;
        let v = i64::try_from(v).map_err(|_| self.range(start, "integer too large"))?;
        Ok(if neg { -v } else { v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_names() {
        let e = parse("U^2 + A1(-13)").unwrap();
        assert_eq!(
            e,
            LatticeExpr::Sum(vec![
                LatticeExpr::Power(Box::new(LatticeExpr::Atom(Atom::U)), 2),
                LatticeExpr::Rescale(Box::new(LatticeExpr::Atom(Atom::A(1))), -13),
            ])
        );
        assert_eq!(e.u_count(), 2);
        let e = parse("U ⊕ E8(-1)⊕A1(-1)").unwrap();
        assert_eq!(e.to_string(), "U + E8(-1) + A1(-1)");
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("E9"), Err(OmvError::Range { pos: 0, .. })));
        assert!(matches!(parse("D1"), Err(OmvError::Range { .. })));
        assert!(matches!(parse("A2(0)"), Err(OmvError::Range { pos: 3, .. })));
        assert!(matches!(parse("U +"), Err(OmvError::Parse { pos: 3, .. })));
        assert!(matches!(parse("U ^ x"), Err(OmvError::Parse { pos: 4, .. })));
        assert!(matches!(parse("<3>"), Err(OmvError::Range { .. })));
        assert!(matches!(parse("[[2,1],[0,2]]"), Err(OmvError::Range { .. })));
        assert!(matches!(parse("U U"), Err(OmvError::Parse { pos: 2, .. })));
    }

    #[test]
    fn gram_literal() {
        let e = parse("[[2, -1], [-1, 2]](3)").unwrap();
        assert_eq!(e.to_string(), "[[2,-1],[-1,2]](3)");
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn u_count_ignores_rescaled_u() {
        assert_eq!(parse("U(2) + U + U(-1)^2").unwrap().u_count(), 1);
        assert_eq!(parse("U^3").unwrap().u_count(), 3);
    }
}
