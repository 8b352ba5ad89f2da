//! Table of known infinite-lattice resistances.
//!
//! The table ships as `data/closed_forms.toml`. Every entry stores both a
//! symbolic expression and a float; loading re-evaluates the expression and
//! rejects the table if the two disagree by more than 1e-14.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::FosterError;
use crate::lattice::{LatticeFamily, PairClass, SubdividedPair};

const BUILTIN: &str = include_str!("../data/closed_forms.toml");
const MATCH_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormEntry {
    pub family: String,
    pub pair: String,
    pub expr: String,
    pub value: f64,
    pub source: String,
}

/// What a report carries when its pair has a known closed form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormRef {
    pub expr: String,
    pub value: f64,
    pub source: String,
}

impl ClosedFormEntry {
    pub fn reference(&self) -> ClosedFormRef {
        ClosedFormRef {
            expr: self.expr.clone(),
            value: self.value,
            source: self.source.clone(),
        }
    }

    /// Lattice family, or `None` for subdivided-lattice entries.
    pub fn lattice_family(&self) -> Option<LatticeFamily> {
        self.family.parse().ok()
    }

    pub fn pair_class(&self) -> Option<PairClass> {
        PairClass::parse(self.lattice_family()?, &self.pair).ok()
    }

    /// `(base family, pair)` for entries of the form `subdivided-<family>`.
    pub fn subdivided(&self) -> Option<(LatticeFamily, SubdividedPair)> {
        let base = self.family.strip_prefix("subdivided-")?;
        Some((base.parse().ok()?, self.pair.parse().ok()?))
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ClosedFormTable {
    #[serde(rename = "entry")]
    pub entries: Vec<ClosedFormEntry>,
}

impl ClosedFormTable {
    /// Parses a table and checks every float against its expression.
    pub fn from_toml(text: &str) -> Result<Self, FosterError> {
        let table: ClosedFormTable =
            toml::from_str(text).map_err(|e| FosterError::Table(e.to_string()))?;
        for e in &table.entries {
            let v = eval_expr(&e.expr).map_err(FosterError::Table)?;
            if (v - e.value).abs() > MATCH_TOLERANCE {
                return Err(FosterError::Table(format!(
                    "{}:{} stores {} but {} evaluates to {}",
                    e.family, e.pair, e.value, e.expr, v
                )));
            }
            if e.pair_class().is_none() && e.subdivided().is_none() {
                return Err(FosterError::Table(format!(
                    "{}:{} names no known pair class",
                    e.family, e.pair
                )));
            }
        }
        Ok(table)
    }

    /// The bundled table.
    pub fn builtin() -> &'static ClosedFormTable {
        static TABLE: OnceLock<ClosedFormTable> = OnceLock::new();
        TABLE.get_or_init(|| ClosedFormTable::from_toml(BUILTIN).expect("bundled closed-form table is valid"))
    }

    /// Entry whose pair class resolves to the same site as `pc`.
    pub fn lookup(&self, pc: &PairClass) -> Option<&ClosedFormEntry> {
        self.entries.iter().find(|e| {
            e.pair_class()
                .is_some_and(|c| c.family == pc.family && c.target_site() == pc.target_site())
        })
    }

    pub fn lookup_subdivided(&self, family: LatticeFamily, which: SubdividedPair) -> Option<&ClosedFormEntry> {
        self.entries.iter().find(|e| e.subdivided() == Some((family, which)))
    }
}

/// Evaluates arithmetic over numbers, `pi`, `sqrt(·)` and `atan(·)`.
pub fn eval_expr(text: &str) -> Result<f64, String> {
    let mut p = ExprParser { src: text.as_bytes(), pos: 0 };
    let v = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(format!("trailing input in {text:?} at byte {}", p.pos));
    }
    Ok(v)
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), String> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected {:?} at byte {}", c as char, self.pos))
        }
    }

    fn sum(&mut self) -> Result<f64, String> {
        let mut acc = self.product()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<f64, String> {
        let mut acc = self.power()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.power()?;
            acc = if op == b'*' { acc * rhs } else { acc / rhs };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<f64, String> {
        let base = self.unary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.power()?;
            return Ok(base.powf(exp));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                s.parse().map_err(|_| format!("bad number {s:?}"))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match name {
                    "pi" => Ok(std::f64::consts::PI),
                    "sqrt" | "atan" => {
                        self.expect(b'(')?;
                        let arg = self.sum()?;
                        self.expect(b')')?;
                        Ok(if name == "sqrt" { arg.sqrt() } else { arg.atan() })
                    }
                    _ => Err(format!("unknown name {name:?}")),
                }
            }
            other => Err(format!(
                "unexpected {:?} at byte {}",
                other.map(|c| c as char),
                self.pos
            )),
        }
    }
}
