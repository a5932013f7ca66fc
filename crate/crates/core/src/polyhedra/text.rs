//! Line format for hand-written sets:
//!
//! ```text
//! # x = 1 and y > 10
//! eq 1 0 1
//! gt 0 1 10
//! ---
//! # or x ≡ 0 (mod 2), y ≥ 0
//! cong 1 0 0 2
//! ge 0 1 0
//! ```
//!
//! `ge`, `le` and `lt` are rewritten into `gt`. A basic with no atoms is
//! written `true`. `===` separates whole unions in multi-set files.

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::{Atom, BasicSet, PolySet};
use crate::error::Error;

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Format { line, message: message.into() }
}

/// Parses one atom line (already stripped of comments). `dim` fixes the
/// expected number of coefficients once known.
pub(crate) fn parse_atom(line: usize, tokens: &[&str], dim: Option<usize>) -> Result<Atom, Error> {
    let kind = tokens[0];
    let nums = tokens[1..]
        .iter()
        .map(|t| t.parse::<BigInt>().map_err(|_| err(line, format!("`{t}` is not an integer"))))
        .collect::<Result<Vec<_>, _>>()?;
    let extra = usize::from(kind == "cong");
    let need = |n: usize| match dim {
        Some(d) if d + 1 + extra != n => Err(err(line, format!("expected {} numbers after `{kind}`, found {n}", d + 1 + extra))),
        _ if n < 2 + extra => Err(err(line, format!("too few numbers after `{kind}`"))),
        _ => Ok(()),
    };
    need(nums.len())?;
    let neg = |v: &[BigInt]| v.iter().map(|x| -x).collect::<Vec<_>>();
    let (a, rest) = nums.split_at(nums.len() - 1 - extra);
    let a = a.to_vec();
    let b = rest[0].clone();
    Ok(match kind {
        "eq" => Atom::eq(a, b),
        "gt" => Atom::gt(a, b),
        "ge" => Atom::ge(a, b),
        "lt" => Atom::gt(neg(&a), -b),
        "le" => Atom::ge(neg(&a), -b),
        "cong" => Atom::cong(a, b, rest[1].clone()).map_err(|e| err(line, e.to_string()))?,
        other => return Err(err(line, format!("unknown atom kind `{other}`"))),
    })
}

/// Accumulates basics from lines; shared with the decomposition format.
pub(crate) struct UnionBuilder {
    pub dim: Option<usize>,
    basics: Vec<BasicSet>,
    current: Vec<Atom>,
    current_true: bool,
}

impl UnionBuilder {
    pub fn new(dim: Option<usize>) -> Self {
        UnionBuilder { dim, basics: Vec::new(), current: Vec::new(), current_true: false }
    }

    /// Feeds one non-empty, comment-free line.
    pub fn line(&mut self, no: usize, tokens: &[&str]) -> Result<(), Error> {
        match tokens[0] {
            "---" => self.close_basic(),
            "true" if tokens.len() == 1 => {
                self.current_true = true;
                Ok(())
            }
            _ => {
                let atom = parse_atom(no, tokens, self.dim)?;
                self.dim.get_or_insert(atom.dim());
                self.current.push(atom);
                Ok(())
            }
        }
    }

    fn close_basic(&mut self) -> Result<(), Error> {
        if !self.current.is_empty() || self.current_true {
            let dim = self.dim.unwrap_or(0);
            self.basics.push(BasicSet::new(dim, std::mem::take(&mut self.current))?);
        }
        self.current_true = false;
        Ok(())
    }

    pub fn finish(mut self, fallback_dim: usize) -> Result<PolySet, Error> {
        self.close_basic()?;
        let dim = self.dim.unwrap_or(fallback_dim);
        let basics = self.basics.into_iter().map(|b| if b.atoms.is_empty() { BasicSet::universe(dim) } else { b }).collect();
        PolySet::new(dim, basics)
    }
}

pub(crate) fn tokens(line: &str) -> Vec<&str> {
    line.split('#').next().unwrap_or("").split_whitespace().collect()
}

impl PolySet {
    /// Parses a single union. `dim` is required when the text has no
    /// atoms (the empty set or `true`).
    pub fn parse(text: &str, dim: Option<usize>) -> Result<PolySet, Error> {
        let mut sets = PolySet::parse_many(text, dim)?;
        if sets.len() != 1 {
            return Err(Error::Invalid(format!("expected one union, found {}", sets.len())));
        }
        Ok(sets.pop().expect("length checked"))
    }

    /// Parses unions separated by `===`.
    pub fn parse_many(text: &str, dim: Option<usize>) -> Result<Vec<PolySet>, Error> {
        let mut out = Vec::new();
        let mut b = UnionBuilder::new(dim);
        for (i, line) in text.lines().enumerate() {
            let t = tokens(line);
            if t.is_empty() {
                continue;
            }
            if t[0] == "===" {
                let done = std::mem::replace(&mut b, UnionBuilder::new(dim));
                out.push(done.finish(dim.unwrap_or(0))?);
            } else {
                b.line(i + 1, &t)?;
            }
        }
        out.push(b.finish(dim.unwrap_or(0))?);
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, b) in self.basics.iter().enumerate() {
            if i > 0 {
                out.push_str("---\n");
            }
            if b.atoms.is_empty() {
                out.push_str("true\n");
            }
            for a in &b.atoms {
                writeln!(out, "{a}").unwrap();
            }
        }
        out
    }
}
