use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Coset, Element, Generator, GroupSpec, IntMatrix};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("malformed spec: {0}")]
    Shape(String),
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Spec(SpecParseError::Syntax { line, message: message.into() })
}

struct Line<'a> {
    no: usize,
    tokens: Vec<&'a str>,
}

impl Line<'_> {
    fn int(&self, i: usize) -> Result<BigInt, Error> {
        let tok = self.tokens.get(i).ok_or_else(|| syntax(self.no, "too few fields"))?;
        tok.parse().map_err(|_| syntax(self.no, format!("`{tok}` is not an integer")))
    }

    fn usize(&self, i: usize) -> Result<usize, Error> {
        let tok = self.tokens.get(i).ok_or_else(|| syntax(self.no, "too few fields"))?;
        tok.parse().map_err(|_| syntax(self.no, format!("`{tok}` is not a non-negative integer")))
    }

    fn coset(&self, i: usize, d: usize) -> Result<Coset, Error> {
        let t = self.usize(i)?;
        if t == 0 || t > d {
            return Err(syntax(self.no, format!("coset index {t} outside 1..{d}")));
        }
        Ok(Coset(t - 1))
    }

    fn ints(&self, from: usize, count: usize) -> Result<Vec<BigInt>, Error> {
        if self.tokens.len() != from + count {
            return Err(syntax(
                self.no,
                format!("expected {count} integers after `{}`, found {}", self.tokens[0], self.tokens.len().saturating_sub(from)),
            ));
        }
        (from..from + count).map(|i| self.int(i)).collect()
    }
}

type Product = (Coset, Vec<BigInt>);

impl GroupSpec {
    /// Parses the line-oriented group file format.
    ///
    /// ```text
    /// group Dinf
    /// rank 1
    /// index 2
    /// action 2 -1
    /// cosetmul 2 2 1 0
    /// gen r 1 2 0
    /// gen s 1 2 1
    /// ```
    pub fn parse(text: &str) -> Result<GroupSpec, Error> {
        let lines: Vec<Line> = text
            .lines()
            .enumerate()
            .map(|(i, l)| Line { no: i + 1, tokens: l.split('#').next().unwrap_or("").split_whitespace().collect() })
            .filter(|l| !l.tokens.is_empty())
            .collect();

        let mut name = None;
        let mut rank = None;
        let mut index = None;
        for l in &lines {
            let slot = match l.tokens[0] {
                "group" => {
                    if l.tokens.len() != 2 {
                        return Err(syntax(l.no, "expected `group <name>`"));
                    }
                    if name.replace(l.tokens[1].to_owned()).is_some() {
                        return Err(syntax(l.no, "duplicate `group` line"));
                    }
                    continue;
                }
                "rank" => &mut rank,
                "index" => &mut index,
                "action" | "cosetmul" | "gen" => continue,
                other => return Err(syntax(l.no, format!("unknown directive `{other}`"))),
            };
            if l.tokens.len() != 2 {
                return Err(syntax(l.no, format!("expected `{} <positive integer>`", l.tokens[0])));
            }
            let v = l.usize(1)?;
            if v == 0 {
                return Err(syntax(l.no, format!("{} must be positive", l.tokens[0])));
            }
            if slot.replace((v, l.no)).is_some() {
                return Err(syntax(l.no, format!("duplicate `{}` line", l.tokens[0])));
            }
        }
        let name = name.ok_or(Error::Spec(SpecParseError::Missing("group")))?;
        let (n, _) = rank.ok_or(Error::Spec(SpecParseError::Missing("rank")))?;
        let (d, _) = index.ok_or(Error::Spec(SpecParseError::Missing("index")))?;

        let mut actions: Vec<Option<IntMatrix>> = vec![None; d];
        actions[0] = Some(IntMatrix::identity(n));
        // (a, b) ↦ the product's coset and cocycle, once given.
        let mut table: Vec<Vec<Option<Product>>> = vec![vec![None; d]; d];
        let trivial = |a: usize| Some((Coset(a), vec![BigInt::zero(); n]));
        for (a, row) in table.iter_mut().enumerate() {
            row[0] = trivial(a);
        }
        for (a, slot) in table[0].iter_mut().enumerate() {
            *slot = trivial(a);
        }
        let mut generators = Vec::new();
        let mut seen_labels = HashMap::new();

        for l in &lines {
            match l.tokens[0] {
                "action" => {
                    let t = l.coset(1, d)?;
                    if t.is_identity() {
                        return Err(syntax(l.no, "the action of coset 1 is the identity and may not be given"));
                    }
                    let entries = l.ints(2, n * n)?;
                    if actions[t.0].replace(IntMatrix::from_row_major(n, entries).expect("length checked")).is_some() {
                        return Err(syntax(l.no, format!("duplicate action for coset {t}")));
                    }
                }
                "cosetmul" => {
                    let a = l.coset(1, d)?;
                    let b = l.coset(2, d)?;
                    if a.is_identity() || b.is_identity() {
                        return Err(syntax(l.no, "products with coset 1 are implied and may not be given"));
                    }
                    let t = l.coset(3, d)?;
                    let c = l.ints(4, n)?;
                    let cell = &mut table[a.0][b.0];
                    if cell.is_some() {
                        return Err(syntax(l.no, format!("duplicate cosetmul for ({a}, {b})")));
                    }
                    *cell = Some((t, c));
                }
                "gen" => {
                    if l.tokens.len() < 4 {
                        return Err(syntax(l.no, "expected `gen <label> <weight> <t> <z_1 … z_n>`"));
                    }
                    let label = l.tokens[1];
                    let weight: u64 = l.tokens[2]
                        .parse()
                        .map_err(|_| syntax(l.no, format!("weight `{}` is not a non-negative integer", l.tokens[2])))?;
                    if weight == 0 {
                        return Err(syntax(l.no, format!("generator {label} has weight 0; weights must be positive")));
                    }
                    let t = l.coset(3, d)?;
                    let z = l.ints(4, n)?;
                    if seen_labels.insert(label, l.no).is_some() {
                        return Err(syntax(l.no, format!("duplicate generator label `{label}`")));
                    }
                    if matches!(label, "eps" | "ε") {
                        return Err(syntax(l.no, format!("`{label}` is reserved for the empty word")));
                    }
                    generators.push(Generator { label: label.to_owned(), weight, element: Element { z, t } });
                }
                _ => {}
            }
        }

        let actions = actions
            .into_iter()
            .enumerate()
            .map(|(t, m)| m.ok_or_else(|| Error::Spec(SpecParseError::Shape(format!("no action given for coset {}", t + 1)))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut coset_table = vec![vec![Coset(0); d]; d];
        let mut cocycle = vec![vec![Vec::new(); d]; d];
        for (a, row) in table.into_iter().enumerate() {
            for (b, cell) in row.into_iter().enumerate() {
                let (t, c) = cell.ok_or_else(|| {
                    Error::Spec(SpecParseError::Shape(format!("no cosetmul given for ({}, {})", a + 1, b + 1)))
                })?;
                coset_table[a][b] = t;
                cocycle[a][b] = c;
            }
        }
        GroupSpec::from_parts(name, n, actions, coset_table, cocycle, generators)
    }

    /// Writes the spec back in the file format accepted by [`GroupSpec::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let join = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        writeln!(out, "group {}", self.name).unwrap();
        writeln!(out, "rank {}", self.rank).unwrap();
        writeln!(out, "index {}", self.index).unwrap();
        for t in 1..self.index {
            writeln!(out, "action {} {}", t + 1, join(self.actions[t].entries())).unwrap();
        }
        for a in 1..self.index {
            for b in 1..self.index {
                writeln!(out, "cosetmul {} {} {} {}", a + 1, b + 1, self.coset_table[a][b], join(&self.cocycle[a][b])).unwrap();
            }
        }
        for g in &self.generators {
            writeln!(out, "gen {} {} {} {}", g.label, g.weight, g.element.t, join(&g.element.z)).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn round_trip() {
        for text in [Z, Z2, DINF, P4] {
            let s = spec(text);
            assert_eq!(GroupSpec::parse(&s.to_text()).unwrap(), s);
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = GroupSpec::parse("# infinite cyclic\n\ngroup Z # name\nrank 1\nindex 1\ngen a 1 1 1\n").unwrap();
        assert_eq!(s.generators().len(), 1);
        assert_eq!(s.name(), "Z");
    }

    fn err_line(text: &str) -> usize {
        match GroupSpec::parse(text) {
            Err(Error::Spec(SpecParseError::Syntax { line, .. })) => line,
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(err_line("group Z\nrank 1\nindex 1\ngen a 0 1 1\n"), 4);
        assert_eq!(err_line("group Z\nrank 1\nindex 1\ngen a 1 1 1 2\n"), 4);
        assert_eq!(err_line("group Z\nrank x\nindex 1\n"), 2);
        assert_eq!(err_line("group D\nrank 1\nindex 2\naction 1 1\n"), 4);
        assert_eq!(err_line("group D\nrank 1\nindex 2\ncosetmul 3 2 1 0\n"), 4);
        assert_eq!(err_line("group D\nfrobnicate\n"), 2);
    }

    #[test]
    fn missing_pieces() {
        assert!(matches!(GroupSpec::parse("rank 1\nindex 1\ngen a 1 1 1\n"), Err(Error::Spec(SpecParseError::Missing("group")))));
        assert!(matches!(
            GroupSpec::parse("group D\nrank 1\nindex 2\ncosetmul 2 2 1 0\ngen r 1 2 0\n"),
            Err(Error::Spec(SpecParseError::Shape(_)))
        ));
        assert!(matches!(
            GroupSpec::parse("group D\nrank 1\nindex 2\naction 2 -1\ngen r 1 2 0\n"),
            Err(Error::Spec(SpecParseError::Shape(_)))
        ));
    }
}
