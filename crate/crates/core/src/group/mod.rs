//! Virtually abelian groups presented as extensions of `ℤⁿ` by a finite
//! coset table.
//!
//! Every element is stored in its normal form `z · t`, where `z ∈ ℤⁿ` is the
//! translation part and `t` one of the `d` coset representatives. The
//! representatives are abstract: the spec only records how they act on `ℤⁿ`
//! by conjugation (`x R_t = t x t⁻¹`) and how they multiply
//! (`t_a t_b = c(a, b) · t_{a·b}`).

mod matrix;
mod parse;
mod validate;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

pub use matrix::{rank, IntMatrix};
pub use parse::SpecParseError;
pub use validate::{ValidationReport, Violation, Warning};

use crate::error::Error;

/// Index of a coset of `ℤⁿ`. Internally zero-based; coset `0` is `ℤⁿ`
/// itself. Files and diagnostics use the one-based numbering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset(pub usize);

impl Coset {
    pub const IDENTITY: Coset = Coset(0);

    pub fn index(self) -> usize {
        self.0
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

/// Index of a generator in [`GroupSpec::generators`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(pub u16);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A word over the generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, g: Gen) {
        self.0.push(g);
    }

    /// The first `min(len, n)` letters.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }
}

impl From<Vec<Gen>> for Word {
    fn from(v: Vec<Gen>) -> Self {
        Word(v)
    }
}

/// A group element in normal form `z · t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub z: Vec<BigInt>,
    pub t: Coset,
}

impl Element {
    pub fn identity(rank: usize) -> Self {
        Element { z: vec![BigInt::zero(); rank], t: Coset::IDENTITY }
    }

    pub fn translation(z: Vec<BigInt>) -> Self {
        Element { z, t: Coset::IDENTITY }
    }

    pub fn is_identity(&self) -> bool {
        self.t.is_identity() && self.z.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "((")?;
        for (i, x) in self.z.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "),{})", self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub weight: u64,
    pub element: Element,
}

/// Extension data for a virtually abelian group `G ⊇ ℤⁿ` of index `d`,
/// together with a weighted monoid generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    name: String,
    rank: usize,
    index: usize,
    actions: Vec<IntMatrix>,
    coset_table: Vec<Vec<Coset>>,
    cocycle: Vec<Vec<Vec<BigInt>>>,
    generators: Vec<Generator>,
    labels: HashMap<String, Gen>,
}

impl GroupSpec {
    /// Assembles a spec from raw parts. Only shapes are checked here; the
    /// algebraic identities are the job of [`GroupSpec::validate`].
    ///
    /// `actions`, `coset_table` and `cocycle` are indexed by zero-based
    /// cosets and must cover all `d` (resp. `d × d`) entries.
    pub fn from_parts(
        name: impl Into<String>,
        rank: usize,
        actions: Vec<IntMatrix>,
        coset_table: Vec<Vec<Coset>>,
        cocycle: Vec<Vec<Vec<BigInt>>>,
        generators: Vec<Generator>,
    ) -> Result<Self, Error> {
        let index = actions.len();
        let shape = |msg: String| Err(Error::Spec(SpecParseError::Shape(msg)));
        if index == 0 {
            return shape("index must be positive".into());
        }
        if rank == 0 {
            return shape("rank must be positive".into());
        }
        if actions.iter().any(|m| m.size() != rank) {
            return shape("action matrix size differs from the rank".into());
        }
        if coset_table.len() != index || coset_table.iter().any(|r| r.len() != index) {
            return shape("coset table must be d × d".into());
        }
        if coset_table.iter().flatten().any(|c| c.0 >= index) {
            return shape("coset table refers to an unknown coset".into());
        }
        if cocycle.len() != index
            || cocycle.iter().any(|r| r.len() != index || r.iter().any(|c| c.len() != rank))
        {
            return shape("cocycle must be d × d vectors of length n".into());
        }
        if generators.is_empty() {
            return shape("at least one generator is required".into());
        }
        if generators.len() > u16::MAX as usize {
            return shape("too many generators".into());
        }
        let mut labels = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.element.z.len() != rank || g.element.t.0 >= index {
                return shape(format!("generator {} has a malformed normal form", g.label));
            }
            if labels.insert(g.label.clone(), Gen(i as u16)).is_some() {
                return shape(format!("duplicate generator label {}", g.label));
            }
        }
        Ok(GroupSpec { name: name.into(), rank, index, actions, coset_table, cocycle, generators, labels })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `n`, the rank of the free abelian normal subgroup.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `d`, the index of `ℤⁿ` in the group.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn action(&self, t: Coset) -> &IntMatrix {
        &self.actions[t.0]
    }

    pub fn coset_product(&self, a: Coset, b: Coset) -> Coset {
        self.coset_table[a.0][b.0]
    }

    pub fn cocycle(&self, a: Coset, b: Coset) -> &[BigInt] {
        &self.cocycle[a.0][b.0]
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, g: Gen) -> &Generator {
        &self.generators[g.index()]
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + '_ {
        (0..self.generators.len()).map(|i| Gen(i as u16))
    }

    pub fn lookup(&self, label: &str) -> Option<Gen> {
        self.labels.get(label).copied()
    }

    pub fn identity(&self) -> Element {
        Element::identity(self.rank)
    }

    /// Checks that an element belongs to this spec's shape.
    pub fn element(&self, z: Vec<BigInt>, t: Coset) -> Result<Element, Error> {
        if z.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: z.len() });
        }
        if t.0 >= self.index {
            return Err(Error::UnknownCoset(t.0 + 1));
        }
        Ok(Element { z, t })
    }

    /// `(z₁ t₁)(z₂ t₂) = (z₁ + z₂ R_{t₁} + c(t₁, t₂)) · (t₁ t₂)`.
    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut z = self.actions[a.t.0].apply(&b.z);
        let c = &self.cocycle[a.t.0][b.t.0];
        for ((zi, ai), ci) in z.iter_mut().zip(&a.z).zip(c) {
            *zi += ai;
            *zi += ci;
        }
        Element { z, t: self.coset_table[a.t.0][b.t.0] }
    }

    pub fn inverse(&self, e: &Element) -> Element {
        let inv = self.coset_inverse(e.t);
        // z + z' R_t + c(t, t*) = 0, and R_t⁻¹ = R_{t*} because R_1 = R_{t*} R_t.
        let mut rhs: Vec<BigInt> = e.z.iter().zip(&self.cocycle[e.t.0][inv.0]).map(|(a, b)| -(a + b)).collect();
        rhs = self.actions[inv.0].apply(&rhs);
        Element { z: std::mem::take(&mut rhs), t: inv }
    }

    /// The unique coset `t*` with `t · t* = 1`.
    pub fn coset_inverse(&self, t: Coset) -> Coset {
        let row = &self.coset_table[t.0];
        Coset(row.iter().position(|c| c.is_identity()).expect("coset table has no inverse; validate the spec"))
    }

    pub fn evaluate(&self, w: &Word) -> Element {
        let mut acc = self.identity();
        for &g in w.letters() {
            acc = self.multiply(&acc, &self.generators[g.index()].element);
        }
        acc
    }

    /// `ρ` of the evaluated word, computed on the coset table alone.
    pub fn coset_of(&self, w: &[Gen]) -> Coset {
        w.iter().fold(Coset::IDENTITY, |acc, g| self.coset_table[acc.0][self.generators[g.index()].element.t.0])
    }

    pub fn word_weight(&self, w: &Word) -> u64 {
        w.letters().iter().map(|g| self.generators[g.index()].weight).sum()
    }

    pub fn max_weight(&self) -> u64 {
        self.generators.iter().map(|g| g.weight).max().unwrap_or(0)
    }

    /// Parses a word given either as whitespace separated labels
    /// (`"r s r"`) or, when every label is a single character, as a
    /// contiguous string (`"rsr"`). The empty string is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, Error> {
        let text = text.trim();
        if text.is_empty() || text == "ε" || text == "eps" {
            return Ok(Word::empty());
        }
        let tokens: Vec<String> = if text.contains(char::is_whitespace) {
            text.split_whitespace().map(str::to_owned).collect()
        } else if self.lookup(text).is_some() {
            vec![text.to_owned()]
        } else {
            text.chars().map(String::from).collect()
        };
        tokens
            .iter()
            .map(|t| self.lookup(t).ok_or_else(|| Error::UnknownLabel(t.clone())))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Renders a word as space separated labels (`ε` for the empty word).
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_owned();
        }
        let labels: Vec<&str> = w.letters().iter().map(|g| self.generators[g.index()].label.as_str()).collect();
        if labels.iter().all(|l| l.chars().count() == 1) {
            labels.concat()
        } else {
            labels.join(" ")
        }
    }

    /// Mutable access for building variants of a spec (mutation tests,
    /// programmatic construction).
    pub fn action_mut(&mut self, t: Coset) -> &mut IntMatrix {
        &mut self.actions[t.0]
    }

    pub fn cocycle_mut(&mut self, a: Coset, b: Coset) -> &mut Vec<BigInt> {
        &mut self.cocycle[a.0][b.0]
    }

    pub fn coset_product_mut(&mut self, a: Coset, b: Coset) -> &mut Coset {
        &mut self.coset_table[a.0][b.0]
    }
}
