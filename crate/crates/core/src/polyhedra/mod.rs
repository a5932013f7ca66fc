//! Polyhedral (semilinear) subsets of `ℤᵐ`: finite unions of finite
//! conjunctions of linear equalities, strict inequalities and congruences.

mod search;
mod text;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use search::{cube, enumerate_in_box, exists_point, Bounds};
pub(crate) use text::{tokens, UnionBuilder};

use crate::error::Error;

fn dot(a: &[BigInt], z: &[BigInt]) -> BigInt {
    a.iter().zip(z).map(|(x, y)| x * y).sum()
}

/// An elementary region.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `a · z = b`
    Eq { a: Vec<BigInt>, b: BigInt },
    /// `a · z > b`
    Gt { a: Vec<BigInt>, b: BigInt },
    /// `a · z ≡ b (mod c)` with `c ≥ 1` and `0 ≤ b < c`.
    Cong { a: Vec<BigInt>, b: BigInt, c: BigInt },
}

impl Atom {
    pub fn eq(a: Vec<BigInt>, b: BigInt) -> Atom {
        Atom::Eq { a, b }
    }

    pub fn gt(a: Vec<BigInt>, b: BigInt) -> Atom {
        Atom::Gt { a, b }
    }

    /// `a · z ≥ b`, stored as `a · z > b − 1`.
    pub fn ge(a: Vec<BigInt>, b: BigInt) -> Atom {
        Atom::Gt { a, b: b - 1 }
    }

    /// Normalizes the residue into `[0, c)`; `c` must be positive.
    pub fn cong(a: Vec<BigInt>, b: BigInt, c: BigInt) -> Result<Atom, Error> {
        if !c.is_positive() {
            return Err(Error::Invalid(format!("congruence modulus must be positive, got {c}")));
        }
        let b = b.mod_floor(&c);
        Ok(Atom::Cong { a, b, c })
    }

    /// `z_i = value`.
    pub fn coord_eq(dim: usize, i: usize, value: impl Into<BigInt>) -> Atom {
        Atom::Eq { a: unit(dim, i), b: value.into() }
    }

    /// `z_i > value`.
    pub fn coord_gt(dim: usize, i: usize, value: impl Into<BigInt>) -> Atom {
        Atom::Gt { a: unit(dim, i), b: value.into() }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        match self {
            Atom::Eq { a, .. } | Atom::Gt { a, .. } | Atom::Cong { a, .. } => a,
        }
    }

    pub fn rhs(&self) -> &BigInt {
        match self {
            Atom::Eq { b, .. } | Atom::Gt { b, .. } | Atom::Cong { b, .. } => b,
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs().len()
    }

    pub fn holds(&self, z: &[BigInt]) -> bool {
        self.holds_value(&dot(self.coeffs(), z))
    }

    /// Whether the atom holds when `a · z` equals `value`.
    pub fn holds_value(&self, value: &BigInt) -> bool {
        match self {
            Atom::Eq { b, .. } => value == b,
            Atom::Gt { b, .. } => value > b,
            Atom::Cong { b, c, .. } => &value.mod_floor(c) == b,
        }
    }

    /// Pairwise disjoint atoms whose union is the complement.
    pub fn complement(&self) -> Vec<Atom> {
        let neg = |a: &[BigInt]| a.iter().map(|x| -x).collect::<Vec<_>>();
        match self {
            Atom::Eq { a, b } => vec![Atom::Gt { a: a.clone(), b: b.clone() }, Atom::Gt { a: neg(a), b: -b }],
            Atom::Gt { a, b } => vec![Atom::Eq { a: a.clone(), b: b.clone() }, Atom::Gt { a: neg(a), b: -b }],
            Atom::Cong { a, b, c } => {
                let mut out = Vec::new();
                let mut r = BigInt::zero();
                while &r < c {
                    if &r != b {
                        out.push(Atom::Cong { a: a.clone(), b: r.clone(), c: c.clone() });
                    }
                    r += 1;
                }
                out
            }
        }
    }

    /// A sound, incomplete test that no point satisfies both atoms: they
    /// constrain the same linear form `±a · z` incompatibly.
    pub fn conflicts(&self, other: &Atom) -> bool {
        let (a, b) = (self.coeffs(), other.coeffs());
        let sign = if a == b {
            1
        } else if a.iter().zip(b).all(|(x, y)| x == &-y) && a.iter().any(|x| !x.is_zero()) {
            -1
        } else {
            return false;
        };
        // `flip` carries a value of one form to the other, and in either
        // order an equality's value read in the other atom's form is
        // `flip(x)`.
        let flip = |v: &BigInt| if sign == 1 { v.clone() } else { -v };
        match (self, other) {
            (Atom::Eq { b: x, .. }, Atom::Eq { b: y, .. }) => x != &flip(y),
            (Atom::Eq { b: x, .. }, Atom::Gt { b: y, .. }) | (Atom::Gt { b: y, .. }, Atom::Eq { b: x, .. }) => &flip(x) <= y,
            // s > x and -s > y leave no integer when x + y ≥ -1.
            (Atom::Gt { b: x, .. }, Atom::Gt { b: y, .. }) => sign == -1 && x + y >= BigInt::from(-1),
            (Atom::Cong { b: x, c, .. }, Atom::Cong { b: y, c: d, .. }) => c == d && x != &flip(y).mod_floor(c),
            (Atom::Eq { b: x, .. }, Atom::Cong { b: r, c, .. }) | (Atom::Cong { b: r, c, .. }, Atom::Eq { b: x, .. }) => {
                &flip(x).mod_floor(c) != r
            }
            _ => false,
        }
    }

    /// The truth value when it does not depend on `z`.
    fn constant_value(&self) -> Option<bool> {
        if self.coeffs().iter().all(Zero::is_zero) {
            Some(self.holds_value(&BigInt::zero()))
        } else if matches!(self, Atom::Cong { c, .. } if c.is_one()) {
            Some(true)
        } else {
            None
        }
    }

    fn pad(&self, before: usize, after: usize) -> Atom {
        let widen = |a: &[BigInt]| {
            let mut v = vec![BigInt::zero(); before];
            v.extend_from_slice(a);
            v.resize(before + a.len() + after, BigInt::zero());
            v
        };
        match self {
            Atom::Eq { a, b } => Atom::Eq { a: widen(a), b: b.clone() },
            Atom::Gt { a, b } => Atom::Gt { a: widen(a), b: b.clone() },
            Atom::Cong { a, b, c } => Atom::Cong { a: widen(a), b: b.clone(), c: c.clone() },
        }
    }

    fn pull_back(&self, map: &AffineMap) -> Atom {
        let a = map.pull_back_coeffs(self.coeffs());
        let shift = dot(self.coeffs(), &map.offset);
        match self {
            Atom::Eq { b, .. } => Atom::Eq { a, b: b - shift },
            Atom::Gt { b, .. } => Atom::Gt { a, b: b - shift },
            Atom::Cong { b, c, .. } => Atom::Cong { a, b: (b - shift).mod_floor(c), c: c.clone() },
        }
    }
}

fn unit(dim: usize, i: usize) -> Vec<BigInt> {
    let mut a = vec![BigInt::zero(); dim];
    a[i] = BigInt::one();
    a
}

/// A conjunction of atoms. No atoms means all of `ℤᵐ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicSet {
    dim: usize,
    atoms: Vec<Atom>,
}

impl BasicSet {
    pub fn universe(dim: usize) -> BasicSet {
        BasicSet { dim, atoms: Vec::new() }
    }

    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<BasicSet, Error> {
        if let Some(a) = atoms.iter().find(|a| a.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: a.dim() });
        }
        Ok(BasicSet { dim, atoms })
    }

    /// The single point `p`, as coordinate equalities.
    pub fn point(p: &[BigInt]) -> BasicSet {
        let dim = p.len();
        BasicSet { dim, atoms: p.iter().enumerate().map(|(i, x)| Atom::coord_eq(dim, i, x.clone())).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn push(&mut self, atom: Atom) -> Result<(), Error> {
        if atom.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: atom.dim() });
        }
        self.atoms.push(atom);
        Ok(())
    }

    pub fn member(&self, z: &[BigInt]) -> bool {
        self.atoms.iter().all(|a| a.holds(z))
    }

    pub fn intersect(&self, other: &BasicSet) -> BasicSet {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        BasicSet { dim: self.dim, atoms }
    }

    pub fn product(&self, other: &BasicSet) -> BasicSet {
        let atoms = self
            .atoms
            .iter()
            .map(|a| a.pad(0, other.dim))
            .chain(other.atoms.iter().map(|a| a.pad(self.dim, 0)))
            .collect();
        BasicSet { dim: self.dim + other.dim, atoms }
    }

    /// Pairwise disjoint basics covering the complement:
    /// `¬a₁`, `a₁ ∧ ¬a₂`, `a₁ ∧ a₂ ∧ ¬a₃`, …
    pub fn complement(&self) -> Vec<BasicSet> {
        let mut out = Vec::new();
        for (i, atom) in self.atoms.iter().enumerate() {
            for piece in atom.complement() {
                let mut atoms = self.atoms[..i].to_vec();
                atoms.push(piece);
                out.push(BasicSet { dim: self.dim, atoms });
            }
        }
        out
    }

    /// Whether two atoms, one from each side, visibly [conflict](Atom::conflicts).
    /// `false` does not mean the sets meet.
    pub fn clearly_disjoint(&self, other: &BasicSet) -> bool {
        self.atoms.iter().any(|a| other.atoms.iter().any(|b| a.conflicts(b)))
    }

    /// Drops atoms that hold everywhere; returns `None` if some atom holds
    /// nowhere or two atoms conflict. Emptiness found this way is certain,
    /// but a returned set may still be empty.
    pub fn simplify(&self) -> Option<BasicSet> {
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for a in &self.atoms {
            match a.constant_value() {
                Some(true) => {}
                Some(false) => return None,
                None => {
                    if !atoms.contains(a) {
                        atoms.push(a.clone());
                    }
                }
            }
        }
        let set = BasicSet { dim: self.dim, atoms };
        (!set.atoms.iter().enumerate().any(|(i, a)| set.atoms[i + 1..].iter().any(|b| a.conflicts(b)))).then_some(set)
    }

    pub fn preimage(&self, map: &AffineMap) -> BasicSet {
        BasicSet { dim: map.domain_dim(), atoms: self.atoms.iter().map(|a| a.pull_back(map)).collect() }
    }
}

/// A finite union of basic sets, optionally certified pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySet {
    dim: usize,
    basics: Vec<BasicSet>,
    disjoint: bool,
}

impl PolySet {
    pub fn empty(dim: usize) -> PolySet {
        PolySet { dim, basics: Vec::new(), disjoint: true }
    }

    pub fn universe(dim: usize) -> PolySet {
        PolySet { dim, basics: vec![BasicSet::universe(dim)], disjoint: true }
    }

    pub fn from_basic(b: BasicSet) -> PolySet {
        PolySet { dim: b.dim, basics: vec![b], disjoint: true }
    }

    /// A union with no disjointness claim.
    pub fn new(dim: usize, basics: Vec<BasicSet>) -> Result<PolySet, Error> {
        if let Some(b) = basics.iter().find(|b| b.dim != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: b.dim });
        }
        let disjoint = basics.len() <= 1;
        Ok(PolySet { dim, basics, disjoint })
    }

    /// A union the caller asserts to be pairwise disjoint.
    pub fn new_disjoint(dim: usize, basics: Vec<BasicSet>) -> Result<PolySet, Error> {
        let mut p = PolySet::new(dim, basics)?;
        p.disjoint = true;
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basics(&self) -> &[BasicSet] {
        &self.basics
    }

    pub fn is_disjoint(&self) -> bool {
        self.disjoint
    }

    fn check(&self, other: &PolySet) -> Result<(), Error> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn member(&self, z: &[BigInt]) -> Result<bool, Error> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: z.len() });
        }
        Ok(self.basics.iter().any(|b| b.member(z)))
    }

    fn collect(dim: usize, basics: impl IntoIterator<Item = BasicSet>, disjoint: bool) -> PolySet {
        PolySet { dim, basics: basics.into_iter().filter_map(|b| b.simplify()).collect(), disjoint }
    }

    pub fn intersect(&self, other: &PolySet) -> Result<PolySet, Error> {
        self.check(other)?;
        let basics = self.basics.iter().flat_map(|p| other.basics.iter().map(move |q| p.intersect(q)));
        Ok(PolySet::collect(self.dim, basics, self.disjoint && other.disjoint))
    }

    pub fn product(&self, other: &PolySet) -> PolySet {
        let basics = self.basics.iter().flat_map(|p| other.basics.iter().map(move |q| p.product(q)));
        PolySet::collect(self.dim + other.dim, basics, self.disjoint && other.disjoint)
    }

    /// Plain union without any disjointness claim.
    pub fn union(&self, other: &PolySet) -> Result<PolySet, Error> {
        self.check(other)?;
        let mut basics = self.basics.clone();
        basics.extend(other.basics.iter().cloned());
        let disjoint = basics.len() <= 1;
        Ok(PolySet { dim: self.dim, basics, disjoint })
    }

    /// `self \ other`, rewriting `self ∩ ¬other` with atom complements.
    /// Disjointness of `self` is preserved.
    pub fn difference(&self, other: &PolySet) -> Result<PolySet, Error> {
        self.check(other)?;
        let mut current: Vec<BasicSet> = self.basics.iter().filter_map(BasicSet::simplify).collect();
        for q in &other.basics {
            let pieces = q.complement();
            let mut next = Vec::new();
            for r in &current {
                if r.clearly_disjoint(q) {
                    next.push(r.clone());
                    continue;
                }
                for c in &pieces {
                    if let Some(s) = r.intersect(c).simplify() {
                        next.push(s);
                    }
                }
            }
            current = next;
            if current.is_empty() {
                break;
            }
        }
        Ok(PolySet { dim: self.dim, basics: current, disjoint: self.disjoint })
    }

    /// The same set as a pairwise disjoint union.
    pub fn disjointify(&self) -> PolySet {
        if self.disjoint {
            return self.clone();
        }
        // Each basic minus the earlier originals: the originals are few and
        // short, while the pieces produced so far multiply.
        let mut basics = Vec::new();
        for (i, b) in self.basics.iter().enumerate() {
            let earlier = PolySet { dim: self.dim, basics: self.basics[..i].to_vec(), disjoint: false };
            basics.extend(PolySet::from_basic(b.clone()).difference(&earlier).expect("same dimension").basics);
        }
        PolySet { dim: self.dim, basics, disjoint: true }
    }

    /// `self ⊔ (other \ self)`, flagged disjoint.
    pub fn union_disjointify(&self, other: &PolySet) -> Result<PolySet, Error> {
        self.check(other)?;
        let p = self.disjointify();
        let q = other.disjointify().difference(self)?;
        let mut basics = p.basics;
        basics.extend(q.basics);
        Ok(PolySet { dim: self.dim, basics, disjoint: true })
    }

    pub fn complement(&self) -> PolySet {
        PolySet::universe(self.dim).difference(self).expect("same dimension")
    }

    /// `{v | v A + b ∈ self}`.
    pub fn preimage(&self, map: &AffineMap) -> Result<PolySet, Error> {
        if map.codomain_dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: map.codomain_dim() });
        }
        Ok(PolySet {
            dim: map.domain_dim(),
            basics: self.basics.iter().map(|b| b.preimage(map)).collect(),
            disjoint: self.disjoint,
        })
    }
}

/// `v ↦ v A + b` from `ℤᵐ` to `ℤⁿ`, with `A` stored as `m` rows of length
/// `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    rows: Vec<Vec<BigInt>>,
    offset: Vec<BigInt>,
}

impl AffineMap {
    pub fn new(rows: Vec<Vec<BigInt>>, offset: Vec<BigInt>) -> Result<AffineMap, Error> {
        if let Some(r) = rows.iter().find(|r| r.len() != offset.len()) {
            return Err(Error::DimensionMismatch { expected: offset.len(), found: r.len() });
        }
        Ok(AffineMap { rows, offset })
    }

    pub fn identity(dim: usize) -> AffineMap {
        AffineMap { rows: (0..dim).map(|i| unit(dim, i)).collect(), offset: vec![BigInt::zero(); dim] }
    }

    pub fn domain_dim(&self) -> usize {
        self.rows.len()
    }

    pub fn codomain_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn offset(&self) -> &[BigInt] {
        &self.offset
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>, Error> {
        if v.len() != self.domain_dim() {
            return Err(Error::DimensionMismatch { expected: self.domain_dim(), found: v.len() });
        }
        let mut out = self.offset.clone();
        for (vi, row) in v.iter().zip(&self.rows) {
            if vi.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                *o += vi * r;
            }
        }
        Ok(out)
    }

    /// `A a′ᵀ`: the coefficients of `a′ · (v A)` as a function of `v`.
    fn pull_back_coeffs(&self, a: &[BigInt]) -> Vec<BigInt> {
        self.rows.iter().map(|row| dot(row, a)).collect()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = |a: &[BigInt]| a.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        match self {
            Atom::Eq { a, b } => write!(f, "eq {} {b}", coeffs(a)),
            Atom::Gt { a, b } => write!(f, "gt {} {b}", coeffs(a)),
            Atom::Cong { a, b, c } => write!(f, "cong {} {b} {c}", coeffs(a)),
        }
    }
}
