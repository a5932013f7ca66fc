use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{rank, Coset, Element, GroupSpec, IntMatrix};

/// A violated invariant, with the witnessing coset indices (zero-based;
/// `Display` prints them one-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `R_1` is not the identity matrix.
    IdentityAction,
    /// `det R_t ∉ {±1}`.
    Determinant { t: Coset, det: BigInt },
    /// A product with coset 1 is not `(b, 0)` / `(a, 0)`.
    IdentityRow { a: Coset, b: Coset },
    /// The coset table is not a Latin square, so it cannot be a group table.
    CosetTable { a: Coset, b: Coset },
    /// `(t_a t_b) t_e` and `t_a (t_b t_e)` land in different cosets.
    Associativity { a: Coset, b: Coset, e: Coset },
    /// `R_{ab} ≠ R_b · R_a`.
    ActionCompatibility { a: Coset, b: Coset },
    /// `c(b,e) R_a + c(a, be) ≠ c(a,b) + c(ab, e)`.
    Cocycle { a: Coset, b: Coset, e: Coset },
}

impl Violation {
    /// Short stable name of the violated identity.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::IdentityAction => "identity-action",
            Violation::Determinant { .. } => "determinant",
            Violation::IdentityRow { .. } => "identity-row",
            Violation::CosetTable { .. } => "coset-table",
            Violation::Associativity { .. } => "associativity",
            Violation::ActionCompatibility { .. } => "action-compatibility",
            Violation::Cocycle { .. } => "cocycle",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdentityAction => write!(f, "identity-action: R_1 is not the identity matrix"),
            Violation::Determinant { t, det } => write!(f, "determinant: det not ±1 (det R_{t} = {det})"),
            Violation::IdentityRow { a, b } => {
                write!(f, "identity-row: cosetmul({a}, {b}) must be the other factor with zero cocycle")
            }
            Violation::CosetTable { a, b } => {
                write!(f, "coset-table: cosetmul({a}, {b}) repeats a coset in its row or column")
            }
            Violation::Associativity { a, b, e } => {
                write!(f, "associativity: coset products disagree at (a,b,e) = ({a},{b},{e})")
            }
            Violation::ActionCompatibility { a, b } => {
                write!(f, "action-compatibility: R_(ab) != R_b R_a at (a,b) = ({a},{b})")
            }
            Violation::Cocycle { a, b, e } => {
                write!(f, "cocycle: c(b,e) R_a + c(a,be) != c(a,b) + c(ab,e) at (a,b,e) = ({a},{b},{e})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// Within weight `bound`, the evaluated words did not reach every coset
    /// or the translations reached span a lattice of rank `< n`.
    GenerationUnconfirmed { bound: u64, missing_cosets: Vec<Coset>, lattice_rank: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::GenerationUnconfirmed { bound, missing_cosets, lattice_rank } => {
                write!(f, "generation not confirmed within weight {bound}: lattice rank {lattice_rank}")?;
                if !missing_cosets.is_empty() {
                    let m: Vec<String> = missing_cosets.iter().map(ToString::to_string).collect();
                    write!(f, ", cosets never reached: {}", m.join(" "))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind() == kind)
    }
}

impl GroupSpec {
    /// Checks every structural invariant, then runs the advisory generation
    /// check with the default bound `2 · d · max weight`.
    pub fn validate(&self) -> ValidationReport {
        self.validate_with_bound(2 * self.index as u64 * self.max_weight())
    }

    pub fn validate_with_bound(&self, bound: u64) -> ValidationReport {
        let mut violations = self.structural_violations();
        violations.dedup();
        let mut report = ValidationReport { violations, warnings: Vec::new() };
        // The generation check multiplies elements, which is meaningless on a
        // broken table.
        if report.is_valid() {
            if let Some(w) = self.generation_check(bound) {
                report.warnings.push(w);
            }
        }
        report
    }

    fn structural_violations(&self) -> Vec<Violation> {
        let d = self.index;
        let n = self.rank;
        let mut out = Vec::new();
        if !self.actions[0].is_identity() {
            out.push(Violation::IdentityAction);
        }
        for t in 0..d {
            let det = self.actions[t].determinant();
            if det.abs() != BigInt::one() {
                out.push(Violation::Determinant { t: Coset(t), det });
            }
        }
        let zero = vec![BigInt::zero(); n];
        for x in 0..d {
            let (a, b) = (Coset(x), Coset(0));
            if self.coset_table[x][0] != a || self.cocycle[x][0] != zero {
                out.push(Violation::IdentityRow { a, b });
            }
            if self.coset_table[0][x] != a || self.cocycle[0][x] != zero {
                out.push(Violation::IdentityRow { a: b, b: a });
            }
        }
        for a in 0..d {
            let mut row = HashSet::new();
            let mut col = HashSet::new();
            for b in 0..d {
                if !row.insert(self.coset_table[a][b]) {
                    out.push(Violation::CosetTable { a: Coset(a), b: Coset(b) });
                }
                if !col.insert(self.coset_table[b][a]) {
                    out.push(Violation::CosetTable { a: Coset(b), b: Coset(a) });
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                for e in 0..d {
                    let ab = self.coset_table[a][b];
                    let be = self.coset_table[b][e];
                    if self.coset_table[ab.0][e] != self.coset_table[a][be.0] {
                        out.push(Violation::Associativity { a: Coset(a), b: Coset(b), e: Coset(e) });
                    }
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                let t = self.coset_table[a][b];
                let expected: IntMatrix = self.actions[b].mul(&self.actions[a]);
                if self.actions[t.0] != expected {
                    out.push(Violation::ActionCompatibility { a: Coset(a), b: Coset(b) });
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                for e in 0..d {
                    let ab = self.coset_table[a][b];
                    let be = self.coset_table[b][e];
                    let mut lhs = self.actions[a].apply(&self.cocycle[b][e]);
                    for (l, c) in lhs.iter_mut().zip(&self.cocycle[a][be.0]) {
                        *l += c;
                    }
                    let rhs: Vec<BigInt> =
                        self.cocycle[a][b].iter().zip(&self.cocycle[ab.0][e]).map(|(x, y)| x + y).collect();
                    if lhs != rhs {
                        out.push(Violation::Cocycle { a: Coset(a), b: Coset(b), e: Coset(e) });
                    }
                }
            }
        }
        out
    }

    /// Uniform-cost search over elements of weight at most `bound`.
    fn generation_check(&self, bound: u64) -> Option<Warning> {
        let mut seen: HashSet<Element> = HashSet::new();
        let mut buckets: BTreeMap<u64, Vec<Element>> = BTreeMap::new();
        buckets.insert(0, vec![self.identity()]);
        let mut cosets = vec![false; self.index];
        let mut lattice = Vec::new();
        while let Some((w, layer)) = buckets.pop_first() {
            for e in layer {
                if !seen.insert(e.clone()) {
                    continue;
                }
                cosets[e.t.0] = true;
                if e.t.is_identity() && !e.z.iter().all(Zero::is_zero) {
                    lattice.push(e.z.clone());
                }
                for g in &self.generators {
                    let nw = w + g.weight;
                    if nw <= bound {
                        let next = self.multiply(&e, &g.element);
                        if !seen.contains(&next) {
                            buckets.entry(nw).or_default().push(next);
                        }
                    }
                }
            }
        }
        let lattice_rank = rank(&lattice);
        let missing_cosets: Vec<Coset> = (0..self.index).filter(|&t| !cosets[t]).map(Coset).collect();
        (lattice_rank < self.rank || !missing_cosets.is_empty()).then_some(Warning::GenerationUnconfirmed {
            bound,
            missing_cosets,
            lattice_rank,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn corpus_specs_are_valid() {
        for text in [Z, Z2, DINF, P4] {
            let r = spec(text).validate();
            assert!(r.is_valid(), "{:?}", r.violations);
            assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        }
    }

    #[test]
    fn bad_determinant() {
        let s = spec(&DINF.replace("action 2 -1", "action 2 2"));
        let r = s.validate();
        assert!(r.has("determinant"));
        assert!(r.violations.iter().any(|v| v.to_string().contains("det not ±1")));
    }

    #[test]
    fn nonzero_square_of_reflection_breaks_cocycle() {
        // A reflection t with t² = 5 would have to commute with 5 while
        // inverting it.
        let s = spec(&DINF.replace("cosetmul 2 2 1 0", "cosetmul 2 2 1 5"));
        let r = s.validate();
        assert!(r.has("cocycle"));
        assert!(matches!(
            r.violations[0],
            Violation::Cocycle { a: Coset(1), b: Coset(1), e: Coset(1) }
        ));
    }

    #[test]
    fn flipped_action_entry() {
        let s = spec(&P4.replace("action 2 0 1 -1 0", "action 2 1 1 -1 0"));
        let r = s.validate();
        assert!(r.has("determinant") || r.has("action-compatibility"));
    }

    #[test]
    fn broken_coset_table() {
        let s = spec(&P4.replace("cosetmul 2 2 3 0 0", "cosetmul 2 2 4 0 0"));
        let r = s.validate();
        assert!(r.has("coset-table"));
    }

    #[test]
    fn generation_warning() {
        // Only `a`, so nothing in the negative direction is reachable but
        // the rank is still 1; drop to a single translation-free reflection
        // to lose the lattice entirely.
        let s = spec("group D\nrank 1\nindex 2\naction 2 -1\ncosetmul 2 2 1 0\ngen r 1 2 0\n");
        let r = s.validate();
        assert!(r.is_valid());
        assert!(matches!(r.warnings[0], Warning::GenerationUnconfirmed { lattice_rank: 0, .. }));
        let s = spec("group Z2\nrank 2\nindex 1\ngen x 1 1 1 0\n");
        assert_eq!(s.validate().warnings.len(), 1);
    }
}
