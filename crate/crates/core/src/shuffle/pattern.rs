use std::collections::HashMap;

use num_bigint::BigInt;

use super::AlphabetYP;
use crate::group::{Coset, GroupSpec};

/// A word `π₁ ⋯ π_k` over `P`, stored as `P` indices together with the
/// prefix cosets `ρ(ε), ρ(π₁), …, ρ(π₁⋯π_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    letters: Vec<u32>,
    cosets: Vec<Coset>,
}

impl Pattern {
    pub fn empty() -> Pattern {
        Pattern { letters: Vec::new(), cosets: vec![Coset::IDENTITY] }
    }

    pub(crate) fn from_letters(letters: Vec<u32>, coset: impl Fn(u32) -> Coset, spec: &GroupSpec) -> Pattern {
        let mut cosets = Vec::with_capacity(letters.len() + 1);
        let mut c = Coset::IDENTITY;
        cosets.push(c);
        for &l in &letters {
            c = spec.coset_product(c, coset(l));
            cosets.push(c);
        }
        Pattern { letters, cosets }
    }

    pub(crate) fn extend(&self, letter: u32, coset: Coset, spec: &GroupSpec) -> Pattern {
        let mut p = self.clone();
        p.letters.push(letter);
        p.cosets.push(spec.coset_product(self.end(), coset));
        p
    }

    /// `k = |π|_P`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    /// `ρ` of each prefix, block `j` of `𝒩_π` sitting after `π₁⋯π_j`.
    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    /// `ρ(π̄)`.
    pub fn end(&self) -> Coset {
        *self.cosets.last().expect("cosets is never empty")
    }

    pub fn is_prefix_of(&self, other: &Pattern) -> bool {
        other.letters.starts_with(&self.letters)
    }

    /// Proper prefixes lie in pairwise distinct cosets.
    pub fn is_pattern(&self) -> bool {
        distinct(&self.cosets[..self.cosets.len() - 1])
    }

    /// All prefixes, including `π` itself, lie in distinct cosets.
    pub fn is_strong(&self) -> bool {
        distinct(&self.cosets)
    }

    /// The prefix cosets as a sorted set. Blocks with equal cosets
    /// contribute identically to `Ψ`, so this determines which translations
    /// the `Y` blocks can reach.
    pub fn coset_set(&self) -> Vec<Coset> {
        let mut s = self.cosets.clone();
        s.sort();
        s.dedup();
        s
    }
}

fn distinct(cs: &[Coset]) -> bool {
    cs.iter().enumerate().all(|(i, c)| !cs[..i].contains(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternId(pub u32);

#[derive(Clone, Debug)]
pub struct PatternInfo {
    pub pattern: Pattern,
    pub strong: bool,
    /// `ω(π)`.
    pub weight: u64,
    /// `ψ(π̄)`.
    pub psi: Vec<BigInt>,
}

/// `Patt` with lookup by letters.
#[derive(Clone, Debug)]
pub struct PatternTable {
    infos: Vec<PatternInfo>,
    index: HashMap<Vec<u32>, PatternId>,
}

impl PatternTable {
    pub(crate) fn enumerate(yp: &AlphabetYP) -> PatternTable {
        let mut infos = Vec::new();
        let mut index = HashMap::new();
        let mut layer = vec![Pattern::empty()];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for pat in layer {
                let strong = pat.is_strong();
                if strong {
                    for l in 0..yp.p().len() as u32 {
                        next.push(pat.extend(l, yp.p_coset(l), yp.spec()));
                    }
                }
                index.insert(pat.letters.clone(), PatternId(infos.len() as u32));
                infos.push(PatternInfo {
                    weight: yp.pattern_weight(&pat),
                    psi: yp.pattern_psi(&pat),
                    pattern: pat,
                    strong,
                });
            }
            layer = next;
        }
        PatternTable { infos, index }
    }

    pub fn len(&self) -> usize {
        self.infos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.infos.is_empty()
    }

    pub fn get(&self, id: PatternId) -> &PatternInfo {
        &self.infos[id.0 as usize]
    }

    pub fn id_of(&self, pat: &Pattern) -> Option<PatternId> {
        self.index.get(pat.letters()).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PatternId, &PatternInfo)> {
        self.infos.iter().enumerate().map(|(i, p)| (PatternId(i as u32), p))
    }

    pub fn strong(&self) -> impl Iterator<Item = (PatternId, &PatternInfo)> {
        self.iter().filter(|(_, p)| p.strong)
    }
}
