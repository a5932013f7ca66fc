//! The alphabets `Y` and `P`, patterns, the `Δ` map and `Shuffle`.
//!
//! `Y` collects the short words (length `1..=d`) that evaluate into `ℤⁿ`;
//! `P` the short words (length `1..d`) that do not. A patterned word
//! `(v, π)` spells
//!
//! ```text
//! y₁^v₁ ⋯ y_m^v_m · π₁ · y₁^v_{m+1} ⋯ y_m^v_{2m} · π₂ ⋯ π_k · y₁^v_{km+1} ⋯ y_m^v_{(k+1)m}
//! ```
//!
//! and `Shuffle` rewrites any word into one of these with the same element
//! and weight.

mod pattern;
mod replace;

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

pub use pattern::{Pattern, PatternId, PatternInfo, PatternTable};
pub use replace::{apply_replacements, invert_replacements, Replacement};

use crate::error::Error;
use crate::group::{Coset, Element, Gen, GroupSpec, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YLetter {
    pub word: Word,
    /// `ψ` of the evaluated word (its coset is trivial).
    pub z: Vec<BigInt>,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLetter {
    pub word: Word,
    pub element: Element,
    pub weight: u64,
}

/// `(v, π)` with `v ∈ ℕ^{(|π|+1)·m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternedWord {
    pub pattern: Pattern,
    pub v: Vec<u64>,
}

/// Output of `Δ(τ, w)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaResult {
    /// Zero-based coordinate of `𝒩_{τ′}` to increment, or `None` for `∅`.
    pub slot: Option<usize>,
    pub pattern: Pattern,
    pub word: Word,
}

/// One extended patterned word `((u, τ), σ)` of a shuffle run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub u: Vec<u64>,
    pub pattern: Pattern,
    pub rest: Word,
}

/// A recorded edge of a shuffle: the prefix `from` of the current word was
/// fed to `Δ` under `pattern`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceMove {
    pub pattern: Pattern,
    pub from: Word,
    pub delta: DeltaResult,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleTrace {
    pub steps: Vec<TraceStep>,
    pub moves: Vec<TraceMove>,
}

impl ShuffleTrace {
    /// Prefix replacements in composition order: applying them to `σ`
    /// gives the empty word.
    pub fn replacements(&self) -> Vec<Replacement<Gen>> {
        self.moves.iter().rev().map(|mv| Replacement::new(mv.from.0.clone(), mv.delta.word.0.clone())).collect()
    }
}

type DeltaKey = (Vec<u32>, Vec<Gen>);

/// Alphabets `Y`, `P` for a spec, with the memoized `Δ` table and the
/// lazily enumerated pattern table.
#[derive(Debug)]
pub struct AlphabetYP {
    spec: GroupSpec,
    y: Vec<YLetter>,
    p: Vec<PLetter>,
    y_index: HashMap<Vec<Gen>, usize>,
    p_index: HashMap<Vec<Gen>, u32>,
    delta_memo: RwLock<HashMap<DeltaKey, DeltaResult>>,
    patterns: OnceLock<PatternTable>,
}

impl AlphabetYP {
    pub fn build(spec: &GroupSpec) -> AlphabetYP {
        let d = spec.index();
        let mut y = Vec::new();
        let mut p = Vec::new();
        // Words of each length in lexicographic order of generator position.
        let mut layer = vec![Word::empty()];
        for len in 1..=d {
            let mut next = Vec::with_capacity(layer.len() * spec.generators().len());
            for w in &layer {
                for g in spec.gens() {
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
            for w in &next {
                let e = spec.evaluate(w);
                let weight = spec.word_weight(w);
                if e.t.is_identity() {
                    y.push(YLetter { word: w.clone(), z: e.z, weight });
                } else if len < d {
                    p.push(PLetter { word: w.clone(), element: e, weight });
                }
            }
            layer = next;
        }
        let y_index = y.iter().enumerate().map(|(i, l)| (l.word.0.clone(), i)).collect();
        let p_index = p.iter().enumerate().map(|(i, l)| (l.word.0.clone(), i as u32)).collect();
        AlphabetYP {
            spec: spec.clone(),
            y,
            p,
            y_index,
            p_index,
            delta_memo: RwLock::new(HashMap::new()),
            patterns: OnceLock::new(),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn y(&self) -> &[YLetter] {
        &self.y
    }

    pub fn p(&self) -> &[PLetter] {
        &self.p
    }

    /// `m = |Y|`.
    pub fn m(&self) -> usize {
        self.y.len()
    }

    pub fn d(&self) -> usize {
        self.spec.index()
    }

    pub fn y_of(&self, w: &[Gen]) -> Option<usize> {
        self.y_index.get(w).copied()
    }

    pub fn p_of(&self, w: &[Gen]) -> Option<u32> {
        self.p_index.get(w).copied()
    }

    pub fn p_coset(&self, p: u32) -> Coset {
        self.p[p as usize].element.t
    }

    /// Builds a pattern from `P` indices, checking the distinct-prefix rule.
    pub fn pattern(&self, letters: Vec<u32>) -> Result<Pattern, Error> {
        if letters.iter().any(|&l| l as usize >= self.p.len()) {
            return Err(Error::Invalid("pattern letter outside P".into()));
        }
        let pat = Pattern::from_letters(letters, |l| self.p_coset(l), &self.spec);
        if !pat.is_pattern() {
            return Err(Error::Invalid(format!("`{}` repeats a coset among its proper prefixes", self.format_pattern(&pat))));
        }
        Ok(pat)
    }

    pub fn empty_pattern(&self) -> Pattern {
        Pattern::empty()
    }

    /// `π` written as its `P` words joined by `.`; `ε` when empty.
    pub fn format_pattern(&self, pat: &Pattern) -> String {
        if pat.is_empty() {
            return "ε".into();
        }
        pat.letters().iter().map(|&l| self.spec.format_word(&self.p[l as usize].word)).collect::<Vec<_>>().join(".")
    }

    /// Inverse of [`AlphabetYP::format_pattern`].
    pub fn parse_pattern(&self, text: &str) -> Result<Pattern, Error> {
        let text = text.trim();
        if text.is_empty() || text == "ε" || text == "eps" {
            return Ok(Pattern::empty());
        }
        let letters = text
            .split('.')
            .map(|part| {
                let w = self.spec.parse_word(part)?;
                self.p_of(&w.0).ok_or_else(|| Error::Invalid(format!("`{}` is not a word of P", part.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.pattern(letters)
    }

    /// `Patt` in breadth-first order (by length, then lexicographically by
    /// `P` position), with the strong ones flagged.
    pub fn patterns(&self) -> &PatternTable {
        self.patterns.get_or_init(|| PatternTable::enumerate(self))
    }

    /// The `P` word sequence of `π` concatenated.
    pub fn pattern_word(&self, pat: &Pattern) -> Word {
        Word(pat.letters().iter().flat_map(|&l| self.p[l as usize].word.0.iter().copied()).collect())
    }

    pub fn pattern_weight(&self, pat: &Pattern) -> u64 {
        pat.letters().iter().map(|&l| self.p[l as usize].weight).sum()
    }

    /// `ψ(π̄)`.
    pub fn pattern_psi(&self, pat: &Pattern) -> Vec<BigInt> {
        let mut acc = self.spec.identity();
        for &l in pat.letters() {
            acc = self.spec.multiply(&acc, &self.p[l as usize].element);
        }
        acc.z
    }

    /// The factoring `w = α · y_b · δ` with `α ∈ P ∪ {ε}` and
    /// `(|α|, |y_b|)` lexicographically minimal.
    pub fn factor(&self, w: &Word) -> Result<(Word, usize, Word), Error> {
        let len = w.len();
        if len == 0 || len > self.d() {
            return Err(Error::Invalid(format!("factor needs 1 ≤ |w| ≤ {}, got {len}", self.d())));
        }
        if self.p_of(&w.0).is_some() {
            return Err(Error::Invalid("factor called on a word of P".into()));
        }
        for a in 0..len {
            if a > 0 && self.p_of(&w.0[..a]).is_none() {
                continue;
            }
            for b in a + 1..=len {
                if let Some(yi) = self.y_of(&w.0[a..b]) {
                    return Ok((w.slice(0..a), yi, w.slice(b..len)));
                }
            }
        }
        unreachable!("every word of length ≤ d outside P has a factoring")
    }

    /// `Δ(τ, w)` for a strong pattern `τ` and `1 ≤ |w| ≤ d`, memoized.
    pub fn delta(&self, tau: &Pattern, w: &Word) -> Result<DeltaResult, Error> {
        let key = (tau.letters().to_vec(), w.0.clone());
        if let Some(r) = self.delta_memo.read().expect("delta table poisoned").get(&key) {
            return Ok(r.clone());
        }
        let r = self.compute_delta(tau, w)?;
        self.delta_memo.write().expect("delta table poisoned").insert(key, r.clone());
        Ok(r)
    }

    fn compute_delta(&self, tau: &Pattern, w: &Word) -> Result<DeltaResult, Error> {
        if !tau.is_strong() {
            return Err(Error::Invalid(format!("Δ needs a strong pattern, got `{}`", self.format_pattern(tau))));
        }
        if w.is_empty() || w.len() > self.d() {
            return Err(Error::Invalid(format!("Δ needs 1 ≤ |w| ≤ {}, got {}", self.d(), w.len())));
        }
        let m = self.m();
        if let Some(p) = self.p_of(&w.0) {
            return Ok(DeltaResult { slot: None, pattern: tau.extend(p, self.p_coset(p), &self.spec), word: Word::empty() });
        }
        let (alpha, b, delta) = self.factor(w)?;
        let alpha_coset = self.spec.coset_of(&alpha.0);
        let target = self.spec.coset_product(tau.end(), alpha_coset);
        if let Some(a) = tau.cosets().iter().position(|&c| c == target) {
            return Ok(DeltaResult { slot: Some(a * m + b), pattern: tau.clone(), word: alpha.concat(&delta) });
        }
        let p = self.p_of(&alpha.0).expect("α is in P once no block matches");
        let next = tau.extend(p, self.p_coset(p), &self.spec);
        Ok(DeltaResult { slot: Some(next.len() * m + b), pattern: next, word: delta })
    }

    /// Number of memoized `Δ` entries.
    pub fn delta_table_len(&self) -> usize {
        self.delta_memo.read().expect("delta table poisoned").len()
    }

    /// `Proj_{τ,τ′}`: keeps the first `min` blocks and pads with zeros.
    pub fn project(&self, u: &[u64], to: &Pattern) -> Vec<u64> {
        let dim = (to.len() + 1) * self.m();
        let mut out = vec![0; dim];
        let n = dim.min(u.len());
        out[..n].copy_from_slice(&u[..n]);
        out
    }

    /// Runs `Shuffle(σ)` and returns the patterned word with the full trace.
    pub fn shuffle(&self, sigma: &Word) -> (PatternedWord, ShuffleTrace) {
        let mut steps = Vec::new();
        let mut moves = Vec::new();
        let pw = self.run(sigma, |u, pat, rest, mv| {
            steps.push(TraceStep { u: u.to_vec(), pattern: pat.clone(), rest: rest.clone() });
            if let Some(mv) = mv {
                moves.push(mv);
            }
        });
        (pw, ShuffleTrace { steps, moves })
    }

    /// `Shuffle(σ)` without recording the trace.
    pub fn shuffle_only(&self, sigma: &Word) -> PatternedWord {
        self.run(sigma, |_, _, _, _| {})
    }

    fn run(&self, sigma: &Word, mut observe: impl FnMut(&[u64], &Pattern, &Word, Option<TraceMove>)) -> PatternedWord {
        let d = self.d();
        let mut u = vec![0u64; self.m()];
        let mut tau = Pattern::empty();
        let mut rest = sigma.clone();
        observe(&u, &tau, &rest, None);
        while !rest.is_empty() {
            let w = rest.prefix(d);
            let r = self.delta(&tau, &w).expect("shuffle keeps τ strong");
            let mut next_u = self.project(&u, &r.pattern);
            if let Some(x) = r.slot {
                next_u[x] += 1;
            }
            let mut next_rest = r.word.clone();
            next_rest.0.extend_from_slice(&rest.0[w.len()..]);
            u = next_u;
            rest = next_rest;
            let mv = TraceMove { pattern: tau, from: w, delta: r.clone() };
            tau = r.pattern;
            observe(&u, &tau, &rest, Some(mv));
        }
        PatternedWord { pattern: tau, v: u }
    }

    fn check_dim(&self, pw: &PatternedWord) -> Result<(), Error> {
        let expected = (pw.pattern.len() + 1) * self.m();
        if pw.v.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: pw.v.len() });
        }
        Ok(())
    }

    /// The literal word `v^π`.
    pub fn expand(&self, pw: &PatternedWord) -> Result<Word, Error> {
        self.check_dim(pw)?;
        let m = self.m();
        let mut out = Vec::new();
        for j in 0..=pw.pattern.len() {
            for i in 0..m {
                for _ in 0..pw.v[j * m + i] {
                    out.extend_from_slice(&self.y[i].word.0);
                }
            }
            if let Some(&l) = pw.pattern.letters().get(j) {
                out.extend_from_slice(&self.p[l as usize].word.0);
            }
        }
        Ok(Word(out))
    }

    /// `(Ψ_π(v), Ω_π(v))`: the translation part and weight of `v^π`,
    /// computed without expanding.
    pub fn pattern_maps(&self, pw: &PatternedWord) -> Result<(Vec<BigInt>, u64), Error> {
        self.check_dim(pw)?;
        let m = self.m();
        let mut psi = self.pattern_psi(&pw.pattern);
        let mut omega = self.pattern_weight(&pw.pattern);
        for (j, &c) in pw.pattern.cosets().iter().enumerate() {
            let mut block = vec![BigInt::zero(); self.spec.rank()];
            for i in 0..m {
                let k = pw.v[j * m + i];
                if k == 0 {
                    continue;
                }
                omega += k * self.y[i].weight;
                let k = BigInt::from(k);
                for (b, z) in block.iter_mut().zip(&self.y[i].z) {
                    *b += &k * z;
                }
            }
            for (p, x) in psi.iter_mut().zip(self.spec.action(c).apply(&block)) {
                *p += x;
            }
        }
        Ok((psi, omega))
    }

    pub fn format_patterned(&self, pw: &PatternedWord) -> String {
        let v: Vec<String> = pw.v.iter().map(ToString::to_string).collect();
        format!("({}; {})", v.join(" "), self.format_pattern(&pw.pattern))
    }

    pub fn format_delta(&self, r: &DeltaResult) -> String {
        let x = r.slot.map_or("∅".to_owned(), |s| (s + 1).to_string());
        format!("({x}, {}, {})", self.format_pattern(&r.pattern), self.spec.format_word(&r.word))
    }
}

impl fmt::Display for PatternedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.v.iter().map(ToString::to_string).collect();
        write!(f, "({}; {:?})", v.join(" "), self.pattern.letters())
    }
}
