use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::counter::Window;
use crate::error::Error;
use crate::geodesic::PatternCriterion;
use crate::polyhedra::{tokens, BasicSet, PolySet, UnionBuilder};
use crate::shuffle::{AlphabetYP, Pattern, PatternedWord};

/// Finite unions of basic sets `𝒢_π = ⋃ᵢ B_{π,i}`, one per pattern, with
/// the window inside which they are certified. Patterns without an entry
/// have `𝒢_π = ∅`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    window: Window,
    parts: BTreeMap<Pattern, PolySet>,
}

/// A vector on which a decomposition and the geodesic test disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub word: PatternedWord,
    pub geodesic: bool,
    /// How many basics of the decomposition contain the vector.
    pub hits: usize,
}

impl Decomposition {
    pub fn new(window: Window) -> Self {
        Decomposition { window, parts: BTreeMap::new() }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Sets `𝒢_π`, checking its dimension against `𝒩_π`.
    pub fn insert(&mut self, yp: &AlphabetYP, pattern: Pattern, set: PolySet) -> Result<(), Error> {
        let dim = (pattern.len() + 1) * yp.m();
        if set.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: set.dim() });
        }
        if !pattern.is_pattern() {
            return Err(Error::Invalid(format!("`{}` is not a pattern", yp.format_pattern(&pattern))));
        }
        self.parts.insert(pattern, set);
        Ok(())
    }

    pub fn get(&self, pattern: &Pattern) -> Option<&PolySet> {
        self.parts.get(pattern)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Pattern, &PolySet)> {
        self.parts.iter()
    }

    /// `Σ_π N_π`.
    pub fn basic_count(&self) -> usize {
        self.parts.values().map(|s| s.basics().len()).sum()
    }

    pub fn contains(&self, pw: &PatternedWord) -> bool {
        self.parts.get(&pw.pattern).is_some_and(|s| s.basics().iter().any(|b| b.member(&to_ints(&pw.v))))
    }

    /// Compares against the criterion on every `(v, π)` with
    /// `Ω_π(v) ≤ max_weight`, also flagging vectors covered twice.
    pub fn verify(&self, criterion: &PatternCriterion, max_weight: u64) -> Result<Vec<Mismatch>, Error> {
        let yp = criterion.alphabet();
        let mut out = Vec::new();
        for_each_patterned(yp, max_weight, |pw| {
            let geodesic = criterion.is_geodesic_pattern(&pw)?;
            let z = to_ints(&pw.v);
            let hits = self.parts.get(&pw.pattern).map_or(0, |s| s.basics().iter().filter(|b| b.member(&z)).count());
            if hits > 1 || (hits == 1) != geodesic {
                out.push(Mismatch { word: pw, geodesic, hits });
            }
            Ok(())
        })?;
        Ok(out)
    }

    /// Reads `window exact|W`, then `pattern <π>` sections, each followed
    /// by the lines of a polyhedral set over `𝒩_π`.
    pub fn parse(yp: &AlphabetYP, text: &str) -> Result<Decomposition, Error> {
        let err = |line: usize, message: String| Error::Format { line, message };
        let mut window = None;
        let mut parts = BTreeMap::new();
        let mut current: Option<(Pattern, UnionBuilder)> = None;
        let flush = |cur: Option<(Pattern, UnionBuilder)>, parts: &mut BTreeMap<Pattern, PolySet>| -> Result<(), Error> {
            if let Some((pat, b)) = cur {
                let dim = b.dim.expect("set when the section opens");
                parts.insert(pat, b.finish(dim)?);
            }
            Ok(())
        };
        for (i, raw) in text.lines().enumerate() {
            let no = i + 1;
            let t = tokens(raw);
            if t.is_empty() {
                continue;
            }
            match t[0] {
                "window" if current.is_none() && window.is_none() => {
                    if t.len() != 2 {
                        return Err(err(no, "`window` takes `exact` or a weight".into()));
                    }
                    window = Some(match t[1] {
                        "exact" => Window::Exact,
                        w => Window::MaxWeight(w.parse().map_err(|_| err(no, format!("bad window `{w}`")))?),
                    });
                }
                "pattern" => {
                    let name = raw.split('#').next().unwrap_or("").trim_start().trim_start_matches("pattern").trim();
                    let pat = yp.parse_pattern(name).map_err(|e| err(no, e.to_string()))?;
                    if parts.contains_key(&pat) || current.as_ref().is_some_and(|(p, _)| p == &pat) {
                        return Err(err(no, format!("pattern `{name}` appears twice")));
                    }
                    flush(current.take(), &mut parts)?;
                    let dim = (pat.len() + 1) * yp.m();
                    current = Some((pat, UnionBuilder::new(Some(dim))));
                }
                _ => match current.as_mut() {
                    Some((_, b)) => b.line(no, &t)?,
                    None => return Err(err(no, "expected `window` or `pattern`".into())),
                },
            }
        }
        flush(current.take(), &mut parts)?;
        let window = window.ok_or_else(|| err(1, "missing `window` line".into()))?;
        Ok(Decomposition { window, parts })
    }

    pub fn to_text(&self, yp: &AlphabetYP) -> String {
        let mut out = String::new();
        match self.window {
            Window::Exact => out.push_str("window exact\n"),
            Window::MaxWeight(w) => writeln!(out, "window {w}").unwrap(),
        }
        for (pat, set) in &self.parts {
            let name = if pat.is_empty() { "eps".to_owned() } else { yp.format_pattern(pat) };
            writeln!(out, "pattern {name}").unwrap();
            out.push_str(&set.to_text());
        }
        out
    }
}

pub(crate) fn to_ints(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Calls `f` on every patterned word with `Ω_π(v) ≤ max_weight`, patterns
/// in table order and vectors in lexicographic order.
pub fn for_each_patterned(
    yp: &AlphabetYP,
    max_weight: u64,
    mut f: impl FnMut(PatternedWord) -> Result<(), Error>,
) -> Result<(), Error> {
    let m = yp.m();
    let y_weight: Vec<u64> = yp.y().iter().map(|y| y.weight).collect();
    for (_, info) in yp.patterns().iter() {
        if info.weight > max_weight {
            continue;
        }
        let dim = (info.pattern.len() + 1) * m;
        let mut v = vec![0u64; dim];
        // Odometer over coordinates, bounded by the remaining weight.
        loop {
            f(PatternedWord { pattern: info.pattern.clone(), v: v.clone() })?;
            let mut used: u64 = info.weight + v.iter().enumerate().map(|(i, &c)| c * y_weight[i % m]).sum::<u64>();
            let mut i = dim;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                let w = y_weight[i % m];
                if used + w <= max_weight {
                    v[i] += 1;
                    break;
                }
                used -= v[i] * w;
                v[i] = 0;
            }
            if v.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    Ok(())
}

/// Every geodesic `(v, π)` with `Ω_π(v) ≤ max_weight` as a singleton
/// basic; certified for inputs of weight at most `max_weight`.
pub fn windowed_decomposition(criterion: &PatternCriterion, max_weight: u64) -> Result<Decomposition, Error> {
    let yp = criterion.alphabet();
    let mut points: BTreeMap<Pattern, Vec<BasicSet>> = BTreeMap::new();
    for_each_patterned(yp, max_weight, |pw| {
        if criterion.is_geodesic_pattern(&pw)? {
            points.entry(pw.pattern).or_default().push(BasicSet::point(&to_ints(&pw.v)));
        }
        Ok(())
    })?;
    let mut dec = Decomposition::new(Window::MaxWeight(max_weight));
    for (pat, basics) in points {
        let dim = (pat.len() + 1) * yp.m();
        dec.parts.insert(pat, PolySet::new_disjoint(dim, basics)?);
    }
    Ok(dec)
}
