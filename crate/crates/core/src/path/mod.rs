//! The weighted graph `Γ` whose paths are in weight-preserving bijection
//! with words, plus Parikh vectors and the congruence automaton.

mod dfa;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write as _};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use dfa::{congruences_hold, CongruenceDfa};

use crate::error::Error;
use crate::geodesic::PatternCriterion;
use crate::group::{Gen, Word};
use crate::polyhedra::AffineMap;
use crate::shuffle::{apply_replacements, invert_replacements, AlphabetYP, Pattern, PatternedWord, Replacement};

/// A vertex `[τ, w]` of `Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub pattern: Pattern,
    pub word: Word,
}

/// A labelled edge of `Γ`. The label is a zero-based coordinate of
/// `𝒩_{target pattern}`, or `None` for `∅`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: Vertex,
    pub label: Option<usize>,
    pub target: Vertex,
    pub weight: u64,
}

/// A path `[ε, w] →* [π, ε]`, or the empty path at `[ε, ε]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathRecord {
    pub start: Vertex,
    pub edges: Vec<Edge>,
    pub weight: u64,
}

impl PathRecord {
    pub fn end(&self) -> &Vertex {
        self.edges.last().map_or(&self.start, |e| &e.target)
    }
}

/// `Γ`, built lazily: out-edges are computed from `Δ` on first request.
#[derive(Debug)]
pub struct Gamma<'a> {
    yp: &'a AlphabetYP,
    succ: RwLock<HashMap<Vertex, Arc<Vec<Edge>>>>,
}

/// A finite explored part of `Γ`.
#[derive(Clone, Debug, Default)]
pub struct GammaSubgraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Whether exploration stopped at the vertex limit.
    pub truncated: bool,
}

/// Every word of length `0..=max` over the generators, shortest first.
fn words_up_to(yp: &AlphabetYP, max: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for g in yp.spec().gens() {
                let mut v = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl<'a> Gamma<'a> {
    pub fn new(yp: &'a AlphabetYP) -> Self {
        Gamma { yp, succ: RwLock::new(HashMap::new()) }
    }

    pub fn alphabet(&self) -> &'a AlphabetYP {
        self.yp
    }

    pub fn start_vertices(&self) -> Vec<Vertex> {
        words_up_to(self.yp, self.yp.d()).into_iter().map(|word| Vertex { pattern: Pattern::empty(), word }).collect()
    }

    /// Out-edges of `[τ, w]`: none unless `τ` is strong and `w` nonempty;
    /// with `Δ(τ, w) = (x, τ′, w′)`, one edge to `[τ′, w′]`, or when
    /// `|w| = d` one edge to `[τ′, w′ξ]` for every `ξ` with `|w′ξ| ≤ d`.
    pub fn out_edges(&self, v: &Vertex) -> Result<Arc<Vec<Edge>>, Error> {
        if let Some(e) = self.succ.read().expect("Γ cache poisoned").get(v) {
            return Ok(e.clone());
        }
        let edges = Arc::new(self.compute_edges(v)?);
        self.succ.write().expect("Γ cache poisoned").insert(v.clone(), edges.clone());
        Ok(edges)
    }

    fn compute_edges(&self, v: &Vertex) -> Result<Vec<Edge>, Error> {
        let d = self.yp.d();
        if v.word.len() > d {
            return Err(Error::Invalid(format!("vertex word longer than {d}")));
        }
        if !v.pattern.is_strong() || v.word.is_empty() {
            return Ok(Vec::new());
        }
        let r = self.yp.delta(&v.pattern, &v.word)?;
        let spec = self.yp.spec();
        let weight = spec.word_weight(&v.word) - spec.word_weight(&r.word);
        let tails = if v.word.len() == d { words_up_to(self.yp, d - r.word.len()) } else { vec![Word::empty()] };
        Ok(tails
            .into_iter()
            .map(|xi| Edge {
                source: v.clone(),
                label: r.slot,
                target: Vertex { pattern: r.pattern.clone(), word: r.word.concat(&xi) },
                weight,
            })
            .collect())
    }

    /// Breadth-first exploration from all `[ε, w]`, stopping after
    /// `max_vertices` vertices.
    pub fn explore(&self, max_vertices: usize) -> Result<GammaSubgraph, Error> {
        let mut seen: BTreeSet<Vertex> = BTreeSet::new();
        let mut queue: VecDeque<Vertex> = VecDeque::new();
        let mut out = GammaSubgraph::default();
        for v in self.start_vertices() {
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            if out.vertices.len() >= max_vertices {
                out.truncated = true;
                break;
            }
            for e in self.out_edges(&v)?.iter() {
                if seen.insert(e.target.clone()) {
                    queue.push_back(e.target.clone());
                }
                out.edges.push(e.clone());
            }
            out.vertices.push(v);
        }
        Ok(out)
    }

    /// The path of `σ`, read off its shuffle trace.
    pub fn word_to_path(&self, sigma: &Word) -> PathRecord {
        let d = self.yp.d();
        let (_, trace) = self.yp.shuffle(sigma);
        let vertex = |s: &crate::shuffle::TraceStep| Vertex { pattern: s.pattern.clone(), word: s.rest.prefix(d) };
        let spec = self.yp.spec();
        let edges: Vec<Edge> = trace
            .steps
            .windows(2)
            .zip(&trace.moves)
            .map(|(pair, mv)| Edge {
                source: vertex(&pair[0]),
                label: mv.delta.slot,
                target: vertex(&pair[1]),
                weight: spec.word_weight(&mv.from) - spec.word_weight(&mv.delta.word),
            })
            .collect();
        PathRecord { start: vertex(&trace.steps[0]), weight: edges.iter().map(|e| e.weight).sum(), edges }
    }

    /// Recovers the word of a path by undoing its prefix replacements.
    pub fn path_to_word(&self, path: &PathRecord) -> Result<Word, Error> {
        if !path.start.pattern.is_empty() {
            return Err(Error::Invalid("a path starts at a vertex [ε, w]".into()));
        }
        if !path.end().word.is_empty() {
            return Err(Error::Invalid("a path ends at a vertex [π, ε]".into()));
        }
        let mut at = &path.start;
        let mut list: Vec<Replacement<Gen>> = Vec::with_capacity(path.edges.len());
        for (i, e) in path.edges.iter().enumerate() {
            if &e.source != at {
                return Err(Error::Invalid(format!("edge {} does not start where edge {i} ends", i + 1)));
            }
            if !self.out_edges(at)?.contains(e) {
                return Err(Error::Invalid(format!("edge {} is not an edge of Γ", i + 1)));
            }
            let r = self.yp.delta(&e.source.pattern, &e.source.word)?;
            list.push(Replacement::new(e.source.word.0.clone(), r.word.0));
            at = &e.target;
        }
        list.reverse();
        apply_replacements(&invert_replacements(&list), &[]).map(Word)
    }

    /// `α(p)`: how many edges carry each label, as a vector of `𝒩_π`.
    pub fn alpha_vector(&self, path: &PathRecord) -> PatternedWord {
        let pattern = path.end().pattern.clone();
        let mut v = vec![0; (pattern.len() + 1) * self.yp.m()];
        for e in &path.edges {
            if let Some(x) = e.label {
                v[x] += 1;
            }
        }
        PatternedWord { pattern, v }
    }

    /// Sphere counts `n ↦ #{p | weight(p) = n, α(p) geodesic}` for
    /// `n ≤ max_weight`, by walking `Γ` from every start vertex.
    pub fn geodesic_path_counts(&self, criterion: &PatternCriterion, max_weight: u64) -> Result<Vec<u64>, Error> {
        let spec = self.yp.spec();
        let mut counts = vec![0u64; max_weight as usize + 1];
        let mut stack: Vec<(Vertex, Vec<u64>, u64)> = Vec::new();
        for v in self.start_vertices() {
            if spec.word_weight(&v.word) <= max_weight {
                stack.push((v, vec![0; self.yp.m()], 0));
            }
        }
        while let Some((v, u, w)) = stack.pop() {
            if v.word.is_empty() {
                let pw = PatternedWord { pattern: v.pattern.clone(), v: u };
                if criterion.is_geodesic_pattern(&pw)? {
                    counts[w as usize] += 1;
                }
                continue;
            }
            for e in self.out_edges(&v)?.iter() {
                let nw = w + e.weight;
                if nw + spec.word_weight(&e.target.word) > max_weight {
                    continue;
                }
                let mut nu = self.yp.project(&u, &e.target.pattern);
                if let Some(x) = e.label {
                    nu[x] += 1;
                }
                stack.push((e.target.clone(), nu, nw));
            }
        }
        Ok(counts)
    }

    pub fn format_vertex(&self, v: &Vertex) -> String {
        format!("[{}, {}]", self.yp.format_pattern(&v.pattern), self.yp.spec().format_word(&v.word))
    }

    /// Canonical text of an edge, used as its letter name.
    pub fn format_edge(&self, e: &Edge) -> String {
        let x = e.label.map_or("∅".to_owned(), |s| (s + 1).to_string());
        format!("{} -{x}-> {}", self.format_vertex(&e.source), self.format_vertex(&e.target))
    }

    /// DOT rendering; edge attributes carry the label and the weight.
    pub fn to_dot(&self, g: &GammaSubgraph) -> String {
        let mut ids: HashMap<&Vertex, usize> = HashMap::new();
        let mut out = String::from("digraph gamma {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (i, v) in g.vertices.iter().enumerate() {
            ids.insert(v, i);
            writeln!(out, "  v{i} [label={}];", quote(&self.format_vertex(v))).unwrap();
        }
        let mut extra = g.vertices.len();
        for e in &g.edges {
            for v in [&e.source, &e.target] {
                if !ids.contains_key(v) {
                    ids.insert(v, extra);
                    writeln!(out, "  v{extra} [label={}, style=dashed];", quote(&self.format_vertex(v))).unwrap();
                    extra += 1;
                }
            }
            let x = e.label.map_or("∅".to_owned(), |s| (s + 1).to_string());
            writeln!(
                out,
                "  v{} -> v{} [label=\"{x} / {}\", xlabel=\"{x}\", weight={}];",
                ids[&e.source], ids[&e.target], e.weight, e.weight
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Occurrence counts of each alphabet letter in `w`.
pub fn parikh<T: PartialEq + fmt::Debug>(alphabet: &[T], w: &[T]) -> Result<Vec<u64>, Error> {
    let mut out = vec![0; alphabet.len()];
    for x in w {
        let i = alphabet.iter().position(|a| a == x).ok_or_else(|| Error::Invalid(format!("letter {x:?} is not in the alphabet")))?;
        out[i] += 1;
    }
    Ok(out)
}

/// The linear map sending the Parikh basis vector of each edge letter to
/// `e_{π,x}`: zero for `∅` labels and labels outside `𝒩_π`.
pub fn edge_projection(yp: &AlphabetYP, pattern: &Pattern, edges: &[Edge]) -> AffineMap {
    let dim = (pattern.len() + 1) * yp.m();
    let rows = edges
        .iter()
        .map(|e| {
            let mut row = vec![BigInt::zero(); dim];
            if let Some(x) = e.label.filter(|&x| x < dim) {
                row[x] = BigInt::one();
            }
            row
        })
        .collect();
    AffineMap::new(rows, vec![BigInt::zero(); dim]).expect("rows have the codomain length")
}

#[cfg(test)]
mod tests;
