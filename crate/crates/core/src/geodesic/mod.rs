//! Geodesic tests: a brute-force weighted ball and the pattern criterion.

mod criterion;

use std::collections::{BTreeMap, HashMap};

pub use criterion::{PatternCriterion, Witness};

use crate::error::Error;
use crate::group::{Element, GroupSpec, Word};

/// `ℓ_ω` for every element of weighted length at most `radius`.
#[derive(Clone, Debug)]
pub struct BallTable {
    radius: u64,
    lengths: HashMap<Element, u64>,
}

impl BallTable {
    /// Uniform-cost search from the identity, right-multiplying by
    /// generators.
    pub fn build(spec: &GroupSpec, radius: u64) -> BallTable {
        let mut lengths: HashMap<Element, u64> = HashMap::new();
        let mut buckets: BTreeMap<u64, Vec<Element>> = BTreeMap::new();
        buckets.insert(0, vec![spec.identity()]);
        while let Some((w, layer)) = buckets.pop_first() {
            for e in layer {
                if lengths.contains_key(&e) {
                    continue;
                }
                for g in spec.generators() {
                    let nw = w + g.weight;
                    if nw <= radius {
                        let next = spec.multiply(&e, &g.element);
                        if !lengths.contains_key(&next) {
                            buckets.entry(nw).or_default().push(next);
                        }
                    }
                }
                lengths.insert(e, w);
            }
        }
        BallTable { radius, lengths }
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// `ℓ_ω(e)` if it is at most the radius.
    pub fn length(&self, e: &Element) -> Option<u64> {
        self.lengths.get(e).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, u64)> {
        self.lengths.iter().map(|(e, &w)| (e, w))
    }

    /// `ω(σ) = ℓ_ω(σ̄)`.
    pub fn is_geodesic(&self, spec: &GroupSpec, sigma: &Word) -> Result<bool, Error> {
        let weight = spec.word_weight(sigma);
        if weight > self.radius {
            return Err(Error::RadiusExceeded { weight, radius: self.radius });
        }
        let len = self.length(&spec.evaluate(sigma)).expect("an element of weight ≤ radius is in the ball");
        Ok(len == weight)
    }
}
