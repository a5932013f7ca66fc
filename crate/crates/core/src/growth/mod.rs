//! Geodesic growth: counting geodesic words by weight, and reading growth
//! behaviour off the resulting table.

mod fit;

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub use fit::{fit_rational_series, RationalFit};

use crate::error::Error;
use crate::geodesic::{BallTable, PatternCriterion};
use crate::group::{GroupSpec, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: u64,
    /// Geodesic words of weight exactly `n`.
    pub sphere: u64,
    /// `γ(n)`: geodesic words of weight at most `n`.
    pub cumulative: u64,
}

/// Rows `0..=N`, cumulative counts being prefix sums of the spheres.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthTable {
    rows: Vec<GrowthRow>,
}

impl GrowthTable {
    pub fn from_spheres(spheres: &[u64]) -> GrowthTable {
        let mut total = 0;
        let rows = spheres
            .iter()
            .enumerate()
            .map(|(n, &sphere)| {
                total += sphere;
                GrowthRow { n: n as u64, sphere, cumulative: total }
            })
            .collect();
        GrowthTable { rows }
    }

    pub fn rows(&self) -> &[GrowthRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The largest `n` in the table.
    pub fn horizon(&self) -> Option<u64> {
        self.rows.last().map(|r| r.n)
    }

    pub fn spheres(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.sphere).collect()
    }

    pub fn cumulative(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.cumulative).collect()
    }

    /// Header `n,sphere,cumulative`, one row per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,sphere,cumulative\n");
        for r in &self.rows {
            writeln!(out, "{},{},{}", r.n, r.sphere, r.cumulative).unwrap();
        }
        out
    }
}

/// How a census decides whether a word is geodesic.
#[derive(Clone, Copy, Debug)]
pub enum Census<'a> {
    Pattern(&'a PatternCriterion<'a>),
    Oracle(&'a GroupSpec, &'a BallTable),
}

impl Census<'_> {
    fn spec(&self) -> &GroupSpec {
        match self {
            Census::Pattern(c) => c.alphabet().spec(),
            Census::Oracle(s, _) => s,
        }
    }

    fn is_geodesic(&self, w: &Word) -> Result<bool, Error> {
        match self {
            Census::Pattern(c) => c.is_geodesic_word(w),
            Census::Oracle(s, b) => b.is_geodesic(s, w),
        }
    }
}

/// Depth-first walk of the tree of geodesics up to weight `max_weight`.
/// Subwords of geodesics are geodesic, so only geodesics are extended.
pub fn geodesic_counts(census: Census, max_weight: u64) -> Result<GrowthTable, Error> {
    if let Census::Oracle(_, ball) = census {
        if ball.radius() < max_weight {
            return Err(Error::RadiusExceeded { weight: max_weight, radius: ball.radius() });
        }
    }
    let spec = census.spec();
    let mut spheres = vec![0u64; max_weight as usize + 1];
    let mut stack = vec![(Word::empty(), 0u64)];
    while let Some((w, weight)) = stack.pop() {
        spheres[weight as usize] += 1;
        for g in spec.gens() {
            let next_weight = weight + spec.generator(g).weight;
            if next_weight > max_weight {
                continue;
            }
            let mut next = w.clone();
            next.push(g);
            if census.is_geodesic(&next)? {
                stack.push((next, next_weight));
            }
        }
    }
    Ok(GrowthTable::from_spheres(&spheres))
}

/// Two readings of the growth rate at the horizon `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct RateEstimate {
    pub horizon: u64,
    /// `γ(N)^{1/N}`.
    pub root: f64,
    /// `sphere(N) / sphere(N − 1)`, exact.
    pub ratio: BigRational,
    /// Whether the two readings are within 10% of each other. The root
    /// converges slowly, so disagreement on short tables is common.
    pub agree: bool,
}

impl RateEstimate {
    pub fn ratio_f64(&self) -> f64 {
        self.ratio.to_f64().unwrap_or(f64::NAN)
    }
}

pub fn growth_rate_estimate(t: &GrowthTable) -> Result<RateEstimate, Error> {
    if t.len() < 4 {
        return Err(Error::Invalid(format!("a rate estimate needs at least 4 rows, found {}", t.len())));
    }
    let last = t.rows[t.len() - 1];
    let prev = t.rows[t.len() - 2];
    if prev.sphere == 0 {
        return Err(Error::Invalid(format!("sphere {} is empty, so the ratio is undefined", prev.n)));
    }
    let root = (last.cumulative as f64).powf(1.0 / last.n as f64);
    let ratio = BigRational::new(BigInt::from(last.sphere), BigInt::from(prev.sphere));
    let r = ratio.to_f64().unwrap_or(f64::NAN);
    Ok(RateEstimate { horizon: last.n, root, ratio, agree: (root - r).abs() <= 0.1 * r.max(1.0) })
}

/// The verdict of [`classify_growth`]. There is no intermediate class.
#[derive(Clone, Debug, PartialEq)]
pub enum Growth {
    /// Sphere counts agree with a polynomial of this degree on the tail;
    /// cumulative counts then have degree one more.
    Polynomial { sphere_degree: usize },
    /// The last sphere ratio exceeds `1 + ε`.
    Exponential { ratio: f64 },
    Inconclusive,
}

pub const DEFAULT_EPSILON: f64 = 0.05;

/// Heuristic: polynomial when some finite difference of the sphere
/// sequence vanishes on its last three or more terms, exponential when the
/// last sphere ratio is above `1 + ε`. Needs six rows.
pub fn classify_growth(t: &GrowthTable, epsilon: f64) -> Growth {
    if t.len() < 6 {
        return Growth::Inconclusive;
    }
    // Row 0 is always 1 and often off-pattern, so start at n = 1.
    let mut diff: Vec<BigInt> = t.rows[1..].iter().map(|r| BigInt::from(r.sphere)).collect();
    let mut degree = 0;
    while diff.len() >= 4 {
        let next: Vec<BigInt> = diff.windows(2).map(|p| &p[1] - &p[0]).collect();
        if next.len() >= 3 && next[next.len() - 3..].iter().all(Zero::is_zero) {
            return Growth::Polynomial { sphere_degree: degree };
        }
        diff = next;
        degree += 1;
    }
    match growth_rate_estimate(t) {
        Ok(e) if e.ratio_f64() > 1.0 + epsilon => Growth::Exponential { ratio: e.ratio_f64() },
        _ => Growth::Inconclusive,
    }
}

#[cfg(test)]
mod tests;
