use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;
use crate::group::{Coset, Word};
use crate::polyhedra::{exists_point, Atom, BasicSet};
use crate::shuffle::{AlphabetYP, Pattern, PatternedWord};

/// Inclusive `(lo, hi)` per coordinate.
type BoxBounds = Vec<(BigInt, BigInt)>;

type Point = Vec<i64>;

fn overflow() -> Error {
    Error::Invalid("translation coordinates exceed the 64-bit range of the reach tables".into())
}

fn small(v: &[BigInt]) -> Result<Point, Error> {
    v.iter().map(|x| x.to_i64().ok_or_else(overflow)).collect()
}

fn add(a: &[i64], b: &[i64]) -> Result<Point, Error> {
    a.iter().zip(b).map(|(x, y)| x.checked_add(*y).ok_or_else(overflow)).collect()
}

/// A cheaper patterned word for the same element: `Ψ_τ(u) = Ψ_π(v)`,
/// `ρ(τ̄) = ρ(π̄)` and `Ω_τ(u) < Ω_π(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub pattern: Pattern,
    pub u: Vec<u64>,
    pub weight: u64,
}

#[derive(Clone, Debug)]
struct Item {
    vec: Point,
    weight: u64,
    y: usize,
    coset: Coset,
}

/// Minimal `Y`-block weight to reach each translation using blocks in a
/// fixed set of cosets.
#[derive(Debug)]
struct Reach {
    items: Vec<Item>,
    /// point ↦ (weight, item used last)
    dist: HashMap<Point, (u64, Option<usize>)>,
}

impl Reach {
    fn build(yp: &AlphabetYP, cosets: &[Coset], budget: u64) -> Result<Reach, Error> {
        let mut best: BTreeMap<Point, Item> = BTreeMap::new();
        for &c in cosets {
            let r = yp.spec().action(c);
            for (i, y) in yp.y().iter().enumerate() {
                let vec = small(&r.apply(&y.z))?;
                if vec.iter().all(|&x| x == 0) {
                    continue;
                }
                let cand = Item { vec: vec.clone(), weight: y.weight, y: i, coset: c };
                match best.get(&vec) {
                    Some(old) if old.weight <= y.weight => {}
                    _ => {
                        best.insert(vec, cand);
                    }
                }
            }
        }
        let items: Vec<Item> = best.into_values().collect();
        let zero = vec![0i64; yp.spec().rank()];
        let mut dist: HashMap<Point, (u64, Option<usize>)> = HashMap::new();
        let mut buckets: BTreeMap<u64, Vec<(Point, Option<usize>)>> = BTreeMap::new();
        buckets.insert(0, vec![(zero, None)]);
        while let Some((w, layer)) = buckets.pop_first() {
            for (p, via) in layer {
                if dist.contains_key(&p) {
                    continue;
                }
                for (k, it) in items.iter().enumerate() {
                    let nw = w + it.weight;
                    if nw <= budget {
                        let q = add(&p, &it.vec)?;
                        if !dist.contains_key(&q) {
                            buckets.entry(nw).or_default().push((q, Some(k)));
                        }
                    }
                }
                dist.insert(p, (w, via));
            }
        }
        Ok(Reach { items, dist })
    }

    fn weight(&self, p: &[i64]) -> Option<u64> {
        self.dist.get(p).map(|&(w, _)| w)
    }

    /// The multiset of items along a shortest route to `p`.
    fn route(&self, p: &[i64]) -> Vec<&Item> {
        let mut out = Vec::new();
        let mut cur = p.to_vec();
        while let Some(&(_, Some(k))) = self.dist.get(&cur) {
            let it = &self.items[k];
            cur = cur.iter().zip(&it.vec).map(|(a, b)| a - b).collect();
            out.push(it);
        }
        out
    }
}

#[derive(Debug, Default)]
struct Tables {
    budget: u64,
    reach: HashMap<Vec<Coset>, Reach>,
    /// Per end coset: translation ↦ least weight of a patterned word of
    /// that coset reaching it, within the budget.
    best: Vec<HashMap<Point, u64>>,
}

/// Decides geodesicity of patterned words by comparing against every
/// pattern of the same end coset.
///
/// For each set `S` of prefix cosets the translations reachable by `Y`
/// blocks, with their least weights, form one shortest-path table over
/// `ℤⁿ`. Combining those tables with the offsets `ψ(τ̄)` of all patterns
/// gives, per end coset, the least weight of any patterned word reaching a
/// translation. A patterned word is a geodesic iff nothing cheaper reaches
/// its own translation. Tables are built up to a weight budget and rebuilt
/// when a query needs more.
#[derive(Debug)]
pub struct PatternCriterion<'a> {
    yp: &'a AlphabetYP,
    tables: RwLock<Tables>,
}

impl<'a> PatternCriterion<'a> {
    pub fn new(yp: &'a AlphabetYP) -> Self {
        PatternCriterion { yp, tables: RwLock::new(Tables::default()) }
    }

    pub fn alphabet(&self) -> &'a AlphabetYP {
        self.yp
    }

    /// Builds the tables for every query of weight up to `max_weight`.
    pub fn prepare(&self, max_weight: u64) -> Result<(), Error> {
        self.ensure(max_weight.saturating_sub(1))
    }

    fn ensure(&self, budget: u64) -> Result<(), Error> {
        {
            let t = self.tables.read().expect("criterion tables poisoned");
            if !t.best.is_empty() && t.budget >= budget {
                return Ok(());
            }
        }
        let mut t = self.tables.write().expect("criterion tables poisoned");
        if !t.best.is_empty() && t.budget >= budget {
            return Ok(());
        }
        let budget = budget.max(t.budget + t.budget / 2).max(4);
        *t = self.build(budget)?;
        Ok(())
    }

    fn build(&self, budget: u64) -> Result<Tables, Error> {
        let yp = self.yp;
        let d = yp.d();
        let mut offsets: HashMap<(Coset, Vec<Coset>), HashMap<Point, u64>> = HashMap::new();
        for (_, info) in yp.patterns().iter() {
            if info.weight > budget {
                continue;
            }
            let key = (info.pattern.end(), info.pattern.coset_set());
            let slot = offsets.entry(key).or_default().entry(small(&info.psi)?).or_insert(u64::MAX);
            *slot = (*slot).min(info.weight);
        }
        let mut reach = HashMap::new();
        let mut best: Vec<HashMap<Point, u64>> = vec![HashMap::new(); d];
        for ((end, set), offs) in &offsets {
            if !reach.contains_key(set) {
                reach.insert(set.clone(), Reach::build(yp, set, budget)?);
            }
            let r = &reach[set];
            let table = &mut best[end.0];
            for (o, &wo) in offs {
                for (p, &(wp, _)) in &r.dist {
                    let w = wo + wp;
                    if w <= budget {
                        let q = add(o, p)?;
                        let e = table.entry(q).or_insert(u64::MAX);
                        *e = (*e).min(w);
                    }
                }
            }
        }
        Ok(Tables { budget, reach, best })
    }

    /// `ℓ_ω(z · t)` if it is at most `max`, computed from the tables.
    pub fn min_weight(&self, z: &[BigInt], t: Coset, max: u64) -> Result<Option<u64>, Error> {
        self.ensure(max)?;
        let Some(p) = z.iter().map(ToPrimitive::to_i64).collect::<Option<Point>>() else {
            return Ok(None);
        };
        let tables = self.tables.read().expect("criterion tables poisoned");
        Ok(tables.best[t.0].get(&p).copied().filter(|&w| w <= max))
    }

    /// Whether `v^π` is a geodesic.
    pub fn is_geodesic_pattern(&self, pw: &PatternedWord) -> Result<bool, Error> {
        let (target, weight) = self.yp.pattern_maps(pw)?;
        if weight == 0 {
            return Ok(true);
        }
        Ok(self.min_weight(&target, pw.pattern.end(), weight - 1)?.is_none())
    }

    /// Shuffles `σ` and tests the resulting patterned word.
    pub fn is_geodesic_word(&self, sigma: &Word) -> Result<bool, Error> {
        self.is_geodesic_pattern(&self.yp.shuffle_only(sigma))
    }

    /// The first pattern, in enumeration order, admitting a cheaper
    /// patterned word for the same element, with such a word.
    pub fn witness(&self, pw: &PatternedWord) -> Result<Option<Witness>, Error> {
        let (target, weight) = self.yp.pattern_maps(pw)?;
        if weight == 0 {
            return Ok(None);
        }
        let max = weight - 1;
        self.ensure(max)?;
        let Some(target) = target.iter().map(ToPrimitive::to_i64).collect::<Option<Point>>() else {
            return Ok(None);
        };
        let tables = self.tables.read().expect("criterion tables poisoned");
        let m = self.yp.m();
        for (_, info) in self.yp.patterns().iter() {
            if info.pattern.end() != pw.pattern.end() || info.weight > max {
                continue;
            }
            let rest: Point = target.iter().zip(small(&info.psi)?).map(|(a, b)| a - b).collect();
            let set = info.pattern.coset_set();
            let Some(r) = tables.reach.get(&set) else { continue };
            let Some(w) = r.weight(&rest) else { continue };
            if info.weight + w > max {
                continue;
            }
            let mut u = vec![0u64; (info.pattern.len() + 1) * m];
            for it in r.route(&rest) {
                let block = info.pattern.cosets().iter().position(|&c| c == it.coset).expect("item coset is a prefix coset");
                u[block * m + it.y] += 1;
            }
            return Ok(Some(Witness { pattern: info.pattern.clone(), u, weight: info.weight + w }));
        }
        Ok(None)
    }

    /// The set `{u ≥ 0 | Ψ_τ(u) = Ψ_π(v), Ω_τ(u) ≤ Ω_π(v) − 1}` over
    /// `𝒩_τ`, with a box containing all of its points. `None` when
    /// `ω(τ) ≥ Ω_π(v)` or the end cosets differ (no such `u` can exist).
    pub fn dominating_basic_set(
        &self,
        pw: &PatternedWord,
        tau: &Pattern,
    ) -> Result<Option<(BasicSet, BoxBounds)>, Error> {
        let yp = self.yp;
        let (target, weight) = yp.pattern_maps(pw)?;
        let wt = yp.pattern_weight(tau);
        if tau.end() != pw.pattern.end() || wt >= weight {
            return Ok(None);
        }
        let spare = weight - 1 - wt;
        let m = yp.m();
        let n = yp.spec().rank();
        let dim = (tau.len() + 1) * m;
        let mut columns: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
        for &c in tau.cosets() {
            for y in yp.y() {
                columns.push(yp.spec().action(c).apply(&y.z));
            }
        }
        let psi = yp.pattern_psi(tau);
        let mut basic = BasicSet::universe(dim);
        for i in 0..dim {
            basic.push(Atom::coord_gt(dim, i, -1))?;
        }
        for l in 0..n {
            let a = columns.iter().map(|col| col[l].clone()).collect();
            basic.push(Atom::eq(a, &target[l] - &psi[l]))?;
        }
        let omega: Vec<BigInt> = (0..dim).map(|i| -BigInt::from(yp.y()[i % m].weight)).collect();
        basic.push(Atom::ge(omega, -BigInt::from(spare)))?;
        let bounds =
            (0..dim).map(|i| (BigInt::zero(), BigInt::from((weight - wt) / yp.y()[i % m].weight))).collect();
        Ok(Some((basic, bounds)))
    }

    /// The criterion evaluated literally: one bounded lattice-point search
    /// per pattern. Exponentially slower than [`Self::is_geodesic_pattern`];
    /// kept as an independent reference.
    pub fn is_geodesic_pattern_by_search(&self, pw: &PatternedWord) -> Result<bool, Error> {
        for (_, info) in self.yp.patterns().iter() {
            if let Some((basic, bounds)) = self.dominating_basic_set(pw, &info.pattern)? {
                if exists_point(&basic, &bounds).is_some() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The budget the tables currently cover.
    pub fn budget(&self) -> u64 {
        self.tables.read().expect("criterion tables poisoned").budget
    }
}

