use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{Atom, BasicSet, PolySet};

/// Inclusive per-coordinate bounds `(lo, hi)`.
pub type Bounds = [(BigInt, BigInt)];

struct Prepared<'a> {
    atoms: &'a [Atom],
    /// `suffix[k][i]` = (min, max) of `Σ_{j ≥ i} a_j z_j` over the box.
    suffix: Vec<Vec<(BigInt, BigInt)>>,
    /// Index past the last nonzero coefficient of each atom.
    last: Vec<usize>,
}

impl<'a> Prepared<'a> {
    fn new(basic: &'a BasicSet, bounds: &Bounds) -> Self {
        let dim = basic.dim();
        let mut suffix = Vec::with_capacity(basic.atoms().len());
        let mut last = Vec::with_capacity(basic.atoms().len());
        for atom in basic.atoms() {
            let a = atom.coeffs();
            let mut s = vec![(BigInt::zero(), BigInt::zero()); dim + 1];
            for i in (0..dim).rev() {
                let (lo, hi) = &bounds[i];
                let (x, y) = (&a[i] * lo, &a[i] * hi);
                let (mn, mx) = if x <= y { (x, y) } else { (y, x) };
                s[i] = (&s[i + 1].0 + mn, &s[i + 1].1 + mx);
            }
            suffix.push(s);
            last.push(a.iter().rposition(|c| !c.is_zero()).map_or(0, |p| p + 1));
        }
        Prepared { atoms: basic.atoms(), suffix, last }
    }

    /// Whether some completion of the coordinates `≥ i` can satisfy every
    /// atom, given the partial dot products.
    fn feasible(&self, i: usize, partial: &[BigInt]) -> bool {
        self.atoms.iter().enumerate().all(|(k, atom)| {
            let (mn, mx) = &self.suffix[k][i];
            let p = &partial[k];
            if i >= self.last[k] {
                return atom.holds_value(p);
            }
            match atom {
                Atom::Eq { b, .. } => &(p + mn) <= b && b <= &(p + mx),
                Atom::Gt { b, .. } => &(p + mx) > b,
                Atom::Cong { .. } => true,
            }
        })
    }

    /// A forced value for coordinate `i`: an equality whose last nonzero
    /// coefficient sits at `i`. `Err(())` when that value is not integral.
    fn forced(&self, i: usize, partial: &[BigInt]) -> Result<Option<BigInt>, ()> {
        for (k, atom) in self.atoms.iter().enumerate() {
            if let Atom::Eq { a, b } = atom {
                if self.last[k] == i + 1 {
                    let (q, r) = (b - &partial[k]).div_rem(&a[i]);
                    return if r.is_zero() { Ok(Some(q)) } else { Err(()) };
                }
            }
        }
        Ok(None)
    }
}

fn walk<F>(basic: &BasicSet, bounds: &Bounds, mut visit: F)
where
    F: FnMut(&[BigInt]) -> ControlFlow<()>,
{
    let dim = basic.dim();
    assert_eq!(bounds.len(), dim, "box dimension differs from the set");
    if bounds.iter().any(|(lo, hi)| lo > hi) {
        return;
    }
    let prep = Prepared::new(basic, bounds);
    let mut partial = vec![BigInt::zero(); basic.atoms().len()];
    let mut point = Vec::with_capacity(dim);
    let _ = rec(&prep, bounds, 0, &mut partial, &mut point, &mut visit);
}

fn rec<F>(
    prep: &Prepared,
    bounds: &Bounds,
    i: usize,
    partial: &mut Vec<BigInt>,
    point: &mut Vec<BigInt>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[BigInt]) -> ControlFlow<()>,
{
    if !prep.feasible(i, partial) {
        return ControlFlow::Continue(());
    }
    if i == bounds.len() {
        return visit(point);
    }
    let (lo, hi) = &bounds[i];
    let candidates: Box<dyn Iterator<Item = BigInt>> = match prep.forced(i, partial) {
        Err(()) => return ControlFlow::Continue(()),
        Ok(Some(x)) if &x < lo || &x > hi => return ControlFlow::Continue(()),
        Ok(Some(x)) => Box::new(std::iter::once(x)),
        Ok(None) => Box::new(ZigZag::new(lo.clone(), hi.clone())),
    };
    for x in candidates {
        for (k, atom) in prep.atoms.iter().enumerate() {
            partial[k] += &atom.coeffs()[i] * &x;
        }
        point.push(x.clone());
        let flow = rec(prep, bounds, i + 1, partial, point, visit);
        point.pop();
        for (k, atom) in prep.atoms.iter().enumerate() {
            partial[k] -= &atom.coeffs()[i] * &x;
        }
        flow?;
    }
    ControlFlow::Continue(())
}

/// The integers of `[lo, hi]` ordered by distance from the point of the
/// interval closest to zero, the smaller one first on ties:
/// `0, −1, 1, −2, 2, …`.
struct ZigZag {
    lo: BigInt,
    hi: BigInt,
    first: Option<BigInt>,
    down: BigInt,
    up: BigInt,
    next_down: bool,
}

impl ZigZag {
    fn new(lo: BigInt, hi: BigInt) -> Self {
        let center = if lo > BigInt::zero() {
            lo.clone()
        } else if hi < BigInt::zero() {
            hi.clone()
        } else {
            BigInt::zero()
        };
        let first = (lo <= hi).then(|| center.clone());
        ZigZag { lo, hi, first, down: &center - 1, up: center + 1, next_down: true }
    }
}

impl Iterator for ZigZag {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        if let Some(c) = self.first.take() {
            return Some(c);
        }
        let down_ok = self.down >= self.lo;
        let up_ok = self.up <= self.hi;
        let take_down = match (down_ok, up_ok) {
            (false, false) => return None,
            (true, false) => true,
            (false, true) => false,
            (true, true) => self.next_down,
        };
        if down_ok && up_ok {
            self.next_down = !self.next_down;
        }
        if take_down {
            let x = self.down.clone();
            self.down -= 1;
            Some(x)
        } else {
            let x = self.up.clone();
            self.up += 1;
            Some(x)
        }
    }
}

/// The first point of `basic` inside the box, if any. Coordinates are
/// fixed left to right and each is tried in the order `0, −1, 1, −2, …`
/// (clamped to the box), so witnesses are small and deterministic.
pub fn exists_point(basic: &BasicSet, bounds: &Bounds) -> Option<Vec<BigInt>> {
    let mut found = None;
    walk(basic, bounds, |p| {
        found = Some(p.to_vec());
        ControlFlow::Break(())
    });
    found
}

/// Every point of `set` inside the box, in lexicographic order.
pub fn enumerate_in_box(set: &PolySet, bounds: &Bounds) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    for b in set.basics() {
        walk(b, bounds, |p| {
            out.push(p.to_vec());
            ControlFlow::Continue(())
        });
    }
    out.sort();
    out.dedup();
    out
}

/// `[lo, hi]` in every one of `dim` coordinates.
pub fn cube(dim: usize, lo: i64, hi: i64) -> Vec<(BigInt, BigInt)> {
    vec![(BigInt::from(lo), BigInt::from(hi)); dim]
}
