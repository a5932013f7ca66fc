use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::GrowthTable;

/// A rational generating function `P(z) / Q(z)` for the cumulative counts,
/// with `Q(0) = 1` and `deg P < order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFit {
    /// `P`, lowest degree first, trailing zeros removed.
    pub numerator: Vec<BigRational>,
    /// `Q`, lowest degree first, of length `order + 1`.
    pub denominator: Vec<BigRational>,
    /// Order of the linear recurrence.
    pub order: usize,
    /// Largest `n` the fit was checked against.
    pub horizon: u64,
}

impl RationalFit {
    /// `r` with `c_n = r_1 c_{n−1} + ⋯ + r_L c_{n−L}` for `n ≥ L`.
    pub fn recurrence(&self) -> Vec<BigRational> {
        self.denominator[1..].iter().map(|q| -q).collect()
    }

    /// `x^L + q_1 x^{L−1} + ⋯ + q_L`, highest degree first; its roots are
    /// the characteristic roots of the recurrence.
    pub fn characteristic(&self) -> Vec<BigRational> {
        self.denominator.clone()
    }

    /// The first `count` coefficients of `P / Q`.
    pub fn terms(&self, count: usize) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = Vec::with_capacity(count);
        for n in 0..count {
            let mut a = self.numerator.get(n).cloned().unwrap_or_else(BigRational::zero);
            for (i, q) in self.denominator.iter().enumerate().skip(1).take(n) {
                a -= q * &out[n - i];
            }
            out.push(a);
        }
        out
    }

    /// Evaluates the characteristic polynomial at `x`.
    pub fn characteristic_at(&self, x: &BigRational) -> BigRational {
        self.denominator.iter().fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

/// Berlekamp–Massey over `ℚ`: the shortest linear recurrence generating
/// `s`, as `(L, C)` with `C(0) = 1`.
fn berlekamp_massey(s: &[BigRational]) -> (usize, Vec<BigRational>) {
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0;
    let mut shift = 1;
    let mut last = BigRational::one();
    for n in 0..s.len() {
        let d = (0..=l).fold(BigRational::zero(), |acc, i| acc + c.get(i).cloned().unwrap_or_default() * &s[n - i]);
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let factor = &d / &last;
        let prev = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + shift] -= &factor * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(l + 1, BigRational::zero());
    (l, c)
}

/// The minimal recurrence with constant rational coefficients fitting the
/// cumulative counts, if its order is at most `min(cap, (rows − 2) / 2)`.
/// The returned fit reproduces every row exactly.
pub fn fit_rational_series(t: &GrowthTable, cap: usize) -> Option<RationalFit> {
    let s: Vec<BigRational> = t.rows().iter().map(|r| BigRational::from_integer(BigInt::from(r.cumulative))).collect();
    let limit = cap.min(s.len().saturating_sub(2) / 2);
    let (order, q) = berlekamp_massey(&s);
    if order > limit || s.is_empty() {
        return None;
    }
    let mut numerator: Vec<BigRational> = (0..order)
        .map(|n| (0..=n).fold(BigRational::zero(), |acc, i| acc + &q[i] * &s[n - i]))
        .collect();
    while numerator.last().is_some_and(Zero::is_zero) {
        numerator.pop();
    }
    let fit = RationalFit { numerator, denominator: q, order, horizon: t.horizon()? };
    (fit.terms(s.len()) == s).then_some(fit)
}
