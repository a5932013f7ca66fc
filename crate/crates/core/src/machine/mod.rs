//! A blind multicounter machine for the language of geodesics, built from
//! a decomposition of each `𝒢_π` into basic sets.

mod decomposition;

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use decomposition::{for_each_patterned, windowed_decomposition, Decomposition, Mismatch};

use crate::counter::{CounterMachine, Input, Window};
use crate::error::Error;
use crate::group::Word;
use crate::polyhedra::{Atom, BasicSet};
use crate::shuffle::{AlphabetYP, Pattern};

/// One basic `B_{π,i}` split into its strict, congruence and equality
/// atoms, in that counter order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicForm {
    pub pattern: Pattern,
    /// One-based position among the basics of `π`.
    pub index: usize,
    /// `(α, β)`: `α · v > β`.
    pub strict: Vec<(Vec<BigInt>, BigInt)>,
    /// `(χ, η, θ)`: `χ · v ≡ η (mod θ)`.
    pub congruences: Vec<(Vec<BigInt>, BigInt, BigInt)>,
    /// `(ξ, λ)`: `ξ · v = λ`.
    pub equalities: Vec<(Vec<BigInt>, BigInt)>,
}

impl BasicForm {
    fn new(pattern: Pattern, index: usize, b: &BasicSet) -> BasicForm {
        let mut f = BasicForm { pattern, index, strict: Vec::new(), congruences: Vec::new(), equalities: Vec::new() };
        for atom in b.atoms() {
            match atom {
                Atom::Gt { a, b } => f.strict.push((a.clone(), b.clone())),
                Atom::Cong { a, b, c } => f.congruences.push((a.clone(), b.clone(), c.clone())),
                Atom::Eq { a, b } => f.equalities.push((a.clone(), b.clone())),
            }
        }
        f
    }

    /// `K₁ + K₂ + K₃`.
    pub fn counters_needed(&self) -> usize {
        self.strict.len() + self.congruences.len() + self.equalities.len()
    }

    fn rows(&self) -> impl Iterator<Item = &Vec<BigInt>> {
        self.strict.iter().map(|(a, _)| a).chain(self.congruences.iter().map(|(a, _, _)| a)).chain(self.equalities.iter().map(|(a, _)| a))
    }

    /// `C_{π,i}(e_x)` padded to `k` counters; zero when `x` is `None` or
    /// outside `𝒩_π`.
    pub fn column(&self, x: Option<usize>, k: usize) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = match x {
            Some(x) => self.rows().map(|r| r.get(x).cloned().unwrap_or_default()).collect(),
            None => Vec::new(),
        };
        out.resize(k, BigInt::zero());
        out
    }

    /// `C_{π,i}(v)` padded to `k` counters.
    pub fn apply(&self, v: &[BigInt], k: usize) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = self.rows().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
        out.resize(k, BigInt::zero());
        out
    }

    /// `μ_{π,i} = (−β−1, −η, −λ, 0, …)`.
    pub fn offset(&self, k: usize) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = self
            .strict
            .iter()
            .map(|(_, b)| -b - 1)
            .chain(self.congruences.iter().map(|(_, e, _)| -e))
            .chain(self.equalities.iter().map(|(_, l)| -l))
            .collect();
        out.resize(k, BigInt::zero());
        out
    }

    /// `loops_reach_zero(C(v) + μ)`, computed one counter at a time and
    /// stopping at the first that cannot be cleared.
    pub fn settles(&self, v: &[BigInt]) -> bool {
        let dot = |a: &[BigInt]| -> BigInt { a.iter().zip(v).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * y).sum() };
        self.equalities.iter().all(|(a, l)| &dot(a) == l)
            && self.strict.iter().all(|(a, b)| &dot(a) > b)
            && self.congruences.iter().all(|(a, e, t)| (dot(a) - e).mod_floor(t).is_zero())
    }

    /// Whether the loops at `q_{π,i}` can bring `c` to zero: strict
    /// counters nonnegative, congruence counters divisible by `θ`, the
    /// rest zero.
    pub fn loops_reach_zero(&self, c: &[BigInt]) -> bool {
        let k1 = self.strict.len();
        let k2 = self.congruences.len();
        c[..k1].iter().all(|x| !x.is_negative())
            && c[k1..k1 + k2].iter().zip(&self.congruences).all(|(x, (_, _, t))| x.mod_floor(t).is_zero())
            && c[k1 + k2..].iter().all(Zero::is_zero)
    }
}

/// The machine, kept in structured form: the alphabet, the basic forms
/// and the counter count. [`GeodesicMachine::to_counter_machine`] writes
/// out every state and transition.
#[derive(Debug)]
pub struct GeodesicMachine<'a> {
    yp: &'a AlphabetYP,
    decomposition: Decomposition,
    forms: Vec<BasicForm>,
    by_pattern: HashMap<Pattern, Vec<usize>>,
    k: usize,
}

/// What a structured run ends with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Accepted through the final state of this basic.
    Accept { pattern: Pattern, index: usize },
    Reject,
    /// Input heavier than the certified window; reported as a rejection.
    OutsideWindow,
}

/// A vertex `[τ, w]` of the shuffle phase with its outgoing moves.
type Phase = BTreeMap<(Pattern, Word), Vec<(Input, Pattern, Word, Option<usize>)>>;

impl<'a> GeodesicMachine<'a> {
    /// `k` defaults to the largest `K₁ + K₂ + K₃`; a smaller one is an
    /// error.
    pub fn build(yp: &'a AlphabetYP, decomposition: Decomposition, k: Option<usize>) -> Result<Self, Error> {
        let mut forms = Vec::new();
        let mut by_pattern: HashMap<Pattern, Vec<usize>> = HashMap::new();
        for (pat, set) in decomposition.iter() {
            let dim = (pat.len() + 1) * yp.m();
            if set.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: set.dim() });
            }
            for (i, b) in set.basics().iter().enumerate() {
                by_pattern.entry(pat.clone()).or_default().push(forms.len());
                forms.push(BasicForm::new(pat.clone(), i + 1, b));
            }
        }
        let needed = forms.iter().map(BasicForm::counters_needed).max().unwrap_or(0);
        let k = k.unwrap_or(needed);
        if k < needed {
            return Err(Error::Invalid(format!("{k} counters are too few; the decomposition needs {needed}")));
        }
        Ok(GeodesicMachine { yp, decomposition, forms, by_pattern, k })
    }

    pub fn alphabet(&self) -> &'a AlphabetYP {
        self.yp
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn forms(&self) -> &[BasicForm] {
        &self.forms
    }

    pub fn counters(&self) -> usize {
        self.k
    }

    pub fn in_window(&self, sigma: &Word) -> bool {
        match self.decomposition.window() {
            Window::Exact => true,
            Window::MaxWeight(w) => self.yp.spec().word_weight(sigma) <= w,
        }
    }

    /// Decides acceptance the way the construction runs: the shuffle
    /// phase is deterministic once a basic is guessed, guesses for other
    /// patterns die at `[τ, ε, π, i]`, and the final loops are settled
    /// arithmetically.
    pub fn run(&self, sigma: &Word) -> Verdict {
        if !self.in_window(sigma) {
            return Verdict::OutsideWindow;
        }
        // The Δ moves add `C(e_x)` for each slot `x`, so by linearity the
        // counters at `[π, ε, π, i]` are `C(v)` for the shuffled `v`.
        let pw = self.yp.shuffle_only(sigma);
        let v = decomposition::to_ints(&pw.v);
        for &f in self.by_pattern.get(&pw.pattern).map_or(&[][..], Vec::as_slice) {
            let form = &self.forms[f];
            if form.settles(&v) {
                return Verdict::Accept { pattern: form.pattern.clone(), index: form.index };
            }
        }
        Verdict::Reject
    }

    pub fn accepts(&self, sigma: &Word) -> bool {
        matches!(self.run(sigma), Verdict::Accept { .. })
    }

    /// Counter values after a guess of `forms()[form]`: at the start and
    /// after each `Δ` move of the shuffle phase.
    pub fn counter_trace(&self, sigma: &Word, form: usize) -> Vec<Vec<BigInt>> {
        let f = &self.forms[form];
        let (_, trace) = self.yp.shuffle(sigma);
        let mut c = vec![BigInt::zero(); self.k];
        let mut out = vec![c.clone()];
        for mv in &trace.moves {
            for (x, d) in c.iter_mut().zip(f.column(mv.delta.slot, self.k)) {
                *x += d;
            }
            out.push(c.clone());
        }
        out
    }

    /// The states `[τ, w]` reachable from `[ε, ε]` by prefix filling and
    /// `Δ` moves, with their moves. The same for every guess.
    fn shuffle_phase(&self, max_vertices: usize) -> Result<Phase, Error> {
        let d = self.yp.d();
        let spec = self.yp.spec();
        let mut phase: Phase = BTreeMap::new();
        let mut queue = VecDeque::from([(Pattern::empty(), Word::empty())]);
        while let Some((tau, w)) = queue.pop_front() {
            if phase.contains_key(&(tau.clone(), w.clone())) {
                continue;
            }
            if phase.len() == max_vertices {
                return Err(Error::Invalid(format!("the shuffle phase has more than {max_vertices} vertices")));
            }
            let mut moves = Vec::new();
            if w.len() < d {
                for (a, g) in spec.gens().enumerate() {
                    let mut ws = w.clone();
                    ws.push(g);
                    moves.push((Input::Letter(a), tau.clone(), ws, None));
                }
            }
            if tau.is_strong() && !w.is_empty() {
                let r = self.yp.delta(&tau, &w)?;
                let input = if w.len() == d { Input::Epsilon } else { Input::EndOfTape };
                moves.push((input, r.pattern, r.word, r.slot));
            }
            for (_, p, x, _) in &moves {
                queue.push_back((p.clone(), x.clone()));
            }
            phase.insert((tau, w), moves);
        }
        Ok(phase)
    }

    /// Writes out the machine state by state: `q₀`, `[τ, w, π, i]` for
    /// every reachable `[τ, w]` and basic, and `q_{π,i}`.
    pub fn to_counter_machine(&self, max_states: usize) -> Result<CounterMachine, Error> {
        let spec = self.yp.spec();
        let alphabet = spec.generators().iter().map(|g| (g.label.clone(), g.weight)).collect();
        let mut m = CounterMachine::new(self.k, alphabet, "$")?;
        m.set_window(self.decomposition.window());
        let phase = self.shuffle_phase(max_states)?;
        if 1 + self.forms.len() * (phase.len() + 1) > max_states {
            return Err(Error::Invalid(format!("the machine has more than {max_states} states")));
        }
        let q0 = m.add_state("q0")?;
        m.set_init(q0);
        let name = |p: &Pattern| {
            if p.is_empty() { "eps".to_owned() } else { self.yp.format_pattern(p).replace(' ', "_") }
        };
        let word = |w: &Word| {
            if w.is_empty() { "eps".to_owned() } else { spec.format_word(w).replace(' ', "_") }
        };
        let zero = vec![BigInt::zero(); self.k];
        for form in &self.forms {
            let pi = name(&form.pattern);
            let mut ids = HashMap::new();
            for (tau, w) in phase.keys() {
                let id = m.add_state(format!("[{},{},{pi},{}]", name(tau), word(w), form.index))?;
                ids.insert((tau, w), id);
            }
            let fin = m.add_state(format!("q[{pi},{}]", form.index))?;
            m.add_accept(fin);
            m.add_transition(q0, Input::Epsilon, ids[&(&Pattern::empty(), &Word::empty())], zero.clone())?;
            for ((tau, w), moves) in &phase {
                for (input, p, x, slot) in moves {
                    let delta = if matches!(input, Input::Letter(_)) { zero.clone() } else { form.column(*slot, self.k) };
                    m.add_transition(ids[&(tau, w)], input.clone(), ids[&(p, x)], delta)?;
                }
            }
            // No input shuffles to a pattern the phase never reaches.
            if let Some(&last) = ids.get(&(&form.pattern, &Word::empty())) {
                m.add_transition(last, Input::EndOfTape, fin, form.offset(self.k))?;
            }
            let k1 = form.strict.len();
            for j in 0..k1 {
                let mut e = zero.clone();
                e[j] = -BigInt::one();
                m.add_transition(fin, Input::EndOfTape, fin, e)?;
            }
            for (j, (_, _, theta)) in form.congruences.iter().enumerate() {
                for sign in [BigInt::one(), -BigInt::one()] {
                    let mut e = zero.clone();
                    e[k1 + j] = &sign * theta;
                    m.add_transition(fin, Input::EndOfTape, fin, e)?;
                }
            }
        }
        Ok(m)
    }
}
