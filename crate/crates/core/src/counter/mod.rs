//! Blind multicounter automata: a nondeterministic finite-state acceptor
//! with integer counters it may add to but never read.

mod text;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::Error;

/// What a transition reads.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Input {
    /// Consumes one letter, given by its alphabet index.
    Letter(usize),
    Epsilon,
    /// Fires only on the end-of-tape symbol, which it leaves in place.
    EndOfTape,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: usize,
    pub input: Input,
    pub to: usize,
    pub delta: Vec<BigInt>,
}

/// Where the certified answers of a machine stop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Window {
    /// Exact on every input.
    Exact,
    /// Exact on inputs of weight at most this bound.
    MaxWeight(u64),
}

/// `(Q, Σ, δ, q₀, F, 𝔢)` with `k` counters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterMachine {
    states: Vec<String>,
    state_index: HashMap<String, usize>,
    alphabet: Vec<String>,
    weights: Vec<u64>,
    k: usize,
    transitions: Vec<Transition>,
    outgoing: Vec<Vec<usize>>,
    init: usize,
    accept: BTreeSet<usize>,
    eot: String,
    window: Window,
}

/// An instantaneous description `(q, c, σ𝔢)`; the remaining input is the
/// suffix of the word after `consumed` letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: usize,
    pub counters: Vec<BigInt>,
    pub consumed: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Accept,
    Reject,
    BudgetExhausted,
}

impl CounterMachine {
    /// A machine with no states yet; the first state added is initial
    /// until [`set_init`](Self::set_init) says otherwise. `alphabet` pairs
    /// letter labels with weights.
    pub fn new(k: usize, alphabet: Vec<(String, u64)>, eot: impl Into<String>) -> Result<Self, Error> {
        let eot = eot.into();
        let mut seen = HashSet::new();
        for (a, _) in &alphabet {
            if a == &eot || a == "eps" || !seen.insert(a.clone()) || a.split_whitespace().count() != 1 {
                return Err(Error::Invalid(format!("bad or repeated alphabet letter `{a}`")));
            }
        }
        let (alphabet, weights) = alphabet.into_iter().unzip();
        Ok(CounterMachine {
            states: Vec::new(),
            state_index: HashMap::new(),
            alphabet,
            weights,
            k,
            transitions: Vec::new(),
            outgoing: Vec::new(),
            init: 0,
            accept: BTreeSet::new(),
            eot,
            window: Window::Exact,
        })
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<usize, Error> {
        let name = name.into();
        if name.is_empty() || name.split_whitespace().count() != 1 {
            return Err(Error::Invalid(format!("state name `{name}` must be one token")));
        }
        if self.state_index.contains_key(&name) {
            return Err(Error::Invalid(format!("state `{name}` declared twice")));
        }
        let id = self.states.len();
        self.state_index.insert(name.clone(), id);
        self.states.push(name);
        self.outgoing.push(Vec::new());
        Ok(id)
    }

    pub fn add_transition(&mut self, from: usize, input: Input, to: usize, delta: Vec<BigInt>) -> Result<(), Error> {
        if from >= self.states.len() || to >= self.states.len() {
            return Err(Error::Invalid("transition refers to an unknown state".into()));
        }
        if let Input::Letter(a) = input {
            if a >= self.alphabet.len() {
                return Err(Error::Invalid(format!("letter index {a} is outside the alphabet")));
            }
        }
        if delta.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: delta.len() });
        }
        self.outgoing[from].push(self.transitions.len());
        self.transitions.push(Transition { from, input, to, delta });
        Ok(())
    }

    pub fn set_init(&mut self, q: usize) {
        self.init = q;
    }

    pub fn add_accept(&mut self, q: usize) {
        self.accept.insert(q);
    }

    pub fn set_window(&mut self, window: Window) {
        self.window = window;
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.state_index.get(name).copied()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn letter(&self, label: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == label)
    }

    pub fn counters(&self) -> usize {
        self.k
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, q: usize) -> impl Iterator<Item = &Transition> {
        self.outgoing[q].iter().map(|&i| &self.transitions[i])
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accept
    }

    pub fn eot(&self) -> &str {
        &self.eot
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Whether the machine's answer on `word` is certified.
    pub fn in_window(&self, word: &[usize]) -> bool {
        match self.window {
            Window::Exact => true,
            Window::MaxWeight(w) => word.iter().map(|&a| self.weights[a]).sum::<u64>() <= w,
        }
    }

    /// Parses a word of letter labels: space separated, or one character
    /// per letter when every label is a single character.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, Error> {
        let text = text.trim();
        if text.is_empty() || text == "eps" || text == "ε" {
            return Ok(Vec::new());
        }
        let lookup = |t: &str| self.letter(t).ok_or_else(|| Error::UnknownLabel(t.to_owned()));
        if text.contains(char::is_whitespace) || !self.alphabet.iter().all(|a| a.chars().count() == 1) {
            text.split_whitespace().map(lookup).collect()
        } else {
            text.chars().map(|c| lookup(&c.to_string())).collect()
        }
    }

    pub fn start(&self) -> Configuration {
        Configuration { state: self.init, counters: vec![BigInt::zero(); self.k], consumed: 0 }
    }

    /// All one-step successors of `c` on input `word`.
    pub fn step(&self, c: &Configuration, word: &[usize]) -> Vec<Configuration> {
        let next = word.get(c.consumed).copied();
        self.outgoing(c.state)
            .filter_map(|t| {
                let consumed = match t.input {
                    Input::Letter(a) if next == Some(a) => c.consumed + 1,
                    Input::Epsilon => c.consumed,
                    Input::EndOfTape if next.is_none() => c.consumed,
                    _ => return None,
                };
                let counters = c.counters.iter().zip(&t.delta).map(|(x, d)| x + d).collect();
                Some(Configuration { state: t.to, counters, consumed })
            })
            .collect()
    }

    pub fn is_accepting(&self, c: &Configuration, word: &[usize]) -> bool {
        c.consumed == word.len() && self.accept.contains(&c.state) && c.counters.iter().all(Zero::is_zero)
    }

    /// Breadth-first search over configurations, expanding at most
    /// `budget` of them.
    ///
    /// A configuration is dropped when some counter is negative (positive)
    /// and no transition reachable from its state can raise (lower) that
    /// counter; such a run can never return to zero.
    pub fn run_bounded(&self, word: &[usize], budget: usize) -> RunOutcome {
        let (can_raise, can_lower) = self.monotonicity();
        let hopeless = |c: &Configuration| {
            c.counters.iter().enumerate().any(|(j, x)| {
                (x.is_negative() && !can_raise[c.state][j]) || (x.is_positive() && !can_lower[c.state][j])
            })
        };
        let start = self.start();
        let mut seen: HashSet<Configuration> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        let mut expanded = 0;
        while let Some(c) = queue.pop_front() {
            if self.is_accepting(&c, word) {
                return RunOutcome::Accept;
            }
            if expanded == budget {
                return RunOutcome::BudgetExhausted;
            }
            expanded += 1;
            for n in self.step(&c, word) {
                if !hopeless(&n) && seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        RunOutcome::Reject
    }

    /// For each state and counter: can some transition reachable from the
    /// state (itself included) raise, respectively lower, the counter?
    fn monotonicity(&self) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
        let n = self.states.len();
        let mut raise = vec![vec![false; self.k]; n];
        let mut lower = vec![vec![false; self.k]; n];
        for t in &self.transitions {
            for (j, d) in t.delta.iter().enumerate() {
                raise[t.from][j] |= d.is_positive();
                lower[t.from][j] |= d.is_negative();
            }
        }
        // Propagate backwards along edges until stable.
        let mut changed = true;
        while changed {
            changed = false;
            for t in &self.transitions {
                for j in 0..self.k {
                    if raise[t.to][j] && !raise[t.from][j] {
                        raise[t.from][j] = true;
                        changed = true;
                    }
                    if lower[t.to][j] && !lower[t.from][j] {
                        lower[t.from][j] = true;
                        changed = true;
                    }
                }
            }
        }
        (raise, lower)
    }

    fn input_name(&self, input: &Input) -> &str {
        match input {
            Input::Letter(a) => &self.alphabet[*a],
            Input::Epsilon => "eps",
            Input::EndOfTape => &self.eot,
        }
    }

    /// DOT rendering: accepting states are double circles and each edge
    /// shows its input and counter delta.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph machine {\n  rankdir=LR;\n  start [shape=point];\n");
        for (i, name) in self.states.iter().enumerate() {
            let shape = if self.accept.contains(&i) { "doublecircle" } else { "circle" };
            writeln!(out, "  s{i} [label=\"{}\", shape={shape}];", name.replace('"', "\\\"")).unwrap();
        }
        writeln!(out, "  start -> s{};", self.init).unwrap();
        for t in &self.transitions {
            let delta: Vec<String> = t.delta.iter().map(ToString::to_string).collect();
            writeln!(out, "  s{} -> s{} [label=\"{} / ({})\"];", t.from, t.to, self.input_name(&t.input), delta.join(",")).unwrap();
        }
        out.push_str("}\n");
        out
    }
}
