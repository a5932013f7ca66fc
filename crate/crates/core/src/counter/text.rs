//! Line format for machines:
//!
//! ```text
//! counters 1
//! eot $
//! window exact
//! alphabet a 1
//! state q0
//! state q1
//! init q0
//! accept q1
//! trans q0 a q1 1
//! trans q1 $ q1 -1
//! ```
//!
//! `eps` reads nothing; the `eot` symbol names end-of-tape moves. Header
//! lines may appear in any order but before the first `trans`.

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::{CounterMachine, Input, Window};
use crate::error::Error;
use crate::polyhedra::tokens;

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Format { line, message: message.into() }
}

impl CounterMachine {
    pub fn parse(text: &str) -> Result<CounterMachine, Error> {
        let mut k = None;
        let mut eot = "$".to_owned();
        let mut window = Window::Exact;
        let mut alphabet = Vec::new();
        let mut states = Vec::new();
        let mut init = None;
        let mut accept = Vec::new();
        let mut trans = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let no = i + 1;
            let t = tokens(raw);
            if t.is_empty() {
                continue;
            }
            let arity = |n: usize| if t.len() == n { Ok(()) } else { Err(err(no, format!("`{}` takes {} argument(s)", t[0], n - 1))) };
            match t[0] {
                "trans" => {
                    trans.push((no, t));
                    continue;
                }
                _ if !trans.is_empty() => return Err(err(no, "header lines must come before transitions")),
                "counters" => {
                    arity(2)?;
                    k = Some(t[1].parse::<usize>().map_err(|_| err(no, "counter count is not a number"))?);
                }
                "eot" => {
                    arity(2)?;
                    eot = t[1].to_owned();
                }
                "window" => {
                    arity(2)?;
                    window = match t[1] {
                        "exact" => Window::Exact,
                        w => Window::MaxWeight(w.parse().map_err(|_| err(no, "window is `exact` or a weight"))?),
                    };
                }
                "alphabet" => {
                    let weight = match t.len() {
                        2 => 1,
                        3 => t[2].parse().ok().filter(|&w| w > 0).ok_or_else(|| err(no, "letter weight must be positive"))?,
                        _ => return Err(err(no, "`alphabet` takes a label and an optional weight")),
                    };
                    alphabet.push((t[1].to_owned(), weight));
                }
                "state" => {
                    arity(2)?;
                    states.push((no, t[1].to_owned()));
                }
                "init" => {
                    arity(2)?;
                    init = Some((no, t[1].to_owned()));
                }
                "accept" => {
                    arity(2)?;
                    accept.push((no, t[1].to_owned()));
                }
                other => return Err(err(no, format!("unknown directive `{other}`"))),
            }
        }

        let k = k.ok_or_else(|| err(1, "missing `counters` line"))?;
        let mut m = CounterMachine::new(k, alphabet, eot).map_err(|e| err(1, e.to_string()))?;
        m.set_window(window);
        for (no, s) in states {
            m.add_state(s).map_err(|e| err(no, e.to_string()))?;
        }
        let state = |m: &CounterMachine, no: usize, s: &str| m.state_id(s).ok_or_else(|| err(no, format!("undeclared state `{s}`")));
        let (no, q) = init.ok_or_else(|| err(1, "missing `init` line"))?;
        m.set_init(state(&m, no, &q)?);
        for (no, q) in accept {
            let id = state(&m, no, &q)?;
            m.add_accept(id);
        }
        for (no, t) in trans {
            if t.len() != 4 + k {
                return Err(err(no, format!("`trans` needs a source, an input, a target and {k} counter deltas")));
            }
            let from = state(&m, no, t[1])?;
            let to = state(&m, no, t[3])?;
            let input = match t[2] {
                "eps" => Input::Epsilon,
                s if s == m.eot() => Input::EndOfTape,
                s => Input::Letter(m.letter(s).ok_or_else(|| err(no, format!("`{s}` is not in the alphabet")))?),
            };
            let delta = t[4..]
                .iter()
                .map(|x| x.parse::<BigInt>().map_err(|_| err(no, format!("`{x}` is not an integer"))))
                .collect::<Result<Vec<_>, _>>()?;
            m.add_transition(from, input, to, delta).map_err(|e| err(no, e.to_string()))?;
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "counters {}", self.k).unwrap();
        writeln!(out, "eot {}", self.eot).unwrap();
        match self.window {
            Window::Exact => out.push_str("window exact\n"),
            Window::MaxWeight(w) => writeln!(out, "window {w}").unwrap(),
        }
        for (a, w) in self.alphabet.iter().zip(&self.weights) {
            writeln!(out, "alphabet {a} {w}").unwrap();
        }
        for s in &self.states {
            writeln!(out, "state {s}").unwrap();
        }
        writeln!(out, "init {}", self.states[self.init]).unwrap();
        for &q in &self.accept {
            writeln!(out, "accept {}", self.states[q]).unwrap();
        }
        for t in &self.transitions {
            write!(out, "trans {} {} {}", self.states[t.from], self.input_name(&t.input), self.states[t.to]).unwrap();
            for d in &t.delta {
                write!(out, " {d}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}
