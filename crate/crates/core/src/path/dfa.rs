use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;

/// A complete deterministic automaton over letter indices `0..alphabet_len`
/// accepting `w` iff `ζ_j · Φ(w) ≡ η_j (mod θ_j)` for every constraint `j`.
///
/// States are residue vectors in `∏ ℤ/θ_jℤ`, packed in mixed radix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceDfa {
    moduli: Vec<u64>,
    alphabet_len: usize,
    /// `next[state * alphabet_len + letter]`.
    next: Vec<usize>,
    accept: usize,
}

/// Above this many states the table is not materialized.
const MAX_STATES: usize = 1 << 22;

impl CongruenceDfa {
    /// `zetas[j]` has one coefficient per letter; `etas[j]` and
    /// `thetas[j]` give the residue and modulus of constraint `j`.
    pub fn build(zetas: &[Vec<BigInt>], etas: &[BigInt], thetas: &[BigInt], alphabet_len: usize) -> Result<Self, Error> {
        if zetas.len() != etas.len() || zetas.len() != thetas.len() {
            return Err(Error::Invalid("one residue and one modulus per constraint".into()));
        }
        let mut moduli = Vec::with_capacity(thetas.len());
        for t in thetas {
            match t.to_u64() {
                Some(m) if m >= 1 => moduli.push(m),
                _ => return Err(Error::Invalid(format!("modulus {t} must be a positive machine integer"))),
            }
        }
        for z in zetas {
            if z.len() != alphabet_len {
                return Err(Error::DimensionMismatch { expected: alphabet_len, found: z.len() });
            }
        }
        let states = moduli.iter().try_fold(1usize, |acc, &m| acc.checked_mul(m as usize).filter(|&s| s <= MAX_STATES));
        let states = states.ok_or_else(|| Error::Invalid(format!("more than {MAX_STATES} states")))?;

        let residue = |x: &BigInt, m: u64| x.mod_floor(&BigInt::from(m)).to_u64().expect("residue below modulus");
        // φ(a): the per-constraint step of each letter.
        let steps: Vec<Vec<u64>> = (0..alphabet_len).map(|a| zetas.iter().zip(&moduli).map(|(z, &m)| residue(&z[a], m)).collect()).collect();
        let accept = pack(&etas.iter().zip(&moduli).map(|(e, &m)| residue(e, m)).collect::<Vec<_>>(), &moduli);

        let mut next = vec![0; states * alphabet_len];
        let mut digits = vec![0u64; moduli.len()];
        for s in 0..states {
            for (a, step) in steps.iter().enumerate() {
                let moved: Vec<u64> = digits.iter().zip(step).zip(&moduli).map(|((d, x), m)| (d + x) % m).collect();
                next[s * alphabet_len + a] = pack(&moved, &moduli);
            }
            increment(&mut digits, &moduli);
        }
        Ok(CongruenceDfa { moduli, alphabet_len, next, accept })
    }

    pub fn state_count(&self) -> usize {
        self.moduli.iter().map(|&m| m as usize).product()
    }

    pub fn alphabet_len(&self) -> usize {
        self.alphabet_len
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn accepting(&self) -> usize {
        self.accept
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn transition(&self, state: usize, letter: usize) -> usize {
        self.next[state * self.alphabet_len + letter]
    }

    /// Residues of a packed state, one per constraint.
    pub fn residues(&self, state: usize) -> Vec<u64> {
        let mut s = state;
        self.moduli
            .iter()
            .map(|&m| {
                let r = s as u64 % m;
                s /= m as usize;
                r
            })
            .collect()
    }

    /// Runs the automaton; letters out of range are an error.
    pub fn accepts(&self, w: &[usize]) -> Result<bool, Error> {
        let mut s = self.initial();
        for &a in w {
            if a >= self.alphabet_len {
                return Err(Error::Invalid(format!("letter {a} is outside an alphabet of {}", self.alphabet_len)));
            }
            s = self.transition(s, a);
        }
        Ok(s == self.accept)
    }
}

fn pack(digits: &[u64], moduli: &[u64]) -> usize {
    digits.iter().zip(moduli).rev().fold(0usize, |acc, (&d, &m)| acc * m as usize + d as usize)
}

fn increment(digits: &mut [u64], moduli: &[u64]) {
    for (d, &m) in digits.iter_mut().zip(moduli) {
        *d += 1;
        if *d < m {
            return;
        }
        *d = 0;
    }
}

/// The direct check the automaton must agree with.
pub fn congruences_hold(zetas: &[Vec<BigInt>], etas: &[BigInt], thetas: &[BigInt], parikh: &[u64]) -> bool {
    zetas.iter().zip(etas).zip(thetas).all(|((z, e), t)| {
        let dot: BigInt = z.iter().zip(parikh).map(|(a, &n)| a * BigInt::from(n)).sum();
        (dot - e).mod_floor(t).is_zero()
    })
}
