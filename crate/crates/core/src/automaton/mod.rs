//! Deterministic finite automata with output over base-`q` digits.

mod build;
mod serialize;

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Fq};

pub use build::{forward_construct, krylov_span, orbit_closure, LinearRep, Orbit, DEFAULT_STATE_CAP};

/// Digit order fed to the automaton: least significant first or most significant first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reading {
    Reverse,
    Forward,
}

impl Reading {
    pub fn as_str(self) -> &'static str {
        match self {
            Reading::Reverse => "reverse",
            Reading::Forward => "forward",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao {
    field: FieldCtx,
    reading: Reading,
    initial: usize,
    delta: Vec<Vec<usize>>,
    out: Vec<Fq>,
}

impl Dfao {
    pub fn new(
        field: &FieldCtx,
        reading: Reading,
        initial: usize,
        delta: Vec<Vec<usize>>,
        out: Vec<Fq>,
    ) -> Result<Self> {
        let q = field.q() as usize;
        let n = out.len();
        if n == 0 || delta.len() != n || initial >= n {
            return Err(Error::InvariantBreach("automaton shape".into()));
        }
        if delta.iter().any(|row| row.len() != q || row.iter().any(|&t| t >= n)) {
            return Err(Error::InvariantBreach("transition table is not total".into()));
        }
        Ok(Dfao { field: field.clone(), reading, initial, delta, out })
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn reading(&self) -> Reading {
        self.reading
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn n_states(&self) -> usize {
        self.out.len()
    }

    pub fn delta(&self) -> &[Vec<usize>] {
        &self.delta
    }

    pub fn outputs(&self) -> &[Fq] {
        &self.out
    }

    /// Runs `digits` in the order given, whatever the reading direction.
    pub fn eval_digits(&self, digits: &[u32]) -> Result<Fq> {
        let q = self.q();
        let mut s = self.initial;
        for &d in digits {
            if d >= q {
                return Err(Error::DigitOutOfRange { digit: d, q });
            }
            s = self.delta[s][d as usize];
        }
        Ok(self.out[s])
    }

    /// `a_n`: the base-`q` digits of `n` (none for `n = 0`) in this automaton's reading order.
    pub fn eval(&self, n: u64) -> Fq {
        let mut digits = to_digits(n, self.q());
        if self.reading == Reading::Forward {
            digits.reverse();
        }
        self.eval_digits(&digits).expect("digits below q")
    }

    /// Moore partition refinement followed by breadth-first renumbering from the initial state.
    pub fn minimize(&self) -> Dfao {
        let n = self.n_states();
        let mut class = number_by_first_seen(self.out.iter().copied());
        let mut count = class.iter().max().map_or(0, |&c| c + 1);
        loop {
            let signatures = (0..n).map(|s| {
                let mut sig = Vec::with_capacity(self.delta[s].len() + 1);
                sig.push(class[s]);
                sig.extend(self.delta[s].iter().map(|&t| class[t]));
                sig
            });
            let refined = number_by_first_seen(signatures);
            let refined_count = refined.iter().max().map_or(0, |&c| c + 1);
            class = refined;
            if refined_count == count {
                break;
            }
            count = refined_count;
        }
        // canonical ids: BFS from the initial class, digits ascending
        let mut new_id: Vec<Option<usize>> = vec![None; count];
        let mut rep: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        new_id[class[self.initial]] = Some(0);
        rep.push(self.initial);
        while let Some(s) = queue.pop_front() {
            for &t in &self.delta[s] {
                if new_id[class[t]].is_none() {
                    new_id[class[t]] = Some(rep.len());
                    rep.push(t);
                    queue.push_back(t);
                }
            }
        }
        let delta = rep
            .iter()
            .map(|&s| self.delta[s].iter().map(|&t| new_id[class[t]].expect("reachable")).collect())
            .collect();
        let out = rep.iter().map(|&s| self.out[s]).collect();
        Dfao { field: self.field.clone(), reading: self.reading, initial: 0, delta, out }
    }

    pub fn to_dot(&self) -> String {
        serialize::to_dot(self)
    }

    pub fn to_json(&self) -> String {
        serialize::to_json(self)
    }

    pub fn from_json(field: &FieldCtx, text: &str) -> Result<Dfao> {
        serialize::from_json(field, text)
    }
}

/// Base-`q` digits of `n`, least significant first.
pub fn to_digits(mut n: u64, q: u32) -> Vec<u32> {
    let q = q as u64;
    let mut digits = Vec::new();
    while n > 0 {
        digits.push((n % q) as u32);
        n /= q;
    }
    digits
}

fn number_by_first_seen<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    keys.map(|k| {
        let next = ids.len();
        *ids.entry(k).or_insert(next)
    })
    .collect()
}
