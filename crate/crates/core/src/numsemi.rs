//! Two-generator numerical semigroups `aN + bN`.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Generators of `aN + bN`, normalized so that `a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemigroupPair {
    a: u64,
    b: u64,
}

impl SemigroupPair {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::Precondition(format!(
                "generators must be positive, got ({a}, {b})"
            )));
        }
        Ok(SemigroupPair {
            a: a.min(b),
            b: a.max(b),
        })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }
}

/// `l = s*a + t*b` with `s, t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Representation {
    pub s: u64,
    pub t: u64,
}

/// Finds `(s, t)` with `s*a + t*b = l`, taking the smallest `t`.
pub fn membership(l: u64, pair: SemigroupPair) -> Option<Representation> {
    let g = pair.a.gcd(&pair.b);
    if !l.is_multiple_of(g) {
        return None;
    }
    let (a, b, l) = (pair.a / g, pair.b / g, l / g);
    let mut t = 0;
    while t * b <= l {
        let rest = l - t * b;
        if rest % a == 0 {
            let rep = Representation { s: rest / a, t };
            debug_assert_eq!(rep.s * pair.a + rep.t * pair.b, l * g);
            return Some(rep);
        }
        t += 1;
    }
    None
}

/// Largest integer outside `aN + bN` for coprime `a, b >= 2`.
///
/// Scans down from `(a-1)(b-1) - 1`; everything from `(a-1)(b-1)` on is a
/// member.
pub fn frobenius(pair: SemigroupPair) -> Result<u64> {
    if pair.a.gcd(&pair.b) != 1 {
        return Err(Error::Precondition(format!(
            "({}, {}) is not coprime; the semigroup has infinitely many gaps",
            pair.a, pair.b
        )));
    }
    if pair.a == 1 {
        return Err(Error::Precondition(
            "a generator equal to 1 leaves no gaps".into(),
        ));
    }
    let conductor = (pair.a - 1) * (pair.b - 1);
    (0..conductor)
        .rev()
        .find(|&l| membership(l, pair).is_none())
        .ok_or_else(|| Error::Precondition("no gap found below the conductor".into()))
}

/// Whether `d1 N, d1 N + d2, ..., d1 N + (d1-1) d2` are pairwise disjoint,
/// i.e. whether `i * d2` runs through distinct residues mod `d1`.
pub fn residue_classes_disjoint(d1: u64, d2: u64) -> bool {
    if d1 == 0 {
        return false;
    }
    let mut seen = vec![false; d1 as usize];
    (0..d1).all(|i| {
        let r = ((i as u128 * d2 as u128) % d1 as u128) as usize;
        !std::mem::replace(&mut seen[r], true)
    })
}
