//! Classification of degree triples as realizable by tame automorphisms.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::autos::{
    example_word, verify_witness, witness_equal_pair, witness_linear_first, witness_semigroup,
    Permutation, TameWord, KNOWN_INSTANCES,
};
use crate::error::{Error, Result};
use crate::numsemi::{membership, Representation, SemigroupPair};

/// A sorted triple `d1 <= d2 <= d3`, remembering the order it was given in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DegreeTriple {
    sorted: [u64; 3],
    /// `sorted[i] = original[order[i]]`.
    order: [usize; 3],
}

impl DegreeTriple {
    pub fn new(d1: u64, d2: u64, d3: u64) -> Result<Self> {
        let original = [d1, d2, d3];
        if original.contains(&0) {
            return Err(Error::Precondition(format!(
                "degrees must be positive, got {original:?}"
            )));
        }
        let mut order = [0, 1, 2];
        order.sort_by_key(|&i| (original[i], i));
        Ok(DegreeTriple {
            sorted: order.map(|i| original[i]),
            order,
        })
    }

    pub fn sorted(&self) -> [u64; 3] {
        self.sorted
    }

    pub fn original(&self) -> [u64; 3] {
        let mut out = [0; 3];
        for (i, &k) in self.order.iter().enumerate() {
            out[k] = self.sorted[i];
        }
        out
    }

    pub fn is_sorted_input(&self) -> bool {
        self.order == [0, 1, 2]
    }

    /// Extends a witness for the sorted triple to one for the original order.
    pub fn orient(&self, word: &TameWord) -> Result<TameWord> {
        if self.is_sorted_input() {
            return Ok(word.clone());
        }
        let mut images = [0; 3];
        for (i, &k) in self.order.iter().enumerate() {
            images[k] = i;
        }
        let mut out = word.clone();
        out.push(Permutation::new(images.to_vec())?)?;
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Tame,
    NotTame,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Reason {
    TrivialSmallDegree,
    EqualFirstPair,
    SemigroupMember,
    KnownInstance,
    Theorem3Exclusion,
    Theorem4Exclusion,
    HypothesesFail,
}

/// A hypothesis of one of the two exclusion results that a triple misses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Hypothesis {
    /// `d2` prime (middle-prime exclusion).
    SecondDegreePrime,
    /// `d1 / gcd(d1, d3) != 2` (middle-prime exclusion).
    FirstRatioNotTwo,
    /// `d3` prime (top-prime exclusion).
    ThirdDegreePrime,
    /// `gcd(d1, d2) = 1` (top-prime exclusion).
    FirstPairCoprime,
}

macro_rules! display_as_debug {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(self, f)
            }
        }
    )*};
}
display_as_debug!(Verdict, Reason, Hypothesis);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub triple: [u64; 3],
    pub verdict: Verdict,
    pub reason: Reason,
    /// Verified witness for the sorted triple.
    pub witness: Option<TameWord>,
    /// `d3 = s*d1 + t*d2` when it exists.
    pub representation: Option<Representation>,
    pub failed_hypotheses: Vec<Hypothesis>,
}

impl Decision {
    fn new(triple: [u64; 3], verdict: Verdict, reason: Reason) -> Self {
        Decision {
            triple,
            verdict,
            reason,
            witness: None,
            representation: None,
            failed_hypotheses: Vec::new(),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn degree(d: u64) -> Result<u32> {
    u32::try_from(d).map_err(|_| Error::ExponentOverflow)
}

pub fn decide(t: &DegreeTriple) -> Result<Decision> {
    let [d1, d2, d3] = t.sorted;
    let triple = t.sorted;
    let expected = triple.map(|d| d as i64);

    if d1 < 3 {
        let mut out = Decision::new(triple, Verdict::Tame, Reason::TrivialSmallDegree);
        if d1 == 1 {
            out.witness = Some(witness_linear_first(degree(d2)?, degree(d3)?)?);
        }
        return Ok(out);
    }

    let rep = membership(d3, SemigroupPair::new(d1, d2)?);
    if let Some(rep) = rep {
        let mut out = Decision::new(triple, Verdict::Tame, Reason::SemigroupMember);
        out.witness = Some(witness_semigroup(degree(d1)?, degree(d2)?, rep)?);
        out.representation = Some(rep);
        return Ok(out);
    }

    if d1 == d2 {
        let mut out = Decision::new(triple, Verdict::Tame, Reason::EqualFirstPair);
        out.witness = Some(witness_equal_pair(degree(d1)?, degree(d3)?)?);
        return Ok(out);
    }

    if KNOWN_INSTANCES.contains(&triple) {
        let mut out = Decision::new(triple, Verdict::Tame, Reason::KnownInstance);
        if triple == KNOWN_INSTANCES[0] {
            let w = example_word();
            verify_witness(&w, &expected)?;
            out.witness = Some(w);
        }
        return Ok(out);
    }

    let failed = failed_hypotheses(triple);
    let theorem3 = !failed.contains(&Hypothesis::SecondDegreePrime)
        && !failed.contains(&Hypothesis::FirstRatioNotTwo);
    let theorem4 = !failed.contains(&Hypothesis::ThirdDegreePrime)
        && !failed.contains(&Hypothesis::FirstPairCoprime);
    if theorem3 {
        return Ok(Decision::new(
            triple,
            Verdict::NotTame,
            Reason::Theorem3Exclusion,
        ));
    }
    if theorem4 {
        return Ok(Decision::new(
            triple,
            Verdict::NotTame,
            Reason::Theorem4Exclusion,
        ));
    }
    let mut out = Decision::new(triple, Verdict::Unknown, Reason::HypothesesFail);
    out.failed_hypotheses = failed;
    Ok(out)
}

/// Every hypothesis of the two exclusion results that `[d1, d2, d3]` misses,
/// middle-prime hypotheses first.
pub fn failed_hypotheses([d1, d2, d3]: [u64; 3]) -> Vec<Hypothesis> {
    let mut out = Vec::new();
    if !is_prime(d2) {
        out.push(Hypothesis::SecondDegreePrime);
    }
    if d1 / d1.gcd(&d3) == 2 {
        out.push(Hypothesis::FirstRatioNotTwo);
    }
    if !is_prime(d3) {
        out.push(Hypothesis::ThirdDegreePrime);
    }
    if d1.gcd(&d2) != 1 {
        out.push(Hypothesis::FirstPairCoprime);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstraintFamily {
    /// `n < d1 <= 3n/2`, `d2 = 2n`, `d3 = 3n`.
    Bounded,
    /// `d1 = 3n/2`, `d2 = 2n`, `5n/2 < d3 <= 3n`.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TypeThreeHit {
    pub n: u64,
    pub family: ConstraintFamily,
}

/// The degree pattern a type-III reduction would force on a sorted triple,
/// if the triple fits it.
pub fn type_iii_constraints(t: &DegreeTriple) -> Option<TypeThreeHit> {
    let [d1, d2, d3] = t.sorted;
    if d2 % 2 != 0 {
        return None;
    }
    let n = d2 / 2;
    if n < d1 && 2 * d1 <= 3 * n && d3 == 3 * n {
        return Some(TypeThreeHit {
            n,
            family: ConstraintFamily::Bounded,
        });
    }
    if 2 * d1 == 3 * n && 5 * n < 2 * d3 && d3 <= 3 * n {
        return Some(TypeThreeHit {
            n,
            family: ConstraintFamily::Exact,
        });
    }
    None
}

/// One line of a scan table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub d1: u64,
    pub d2: u64,
    pub d3: u64,
    pub verdict: Verdict,
    pub reason: Reason,
    pub s: Option<u64>,
    pub t: Option<u64>,
    pub witness_len: Option<usize>,
}

impl From<&Decision> for ScanRow {
    fn from(d: &Decision) -> Self {
        let [d1, d2, d3] = d.triple;
        ScanRow {
            d1,
            d2,
            d3,
            verdict: d.verdict,
            reason: d.reason,
            s: d.representation.map(|r| r.s),
            t: d.representation.map(|r| r.t),
            witness_len: d.witness.as_ref().map(TameWord::len),
        }
    }
}

/// All sorted triples with `d3 <= max`, ordered by `(d3, d2, d1)`.
pub fn sorted_triples(max: u64) -> impl Iterator<Item = [u64; 3]> {
    (1..=max).flat_map(|d3| (1..=d3).flat_map(move |d2| (1..=d2).map(move |d1| [d1, d2, d3])))
}

/// Decisions for every sorted triple with `d3 <= max`, in `(d3, d2, d1)`
/// order. Runs on `TAME_MDEG_THREADS` threads when that is set.
pub fn scan(max: u64) -> Result<Vec<Decision>> {
    if max < 3 {
        return Err(Error::Precondition(format!(
            "scan needs max >= 3, got {max}"
        )));
    }
    let triples: Vec<[u64; 3]> = sorted_triples(max).collect();
    let run = || {
        triples
            .par_iter()
            .map(|&[a, b, c]| decide(&DegreeTriple::new(a, b, c)?))
            .collect::<Result<Vec<_>>>()
    };
    match scan_threads() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn scan_threads() -> Option<usize> {
    std::env::var("TAME_MDEG_THREADS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}
