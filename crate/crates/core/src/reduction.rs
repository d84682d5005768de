//! Search for elementary reductions of maps of affine 3-space.
//!
//! For a target component `T = F_i` and the other two components `U, V`,
//! look for `g(u, v) = sum c_st u^s v^t` over the support
//! `s deg U + t deg V <= cap` such that `deg(T - g(U, V)) < deg T`.
//! Each coefficient of the difference is linear in the unknowns `c_st`, so
//! "all coefficients of degree >= d vanish" is an exact linear system. The
//! systems for decreasing `d` are nested, and the smallest solvable `d`
//! gives the minimal residual degree `d - 1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::autos::PolyMap;
use crate::error::{Error, Result};
use crate::linsolve::{IncrementalEchelon, ReducedSystem};
use crate::poly::{Monomial, Polynomial, Rational};

/// Support sets are searched exhaustively up to this many monomials.
const SPARSE_SEARCH_LIMIT: usize = 16;

#[derive(Debug, Clone)]
pub struct ReductionQuery {
    map: PolyMap,
    target: usize,
    support_degree_cap: u32,
}

impl ReductionQuery {
    /// `target` is 0-based.
    pub fn new(map: PolyMap, target: usize, support_degree_cap: u32) -> Result<Self> {
        if map.arity() != 3 {
            return Err(Error::ArityMismatch {
                expected: 3,
                found: map.arity(),
            });
        }
        if target >= 3 {
            return Err(Error::VariableOutOfRange {
                index: target,
                arity: 3,
            });
        }
        let comps = map.components();
        for i in 0..3 {
            if comps[i].is_constant() {
                return Err(Error::Precondition(format!(
                    "component {} is constant",
                    i + 1
                )));
            }
            for j in i + 1..3 {
                if comps[i] == comps[j] {
                    return Err(Error::Precondition(format!(
                        "components {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let target_degree = comps[target].degree().finite().expect("nonconstant");
        if i64::from(support_degree_cap) < target_degree {
            return Err(Error::Precondition(format!(
                "cap {support_degree_cap} is below the target degree {target_degree}"
            )));
        }
        Ok(ReductionQuery {
            map,
            target,
            support_degree_cap,
        })
    }

    /// Uses the default cap `2 * deg F_target`.
    pub fn with_default_cap(map: PolyMap, target: usize) -> Result<Self> {
        let cap = map
            .components()
            .get(target)
            .and_then(|c| c.degree().finite())
            .map_or(0, |d| 2 * d as u32);
        ReductionQuery::new(map, target, cap)
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn cap(&self) -> u32 {
        self.support_degree_cap
    }

    /// Indices of the two components `g` is evaluated at, in order.
    pub fn others(&self) -> (usize, usize) {
        match self.target {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionResult {
    /// 0-based index of the reduced component.
    pub target: usize,
    /// 0-based indices of the components substituted for `(u, v)`.
    pub others: (usize, usize),
    #[serde(skip)]
    pub g: Polynomial,
    #[serde(skip)]
    pub residual: Polynomial,
    pub residual_degree: i64,
    pub target_degree: i64,
}

pub fn find_elementary_reduction(q: &ReductionQuery) -> Result<Option<ReductionResult>> {
    let comps = q.map.components();
    let target = &comps[q.target];
    let (j, k) = q.others();
    let (u, v) = (&comps[j], &comps[k]);
    let target_degree = target.degree().finite().expect("validated");
    let du = u.degree().finite().expect("validated") as u64;
    let dv = v.degree().finite().expect("validated") as u64;
    let cap = u64::from(q.support_degree_cap);

    let support: Vec<(u32, u32)> = (0..=cap / dv)
        .flat_map(|t| (0..=(cap - t * dv) / du).map(move |s| (s as u32, t as u32)))
        .collect();
    let products = support_products(u, v, &support);

    // Column entries per monomial of degree >= 1, visited by descending degree.
    let mut rows: BTreeMap<Monomial, Vec<(usize, Rational)>> = BTreeMap::new();
    for (col, p) in products.iter().enumerate() {
        for (m, c) in p.terms() {
            if !m.is_one() {
                rows.entry(m.clone()).or_default().push((col, c.clone()));
            }
        }
    }
    for (m, _) in target.terms() {
        if !m.is_one() {
            rows.entry(m.clone()).or_default();
        }
    }

    let unknowns = support.len();
    let mut echelon = IncrementalEchelon::new(unknowns);
    // Smallest d with a solvable "degree >= d vanishes" system, and its state.
    let mut best: Option<(i64, IncrementalEchelon)> = None;
    let mut iter = rows.iter().rev().peekable();
    let top = iter.peek().map_or(0, |(m, _)| m.degree() as i64);
    for d in (1..=top.max(target_degree)).rev() {
        while let Some((m, entries)) = iter.next_if(|(m, _)| m.degree() as i64 >= d) {
            let mut coeffs = vec![Rational::zero(); unknowns];
            for (col, c) in entries {
                coeffs[*col] = c.clone();
            }
            if !echelon.push(&coeffs, &target.coefficient(m)) {
                break;
            }
        }
        if !echelon.is_consistent() {
            break;
        }
        if d <= target_degree {
            best = Some((d, echelon.clone()));
        }
    }

    let Some((d, system)) = best else {
        return Ok(None);
    };
    if d == 1 {
        // T - g(U, V) constant: T lies in k[U, V], so this is no automorphism.
        return Ok(None);
    }
    let reduced = system.reduced().expect("recorded only while consistent");
    let g = choose_g(&reduced, &support);
    let residual = target.try_sub(&g.compose(&[u.clone(), v.clone()])?)?;
    let residual_degree = residual.degree().finite().unwrap_or(-1);
    if residual_degree != d - 1 || residual_degree >= target_degree {
        return Err(Error::Precondition(format!(
            "internal check failed: residual degree {residual_degree}, expected {}",
            d - 1
        )));
    }
    Ok(Some(ReductionResult {
        target: q.target,
        others: (j, k),
        g,
        residual,
        residual_degree,
        target_degree,
    }))
}

/// Tries targets 3, 2, 1 in that order, skipping any whose degree exceeds
/// `cap`.
pub fn find_any_reduction(map: &PolyMap, cap: u32) -> Result<Option<ReductionResult>> {
    for target in (0..3).rev() {
        let degree = map
            .components()
            .get(target)
            .and_then(|c| c.degree().finite());
        if degree.is_some_and(|d| d > i64::from(cap)) {
            continue;
        }
        let q = ReductionQuery::new(map.clone(), target, cap)?;
        if let Some(r) = find_elementary_reduction(&q)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// `u^s v^t` evaluated at `(u, v)` for every support exponent pair.
fn support_products(u: &Polynomial, v: &Polynomial, support: &[(u32, u32)]) -> Vec<Polynomial> {
    let max_s = support.iter().map(|&(s, _)| s).max().unwrap_or(0);
    let max_t = support.iter().map(|&(_, t)| t).max().unwrap_or(0);
    let powers = |p: &Polynomial, n: u32| {
        let mut out = vec![Polynomial::one(p.arity())];
        for _ in 0..n {
            let next = out.last().unwrap() * p;
            out.push(next);
        }
        out
    };
    let up = powers(u, max_s);
    let vp = powers(v, max_t);
    support
        .iter()
        .map(|&(s, t)| &up[s as usize] * &vp[t as usize])
        .collect()
}

/// Among the sparsest solutions, the graded-lex-least `g`.
fn choose_g(reduced: &ReducedSystem, support: &[(u32, u32)]) -> Polynomial {
    reduced
        .sparsest_solutions(SPARSE_SEARCH_LIMIT)
        .into_iter()
        .map(|x| {
            let terms = support
                .iter()
                .zip(x)
                .map(|(&(s, t), c)| (Monomial::new([s, t]), c));
            Polynomial::from_terms(2, terms).expect("arity 2")
        })
        .min_by(grlex_cmp)
        .expect("at least one solution")
}

/// Compares term lists from the largest monomial down; smaller monomials,
/// then smaller coefficients, order first.
pub fn grlex_cmp(a: &Polynomial, b: &Polynomial) -> Ordering {
    let mut ta = a.terms();
    let mut tb = b.terms();
    loop {
        match (ta.next(), tb.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ma, ca)), Some((mb, cb))) => {
                let ord = ma.cmp(mb).then_with(|| ca.cmp(cb));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
        }
    }
}

/// Default cap for a target: twice its degree.
pub fn default_cap(map: &PolyMap, target: usize) -> u32 {
    map.components()
        .get(target)
        .and_then(|c| c.degree().finite())
        .map_or(1, |d| (2 * d).max(1) as u32)
}

impl ReductionResult {
    /// `true` when `residual = F_target - g(F_j, F_k)` and the degree drops.
    pub fn verify(&self, map: &PolyMap) -> Result<bool> {
        let comps = map.components();
        let value = self
            .g
            .compose(&[comps[self.others.0].clone(), comps[self.others.1].clone()])?;
        let expected = comps[self.target].try_sub(&value)?;
        Ok(expected == self.residual && self.residual.degree() < comps[self.target].degree())
    }

    pub fn g_is_monic_monomial(&self) -> bool {
        self.g.num_terms() == 1 && self.g.terms().all(|(_, c)| c.is_one())
    }
}
