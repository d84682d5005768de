//! Exact linear systems over the rationals.
//!
//! Rows are scaled to integers and eliminated fraction-free: reducing a row
//! against a pivot row is `row * pivot - pivot_row * row[c]`, followed by
//! division by the row content. Rationals only reappear when a solution is
//! read off.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Rational;

/// Augmented system `A x = b` in row echelon form, grown one equation at a
/// time. Once an inconsistent equation arrives the system stays inconsistent.
#[derive(Debug, Clone)]
pub struct IncrementalEchelon {
    unknowns: usize,
    /// Integer rows of length `unknowns + 1`, sorted by pivot column.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    consistent: bool,
}

impl IncrementalEchelon {
    pub fn new(unknowns: usize) -> Self {
        IncrementalEchelon {
            unknowns,
            rows: Vec::new(),
            pivots: Vec::new(),
            consistent: true,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds the equation `coeffs . x = rhs`; returns whether the system is
    /// still consistent.
    pub fn push(&mut self, coeffs: &[Rational], rhs: &Rational) -> bool {
        assert_eq!(coeffs.len(), self.unknowns);
        if !self.consistent {
            return false;
        }
        let mut row = integer_row(coeffs.iter().chain(std::iter::once(rhs)));
        for (basis, &c) in self.rows.iter().zip(&self.pivots) {
            if row[c].is_zero() {
                continue;
            }
            let scale_row = basis[c].clone();
            let scale_basis = row[c].clone();
            for (x, b) in row.iter_mut().zip(basis) {
                *x = &*x * &scale_row - b * &scale_basis;
            }
            normalize_content(&mut row);
        }
        match row[..self.unknowns].iter().position(|x| !x.is_zero()) {
            Some(p) => {
                let at = self.pivots.partition_point(|&q| q < p);
                self.pivots.insert(at, p);
                self.rows.insert(at, row);
            }
            None => {
                if !row[self.unknowns].is_zero() {
                    self.consistent = false;
                }
            }
        }
        self.consistent
    }

    /// Reduced row echelon form over the rationals; `None` if inconsistent.
    pub fn reduced(&self) -> Option<ReducedSystem> {
        if !self.consistent {
            return None;
        }
        let mut rows: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        for (i, &p) in self.pivots.iter().enumerate() {
            let inv = rows[i][p].recip();
            for x in rows[i].iter_mut() {
                *x *= &inv;
            }
        }
        for i in (0..rows.len()).rev() {
            let p = self.pivots[i];
            let (above, below) = rows.split_at_mut(i);
            let pivot_row = &below[0];
            for r in above.iter_mut() {
                if r[p].is_zero() {
                    continue;
                }
                let f = r[p].clone();
                for (x, y) in r.iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        Some(ReducedSystem {
            unknowns: self.unknowns,
            pivots: self.pivots.clone(),
            rows,
        })
    }
}

fn integer_row<'a>(entries: impl Iterator<Item = &'a Rational>) -> Vec<BigInt> {
    let entries: Vec<&Rational> = entries.collect();
    let denom = entries
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut row: Vec<BigInt> = entries
        .iter()
        .map(|c| c.numer() * (&denom / c.denom()))
        .collect();
    normalize_content(&mut row);
    row
}

fn normalize_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g > BigInt::one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Reduced row echelon form of a consistent system.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    unknowns: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<Rational>>,
}

impl ReducedSystem {
    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    /// Solution with every free unknown set to zero.
    pub fn basic_solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.unknowns];
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            x[p] = row[self.unknowns].clone();
        }
        x
    }

    /// Solution supported on `support` (all other unknowns zero), if any.
    pub fn solve_on(&self, support: &[usize]) -> Option<Vec<Rational>> {
        let k = support.len();
        let mut rows: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .map(|r| {
                support
                    .iter()
                    .map(|&c| r[c].clone())
                    .chain(std::iter::once(r[self.unknowns].clone()))
                    .collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..k {
            let Some(found) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(next, found);
            let inv = rows[next][col].recip();
            for x in rows[next].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = rows[next].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i == next || r[col].is_zero() {
                    continue;
                }
                let f = r[col].clone();
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
            pivots.push(col);
            next += 1;
        }
        if rows[next..].iter().any(|r| !r[k].is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.unknowns];
        for (i, &col) in pivots.iter().enumerate() {
            x[support[col]] = rows[i][k].clone();
        }
        Some(x)
    }

    /// Solutions of minimum support size, one per minimal support set.
    ///
    /// Exhaustive over support sets when there are at most `limit` unknowns;
    /// beyond that only the basic solution is returned.
    pub fn sparsest_solutions(&self, limit: usize) -> Vec<Vec<Rational>> {
        if self.unknowns > limit {
            return vec![self.basic_solution()];
        }
        for size in 0..=self.unknowns {
            let found: Vec<Vec<Rational>> = (0..self.unknowns)
                .combinations(size)
                .filter_map(|s| self.solve_on(&s))
                .collect();
            if !found.is_empty() {
                return found;
            }
        }
        unreachable!("a consistent system has a solution supported on its pivots")
    }
}
