//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic with `x_1 > x_2 > ... > x_n`. Zero coefficients are
//! never stored, so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::degree::Degree;
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds a rational from an integer numerator and denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn new(exponents: impl IntoIterator<Item = u32>) -> Self {
        Monomial(exponents.into_iter().collect())
    }

    pub fn one(arity: usize) -> Self {
        Monomial(SmallVec::from_elem(0, arity))
    }

    pub fn var(index: usize, arity: usize) -> Self {
        let mut m = Monomial::one(arity);
        m.0[index] = 1;
        m
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.arity(), other.arity());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(self.0.iter())
                .map(|(b, a)| b - a)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Polynomial::constant(Rational::one(), arity)
    }

    pub fn constant(c: Rational, arity: usize) -> Self {
        let mut p = Polynomial::zero(arity);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(arity), c);
        }
        p
    }

    pub fn from_int(c: i64, arity: usize) -> Self {
        Polynomial::constant(Rational::from_integer(c.into()), arity)
    }

    /// The variable `x_{index+1}`.
    pub fn var(index: usize, arity: usize) -> Self {
        assert!(
            index < arity,
            "variable index {index} out of range for arity {arity}"
        );
        Polynomial::monomial(Monomial::var(index, arity), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(m.arity());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Collects terms, merging repeated monomials and dropping zeros.
    pub fn from_terms(
        arity: usize,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut p = Polynomial::zero(arity);
        for (m, c) in terms {
            if m.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: m.arity(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.arity))
    }

    /// Greatest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            Some(m) => Degree::Finite(m.degree() as i64),
            None => Degree::NegInfinity,
        }
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, index: usize) -> Result<Degree> {
        self.check_index(index)?;
        Ok(self
            .terms
            .keys()
            .map(|m| Degree::Finite(i64::from(m.exponent(index))))
            .max()
            .unwrap_or(Degree::NegInfinity))
    }

    pub fn depends_on(&self, index: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(index) > 0)
    }

    pub fn homogeneous_component(&self, degree: u64) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Highest homogeneous component.
    pub fn leading_form(&self) -> Result<Polynomial> {
        match self.degree() {
            Degree::Finite(d) => Ok(self.homogeneous_component(d as u64)),
            Degree::NegInfinity => Err(Error::ZeroPolynomial),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            Some(d) => degrees.all(|e| e == d),
            None => true,
        }
    }

    fn check_arity(&self, other: &Polynomial) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.arity {
            return Err(Error::VariableOutOfRange {
                index,
                arity: self.arity,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_arity(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.arity));
        }
        // Multiply over a common denominator so the inner loop is integer only.
        let (da, lhs) = self.integer_form();
        let (db, rhs) = other.integer_form();
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        acc.reserve(lhs.len() * rhs.len());
        for (ma, ca) in &lhs {
            for (mb, cb) in &rhs {
                let m = ma.checked_mul(mb).ok_or(Error::ExponentOverflow)?;
                *acc.entry(m).or_default() += ca * cb;
            }
        }
        let denom = da * db;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, Rational::new(c, denom.clone())))
            .collect();
        Ok(Polynomial {
            arity: self.arity,
            terms,
        })
    }

    /// Common denominator and the integer numerators over it.
    fn integer_form(&self) -> (BigInt, Vec<(&Monomial, BigInt)>) {
        let denom = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m, c.numer() * (&denom / c.denom())))
            .collect();
        (denom, terms)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Polynomial {
        let mut result = Polynomial::one(self.arity);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to `x_{index+1}`.
    pub fn derivative(&self, index: usize) -> Result<Polynomial> {
        self.check_index(index)?;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(index) > 0)
            .map(|(m, c)| {
                let e = m.exponent(index);
                let mut dm = m.clone();
                dm.0[index] = e - 1;
                (dm, c * Rational::from_integer(e.into()))
            })
            .collect();
        Ok(Polynomial {
            arity: self.arity,
            terms,
        })
    }

    /// Substitutes `args[i]` for `x_{i+1}` and expands.
    pub fn compose(&self, args: &[Polynomial]) -> Result<Polynomial> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        let target_arity = match args.first() {
            Some(a) => a.arity,
            None => {
                // Arity-0 polynomials are constants; there is nothing to substitute.
                return Err(Error::Precondition(
                    "composition needs at least one argument".into(),
                ));
            }
        };
        if let Some(bad) = args.iter().find(|a| a.arity != target_arity) {
            return Err(Error::ArityMismatch {
                expected: target_arity,
                found: bad.arity,
            });
        }

        let mut powers: Vec<Vec<Polynomial>> = args
            .iter()
            .map(|a| vec![Polynomial::one(target_arity), a.clone()])
            .collect();
        for (i, cache) in powers.iter_mut().enumerate() {
            let max_e = self.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0) as usize;
            while cache.len() <= max_e {
                let next = cache[cache.len() - 1].try_mul(&args[i])?;
                cache.push(next);
            }
        }

        let mut out = Polynomial::zero(target_arity);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone(), target_arity);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.try_mul(&powers[i][e as usize])?;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Exact division of homogeneous polynomials.
    ///
    /// Returns `Some(q)` with `f = q * d` when `d` divides `self`, else `None`.
    /// A single generator is a Groebner basis of its principal ideal, so
    /// reduction by `d` alone decides membership.
    pub fn div_homogeneous(&self, d: &Polynomial) -> Result<Option<Polynomial>> {
        self.check_arity(d)?;
        if self.is_zero() || d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !self.is_homogeneous() || !d.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let (dm, dc) = d
            .leading_term()
            .map(|(m, c)| (m.clone(), c.clone()))
            .unwrap();
        let mut rem = self.clone();
        let mut quotient = Polynomial::zero(self.arity);
        while let Some((rm, rc)) = rem.leading_term() {
            if !dm.divides(rm) {
                return Ok(None);
            }
            let step = Polynomial::monomial(dm.quotient_of(rm), rc / &dc);
            rem = rem.try_sub(&step.try_mul(d)?)?;
            quotient.add_term_poly(step);
        }
        Ok(Some(quotient))
    }

    fn add_term_poly(&mut self, p: Polynomial) {
        for (m, c) in p.terms {
            self.add_term(m, c);
        }
    }
}

/// `divides_homogeneous(d, f)`: quotient of `f` by `d` when exact.
pub fn divides_homogeneous(d: &Polynomial, f: &Polynomial) -> Result<Option<Polynomial>> {
    f.div_homogeneous(d)
}

// Operator impls panic on arity mismatch; use the `try_*` methods when the
// arities are not known to agree.

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Variable names used when none are given: `x, y, z` up to arity 3,
/// `x1, ..., xn` beyond.
pub fn default_names(arity: usize) -> Vec<String> {
    if arity <= 3 {
        ["x", "y", "z"][..arity]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (1..=arity).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.arity);
        f.write_str(&crate::parser::print_polynomial(self, &names))
    }
}
