//! Poisson brackets, pair predicates and the degree inequality checker.
//!
//! `[f, g]` is stored as the family of 2x2 Jacobian minors attached to the
//! formal symbols `[x_i, x_j]`, `i < j`. Each symbol has degree 2.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketValue {
    arity: usize,
    coeffs: BTreeMap<(usize, usize), Polynomial>,
}

impl BracketValue {
    pub fn zero(arity: usize) -> Self {
        BracketValue {
            arity,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `[x_{i+1}, x_{j+1}]`; antisymmetric in `(i, j)`.
    pub fn coefficient(&self, i: usize, j: usize) -> Polynomial {
        let get = |a, b| {
            self.coeffs
                .get(&(a, b))
                .cloned()
                .unwrap_or_else(|| Polynomial::zero(self.arity))
        };
        match i.cmp(&j) {
            std::cmp::Ordering::Less => get(i, j),
            std::cmp::Ordering::Greater => -get(j, i),
            std::cmp::Ordering::Equal => Polynomial::zero(self.arity),
        }
    }

    /// Nonzero coefficients in lexicographic index order.
    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Polynomial)> {
        self.coeffs.iter()
    }

    fn insert(&mut self, key: (usize, usize), p: Polynomial) {
        if p.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, p);
        }
    }

    /// `2 + max deg(coefficient)`, or `-inf` for the zero bracket.
    pub fn degree(&self) -> Degree {
        self.coeffs
            .values()
            .map(|p| p.degree() + 2)
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    pub fn try_add(&self, other: &BracketValue) -> Result<BracketValue> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        let mut out = self.clone();
        for (&k, p) in &other.coeffs {
            let sum = out.coefficient(k.0, k.1).try_add(p)?;
            out.insert(k, sum);
        }
        Ok(out)
    }

    pub fn neg(&self) -> BracketValue {
        BracketValue {
            arity: self.arity,
            coeffs: self.coeffs.iter().map(|(&k, p)| (k, -p)).collect(),
        }
    }

    /// Multiplies every coefficient by `f`.
    pub fn scale_by(&self, f: &Polynomial) -> Result<BracketValue> {
        let mut out = BracketValue::zero(self.arity);
        for (&k, p) in &self.coeffs {
            out.insert(k, f.try_mul(p)?);
        }
        Ok(out)
    }
}

pub fn poisson_bracket(f: &Polynomial, g: &Polynomial) -> Result<BracketValue> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: g.arity(),
        });
    }
    let n = f.arity();
    if n < 2 {
        return Err(Error::Precondition(format!(
            "Poisson bracket needs arity >= 2, got {n}"
        )));
    }
    let df: Vec<Polynomial> = (0..n).map(|i| f.derivative(i)).collect::<Result<_>>()?;
    let dg: Vec<Polynomial> = (0..n).map(|i| g.derivative(i)).collect::<Result<_>>()?;
    let mut out = BracketValue::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let minor = &(&df[i] * &dg[j]) - &(&df[j] * &dg[i]);
            out.insert((i, j), minor);
        }
    }
    Ok(out)
}

pub fn bracket_degree(b: &BracketValue) -> Degree {
    b.degree()
}

/// Renders `(<poly>)·[xi,xj]` terms joined by ` + `, or `0`.
pub fn print_bracket<S: AsRef<str>>(b: &BracketValue, variables: &[S]) -> String {
    if b.is_zero() {
        return "0".to_string();
    }
    b.iter()
        .map(|(&(i, j), p)| {
            format!(
                "({})·[{},{}]",
                crate::parser::print_polynomial(p, variables),
                variables[i].as_ref(),
                variables[j].as_ref()
            )
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// `f` and `g` are algebraically dependent exactly when `[f, g] = 0`.
pub fn algebraically_dependent(f: &Polynomial, g: &Polynomial) -> Result<bool> {
    Ok(poisson_bracket(f, g)?.is_zero())
}

/// Pair conditions behind the `*`-reduced and weak-pair predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairDiagnosis {
    /// `[f, g] != 0`.
    pub independent: bool,
    /// `[lead f, lead g] = 0`.
    pub leading_forms_dependent: bool,
    /// `lead f` is not of the form `c * (lead g)^k`.
    pub f_lead_outside_g_algebra: bool,
    /// `lead g` is not of the form `c * (lead f)^k`.
    pub g_lead_outside_f_algebra: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairCondition {
    Independent,
    LeadingFormsDependent,
    FLeadOutsideGAlgebra,
    GLeadOutsideFAlgebra,
}

impl PairDiagnosis {
    pub fn is_star_reduced(&self) -> bool {
        self.independent && self.leading_forms_dependent && self.neither_divides()
    }

    pub fn is_weak_pair(&self) -> bool {
        self.independent && self.neither_divides()
    }

    fn neither_divides(&self) -> bool {
        self.f_lead_outside_g_algebra && self.g_lead_outside_f_algebra
    }

    /// Conditions of the `*`-reduced definition that fail.
    pub fn failures(&self) -> Vec<PairCondition> {
        [
            (self.independent, PairCondition::Independent),
            (
                self.leading_forms_dependent,
                PairCondition::LeadingFormsDependent,
            ),
            (
                self.f_lead_outside_g_algebra,
                PairCondition::FLeadOutsideGAlgebra,
            ),
            (
                self.g_lead_outside_f_algebra,
                PairCondition::GLeadOutsideFAlgebra,
            ),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, c)| c)
        .collect()
    }
}

pub fn diagnose_pair(f: &Polynomial, g: &Polynomial) -> Result<PairDiagnosis> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lf = f.leading_form()?;
    let lg = g.leading_form()?;
    Ok(PairDiagnosis {
        independent: !algebraically_dependent(f, g)?,
        leading_forms_dependent: algebraically_dependent(&lf, &lg)?,
        f_lead_outside_g_algebra: !in_generated_algebra(&lf, &lg)?,
        g_lead_outside_f_algebra: !in_generated_algebra(&lg, &lf)?,
    })
}

/// Whether the homogeneous `form` lies in `k[base]`, i.e. `form = c * base^k`.
///
/// A homogeneous element of `k[base]` of degree `k * deg base` can only be a
/// scalar multiple of `base^k`, so one exact division settles membership.
pub fn in_generated_algebra(form: &Polynomial, base: &Polynomial) -> Result<bool> {
    if form.is_zero() || base.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !form.is_homogeneous() || !base.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let df = form.degree().finite().expect("nonzero");
    let db = base.degree().finite().expect("nonzero");
    if db == 0 {
        return Ok(df == 0);
    }
    if df % db != 0 {
        return Ok(false);
    }
    let power = base.pow((df / db) as u32);
    Ok(match form.div_homogeneous(&power)? {
        Some(q) => q.is_constant(),
        None => false,
    })
}

pub fn is_star_reduced(f: &Polynomial, g: &Polynomial) -> Result<bool> {
    Ok(diagnose_pair(f, g)?.is_star_reduced())
}

/// Independence plus mutual non-divisibility of leading forms.
pub fn is_weak_pair(f: &Polynomial, g: &Polynomial) -> Result<bool> {
    Ok(diagnose_pair(f, g)?.is_weak_pair())
}

/// Outcome of checking `deg G(f,g) >= q(p deg g - deg f - deg g + deg[f,g]) + r deg g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuReport {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub lhs_degree: i64,
    pub rhs_bound: i64,
    pub holds: bool,
    pub bracket_degree: i64,
}

/// Evaluates both sides of the degree inequality for `G(f, g)`.
///
/// `G` is bivariate in `(x, y)`; `deg_y G = p*q + r` with
/// `p = deg f / gcd(deg f, deg g)`. Refuses to answer unless `(f, g)` is a
/// weak pair.
pub fn su_bound(f: &Polynomial, g: &Polynomial, big_g: &Polynomial) -> Result<SuReport> {
    if big_g.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: big_g.arity(),
        });
    }
    if big_g.is_zero() {
        return Err(Error::Precondition("G must be nonzero".into()));
    }
    let diagnosis = diagnose_pair(f, g)?;
    if !diagnosis.is_weak_pair() {
        let failed: Vec<_> = diagnosis
            .failures()
            .into_iter()
            .filter(|c| *c != PairCondition::LeadingFormsDependent)
            .collect();
        return Err(Error::Precondition(format!(
            "(f, g) is not a weak pair; failed: {failed:?}"
        )));
    }
    let deg_f = f.degree().finite().expect("nonzero");
    let deg_g = g.degree().finite().expect("nonzero");
    let bracket_degree = poisson_bracket(f, g)?
        .degree()
        .finite()
        .expect("independent pair has a nonzero bracket");
    let p = deg_f / deg_f.gcd(&deg_g);
    let deg_y = big_g.degree_in(1)?.finite().expect("G is nonzero");
    let (q, r) = deg_y.div_rem(&p);
    let rhs_bound = q * (p * deg_g - deg_f - deg_g + bracket_degree) + r * deg_g;
    let lhs_degree = big_g
        .compose(&[f.clone(), g.clone()])?
        .degree()
        .finite()
        .ok_or_else(|| Error::Precondition("G(f, g) vanished for an independent pair".into()))?;
    Ok(SuReport {
        p,
        q,
        r,
        lhs_degree,
        rhs_bound,
        holds: lhs_degree >= rhs_bound,
        bracket_degree,
    })
}
