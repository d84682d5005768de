//! Elementary automorphisms, tame words and explicit polynomial maps.
//!
//! A word is applied left to right starting from the identity. Applying a
//! step to the current map `F` substitutes `F` into the step's formulas, so
//! the step `x_i -> a x_i + s(x)` replaces `F_i` by `a F_i + s(F)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::numsemi::Representation;
use crate::parser::{self, ParseError, ParseErrorKind};
use crate::poly::{default_names, rat, Monomial, Polynomial, Rational};

/// `x_i -> scalar * x_i + shift`, where `shift` does not involve `x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryAuto {
    index: usize,
    scalar: Rational,
    shift: Polynomial,
}

impl ElementaryAuto {
    pub fn new(index: usize, scalar: Rational, shift: Polynomial) -> Result<Self> {
        if index >= shift.arity() {
            return Err(Error::VariableOutOfRange {
                index,
                arity: shift.arity(),
            });
        }
        if scalar.is_zero() {
            return Err(Error::Precondition(
                "elementary step needs a nonzero scalar".into(),
            ));
        }
        if shift.depends_on(index) {
            return Err(Error::Precondition(format!(
                "shift of an elementary step on variable {} must not involve it",
                index + 1
            )));
        }
        Ok(ElementaryAuto {
            index,
            scalar,
            shift,
        })
    }

    /// `x_i -> x_i + shift`.
    pub fn translation(index: usize, shift: Polynomial) -> Result<Self> {
        ElementaryAuto::new(index, Rational::one(), shift)
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn shift(&self) -> &Polynomial {
        &self.shift
    }

    pub fn arity(&self) -> usize {
        self.shift.arity()
    }

    /// `x_i -> (x_i - shift) / scalar`.
    pub fn inverse(&self) -> ElementaryAuto {
        let inv = self.scalar.recip();
        ElementaryAuto {
            index: self.index,
            shift: self.shift.scale(&-&inv),
            scalar: inv,
        }
    }
}

/// `new F_k = old F_{images[k]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Precondition(format!(
                    "{images:?} is not a permutation"
                )));
            }
        }
        Ok(Permutation(images))
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (k, &i) in self.0.iter().enumerate() {
            inv[i] = k;
        }
        Permutation(inv)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TameStep {
    Elementary(ElementaryAuto),
    Permutation(Permutation),
}

impl TameStep {
    pub fn arity(&self) -> usize {
        match self {
            TameStep::Elementary(e) => e.arity(),
            TameStep::Permutation(p) => p.0.len(),
        }
    }

    pub fn inverse(&self) -> TameStep {
        match self {
            TameStep::Elementary(e) => TameStep::Elementary(e.inverse()),
            TameStep::Permutation(p) => TameStep::Permutation(p.inverse()),
        }
    }

    /// The map after this step, given the map before it.
    pub fn apply(&self, map: &PolyMap) -> Result<PolyMap> {
        if self.arity() != map.arity() {
            return Err(Error::ArityMismatch {
                expected: map.arity(),
                found: self.arity(),
            });
        }
        let mut components = map.components.clone();
        match self {
            TameStep::Elementary(e) => {
                let moved = e.shift.compose(&map.components)?;
                components[e.index] = map.components[e.index].scale(&e.scalar).try_add(&moved)?;
            }
            TameStep::Permutation(p) => {
                components = p.0.iter().map(|&i| map.components[i].clone()).collect();
            }
        }
        Ok(PolyMap { components })
    }
}

impl From<ElementaryAuto> for TameStep {
    fn from(e: ElementaryAuto) -> Self {
        TameStep::Elementary(e)
    }
}

impl From<Permutation> for TameStep {
    fn from(p: Permutation) -> Self {
        TameStep::Permutation(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TameWord {
    arity: usize,
    steps: Vec<TameStep>,
}

impl TameWord {
    pub fn new(arity: usize) -> Self {
        TameWord {
            arity,
            steps: Vec::new(),
        }
    }

    pub fn from_steps(arity: usize, steps: Vec<TameStep>) -> Result<Self> {
        let mut w = TameWord::new(arity);
        for s in steps {
            w.push(s)?;
        }
        Ok(w)
    }

    pub fn push(&mut self, step: impl Into<TameStep>) -> Result<()> {
        let step = step.into();
        if step.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: step.arity(),
            });
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn steps(&self) -> &[TameStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Steps undone in reverse order; composing `w` then `w.inverse()`
    /// gives the identity.
    pub fn inverse(&self) -> TameWord {
        TameWord {
            arity: self.arity,
            steps: self.steps.iter().rev().map(TameStep::inverse).collect(),
        }
    }

    /// This word followed by `other`.
    pub fn concat(&self, other: &TameWord) -> Result<TameWord> {
        if other.arity != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Ok(TameWord {
            arity: self.arity,
            steps,
        })
    }
}

pub fn compose_word(w: &TameWord) -> Result<PolyMap> {
    w.steps
        .iter()
        .try_fold(PolyMap::identity(w.arity), |map, step| step.apply(&map))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let n = components.len();
        if let Some(bad) = components.iter().find(|c| c.arity() != n) {
            return Err(Error::ArityMismatch {
                expected: n,
                found: bad.arity(),
            });
        }
        Ok(PolyMap { components })
    }

    pub fn identity(arity: usize) -> Self {
        PolyMap {
            components: (0..arity).map(|i| Polynomial::var(i, arity)).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn mdeg(&self) -> MDeg {
        MDeg(self.components.iter().map(Polynomial::degree).collect())
    }

    /// Determinant of the matrix of partial derivatives.
    pub fn jacobian_det(&self) -> Result<Polynomial> {
        let n = self.arity();
        let rows: Vec<Vec<Polynomial>> = self
            .components
            .iter()
            .map(|f| (0..n).map(|j| f.derivative(j)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let cols: Vec<usize> = (0..n).collect();
        Ok(laplace_det(&rows, 0, &cols))
    }
}

/// Cofactor expansion along row `row` over the remaining columns `cols`.
fn laplace_det(m: &[Vec<Polynomial>], row: usize, cols: &[usize]) -> Polynomial {
    let arity = m[0][0].arity();
    if cols.is_empty() {
        return Polynomial::one(arity);
    }
    let mut det = Polynomial::zero(arity);
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[row][c] * &laplace_det(m, row + 1, &rest);
        det = if k % 2 == 0 {
            &det + &term
        } else {
            &det - &term
        };
    }
    det
}

pub fn jacobian_det(map: &PolyMap) -> Result<Polynomial> {
    map.jacobian_det()
}

pub fn mdeg(map: &PolyMap) -> MDeg {
    map.mdeg()
}

/// Multidegree: the total degree of each component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MDeg(pub Vec<Degree>);

impl MDeg {
    pub fn degrees(&self) -> &[Degree] {
        &self.0
    }

    /// Integer degrees, or `None` if some component is zero.
    pub fn finite(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|d| d.finite()).collect()
    }

    pub fn permuted(&self, p: &Permutation) -> MDeg {
        MDeg(p.images().iter().map(|&i| self.0[i]).collect())
    }
}

impl PartialEq<[i64]> for MDeg {
    fn eq(&self, other: &[i64]) -> bool {
        self.0.len() == other.len() && self.0.iter().zip(other).all(|(d, e)| d == e)
    }
}

impl<const N: usize> PartialEq<[i64; N]> for MDeg {
    fn eq(&self, other: &[i64; N]) -> bool {
        self == &other[..]
    }
}

impl fmt::Display for MDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Degree::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn xyz(i: usize) -> Polynomial {
    Polynomial::var(i, 3)
}

/// Composes `word` and fails unless its multidegree equals `expected`.
pub fn verify_witness(word: &TameWord, expected: &[i64]) -> Result<PolyMap> {
    let map = compose_word(word)?;
    let got = map.mdeg();
    if got != *expected {
        return Err(Error::WitnessCheck(format!(
            "word composes to mdeg {got}, expected {expected:?}"
        )));
    }
    Ok(map)
}

/// `[x -> x + z^d1; y -> y + z^d2; z -> z + x^s y^t]`, of multidegree
/// `(d1, d2, s*d1 + t*d2)`.
pub fn witness_semigroup(d1: u32, d2: u32, rep: Representation) -> Result<TameWord> {
    if !(3 <= d1 && d1 <= d2) {
        return Err(Error::Precondition(format!(
            "need 3 <= d1 <= d2, got ({d1}, {d2})"
        )));
    }
    if rep.s == 0 && rep.t == 0 {
        return Err(Error::Precondition(
            "representation (0, 0) gives degree 0".into(),
        ));
    }
    let d3 = rep.s * u64::from(d1) + rep.t * u64::from(d2);
    if d3 < u64::from(d2) {
        return Err(Error::Precondition(format!(
            "s*d1 + t*d2 = {d3} is below d2 = {d2}"
        )));
    }
    let (s, t) = (exponent(rep.s)?, exponent(rep.t)?);
    let mut w = TameWord::new(3);
    w.push(ElementaryAuto::translation(0, xyz(2).pow(d1))?)?;
    w.push(ElementaryAuto::translation(1, xyz(2).pow(d2))?)?;
    w.push(ElementaryAuto::translation(
        2,
        Polynomial::monomial(Monomial::new([s, t, 0]), Rational::one()),
    )?)?;
    verify_witness(&w, &[d1.into(), d2.into(), d3 as i64])?;
    Ok(w)
}

fn exponent(e: u64) -> Result<u32> {
    u32::try_from(e).map_err(|_| Error::ExponentOverflow)
}

/// `[z -> z + y^d3; x -> x + y^d; y -> y + x]`, composing to
/// `(x + y^d, x + y + y^d, z + y^d3)`.
pub fn witness_equal_pair(d: u32, d3: u32) -> Result<TameWord> {
    if !(3 <= d && d <= d3) {
        return Err(Error::Precondition(format!(
            "need 3 <= d <= d3, got ({d}, {d3})"
        )));
    }
    let mut w = TameWord::new(3);
    w.push(ElementaryAuto::translation(2, xyz(1).pow(d3))?)?;
    w.push(ElementaryAuto::translation(0, xyz(1).pow(d))?)?;
    w.push(ElementaryAuto::translation(1, xyz(0))?)?;
    verify_witness(&w, &[d.into(), d.into(), d3.into()])?;
    Ok(w)
}

/// `(x, y + x^d2, z + x^d3)`, of multidegree `(1, d2, d3)`.
pub fn witness_linear_first(d2: u32, d3: u32) -> Result<TameWord> {
    if d2 == 0 || d3 == 0 {
        return Err(Error::Precondition("degrees must be positive".into()));
    }
    let mut w = TameWord::new(3);
    w.push(ElementaryAuto::translation(1, xyz(0).pow(d2))?)?;
    w.push(ElementaryAuto::translation(2, xyz(0).pow(d3))?)?;
    verify_witness(&w, &[1, d2.into(), d3.into()])?;
    Ok(w)
}

/// Triples known to be realizable without satisfying either theorem's
/// sufficient condition.
pub const KNOWN_INSTANCES: [[u64; 3]; 2] = [[10, 23, 25], [22, 47, 55]];

/// `g = z + 3x^2y + 3xy^3 + y^5`.
pub fn example_g() -> Polynomial {
    let (x, y, z) = (xyz(0), xyz(1), xyz(2));
    let three = Polynomial::from_int(3, 3);
    &(&z + &(&three * &(&x.pow(2) * &y))) + &(&(&three * &(&x * &y.pow(3))) + &y.pow(5))
}

/// `h = y - 6(x+y^2)^2 g + 8(x+y^2) g^3 - 16/5 g^5`.
pub fn example_h(g: &Polynomial) -> Polynomial {
    let (x, y) = (xyz(0), xyz(1));
    let w = &x + &y.pow(2);
    let c = |n: i64, d: i64| Polynomial::constant(rat(n, d), 3);
    let mut h = y.clone();
    h = &h - &(&c(6, 1) * &(&w.pow(2) * g));
    h = &h + &(&c(8, 1) * &(&w * &g.pow(3)));
    &h - &(&c(16, 5) * &g.pow(5))
}

/// `(f1, f2, f3)` with `f1 = x + y^2 - g^2`, `f2 = 256/25 f1^5 + g + h^2`,
/// `f3 = h`.
pub fn build_example_map() -> PolyMap {
    build_example_map_from(&example_g())
}

/// The example construction with an arbitrary `g`; perturbing `g` breaks
/// the top-degree cancellation in `f2`.
pub fn build_example_map_from(g: &Polynomial) -> PolyMap {
    let (x, y) = (xyz(0), xyz(1));
    let h = example_h(g);
    let f1 = &(&x + &y.pow(2)) - &g.pow(2);
    let f2 = &(&Polynomial::constant(rat(256, 25), 3) * &f1.pow(5)) + &(g + &h.pow(2));
    PolyMap {
        components: vec![f1, f2, h],
    }
}

/// The type-I form `(f1, f2, f2 + h)`; the step `(x, y, z - y)` takes it to
/// the example map.
pub fn build_type_one_form() -> PolyMap {
    let map = build_example_map();
    let f3 = map.component(1) + map.component(2);
    PolyMap {
        components: vec![map.components[0].clone(), map.components[1].clone(), f3],
    }
}

/// The affine step `(x, y, z - y)`.
pub fn affine_z_minus_y() -> ElementaryAuto {
    ElementaryAuto::translation(2, -&xyz(1)).expect("shift avoids z")
}

/// A tame word composing exactly to [`build_example_map`]:
///
/// 1. `z -> z + 3x^2y + 3xy^3 + y^5` gives `(x, y, g)`;
/// 2. `x -> x + y^2 - z^2` gives `(f1, y, g)`;
/// 3. `y -> y - 6(x+z^2)^2 z + 8(x+z^2) z^3 - 16/5 z^5` gives `(f1, h, g)`,
///    since `x + y^2 = f1 + g^2`;
/// 4. `z -> z + 256/25 x^5 + y^2` gives `(f1, h, f2)`;
/// 5. swapping the last two components gives `(f1, f2, h)`.
pub fn example_word() -> TameWord {
    let (x, y, z) = (xyz(0), xyz(1), xyz(2));
    let c = |n: i64, d: i64| Polynomial::constant(rat(n, d), 3);
    let g_shift = &example_g() - &z;
    let w = &x + &z.pow(2);
    let h_shift = &(&(&c(8, 1) * &(&w * &z.pow(3))) - &(&c(6, 1) * &(&w.pow(2) * &z)))
        - &(&c(16, 5) * &z.pow(5));
    let f2_shift = &(&c(256, 25) * &x.pow(5)) + &y.pow(2);
    let steps: Vec<TameStep> = vec![
        ElementaryAuto::translation(2, g_shift)
            .expect("avoids z")
            .into(),
        ElementaryAuto::translation(0, &y.pow(2) - &z.pow(2))
            .expect("avoids x")
            .into(),
        ElementaryAuto::translation(1, h_shift)
            .expect("avoids y")
            .into(),
        ElementaryAuto::translation(2, f2_shift)
            .expect("avoids z")
            .into(),
        Permutation(vec![0, 2, 1]).into(),
    ];
    TameWord { arity: 3, steps }
}

fn word_error(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

/// Splits off the next whitespace-delimited field, returning it with its
/// 1-based column and the remaining text.
fn next_field(text: &str, offset: usize) -> Option<(&str, usize, &str, usize)> {
    let start = text.len() - text.trim_start().len();
    let rest = &text[start..];
    if rest.is_empty() {
        return None;
    }
    let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    Some((
        &rest[..end],
        offset + start + 1,
        &rest[end..],
        offset + start + end,
    ))
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d <= BigInt::zero() || d.to_string().starts_with('+') {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Parses a word file: optional `vars:` header, then one step per line,
/// `elem i alpha <poly>` or `perm i j k` with 1-based indices.
pub fn parse_word_file(text: &str) -> std::result::Result<TameWord, ParseError> {
    let (names, lines) = parser::split_optional_header(text)?;
    let names = names.unwrap_or_else(|| default_names(3));
    let n = names.len();
    let mut word = TameWord::new(n);
    for (line_no, line) in lines {
        let (kind, kcol, rest, off) = next_field(line, 0).expect("content lines are nonempty");
        let step: TameStep = match kind {
            "elem" => {
                let (idx, icol, rest, off) = next_field(rest, off)
                    .ok_or_else(|| word_error(line_no, off + 1, "missing index"))?;
                let index = idx
                    .parse::<usize>()
                    .ok()
                    .filter(|&i| 1 <= i && i <= n)
                    .ok_or_else(|| {
                        word_error(line_no, icol, format!("index must be in 1..={n}"))
                    })?;
                let (alpha, acol, rest, off) = next_field(rest, off)
                    .ok_or_else(|| word_error(line_no, off + 1, "missing scalar"))?;
                let scalar = parse_rational(alpha).ok_or(ParseError {
                    line: line_no,
                    column: acol,
                    kind: ParseErrorKind::MalformedRational(alpha.to_string()),
                })?;
                let shift_col = off + (rest.len() - rest.trim_start().len());
                if rest.trim().is_empty() {
                    return Err(word_error(line_no, off + 1, "missing shift polynomial"));
                }
                let shift = parser::parse_polynomial_at(rest.trim(), &names, line_no).map_err(
                    |mut e| {
                        if e.line == line_no {
                            e.column += shift_col;
                        }
                        e
                    },
                )?;
                ElementaryAuto::new(index - 1, scalar, shift)
                    .map_err(|e| word_error(line_no, kcol, e.to_string()))?
                    .into()
            }
            "perm" => {
                let mut images = Vec::new();
                let mut rest = rest;
                let mut off = off;
                while let Some((tok, col, r, o)) = next_field(rest, off) {
                    let i = tok
                        .parse::<usize>()
                        .ok()
                        .filter(|&i| 1 <= i && i <= n)
                        .ok_or_else(|| {
                            word_error(line_no, col, format!("index must be in 1..={n}"))
                        })?;
                    images.push(i - 1);
                    rest = r;
                    off = o;
                }
                if images.len() != n {
                    return Err(word_error(line_no, kcol, format!("perm needs {n} indices")));
                }
                Permutation::new(images)
                    .map_err(|e| word_error(line_no, kcol, e.to_string()))?
                    .into()
            }
            other => return Err(word_error(line_no, kcol, format!("unknown step `{other}`"))),
        };
        word.push(step).expect("steps share the declared arity");
    }
    Ok(word)
}

pub fn print_word_file<S: AsRef<str>>(word: &TameWord, variables: &[S]) -> String {
    let mut out = format!(
        "vars: {}\n",
        variables
            .iter()
            .map(|s| s.as_ref())
            .collect::<Vec<_>>()
            .join(",")
    );
    for step in &word.steps {
        match step {
            TameStep::Elementary(e) => out.push_str(&format!(
                "elem {} {} {}\n",
                e.index + 1,
                e.scalar,
                parser::print_polynomial(&e.shift, variables)
            )),
            TameStep::Permutation(p) => {
                let idx: Vec<String> = p.0.iter().map(|i| (i + 1).to_string()).collect();
                out.push_str(&format!("perm {}\n", idx.join(" ")));
            }
        }
    }
    out
}
