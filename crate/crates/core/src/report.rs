//! End-to-end check of the (10, 23, 25) construction.

use serde::Serialize;

use crate::autos::{build_example_map, compose_word, example_g, example_word, PolyMap};
use crate::parser::{parse_polynomial, print_polynomial};
use crate::poisson::{algebraically_dependent, poisson_bracket, print_bracket};
use crate::reduction::{find_elementary_reduction, ReductionQuery};

const XYZ: [&str; 3] = ["x", "y", "z"];
const UV: [&str; 2] = ["u", "v"];

/// Coefficients of `[f1, f3]` on `[x,y]`, `[x,z]`, `[y,z]`. The `[x,z]`
/// coefficient is displayed as `-(6y^4 + 12xy^2 + 6x^2)`; the grammar has
/// no parentheses, so it is stored expanded.
pub const EXPECTED_BRACKET: [(usize, usize, &str); 3] = [
    (
        0,
        1,
        "-30*x^2*y^4 - 54*x^3*y^2 - 18*x^4 - 6*y^3*z - 12*x*y*z + 1",
    ),
    (0, 2, "-6*y^4 - 12*x*y^2 - 6*x^2"),
    (1, 2, "-10*y^5 - 18*x*y^3 - 6*x^2*y + 2*z"),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub expected: String,
    pub computed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl ExampleReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn verify_example() -> ExampleReport {
    verify_example_map(&build_example_map())
}

/// Runs every check against `map`, which should be the example map; a
/// perturbed map makes the affected checks fail with their computed values.
pub fn verify_example_map(map: &PolyMap) -> ExampleReport {
    let mut checks = Vec::new();
    let mut check = |name, passed, expected: String, computed: String| {
        checks.push(Check {
            name,
            passed,
            expected,
            computed,
        });
    };
    let (f1, f3) = (map.component(0), map.component(2));

    let mdeg = map.mdeg();
    check(
        "mdeg",
        mdeg == [10, 23, 25],
        "(10, 23, 25)".into(),
        mdeg.to_string(),
    );

    match poisson_bracket(f1, f3) {
        Ok(b) => {
            let matches = EXPECTED_BRACKET.iter().all(|&(i, j, s)| {
                parse_polynomial(s, &XYZ).is_ok_and(|e| b.coefficient(i, j) == e)
            }) && b.iter().count() == 3;
            let expected = EXPECTED_BRACKET
                .iter()
                .map(|&(i, j, s)| format!("({s})·[{},{}]", XYZ[i], XYZ[j]))
                .collect::<Vec<_>>()
                .join(" + ");
            check(
                "bracket_coefficients",
                matches,
                expected,
                print_bracket(&b, &XYZ),
            );
            let deg = b.degree();
            let min = f1.degree().min(f3.degree());
            check(
                "bracket_degree",
                deg == 8 && deg < min,
                "8 < 10".into(),
                format!("{deg} vs min degree {min}"),
            );
        }
        Err(e) => {
            check(
                "bracket_coefficients",
                false,
                "bracket".into(),
                e.to_string(),
            );
            check("bracket_degree", false, "8 < 10".into(), e.to_string());
        }
    }

    let lead_dep = match (f1.leading_form(), f3.leading_form()) {
        (Ok(a), Ok(b)) => algebraically_dependent(&a, &b).map_err(|e| e.to_string()),
        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
    };
    check(
        "leading_forms_dependent",
        lead_dep == Ok(true),
        "true".into(),
        show(&lead_dep),
    );

    let indep = algebraically_dependent(f1, f3)
        .map(|d| !d)
        .map_err(|e| e.to_string());
    check(
        "f1_f3_independent",
        indep == Ok(true),
        "true".into(),
        show(&indep),
    );

    match map.jacobian_det() {
        Ok(det) => {
            let ok = det.is_constant() && !det.is_zero();
            check(
                "jacobian_constant",
                ok,
                "nonzero constant".into(),
                print_polynomial(&det, &XYZ),
            );
        }
        Err(e) => check(
            "jacobian_constant",
            false,
            "nonzero constant".into(),
            e.to_string(),
        ),
    }

    let expected_g = "256/25*u^5 + v^2";
    let expected_residual = print_polynomial(&example_g(), &XYZ);
    let reduction =
        ReductionQuery::new(map.clone(), 1, 50).and_then(|q| find_elementary_reduction(&q));
    match reduction {
        Ok(Some(r)) => {
            let ok = parse_polynomial(expected_g, &UV).is_ok_and(|g| g == r.g)
                && r.others == (0, 2)
                && r.residual == example_g()
                && r.residual_degree == 5;
            check(
                "reduction_recovery",
                ok,
                format!("g = {expected_g}, residual {expected_residual} of degree 5"),
                format!(
                    "g = {}, residual {} of degree {}",
                    print_polynomial(&r.g, &UV),
                    print_polynomial(&r.residual, &XYZ),
                    r.residual_degree
                ),
            );
        }
        Ok(None) => check(
            "reduction_recovery",
            false,
            format!("g = {expected_g}"),
            "no reduction found".into(),
        ),
        Err(e) => check(
            "reduction_recovery",
            false,
            format!("g = {expected_g}"),
            e.to_string(),
        ),
    }

    let word = example_word();
    let composed = compose_word(&word);
    check(
        "word_composition",
        composed.as_ref().is_ok_and(|m| m == map),
        format!("{}-step word composes to the map", word.len()),
        match composed {
            Ok(m) if &m == map => "equal".into(),
            Ok(m) => format!("differs; word mdeg {}", m.mdeg()),
            Err(e) => e.to_string(),
        },
    );

    let passed = checks.iter().all(|c| c.passed);
    ExampleReport { passed, checks }
}

fn show(r: &Result<bool, String>) -> String {
    match r {
        Ok(b) => b.to_string(),
        Err(e) => e.clone(),
    }
}
