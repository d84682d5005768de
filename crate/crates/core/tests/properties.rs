mod common;

use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use tamedeg::autos::{compose_word, ElementaryAuto, Permutation, PolyMap, TameWord};
use tamedeg::decision::{decide, DegreeTriple};
use tamedeg::parser::{parse_polynomial, print_polynomial};
use tamedeg::poisson::poisson_bracket;
use tamedeg::reduction::{find_any_reduction, find_elementary_reduction, ReductionQuery};
use tamedeg::{Degree, Monomial, Polynomial, Rational};

const XYZ: [&str; 3] = ["x", "y", "z"];

fn arb_poly(max_degree: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (
            prop::collection::vec(0u32..=max_degree, 3),
            any::<i64>(),
            1i64..=1_000_000,
        ),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        let terms = terms.into_iter().filter_map(|(mut e, n, d)| {
            while e.iter().sum::<u32>() > max_degree {
                let i = e.iter().position(|&x| x > 0).unwrap();
                e[i] -= 1;
            }
            (n != 0).then(|| (Monomial::new(e), Rational::new(n.into(), d.into())))
        });
        Polynomial::from_terms(3, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_round_trip(p in arb_poly(12, 10)) {
        let text = print_polynomial(&p, &XYZ);
        prop_assert_eq!(parse_polynomial(&text, &XYZ).unwrap(), p);
    }

    #[test]
    fn leading_form_is_multiplicative(a in arb_poly(5, 5), b in arb_poly(5, 5)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let lhs = (&a * &b).leading_form().unwrap();
        let rhs = &a.leading_form().unwrap() * &b.leading_form().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_is_additive(a in arb_poly(6, 5), b in arb_poly(6, 5)) {
        prop_assert_eq!((&a * &b).degree(), a.degree() + b.degree());
    }

    #[test]
    fn homogeneous_division_recovers_quotient(a in arb_poly(4, 4), b in arb_poly(4, 4)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (a, b) = (a.leading_form().unwrap(), b.leading_form().unwrap());
        prop_assert_eq!((&a * &b).div_homogeneous(&b).unwrap(), Some(a));
    }

    #[test]
    fn bracket_with_self_vanishes(f in arb_poly(5, 6)) {
        prop_assert!(poisson_bracket(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn decide_is_permutation_invariant(d1 in 1u64..=40, d2 in 1u64..=40, d3 in 1u64..=40) {
        let base = decide(&DegreeTriple::new(d1, d2, d3).unwrap()).unwrap();
        for [a, b, c] in [[d2, d1, d3], [d3, d2, d1], [d1, d3, d2], [d2, d3, d1], [d3, d1, d2]] {
            let t = DegreeTriple::new(a, b, c).unwrap();
            let d = decide(&t).unwrap();
            prop_assert_eq!(&d, &base);
            if let Some(w) = &d.witness {
                let mdeg = compose_word(&t.orient(w).unwrap()).unwrap().mdeg();
                prop_assert_eq!(mdeg, [a as i64, b as i64, c as i64]);
            }
        }
    }
}

/// Random tame word of up to `len` steps with shifts of degree at most 3.
fn random_word(rng: &mut TestRng, len: usize) -> TameWord {
    let mut w = TameWord::new(3);
    for _ in 0..len {
        if rng.gen_bool(0.2) {
            let mut images = vec![0, 1, 2];
            images.shuffle(rng);
            w.push(Permutation::new(images).unwrap()).unwrap();
            continue;
        }
        let i = rng.gen_range(0..3);
        let shift = poly(rng, 3, 3, 3);
        let terms: Vec<_> = shift
            .terms()
            .filter(|(m, _)| m.exponent(i) == 0)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        let shift = Polynomial::from_terms(3, terms).unwrap();
        w.push(ElementaryAuto::new(i, coeff(rng), shift).unwrap())
            .unwrap();
    }
    w
}

#[test]
fn word_followed_by_inverse_is_identity() {
    let mut rng = rng(11);
    for _ in 0..60 {
        let w = random_word(&mut rng, 4);
        let round = w.concat(&w.inverse()).unwrap();
        assert_eq!(compose_word(&round).unwrap(), PolyMap::identity(3));
        let back = w.inverse().concat(&w).unwrap();
        assert_eq!(compose_word(&back).unwrap(), PolyMap::identity(3));
    }
}

#[test]
fn tame_maps_have_constant_jacobian() {
    let mut rng = rng(12);
    for _ in 0..60 {
        let map = compose_word(&random_word(&mut rng, 4)).unwrap();
        let det = map.jacobian_det().unwrap();
        assert!(det.is_constant() && !det.is_zero());
    }
}

#[test]
fn composition_is_associative_on_maps() {
    let mut rng = rng(13);
    for _ in 0..60 {
        let (a, b) = (random_word(&mut rng, 2), random_word(&mut rng, 2));
        let ab = compose_word(&a.concat(&b).unwrap()).unwrap();
        // Substituting the first map into the second word's composition.
        let fa = compose_word(&a).unwrap();
        let fb = compose_word(&b).unwrap();
        let expected: Vec<Polynomial> = fb
            .components()
            .iter()
            .map(|c| c.compose(fa.components()).unwrap())
            .collect();
        assert_eq!(ab.components(), expected.as_slice());
    }
}

/// `(x, y + p(x), z + q(x, y + p(x)))` after a random permutation.
fn triangular(rng: &mut TestRng) -> (PolyMap, usize) {
    let x = Polynomial::var(0, 3);
    let p = loop {
        let d = rng.gen_range(2..=3);
        let p = Polynomial::from_terms(3, (1..=d).map(|e| (Monomial::new([e, 0, 0]), coeff(rng))))
            .unwrap();
        if p.degree() >= Degree::Finite(2) {
            break p;
        }
    };
    let f2 = &Polynomial::var(1, 3) + &p;
    let q = loop {
        let terms: Vec<_> = (0..rng.gen_range(1..=3))
            .map(|_| {
                (
                    Monomial::new([rng.gen_range(0..=2), rng.gen_range(1..=2), 0]),
                    coeff(rng),
                )
            })
            .collect();
        let q = Polynomial::from_terms(3, terms).unwrap();
        if !q.is_zero() {
            break q;
        }
    };
    let f3 = &Polynomial::var(2, 3)
        + &q.compose(&[x.clone(), f2.clone(), Polynomial::var(2, 3)])
            .unwrap();
    let mut comps = vec![x, f2, f3];
    let mut order = [0, 1, 2];
    order.shuffle(rng);
    comps = order.iter().map(|&i| comps[i].clone()).collect();
    let z_at = order.iter().position(|&i| i == 2).unwrap();
    (PolyMap::new(comps).unwrap(), z_at)
}

#[test]
fn triangular_maps_are_reducible() {
    let mut rng = rng(14);
    for _ in 0..80 {
        let (map, _) = triangular(&mut rng);
        let cap = map
            .components()
            .iter()
            .map(|c| c.degree().finite().unwrap())
            .max()
            .unwrap() as u32
            * 2;
        let r = find_any_reduction(&map, cap)
            .unwrap()
            .expect("a triangular map reduces");
        assert!(r.verify(&map).unwrap());
        assert!(r.residual_degree < r.target_degree);
    }
}

/// Independent oracle: the minimal residual degree reachable with support
/// `s deg U + t deg V <= cap`, by dense Gauss-Jordan elimination per
/// threshold. Returns `None` when no drop is possible or the target lies
/// in `k[U, V] + k`.
fn oracle_min_residual(map: &PolyMap, target: usize, cap: u64) -> Option<i64> {
    let comps = map.components();
    let others: Vec<usize> = (0..3).filter(|&i| i != target).collect();
    let (u, v) = (&comps[others[0]], &comps[others[1]]);
    let (du, dv) = (
        u.degree().finite().unwrap() as u64,
        v.degree().finite().unwrap() as u64,
    );
    let t = &comps[target];
    let dt = t.degree().finite().unwrap();
    let mut products = Vec::new();
    for s in 0..=cap / du {
        for k in 0..=cap / dv {
            if s * du + k * dv <= cap {
                products.push(&u.pow(s as u32) * &v.pow(k as u32));
            }
        }
    }
    let mut monomials: BTreeSet<Monomial> = t.terms().map(|(m, _)| m.clone()).collect();
    for p in &products {
        monomials.extend(p.terms().map(|(m, _)| m.clone()));
    }
    let solvable = |d: i64| {
        let rows: Vec<Vec<Rational>> = monomials
            .iter()
            .filter(|m| m.degree() as i64 >= d)
            .map(|m| {
                let mut row: Vec<Rational> = products.iter().map(|p| p.coefficient(m)).collect();
                row.push(t.coefficient(m));
                row
            })
            .collect();
        consistent(rows, products.len())
    };
    if !solvable(dt) {
        return None;
    }
    if solvable(1) {
        return None;
    }
    let d = (2..=dt).find(|&d| solvable(d)).unwrap();
    Some(d - 1)
}

fn consistent(mut rows: Vec<Vec<Rational>>, n: usize) -> bool {
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && !r[col].is_zero() {
                let f = &r[col] / &pivot[col];
                for (x, y) in r.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rows[rank..].iter().all(|r| r[n].is_zero())
}

#[test]
fn reduction_matches_dense_oracle() {
    let mut rng = rng(15);
    let mut found = 0;
    for _ in 0..120 {
        let map = if rng.gen_bool(0.5) {
            triangular(&mut rng).0
        } else {
            compose_word(&random_word(&mut rng, 3)).unwrap()
        };
        let comps = map.components();
        if comps.iter().any(|c| c.is_constant())
            || comps[0] == comps[1]
            || comps[0] == comps[2]
            || comps[1] == comps[2]
        {
            continue;
        }
        for (target, comp) in comps.iter().enumerate() {
            let dt = comp.degree().finite().unwrap() as u32;
            if dt > 9 {
                continue;
            }
            let cap = 2 * dt;
            let q = ReductionQuery::new(map.clone(), target, cap).unwrap();
            let got = find_elementary_reduction(&q).unwrap();
            let want = oracle_min_residual(&map, target, cap.into());
            assert_eq!(
                got.as_ref().map(|r| r.residual_degree),
                want,
                "target {target} of {map:?}"
            );
            if let Some(r) = got {
                assert!(r.verify(&map).unwrap());
                found += 1;
            }
        }
    }
    assert!(found > 20, "only {found} reductions exercised");
}
