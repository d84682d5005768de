//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tamedeg::poly::rat;
use tamedeg::{Monomial, Polynomial, Rational};

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

/// Nonzero rational with small numerator and denominator.
pub fn coeff(rng: &mut TestRng) -> Rational {
    let n = loop {
        let n = rng.gen_range(-9i64..=9);
        if n != 0 {
            break n;
        }
    };
    let d = if rng.gen_bool(0.3) {
        rng.gen_range(2i64..=5)
    } else {
        1
    };
    rat(n, d)
}

/// Uniform exponent vector of total degree exactly `degree`.
pub fn monomial_of_degree(rng: &mut TestRng, arity: usize, degree: u32) -> Monomial {
    let mut exps = vec![0u32; arity];
    for _ in 0..degree {
        exps[rng.gen_range(0..arity)] += 1;
    }
    Monomial::new(exps)
}

/// Sparse polynomial of degree at most `max_degree` with up to `max_terms`
/// terms; may be zero.
pub fn poly(rng: &mut TestRng, arity: usize, max_degree: u32, max_terms: usize) -> Polynomial {
    let n = rng.gen_range(0..=max_terms);
    let terms: Vec<_> = (0..n)
        .map(|_| {
            let d = rng.gen_range(0..=max_degree);
            (monomial_of_degree(rng, arity, d), coeff(rng))
        })
        .collect();
    Polynomial::from_terms(arity, terms).unwrap()
}

/// Polynomial of degree exactly `degree`.
pub fn poly_of_degree(
    rng: &mut TestRng,
    arity: usize,
    degree: u32,
    max_terms: usize,
) -> Polynomial {
    let top = Polynomial::monomial(monomial_of_degree(rng, arity, degree), coeff(rng));
    let rest = if degree == 0 {
        Polynomial::zero(arity)
    } else {
        poly(rng, arity, degree - 1, max_terms)
    };
    &top + &rest
}

/// Nonzero homogeneous polynomial of the given degree.
pub fn homogeneous(rng: &mut TestRng, arity: usize, degree: u32, max_terms: usize) -> Polynomial {
    loop {
        let n = rng.gen_range(1..=max_terms);
        let terms: Vec<_> = (0..n)
            .map(|_| (monomial_of_degree(rng, arity, degree), coeff(rng)))
            .collect();
        let p = Polynomial::from_terms(arity, terms).unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

/// A pair `(f, g)` with `deg f, deg g <= 6`. Half the time the leading forms
/// are powers `a^m, a^n` of a common form with neither exponent dividing the
/// other, so the leading forms are dependent but not in each other's algebra.
pub fn candidate_pair(rng: &mut TestRng) -> (Polynomial, Polynomial) {
    if rng.gen_bool(0.5) {
        let (df, dg) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let f = poly_of_degree(rng, 3, df, 3);
        let g = poly_of_degree(rng, 3, dg, 3);
        return (f, g);
    }
    const POWERS: [(u32, u32, u32); 14] = [
        (1, 2, 3),
        (1, 3, 2),
        (1, 3, 4),
        (1, 4, 3),
        (1, 2, 5),
        (1, 5, 2),
        (1, 3, 5),
        (1, 5, 3),
        (1, 4, 5),
        (1, 4, 6),
        (1, 6, 4),
        (1, 5, 6),
        (2, 2, 3),
        (2, 3, 2),
    ];
    let &(e, m, n) = POWERS.choose(rng).unwrap();
    let a = homogeneous(rng, 3, e, if e == 1 { 3 } else { 2 });
    let lower = |rng: &mut TestRng, top: u32| poly(rng, 3, top - 1, 3);
    let f = &a.pow(m).scale(&coeff(rng)) + &lower(rng, m * e);
    let g = &a.pow(n).scale(&coeff(rng)) + &lower(rng, n * e);
    (f, g)
}

/// Nonzero `G(x, y)` with `deg_y G` exactly `deg_y` and `deg_x G <= 2`.
pub fn bivariate(rng: &mut TestRng, deg_y: u32) -> Polynomial {
    loop {
        let top = Polynomial::monomial(Monomial::new([rng.gen_range(0..=2), deg_y]), coeff(rng));
        let n = rng.gen_range(0..=3);
        let terms: Vec<_> = (0..n)
            .map(|_| {
                (
                    Monomial::new([rng.gen_range(0..=2), rng.gen_range(0..=deg_y)]),
                    coeff(rng),
                )
            })
            .collect();
        let p = &top + &Polynomial::from_terms(2, terms).unwrap();
        if p.degree_in(1).unwrap() == tamedeg::Degree::Finite(deg_y.into()) {
            return p;
        }
    }
}

/// Independent primality oracle: sieve of Eratosthenes.
pub fn primes_up_to(n: usize) -> Vec<bool> {
    let mut is = vec![true; n + 1];
    is[0] = false;
    if n >= 1 {
        is[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if is[i] {
            let mut j = i * i;
            while j <= n {
                is[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is
}

/// Independent membership oracle for `aN + bN`.
pub fn brute_member(l: u64, a: u64, b: u64) -> bool {
    (0..=l / a).any(|s| (l - s * a).is_multiple_of(b))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
