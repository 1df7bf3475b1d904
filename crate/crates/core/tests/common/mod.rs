#![allow(dead_code)]

use brieskorn::jacobi::{Config, JacobianSystem};
use brieskorn::newton::{build_polyhedron, is_subdiagram};
use brieskorn::polyring::{parse_poly, ExponentVec, LaurentPoly, Mode, ParamCoeff, Rational};
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// The reference polynomials: `(f, n, mode)`.
pub const CORPUS: [(&str, usize, Mode); 6] = [
    ("u1^3", 1, Mode::Polynomial),
    ("u1 + u1^-1", 1, Mode::Laurent),
    ("u1 + u2 + u1^-1*u2^-1", 2, Mode::Laurent),
    ("u1^5 + u2^5", 2, Mode::Polynomial),
    ("u1^3 + u2^4", 2, Mode::Polynomial),
    ("u1^4 + u1^-1 + u2^2 + u2^-2", 2, Mode::Laurent),
];

pub fn poly(f: &str, n: usize, mode: Mode) -> LaurentPoly {
    parse_poly(f, n, 0, mode).unwrap()
}

fn exponent_box(n: usize, lo: i32, hi: i32) -> Vec<ExponentVec> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e: Vec<i32>| (lo..=hi).map(move |k| [e.clone(), vec![k]].concat()))
            .collect();
    }
    out.into_iter().map(ExponentVec).collect()
}

/// Monomials `g` that are admissible deformation terms for `f`.
pub fn subdiagram_monomials(f: &LaurentPoly) -> Vec<ExponentVec> {
    let p = build_polyhedron(f).unwrap();
    let lo = if f.mode() == Mode::Laurent { -3 } else { 0 };
    exponent_box(f.nvars(), lo, 5)
        .into_iter()
        .filter(|e| {
            let g = LaurentPoly::monomial(f.nvars(), 0, f.mode(), e.clone(), ParamCoeff::one(0));
            is_subdiagram(&g, &p).unwrap().passes()
        })
        .collect()
}

/// Sum of monomials with small nonzero rational coefficients.
pub fn combination(n: usize, mode: Mode, terms: &[(ExponentVec, Rational)]) -> LaurentPoly {
    LaurentPoly::from_terms(
        n,
        0,
        mode,
        terms
            .iter()
            .map(|(e, c)| (e.clone(), ParamCoeff::constant(0, c.clone()))),
    )
    .unwrap()
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3)
        .prop_filter("nonzero", |(a, _)| *a != 0)
        .prop_map(|(a, b)| q(a, b))
}

/// A corpus entry together with a random admissible deformation of 1 or 2
/// polynomials.
pub fn deformed_system() -> impl Strategy<Value = (usize, Vec<LaurentPoly>)> {
    (0..CORPUS.len()).prop_flat_map(|k| {
        let (f, n, mode) = CORPUS[k];
        let monos = subdiagram_monomials(&poly(f, n, mode));
        let term = (prop::sample::select(monos), small_rational());
        let g = prop::collection::vec(term, 1..=2)
            .prop_map(move |t| combination(n, mode, &t))
            .prop_filter("nonzero", |g| !g.is_zero());
        (Just(k), prop::collection::vec(g, 1..=2))
    })
}

pub fn system(k: usize, g: &[LaurentPoly]) -> JacobianSystem {
    let (f, n, mode) = CORPUS[k];
    JacobianSystem::new(&poly(f, n, mode), g, &Config::default()).unwrap()
}
