//! Nondegeneracy: no face part `f_σ` has a critical point on the torus.
//!
//! For each face the ideal `⟨u_i ∂f_σ/∂u_i⟩` saturated by `u1⋯un` must be
//! the unit ideal. Faces are independent, so they are checked in parallel;
//! the verdict is the first failing face in a fixed order.

use rayon::prelude::*;
use serde::Serialize;

use super::NewtonPolyhedron;
use crate::error::Error;
use crate::groebner::{JacobianIdeal, TermOrder};
use crate::polyring::{LaurentPoly, Mode};

/// Reduction steps allowed per face before the verdict becomes unknown.
pub const DEFAULT_FACE_BUDGET: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Nondegeneracy {
    Nondegenerate,
    /// `face` is the face polynomial with a torus critical point.
    Degenerate {
        face: String,
    },
    /// The per-face computation ran out of budget.
    Unknown {
        face: String,
    },
}

impl Nondegeneracy {
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, Nondegeneracy::Nondegenerate)
    }
}

enum FaceResult {
    Ok,
    Critical,
    OutOfBudget,
}

fn check_face(face_poly: &LaurentPoly, budget: u64) -> FaceResult {
    if face_poly.len() == 1 {
        // u_i∂_i of a nonzero monomial off the origin is a unit on the torus.
        return FaceResult::Ok;
    }
    let n = face_poly.nvars();
    let gens: Vec<LaurentPoly> = (0..n)
        .map(|i| face_poly.log_derivative(i))
        .filter(|g| !g.is_zero())
        .collect();
    let gens: Vec<LaurentPoly> = gens
        .iter()
        .map(|g| g.with_mode(Mode::Laurent).expect("always allowed"))
        .collect();
    match JacobianIdeal::from_generators(Mode::Laurent, n, &gens, TermOrder::Grevlex, false, budget)
    {
        Ok(j) if j.basis.is_unit() => FaceResult::Ok,
        Ok(_) => FaceResult::Critical,
        Err(Error::BudgetExceeded(_)) => FaceResult::OutOfBudget,
        Err(_) => FaceResult::Critical,
    }
}

/// Decide nondegeneracy of a parameter-free `f` on its polyhedron `p`.
pub fn is_nondegenerate(f: &LaurentPoly, p: &NewtonPolyhedron, budget: u64) -> Nondegeneracy {
    let faces = p.faces();
    let results: Vec<(String, FaceResult)> = faces
        .par_iter()
        .map(|pts| {
            let fp = f.filter_terms(|e| pts.contains(e));
            let r = check_face(&fp, budget);
            (fp.to_string(), r)
        })
        .collect();
    let mut unknown = None;
    for (face, r) in results {
        match r {
            FaceResult::Ok => {}
            FaceResult::Critical => return Nondegeneracy::Degenerate { face },
            FaceResult::OutOfBudget => {
                unknown.get_or_insert(face);
            }
        }
    }
    match unknown {
        Some(face) => Nondegeneracy::Unknown { face },
        None => Nondegeneracy::Nondegenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::build_polyhedron;
    use crate::polyring::parse_poly;

    fn verdict(s: &str, n: usize, mode: Mode) -> Nondegeneracy {
        let f = parse_poly(s, n, 0, mode).unwrap();
        let p = build_polyhedron(&f).unwrap();
        is_nondegenerate(&f, &p, DEFAULT_FACE_BUDGET)
    }

    #[test]
    fn examples() {
        assert!(verdict("u1^5 + u2^5", 2, Mode::Polynomial).is_nondegenerate());
        assert!(verdict("u1 + u1^-1", 1, Mode::Laurent).is_nondegenerate());
        assert!(verdict("u1 + u2 + u1^-1*u2^-1", 2, Mode::Laurent).is_nondegenerate());
        match verdict("(u1 + u2)^2 + u3^2", 3, Mode::Polynomial) {
            Nondegeneracy::Degenerate { face } => assert_eq!(face, "u1^2 + 2*u1*u2 + u2^2"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tiny_budget_gives_unknown_not_a_wrong_verdict() {
        let f = parse_poly("u1^5 + u1^2*u2^2 + u2^5", 2, 0, Mode::Polynomial).unwrap();
        let p = build_polyhedron(&f).unwrap();
        assert!(matches!(
            is_nondegenerate(&f, &p, 0),
            Nondegeneracy::Unknown { .. }
        ));
    }
}
