//! θ-expansion of a class in the Brieskorn lattice.
//!
//! In `G₀` the relation `θ d_u η = d_uF ∧ η` turns a cofactor term
//! `[a · gen_i(F)]` into `θ [D_i a]`, so one division splits `h` into a
//! remainder and `θ` times a strictly lighter class.

use crate::error::{Error, Result};
use crate::jacobi::{DivisionResult, JacobianSystem};
use crate::polyring::{LaurentPoly, ParamCoeff};

/// `[h] = Σ_k θ^k · Σ_l terms[k][l] · m_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaExpansion {
    pub terms: Vec<Vec<ParamCoeff>>,
    /// One division per θ-power, dividend first.
    pub steps: Vec<DivisionResult>,
}

impl ThetaExpansion {
    /// Coordinates of `θ^k`; zero beyond the expansion.
    pub fn coefficient(&self, k: usize, mu: usize, r: usize) -> Vec<ParamCoeff> {
        self.terms
            .get(k)
            .cloned()
            .unwrap_or_else(|| vec![ParamCoeff::zero(r); mu])
    }

    pub fn theta_degree(&self) -> usize {
        self.terms
            .iter()
            .rposition(|v| v.iter().any(|c| !c.is_zero()))
            .unwrap_or(0)
    }

    /// Replay the reduction: every division identity holds, each dividend
    /// is `Σ D_i a_i` of the previous step, and the chain ends at zero.
    pub fn verify(&self, h: &LaurentPoly, sys: &JacobianSystem) -> bool {
        let mut cur = h.clone();
        for step in &self.steps {
            if !step.verify(&cur, sys) {
                return false;
            }
            cur = next_dividend(step, sys);
        }
        cur.is_zero()
    }
}

fn next_dividend(step: &DivisionResult, sys: &JacobianSystem) -> LaurentPoly {
    let mut next = LaurentPoly::zero(sys.nvars(), sys.nparams(), sys.mode());
    for (i, a) in step.cofactors.iter().enumerate() {
        next = &next + &sys.step_operator(a, i);
    }
    next
}

pub fn theta_reduce(h: &LaurentPoly, sys: &JacobianSystem) -> Result<ThetaExpansion> {
    let h = sys.lift(h)?;
    let mut terms = Vec::new();
    let mut steps = Vec::new();
    let mut cur = h;
    let mut weight = None;
    while !cur.is_zero() {
        let w = sys.weight_of(&cur);
        if let (Some(prev), Some(now)) = (&weight, &w) {
            if now >= prev {
                return Err(Error::Watchdog(format!(
                    "θ-step did not lower the weight: {now} after {prev}"
                )));
            }
        }
        weight = w;
        let step = sys.divide(&cur)?;
        if !step.certified() {
            return Err(Error::Watchdog("cofactor weight bound violated".into()));
        }
        cur = next_dividend(&step, sys);
        terms.push(step.remainder.clone());
        steps.push(step);
    }
    Ok(ThetaExpansion { terms, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::Config;
    use crate::polyring::{parse_poly, ExponentVec, Mode, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn golden_family() {
        let f = parse_poly("u1^5 + u2^5", 2, 0, Mode::Polynomial).unwrap();
        let g = ["u1", "u2"].map(|s| parse_poly(s, 2, 0, Mode::Polynomial).unwrap());
        let sys = JacobianSystem::new(&f, &g, &Config::default()).unwrap();
        let b = sys.basis();
        let x1 = ParamCoeff::param(2, 0);
        let x2 = ParamCoeff::param(2, 1);
        for i in 0..3 {
            for j in 0..3 {
                let k = b.index_of(&ExponentVec(vec![i, j])).unwrap();
                let h = sys.big_f().checked_mul(&sys.basis_poly(k)).unwrap();
                let t = theta_reduce(&h, &sys).unwrap();
                assert!(t.verify(&h, &sys));
                assert_eq!(t.theta_degree(), 1);
                let mut expect0 = vec![ParamCoeff::zero(2); 16];
                expect0[b.index_of(&ExponentVec(vec![i + 1, j])).unwrap()] = x1.scale(&q(4, 5));
                expect0[b.index_of(&ExponentVec(vec![i, j + 1])).unwrap()] = x2.scale(&q(4, 5));
                assert_eq!(t.terms[0], expect0);
                let mut expect1 = vec![ParamCoeff::zero(2); 16];
                expect1[k] = ParamCoeff::constant(2, q((i + j + 2) as i64, 5));
                assert_eq!(t.terms[1], expect1);
            }
        }
    }

    #[test]
    fn cubic_f_times_one() {
        let f = parse_poly("u1^3", 1, 0, Mode::Polynomial).unwrap();
        let g = parse_poly("u1", 1, 0, Mode::Polynomial).unwrap();
        let sys = JacobianSystem::new(&f, &[g], &Config::default()).unwrap();
        let h = sys.big_f().clone();
        let t = theta_reduce(&h, &sys).unwrap();
        assert!(t.verify(&h, &sys));
        let x = ParamCoeff::param(1, 0);
        assert_eq!(t.terms[0], vec![ParamCoeff::zero(1), x.scale(&q(2, 3))]);
        assert_eq!(
            t.terms[1],
            vec![ParamCoeff::constant(1, q(1, 3)), ParamCoeff::zero(1)]
        );
        assert_eq!(t.terms.len(), 2);
    }

    #[test]
    fn constants_are_basis_elements() {
        let f = parse_poly("u1^3", 1, 0, Mode::Polynomial).unwrap();
        let sys = JacobianSystem::new(&f, &[], &Config::default()).unwrap();
        let h = LaurentPoly::constant(1, 0, Mode::Polynomial, q(7, 2));
        let t = theta_reduce(&h, &sys).unwrap();
        assert_eq!(
            t.terms,
            vec![vec![ParamCoeff::constant(0, q(7, 2)), ParamCoeff::zero(0)]]
        );
    }
}
