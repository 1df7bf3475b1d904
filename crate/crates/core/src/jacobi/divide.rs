//! Division `h = Σ v_k m_k + Σ a_i gen_i(F)` over `ℚ[x]`.
//!
//! The top Newton level of the running remainder is split off, reduced
//! against the level table, and the matching multiple of the generators is
//! subtracted. Sub-diagram terms only contribute strictly lower levels, so
//! the top level drops every round.

use serde::Serialize;

use super::JacobianSystem;
use crate::error::{Error, Result};
use crate::polyring::{
    serialize_opt_rational, serialize_rational, LaurentPoly, Mode, ParamCoeff, Rational,
};

/// Weight bound on one cofactor `a_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightCertificate {
    pub generator: usize,
    /// `φ(a_i)` (Laurent) or `φ*(a_i)` (polynomial); `None` for `a_i = 0`.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub cofactor_weight: Option<Rational>,
    #[serde(serialize_with = "serialize_rational")]
    pub cofactor_bound: Rational,
    /// `φ(u_i∂_i a_i)` (Laurent) or `φ*(∂_i a_i)` (polynomial).
    #[serde(serialize_with = "serialize_opt_rational")]
    pub derivative_weight: Option<Rational>,
    #[serde(serialize_with = "serialize_rational")]
    pub derivative_bound: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionResult {
    /// Weight of the dividend; `None` when it is zero.
    pub alpha: Option<Rational>,
    /// Coordinates in the adapted basis.
    pub remainder: Vec<ParamCoeff>,
    pub cofactors: Vec<LaurentPoly>,
    pub certificates: Vec<WeightCertificate>,
}

impl DivisionResult {
    /// Recompose `Σ v_k m_k + Σ a_i gen_i(F)` and compare with `h`.
    pub fn verify(&self, h: &LaurentPoly, sys: &JacobianSystem) -> bool {
        let mut back = sys.from_coordinates(&self.remainder);
        for (a, g) in self.cofactors.iter().zip(sys.generators()) {
            back = &back + &(a * g);
        }
        &back == h
    }

    pub fn certified(&self) -> bool {
        self.certificates.iter().all(|c| c.holds)
    }
}

fn below(w: &Option<Rational>, bound: &Rational) -> bool {
    w.as_ref().is_none_or(|w| w <= bound)
}

impl JacobianSystem {
    /// Divide `h` (with `r` parameters) by the Jacobian generators of `F`.
    pub fn divide(&self, h: &LaurentPoly) -> Result<DivisionResult> {
        if h.nvars() != self.n || h.nparams() != self.r {
            return Err(Error::DimensionMismatch(format!(
                "dividend has {} variables and {} parameters, expected {} and {}",
                h.nvars(),
                h.nparams(),
                self.n,
                self.r
            )));
        }
        if h.mode() != self.mode {
            return Err(Error::WrongMode(
                "dividend and F live in different rings".into(),
            ));
        }
        let p = &self.polyhedron;
        let alpha = self.weight_of(h);
        let mut cur = h.clone();
        let mut remainder = vec![ParamCoeff::zero(self.r); self.mu()];
        let mut cofactors = vec![LaurentPoly::zero(self.n, self.r, self.mode); self.n];
        let mut last = i64::MAX;

        while !cur.is_zero() {
            let k = cur
                .support()
                .map(|e| p.mode_level(&e.0))
                .max()
                .expect("nonzero");
            if k >= last {
                return Err(Error::Watchdog(format!(
                    "top weight did not drop: {} after {}",
                    p.level_to_weight(k),
                    p.level_to_weight(last)
                )));
            }
            last = k;
            let level = self.level(k);
            let mut v = vec![ParamCoeff::zero(self.r); level.columns.len()];
            for (e, c) in cur.terms() {
                if p.mode_level(&e.0) == k {
                    let col = level.column_of(e).expect("level columns cover the level");
                    v[col] = c.clone();
                }
            }
            let combos = level.reduce(&mut v);
            for (col, c) in v.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let e = &level.columns[col];
                let Some(&idx) = self.index.get(e) else {
                    return Err(Error::Watchdog(format!(
                        "irreducible monomial at weight {} outside the basis",
                        p.level_to_weight(k)
                    )));
                };
                remainder[idx].add_scaled(&c, &Rational::from_integer(1.into()));
                cur.add_term(e.clone(), &-&c);
            }
            for ((b, i), c) in combos {
                cofactors[i].add_term(b.clone(), &c);
                cur.add_shifted(&self.gens[i], &b, &-&c);
            }
        }

        let certificates = match &alpha {
            None => Vec::new(),
            Some(alpha) => self.certificates(alpha, &cofactors),
        };
        Ok(DivisionResult {
            alpha,
            remainder,
            cofactors,
            certificates,
        })
    }

    fn certificates(&self, alpha: &Rational, cofactors: &[LaurentPoly]) -> Vec<WeightCertificate> {
        let p = &self.polyhedron;
        let one = Rational::from_integer(1.into());
        let derivative_bound = alpha - &one;
        cofactors
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let da = self.step_operator(a, i);
                let (cofactor_weight, cofactor_bound) = match self.mode {
                    Mode::Laurent => (p.phi(a).map(|w| w.value), derivative_bound.clone()),
                    Mode::Polynomial => {
                        let mut unit = vec![0; self.n];
                        unit[i] = 1;
                        (self.weight_of(a), &derivative_bound + p.weight(&unit))
                    }
                };
                let derivative_weight = self.weight_of(&da);
                let holds = below(&cofactor_weight, &cofactor_bound)
                    && below(&derivative_weight, &derivative_bound);
                WeightCertificate {
                    generator: i,
                    cofactor_weight,
                    cofactor_bound,
                    derivative_weight,
                    derivative_bound: derivative_bound.clone(),
                    holds,
                }
            })
            .collect()
    }
}
