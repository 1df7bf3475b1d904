//! Flatness relations for `(B₀/θ + B_∞) dθ/θ + Σ C⁽ⁱ⁾/θ dx_i`:
//!
//! * I.1 `∂_j C⁽ⁱ⁾ = ∂_i C⁽ʲ⁾`
//! * I.2 `[C⁽ⁱ⁾, C⁽ʲ⁾] = 0`
//! * I.3 `[B₀, C⁽ⁱ⁾] = 0`
//! * I.4 `∂_i B₀ + C⁽ⁱ⁾ = [B_∞, C⁽ⁱ⁾]`

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::ParamMatrix;
use crate::polyring::Rational;

/// A nonzero residual matrix of one relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationResidual {
    pub relation: &'static str,
    /// Parameter indices involved (0-based).
    pub indices: Vec<usize>,
    pub residual: ParamMatrix,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegrabilityReport {
    pub checked: usize,
    pub residuals: Vec<RelationResidual>,
}

impl IntegrabilityReport {
    pub fn holds(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn failing(&self, relation: &str) -> usize {
        self.residuals
            .iter()
            .filter(|r| r.relation == relation)
            .count()
    }
}

pub fn check_relations(
    b0: &ParamMatrix,
    binf: &ParamMatrix,
    c: &[ParamMatrix],
) -> IntegrabilityReport {
    let mut rep = IntegrabilityReport::default();
    let mut record = |relation: &'static str, indices: Vec<usize>, m: ParamMatrix| {
        rep.checked += 1;
        if !m.is_zero() {
            rep.residuals.push(RelationResidual {
                relation,
                indices,
                residual: m,
            });
        }
    };
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            record(
                "I.1",
                vec![i, j],
                c[i].derivative(j).sub(&c[j].derivative(i)),
            );
            record("I.2", vec![i, j], ParamMatrix::commutator(&c[i], &c[j]));
        }
    }
    for (i, ci) in c.iter().enumerate() {
        record("I.3", vec![i], ParamMatrix::commutator(b0, ci));
        record(
            "I.4",
            vec![i],
            b0.derivative(i)
                .add(ci)
                .sub(&ParamMatrix::commutator(binf, ci)),
        );
    }
    rep
}

/// `C⁽ⁱ⁾` from `B₀` and a constant diagonal `B_∞ = diag(α)` via I.4:
/// `c_kl = −∂_i b_kl / (1 − α_k + α_l)`, and `c_kl = 0` at a resonance
/// `α_k = 1 + α_l` (where `∂_i b_kl` must vanish).
pub fn reconstruct_c_from_b0(b0: &ParamMatrix, binf: &ParamMatrix) -> Result<Vec<ParamMatrix>> {
    let mu = b0.rows();
    let r = b0.nparams();
    let alpha: Vec<Rational> = match binf.as_rational() {
        Some(a) if binf.is_diagonal() => (0..mu).map(|k| a[k][k].clone()).collect(),
        _ => return Err(Error::Invalid("B_∞ must be constant and diagonal".into())),
    };
    let mut out = Vec::with_capacity(r);
    for i in 0..r {
        let db = b0.derivative(i);
        let mut c = ParamMatrix::zero(mu, mu, r);
        for k in 0..mu {
            for l in 0..mu {
                let d = db.get(k, l);
                if d.is_zero() {
                    continue;
                }
                let factor = Rational::one() - &alpha[k] + &alpha[l];
                if factor.is_zero() {
                    return Err(Error::Invalid(format!(
                        "resonance α_{} = 1 + α_{} with nonzero ∂B₀/∂x{}",
                        k + 1,
                        l + 1,
                        i + 1
                    )));
                }
                c.set(k, l, d.scale(&(-factor.recip())));
            }
        }
        out.push(c);
    }
    Ok(out)
}
