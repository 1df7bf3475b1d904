//! Gauge change killing the `θ⁰` part of the `x`-connection.
//!
//! `P` solves `∂P/∂x_i = −C₀⁽ⁱ⁾P` with `P(0) = Id`. Contracting with the
//! Euler field gives `d·P_d = −Σ_k M_k P_{d−k}` for the homogeneous parts,
//! where `M = Σ x_i C₀⁽ⁱ⁾`; the inverse satisfies `d·Q_d = Σ_k Q_{d−k} M_k`.
//! Strict weight-triangularity of the `C₀⁽ⁱ⁾` bounds the degree of `P` by
//! `(μ−1)(D+1)`, `D` the largest x-degree among them.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::ParamMatrix;
use crate::polyring::{ParamCoeff, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeTransform {
    pub p: ParamMatrix,
    pub inverse: ParamMatrix,
}

impl GaugeTransform {
    pub fn identity(mu: usize, r: usize) -> Self {
        GaugeTransform {
            p: ParamMatrix::identity(mu, r),
            inverse: ParamMatrix::identity(mu, r),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.p == ParamMatrix::identity(self.p.rows(), self.p.nparams())
    }

    /// Exact checks of `P(0) = Id`, `P·P⁻¹ = Id` and `∂_iP = −C₀⁽ⁱ⁾P`.
    pub fn verify(&self, c0: &[ParamMatrix]) -> bool {
        let mu = self.p.rows();
        let r = self.p.nparams();
        let origin = vec![Rational::zero(); r];
        let id0 = ParamMatrix::identity(mu, 0);
        let id = ParamMatrix::identity(mu, r);
        self.p.substitute(&origin).is_ok_and(|p0| p0 == id0)
            && self.p.mul(&self.inverse) == id
            && self.inverse.mul(&self.p) == id
            && c0
                .iter()
                .enumerate()
                .all(|(i, c)| self.p.derivative(i) == c.mul(&self.p).neg())
    }
}

/// `∂_iC₀⁽ʲ⁾ − ∂_jC₀⁽ⁱ⁾ − [C₀⁽ʲ⁾, C₀⁽ⁱ⁾]` for every `i < j` that is nonzero.
pub fn c0_integrability_defects(c0: &[ParamMatrix]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..c0.len() {
        for j in i + 1..c0.len() {
            let lhs = c0[j].derivative(i).sub(&c0[i].derivative(j));
            if lhs != ParamMatrix::commutator(&c0[j], &c0[i]) {
                out.push((i, j));
            }
        }
    }
    out
}

fn homogeneous(m: &ParamMatrix, d: u32) -> ParamMatrix {
    m.map(|c| c.homogeneous_part(d))
}

/// Solve for `P` and `P⁻¹`. `levels` are the basis weights (times the
/// quantum) used to check strict triangularity.
pub fn solve_gauge(c0: &[ParamMatrix], levels: &[i64]) -> Result<GaugeTransform> {
    let mu = levels.len();
    let r = c0.len();
    if c0.iter().all(|c| c.is_zero()) {
        return Ok(GaugeTransform::identity(mu, r));
    }
    for (i, c) in c0.iter().enumerate() {
        for row in 0..mu {
            for col in 0..mu {
                if !c.get(row, col).is_zero() && levels[row] >= levels[col] {
                    return Err(Error::Gauge(format!(
                        "C₀ for x{} has entry ({}, {}) that does not lower the weight",
                        i + 1,
                        row + 1,
                        col + 1
                    )));
                }
            }
        }
    }
    let defects = c0_integrability_defects(c0);
    if let Some((i, j)) = defects.first() {
        return Err(Error::Gauge(format!(
            "C₀ for x{} and x{} fail the integrability condition",
            i + 1,
            j + 1
        )));
    }

    let mut m = ParamMatrix::zero(mu, mu, r);
    for (i, c) in c0.iter().enumerate() {
        m = m.add(&c.map(|a| a * &ParamCoeff::param(r, i)));
    }
    let big_d = c0
        .iter()
        .filter_map(|c| c.max_param_degree())
        .max()
        .unwrap_or(0);
    let bound = (mu as u32 - 1) * (big_d + 1);
    let parts: Vec<ParamMatrix> = (0..=bound).map(|k| homogeneous(&m, k)).collect();

    let mut p_parts = vec![ParamMatrix::identity(mu, r)];
    let mut q_parts = vec![ParamMatrix::identity(mu, r)];
    for d in 1..=bound as usize {
        let mut pd = ParamMatrix::zero(mu, mu, r);
        let mut qd = ParamMatrix::zero(mu, mu, r);
        for k in 1..=d {
            if parts[k].is_zero() {
                continue;
            }
            pd = pd.sub(&parts[k].mul(&p_parts[d - k]));
            qd = qd.add(&q_parts[d - k].mul(&parts[k]));
        }
        let inv = Rational::one() / Rational::from_integer((d as i64).into());
        p_parts.push(pd.scale(&inv));
        q_parts.push(qd.scale(&inv));
    }
    let sum = |v: &[ParamMatrix]| {
        v.iter()
            .fold(ParamMatrix::zero(mu, mu, r), |acc, x| acc.add(x))
    };
    let gauge = GaugeTransform {
        p: sum(&p_parts),
        inverse: sum(&q_parts),
    };
    if !gauge.verify(c0) {
        return Err(Error::Gauge(format!(
            "no polynomial solution of degree ≤ {bound}"
        )));
    }
    Ok(gauge)
}
