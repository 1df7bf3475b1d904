//! The Gauss-Manin connection on the Brieskorn lattice `G₀` in the adapted
//! monomial basis.
//!
//! Columns are images of basis elements. `θ²∇_{∂θ}[m] = [F·m]` splits as
//! `A₀ + A₁θ` and `∇_{∂x_i}[m] = θ⁻¹[−g_i·m]` as `C₋₁⁽ⁱ⁾θ⁻¹ + C₀⁽ⁱ⁾`. A
//! gauge change `P(x)` then removes `C₀⁽ⁱ⁾`, giving `B₀ = P⁻¹A₀P`,
//! `B_∞ = P⁻¹A₁P` and `C⁽ⁱ⁾ = P⁻¹C₋₁⁽ⁱ⁾P`.

mod gauge;
mod integrability;
mod reduce;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jacobi::{JacobianSystem, MilnorBasis};
use crate::matrix::{inverse, ParamMatrix};
use crate::polyring::{ParamCoeff, Rational};

pub use gauge::{c0_integrability_defects, solve_gauge, GaugeTransform};
pub use integrability::{
    check_relations, reconstruct_c_from_b0, IntegrabilityReport, RelationResidual,
};
pub use reduce::{theta_reduce, ThetaExpansion};

/// Where a leftover came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidualSource {
    /// `θ^power` part of `[F·m_column]` with `power ≥ 2`.
    Theta { column: usize, power: usize },
    /// `θ^power` part of `[−g_param·m_column]` with `power ≥ 2`.
    Param {
        param: usize,
        column: usize,
        power: usize,
    },
    /// `B_∞` still depends on `x` after the gauge change.
    NonConstantBinf,
    /// `C₀⁽ⁱ⁾` is nonzero and no gauge change was applied.
    NonzeroC0 { param: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub source: ResidualSource,
    pub coords: Vec<ParamCoeff>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionData {
    pub basis: MilnorBasis,
    pub r: usize,
    /// `θ⁰` part of `θ²∇_{∂θ}`.
    pub b0: ParamMatrix,
    /// `θ¹` part of `θ²∇_{∂θ}`.
    pub binf: ParamMatrix,
    /// `θ⁻¹` parts of `∇_{∂x_i}`.
    pub c: Vec<ParamMatrix>,
    /// `θ⁰` parts of `∇_{∂x_i}`; zero after [`gauge_normalize`].
    pub c0: Vec<ParamMatrix>,
    pub gauge: Option<GaugeTransform>,
    pub birkhoff_ok: bool,
    pub residuals: Vec<Residual>,
}

impl ConnectionData {
    pub fn mu(&self) -> usize {
        self.basis.mu()
    }

    fn refresh_verdict(&mut self) {
        self.residuals.retain(|r| {
            matches!(
                r.source,
                ResidualSource::Theta { .. } | ResidualSource::Param { .. }
            )
        });
        for (i, c) in self.c0.iter().enumerate() {
            if !c.is_zero() {
                self.residuals.push(Residual {
                    source: ResidualSource::NonzeroC0 { param: i },
                    coords: vec![],
                });
            }
        }
        if !self.binf.is_constant() {
            self.residuals.push(Residual {
                source: ResidualSource::NonConstantBinf,
                coords: vec![],
            });
        }
        self.birkhoff_ok = self.residuals.is_empty();
    }

    /// The same data in the basis listed by `order` (new element `k` is old
    /// element `order[k]`).
    pub fn reorder(&self, order: &[usize]) -> ConnectionData {
        let mu = self.mu();
        let mut q = vec![vec![Rational::zero(); mu]; mu];
        for (k, &o) in order.iter().enumerate() {
            q[o][k] = Rational::one();
        }
        let mut out = self
            .change_basis(&q)
            .expect("permutation matrices are invertible");
        out.basis = self.basis.permuted(order);
        out
    }

    /// Conjugate every matrix by a constant change of basis whose columns
    /// are the new basis vectors in old coordinates.
    pub fn change_basis(&self, q: &[Vec<Rational>]) -> Result<ConnectionData> {
        let qi = inverse(q).ok_or_else(|| Error::Invalid("singular change of basis".into()))?;
        let (q, qi) = (
            ParamMatrix::from_rational(q, self.r),
            ParamMatrix::from_rational(&qi, self.r),
        );
        let conj = |m: &ParamMatrix| qi.mul(m).mul(&q);
        Ok(ConnectionData {
            basis: self.basis.clone(),
            r: self.r,
            b0: conj(&self.b0),
            binf: conj(&self.binf),
            c: self.c.iter().map(conj).collect(),
            c0: self.c0.iter().map(conj).collect(),
            gauge: self.gauge.clone(),
            birkhoff_ok: self.birkhoff_ok,
            residuals: self.residuals.clone(),
        })
    }

    /// Substitute `x = point` in every matrix.
    pub fn specialize(&self, point: &[Rational]) -> Result<ConnectionData> {
        let sub = |m: &ParamMatrix| m.substitute(point);
        Ok(ConnectionData {
            basis: self.basis.clone(),
            r: 0,
            b0: sub(&self.b0)?,
            binf: sub(&self.binf)?,
            c: Vec::new(),
            c0: Vec::new(),
            gauge: None,
            birkhoff_ok: self.birkhoff_ok,
            residuals: Vec::new(),
        })
    }
}

/// Pre-gauge connection matrices.
pub fn build_connection(sys: &JacobianSystem) -> Result<ConnectionData> {
    let mu = sys.mu();
    let r = sys.nparams();
    let theta_cols: Vec<ThetaExpansion> = (0..mu)
        .into_par_iter()
        .map(|k| theta_reduce(&sys.big_f().checked_mul(&sys.basis_poly(k))?, sys))
        .collect::<Result<_>>()?;
    let mut residuals = Vec::new();
    for (k, t) in theta_cols.iter().enumerate() {
        for (power, coords) in t.terms.iter().enumerate().skip(2) {
            if coords.iter().any(|c| !c.is_zero()) {
                residuals.push(Residual {
                    source: ResidualSource::Theta { column: k, power },
                    coords: coords.clone(),
                });
            }
        }
    }
    let column = |t: &ThetaExpansion, k: usize| t.coefficient(k, mu, r);
    let b0 = ParamMatrix::from_columns(
        &theta_cols.iter().map(|t| column(t, 0)).collect::<Vec<_>>(),
        mu,
        r,
    );
    let binf = ParamMatrix::from_columns(
        &theta_cols.iter().map(|t| column(t, 1)).collect::<Vec<_>>(),
        mu,
        r,
    );

    let mut c = Vec::with_capacity(r);
    let mut c0 = Vec::with_capacity(r);
    for (j, g) in sys.deformation().iter().enumerate() {
        let minus_g = -&sys.lift(g)?;
        let cols: Vec<ThetaExpansion> = (0..mu)
            .into_par_iter()
            .map(|k| theta_reduce(&minus_g.checked_mul(&sys.basis_poly(k))?, sys))
            .collect::<Result<_>>()?;
        for (k, t) in cols.iter().enumerate() {
            for (power, coords) in t.terms.iter().enumerate().skip(2) {
                if coords.iter().any(|c| !c.is_zero()) {
                    residuals.push(Residual {
                        source: ResidualSource::Param {
                            param: j,
                            column: k,
                            power,
                        },
                        coords: coords.clone(),
                    });
                }
            }
        }
        c.push(ParamMatrix::from_columns(
            &cols.iter().map(|t| column(t, 0)).collect::<Vec<_>>(),
            mu,
            r,
        ));
        c0.push(ParamMatrix::from_columns(
            &cols.iter().map(|t| column(t, 1)).collect::<Vec<_>>(),
            mu,
            r,
        ));
    }
    let mut data = ConnectionData {
        basis: sys.basis().clone(),
        r,
        b0,
        binf,
        c,
        c0,
        gauge: None,
        birkhoff_ok: false,
        residuals,
    };
    data.refresh_verdict();
    Ok(data)
}

/// Apply the gauge change removing `C₀`. Verification is exact.
///
/// With `θ^{≥2}` leftovers the truncated `C₀` need not be integrable; a
/// failed solve then returns the data unchanged (and not a solution).
pub fn gauge_normalize(pre: &ConnectionData) -> Result<ConnectionData> {
    let truncated = pre.residuals.iter().any(|r| {
        matches!(
            r.source,
            ResidualSource::Theta { .. } | ResidualSource::Param { .. }
        )
    });
    let g = match solve_gauge(&pre.c0, &pre.basis.levels) {
        Ok(g) => g,
        Err(Error::Gauge(_)) if truncated => {
            let mut out = pre.clone();
            out.refresh_verdict();
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let conj = |m: &ParamMatrix| g.inverse.mul(m).mul(&g.p);
    let mut out = ConnectionData {
        basis: pre.basis.clone(),
        r: pre.r,
        b0: conj(&pre.b0),
        binf: conj(&pre.binf),
        c: pre.c.iter().map(conj).collect(),
        c0: pre
            .c0
            .iter()
            .map(|m| ParamMatrix::zero(m.rows(), m.cols(), pre.r))
            .collect(),
        gauge: Some(g),
        birkhoff_ok: false,
        residuals: pre.residuals.clone(),
    };
    // New C₀⁽ⁱ⁾ = P⁻¹(C₀⁽ⁱ⁾P + ∂_iP).
    for (i, c0) in pre.c0.iter().enumerate() {
        let g = out.gauge.as_ref().expect("set above");
        out.c0[i] = g.inverse.mul(&c0.mul(&g.p).add(&g.p.derivative(i)));
    }
    out.refresh_verdict();
    Ok(out)
}

/// Build and normalize in one go.
pub fn compute_connection(sys: &JacobianSystem) -> Result<ConnectionData> {
    gauge_normalize(&build_connection(sys)?)
}

pub fn verify_integrability(d: &ConnectionData) -> IntegrabilityReport {
    check_relations(&d.b0, &d.binf, &d.c)
}

/// Diagonal of `B_∞`, sorted. `None` unless the data is a Birkhoff
/// solution with constant `B_∞`.
pub fn spectrum(d: &ConnectionData) -> Option<Vec<Rational>> {
    if !d.birkhoff_ok {
        return None;
    }
    let a = d.binf.as_rational()?;
    let mut s: Vec<Rational> = (0..d.mu()).map(|k| a[k][k].clone()).collect();
    s.sort();
    Some(s)
}
