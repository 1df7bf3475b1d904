//! The unfolding hypotheses on `ζ` (the class of `du/u`, resp. `du`):
//! (EC) eigenvector of `B_∞` of unique minimal weight, (IC) independence
//! of the classes `[g_j]`, (GC) `ζ` generates `E₀` under multiplication by
//! the `g_j` and by `f`.
//!
//! Every check runs at `x = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::JacobianSystem;
use crate::matrix::{mat_vec, rank, Span};
use crate::newton::{is_subdiagram, SubdiagramReport};
use crate::polyring::{serialize_rational, ExponentVec, LaurentPoly, Mode, ParamCoeff, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EcReport {
    pub passes: bool,
    /// Weight of `ζ`: 0 on the torus, `φ*(1)` on affine space.
    #[serde(serialize_with = "serialize_rational")]
    pub zeta_weight: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub min_weight: Rational,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IcReport {
    pub passes: bool,
    pub rank: usize,
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcReport {
    pub passes: bool,
    pub dimension: usize,
    pub mu: usize,
    pub include_r0: bool,
    /// Words whose images of `ζ` span the closure, in discovery order.
    pub words: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub ec: EcReport,
    pub ic: IcReport,
    pub gc: GcReport,
    pub subdiagram: Vec<SubdiagramReport>,
}

impl ConditionReport {
    pub fn passes(&self) -> bool {
        self.ec.passes
            && self.ic.passes
            && self.gc.passes
            && self.subdiagram.iter().all(|s| s.passes())
    }
}

fn at_origin(sys: &JacobianSystem) -> Result<JacobianSystem> {
    sys.specialize(&vec![Rational::from_integer(0.into()); sys.nparams()])
}

fn coords(sys: &JacobianSystem, h: &LaurentPoly) -> Result<Vec<Rational>> {
    Ok(sys
        .coordinates(h)?
        .into_iter()
        .map(|c: ParamCoeff| c.as_constant().expect("parameter-free system"))
        .collect())
}

fn multiplication(sys: &JacobianSystem, g: &LaurentPoly) -> Result<Vec<Vec<Rational>>> {
    sys.multiplication_matrix(g)?
        .as_rational()
        .ok_or_else(|| Error::Invalid("multiplier depends on x".into()))
}

pub fn check_ec(sys: &JacobianSystem) -> EcReport {
    let basis = sys.basis();
    let zeta_weight = match sys.mode() {
        Mode::Laurent => Rational::from_integer(0.into()),
        Mode::Polynomial => sys
            .polyhedron()
            .level_to_weight(sys.polyhedron().star_level(&vec![0; sys.nvars()])),
    };
    let min_weight = basis
        .weights
        .iter()
        .min()
        .cloned()
        .unwrap_or_else(|| zeta_weight.clone());
    let multiplicity = basis.weights.iter().filter(|w| **w == min_weight).count();
    let passes = match sys.mode() {
        Mode::Laurent => true,
        Mode::Polynomial => zeta_weight == min_weight && multiplicity == 1,
    };
    EcReport {
        passes,
        zeta_weight,
        min_weight,
        multiplicity,
    }
}

/// Rank of the classes of the `g_j` in `E₀`.
pub fn check_ic(sys: &JacobianSystem, g: &[LaurentPoly]) -> Result<IcReport> {
    let sys0 = at_origin(sys)?;
    let rows = g
        .iter()
        .map(|gj| coords(&sys0, gj))
        .collect::<Result<Vec<_>>>()?;
    let rank = if rows.is_empty() { 0 } else { rank(&rows) };
    Ok(IcReport {
        passes: rank == g.len(),
        rank,
        r: g.len(),
    })
}

/// Krylov closure of `ζ` under multiplication by the `g_j` (and by `f`
/// when `include_r0`).
pub fn check_gc(sys: &JacobianSystem, g: &[LaurentPoly], include_r0: bool) -> Result<GcReport> {
    let sys0 = at_origin(sys)?;
    let mu = sys0.mu();
    let mut ops: Vec<(String, Vec<Vec<Rational>>)> = Vec::new();
    for (j, gj) in g.iter().enumerate() {
        ops.push((format!("g{}", j + 1), multiplication(&sys0, gj)?));
    }
    if include_r0 {
        ops.push(("R0".into(), multiplication(&sys0, sys0.f())?));
    }
    let one = LaurentPoly::one(sys0.nvars(), 0, sys0.mode());
    let zeta = coords(&sys0, &one)?;
    let mut span = Span::new();
    let mut found: Vec<(String, Vec<Rational>)> = Vec::new();
    if span.insert(&zeta) {
        found.push(("zeta".into(), zeta));
    }
    let mut next = 0;
    while next < found.len() && span.dim() < mu {
        let (word, v) = found[next].clone();
        next += 1;
        for (name, m) in &ops {
            let w = mat_vec(m, &v);
            if span.insert(&w) {
                found.push((format!("{name}*{word}"), w));
            }
        }
    }
    let dimension = span.dim();
    Ok(GcReport {
        passes: dimension == mu,
        dimension,
        mu,
        include_r0,
        words: found.into_iter().map(|x| x.0).collect(),
    })
}

pub fn check_conditions(
    sys: &JacobianSystem,
    g: &[LaurentPoly],
    include_r0: bool,
) -> Result<ConditionReport> {
    let subdiagram = g
        .iter()
        .map(|gj| is_subdiagram(gj, sys.polyhedron()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionReport {
        ec: check_ec(sys),
        ic: check_ic(sys, g)?,
        gc: check_gc(sys, g, include_r0)?,
        subdiagram,
    })
}

/// Greedy sub-diagram monomial deformation passing (IC) and (GC), then
/// pruned. Small, not claimed minimal.
pub fn suggest_deformation(sys: &JacobianSystem, include_r0: bool) -> Result<Vec<ExponentVec>> {
    let n = sys.nvars();
    let mode = sys.mode();
    let mono = |e: &ExponentVec| LaurentPoly::monomial(n, 0, mode, e.clone(), ParamCoeff::one(0));
    let mut candidates = Vec::new();
    for e in &sys.basis().monomials {
        if e.0.iter().all(|&k| k == 0) {
            continue;
        }
        if is_subdiagram(&mono(e), sys.polyhedron())?.passes() {
            candidates.push(e.clone());
        }
    }
    let polys = |set: &[ExponentVec]| set.iter().map(mono).collect::<Vec<_>>();
    let mut chosen: Vec<ExponentVec> = Vec::new();
    let mut dim = check_gc(sys, &[], include_r0)?.dimension;
    while dim < sys.mu() {
        let mut best: Option<(usize, ExponentVec)> = None;
        for c in candidates.iter().filter(|c| !chosen.contains(c)) {
            let mut trial = chosen.clone();
            trial.push(c.clone());
            let d = check_gc(sys, &polys(&trial), include_r0)?.dimension;
            if best.as_ref().is_none_or(|b| d > b.0) {
                best = Some((d, c.clone()));
            }
        }
        match best {
            Some((d, c)) if d > dim => {
                chosen.push(c);
                dim = d;
            }
            _ => {
                return Err(Error::Unavailable(format!(
                    "no sub-diagram basis monomials generate E₀ (closure stops at {dim} of {})",
                    sys.mu()
                )))
            }
        }
    }
    let mut k = 0;
    while k < chosen.len() {
        let mut trial = chosen.clone();
        trial.remove(k);
        if check_gc(sys, &polys(&trial), include_r0)?.passes {
            chosen = trial;
        } else {
            k += 1;
        }
    }
    if !check_ic(sys, &polys(&chosen))?.passes {
        return Err(Error::Unavailable(
            "the suggested classes are dependent".into(),
        ));
    }
    Ok(chosen)
}
