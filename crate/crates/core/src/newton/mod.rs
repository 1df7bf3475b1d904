//! Newton polyhedron geometry: facets and their linear forms `L_σ`, the
//! Newton weight `φ` (and its shift `φ*` in polynomial mode), the
//! commode and sub-diagram tests, and the Kouchnirenko number.
//!
//! Weights are rationals with a common denominator `d` (the *quantum*);
//! most callers work with the integer *level* `d·φ`.

mod hull;
mod nondegenerate;
mod volume;

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::{ExponentVec, LaurentPoly, Mode, Rational};

pub use nondegenerate::{is_nondegenerate, Nondegeneracy, DEFAULT_FACE_BUDGET};

/// A Newton-boundary facet: the points `a` with `L(a) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    /// Coefficients of `L_σ`.
    pub normal: Vec<Rational>,
    /// Primitive integer normal `N` with `L_σ = N / offset`.
    pub integer_normal: Vec<i64>,
    pub offset: i64,
    /// Support points (and vertices) lying on the facet.
    pub points: Vec<ExponentVec>,
}

impl Facet {
    pub fn eval(&self, a: &[i32]) -> Rational {
        let s: i64 = self
            .integer_normal
            .iter()
            .zip(a)
            .map(|(x, &y)| x * y as i64)
            .sum();
        Rational::new(s.into(), self.offset.into())
    }
}

/// `φ(g)` together with where the maximum is attained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    #[serde(serialize_with = "crate::polyring::serialize_rational")]
    pub value: Rational,
    pub facet: usize,
    #[serde(serialize_with = "crate::polyring::serialize_exponent")]
    pub monomial: ExponentVec,
}

#[derive(Clone, Debug)]
pub struct NewtonPolyhedron {
    mode: Mode,
    n: usize,
    /// Distinct support points of `f`, plus the origin in polynomial mode.
    points: Vec<ExponentVec>,
    vertices: Vec<ExponentVec>,
    facets: Vec<Facet>,
    /// Point-index sets of every face of the Newton boundary.
    faces: Vec<Vec<usize>>,
    quantum: i64,
    /// `quantum · L_σ`, integral.
    levels: Vec<Vec<i64>>,
}

fn to_i64(e: &ExponentVec) -> Vec<i64> {
    e.0.iter().map(|&k| k as i64).collect()
}

/// Convex hull of the support (with the origin in polynomial mode) and
/// the linear forms of its Newton-boundary facets.
pub fn build_polyhedron(f: &LaurentPoly) -> Result<NewtonPolyhedron> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial(
            "the Newton polyhedron of 0 is empty".into(),
        ));
    }
    if !f.is_parameter_free() {
        return Err(Error::Invalid(
            "Newton weights are computed from f alone (r = 0)".into(),
        ));
    }
    let n = f.nvars();
    let mode = f.mode();
    let mut points: Vec<ExponentVec> = f.support().cloned().collect();
    if mode == Mode::Polynomial && !points.iter().any(|p| p.0.iter().all(|&k| k == 0)) {
        points.push(ExponentVec::zero(n));
    }
    points.sort();
    let raw: Vec<Vec<i64>> = points.iter().map(to_i64).collect();
    let all = hull::facets(&raw)?;

    let mut facets = Vec::new();
    for h in &all {
        if h.offset > 0 {
            facets.push(Facet {
                normal: h
                    .normal
                    .iter()
                    .map(|&x| Rational::new(x.into(), h.offset.into()))
                    .collect(),
                integer_normal: h.normal.clone(),
                offset: h.offset,
                points: h.points.iter().map(|&i| points[i].clone()).collect(),
            });
        } else if mode == Mode::Laurent {
            return Err(Error::NotCommode(format!(
                "the origin is not interior to the Newton polytope: separating facet {}",
                describe_halfspace(&h.normal, h.offset)
            )));
        }
    }

    let vertices: Vec<ExponentVec> = (0..points.len())
        .filter(|&i| {
            let normals: Vec<Vec<i64>> = all
                .iter()
                .filter(|h| h.points.contains(&i))
                .map(|h| h.normal.clone())
                .collect();
            !normals.is_empty() && hull::rank(&normals) == n
        })
        .map(|i| points[i].clone())
        .collect();

    let mut quantum: i64 = 1;
    for f in &facets {
        for c in &f.normal {
            let d: i64 = c.denom().try_into().expect("small denominators");
            quantum = quantum.lcm(&d);
        }
    }
    let levels = facets
        .iter()
        .map(|f| {
            f.integer_normal
                .iter()
                .map(|&x| x * quantum / f.offset)
                .collect()
        })
        .collect();

    let origin = points.iter().position(|p| p.0.iter().all(|&k| k == 0));
    let facet_sets: Vec<Vec<usize>> = all.iter().map(|h| h.points.clone()).collect();
    let faces = face_closure(&facet_sets, origin);

    Ok(NewtonPolyhedron {
        mode,
        n,
        points,
        vertices,
        facets,
        faces,
        quantum,
        levels,
    })
}

/// All nonempty intersections of facet point sets, minus those
/// containing the origin. A face missing the origin lies in some facet
/// missing it, so what remains is exactly the Newton boundary.
fn face_closure(facets: &[Vec<usize>], origin: Option<usize>) -> Vec<Vec<usize>> {
    let mut set: BTreeSet<Vec<usize>> = facets.iter().cloned().collect();
    loop {
        let cur: Vec<Vec<usize>> = set.iter().cloned().collect();
        let mut grew = false;
        for a in &cur {
            for b in &cur {
                let c: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
                if !c.is_empty() && set.insert(c) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    set.into_iter()
        .filter(|s| origin.is_none_or(|o| !s.contains(&o)))
        .collect()
}

fn describe_halfspace(normal: &[i64], offset: i64) -> String {
    let terms: Vec<String> = normal
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{c}*a{}", i + 1))
        .collect();
    format!("{} <= {offset}", terms.join(" + "))
}

impl NewtonPolyhedron {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[ExponentVec] {
        &self.vertices
    }

    /// Newton-boundary facets (those not through the origin).
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Common denominator of all facet forms.
    pub fn quantum(&self) -> i64 {
        self.quantum
    }

    /// Faces of the Newton boundary, each as its list of support points.
    pub fn faces(&self) -> Vec<Vec<ExponentVec>> {
        self.faces
            .iter()
            .map(|s| s.iter().map(|&i| self.points[i].clone()).collect())
            .collect()
    }

    /// `quantum · φ(u^a)` and the facet attaining it.
    pub fn level_with_facet(&self, a: &[i32]) -> (i64, usize) {
        let mut best = (i64::MIN, 0);
        for (k, w) in self.levels.iter().enumerate() {
            let v: i64 = w.iter().zip(a).map(|(x, &y)| x * y as i64).sum();
            if v > best.0 {
                best = (v, k);
            }
        }
        best
    }

    /// `quantum · φ(u^a)`.
    pub fn level(&self, a: &[i32]) -> i64 {
        self.level_with_facet(a).0
    }

    /// `quantum · φ*(u^a) = quantum · φ(u1⋯un·u^a)`.
    pub fn star_level(&self, a: &[i32]) -> i64 {
        let shifted: Vec<i32> = a.iter().map(|k| k + 1).collect();
        self.level(&shifted)
    }

    /// Weight of a basis monomial in the mode's own convention: `φ` for
    /// Laurent, `φ*` for polynomial.
    pub fn mode_level(&self, a: &[i32]) -> i64 {
        match self.mode {
            Mode::Laurent => self.level(a),
            Mode::Polynomial => self.star_level(a),
        }
    }

    pub fn level_to_weight(&self, level: i64) -> Rational {
        Rational::new(level.into(), self.quantum.into())
    }

    pub fn weight(&self, a: &[i32]) -> Rational {
        self.level_to_weight(self.level(a))
    }

    /// `φ(g) = max over monomials of g of max over facets of L_σ`. `None`
    /// for `g = 0` (weight −∞).
    pub fn phi(&self, g: &LaurentPoly) -> Option<WeightReport> {
        let mut best: Option<(i64, usize, &ExponentVec)> = None;
        for e in g.support() {
            let (v, k) = self.level_with_facet(&e.0);
            if best.is_none_or(|b| v > b.0) {
                best = Some((v, k, e));
            }
        }
        best.map(|(v, k, e)| WeightReport {
            value: self.level_to_weight(v),
            facet: k,
            monomial: e.clone(),
        })
    }

    /// `φ*(g) = φ(u1⋯un·g)`; polynomial mode only.
    pub fn phi_star(&self, g: &LaurentPoly) -> Result<Option<WeightReport>> {
        if self.mode != Mode::Polynomial {
            return Err(Error::WrongMode(
                "phi_star is defined in polynomial mode".into(),
            ));
        }
        let mut best: Option<(i64, usize, &ExponentVec)> = None;
        for e in g.support() {
            let shifted: Vec<i32> = e.0.iter().map(|k| k + 1).collect();
            let (v, k) = self.level_with_facet(&shifted);
            if best.is_none_or(|b| v > b.0) {
                best = Some((v, k, e));
            }
        }
        Ok(best.map(|(v, k, e)| WeightReport {
            value: self.level_to_weight(v),
            facet: k,
            monomial: e.clone(),
        }))
    }

    /// Kouchnirenko's number. Laurent: `n!·vol(P)`. Polynomial:
    /// `Σ_k (−1)^{n−k} k!·V_k` over coordinate subspaces, `V_0 = 1`.
    pub fn newton_number(&self) -> Result<u64> {
        let fact = |k: usize| -> Rational {
            Rational::from_integer((1..=k as i64).product::<i64>().into())
        };
        let nu = match self.mode {
            Mode::Laurent => {
                let raw: Vec<Vec<i64>> = self.points.iter().map(to_i64).collect();
                fact(self.n) * volume::volume(&raw)?
            }
            Mode::Polynomial => {
                for i in 0..self.n {
                    if !self.points.iter().any(|p| on_axis(p, i)) {
                        return Err(Error::NotCommode(format!(
                            "no support point on the u{} axis",
                            i + 1
                        )));
                    }
                }
                let mut total = Rational::zero();
                for mask in 0u32..(1 << self.n) {
                    let coords: Vec<usize> = (0..self.n).filter(|&i| mask >> i & 1 == 1).collect();
                    let k = coords.len();
                    let vk = if k == 0 {
                        Rational::one()
                    } else {
                        let sect: Vec<Vec<i64>> = self
                            .points
                            .iter()
                            .filter(|p| (0..self.n).all(|i| coords.contains(&i) || p.0[i] == 0))
                            .map(|p| coords.iter().map(|&i| p.0[i] as i64).collect())
                            .collect();
                        volume::volume(&sect)?
                    };
                    let term = fact(k) * vk;
                    if (self.n - k) % 2 == 0 {
                        total += term;
                    } else {
                        total -= term;
                    }
                }
                total
            }
        };
        if !nu.is_integer() || nu < Rational::zero() {
            return Err(Error::Invalid(format!("Newton number came out as {nu}")));
        }
        Ok(nu.to_integer().try_into().expect("fits in u64"))
    }
}

fn on_axis(p: &ExponentVec, i: usize) -> bool {
    p.0[i] > 0 && p.0.iter().enumerate().all(|(j, &k)| j == i || k == 0)
}

/// Outcome of the commode test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommodeVerdict {
    pub commode: bool,
    pub diagnostic: Option<String>,
}

/// Laurent: the origin is interior to the Newton polytope. Polynomial:
/// every coordinate axis carries a support point other than 0.
pub fn is_commode(f: &LaurentPoly) -> Result<CommodeVerdict> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("commodeness of 0".into()));
    }
    let fail = |d: String| {
        Ok(CommodeVerdict {
            commode: false,
            diagnostic: Some(d),
        })
    };
    match f.mode() {
        Mode::Polynomial => {
            for i in 0..f.nvars() {
                if !f.support().any(|p| on_axis(p, i)) {
                    return fail(format!("no support point on the u{} axis", i + 1));
                }
            }
            Ok(CommodeVerdict {
                commode: true,
                diagnostic: None,
            })
        }
        Mode::Laurent => match build_polyhedron(&f.at_origin()) {
            Ok(_) => Ok(CommodeVerdict {
                commode: true,
                diagnostic: None,
            }),
            Err(Error::NotCommode(d)) => fail(d),
            Err(Error::NotFullDimensional) => fail("the support is not full-dimensional".into()),
            Err(e) => Err(e),
        },
    }
}

/// Sub-diagram verdicts for one deformation polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdiagramReport {
    /// `φ(g)`; `None` for `g = 0`.
    pub phi: Option<WeightReport>,
    /// `φ(g) < 1`.
    pub below_one: bool,
    /// Polynomial mode: `max_i (φ(∂g/∂u_i) + φ(u_i))`, which must be `< 1`
    /// for the parametric division.
    #[serde(serialize_with = "crate::polyring::serialize_opt_rational")]
    pub division_bound: Option<Rational>,
    pub division_ok: Option<bool>,
    /// Polynomial mode: `φ*(g) < 1 − max_i φ(u_i)` (sufficient for IC).
    #[serde(serialize_with = "crate::polyring::serialize_opt_rational")]
    pub strong_phi_star: Option<Rational>,
    #[serde(serialize_with = "crate::polyring::serialize_opt_rational")]
    pub strong_bound: Option<Rational>,
    pub strong_ok: Option<bool>,
}

impl SubdiagramReport {
    /// The conditions the pipeline relies on.
    pub fn passes(&self) -> bool {
        self.below_one && self.division_ok.unwrap_or(true)
    }
}

pub fn is_subdiagram(g: &LaurentPoly, p: &NewtonPolyhedron) -> Result<SubdiagramReport> {
    let phi = p.phi(g);
    let one = Rational::one();
    let below_one = phi.as_ref().is_none_or(|w| w.value < one);
    let mut rep = SubdiagramReport {
        phi,
        below_one,
        division_bound: None,
        division_ok: None,
        strong_phi_star: None,
        strong_bound: None,
        strong_ok: None,
    };
    if p.mode() == Mode::Polynomial && !g.is_zero() {
        let n = p.dim();
        let unit_w = |i: usize| p.weight(&ExponentVec::unit(n, i).0);
        let mut bound: Option<Rational> = None;
        for i in 0..n {
            let d = g.partial_derivative(i)?;
            if let Some(w) = p.phi(&d) {
                let v = w.value + unit_w(i);
                if bound.as_ref().is_none_or(|b| v > *b) {
                    bound = Some(v);
                }
            }
        }
        rep.division_ok = Some(bound.as_ref().is_none_or(|b| *b < one));
        rep.division_bound = bound;
        let max_u = (0..n).map(unit_w).max().unwrap();
        let star = p.phi_star(g)?.expect("nonzero").value;
        let sb = &one - max_u;
        rep.strong_ok = Some(star < sb);
        rep.strong_phi_star = Some(star);
        rep.strong_bound = Some(sb);
    }
    Ok(rep)
}
