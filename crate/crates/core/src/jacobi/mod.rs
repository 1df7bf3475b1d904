//! The Milnor algebra `E₀ = Ω^n(U)/df∧Ω^{n−1}(U)` and the parametric
//! division by the Jacobian generators of `F = f + Σ x_j g_j`.
//!
//! Generators are `u_i ∂F/∂u_i` on the torus and `∂F/∂u_i` on affine
//! space. The Gröbner basis of the `x = 0` ideal gives `μ` and serves as
//! an oracle; the division itself runs level by level on the Newton
//! filtration (see [`ladder`]), which is what yields the weight bounds on
//! the cofactors.

mod divide;
mod ladder;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::groebner::{JacobianIdeal, TermOrder};
use crate::matrix::ParamMatrix;
use crate::newton::{
    build_polyhedron, is_commode, is_nondegenerate, is_subdiagram, NewtonPolyhedron, Nondegeneracy,
    SubdiagramReport, DEFAULT_FACE_BUDGET,
};
use crate::polyring::{ExponentVec, LaurentPoly, Mode, ParamCoeff, Rational};

pub use divide::{DivisionResult, WeightCertificate};
use ladder::Level;

/// Budgets and overrides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Reduction steps for the Gröbner basis of the Jacobian ideal.
    pub gb_budget: u64,
    /// Reduction steps per face in the nondegeneracy test.
    pub face_budget: u64,
    /// Skip the nondegeneracy test.
    pub assume_nondegenerate: bool,
}

pub const DEFAULT_GB_BUDGET: u64 = 1_000_000;

impl Default for Config {
    fn default() -> Self {
        Config {
            gb_budget: DEFAULT_GB_BUDGET,
            face_budget: DEFAULT_FACE_BUDGET,
            assume_nondegenerate: false,
        }
    }
}

/// Weight-adapted monomial basis of `E₀`, sorted by weight and then by
/// descending lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorBasis {
    pub mode: Mode,
    pub n: usize,
    pub quantum: i64,
    pub monomials: Vec<ExponentVec>,
    /// `quantum · weight`.
    pub levels: Vec<i64>,
    /// `φ` (Laurent) or `φ*` (polynomial) of each monomial.
    pub weights: Vec<Rational>,
}

impl MilnorBasis {
    pub fn mu(&self) -> usize {
        self.monomials.len()
    }

    pub fn index_of(&self, e: &ExponentVec) -> Option<usize> {
        self.monomials.iter().position(|m| m == e)
    }

    /// `weights_k + weights_{μ+1−k} = n` for every `k`.
    pub fn is_spectrum_symmetric(&self) -> bool {
        let n = Rational::from_integer((self.n as i64).into());
        let mu = self.mu();
        (0..mu).all(|k| &self.weights[k] + &self.weights[mu - 1 - k] == n)
    }

    /// A copy with the elements listed in `order`.
    pub fn permuted(&self, order: &[usize]) -> MilnorBasis {
        MilnorBasis {
            mode: self.mode,
            n: self.n,
            quantum: self.quantum,
            monomials: order.iter().map(|&i| self.monomials[i].clone()).collect(),
            levels: order.iter().map(|&i| self.levels[i]).collect(),
            weights: order.iter().map(|&i| self.weights[i].clone()).collect(),
        }
    }
}

/// Everything needed to divide by the Jacobian generators of `F`.
#[derive(Debug)]
pub struct JacobianSystem {
    mode: Mode,
    n: usize,
    r: usize,
    f: LaurentPoly,
    deformation: Vec<LaurentPoly>,
    big_f: LaurentPoly,
    gens_f: Vec<LaurentPoly>,
    gens: Vec<LaurentPoly>,
    polyhedron: Arc<NewtonPolyhedron>,
    ideal: Arc<JacobianIdeal>,
    basis: MilnorBasis,
    index: HashMap<ExponentVec, usize>,
    nondegeneracy: Nondegeneracy,
    subdiagram: Vec<SubdiagramReport>,
    levels: Arc<Mutex<HashMap<i64, Arc<Level>>>>,
}

fn generators(p: &LaurentPoly) -> Result<Vec<LaurentPoly>> {
    let n = p.nvars();
    match p.mode() {
        Mode::Laurent => Ok((0..n).map(|i| p.log_derivative(i)).collect()),
        Mode::Polynomial => (0..n).map(|i| p.partial_derivative(i)).collect(),
    }
}

/// `f + Σ x_j g_j` with `r = deformation.len()` parameters.
pub fn deformed(f: &LaurentPoly, deformation: &[LaurentPoly]) -> Result<LaurentPoly> {
    let r = deformation.len();
    let mut big = f.with_params(r)?;
    for (j, g) in deformation.iter().enumerate() {
        let xg = g.with_params(r)?.scale_param(&ParamCoeff::param(r, j));
        big = big.checked_add(&xg)?;
    }
    Ok(big)
}

impl JacobianSystem {
    /// Check the standing hypotheses on `f` and the `g_j`, then build the
    /// Gröbner basis and the adapted basis.
    pub fn new(f: &LaurentPoly, deformation: &[LaurentPoly], cfg: &Config) -> Result<Self> {
        if f.nparams() != 0 || deformation.iter().any(|g| g.nparams() != 0) {
            return Err(Error::Invalid(
                "f and the g_j must not involve parameters".into(),
            ));
        }
        let n = f.nvars();
        let mode = f.mode();
        if deformation
            .iter()
            .any(|g| g.nvars() != n || g.mode() != mode)
        {
            return Err(Error::DimensionMismatch(
                "deformation polynomials must match f".into(),
            ));
        }
        let verdict = is_commode(f)?;
        if !verdict.commode {
            return Err(Error::NotCommode(verdict.diagnostic.unwrap_or_default()));
        }
        let polyhedron = build_polyhedron(f)?;

        let nondegeneracy = if cfg.assume_nondegenerate {
            Nondegeneracy::Nondegenerate
        } else {
            match is_nondegenerate(f, &polyhedron, cfg.face_budget) {
                Nondegeneracy::Degenerate { face } => {
                    return Err(Error::Degenerate(format!(
                        "face polynomial {face} has a critical point on the torus"
                    )))
                }
                Nondegeneracy::Unknown { .. } => {
                    return Err(Error::BudgetExceeded(cfg.face_budget))
                }
                ok => ok,
            }
        };

        let mut subdiagram = Vec::new();
        for (j, g) in deformation.iter().enumerate() {
            let rep = is_subdiagram(g, &polyhedron)?;
            if !rep.passes() {
                let phi = rep
                    .phi
                    .as_ref()
                    .map(|w| w.value.to_string())
                    .unwrap_or_else(|| "-inf".into());
                let extra = match (&rep.division_bound, rep.division_ok) {
                    (Some(b), Some(false)) => format!(", max_i φ(∂g/∂u_i) + φ(u_i) = {b} ≥ 1"),
                    _ => String::new(),
                };
                return Err(Error::NotSubdiagram(format!(
                    "g{} = {g}: φ(g) = {phi}{extra}",
                    j + 1
                )));
            }
            subdiagram.push(rep);
        }

        let order = match (mode, polyhedron.facets()) {
            (Mode::Polynomial, [only]) => TermOrder::Weighted(only.integer_normal.clone()),
            _ => TermOrder::Grevlex,
        };
        let ideal = JacobianIdeal::new(f, order, true, cfg.gb_budget)?;
        let mu = ideal.dimension()?;

        let r = deformation.len();
        let big_f = deformed(f, deformation)?;
        let mut sys = JacobianSystem {
            mode,
            n,
            r,
            f: f.clone(),
            deformation: deformation.to_vec(),
            gens_f: generators(f)?,
            gens: generators(&big_f)?,
            big_f,
            polyhedron: Arc::new(polyhedron),
            ideal: Arc::new(ideal),
            basis: MilnorBasis {
                mode,
                n,
                quantum: 1,
                monomials: vec![],
                levels: vec![],
                weights: vec![],
            },
            index: HashMap::new(),
            nondegeneracy,
            subdiagram,
            levels: Arc::new(Mutex::new(HashMap::new())),
        };
        sys.basis = sys.adapted_basis();
        if sys.basis.mu() != mu {
            return Err(Error::Degenerate(format!(
                "the Newton-graded basis has {} elements but dim E₀ = {mu}",
                sys.basis.mu()
            )));
        }
        sys.index = sys
            .basis
            .monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        Ok(sys)
    }

    fn adapted_basis(&self) -> MilnorBasis {
        let p = &self.polyhedron;
        let top = self.n as i64 * p.quantum();
        let mut items: Vec<(i64, ExponentVec)> = Vec::new();
        for k in 0..=top {
            let level = self.level(k);
            for &c in &level.free {
                items.push((k, level.columns[c].clone()));
            }
        }
        items.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
        MilnorBasis {
            mode: self.mode,
            n: self.n,
            quantum: p.quantum(),
            levels: items.iter().map(|x| x.0).collect(),
            weights: items.iter().map(|x| p.level_to_weight(x.0)).collect(),
            monomials: items.into_iter().map(|x| x.1).collect(),
        }
    }

    pub(crate) fn level(&self, k: i64) -> Arc<Level> {
        if let Some(l) = self.levels.lock().expect("level cache").get(&k) {
            return l.clone();
        }
        let built = Arc::new(Level::build(&self.polyhedron, &self.gens_f, k));
        self.levels
            .lock()
            .expect("level cache")
            .entry(k)
            .or_insert(built)
            .clone()
    }

    /// The same system for `F(·, x°)`: no parameters, same basis and
    /// level tables.
    pub fn specialize(&self, point: &[Rational]) -> Result<JacobianSystem> {
        let big_f = self.big_f.substitute_params(point)?;
        Ok(JacobianSystem {
            mode: self.mode,
            n: self.n,
            r: 0,
            f: self.f.clone(),
            deformation: Vec::new(),
            gens_f: self.gens_f.clone(),
            gens: generators(&big_f)?,
            big_f,
            polyhedron: self.polyhedron.clone(),
            ideal: self.ideal.clone(),
            basis: self.basis.clone(),
            index: self.index.clone(),
            nondegeneracy: self.nondegeneracy.clone(),
            subdiagram: Vec::new(),
            levels: self.levels.clone(),
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn nparams(&self) -> usize {
        self.r
    }

    /// The `x = 0` polynomial.
    pub fn f(&self) -> &LaurentPoly {
        &self.f
    }

    pub fn deformation(&self) -> &[LaurentPoly] {
        &self.deformation
    }

    /// `F = f + Σ x_j g_j`.
    pub fn big_f(&self) -> &LaurentPoly {
        &self.big_f
    }

    /// Generators of the Jacobian ideal of `F` over `ℚ[x]`.
    pub fn generators(&self) -> &[LaurentPoly] {
        &self.gens
    }

    pub fn polyhedron(&self) -> &NewtonPolyhedron {
        &self.polyhedron
    }

    pub fn ideal(&self) -> &JacobianIdeal {
        &self.ideal
    }

    pub fn basis(&self) -> &MilnorBasis {
        &self.basis
    }

    pub fn mu(&self) -> usize {
        self.basis.mu()
    }

    pub fn nondegeneracy(&self) -> &Nondegeneracy {
        &self.nondegeneracy
    }

    pub fn subdiagram(&self) -> &[SubdiagramReport] {
        &self.subdiagram
    }

    /// Embed a parameter-free polynomial among polynomials in `x1..xr`.
    pub fn lift(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        if p.nparams() == self.r {
            return Ok(p.clone());
        }
        p.with_params(self.r)
    }

    /// `D_i`: `u_i∂/∂u_i` (Laurent) or `∂/∂u_i` (polynomial).
    pub fn step_operator(&self, p: &LaurentPoly, i: usize) -> LaurentPoly {
        match self.mode {
            Mode::Laurent => p.log_derivative(i),
            Mode::Polynomial => p.partial_derivative(i).expect("polynomial mode"),
        }
    }

    /// Weight of `h` in the mode's convention (`φ` or `φ*`).
    pub fn weight_of(&self, h: &LaurentPoly) -> Option<Rational> {
        match self.mode {
            Mode::Laurent => self.polyhedron.phi(h).map(|w| w.value),
            Mode::Polynomial => self
                .polyhedron
                .phi_star(h)
                .expect("polynomial mode")
                .map(|w| w.value),
        }
    }

    /// Basis element `k` as a polynomial with `r` parameters.
    pub fn basis_poly(&self, k: usize) -> LaurentPoly {
        LaurentPoly::monomial(
            self.n,
            self.r,
            self.mode,
            self.basis.monomials[k].clone(),
            ParamCoeff::one(self.r),
        )
    }

    /// `Σ v_k · m_k`.
    pub fn from_coordinates(&self, v: &[ParamCoeff]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.n, self.r, self.mode);
        for (k, c) in v.iter().enumerate() {
            out = &out + &self.basis_poly(k).scale_param(c);
        }
        out
    }

    /// Matrix of multiplication by `g` on `E₀` over `ℚ[x]`: column `k`
    /// holds the coordinates of the class of `g·m_k`.
    pub fn multiplication_matrix(&self, g: &LaurentPoly) -> Result<ParamMatrix> {
        let g = self.lift(g)?;
        let mut cols = Vec::with_capacity(self.mu());
        for k in 0..self.mu() {
            let h = g.checked_mul(&self.basis_poly(k))?;
            cols.push(self.divide(&h)?.remainder);
        }
        Ok(ParamMatrix::from_columns(&cols, self.mu(), self.r))
    }

    /// Coordinates of the class of `h` in `E₀` (the division remainder).
    pub fn coordinates(&self, h: &LaurentPoly) -> Result<Vec<ParamCoeff>> {
        Ok(self.divide(&self.lift(h)?)?.remainder)
    }
}

/// `dim E₀` from the Gröbner basis of `f` (parameter-free).
pub fn milnor_number(f: &LaurentPoly, cfg: &Config) -> Result<usize> {
    let order = TermOrder::Grevlex;
    JacobianIdeal::new(f, order, false, cfg.gb_budget)?.dimension()
}

/// The weight-adapted basis of `E₀` for `f` alone.
pub fn e0_basis(f: &LaurentPoly, cfg: &Config) -> Result<MilnorBasis> {
    Ok(JacobianSystem::new(f, &[], cfg)?.basis().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn poly(s: &str, n: usize) -> LaurentPoly {
        parse_poly(s, n, 0, Mode::Polynomial).unwrap()
    }

    fn laurent(s: &str, n: usize) -> LaurentPoly {
        parse_poly(s, n, 0, Mode::Laurent).unwrap()
    }

    #[test]
    fn golden_basis() {
        let b = e0_basis(&poly("u1^5 + u2^5", 2), &Config::default()).unwrap();
        assert_eq!(b.mu(), 16);
        let listed = [
            (0, 0),
            (1, 0),
            (0, 1),
            (2, 0),
            (1, 1),
            (0, 2),
            (3, 0),
            (2, 1),
            (1, 2),
            (0, 3),
            (3, 1),
            (2, 2),
            (1, 3),
            (3, 2),
            (2, 3),
            (3, 3),
        ];
        for (k, (i, j)) in listed.iter().enumerate() {
            assert_eq!(b.monomials[k], ExponentVec(vec![*i, *j]));
            assert_eq!(b.weights[k], q((i + j + 2) as i64, 5));
        }
        assert!(b.is_spectrum_symmetric());
    }

    #[test]
    fn small_bases() {
        let b = e0_basis(&poly("u1^3", 1), &Config::default()).unwrap();
        assert_eq!(
            b.monomials,
            vec![ExponentVec(vec![0]), ExponentVec(vec![1])]
        );
        assert_eq!(b.weights, vec![q(1, 3), q(2, 3)]);
        let b = e0_basis(&laurent("u1 + u1^-1", 1), &Config::default()).unwrap();
        assert_eq!(
            b.monomials,
            vec![ExponentVec(vec![0]), ExponentVec(vec![1])]
        );
        assert_eq!(b.weights, vec![q(0, 1), q(1, 1)]);
        let b = e0_basis(&laurent("u1 + u2 + u1^-1*u2^-1", 2), &Config::default()).unwrap();
        assert_eq!(b.weights, vec![q(0, 1), q(1, 1), q(2, 1)]);
    }

    #[test]
    fn milnor_numbers() {
        let cfg = Config::default();
        assert_eq!(milnor_number(&poly("u1^5 + u2^5", 2), &cfg).unwrap(), 16);
        assert_eq!(milnor_number(&poly("u1^3", 1), &cfg).unwrap(), 2);
        assert_eq!(milnor_number(&laurent("u1 + u1^-1", 1), &cfg).unwrap(), 2);
    }

    #[test]
    fn multiplication_by_u1_shifts() {
        let sys = JacobianSystem::new(&poly("u1^5 + u2^5", 2), &[], &Config::default()).unwrap();
        let m = sys.multiplication_matrix(&poly("u1", 2)).unwrap();
        let b = sys.basis();
        for k in 0..16 {
            let e = &b.monomials[k];
            let col = m.column(k);
            if e.0[0] < 3 {
                let target = b.index_of(&ExponentVec(vec![e.0[0] + 1, e.0[1]])).unwrap();
                for (i, c) in col.iter().enumerate() {
                    assert_eq!(c.is_zero(), i != target);
                }
            } else {
                assert!(col.iter().all(|c| c.is_zero()));
            }
        }
        let id = sys
            .multiplication_matrix(&LaurentPoly::one(2, 0, Mode::Polynomial))
            .unwrap();
        assert_eq!(id, ParamMatrix::identity(16, 0));
    }

    #[test]
    fn critical_values_of_u_plus_inverse() {
        let f = laurent("u1 + u1^-1", 1);
        let sys = JacobianSystem::new(&f, &[], &Config::default()).unwrap();
        let m = sys
            .multiplication_matrix(&f)
            .unwrap()
            .as_rational()
            .unwrap();
        // [[0, 2], [2, 0]]: eigenvalues ±2
        assert_eq!(m, vec![vec![q(0, 1), q(2, 1)], vec![q(2, 1), q(0, 1)]]);
    }

    #[test]
    fn hypotheses_are_enforced() {
        let cfg = Config::default();
        assert!(matches!(
            JacobianSystem::new(&poly("u1^5 + u1*u2", 2), &[], &cfg),
            Err(Error::NotCommode(_))
        ));
        let f = poly("u1^5 + u2^5", 2);
        assert!(matches!(
            JacobianSystem::new(&f, &[poly("u1^5", 2)], &cfg),
            Err(Error::NotSubdiagram(_))
        ));
        assert!(matches!(
            JacobianSystem::new(&poly("(u1 + u2)^2 + u3^2", 3), &[], &cfg),
            Err(Error::Degenerate(_))
        ));
    }
}
