use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{grlex_cmp, push_signed_term, ExponentVec, Mode, ParamCoeff, Rational, VarNames};
use crate::error::{Error, Result};

/// Sparse (Laurent) polynomial in `u1..un` whose coefficients are
/// polynomials in `x1..xr`.
///
/// Canonical form: no zero coefficient stored, every key has length `n`,
/// and in polynomial mode every exponent is nonnegative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    n: usize,
    r: usize,
    mode: Mode,
    terms: BTreeMap<ExponentVec, ParamCoeff>,
}

impl LaurentPoly {
    pub fn zero(n: usize, r: usize, mode: Mode) -> Self {
        LaurentPoly {
            n,
            r,
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, r: usize, mode: Mode, c: Rational) -> Self {
        Self::monomial(n, r, mode, ExponentVec::zero(n), ParamCoeff::constant(r, c))
    }

    pub fn one(n: usize, r: usize, mode: Mode) -> Self {
        Self::constant(n, r, mode, Rational::one())
    }

    /// `coeff * u^exp`. Panics on a negative exponent in polynomial mode.
    pub fn monomial(n: usize, r: usize, mode: Mode, exp: ExponentVec, coeff: ParamCoeff) -> Self {
        assert_eq!(exp.len(), n);
        assert_eq!(coeff.nparams(), r);
        assert!(
            mode == Mode::Laurent || exp.is_nonnegative(),
            "negative exponent in polynomial mode"
        );
        let mut p = Self::zero(n, r, mode);
        if !coeff.is_zero() {
            p.terms.insert(exp, coeff);
        }
        p
    }

    /// `u_{i+1}` (zero-based `i`).
    pub fn var(n: usize, r: usize, mode: Mode, i: usize) -> Self {
        Self::monomial(n, r, mode, ExponentVec::unit(n, i), ParamCoeff::one(r))
    }

    /// `x_{j+1}` as a polynomial of `u`-degree zero.
    pub fn param(n: usize, r: usize, mode: Mode, j: usize) -> Self {
        Self::monomial(n, r, mode, ExponentVec::zero(n), ParamCoeff::param(r, j))
    }

    pub fn from_terms<I: IntoIterator<Item = (ExponentVec, ParamCoeff)>>(
        n: usize,
        r: usize,
        mode: Mode,
        it: I,
    ) -> Result<Self> {
        let mut p = Self::zero(n, r, mode);
        for (e, c) in it {
            if e.len() != n || c.nparams() != r {
                return Err(Error::DimensionMismatch(
                    "term shape does not match (n, r)".into(),
                ));
            }
            if mode == Mode::Polynomial && !e.is_nonnegative() {
                return Err(Error::WrongMode(format!(
                    "negative exponent {e} in polynomial mode"
                )));
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn nparams(&self) -> usize {
        self.r
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVec, &ParamCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExponentVec) -> Option<&ParamCoeff> {
        self.terms.get(e)
    }

    /// The `u`-exponents present.
    pub fn support(&self) -> impl Iterator<Item = &ExponentVec> {
        self.terms.keys()
    }

    /// True when no coefficient depends on `x`.
    pub fn is_parameter_free(&self) -> bool {
        self.terms.values().all(|c| c.is_constant())
    }

    pub(crate) fn add_term(&mut self, e: ExponentVec, c: &ParamCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &LaurentPoly) -> Result<()> {
        if self.n != other.n || self.r != other.r || self.mode != other.mode {
            return Err(Error::DimensionMismatch(format!(
                "(n={}, r={}, {}) vs (n={}, r={}, {})",
                self.n, self.r, self.mode, other.n, other.r, other.mode
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.n, self.r, self.mode);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), &(ca * cb));
            }
        }
        Ok(out)
    }

    /// `self += c * u^shift * other`.
    pub(crate) fn add_shifted(&mut self, other: &LaurentPoly, shift: &ExponentVec, c: &ParamCoeff) {
        for (e, v) in &other.terms {
            self.add_term(e.add(shift), &(v * c));
        }
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero(self.n, self.r, self.mode);
        }
        LaurentPoly {
            n: self.n,
            r: self.r,
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v.scale(c)))
                .collect(),
        }
    }

    pub fn scale_param(&self, c: &ParamCoeff) -> LaurentPoly {
        let mut out = Self::zero(self.n, self.r, self.mode);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), &(v * c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut acc = Self::one(self.n, self.r, self.mode);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The logarithmic derivative `u_i ∂/∂u_i`: scales each term by its
    /// `i`-th exponent.
    pub fn log_derivative(&self, i: usize) -> LaurentPoly {
        assert!(i < self.n, "variable index out of range");
        let mut out = Self::zero(self.n, self.r, self.mode);
        for (e, c) in &self.terms {
            if e.0[i] != 0 {
                out.add_term(e.clone(), &c.scale(&Rational::from_integer(e.0[i].into())));
            }
        }
        out
    }

    /// The ordinary partial derivative `∂/∂u_i`; polynomial mode only.
    pub fn partial_derivative(&self, i: usize) -> Result<LaurentPoly> {
        if self.mode != Mode::Polynomial {
            return Err(Error::WrongMode(
                "partial_derivative needs polynomial mode; use log_derivative on the torus".into(),
            ));
        }
        assert!(i < self.n, "variable index out of range");
        let mut out = Self::zero(self.n, self.r, self.mode);
        for (e, c) in &self.terms {
            if e.0[i] > 0 {
                let mut e2 = e.clone();
                e2.0[i] -= 1;
                out.add_term(e2, &c.scale(&Rational::from_integer(e.0[i].into())));
            }
        }
        Ok(out)
    }

    /// ∂/∂x_{j+1} applied to the coefficients.
    pub fn param_derivative(&self, j: usize) -> LaurentPoly {
        let mut out = Self::zero(self.n, self.r, self.mode);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.derivative(j));
        }
        out
    }

    /// Evaluate every coefficient at `point`; the result has `r = 0`.
    pub fn substitute_params(&self, point: &[Rational]) -> Result<LaurentPoly> {
        if point.len() != self.r {
            return Err(Error::DimensionMismatch(format!(
                "parameter point has length {}, expected {}",
                point.len(),
                self.r
            )));
        }
        let mut out = Self::zero(self.n, 0, self.mode);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &ParamCoeff::constant(0, c.evaluate(point)?));
        }
        Ok(out)
    }

    /// Re-embed a parameter-free polynomial with `r` (unused) parameters.
    pub fn with_params(&self, r: usize) -> Result<LaurentPoly> {
        let mut out = Self::zero(self.n, r, self.mode);
        for (e, c) in &self.terms {
            let v = c.as_constant().ok_or_else(|| {
                Error::DimensionMismatch(
                    "cannot drop parameters from a parameter-dependent polynomial".into(),
                )
            })?;
            out.add_term(e.clone(), &ParamCoeff::constant(r, v));
        }
        Ok(out)
    }

    /// Same terms, other mode. Fails when exponents are negative and the
    /// target is polynomial mode.
    pub fn with_mode(&self, mode: Mode) -> Result<LaurentPoly> {
        if mode == Mode::Polynomial && self.terms.keys().any(|e| !e.is_nonnegative()) {
            return Err(Error::WrongMode(
                "negative exponents cannot move to polynomial mode".into(),
            ));
        }
        Ok(LaurentPoly {
            mode,
            ..self.clone()
        })
    }

    /// Coefficient of `x^0` in every term: the value at `x = 0`.
    pub fn at_origin(&self) -> LaurentPoly {
        self.substitute_params(&vec![Rational::zero(); self.r])
            .expect("length matches")
    }

    /// Sum of the terms whose exponent satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&ExponentVec) -> bool) -> LaurentPoly {
        LaurentPoly {
            n: self.n,
            r: self.r,
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms in canonical print order (graded-lex on `u`, descending).
    pub fn sorted_terms(&self) -> Vec<(&ExponentVec, &ParamCoeff)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex_cmp(&b.0 .0, &a.0 .0));
        v
    }

    pub fn to_string_with(&self, names: &VarNames) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (e, c) in self.sorted_terms() {
            let u = names.u_factors(&e.0);
            let mut xs: Vec<(&Vec<u32>, &Rational)> = c.terms().collect();
            xs.sort_by(|a, b| super::grlex_cmp_u32(b.0, a.0));
            for (xe, v) in xs {
                let mut factors = names.x_factors(xe);
                factors.extend(u.iter().cloned());
                push_signed_term(&mut out, first, v, &factors);
                first = false;
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&VarNames::default_for(self.n, self.r)))
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("incompatible polynomials")
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }
}
