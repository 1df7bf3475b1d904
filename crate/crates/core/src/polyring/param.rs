//! Polynomials in the deformation parameters `x1..xr` with exact rational
//! coefficients. These are the coefficients of every [`LaurentPoly`] and
//! the entries of every connection matrix.
//!
//! [`LaurentPoly`]: super::LaurentPoly

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::{grlex_cmp_u32, Rational, VarNames};
use crate::error::{Error, Result};

/// Sparse polynomial in `r` parameters over ℚ. No zero coefficient is
/// ever stored, so structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamCoeff {
    r: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl ParamCoeff {
    pub fn zero(r: usize) -> Self {
        ParamCoeff {
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(r: usize) -> Self {
        Self::constant(r, Rational::one())
    }

    pub fn constant(r: usize, c: Rational) -> Self {
        let mut p = Self::zero(r);
        if !c.is_zero() {
            p.terms.insert(vec![0; r], c);
        }
        p
    }

    pub fn from_int(r: usize, c: i64) -> Self {
        Self::constant(r, Rational::from_integer(c.into()))
    }

    /// The parameter `x_{j+1}` (zero-based `j`).
    pub fn param(r: usize, j: usize) -> Self {
        assert!(j < r, "parameter index {j} out of range for r = {r}");
        let mut e = vec![0; r];
        e[j] = 1;
        Self::term(r, e, Rational::one())
    }

    pub fn term(r: usize, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), r);
        let mut p = Self::zero(r);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rational)>>(r: usize, it: I) -> Self {
        let mut p = Self::zero(r);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn nparams(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial does not depend on any parameter.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        debug_assert_eq!(e.len(), self.r);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.r);
        }
        ParamCoeff {
            r: self.r,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// `self += c * other`, in place.
    pub fn add_scaled(&mut self, other: &ParamCoeff, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            self.add_term(e.clone(), v * c);
        }
    }

    /// `self += a * b`.
    pub fn add_product(&mut self, a: &ParamCoeff, b: &ParamCoeff) {
        for (ea, va) in &a.terms {
            for (eb, vb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                self.add_term(e, va * vb);
            }
        }
    }

    /// ∂/∂x_{j+1}.
    pub fn derivative(&self, j: usize) -> Self {
        let mut out = Self::zero(self.r);
        for (e, c) in &self.terms {
            if e[j] > 0 {
                let mut e2 = e.clone();
                e2[j] -= 1;
                out.add_term(e2, c * Rational::from_integer(e[j].into()));
            }
        }
        out
    }

    /// Evaluate at a rational point of length `r`.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.r {
            return Err(Error::DimensionMismatch(format!(
                "point has length {}, expected {}",
                point.len(),
                self.r
            )));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t *= num_traits::pow(x.clone(), k as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Homogeneous component of total degree `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        ParamCoeff {
            r: self.r,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn to_string_with(&self, names: &VarNames) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex_cmp_u32(b, a));
        let mut out = String::new();
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let factors = names.x_factors(e);
            push_signed_term(&mut out, idx == 0, c, &factors);
        }
        out
    }
}

/// Append `± coeff*factors` to `out` in the canonical printed form.
pub(crate) fn push_signed_term(out: &mut String, first: bool, c: &Rational, factors: &[String]) {
    let neg = c.is_negative();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let a = c.abs();
    if factors.is_empty() {
        out.push_str(&a.to_string());
    } else {
        if !a.is_one() {
            out.push_str(&a.to_string());
            out.push('*');
        }
        out.push_str(&factors.join("*"));
    }
}

impl fmt::Display for ParamCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&VarNames::default_for(0, self.r)))
    }
}

impl Add<&ParamCoeff> for &ParamCoeff {
    type Output = ParamCoeff;
    fn add(self, rhs: &ParamCoeff) -> ParamCoeff {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&ParamCoeff> for ParamCoeff {
    fn add_assign(&mut self, rhs: &ParamCoeff) {
        assert_eq!(self.r, rhs.r, "parameter count mismatch");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&ParamCoeff> for ParamCoeff {
    fn sub_assign(&mut self, rhs: &ParamCoeff) {
        assert_eq!(self.r, rhs.r, "parameter count mismatch");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl Sub<&ParamCoeff> for &ParamCoeff {
    type Output = ParamCoeff;
    fn sub(self, rhs: &ParamCoeff) -> ParamCoeff {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&ParamCoeff> for &ParamCoeff {
    type Output = ParamCoeff;
    fn mul(self, rhs: &ParamCoeff) -> ParamCoeff {
        assert_eq!(self.r, rhs.r, "parameter count mismatch");
        let mut out = ParamCoeff::zero(self.r);
        out.add_product(self, rhs);
        out
    }
}

impl Neg for &ParamCoeff {
    type Output = ParamCoeff;
    fn neg(self) -> ParamCoeff {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_cancels_to_canonical_zero() {
        let x = ParamCoeff::param(2, 0);
        let y = ParamCoeff::param(2, 1);
        let s = &(&x + &y) - &y;
        assert_eq!(s, x);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn evaluate_and_derivative() {
        // -(4/25) x1^2 at x1 = 5 is -4
        let p = ParamCoeff::term(1, vec![2], q(-4, 25));
        assert_eq!(p.evaluate(&[q(5, 1)]).unwrap(), q(-4, 1));
        assert_eq!(p.derivative(0), ParamCoeff::term(1, vec![1], q(-8, 25)));
        assert!(p.evaluate(&[]).is_err());
    }

    #[test]
    fn printing() {
        let names = VarNames::default_for(0, 2);
        let p = &ParamCoeff::term(2, vec![2, 0], q(-4, 25)) + &ParamCoeff::from_int(2, 3);
        assert_eq!(p.to_string_with(&names), "-4/25*x1^2 + 3");
        assert_eq!(ParamCoeff::zero(2).to_string_with(&names), "0");
    }
}
