//! Exact sparse (Laurent) polynomial arithmetic over ℚ with coefficients
//! in ℚ[x], plus the expression parser.
//!
//! Torus variables are `u1..un`, deformation parameters `x1..xr`. Laurent
//! polynomials keep signed exponents directly; the polynomial mode rejects
//! negative exponents at construction and parse time.

mod laurent;
mod param;
mod parse;

use std::cmp::Ordering;
use std::fmt;

pub use laurent::LaurentPoly;
pub use param::ParamCoeff;
pub use parse::{parse_param, parse_poly, parse_poly_with};

pub(crate) use param::push_signed_term;

/// Exact rational numbers. Always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Whether `u` lives on the torus (ℂ*)ⁿ or on affine space ℂⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Laurent,
    Polynomial,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Laurent => "laurent",
            Mode::Polynomial => "polynomial",
        })
    }
}

/// Exponent vector of a `u`-monomial. Entries may be negative in
/// Laurent mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVec(pub Vec<i32>);

impl ExponentVec {
    pub fn zero(n: usize) -> Self {
        ExponentVec(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &ExponentVec) -> ExponentVec {
        ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExponentVec) -> ExponentVec {
        ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn to_string_with(&self, names: &VarNames) -> String {
        let f = names.u_factors(&self.0);
        if f.is_empty() {
            "1".to_string()
        } else {
            f.join("*")
        }
    }
}

impl fmt::Display for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&VarNames::default_for(self.0.len(), 0)))
    }
}

/// Graded-lex comparison: total degree first, then lexicographic.
pub fn grlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum();
    let db: i64 = b.iter().map(|&e| e as i64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

pub(crate) fn grlex_cmp_u32(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Display and parse names for the torus variables and parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames {
    pub u: Vec<String>,
    pub x: Vec<String>,
}

impl VarNames {
    /// `u1..un` and `x1..xr`.
    pub fn default_for(n: usize, r: usize) -> Self {
        VarNames {
            u: (1..=n).map(|i| format!("u{i}")).collect(),
            x: (1..=r).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn new(u: Vec<String>, x: Vec<String>) -> Result<Self, crate::Error> {
        let mut all: Vec<&String> = u.iter().chain(&x).collect();
        for s in &all {
            let ok = s
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(crate::Error::Invalid(format!("bad variable name `{s}`")));
            }
        }
        all.sort();
        all.dedup();
        if all.len() != u.len() + x.len() {
            return Err(crate::Error::Invalid("duplicate variable names".into()));
        }
        Ok(VarNames { u, x })
    }

    pub(crate) fn u_factors(&self, e: &[i32]) -> Vec<String> {
        e.iter()
            .enumerate()
            .filter(|(_, &k)| k != 0)
            .map(|(i, &k)| {
                if k == 1 {
                    self.u[i].clone()
                } else {
                    format!("{}^{}", self.u[i], k)
                }
            })
            .collect()
    }

    pub(crate) fn x_factors(&self, e: &[u32]) -> Vec<String> {
        e.iter()
            .enumerate()
            .filter(|(_, &k)| k != 0)
            .map(|(i, &k)| {
                if k == 1 {
                    self.x[i].clone()
                } else {
                    format!("{}^{}", self.x[i], k)
                }
            })
            .collect()
    }
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn rational_string(q: &Rational) -> String {
    q.to_string()
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.parse().ok()?;
    let d: num_bigint::BigInt = d.parse().ok()?;
    if num_traits::Zero::is_zero(&d) {
        return None;
    }
    Some(Rational::new(n, d))
}

pub(crate) fn serialize_rational<S: serde::Serializer>(
    q: &Rational,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

pub(crate) fn serialize_opt_rational<S: serde::Serializer>(
    q: &Option<Rational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&rational_string(q)),
        None => s.serialize_none(),
    }
}

pub(crate) fn serialize_exponent<S: serde::Serializer>(
    e: &ExponentVec,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(e.0.iter())
}
