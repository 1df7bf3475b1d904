//! Dense matrices over ℚ[x] and a few exact linear-algebra helpers over ℚ.
//!
//! Convention: a matrix acts on coordinate columns; column `k` holds the
//! image of basis vector `k`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyring::{parse_poly_with, ExponentVec, Mode, ParamCoeff, Rational, VarNames};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamMatrix {
    rows: usize,
    cols: usize,
    r: usize,
    data: Vec<ParamCoeff>,
}

impl ParamMatrix {
    pub fn zero(rows: usize, cols: usize, r: usize) -> Self {
        ParamMatrix {
            rows,
            cols,
            r,
            data: vec![ParamCoeff::zero(r); rows * cols],
        }
    }

    pub fn identity(n: usize, r: usize) -> Self {
        let mut m = Self::zero(n, n, r);
        for i in 0..n {
            m.set(i, i, ParamCoeff::one(r));
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        r: usize,
        mut f: impl FnMut(usize, usize) -> ParamCoeff,
    ) -> Self {
        let mut m = Self::zero(rows, cols, r);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_rational(a: &[Vec<Rational>], r: usize) -> Self {
        let rows = a.len();
        let cols = a.first().map_or(0, |x| x.len());
        Self::from_fn(rows, cols, r, |i, j| {
            ParamCoeff::constant(r, a[i][j].clone())
        })
    }

    /// Build from its columns.
    pub fn from_columns(cols: &[Vec<ParamCoeff>], rows: usize, r: usize) -> Self {
        Self::from_fn(rows, cols.len(), r, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nparams(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize) -> &ParamCoeff {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ParamCoeff) {
        assert_eq!(v.nparams(), self.r);
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<ParamCoeff> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    fn zip(
        &self,
        o: &ParamMatrix,
        f: impl Fn(&ParamCoeff, &ParamCoeff) -> ParamCoeff,
    ) -> ParamMatrix {
        assert_eq!(
            (self.rows, self.cols, self.r),
            (o.rows, o.cols, o.r),
            "shape mismatch"
        );
        ParamMatrix {
            rows: self.rows,
            cols: self.cols,
            r: self.r,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, o: &ParamMatrix) -> ParamMatrix {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &ParamMatrix) -> ParamMatrix {
        self.zip(o, |a, b| a - b)
    }

    pub fn map(&self, f: impl Fn(&ParamCoeff) -> ParamCoeff) -> ParamMatrix {
        let data: Vec<ParamCoeff> = self.data.iter().map(f).collect();
        let r = data.first().map_or(self.r, |c| c.nparams());
        ParamMatrix {
            rows: self.rows,
            cols: self.cols,
            r,
            data,
        }
    }

    pub fn scale(&self, c: &Rational) -> ParamMatrix {
        self.map(|a| a.scale(c))
    }

    pub fn neg(&self) -> ParamMatrix {
        self.scale(&-Rational::one())
    }

    pub fn mul(&self, o: &ParamMatrix) -> ParamMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        assert_eq!(self.r, o.r, "parameter count mismatch");
        let mut out = Self::zero(self.rows, o.cols, self.r);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j].add_product(a, b);
                    }
                }
            }
        }
        out
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(a: &ParamMatrix, b: &ParamMatrix) -> ParamMatrix {
        a.mul(b).sub(&b.mul(a))
    }

    /// Entry-wise ∂/∂x_{j+1}.
    pub fn derivative(&self, j: usize) -> ParamMatrix {
        self.map(|a| a.derivative(j))
    }

    /// Entry-wise evaluation; the result has `r = 0`.
    pub fn substitute(&self, point: &[Rational]) -> Result<ParamMatrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for a in &self.data {
            data.push(ParamCoeff::constant(0, a.evaluate(point)?));
        }
        Ok(ParamMatrix {
            rows: self.rows,
            cols: self.cols,
            r: 0,
            data,
        })
    }

    /// The matrix with every entry re-embedded with `r` parameters.
    /// Entries must be constants.
    pub fn with_params(&self, r: usize) -> Option<ParamMatrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for a in &self.data {
            data.push(ParamCoeff::constant(r, a.as_constant()?));
        }
        Some(ParamMatrix {
            rows: self.rows,
            cols: self.cols,
            r,
            data,
        })
    }

    /// `(TA)_{ij} = a_{μ+1−j, μ+1−i}`: transpose across the antidiagonal.
    pub fn t_transform(&self) -> ParamMatrix {
        assert_eq!(self.rows, self.cols);
        let m = self.rows;
        Self::from_fn(m, m, self.r, |i, j| self.get(m - 1 - j, m - 1 - i).clone())
    }

    pub fn transpose(&self) -> ParamMatrix {
        Self::from_fn(self.cols, self.rows, self.r, |i, j| self.get(j, i).clone())
    }

    /// `Some` when every entry is constant.
    pub fn as_rational(&self) -> Option<Vec<Vec<Rational>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).as_constant())
                    .collect()
            })
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.data.iter().all(|c| c.is_constant())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn max_param_degree(&self) -> Option<u32> {
        self.data.iter().filter_map(|c| c.total_degree()).max()
    }

    /// Rows of entry strings, parseable by [`ParamMatrix::from_strings`].
    pub fn to_strings(&self, names: &VarNames) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_string_with(names))
                    .collect()
            })
            .collect()
    }

    /// Entries over the default parameter names `x1..xr`.
    pub fn from_strings(rows: &[Vec<String>], r: usize) -> Result<ParamMatrix> {
        Self::from_strings_with(rows, &VarNames::default_for(0, r))
    }

    pub fn from_strings_with(rows: &[Vec<String>], names: &VarNames) -> Result<ParamMatrix> {
        let r = names.x.len();
        let n = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Invalid("ragged matrix".into()));
        }
        let params = VarNames {
            u: Vec::new(),
            x: names.x.clone(),
        };
        let mut m = Self::zero(n, c, r);
        for (i, row) in rows.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                let p = parse_poly_with(s, &params, Mode::Polynomial)?;
                m.set(
                    i,
                    j,
                    p.coeff(&ExponentVec::zero(0))
                        .cloned()
                        .unwrap_or_else(|| ParamCoeff::zero(r)),
                );
            }
        }
        Ok(m)
    }
}

/// Exact reduced row echelon form; returns the pivot columns.
pub fn rref(a: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |x| x.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &[Vec<Rational>]) -> usize {
    let mut b = a.to_vec();
    rref(&mut b).len()
}

/// Inverse of a square matrix over ℚ, `None` when singular.
pub fn inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let m = b.first().map_or(0, |x| x.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Rational::zero(), |s, (x, brow)| s + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational::zero(), |s, (x, y)| s + x * y)
        })
        .collect()
}

/// Incrementally maintained span of vectors over ℚ.
#[derive(Clone, Debug, Default)]
pub struct Span {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Span {
    pub fn new() -> Self {
        Span { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Add `v`; returns `true` when it enlarged the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&w) {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}
