//! Per-level linear algebra of the Newton filtration.
//!
//! At level `k` (weight `α = k/d`) the graded piece is spanned by the
//! monomials of weight exactly `α`. The weight-`α` parts of the products
//! `u^b · gen_i(f)` with `b` light enough span the graded Jacobian ideal
//! there; a fully reduced echelon form of those rows splits the monomials
//! into pivots and a complement `E_α` (the non-pivot monomials).
//!
//! Columns are sorted ascending lex and the pivot of a row is its first
//! nonzero column, so `E_α` keeps the lex-largest monomials.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::Zero;

use crate::newton::NewtonPolyhedron;
use crate::polyring::{ExponentVec, LaurentPoly, Mode, ParamCoeff, Rational};

/// A row combination: `(b, i) ↦ c` stands for `c · u^b · gen_i`.
pub(crate) type Combo = BTreeMap<(ExponentVec, usize), Rational>;

#[derive(Debug)]
struct EchelonRow {
    pivot: usize,
    coeffs: Vec<Rational>,
    combo: Combo,
}

#[derive(Debug)]
pub(crate) struct Level {
    pub columns: Vec<ExponentVec>,
    index: HashMap<ExponentVec, usize>,
    rows: Vec<EchelonRow>,
    /// Column indices of `E_α`.
    pub free: Vec<usize>,
}

/// Integer points of the box containing `{a : level(a) ≤ max_level}`
/// (`nonneg` restricts to the orthant) that satisfy `keep`.
pub(crate) fn lattice_points(
    p: &NewtonPolyhedron,
    max_level: i64,
    nonneg: bool,
    mut keep: impl FnMut(&[i32]) -> bool,
) -> Vec<ExponentVec> {
    if max_level < 0 {
        return Vec::new();
    }
    let n = p.dim();
    let d = p.quantum();
    let mut lo = vec![0i32; n];
    let mut hi = vec![0i32; n];
    for j in 0..n {
        let mn = p
            .vertices()
            .iter()
            .map(|v| v.0[j] as i64)
            .min()
            .unwrap()
            .min(0);
        let mx = p
            .vertices()
            .iter()
            .map(|v| v.0[j] as i64)
            .max()
            .unwrap()
            .max(0);
        lo[j] = if nonneg {
            0
        } else {
            Integer::div_floor(&(mn * max_level), &d) as i32
        };
        hi[j] = Integer::div_floor(&(mx * max_level), &d) as i32;
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        if keep(&cur) {
            out.push(ExponentVec(cur.clone()));
        }
        let mut j = 0;
        loop {
            if j == n {
                return out;
            }
            if cur[j] < hi[j] {
                cur[j] += 1;
                break;
            }
            cur[j] = lo[j];
            j += 1;
        }
    }
}

impl Level {
    /// Build the table at level `k` from the x-free generators.
    pub fn build(p: &NewtonPolyhedron, gens: &[LaurentPoly], k: i64) -> Level {
        let n = p.dim();
        let d = p.quantum();
        let mode = p.mode();

        // Columns: monomials of exact level k, in the mode's weight. In
        // polynomial mode a+1 lies in the level-k box, hence so does a.
        let mut columns: Vec<ExponentVec> = match mode {
            Mode::Laurent => lattice_points(p, k, false, |a| p.level(a) == k),
            Mode::Polynomial => lattice_points(p, k, true, |a| p.star_level(a) == k),
        };
        columns.sort();
        let index: HashMap<ExponentVec, usize> = columns
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();

        // Candidate multipliers per generator.
        let mut candidates: Vec<(ExponentVec, usize)> = Vec::new();
        match mode {
            Mode::Laurent => {
                for b in lattice_points(p, k - d, false, |a| p.level(a) <= k - d) {
                    for i in 0..n {
                        candidates.push((b.clone(), i));
                    }
                }
            }
            Mode::Polynomial => {
                // c = u1⋯un·u^b/u_i with level(c) ≤ k − d.
                for c in lattice_points(p, k - d, true, |a| p.level(a) <= k - d) {
                    for i in 0..n {
                        let b: Vec<i32> = (0..n).map(|j| c.0[j] - 1 + i32::from(j == i)).collect();
                        if b.iter().all(|&x| x >= 0) {
                            candidates.push((ExponentVec(b), i));
                        }
                    }
                }
            }
        }
        candidates.sort();

        let mut level = Level {
            columns,
            index,
            rows: Vec::new(),
            free: Vec::new(),
        };
        let ncols = level.columns.len();
        if ncols > 0 {
            for (b, i) in candidates {
                let mut v = vec![Rational::zero(); ncols];
                let mut any = false;
                for (e, c) in gens[i].terms() {
                    let m = b.add(e);
                    if let Some(&col) = level.index.get(&m) {
                        v[col] += c.as_constant().expect("x-free generator");
                        any = true;
                    }
                }
                if any {
                    let mut combo = Combo::new();
                    combo.insert((b, i), num_traits::One::one());
                    level.insert_row(v, combo);
                }
                if level.rows.len() == ncols {
                    break;
                }
            }
        }
        let mut pivot = vec![false; ncols];
        for r in &level.rows {
            pivot[r.pivot] = true;
        }
        level.free = (0..ncols).filter(|&c| !pivot[c]).collect();
        level
    }

    fn insert_row(&mut self, mut v: Vec<Rational>, mut combo: Combo) {
        for row in &self.rows {
            if !v[row.pivot].is_zero() {
                let f = v[row.pivot].clone();
                for (x, y) in v.iter_mut().zip(&row.coeffs) {
                    *x -= &f * y;
                }
                add_combo(&mut combo, &row.combo, &-f);
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for c in combo.values_mut() {
            *c *= &inv;
        }
        for row in self.rows.iter_mut() {
            if !row.coeffs[p].is_zero() {
                let f = row.coeffs[p].clone();
                for (x, y) in row.coeffs.iter_mut().zip(&v) {
                    *x -= &f * y;
                }
                add_combo(&mut row.combo, &combo, &-f);
            }
        }
        self.rows.push(EchelonRow {
            pivot: p,
            coeffs: v,
            combo,
        });
    }

    pub fn column_of(&self, e: &ExponentVec) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Reduce a vector of `ParamCoeff`s over the columns. Returns the
    /// remainder (zero at every pivot) and the multipliers
    /// `(b, i) ↦ coefficient` of the rows subtracted.
    pub fn reduce(&self, v: &mut [ParamCoeff]) -> BTreeMap<(ExponentVec, usize), ParamCoeff> {
        let r = v.first().map_or(0, |c| c.nparams());
        let mut out: BTreeMap<(ExponentVec, usize), ParamCoeff> = BTreeMap::new();
        for row in &self.rows {
            let f = v[row.pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(&row.coeffs) {
                if !y.is_zero() {
                    x.add_scaled(&f, &-y);
                }
            }
            for (key, c) in &row.combo {
                let e = out
                    .entry(key.clone())
                    .or_insert_with(|| ParamCoeff::zero(r));
                e.add_scaled(&f, c);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

fn add_combo(into: &mut Combo, from: &Combo, f: &Rational) {
    for (k, c) in from {
        let e = into.entry(k.clone()).or_insert_with(Rational::zero);
        *e += c * f;
        if e.is_zero() {
            into.remove(k);
        }
    }
}
