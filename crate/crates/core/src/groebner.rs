//! Buchberger's algorithm over ℚ with optional cofactor tracking.
//!
//! Polynomials here are ordinary (nonnegative exponents). Laurent ideals
//! are handled by the caller: clear denominators with a power of
//! `u1⋯un`, append a variable `t` and the relation `t·u1⋯un − 1`, and
//! use [`TermOrder::Elimination`] so `t` is eliminated first.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyring::{ExponentVec, LaurentPoly, Mode, ParamCoeff, Rational};

/// Monomial orders. Each is encoded as a sort key so that comparing keys
/// lexicographically compares monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermOrder {
    /// Graded reverse lexicographic.
    Grevlex,
    /// Integer weight first, grevlex tie-break.
    Weighted(Vec<i64>),
    /// Exponent of the last variable first, grevlex on the rest.
    Elimination,
}

/// A polynomial ring `ℚ[v1..vm]` with a fixed term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub nvars: usize,
    pub order: TermOrder,
}

type Key = Vec<i64>;

fn grevlex_key(a: &[u32], out: &mut Key) {
    out.push(a.iter().map(|&e| e as i64).sum());
    out.extend(a.iter().rev().map(|&e| -(e as i64)));
}

impl Ring {
    pub fn new(nvars: usize, order: TermOrder) -> Self {
        if let TermOrder::Weighted(w) = &order {
            assert_eq!(w.len(), nvars);
        }
        Ring { nvars, order }
    }

    fn key(&self, a: &[u32]) -> Key {
        let mut k = Vec::with_capacity(a.len() + 2);
        match &self.order {
            TermOrder::Grevlex => grevlex_key(a, &mut k),
            TermOrder::Weighted(w) => {
                k.push(w.iter().zip(a).map(|(w, &e)| w * e as i64).sum());
                grevlex_key(a, &mut k);
            }
            TermOrder::Elimination => {
                let (rest, last) = a.split_at(a.len() - 1);
                k.push(last[0] as i64);
                grevlex_key(rest, &mut k);
            }
        }
        k
    }

    pub fn zero(&self) -> QPoly {
        QPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(&self, c: Rational) -> QPoly {
        self.monomial(vec![0; self.nvars], c)
    }

    pub fn monomial(&self, a: Vec<u32>, c: Rational) -> QPoly {
        let mut p = self.zero();
        self.add_term(&mut p, a, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rational)>>(&self, it: I) -> QPoly {
        let mut p = self.zero();
        for (a, c) in it {
            self.add_term(&mut p, a, c);
        }
        p
    }

    pub fn add_term(&self, p: &mut QPoly, a: Vec<u32>, c: Rational) {
        debug_assert_eq!(a.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let k = self.key(&a);
        match p.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert((a, c));
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().1 += c;
                if o.get().1.is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `p += c · v^shift · q`.
    pub fn add_mul_term(&self, p: &mut QPoly, q: &QPoly, shift: &[u32], c: &Rational) {
        for (a, v) in q.terms.values() {
            let e: Vec<u32> = a.iter().zip(shift).map(|(x, y)| x + y).collect();
            self.add_term(p, e, v * c);
        }
    }

    pub fn add(&self, p: &QPoly, q: &QPoly) -> QPoly {
        let mut out = p.clone();
        self.add_mul_term(&mut out, q, &vec![0; self.nvars], &Rational::one());
        out
    }

    pub fn mul(&self, p: &QPoly, q: &QPoly) -> QPoly {
        let mut out = self.zero();
        for (a, c) in p.terms.values() {
            self.add_mul_term(&mut out, q, a, c);
        }
        out
    }

    /// Same terms re-keyed for this ring's order.
    pub fn rekey(&self, p: &QPoly) -> QPoly {
        self.from_terms(p.terms.values().cloned())
    }
}

/// Sparse polynomial over ℚ, keyed by its ring's term order. Only mix
/// polynomials built by the same [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    terms: BTreeMap<Key, (Vec<u32>, Rational)>,
}

impl QPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading monomial and coefficient.
    pub fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.values().next_back().map(|(a, c)| (a, c))
    }

    /// Terms in descending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.values().rev().map(|(a, c)| (a, c))
    }

    pub fn coeff(&self, a: &[u32]) -> Rational {
        self.terms
            .values()
            .find(|(b, _)| b == a)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && {
            let (a, c) = self.leading().unwrap();
            a.iter().all(|&e| e == 0) && c.is_one()
        }
    }

    pub fn scale(&self, c: &Rational) -> QPoly {
        if c.is_zero() {
            return QPoly {
                terms: BTreeMap::new(),
            };
        }
        QPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, (a, v))| (k.clone(), (a.clone(), v * c)))
                .collect(),
        }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// A completed, reduced Gröbner basis. When tracked, `cofactors[k][i]`
/// expresses element `k` over input generator `i`.
#[derive(Clone, Debug)]
pub struct Basis {
    pub ring: Ring,
    pub elements: Vec<QPoly>,
    pub cofactors: Option<Vec<Vec<QPoly>>>,
    pub generators: Vec<QPoly>,
    /// Reduction steps spent.
    pub steps: u64,
}

struct Engine<'a> {
    ring: &'a Ring,
    track: bool,
    budget: u64,
    steps: u64,
}

impl Engine<'_> {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    /// Fully reduce `p` (with cofactors `cp`) by `g`.
    fn reduce(
        &mut self,
        mut p: QPoly,
        mut cp: Vec<QPoly>,
        g: &[QPoly],
        cg: &[Vec<QPoly>],
        skip: Option<usize>,
    ) -> Result<(QPoly, Vec<QPoly>)> {
        let mut rem = self.ring.zero();
        while let Some((k, (a, c))) = p.terms.pop_last() {
            let hit = g.iter().enumerate().find(|(idx, q)| {
                Some(*idx) != skip && divides(q.leading().expect("nonzero basis element").0, &a)
            });
            match hit {
                None => {
                    rem.terms.insert(k, (a, c));
                }
                Some((idx, q)) => {
                    self.tick()?;
                    let (b, d) = q.leading().unwrap();
                    let shift: Vec<u32> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                    let factor = -(&c / d);
                    // The leading term cancels by construction; it was already popped.
                    for (e, v) in q.terms.values().rev().skip(1) {
                        let m: Vec<u32> = e.iter().zip(&shift).map(|(x, y)| x + y).collect();
                        self.ring.add_term(&mut p, m, v * &factor);
                    }
                    if self.track {
                        for (ci, qi) in cp.iter_mut().zip(&cg[idx]) {
                            self.ring.add_mul_term(ci, qi, &shift, &factor);
                        }
                    }
                }
            }
        }
        Ok((rem, cp))
    }
}

/// Compute a reduced Gröbner basis of `gens` in `ring`, spending at most
/// `budget` reduction steps.
pub fn groebner(ring: &Ring, gens: &[QPoly], track: bool, budget: u64) -> Result<Basis> {
    let gens: Vec<QPoly> = gens.iter().map(|g| ring.rekey(g)).collect();
    let m = gens.len();
    let mut eng = Engine {
        ring,
        track,
        budget,
        steps: 0,
    };
    let unit = |i: usize| -> Vec<QPoly> {
        (0..m)
            .map(|j| {
                if i == j {
                    ring.constant(Rational::one())
                } else {
                    ring.zero()
                }
            })
            .collect()
    };

    let mut g: Vec<QPoly> = Vec::new();
    let mut cg: Vec<Vec<QPoly>> = Vec::new();
    for (i, p) in gens.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let (r, cr) = eng.reduce(
            p.clone(),
            if track { unit(i) } else { Vec::new() },
            &g,
            &cg,
            None,
        )?;
        if !r.is_zero() {
            push_monic(&mut g, &mut cg, r, cr, track);
        }
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pop_smallest(ring, &g, &mut pairs) {
        let (ai, _) = g[i].leading().unwrap();
        let (aj, _) = g[j].leading().unwrap();
        if ai.iter().zip(aj.iter()).all(|(x, y)| *x == 0 || *y == 0) {
            continue;
        }
        let l = lcm(ai, aj);
        if chain_criterion(&g, &pairs, i, j, &l) {
            continue;
        }
        let si: Vec<u32> = l.iter().zip(ai).map(|(x, y)| x - y).collect();
        let sj: Vec<u32> = l.iter().zip(aj).map(|(x, y)| x - y).collect();
        let mut s = ring.zero();
        ring.add_mul_term(&mut s, &g[i], &si, &Rational::one());
        ring.add_mul_term(&mut s, &g[j], &sj, &-Rational::one());
        let mut cs = Vec::new();
        if track {
            cs = vec![ring.zero(); m];
            for (k, c) in cs.iter_mut().enumerate() {
                ring.add_mul_term(c, &cg[i][k], &si, &Rational::one());
                ring.add_mul_term(c, &cg[j][k], &sj, &-Rational::one());
            }
        }
        eng.tick()?;
        let (r, cr) = eng.reduce(s, cs, &g, &cg, None)?;
        if r.is_zero() {
            continue;
        }
        push_monic(&mut g, &mut cg, r, cr, track);
        let new = g.len() - 1;
        for i in 0..new {
            pairs.push((i, new));
        }
        if g[new].leading().unwrap().0.iter().all(|&e| e == 0) {
            // The ideal is the whole ring.
            break;
        }
    }

    // Minimize, then interreduce.
    let mut keep: Vec<usize> = Vec::new();
    for k in 0..g.len() {
        let ak = g[k].leading().unwrap().0;
        let redundant = (0..g.len()).any(|l| {
            l != k && {
                let al = g[l].leading().unwrap().0;
                divides(al, ak) && (al != ak || l < k)
            }
        });
        if !redundant {
            keep.push(k);
        }
    }
    let mut g2: Vec<QPoly> = keep.iter().map(|&k| g[k].clone()).collect();
    let mut cg2: Vec<Vec<QPoly>> = if track {
        keep.iter().map(|&k| cg[k].clone()).collect()
    } else {
        Vec::new()
    };
    for k in 0..g2.len() {
        let p = g2[k].clone();
        let cp = if track { cg2[k].clone() } else { Vec::new() };
        let (lead_key, lead) = {
            let (kk, t) = p.terms.iter().next_back().unwrap();
            (kk.clone(), t.clone())
        };
        let mut tail = p;
        tail.terms.remove(&lead_key);
        let cg_ref: Vec<Vec<QPoly>> = if track {
            cg2.clone()
        } else {
            vec![Vec::new(); g2.len()]
        };
        let (mut r, cr) = eng.reduce(tail, cp, &g2, &cg_ref, Some(k))?;
        r.terms.insert(lead_key, lead);
        g2[k] = r;
        if track {
            cg2[k] = cr;
        }
    }
    let mut order: Vec<usize> = (0..g2.len()).collect();
    order.sort_by(|&a, &b| {
        let ka = g2[a].terms.keys().next_back().unwrap();
        let kb = g2[b].terms.keys().next_back().unwrap();
        ka.cmp(kb)
    });
    let elements: Vec<QPoly> = order.iter().map(|&k| g2[k].clone()).collect();
    let cofactors = track.then(|| order.iter().map(|&k| cg2[k].clone()).collect());
    Ok(Basis {
        ring: ring.clone(),
        elements,
        cofactors,
        generators: gens,
        steps: eng.steps,
    })
}

fn push_monic(g: &mut Vec<QPoly>, cg: &mut Vec<Vec<QPoly>>, r: QPoly, cr: Vec<QPoly>, track: bool) {
    let inv = r.leading().unwrap().1.recip();
    g.push(r.scale(&inv));
    if track {
        cg.push(cr.iter().map(|c| c.scale(&inv)).collect());
    }
}

fn pop_smallest(
    ring: &Ring,
    g: &[QPoly],
    pairs: &mut Vec<(usize, usize)>,
) -> Option<(usize, usize)> {
    if pairs.is_empty() {
        return None;
    }
    let mut best = 0;
    let mut best_key: Option<Key> = None;
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        let k = ring.key(&lcm(g[i].leading().unwrap().0, g[j].leading().unwrap().0));
        if best_key.as_ref().is_none_or(|b| k < *b) {
            best = idx;
            best_key = Some(k);
        }
    }
    Some(pairs.swap_remove(best))
}

/// Buchberger's chain criterion: skip (i, j) when some `k` has a leading
/// monomial dividing their lcm and both (i, k), (j, k) were already handled.
fn chain_criterion(g: &[QPoly], pending: &[(usize, usize)], i: usize, j: usize, l: &[u32]) -> bool {
    let is_pending = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pending.contains(&(a, b))
    };
    (0..g.len()).any(|k| {
        k != i
            && k != j
            && divides(g[k].leading().unwrap().0, l)
            && !is_pending(i, k)
            && !is_pending(j, k)
    })
}

impl Basis {
    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_one()
    }

    pub fn leading_monomials(&self) -> Vec<Vec<u32>> {
        self.elements
            .iter()
            .map(|g| g.leading().unwrap().0.clone())
            .collect()
    }

    /// Normal form of `p` (remainder of full reduction).
    pub fn normal_form(&self, p: &QPoly) -> QPoly {
        let mut eng = Engine {
            ring: &self.ring,
            track: false,
            budget: u64::MAX,
            steps: 0,
        };
        let cg = vec![Vec::new(); self.elements.len()];
        eng.reduce(self.ring.rekey(p), Vec::new(), &self.elements, &cg, None)
            .expect("unbounded budget")
            .0
    }

    /// Normal form together with the quotients over the original generators:
    /// `p = nf + Σ q_i · generator_i`. Requires tracked cofactors.
    pub fn divide(&self, p: &QPoly) -> (QPoly, Vec<QPoly>) {
        let cg = self.cofactors.as_ref().expect("cofactor tracking was off");
        let m = self.generators.len();
        let mut eng = Engine {
            ring: &self.ring,
            track: true,
            budget: u64::MAX,
            steps: 0,
        };
        let (nf, c) = eng
            .reduce(
                self.ring.rekey(p),
                vec![self.ring.zero(); m],
                &self.elements,
                cg,
                None,
            )
            .expect("unbounded budget");
        // reduce() accumulates −quotient; flip the sign.
        (nf, c.iter().map(|q| q.scale(&-Rational::one())).collect())
    }

    /// Standard monomials when the quotient is finite-dimensional.
    ///
    /// Fails with [`Error::NonIsolated`] when some variable has no pure
    /// power among the leading monomials.
    pub fn standard_monomials(&self) -> Result<Vec<Vec<u32>>> {
        let n = self.ring.nvars;
        let lms = self.leading_monomials();
        let mut bound = vec![u32::MAX; n];
        for a in &lms {
            let nz: Vec<usize> = (0..n).filter(|&i| a[i] > 0).collect();
            if nz.len() == 1 {
                bound[nz[0]] = bound[nz[0]].min(a[nz[0]]);
            } else if nz.is_empty() {
                return Ok(Vec::new());
            }
        }
        if let Some(i) = bound.iter().position(|&b| b == u32::MAX) {
            return Err(Error::NonIsolated(format!(
                "quotient is infinite-dimensional: no leading monomial is a pure power of variable {}",
                i + 1
            )));
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        loop {
            if !lms.iter().any(|a| divides(a, &cur)) {
                out.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    out.sort_by_key(|a| self.ring.key(a));
                    return Ok(out);
                }
                cur[i] += 1;
                if cur[i] < bound[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Check `element_k = Σ cofactor_{k,i} · generator_i` for every `k`.
    pub fn verify_cofactors(&self) -> bool {
        let Some(cg) = &self.cofactors else {
            return false;
        };
        self.elements.iter().zip(cg).all(|(g, c)| {
            let mut s = self.ring.zero();
            for (ci, gi) in c.iter().zip(&self.generators) {
                s = self.ring.add(&s, &self.ring.mul(ci, gi));
            }
            &s == g
        })
    }
}

/// The Jacobian ideal of a parameter-free `f` encoded for [`groebner`].
///
/// Laurent mode: generators are `u_i ∂f/∂u_i` times `(u1⋯un)^{e_i}` (the
/// smallest power clearing denominators), plus `t·u1⋯un − 1` in the extra
/// variable `t`, with the elimination order. Polynomial mode: the partial
/// derivatives, in `order`.
#[derive(Clone, Debug)]
pub struct JacobianIdeal {
    pub mode: Mode,
    pub n: usize,
    pub ring: Ring,
    pub clearing: Vec<u32>,
    pub basis: Basis,
}

impl JacobianIdeal {
    pub fn new(f: &LaurentPoly, poly_order: TermOrder, track: bool, budget: u64) -> Result<Self> {
        if !f.is_parameter_free() || f.nparams() != 0 {
            return Err(Error::Invalid(
                "the Jacobian ideal is built from f with r = 0".into(),
            ));
        }
        let n = f.nvars();
        let mode = f.mode();
        let gens: Vec<LaurentPoly> = match mode {
            Mode::Laurent => (0..n).map(|i| f.log_derivative(i)).collect(),
            Mode::Polynomial => (0..n)
                .map(|i| f.partial_derivative(i))
                .collect::<Result<_>>()?,
        };
        Self::from_generators(mode, n, &gens, poly_order, track, budget)
    }

    /// Same construction from arbitrary generators (used per face).
    pub fn from_generators(
        mode: Mode,
        n: usize,
        gens: &[LaurentPoly],
        poly_order: TermOrder,
        track: bool,
        budget: u64,
    ) -> Result<Self> {
        match mode {
            Mode::Polynomial => {
                let ring = Ring::new(n, poly_order);
                let q: Vec<QPoly> = gens.iter().map(|g| to_qpoly(&ring, g, 0, 0)).collect();
                let basis = groebner(&ring, &q, track, budget)?;
                Ok(JacobianIdeal {
                    mode,
                    n,
                    ring,
                    clearing: vec![0; gens.len()],
                    basis,
                })
            }
            Mode::Laurent => {
                let ring = Ring::new(n + 1, TermOrder::Elimination);
                let mut clearing = Vec::new();
                let mut q = Vec::new();
                for g in gens {
                    let e = clearing_power(g);
                    clearing.push(e);
                    q.push(to_qpoly(&ring, g, e, 0));
                }
                let mut rel = ring.monomial(vec![1; n + 1], Rational::one());
                ring.add_term(&mut rel, vec![0; n + 1], -Rational::one());
                q.push(rel);
                let basis = groebner(&ring, &q, track, budget)?;
                Ok(JacobianIdeal {
                    mode,
                    n,
                    ring,
                    clearing,
                    basis,
                })
            }
        }
    }

    /// Standard monomials as `u`-exponents (the `t` coordinate is always 0).
    pub fn standard_monomials(&self) -> Result<Vec<ExponentVec>> {
        let sm = self.basis.standard_monomials()?;
        let mut out = Vec::new();
        for a in sm {
            if self.mode == Mode::Laurent && a[self.n] != 0 {
                return Err(Error::Invalid(
                    "standard monomial involves the auxiliary variable".into(),
                ));
            }
            out.push(ExponentVec(a[..self.n].iter().map(|&e| e as i32).collect()));
        }
        Ok(out)
    }

    pub fn dimension(&self) -> Result<usize> {
        Ok(self.standard_monomials()?.len())
    }

    /// Encode a parameter-free (Laurent) polynomial in the ring.
    pub fn encode(&self, h: &LaurentPoly) -> QPoly {
        match self.mode {
            Mode::Polynomial => to_qpoly(&self.ring, h, 0, 0),
            Mode::Laurent => {
                let e = clearing_power(h);
                to_qpoly(&self.ring, h, e, e)
            }
        }
    }

    /// Decode a `t`-free element back to a parameter-free polynomial;
    /// `t` is mapped to `(u1⋯un)⁻¹`.
    pub fn decode(&self, p: &QPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.n, 0, self.mode);
        for (a, c) in p.terms() {
            let t = if self.mode == Mode::Laurent {
                a[self.n] as i32
            } else {
                0
            };
            let e = ExponentVec(a[..self.n].iter().map(|&x| x as i32 - t).collect());
            out = &out
                + &LaurentPoly::monomial(
                    self.n,
                    0,
                    self.mode,
                    e,
                    ParamCoeff::constant(0, c.clone()),
                );
        }
        out
    }

    /// Normal form of a parameter-free (Laurent) polynomial.
    pub fn normal_form(&self, h: &LaurentPoly) -> LaurentPoly {
        self.decode(&self.basis.normal_form(&self.encode(h)))
    }

    /// Cofactors of GB element `k` over the Laurent generators (`u_i∂_if`
    /// or `∂_if`), with `t = (u1⋯un)⁻¹` substituted back.
    pub fn element_cofactors(&self, k: usize) -> Option<Vec<LaurentPoly>> {
        let cg = self.basis.cofactors.as_ref()?;
        let n = self.n;
        let mut out = Vec::new();
        for (i, e) in self.clearing.iter().enumerate() {
            let mut c = self.decode(&cg[k][i]);
            if *e > 0 {
                let shift = ExponentVec(vec![*e as i32; n]);
                c = &c * &LaurentPoly::monomial(n, 0, self.mode, shift, ParamCoeff::one(0));
            }
            out.push(c);
        }
        Some(out)
    }

    pub fn element(&self, k: usize) -> LaurentPoly {
        self.decode(&self.basis.elements[k])
    }
}

/// Smallest `e` with `(u1⋯un)^e · g` polynomial.
fn clearing_power(g: &LaurentPoly) -> u32 {
    g.support()
        .flat_map(|e| e.0.iter().copied())
        .map(|k| (-k).max(0) as u32)
        .max()
        .unwrap_or(0)
}

fn to_qpoly(ring: &Ring, g: &LaurentPoly, shift: u32, t_power: u32) -> QPoly {
    let n = g.nvars();
    ring.from_terms(g.terms().map(|(e, c)| {
        let mut a: Vec<u32> = e.0.iter().map(|&k| (k + shift as i32) as u32).collect();
        if ring.nvars > n {
            a.push(t_power);
        }
        (a, c.as_constant().expect("parameter-free"))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn brieskorn_pham_is_already_a_basis() {
        let f = parse_poly("u1^5 + u2^5", 2, 0, Mode::Polynomial).unwrap();
        let j = JacobianIdeal::new(&f, TermOrder::Grevlex, true, 10_000).unwrap();
        let mut lms = j.basis.leading_monomials();
        lms.sort();
        assert_eq!(lms, vec![vec![0, 4], vec![4, 0]]);
        assert_eq!(j.dimension().unwrap(), 16);
        assert!(j.basis.verify_cofactors());
    }

    #[test]
    fn cube() {
        let f = parse_poly("u1^3", 1, 0, Mode::Polynomial).unwrap();
        let j = JacobianIdeal::new(&f, TermOrder::Grevlex, true, 100).unwrap();
        assert_eq!(
            j.element(0),
            parse_poly("u1^2", 1, 0, Mode::Polynomial).unwrap()
        );
        assert_eq!(j.dimension().unwrap(), 2);
    }

    #[test]
    fn laurent_saturation() {
        let f = parse_poly("u1 + u1^-1", 1, 0, Mode::Laurent).unwrap();
        let j = JacobianIdeal::new(&f, TermOrder::Grevlex, true, 1000).unwrap();
        assert_eq!(j.dimension().unwrap(), 2);
        assert!(j.basis.verify_cofactors());
        let u2 = parse_poly("u1^2", 1, 0, Mode::Laurent).unwrap();
        assert_eq!(j.normal_form(&u2), LaurentPoly::one(1, 0, Mode::Laurent));
        let inv = parse_poly("u1^-1", 1, 0, Mode::Laurent).unwrap();
        assert_eq!(
            j.normal_form(&inv),
            parse_poly("u1", 1, 0, Mode::Laurent).unwrap()
        );
        // Every element is a Laurent combination of u∂f/∂u.
        let gen = f.log_derivative(0);
        for k in 0..j.basis.elements.len() {
            let c = j.element_cofactors(k).unwrap();
            let el = j.decode(&j.basis.elements[k]);
            assert_eq!(&c[0] * &gen, el);
        }
    }

    #[test]
    fn mirror_of_p2() {
        let f = parse_poly("u1 + u2 + u1^-1*u2^-1", 2, 0, Mode::Laurent).unwrap();
        let j = JacobianIdeal::new(&f, TermOrder::Grevlex, true, 10_000).unwrap();
        assert_eq!(j.dimension().unwrap(), 3);
        assert!(j.basis.verify_cofactors());
    }

    #[test]
    fn unit_ideal_and_non_isolated() {
        let r = Ring::new(1, TermOrder::Grevlex);
        let a = r.from_terms([(vec![1], q(1)), (vec![0], q(-1))]);
        let b = r.from_terms([(vec![1], q(1)), (vec![0], q(1))]);
        assert!(groebner(&r, &[a, b], false, 100).unwrap().is_unit());

        let f = parse_poly("(u1 + u2)^2", 2, 0, Mode::Polynomial).unwrap();
        let j = JacobianIdeal::new(&f, TermOrder::Grevlex, false, 100).unwrap();
        assert!(matches!(j.dimension(), Err(Error::NonIsolated(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let f = parse_poly("u1^7 + u1^3*u2^4 + u2^6 + u1*u2", 2, 0, Mode::Polynomial).unwrap();
        assert!(matches!(
            JacobianIdeal::new(&f, TermOrder::Grevlex, true, 1),
            Err(Error::BudgetExceeded(1))
        ));
    }

    #[test]
    fn division_identity() {
        let f = parse_poly("u1^3 + u1*u2 + u2^3", 2, 0, Mode::Polynomial).unwrap();
        let j = JacobianIdeal::new(&f, TermOrder::Grevlex, true, 10_000).unwrap();
        let h = j.encode(&parse_poly("u1^4*u2 + 7*u2^5 - u1", 2, 0, Mode::Polynomial).unwrap());
        let (nf, quo) = j.basis.divide(&h);
        let mut s = nf.clone();
        for (qi, gi) in quo.iter().zip(&j.basis.generators) {
            s = j.ring.add(&s, &j.ring.mul(qi, gi));
        }
        assert_eq!(s, h);
        assert_eq!(j.basis.normal_form(&h), nf);
    }
}
