//! The residue pairing on `E₀` and the self-adjointness checks of the
//! connection matrices.
//!
//! `S(m_k, m_l)` is the coefficient of the socle monomial in the class of
//! `m_k·m_l`, scaled so that `S(m_1, socle) = 1`. In the orthonormal
//! convention `S(ε_i, ε_{μ+1−j}) = δ_ij`, and self-adjointness becomes
//! invariance under `T`, the transpose across the antidiagonal.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::connection::ConnectionData;
use crate::error::{Error, Result};
use crate::jacobi::{JacobianSystem, MilnorBasis};
use crate::matrix::{inverse, mat_mul, rank, ParamMatrix};
use crate::polyring::{ParamCoeff, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingMatrix {
    pub s: Vec<Vec<Rational>>,
    pub socle: usize,
    /// Raw `S(m_1, socle)` before scaling.
    pub normalization: Rational,
    /// Pairs `(k, l)` with `S_kl ≠ 0` but `weight_k + weight_l ≠ n`.
    pub weight_violations: Vec<(usize, usize)>,
}

impl PairingMatrix {
    /// `S` equals the antidiagonal identity.
    pub fn is_antidiagonal_identity(&self) -> bool {
        let mu = self.s.len();
        (0..mu).all(|i| {
            (0..mu).all(|j| {
                self.s[i][j]
                    == if i + j + 1 == mu {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
            })
        })
    }
}

/// Index of the unique element of maximal weight.
pub fn socle(basis: &MilnorBasis) -> Result<usize> {
    let top = basis
        .weights
        .iter()
        .max()
        .ok_or_else(|| Error::Unavailable("empty basis".into()))?;
    let at_top: Vec<usize> = (0..basis.mu())
        .filter(|&k| &basis.weights[k] == top)
        .collect();
    match at_top.as_slice() {
        [k] => Ok(*k),
        _ => Err(Error::Unavailable(format!(
            "maximal weight {top} is attained {} times",
            at_top.len()
        ))),
    }
}

/// Socle-coefficient pairing. A system with parameters is evaluated at
/// `x = 0`.
pub fn residue_pairing(sys: &JacobianSystem) -> Result<PairingMatrix> {
    let owned;
    let sys = if sys.nparams() == 0 {
        sys
    } else {
        owned = sys.specialize(&vec![Rational::zero(); sys.nparams()])?;
        &owned
    };
    let basis = sys.basis();
    let mu = basis.mu();
    let top = socle(basis)?;
    let mut s = vec![vec![Rational::zero(); mu]; mu];
    for k in 0..mu {
        for l in k..mu {
            let prod = sys.basis_poly(k).checked_mul(&sys.basis_poly(l))?;
            let c = sys.divide(&prod)?.remainder[top]
                .as_constant()
                .expect("parameter-free system");
            s[k][l] = c.clone();
            s[l][k] = c;
        }
    }
    let normalization = s[0][top].clone();
    if normalization.is_zero() {
        return Err(Error::Unavailable(
            "the socle coefficient of the lowest element times the socle vanishes".into(),
        ));
    }
    let inv = normalization.recip();
    for row in s.iter_mut() {
        for x in row.iter_mut() {
            *x *= &inv;
        }
    }
    if rank(&s) < mu {
        return Err(Error::Unavailable(
            "the socle-coefficient pairing is degenerate".into(),
        ));
    }
    let n = Rational::from_integer((basis.n as i64).into());
    let mut weight_violations = Vec::new();
    for k in 0..mu {
        for l in 0..mu {
            if !s[k][l].is_zero() && &basis.weights[k] + &basis.weights[l] != n {
                weight_violations.push((k, l));
            }
        }
    }
    Ok(PairingMatrix {
        s,
        socle: top,
        normalization,
        weight_violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSymmetryReport {
    pub b0: bool,
    /// `B_∞ + TB_∞ = n·Id`.
    pub binf: bool,
    pub c: Vec<bool>,
    /// Nonzero defects, labelled.
    pub residuals: Vec<(String, ParamMatrix)>,
}

impl TSymmetryReport {
    pub fn holds(&self) -> bool {
        self.b0 && self.binf && self.c.iter().all(|&b| b)
    }
}

/// Check `TB₀ = B₀`, `B_∞ + TB_∞ = n·Id` and `TC⁽ⁱ⁾ = C⁽ⁱ⁾` in the basis
/// order of `d`.
pub fn check_t_symmetry(d: &ConnectionData) -> TSymmetryReport {
    let mu = d.mu();
    let mut residuals = Vec::new();
    let mut test = |name: String, m: ParamMatrix| {
        let ok = m.is_zero();
        if !ok {
            residuals.push((name, m));
        }
        ok
    };
    let b0 = test("B0 - T(B0)".into(), d.b0.sub(&d.b0.t_transform()));
    let n = Rational::from_integer((d.basis.n as i64).into());
    let n_id = ParamMatrix::identity(mu, d.r).scale(&n);
    let binf = test(
        "Binf + T(Binf) - n*Id".into(),
        d.binf.add(&d.binf.t_transform()).sub(&n_id),
    );
    let c =
        d.c.iter()
            .enumerate()
            .map(|(i, c)| {
                test(
                    format!("C{} - T(C{})", i + 1, i + 1),
                    c.sub(&c.t_transform()),
                )
            })
            .collect();
    TSymmetryReport {
        b0,
        binf,
        c,
        residuals,
    }
}

/// Outcome of [`orthonormalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orthonormal {
    /// Columns are the new basis vectors in old coordinates.
    Change(Vec<Vec<Rational>>),
    /// A self-paired weight block diagonalizes to entries that could not be
    /// matched over ℚ.
    Obstructed {
        weight: Rational,
        diagonal: Vec<Rational>,
    },
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

/// Weight-homogeneous change of basis after which `S` is the antidiagonal
/// identity. Blocks of weights `w ≠ n/2` are paired with their mirror
/// block by inverting `S`; the block `w = n/2` is diagonalized and its
/// entries matched into hyperbolic pairs, which may fail over ℚ.
pub fn orthonormalize(basis: &MilnorBasis, s: &PairingMatrix) -> Result<Orthonormal> {
    if !s.weight_violations.is_empty() {
        return Err(Error::Invalid("the pairing is not weight-graded".into()));
    }
    let mu = basis.mu();
    let n = Rational::from_integer((basis.n as i64).into());
    let mut blocks: Vec<(Rational, usize, usize)> = Vec::new();
    for k in 0..mu {
        match blocks.last_mut() {
            Some((w, _, end)) if *w == basis.weights[k] => *end = k + 1,
            _ => blocks.push((basis.weights[k].clone(), k, k + 1)),
        }
    }
    let mut q = vec![vec![Rational::zero(); mu]; mu];
    for (w, start, end) in &blocks {
        let mirror = blocks
            .iter()
            .find(|b| b.0 == &n - w)
            .ok_or_else(|| Error::Invalid(format!("weight {w} has no mirror")))?;
        let (ms, me) = (mirror.1, mirror.2);
        let m = end - start;
        if me - ms != m || ms != mu - end {
            return Err(Error::Invalid(format!(
                "blocks of weight {w} and {} are not mirror images",
                &n - w
            )));
        }
        if &(w + w) < &n {
            for i in 0..m {
                q[start + i][start + i] = Rational::one();
            }
            // New mirror vectors ν_{m−1−i} with S(e_{start+i}, ν_{m−1−i}) = 1.
            let sab: Vec<Vec<Rational>> = (0..m)
                .map(|i| (0..m).map(|l| s.s[start + i][ms + l].clone()).collect())
                .collect();
            let inv = inverse(&sab).ok_or_else(|| {
                Error::Invalid(format!("pairing block at weight {w} is singular"))
            })?;
            for i in 0..m {
                for l in 0..m {
                    q[ms + l][ms + m - 1 - i] = inv[l][i].clone();
                }
            }
        } else if w + w == n {
            match middle_block(&s.s, *start, m) {
                Ok(vectors) => {
                    for (j, v) in vectors.iter().enumerate() {
                        for l in 0..m {
                            q[start + l][start + j] = v[l].clone();
                        }
                    }
                }
                Err(diagonal) => {
                    return Ok(Orthonormal::Obstructed {
                        weight: w.clone(),
                        diagonal,
                    })
                }
            }
        }
    }
    Ok(Orthonormal::Change(q))
}

/// Vectors `v_0..v_{m−1}` of the self-paired block with
/// `S(v_i, v_{m−1−j}) = δ_ij`, or the diagonal form that resisted.
fn middle_block(
    s: &[Vec<Rational>],
    start: usize,
    m: usize,
) -> std::result::Result<Vec<Vec<Rational>>, Vec<Rational>> {
    let a: Vec<Vec<Rational>> = (0..m)
        .map(|i| (0..m).map(|j| s[start + i][start + j].clone()).collect())
        .collect();
    let form = |x: &[Rational], y: &[Rational]| -> Rational {
        let mut t = Rational::zero();
        for i in 0..m {
            for j in 0..m {
                t += &x[i] * &a[i][j] * &y[j];
            }
        }
        t
    };
    // Orthogonal basis by Gram-Schmidt, picking an anisotropic vector first.
    let mut pool: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut ortho: Vec<(Vec<Rational>, Rational)> = Vec::new();
    while !pool.is_empty() {
        let mut pick = pool.iter().position(|v| !form(v, v).is_zero());
        if pick.is_none() {
            let pairs = (0..pool.len()).flat_map(|i| (i + 1..pool.len()).map(move |j| (i, j)));
            let found = pairs
                .map(|(i, j)| {
                    (
                        i,
                        pool[i]
                            .iter()
                            .zip(&pool[j])
                            .map(|(x, y)| x + y)
                            .collect::<Vec<_>>(),
                    )
                })
                .find(|(_, sum)| !form(sum, sum).is_zero());
            if let Some((i, sum)) = found {
                pool[i] = sum;
                pick = Some(i);
            }
        }
        let Some(p) = pick else {
            return Err(vec![Rational::zero(); m]);
        };
        let v = pool.remove(p);
        let nv = form(&v, &v);
        for w in pool.iter_mut() {
            let c = form(w, &v) / &nv;
            for (x, y) in w.iter_mut().zip(&v) {
                *x -= &c * y;
            }
        }
        ortho.push((v, nv));
    }
    // Match entries a, b with −ab a square into hyperbolic pairs.
    let mut pairs: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::new();
    let mut left: Vec<(Vec<Rational>, Rational)> = Vec::new();
    while let Some((v, a)) = ortho.pop() {
        let partner = ortho
            .iter()
            .position(|(_, b)| rational_sqrt(&-(&a * b)).is_some());
        match partner {
            Some(j) => {
                let (w, b) = ortho.remove(j);
                let t = rational_sqrt(&-(&a * &b)).expect("checked") / &b;
                let x: Vec<Rational> = v.iter().zip(&w).map(|(p, q)| p + &t * q).collect();
                let two_a = &a * Rational::from_integer(2.into());
                let y: Vec<Rational> = v
                    .iter()
                    .zip(&w)
                    .map(|(p, q)| (p - &t * q) / &two_a)
                    .collect();
                pairs.push((x, y));
            }
            None => left.push((v, a)),
        }
    }
    let centre = match left.as_slice() {
        [] => None,
        [(v, a)] if m % 2 == 1 => match rational_sqrt(a) {
            Some(r) => Some(v.iter().map(|x| x / &r).collect::<Vec<_>>()),
            None => return Err(vec![a.clone()]),
        },
        _ => return Err(left.into_iter().map(|x| x.1).collect()),
    };
    let mut out = vec![Vec::new(); m];
    for (i, (x, y)) in pairs.into_iter().enumerate() {
        out[i] = x;
        out[m - 1 - i] = y;
    }
    if let Some(c) = centre {
        out[m / 2] = c;
    }
    Ok(out)
}

/// `Qᵀ S Q`.
pub fn transform_pairing(s: &[Vec<Rational>], q: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mu = s.len();
    let qt: Vec<Vec<Rational>> = (0..mu)
        .map(|i| (0..mu).map(|j| q[j][i].clone()).collect())
        .collect();
    mat_mul(&mat_mul(&qt, s), q)
}

/// Constant entries as a parameter matrix, for tests and reports.
pub fn constant_matrix(a: &[Vec<Rational>], r: usize) -> ParamMatrix {
    let mu = a.len();
    ParamMatrix::from_fn(mu, mu, r, |i, j| ParamCoeff::constant(r, a[i][j].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::compute_connection;
    use crate::jacobi::Config;
    use crate::polyring::{parse_poly, ExponentVec, Mode};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn sys(f: &str, n: usize, mode: Mode, g: &[&str]) -> JacobianSystem {
        let f = parse_poly(f, n, 0, mode).unwrap();
        let g: Vec<_> = g
            .iter()
            .map(|s| parse_poly(s, n, 0, mode).unwrap())
            .collect();
        JacobianSystem::new(&f, &g, &Config::default()).unwrap()
    }

    #[test]
    fn golden_pairing_is_antidiagonal() {
        let s = sys("u1^5 + u2^5", 2, Mode::Polynomial, &["u1", "u2"]);
        assert_eq!(
            s.basis().monomials[socle(s.basis()).unwrap()],
            ExponentVec(vec![3, 3])
        );
        let p = residue_pairing(&s).unwrap();
        assert!(p.weight_violations.is_empty());
        let b = s.basis();
        for k in 0..16 {
            for l in 0..16 {
                let (mk, ml) = (&b.monomials[k].0, &b.monomials[l].0);
                let expect = ml[0] == 3 - mk[0] && ml[1] == 3 - mk[1];
                assert_eq!(p.s[k][l] == Rational::one(), expect);
                assert_eq!(p.s[k][l].is_zero(), !expect);
            }
        }
        match orthonormalize(b, &p).unwrap() {
            Orthonormal::Change(change) => assert_eq!(transform_pairing(&p.s, &change), p.s),
            other => panic!("{other:?}"),
        }
        let d = compute_connection(&s).unwrap();
        assert!(check_t_symmetry(&d).holds());
    }

    #[test]
    fn small_pairings() {
        let s = sys("u1^3", 1, Mode::Polynomial, &[]);
        assert_eq!(socle(s.basis()).unwrap(), 1);
        let p = residue_pairing(&s).unwrap();
        assert_eq!(p.s, vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        let s = sys("u1 + u1^-1", 1, Mode::Laurent, &[]);
        let p = residue_pairing(&s).unwrap();
        assert!(p.is_antidiagonal_identity());
    }

    #[test]
    fn scrambled_basis_breaks_t_symmetry() {
        let s = sys("u1^5 + u2^5", 2, Mode::Polynomial, &["u1", "u2"]);
        let d = compute_connection(&s).unwrap();
        let mut order: Vec<usize> = (0..16).collect();
        order.swap(0, 1);
        let rep = check_t_symmetry(&d.reorder(&order));
        assert!(!rep.binf);
        assert!(!rep.holds());
        assert!(!rep.residuals.is_empty());
    }

    #[test]
    fn orthonormalize_scales_and_pairs() {
        let basis = MilnorBasis {
            mode: Mode::Polynomial,
            n: 1,
            quantum: 3,
            monomials: vec![ExponentVec(vec![0]), ExponentVec(vec![1])],
            levels: vec![1, 2],
            weights: vec![q(1, 3), q(2, 3)],
        };
        let p = PairingMatrix {
            s: vec![vec![q(0, 1), q(3, 1)], vec![q(3, 1), q(0, 1)]],
            socle: 1,
            normalization: q(1, 1),
            weight_violations: vec![],
        };
        let Orthonormal::Change(c) = orthonormalize(&basis, &p).unwrap() else {
            panic!()
        };
        let t = transform_pairing(&p.s, &c);
        assert_eq!(t, vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
    }

    #[test]
    fn middle_block_obstruction() {
        let basis = MilnorBasis {
            mode: Mode::Laurent,
            n: 2,
            quantum: 1,
            monomials: vec![
                ExponentVec(vec![0, 0]),
                ExponentVec(vec![1, 0]),
                ExponentVec(vec![1, 1]),
            ],
            levels: vec![0, 1, 2],
            weights: vec![q(0, 1), q(1, 1), q(2, 1)],
        };
        let mk = |c: i64| PairingMatrix {
            s: vec![
                vec![q(0, 1), q(0, 1), q(1, 1)],
                vec![q(0, 1), q(c, 1), q(0, 1)],
                vec![q(1, 1), q(0, 1), q(0, 1)],
            ],
            socle: 2,
            normalization: q(1, 1),
            weight_violations: vec![],
        };
        assert!(matches!(
            orthonormalize(&basis, &mk(2)).unwrap(),
            Orthonormal::Obstructed { .. }
        ));
        let Orthonormal::Change(c) = orthonormalize(&basis, &mk(4)).unwrap() else {
            panic!()
        };
        let t = transform_pairing(&mk(4).s, &c);
        assert_eq!(t[1][1], q(1, 1));
        assert_eq!(t[0][2], q(1, 1));
        // Two-dimensional split block [[0,1],[1,0]] stays as it is up to scaling.
        let mut sq = vec![vec![q(0, 1); 2]; 2];
        sq[0][1] = q(1, 1);
        sq[1][0] = q(1, 1);
        let v = middle_block(&sq, 0, 2).unwrap();
        let t = transform_pairing(
            &sq,
            &[
                vec![v[0][0].clone(), v[1][0].clone()],
                vec![v[0][1].clone(), v[1][1].clone()],
            ],
        );
        assert_eq!(t, sq);
    }
}
