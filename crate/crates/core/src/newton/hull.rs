//! Exact facet enumeration for integer point sets.
//!
//! Every `m`-subset of points spanning a hyperplane is a candidate; it is
//! kept when all points lie on one side. Quadratic-ish in the number of
//! subsets, which is fine for the handful of points a support has.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A facet `N·p ≤ b` of the hull, `N` primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct HullFacet {
    pub normal: Vec<i64>,
    pub offset: i64,
    /// Indices of the input points lying on the facet.
    pub points: Vec<usize>,
}

/// Determinant of a square integer matrix (Bareiss, exact).
pub(crate) fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank of an integer matrix (rows), by exact elimination.
pub(crate) fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                let g = a.gcd(&b);
                for j in 0..cols {
                    m[i][j] = m[i][j] * (a / g) - m[r][j] * (b / g);
                }
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the affine hull.
pub(crate) fn affine_rank(points: &[Vec<i64>]) -> usize {
    let Some(p0) = points.first() else { return 0 };
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        0
    } else {
        rank(&diffs)
    }
}

/// Normal to the hyperplane through `m` points in ℤ^m (generalized cross
/// product of the difference vectors), made primitive.
fn hyperplane_normal(pts: &[&Vec<i64>]) -> Option<Vec<i64>> {
    let m = pts[0].len();
    let rows: Vec<Vec<i128>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(pts[0]).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    let mut normal = Vec::with_capacity(m);
    for j in 0..m {
        let minor: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let d = det(minor);
        normal.push(if j % 2 == 0 { d } else { -d });
    }
    let g = normal.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g == 0 {
        return None;
    }
    Some(normal.iter().map(|&x| (x / g) as i64).collect())
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All facets of `conv(points)`. The points must affinely span ℤ^m.
pub(crate) fn facets(points: &[Vec<i64>]) -> Result<Vec<HullFacet>> {
    let m = points.first().map_or(0, |p| p.len());
    if m == 0 || affine_rank(points) < m {
        return Err(Error::NotFullDimensional);
    }
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let mut found: BTreeMap<(Vec<i64>, i64), Vec<usize>> = BTreeMap::new();
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        let pts: Vec<&Vec<i64>> = idx.iter().map(|&i| &points[i]).collect();
        if let Some(mut nrm) = hyperplane_normal(&pts) {
            let mut b = dot(&nrm, pts[0]);
            let vals: Vec<i64> = points.iter().map(|p| dot(&nrm, p)).collect();
            let above = vals.iter().any(|&v| v > b);
            let below = vals.iter().any(|&v| v < b);
            if !(above && below) {
                if above {
                    nrm.iter_mut().for_each(|x| *x = -*x);
                    b = -b;
                }
                let on: Vec<usize> = (0..points.len())
                    .filter(|&i| dot(&nrm, &points[i]) == b)
                    .collect();
                found.entry((nrm, b)).or_insert(on);
            }
        }
        if !next_combination(&mut idx, points.len()) {
            break;
        }
    }
    Ok(found
        .into_iter()
        .map(|((normal, offset), points)| HullFacet {
            normal,
            offset,
            points,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square() {
        let pts = vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2], vec![1, 1]];
        let f = facets(&pts).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f
            .iter()
            .all(|x| x.points.len() == 2 && !x.points.contains(&4)));
    }

    #[test]
    fn interval() {
        let f = facets(&[vec![3], vec![-1], vec![0]]).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.contains(&HullFacet {
            normal: vec![1],
            offset: 3,
            points: vec![0]
        }));
        assert!(f.contains(&HullFacet {
            normal: vec![-1],
            offset: 1,
            points: vec![1]
        }));
    }

    #[test]
    fn flat_input_rejected() {
        assert_eq!(
            facets(&[vec![0, 0], vec![5, 0]]),
            Err(Error::NotFullDimensional)
        );
    }

    #[test]
    fn determinants() {
        assert_eq!(det(vec![vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(det(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]), -1);
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
    }
}
