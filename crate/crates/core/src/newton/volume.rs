//! Exact Euclidean volume of a lattice polytope by pyramids over facets.
//!
//! `vol(P) = (1/m) Σ_σ h_σ · vol(σ)` with apex at the centroid. A facet
//! with primitive normal `N` projects injectively onto the coordinate
//! hyperplane `x_k = 0` whenever `N_k ≠ 0`, scaling its volume by
//! `|N_k| / |N|`; the `|N|` cancels against the height, so no square
//! roots appear.

use num_traits::Zero;

use super::hull::facets;
use crate::error::Result;
use crate::polyring::Rational;

pub(crate) fn volume(points: &[Vec<i64>]) -> Result<Rational> {
    let m = points[0].len();
    if m == 1 {
        let lo = points.iter().map(|p| p[0]).min().unwrap();
        let hi = points.iter().map(|p| p[0]).max().unwrap();
        return Ok(Rational::from_integer((hi - lo).into()));
    }
    let fs = facets(points)?;
    let count = Rational::from_integer((points.len() as i64).into());
    let centroid: Vec<Rational> = (0..m)
        .map(|k| Rational::from_integer(points.iter().map(|p| p[k]).sum::<i64>().into()) / &count)
        .collect();
    let mut total = Rational::zero();
    for f in fs {
        let k = (0..m).max_by_key(|&k| f.normal[k].abs()).unwrap();
        let projected: Vec<Vec<i64>> = f
            .points
            .iter()
            .map(|&i| {
                points[i]
                    .iter()
                    .enumerate()
                    .filter(|(c, _)| *c != k)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let base = volume(&projected)?;
        let nc: Rational = f
            .normal
            .iter()
            .zip(&centroid)
            .map(|(a, c)| c * Rational::from_integer((*a).into()))
            .sum();
        let height = Rational::from_integer(f.offset.into()) - nc;
        total += height * base / Rational::from_integer(f.normal[k].abs().into());
    }
    Ok(total / Rational::from_integer((m as i64).into()))
}
