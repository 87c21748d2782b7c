//! Finite-difference Levi-Civita data for metrics given in coordinates.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{dot, RMat};
use crate::{Error, Result};

/// A Riemannian metric in a coordinate chart.
pub trait Metric {
    fn dim(&self) -> usize;
    /// Coordinate components `g_ij(x)`.
    fn metric(&self, x: &[f64]) -> Result<RMat>;
}

fn shifted(x: &[f64], a: usize, h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[a] += h;
    y
}

/// `Γ^k_ij`, returned as `out[k].get(i, j)`, by centered differences of
/// the metric with step `h`.
pub fn christoffel(m: &dyn Metric, x: &[f64], h: f64) -> Result<Vec<RMat>> {
    let n = m.dim();
    let g = m.metric(x)?;
    let ginv = g.inverse().ok_or(Error::Singular)?;
    let dg: Vec<RMat> = (0..n)
        .map(|a| {
            let p = m.metric(&shifted(x, a, h))?;
            let q = m.metric(&shifted(x, a, -h))?;
            Ok((&p - &q).scale(0.5 / h))
        })
        .collect::<Result<_>>()?;
    // Γ_{l,ij} = ½ (∂_i g_jl + ∂_j g_il - ∂_l g_ij)
    let lower =
        |l: usize, i: usize, j: usize| 0.5 * (dg[i].get(j, l) + dg[j].get(i, l) - dg[l].get(i, j));
    Ok((0..n)
        .map(|k| {
            RMat::from_fn(n, |i, j| {
                (0..n).map(|l| ginv.get(k, l) * lower(l, i, j)).sum()
            })
        })
        .collect())
}

/// `R(∂_i, ∂_j) ∂_k = Σ_l R^l_{kij} ∂_l`, returned as `out[i][j]` with
/// entries `(l, k)`, using `R(X,Y) = ∇_X ∇_Y - ∇_Y ∇_X - ∇_[X,Y]`.
pub fn riemann(m: &dyn Metric, x: &[f64], h_outer: f64, h_inner: f64) -> Result<Vec<Vec<RMat>>> {
    let n = m.dim();
    let gam = christoffel(m, x, h_inner)?;
    let dgam: Vec<Vec<RMat>> = (0..n)
        .map(|a| {
            let p = christoffel(m, &shifted(x, a, h_outer), h_inner)?;
            let q = christoffel(m, &shifted(x, a, -h_outer), h_inner)?;
            Ok(p.iter()
                .zip(&q)
                .map(|(p, q)| (p - q).scale(0.5 / h_outer))
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(RMat::from_fn(n, |l, k| {
                let mut v = dgam[i][l].get(j, k) - dgam[j][l].get(i, k);
                for mm in 0..n {
                    v += gam[l].get(i, mm) * gam[mm].get(j, k)
                        - gam[l].get(j, mm) * gam[mm].get(i, k);
                }
                v
            }));
        }
        out.push(row);
    }
    Ok(out)
}

/// Sectional curvature of the plane spanned by coordinate vectors `u, v`.
pub fn sectional_curvature(
    m: &dyn Metric,
    x: &[f64],
    u: &[f64],
    v: &[f64],
    h_outer: f64,
    h_inner: f64,
) -> Result<f64> {
    let n = m.dim();
    let r = riemann(m, x, h_outer, h_inner)?;
    let g = m.metric(x)?;
    // R(u, v) v
    let mut rvv = alloc::vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let w = u[i] * v[j];
            if w == 0.0 {
                continue;
            }
            let img = r[i][j].apply(v);
            for l in 0..n {
                rvv[l] += w * img[l];
            }
        }
    }
    let gu = g.apply(u);
    let gv = g.apply(v);
    let num = dot(&gu, &rvv);
    let den = dot(&gu, u) * dot(&gv, v) - dot(&gu, v).powi(2);
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeo::ConformalChart;

    #[test]
    fn ball_model_has_curvature_minus_one() {
        let c = ConformalChart::hyperbolic(3);
        let x = [0.2, -0.1, 0.3];
        let k =
            sectional_curvature(&c, &x, &[1.0, 0.5, 0.0], &[0.0, 1.0, -1.0], 1e-4, 1e-5).unwrap();
        assert!((k + 1.0).abs() < 1e-5, "{k}");
    }
}
