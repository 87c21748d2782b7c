use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::chart::rho_ball;
use super::fields::{KillingSpinor, SpinorField};
use super::metric::{sectional_curvature, Metric};
use crate::clifford::CliffordRep;
use crate::linalg::{inner, norm, norm_sqr, RMat, C64, I};
use crate::{Error, Result};

/// Sectional curvature of a plane tangent to the slices of the warped
/// product `dt^2 + e^{2t} h`, where `h` has sectional curvature `k0` there.
pub fn warped_sectional(k0: f64, t: f64) -> f64 {
    (-2.0 * t).exp() * k0 - 1.0
}

/// `dt^2 + e^{2t} h` with `h` the constant-curvature-`k0` metric
/// `4 |dy|^2 / (1 + k0 |y|^2)^2`; coordinates `(t, y)`.
struct WarpedSpaceForm {
    dim: usize,
    k0: f64,
}

impl Metric for WarpedSpaceForm {
    fn dim(&self) -> usize {
        self.dim
    }

    fn metric(&self, x: &[f64]) -> Result<RMat> {
        let t = x[0];
        let y2: f64 = x[1..].iter().map(|v| v * v).sum();
        let conf = 1.0 + self.k0 * y2;
        if conf <= 0.0 {
            return Err(Error::Singular);
        }
        let s = (2.0 * t).exp() * 4.0 / (conf * conf);
        Ok(RMat::from_fn(self.dim, |i, j| match (i, j) {
            (0, 0) => 1.0,
            (i, j) if i == j => s,
            _ => 0.0,
        }))
    }
}

/// Finite-difference value of the same sectional curvature, for the plane
/// spanned by `∂_{y_1}, ∂_{y_2}` at slice point `y` (at least two coordinates).
pub fn warped_sectional_fd(k0: f64, t: f64, y: &[f64]) -> Result<f64> {
    if y.len() < 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            got: y.len(),
        });
    }
    let dim = y.len() + 1;
    let m = WarpedSpaceForm { dim, k0 };
    let mut x = alloc::vec![t];
    x.extend_from_slice(y);
    let mut u = alloc::vec![0.0; dim];
    let mut v = alloc::vec![0.0; dim];
    u[1] = 1.0;
    v[2] = 1.0;
    sectional_curvature(&m, &x, &u, &v, 1e-4, 1e-5)
}

/// Hyperbolic distance from the origin in the ball model,
/// `log((1 + |x|) / (1 - |x|))`.
pub fn radial_distance(x: &[f64]) -> f64 {
    let r = norm(x);
    ((1.0 + r) / (1.0 - r)).ln()
}

/// `|φ_u(x)|^2 = ρ^{-1} ((1 + |x|^2)|u|^2 + 2 Re⟨i x·u, u⟩)`.
pub fn killing_norm_sqr_closed_form(rep: &CliffordRep, u: &[C64], x: &[f64]) -> Result<f64> {
    let rho = rho_ball(x);
    if rho <= 0.0 {
        return Err(Error::outside(x));
    }
    let xu = rep.vector_action(x, u)?;
    let ixu: Vec<C64> = xu.iter().map(|v| I * v).collect();
    let r2: f64 = x.iter().map(|v| v * v).sum();
    Ok(((1.0 + r2) * norm_sqr(u) + 2.0 * inner(&ixu, u).re) / rho)
}

/// Observed constants in `c1 e^{-r} ≤ |φ_u|^2 ≤ c2 e^{r}` along rays, and
/// the largest ratio `|X(|φ_u|^2)| / |φ_u|^2` over unit vectors `X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormGrowth {
    /// `min |φ_u|^2 e^{r}`.
    pub c1: f64,
    /// `max |φ_u|^2 e^{-r}`.
    pub c2: f64,
    pub samples: usize,
    pub max_derivative_ratio: f64,
    /// Largest disagreement between the evaluated norm and the closed form.
    pub closed_form_error: f64,
}

/// Evaluate `|φ_u|^2` along each unit direction in `directions` at the
/// Euclidean radii `radii` (each `< 1`).
pub fn norm_growth_check(
    u: &[C64],
    n: usize,
    radii: &[f64],
    directions: &[Vec<f64>],
) -> Result<NormGrowth> {
    let rep = CliffordRep::new(n)?;
    let field = KillingSpinor::new(rep.clone(), u.to_vec())?;
    let mut c1 = f64::INFINITY;
    let mut c2: f64 = 0.0;
    let mut max_ratio: f64 = 0.0;
    let mut cf_err: f64 = 0.0;
    let mut samples = 0;
    for dir in directions {
        let len = norm(dir);
        for &s in radii {
            let x: Vec<f64> = dir.iter().map(|d| d * s / len).collect();
            let phi = field.eval(&x)?;
            let n2 = norm_sqr(&phi);
            let r = radial_distance(&x);
            c1 = c1.min(n2 * r.exp());
            c2 = c2.max(n2 * (-r).exp());
            let cf = killing_norm_sqr_closed_form(&rep, u, &x)?;
            cf_err = cf_err.max((cf - n2).abs() / n2);
            // unit radial vector ρ ∂_s and the unit coordinate vectors ρ ∂_a
            let rho = rho_ball(&x);
            let mut dirs: Vec<Vec<f64>> = (0..n)
                .map(|a| {
                    let mut e = alloc::vec![0.0; n];
                    e[a] = 1.0;
                    e
                })
                .collect();
            dirs.push(dir.iter().map(|d| d / len).collect());
            let partials: Vec<Vec<C64>> = (0..n)
                .map(|a| field.partial(&x, a))
                .collect::<Result<_>>()?;
            for v in &dirs {
                let mut dphi = alloc::vec![C64::new(0.0, 0.0); phi.len()];
                for (va, pa) in v.iter().zip(&partials) {
                    for (d, p) in dphi.iter_mut().zip(pa) {
                        *d += p * *va;
                    }
                }
                let deriv = 2.0 * rho * inner(&dphi, &phi).re;
                max_ratio = max_ratio.max(deriv.abs() / n2);
            }
            samples += 1;
        }
    }
    Ok(NormGrowth {
        c1,
        c2,
        samples,
        max_derivative_ratio: max_ratio,
        closed_form_error: cf_err,
    })
}
