use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::metric::Metric;
use crate::linalg::RMat;
use crate::{Error, Result};

/// `ρ(x) = (1 - |x|^2) / 2`, the defining function of the ball model.
pub fn rho_ball(x: &[f64]) -> f64 {
    0.5 * (1.0 - x.iter().map(|v| v * v).sum::<f64>())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartKind {
    /// `e^f = 1/ρ`: the ball model of hyperbolic space.
    Hyperbolic,
    /// `f = 0`.
    Flat,
    /// `f = -log ρ + eps |x|^4`.
    Perturbed { eps: f64 },
}

/// Conformal metric `e^{2f} g_0` on the open unit ball of `R^n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformalChart {
    pub n: usize,
    pub kind: ChartKind,
}

impl ConformalChart {
    pub fn hyperbolic(n: usize) -> Self {
        Self {
            n,
            kind: ChartKind::Hyperbolic,
        }
    }

    pub fn flat(n: usize) -> Self {
        Self {
            n,
            kind: ChartKind::Flat,
        }
    }

    /// The perturbation used to show that `R̂` detects non-hyperbolic metrics.
    pub fn perturbed(n: usize, eps: f64) -> Self {
        Self {
            n,
            kind: ChartKind::Perturbed { eps },
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.kind == ChartKind::Hyperbolic
    }

    pub fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if rho_ball(x) <= 0.0 {
            return Err(Error::outside(x));
        }
        Ok(())
    }

    fn r2(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    pub fn f(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(match self.kind {
            ChartKind::Flat => 0.0,
            ChartKind::Hyperbolic => -rho_ball(x).ln(),
            ChartKind::Perturbed { eps } => -rho_ball(x).ln() + eps * Self::r2(x).powi(2),
        })
    }

    /// `e^f`, the length of `∂_i`.
    pub fn scale(&self, x: &[f64]) -> Result<f64> {
        Ok(self.f(x)?.exp())
    }

    pub fn grad_f(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        let rho = rho_ball(x);
        let r2 = Self::r2(x);
        Ok(x.iter()
            .map(|&xi| match self.kind {
                ChartKind::Flat => 0.0,
                ChartKind::Hyperbolic => xi / rho,
                ChartKind::Perturbed { eps } => xi / rho + 4.0 * eps * r2 * xi,
            })
            .collect())
    }

    /// Euclidean Laplacian of `f`.
    pub fn laplacian_f(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        let n = self.n as f64;
        let rho = rho_ball(x);
        let r2 = Self::r2(x);
        let hyp = n / rho + r2 / (rho * rho);
        Ok(match self.kind {
            ChartKind::Flat => 0.0,
            ChartKind::Hyperbolic => hyp,
            ChartKind::Perturbed { eps } => hyp + 4.0 * (n + 2.0) * eps * r2,
        })
    }

    /// Scalar curvature of `e^{2f} g_0`:
    /// `-e^{-2f} (2(n-1) Δf + (n-1)(n-2) |∇f|^2)`.
    pub fn scalar_curvature(&self, x: &[f64]) -> Result<f64> {
        let n = self.n as f64;
        let df = self.grad_f(x)?;
        let g2: f64 = df.iter().map(|v| v * v).sum();
        let e2f = (2.0 * self.f(x)?).exp();
        Ok(-(2.0 * (n - 1.0) * self.laplacian_f(x)? + (n - 1.0) * (n - 2.0) * g2) / e2f)
    }
}

impl Metric for ConformalChart {
    fn dim(&self) -> usize {
        self.n
    }

    fn metric(&self, x: &[f64]) -> Result<RMat> {
        let e2f = (2.0 * self.f(x)?).exp();
        Ok(RMat::identity(self.n).scale(e2f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_scalar_curvature() {
        for n in 3..=6 {
            let c = ConformalChart::hyperbolic(n);
            let x: Vec<f64> = (0..n).map(|i| 0.1 * (i as f64 + 1.0) / n as f64).collect();
            let s = c.scalar_curvature(&x).unwrap();
            assert!((s + (n * (n - 1)) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn domain() {
        let c = ConformalChart::hyperbolic(3);
        assert!(c.f(&[1.0, 0.0, 0.0]).is_err());
        assert!(c.f(&[0.0, 0.0]).is_err());
        assert!((c.scale(&[0.0; 3]).unwrap() - 2.0).abs() < 1e-15);
    }
}
