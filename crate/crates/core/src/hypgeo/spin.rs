use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::chart::ConformalChart;
use super::fields::{fd_partial, SpinorField};
use super::metric::christoffel;
use super::{FD_STEP, FD_STEP_CURVATURE};
use crate::clifford::{CliffordRep, Spinor};
use crate::linalg::{inner, norm_sqr, CMat, RMat, C64, I};
use crate::Result;

/// Whether derivatives of fields and connection forms are taken in closed
/// form or by centered differences (Christoffel symbols of the metric).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

/// Spinor bundle of a conformal chart, trivialized along `e_i = e^{-f} ∂_i`.
#[derive(Clone, Debug)]
pub struct SpinGeometry {
    pub chart: ConformalChart,
    pub rep: CliffordRep,
    pub mode: DerivativeMode,
    frame_gens: Vec<CMat>,
}

/// The two sides of the pointwise Lichnerowicz identity
/// `div α̂ = (ŝ/4)|φ|^2 + |∇̂φ|^2 - |D̂φ|^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LichnerowiczSample {
    pub divergence: f64,
    pub divergence_imag: f64,
    pub scalar_term: f64,
    pub killing_term: f64,
    pub dirac_term: f64,
    pub rhs: f64,
    pub residual: f64,
}

fn shifted(x: &[f64], a: usize, h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[a] += h;
    y
}

fn add_scaled(acc: &mut [C64], v: &[C64], s: C64) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b * s;
    }
}

impl SpinGeometry {
    pub fn new(chart: ConformalChart, mode: DerivativeMode) -> Result<Self> {
        let rep = CliffordRep::new(chart.n)?;
        let frame_gens = rep
            .generators()
            .iter()
            .map(|g| g.scale_real(-1.0))
            .collect();
        Ok(Self {
            chart,
            rep,
            mode,
            frame_gens,
        })
    }

    pub fn n(&self) -> usize {
        self.chart.n
    }

    /// `c(e_k)` for the 0-based frame index `k`.
    pub fn frame_clifford(&self, k: usize) -> &CMat {
        &self.frame_gens[k]
    }

    /// `c(v)` for frame components `v`.
    pub fn clifford(&self, v: &[f64]) -> CMat {
        let mut m = CMat::zeros(self.rep.spinor_dim());
        for (vk, c) in v.iter().zip(&self.frame_gens) {
            m += &c.scale_real(*vk);
        }
        m
    }

    /// Connection forms `out[k].get(i, j) = ω_ij(e_k) = g(∇_{e_k} e_i, e_j)`.
    pub fn connection_forms(&self, x: &[f64]) -> Result<Vec<RMat>> {
        let n = self.n();
        let e_f = self.chart.scale(x)?;
        match self.mode {
            DerivativeMode::Analytic => {
                let df = self.chart.grad_f(x)?;
                Ok((0..n)
                    .map(|k| {
                        RMat::from_fn(n, |i, j| {
                            let dj = if j == k { df[i] } else { 0.0 };
                            let di = if i == k { df[j] } else { 0.0 };
                            (dj - di) / e_f
                        })
                    })
                    .collect())
            }
            DerivativeMode::FiniteDifference => {
                // e_i has coordinate components e^{-f} δ_mi; differentiate
                // the conformal factor and use Christoffel symbols of g
                let gam = christoffel(&self.chart, x, FD_STEP)?;
                let inv_scale = |y: &[f64]| self.chart.scale(y).map(|s| 1.0 / s);
                let d_inv: Vec<f64> = (0..n)
                    .map(|a| {
                        Ok((inv_scale(&shifted(x, a, FD_STEP))?
                            - inv_scale(&shifted(x, a, -FD_STEP))?)
                            / (2.0 * FD_STEP))
                    })
                    .collect::<Result<_>>()?;
                let e2f = e_f * e_f;
                Ok((0..n)
                    .map(|k| {
                        RMat::from_fn(n, |i, j| {
                            // ∇_{e_k} e_i, component j, then g(·, e_j) = e^{2f} e^{-f} (·)_j
                            let ek_of_e = if i == j { d_inv[k] / e_f } else { 0.0 };
                            let gamma = gam[j].get(k, i) / e2f;
                            e2f / e_f * (ek_of_e + gamma)
                        })
                    })
                    .collect())
            }
        }
    }

    /// Spinor connection matrices `Ω_k = ½ Σ_{i<j} ω_ij(e_k) c(e_i) c(e_j)`.
    pub fn spin_connection(&self, x: &[f64]) -> Result<Vec<CMat>> {
        let n = self.n();
        let forms = self.connection_forms(x)?;
        Ok(forms
            .iter()
            .map(|w| {
                let mut m = CMat::zeros(self.rep.spinor_dim());
                for i in 0..n {
                    for j in (i + 1)..n {
                        let c = w.get(i, j);
                        if c != 0.0 {
                            m += &(&self.frame_gens[i] * &self.frame_gens[j]).scale_real(0.5 * c);
                        }
                    }
                }
                m
            })
            .collect())
    }

    fn partials(&self, field: &dyn SpinorField, x: &[f64]) -> Result<Vec<Spinor>> {
        (0..self.n())
            .map(|a| match self.mode {
                DerivativeMode::Analytic => field.partial(x, a),
                DerivativeMode::FiniteDifference => fd_partial(field, x, a, FD_STEP),
            })
            .collect()
    }

    /// `∇_{e_k} φ` for every frame vector.
    pub fn nabla(&self, field: &dyn SpinorField, x: &[f64]) -> Result<Vec<Spinor>> {
        self.chart.check(x)?;
        let phi = field.eval(x)?;
        let e_f = self.chart.scale(x)?;
        let omega = self.spin_connection(x)?;
        let parts = self.partials(field, x)?;
        Ok(parts
            .into_iter()
            .zip(&omega)
            .map(|(d, om)| {
                let rot = om.apply(&phi);
                d.iter().zip(&rot).map(|(d, r)| d / e_f + r).collect()
            })
            .collect())
    }

    /// `∇_X φ` for `X` given by frame components.
    pub fn nabla_along(&self, field: &dyn SpinorField, x: &[f64], v: &[f64]) -> Result<Spinor> {
        let all = self.nabla(field, x)?;
        let mut out = alloc::vec![C64::new(0.0, 0.0); field.spinor_dim()];
        for (vk, d) in v.iter().zip(&all) {
            add_scaled(&mut out, d, C64::new(*vk, 0.0));
        }
        Ok(out)
    }

    /// `∇̂_{e_k} φ = ∇_{e_k} φ + (i/2) e_k · φ`.
    pub fn killing_connection(&self, field: &dyn SpinorField, x: &[f64]) -> Result<Vec<Spinor>> {
        let phi = field.eval(x)?;
        let mut out = self.nabla(field, x)?;
        for (k, d) in out.iter_mut().enumerate() {
            let cphi = self.frame_gens[k].apply(&phi);
            add_scaled(d, &cphi, I * 0.5);
        }
        Ok(out)
    }

    /// `D̂ φ = Σ e_k · ∇_{e_k} φ - (i/2) n φ`.
    pub fn dirac_hat(&self, field: &dyn SpinorField, x: &[f64]) -> Result<Spinor> {
        let phi = field.eval(x)?;
        let nab = self.nabla(field, x)?;
        let mut out: Spinor = phi
            .iter()
            .map(|p| p * (-0.5 * self.n() as f64) * I)
            .collect();
        for (k, d) in nab.iter().enumerate() {
            add_scaled(&mut out, &self.frame_gens[k].apply(d), C64::new(1.0, 0.0));
        }
        Ok(out)
    }

    /// `|∇̂φ| / |φ|` with `|∇̂φ|^2 = Σ_k |∇̂_{e_k} φ|^2`.
    pub fn killing_residual(&self, field: &dyn SpinorField, x: &[f64]) -> Result<f64> {
        let phi = field.eval(x)?;
        let nh: f64 = self
            .killing_connection(field, x)?
            .iter()
            .map(|v| norm_sqr(v))
            .sum();
        Ok((nh / norm_sqr(&phi)).sqrt())
    }

    /// Coordinate connection matrices `Γ_a` with `∇_{∂_a} = ∂_a + Γ_a`,
    /// optionally of the Killing connection.
    fn coordinate_connection(&self, x: &[f64], hat: bool) -> Result<Vec<CMat>> {
        let e_f = self.chart.scale(x)?;
        let omega = self.spin_connection(x)?;
        Ok(omega
            .into_iter()
            .enumerate()
            .map(|(a, om)| {
                let mut m = om.scale_real(e_f);
                if hat {
                    m += &self.frame_gens[a].scale(I * (0.5 * e_f));
                }
                m
            })
            .collect())
    }

    fn curvature_frame(&self, x: &[f64], hat: bool) -> Result<Vec<Vec<CMat>>> {
        let n = self.n();
        let h = FD_STEP_CURVATURE;
        let gam = self.coordinate_connection(x, hat)?;
        let dgam: Vec<Vec<CMat>> = (0..n)
            .map(|a| {
                let p = self.coordinate_connection(&shifted(x, a, h), hat)?;
                let q = self.coordinate_connection(&shifted(x, a, -h), hat)?;
                Ok(p.iter()
                    .zip(&q)
                    .map(|(p, q)| (p - q).scale_real(0.5 / h))
                    .collect())
            })
            .collect::<Result<_>>()?;
        let inv_e2f = 1.0 / self.chart.scale(x)?.powi(2);
        Ok((0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let mut r = &dgam[a][b] - &dgam[b][a];
                        r += &gam[a].commutator(&gam[b]);
                        r.scale_real(inv_e2f)
                    })
                    .collect()
            })
            .collect())
    }

    fn contract(&self, table: &[Vec<CMat>], u: &[f64], v: &[f64]) -> CMat {
        let mut out = CMat::zeros(self.rep.spinor_dim());
        for (a, row) in table.iter().enumerate() {
            for (b, m) in row.iter().enumerate() {
                let w = u[a] * v[b];
                if w != 0.0 {
                    out += &m.scale_real(w);
                }
            }
        }
        out
    }

    /// Spinor curvature `R(X, Y)` of the Levi-Civita connection, frame
    /// components, by differencing the connection matrices.
    pub fn curvature(&self, x: &[f64], u: &[f64], v: &[f64]) -> Result<CMat> {
        Ok(self.contract(&self.curvature_frame(x, false)?, u, v))
    }

    /// `R̂(X, Y) = R(X, Y) - ¼ [X·, Y·]`.
    pub fn curvature_hat(&self, x: &[f64], u: &[f64], v: &[f64]) -> Result<CMat> {
        let r = self.curvature(x, u, v)?;
        let cu = self.clifford(u);
        let cv = self.clifford(v);
        Ok(&r - &cu.commutator(&cv).scale_real(0.25))
    }

    /// Curvature of `∇̂` computed directly from its connection matrices.
    pub fn curvature_hat_direct(&self, x: &[f64], u: &[f64], v: &[f64]) -> Result<CMat> {
        Ok(self.contract(&self.curvature_frame(x, true)?, u, v))
    }

    /// Largest operator norm of `R̂(e_a, e_b)` over frame pairs.
    pub fn curvature_hat_max(&self, x: &[f64]) -> Result<f64> {
        let n = self.n();
        let r = self.curvature_frame(x, false)?;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in (a + 1)..n {
                let c = self.frame_gens[a]
                    .commutator(&self.frame_gens[b])
                    .scale_real(0.25);
                worst = worst.max((&r[a][b] - &c).operator_norm());
            }
        }
        Ok(worst)
    }

    /// Scalar curvature recovered from the spinor curvature,
    /// `s = (2 / dim Σ) Re tr Σ_{a,b} e_a e_b R(e_a, e_b)`.
    pub fn scalar_curvature_from_spin_curvature(&self, x: &[f64]) -> Result<f64> {
        let r = self.curvature_frame(x, false)?;
        let mut tr = Complex64::new(0.0, 0.0);
        for (a, row) in r.iter().enumerate() {
            for (b, m) in row.iter().enumerate() {
                tr += (&(&self.frame_gens[a] * &self.frame_gens[b]) * m).trace();
            }
        }
        Ok(2.0 * tr.re / self.rep.spinor_dim() as f64)
    }

    /// `α̂(∂_a) = ⟨(∇̂_{∂_a} + ∂_a · D̂) φ, φ⟩` for every coordinate direction.
    pub fn alpha_hat(&self, field: &dyn SpinorField, x: &[f64]) -> Result<Vec<C64>> {
        let phi = field.eval(x)?;
        let e_f = self.chart.scale(x)?;
        let kc = self.killing_connection(field, x)?;
        let dh = self.dirac_hat(field, x)?;
        Ok(kc
            .iter()
            .enumerate()
            .map(|(a, k)| {
                let cd = self.frame_gens[a].apply(&dh);
                let v: Spinor = k.iter().zip(&cd).map(|(p, q)| (p + q) * e_f).collect();
                inner(&v, &phi)
            })
            .collect())
    }

    /// Both sides of the pointwise Lichnerowicz identity at `x`. The
    /// divergence `e^{-nf} ∂_a (e^{(n-2)f} α̂(∂_a))` uses a five-point stencil
    /// with the curvature step.
    pub fn lichnerowicz(&self, field: &dyn SpinorField, x: &[f64]) -> Result<LichnerowiczSample> {
        let n = self.n();
        let nf = n as f64;
        let h = FD_STEP_CURVATURE;
        let weighted = |y: &[f64], a: usize| -> Result<C64> {
            let w = ((nf - 2.0) * self.chart.f(y)?).exp();
            Ok(self.alpha_hat(field, y)?[a] * w)
        };
        let mut div = C64::new(0.0, 0.0);
        for a in 0..n {
            let d = 8.0 * (weighted(&shifted(x, a, h), a)? - weighted(&shifted(x, a, -h), a)?)
                - (weighted(&shifted(x, a, 2.0 * h), a)? - weighted(&shifted(x, a, -2.0 * h), a)?);
            div += d / (12.0 * h);
        }
        div /= (nf * self.chart.f(x)?).exp();
        let phi = field.eval(x)?;
        let s_hat = self.chart.scalar_curvature(x)? + nf * (nf - 1.0);
        let scalar_term = 0.25 * s_hat * norm_sqr(&phi);
        let killing_term: f64 = self
            .killing_connection(field, x)?
            .iter()
            .map(|v| norm_sqr(v))
            .sum();
        let dirac_term = norm_sqr(&self.dirac_hat(field, x)?);
        let rhs = scalar_term + killing_term - dirac_term;
        Ok(LichnerowiczSample {
            divergence: div.re,
            divergence_imag: div.im,
            scalar_term,
            killing_term,
            dirac_term,
            rhs,
            residual: div.re - rhs,
        })
    }
}
