use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::gauge::{ball_point, SyntheticGauge};
use super::quadrature::SphereQuadrature;
use crate::clifford::Spinor;
use crate::hypgeo::{
    rho_ball, ConformalChart, DerivativeMode, KillingSpinor, SpinGeometry, SpinorField,
};
use crate::linalg::{dot, inner, norm_sqr, CMat, RMat, C64, I};
use crate::{Error, Result};

/// The slice `x = const` of the hyperbolic model `sinh^{-2}(x)(dx^2 + h_0)`
/// with a quadrature rule on its round sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySlice {
    pub n: usize,
    pub x: f64,
    pub quadrature: SphereQuadrature,
}

impl BoundarySlice {
    pub fn new(x: f64, quadrature: SphereQuadrature) -> Result<Self> {
        if !(x > 0.0) {
            return Err(Error::Degenerate("slice parameter must be positive"));
        }
        Ok(Self {
            n: quadrature.n,
            x,
            quadrature,
        })
    }

    pub fn rho(&self) -> f64 {
        self.x.sinh()
    }

    /// `dμ_x / dμ(h_0) = ρ^{-(n-1)}`.
    pub fn measure_factor(&self) -> f64 {
        self.rho().powi(1 - self.n as i32)
    }

    /// Quadrature of `f` against `dμ_x`.
    pub fn integrate_complex(&self, mut f: impl FnMut(&[f64]) -> Result<C64>) -> Result<C64> {
        let mf = self.measure_factor();
        let mut acc = C64::new(0.0, 0.0);
        for (p, w) in self.quadrature.points.iter().zip(&self.quadrature.weights) {
            acc += f(p)? * (w * mf);
        }
        Ok(acc)
    }
}

/// Orthonormal frame of `R^n` (as columns) whose first vector is the normal
/// `ν = -p` of the slice at `p`; the rest are tangential. Built from a
/// Householder reflection.
pub fn adapted_frame(p: &[f64]) -> Result<RMat> {
    let n = p.len();
    let len = dot(p, p).sqrt();
    if (len - 1.0).abs() > 1e-9 {
        return Err(Error::Degenerate("slice point is not a unit vector"));
    }
    // reflection exchanging e_1 with ±p; take the better conditioned one
    let sign = if p[0] >= 0.0 { 1.0 } else { -1.0 };
    let v: Vec<f64> = (0..n)
        .map(|i| if i == 0 { 1.0 } else { 0.0 } + sign * p[i])
        .collect();
    let vv = dot(&v, &v);
    let mut f = RMat::from_fn(
        n,
        |i, j| if i == j { 1.0 } else { 0.0 } - 2.0 * v[i] * v[j] / vv,
    );
    // first column is -sign·p; make it -p
    if sign < 0.0 {
        for i in 0..n {
            f.set(i, 0, -f.get(i, 0));
        }
    }
    Ok(f)
}

/// Replace the tangential columns of `frame` by `frame_t · rot`.
pub fn rotate_tangential(frame: &RMat, rot: &RMat) -> RMat {
    let n = frame.dim();
    RMat::from_fn(n, |i, j| {
        if j == 0 {
            frame.get(i, 0)
        } else {
            (1..n)
                .map(|k| frame.get(i, k) * rot.get(k - 1, j - 1))
                .sum()
        }
    })
}

/// Connection matrix of the ball frame, `W(X)_{ij} = g(∇_X e_j, e_i) = X_i y_j - X_j y_i`.
fn ball_connection(y: &[f64], v: &[f64]) -> RMat {
    RMat::from_fn(y.len(), |i, j| v[i] * y[j] - v[j] * y[i])
}

/// The three terms of the mass integrand (real parts) and the imaginary
/// part of their sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MassTermBreakdown {
    /// `(e_1 tr A + ρ' tr B) |φ|^2`.
    pub term1: f64,
    /// `½ ⟨Q φ, φ⟩`.
    pub term2: f64,
    /// `(i/2) tr B ⟨e_1 · φ, φ⟩`.
    pub term3: f64,
    pub total: f64,
    pub imag: f64,
}

impl MassTermBreakdown {
    fn accumulate(&mut self, other: &MassTermBreakdown, w: f64) {
        self.term1 += w * other.term1;
        self.term2 += w * other.term2;
        self.term3 += w * other.term3;
        self.total += w * other.total;
        self.imag += w * other.imag;
    }
}

/// Mass integrand of a synthetic gauge transformation of the hyperbolic
/// model against the Killing spinor `φ_u`.
#[derive(Clone, Debug)]
pub struct MassIntegrand {
    pub gauge: SyntheticGauge,
    pub geometry: SpinGeometry,
    pub killing: KillingSpinor,
}

struct PointData {
    breakdown: MassTermBreakdown,
    q: CMat,
}

impl MassIntegrand {
    pub fn new(gauge: SyntheticGauge, u: Spinor) -> Result<Self> {
        let geometry = SpinGeometry::new(
            ConformalChart::hyperbolic(gauge.n),
            DerivativeMode::Analytic,
        )?;
        let killing = KillingSpinor::new(geometry.rep.clone(), u)?;
        Ok(Self {
            gauge,
            geometry,
            killing,
        })
    }

    pub fn n(&self) -> usize {
        self.gauge.n
    }

    fn point(&self, x: f64, p: &[f64], frame: &RMat) -> Result<PointData> {
        let n = self.n();
        let y = ball_point(x, p);
        let rho = rho_ball(&y);
        let jet = self.gauge.jet(&y)?;
        let m = &jet.a;
        let minv = m.inverse().ok_or(Error::Singular)?;
        let cols: Vec<Vec<f64>> = (0..n).map(|a| frame.column(a)).collect();

        // ∇'_X A in the ball frame
        let nabla_a = |v: &[f64]| {
            let mut d = RMat::zeros(n);
            for (vm, dm) in v.iter().zip(&jet.da) {
                d = &d + &dm.scale(rho * vm);
            }
            let w = ball_connection(&y, v);
            &(&d + &(&w * m)) - &(m * &w)
        };
        // c[i][j][k] = g'(A^{-1} (∇'_{e_i} A) e'_j, e'_k), tangential indices
        let t = n - 1;
        let mut c = alloc::vec![0.0; t * t * t];
        for i in 0..t {
            let ei = m.apply(&cols[i + 1]);
            let k_i = &minv * &nabla_a(&ei);
            for j in 0..t {
                let kj = k_i.apply(&cols[j + 1]);
                for k in 0..t {
                    c[(i * t + j) * t + k] = dot(&cols[k + 1], &kj);
                }
            }
        }
        let cl: Vec<CMat> = cols.iter().map(|v| self.geometry.clifford(v)).collect();
        let q = sigma_contraction(&cl, |i, j, k| c[(i * t + j) * t + k]);

        let tr_b = m.trace() - n as f64;
        let nu_tr_a: f64 = -rho * (0..n).map(|mm| p[mm] * jet.da[mm].trace()).sum::<f64>();
        let phi = self.killing.eval(&y)?;
        let phi2 = norm_sqr(&phi);
        let term1 = (nu_tr_a + x.cosh() * tr_b) * phi2;
        let term2 = inner(&q.apply(&phi), &phi) * 0.5;
        let term3 = I * 0.5 * tr_b * inner(&cl[0].apply(&phi), &phi);
        let total = term2 + term3 + term1;
        Ok(PointData {
            breakdown: MassTermBreakdown {
                term1,
                term2: term2.re,
                term3: term3.re,
                total: total.re,
                imag: total.im,
            },
            q,
        })
    }

    /// Pointwise integrand at the slice point `p` with the Householder frame.
    pub fn at(&self, x: f64, p: &[f64]) -> Result<MassTermBreakdown> {
        Ok(self.point(x, p, &adapted_frame(p)?)?.breakdown)
    }

    /// Pointwise integrand with an explicit adapted frame.
    pub fn at_with_frame(&self, x: f64, p: &[f64], frame: &RMat) -> Result<MassTermBreakdown> {
        Ok(self.point(x, p, frame)?.breakdown)
    }

    /// `Q = Σ g((∇'_{e_i} A) A^{-1} e_j, e_k) σ_{1ijk}` at the slice point `p`.
    pub fn q_contraction(&self, x: f64, p: &[f64]) -> Result<CMat> {
        Ok(self.point(x, p, &adapted_frame(p)?)?.q)
    }

    /// Integral of the breakdown over the slice against `dμ_x`.
    pub fn integrate(&self, slice: &BoundarySlice) -> Result<MassTermBreakdown> {
        if slice.n != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: slice.n,
            });
        }
        let mf = slice.measure_factor();
        let mut acc = MassTermBreakdown::default();
        for (p, w) in slice
            .quadrature
            .points
            .iter()
            .zip(&slice.quadrature.weights)
        {
            acc.accumulate(&self.at(slice.x, p)?, w * mf);
        }
        Ok(acc)
    }
}

/// `Σ_{i,j,k} c(i,j,k) σ_{1ijk}` over tangential indices `0..n-1`, where
/// `cl[0]` is Clifford multiplication by the normal, `cl[a + 1]` by the
/// `a`-th tangential vector and `σ_{1ijk} = e_1 e_i e_j e_k` for distinct
/// indices.
pub fn sigma_contraction(cl: &[CMat], c: impl Fn(usize, usize, usize) -> f64) -> CMat {
    let t = cl.len() - 1;
    let mut q = CMat::zeros(cl[0].dim());
    for i in 0..t {
        for j in (i + 1)..t {
            for k in (j + 1)..t {
                // σ is alternating on distinct indices
                let alt =
                    c(i, j, k) - c(i, k, j) - c(j, i, k) + c(j, k, i) + c(k, i, j) - c(k, j, i);
                if alt != 0.0 {
                    let s = &(&(&cl[0] * &cl[i + 1]) * &cl[j + 1]) * &cl[k + 1];
                    q += &s.scale_real(alt);
                }
            }
        }
    }
    q
}

/// `B̂ φ = ∇̂_ν φ + ν · D̂ φ` with `ν = -p` at the ball point `y = |y| p`.
pub fn boundary_operator(
    geometry: &SpinGeometry,
    field: &dyn SpinorField,
    y: &[f64],
) -> Result<Spinor> {
    let r = dot(y, y).sqrt();
    let nu: Vec<f64> = y.iter().map(|v| -v / r).collect();
    let khat = geometry.killing_connection(field, y)?;
    let dhat = geometry.dirac_hat(field, y)?;
    let mut out = geometry.clifford(&nu).apply(&dhat);
    for (vk, d) in nu.iter().zip(&khat) {
        for (o, di) in out.iter_mut().zip(d) {
            *o += di * *vk;
        }
    }
    Ok(out)
}

/// `∫ ⟨(∇̂_ν + ν D̂) φ, φ⟩ dμ_x` on the hyperbolic model.
pub fn boundary_term(
    geometry: &SpinGeometry,
    field: &dyn SpinorField,
    slice: &BoundarySlice,
) -> Result<C64> {
    slice.integrate_complex(|p| {
        let y = ball_point(slice.x, p);
        Ok(inner(
            &boundary_operator(geometry, field, &y)?,
            &field.eval(&y)?,
        ))
    })
}

/// `∫ (⟨B̂ φ, ψ⟩ - ⟨φ, B̂ ψ⟩) dμ_x`, which vanishes when `B̂` is self-adjoint
/// on the slice.
pub fn boundary_symmetry_defect(
    geometry: &SpinGeometry,
    phi: &dyn SpinorField,
    psi: &dyn SpinorField,
    slice: &BoundarySlice,
) -> Result<C64> {
    slice.integrate_complex(|p| {
        let y = ball_point(slice.x, p);
        let (a, b) = (phi.eval(&y)?, psi.eval(&y)?);
        Ok(inner(&boundary_operator(geometry, phi, &y)?, &b)
            - inner(&a, &boundary_operator(geometry, psi, &y)?))
    })
}

/// Largest `|∇̂φ_u| / |φ_u|` over the quadrature nodes of the slice, with
/// `φ_u` evaluated through the cylinder coordinates.
pub fn killing_residual_on_slice(
    geometry: &SpinGeometry,
    u: &[C64],
    slice: &BoundarySlice,
) -> Result<f64> {
    let field = KillingSpinor::new(geometry.rep.clone(), u.to_vec())?;
    let mut worst: f64 = 0.0;
    for p in &slice.quadrature.points {
        worst = worst.max(geometry.killing_residual(&field, &ball_point(slice.x, p))?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adapted_frame_is_orthonormal() {
        for p in [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 0.6, 0.8],
            [0.6, -0.8, 0.0],
        ] {
            let f = adapted_frame(&p).unwrap();
            let g = &f.transpose() * &f;
            assert!((&g - &RMat::identity(3)).max_abs() < 1e-14);
            let c0 = f.column(0);
            assert!(c0.iter().zip(&p).all(|(a, b)| (a + b).abs() < 1e-14));
        }
    }
}
