//! Comparison of two metrics through the gauge transformation `A` with
//! `g(AX, AY) = g'(X, Y)` and `g(AX, Y) = g(X, AY)`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::chart::ConformalChart;
use super::metric::{christoffel, Metric};
use super::FD_STEP;
use crate::clifford::{CliffordRep, Spinor};
use crate::linalg::{norm, norm_sqr, symmetric_eigen, CMat, RMat, C64};
use crate::sampling::Sampler;
use crate::{Error, Result};

/// `g' = c^2 g` for a constant `c > 0`.
#[derive(Clone, Copy, Debug)]
pub struct ScaledMetric {
    pub base: ConformalChart,
    pub c: f64,
}

impl Metric for ScaledMetric {
    fn dim(&self) -> usize {
        self.base.n
    }

    fn metric(&self, x: &[f64]) -> Result<RMat> {
        Ok(self.base.metric(x)?.scale(self.c * self.c))
    }
}

/// `g' = e^{2f} (δ + eps P(x))` with `P(x) = S_0 + Σ x_k S_k` for fixed
/// symmetric matrices drawn from a seeded sampler.
#[derive(Clone, Debug)]
pub struct PerturbedMetric {
    pub base: ConformalChart,
    pub eps: f64,
    pub s0: RMat,
    pub s: Vec<RMat>,
}

fn random_symmetric(n: usize, sampler: &mut Sampler) -> RMat {
    let mut m = RMat::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = sampler.uniform(-1.0, 1.0);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

impl PerturbedMetric {
    pub fn random(base: ConformalChart, eps: f64, sampler: &mut Sampler) -> Self {
        let n = base.n;
        let s0 = random_symmetric(n, sampler);
        let s = (0..n).map(|_| random_symmetric(n, sampler)).collect();
        Self { base, eps, s0, s }
    }
}

impl Metric for PerturbedMetric {
    fn dim(&self) -> usize {
        self.base.n
    }

    fn metric(&self, x: &[f64]) -> Result<RMat> {
        let mut p = self.s0.clone();
        for (xk, sk) in x.iter().zip(&self.s) {
            p = &p + &sk.scale(*xk);
        }
        let m = &RMat::identity(self.base.n) + &p.scale(self.eps);
        Ok(m.scale((2.0 * self.base.f(x)?).exp()))
    }
}

/// The gauge transformation at one point, in coordinates.
#[derive(Clone, Debug)]
pub struct GaugeMap {
    pub a: RMat,
    pub a_inv: RMat,
    pub g: RMat,
    pub g_prime: RMat,
}

impl GaugeMap {
    /// `B = A - Id`.
    pub fn b(&self) -> RMat {
        &self.a - &RMat::identity(self.a.dim())
    }

    /// `max |g(AX, AY) - g'(X, Y)|` over coordinate vectors.
    pub fn isometry_defect(&self) -> f64 {
        (&(&(&self.a.transpose() * &self.g) * &self.a) - &self.g_prime).max_abs()
    }

    /// `max |g(AX, Y) - g(X, AY)|` over coordinate vectors.
    pub fn symmetry_defect(&self) -> f64 {
        let ga = &self.g * &self.a;
        (&ga - &ga.transpose()).max_abs()
    }

    /// Smallest eigenvalue of `A` (which is `g`-self-adjoint).
    pub fn min_eigenvalue(&self) -> f64 {
        let half = self.g.symmetric_function(f64::sqrt);
        let half_inv = self.g.symmetric_function(|v| 1.0 / v.sqrt());
        let sym = (&(&half * &self.a) * &half_inv).symmetric_part();
        symmetric_eigen(&sym).0[0]
    }
}

fn positive_definite(m: &RMat) -> Result<()> {
    if symmetric_eigen(m).0[0] <= 0.0 {
        return Err(Error::NonPositiveGauge);
    }
    Ok(())
}

/// `A = G^{-1/2} (G^{-1/2} G' G^{-1/2})^{1/2} G^{1/2}` at `x`.
pub fn gauge_map(g: &dyn Metric, g_prime: &dyn Metric, x: &[f64]) -> Result<GaugeMap> {
    if g.dim() != g_prime.dim() {
        return Err(Error::LengthMismatch {
            expected: g.dim(),
            got: g_prime.dim(),
        });
    }
    let gm = g.metric(x)?;
    let gp = g_prime.metric(x)?;
    positive_definite(&gm)?;
    positive_definite(&gp)?;
    let half = gm.symmetric_function(f64::sqrt);
    let half_inv = gm.symmetric_function(|v| 1.0 / v.sqrt());
    let inner = (&(&half_inv * &gp) * &half_inv).symmetric_part();
    let root = inner.symmetric_function(f64::sqrt);
    let a = &(&half_inv * &root) * &half;
    let a_inv = a.inverse().ok_or(Error::Singular)?;
    Ok(GaugeMap {
        a,
        a_inv,
        g: gm,
        g_prime: gp,
    })
}

/// Measured differences between `∇̄ = A ∇' A^{-1}` and `∇`, and the bounds
/// `C |A^{-1}| |∇'A| |·|` they are checked against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionDifference {
    /// `max |g(K(e_k) e_i, e_j) + g(e_i, K(e_k) e_j)|`: zero when `∇̄` is metric.
    pub metric_defect: f64,
    /// Largest deviation of the torsion of `∇̄` from `-(∇'_X A) A^{-1} Y + (∇'_Y A) A^{-1} X`.
    pub torsion_defect: f64,
    pub norm_nabla_a: f64,
    pub norm_a_inv: f64,
    pub vector_difference: f64,
    pub vector_bound: f64,
    pub spinor_difference: f64,
    pub spinor_bound: f64,
    pub dirac_difference: f64,
    pub dirac_bound: f64,
    pub c_vector: f64,
    pub c_spinor: f64,
    pub c_dirac: f64,
}

impl ConnectionDifference {
    pub fn within_bounds(&self) -> bool {
        let slack = 1e-9;
        self.vector_difference <= self.vector_bound + slack
            && self.spinor_difference <= self.spinor_bound + slack
            && self.dirac_difference <= self.dirac_bound + slack
    }
}

fn shifted(x: &[f64], a: usize, h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[a] += h;
    y
}

/// Constants in `|K| ≤ C |A^{-1}| |∇'A|` for vectors, spinors and the
/// Dirac operator in dimension `n`.
pub fn difference_constants(n: usize) -> (f64, f64, f64) {
    let nf = n as f64;
    let c_spin = 3.0 * nf * (nf - 1.0) / 4.0;
    (3.0, c_spin, nf * c_spin)
}

/// Compare `∇̄` and `∇` at `x` on the vector `y` and spinor `phi`, both given
/// in the `g`-orthonormal frame `E = G^{-1/2}`.
pub fn connection_difference(
    g: &dyn Metric,
    g_prime: &dyn Metric,
    x: &[f64],
    y: &[f64],
    phi: &Spinor,
) -> Result<ConnectionDifference> {
    let n = g.dim();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: y.len(),
        });
    }
    let rep = CliffordRep::new(n)?;
    if phi.len() != rep.spinor_dim() {
        return Err(Error::LengthMismatch {
            expected: rep.spinor_dim(),
            got: phi.len(),
        });
    }
    let h = FD_STEP;
    let gm = gauge_map(g, g_prime, x)?;
    let gam = christoffel(g, x, h)?;
    let gam_p = christoffel(g_prime, x, h)?;
    // Γ_a as endomorphisms: (Γ_a)_{kj} = Γ^k_{aj}
    let conn = |c: &[RMat], a: usize| RMat::from_fn(n, |k, j| c[k].get(a, j));
    let mut k_coord = Vec::with_capacity(n);
    let mut nabla_a = Vec::with_capacity(n);
    for a in 0..n {
        let p = gauge_map(g, g_prime, &shifted(x, a, h))?;
        let q = gauge_map(g, g_prime, &shifted(x, a, -h))?;
        let d_a = (&p.a - &q.a).scale(0.5 / h);
        let d_ainv = (&p.a_inv - &q.a_inv).scale(0.5 / h);
        let gp_a = conn(&gam_p, a);
        let g_a = conn(&gam, a);
        let k = &(&(&gm.a * &d_ainv) + &(&(&gm.a * &gp_a) * &gm.a_inv)) - &g_a;
        k_coord.push(k);
        nabla_a.push(&(&d_a + &(&gp_a * &gm.a)) - &(&gm.a * &gp_a));
    }

    let e = gm.g.symmetric_function(|v| 1.0 / v.sqrt());
    let e_inv = gm.g.symmetric_function(f64::sqrt);
    let to_frame = |m: &RMat| &(&e_inv * m) * &e;
    let along = |ms: &[RMat], k: usize| {
        let mut out = RMat::zeros(n);
        for (a, m) in ms.iter().enumerate() {
            out = &out + &m.scale(e.get(a, k));
        }
        out
    };
    // frame matrices of K(e_k) and ∇'_{e_k} A
    let k_frame: Vec<RMat> = (0..n).map(|k| to_frame(&along(&k_coord, k))).collect();
    let na_frame: Vec<RMat> = (0..n).map(|k| to_frame(&along(&nabla_a, k))).collect();

    let metric_defect = k_frame
        .iter()
        .map(|m| (m + &m.transpose()).max_abs())
        .fold(0.0, f64::max);

    let mut torsion_defect: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let lhs: Vec<f64> = k_coord[a]
                .column(b)
                .iter()
                .zip(k_coord[b].column(a))
                .map(|(u, v)| u - v)
                .collect();
            let ta = (&nabla_a[a] * &gm.a_inv).column(b);
            let tb = (&nabla_a[b] * &gm.a_inv).column(a);
            let scale = 1.0 + norm(&ta) + norm(&tb);
            for l in 0..n {
                torsion_defect = torsion_defect.max((lhs[l] + ta[l] - tb[l]).abs() / scale);
            }
        }
    }

    let norm_nabla_a = na_frame
        .iter()
        .map(|m| m.frobenius_norm().powi(2))
        .sum::<f64>()
        .sqrt();
    let norm_a_inv = to_frame(&gm.a_inv).operator_norm();
    let (c_vector, c_spinor, c_dirac) = difference_constants(n);
    let base = norm_a_inv * norm_nabla_a;

    let vector_difference = k_frame
        .iter()
        .map(|m| norm(&m.apply(y)).powi(2))
        .sum::<f64>()
        .sqrt();

    let cl: Vec<CMat> = rep
        .generators()
        .iter()
        .map(|g| g.scale_real(-1.0))
        .collect();
    let spin_diff: Vec<Spinor> = k_frame
        .iter()
        .map(|m| {
            let mut s = CMat::zeros(rep.spinor_dim());
            for i in 0..n {
                for j in (i + 1)..n {
                    // K_ij(X) = g(K(X) e_i, e_j) is entry (j, i)
                    s += &(&cl[i] * &cl[j]).scale_real(0.5 * m.get(j, i));
                }
            }
            s.apply(phi)
        })
        .collect();
    let spinor_difference = spin_diff.iter().map(|v| norm_sqr(v)).sum::<f64>().sqrt();
    let mut dirac = alloc::vec![C64::new(0.0, 0.0); rep.spinor_dim()];
    for (c, v) in cl.iter().zip(&spin_diff) {
        for (d, w) in dirac.iter_mut().zip(c.apply(v)) {
            *d += w;
        }
    }
    let dirac_difference = norm_sqr(&dirac).sqrt();
    let phi_norm = norm_sqr(phi).sqrt();

    Ok(ConnectionDifference {
        metric_defect,
        torsion_defect,
        norm_nabla_a,
        norm_a_inv,
        vector_difference,
        vector_bound: c_vector * base * norm(y),
        spinor_difference,
        spinor_bound: c_spinor * base * phi_norm,
        dirac_difference,
        dirac_bound: c_dirac * base * phi_norm,
        c_vector,
        c_spinor,
        c_dirac,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_metrics_give_identity() {
        let c = ConformalChart::hyperbolic(3);
        let x = [0.1, 0.2, -0.3];
        let gm = gauge_map(&c, &c, &x).unwrap();
        assert!((&gm.a - &RMat::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn scaled_metric_gives_multiple_of_identity() {
        let c = ConformalChart::hyperbolic(4);
        let s = ScaledMetric { base: c, c: 1.7 };
        let x = [0.1, 0.2, -0.3, 0.05];
        let gm = gauge_map(&c, &s, &x).unwrap();
        assert!((&gm.a - &RMat::identity(4).scale(1.7)).max_abs() < 1e-12);
        let phi = Sampler::new(1).spinor(4);
        let d = connection_difference(&c, &s, &x, &[1.0, 0.0, 0.0, 0.0], &phi).unwrap();
        assert!(d.norm_nabla_a < 1e-6, "{}", d.norm_nabla_a);
        assert!(d.vector_difference < 1e-6 && d.spinor_difference < 1e-6);
    }

    #[test]
    fn perturbed_pair_defining_relations_and_bounds() {
        let c = ConformalChart::hyperbolic(3);
        let mut s = Sampler::new(11);
        let p = PerturbedMetric::random(c, 0.1, &mut s);
        for _ in 0..10 {
            let x = s.ball_point(3, 0.6);
            let gm = gauge_map(&c, &p, &x).unwrap();
            let scale = gm.g.max_abs();
            assert!(gm.isometry_defect() < 1e-10 * scale);
            assert!(gm.symmetry_defect() < 1e-10 * scale);
            assert!(gm.min_eigenvalue() > 0.0);
            let y = s.unit_vector(3);
            let phi = s.unit_spinor(2);
            let d = connection_difference(&c, &p, &x, &y, &phi).unwrap();
            assert!(d.metric_defect < 1e-6, "{}", d.metric_defect);
            assert!(d.torsion_defect < 1e-6, "{}", d.torsion_defect);
            assert!(d.within_bounds(), "{d:?}");
        }
    }
}
