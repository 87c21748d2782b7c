use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::linalg::{dot, norm, symmetric_eigen, RMat};
use crate::{Error, Result};

/// Which synthetic gauge transformation is placed on the hyperbolic model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaugeProfile {
    /// `A = Id`.
    Identity,
    /// `A = (Id + H)^{-1/2}` with `H = x^{n-1} S(p)`, `S` tangential,
    /// symmetric and traceless, so `tr(A - Id) = O(x^{2n-2})`.
    Compliant,
    /// `A = Id + x^{n-1} τ P`, `P` the tangential projection; the trace
    /// decays only like `x^{n-1}`.
    TraceViolating,
}

impl GaugeProfile {
    pub const ALL: [GaugeProfile; 3] = [
        GaugeProfile::Identity,
        GaugeProfile::Compliant,
        GaugeProfile::TraceViolating,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GaugeProfile::Identity => "identity",
            GaugeProfile::Compliant => "compliant",
            GaugeProfile::TraceViolating => "trace-violating",
        }
    }
}

/// A synthetic gauge field on the ball model, given by its components in
/// the orthonormal frame `e_m = ρ ∂_{y_m}`. The cylinder coordinates are
/// `y = e^{-x} p`, `p ∈ S^{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticGauge {
    pub n: usize,
    pub profile: GaugeProfile,
    /// `S(p)` is the traceless tangential part of `s0 + (a·p) s1`.
    pub s0: RMat,
    pub s1: RMat,
    pub a: Vec<f64>,
    pub tau: f64,
}

/// Value and coordinate partials `∂_{y_m}` of the frame components of `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeJet {
    pub a: RMat,
    pub da: Vec<RMat>,
}

/// Cylinder coordinates `(x, p)` of a ball point.
pub fn cylinder_coordinates(y: &[f64]) -> Result<(f64, Vec<f64>)> {
    let r = norm(y);
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutsideChart { radius: r });
    }
    Ok((-r.ln(), y.iter().map(|v| v / r).collect()))
}

/// The ball point `e^{-x} p`.
pub fn ball_point(x: f64, p: &[f64]) -> Vec<f64> {
    let s = (-x).exp();
    p.iter().map(|v| v * s).collect()
}

fn projection(p: &[f64]) -> RMat {
    RMat::from_fn(p.len(), |i, j| if i == j { 1.0 } else { 0.0 } - p[i] * p[j])
}

impl SyntheticGauge {
    /// Default data: fixed generic symmetric `s0`, `s1` that do not
    /// commute, a fixed direction `a` and `τ = 1`.
    pub fn new(n: usize, profile: GaugeProfile) -> Self {
        let s0 = RMat::from_fn(n, |i, j| {
            let (i, j) = (i as f64, j as f64);
            1.0 / (1.0 + i + j) + if i == j { 0.5 * (i + 1.0) } else { 0.0 }
        });
        let s1 = RMat::from_fn(n, |i, j| {
            let d = i.abs_diff(j) as f64;
            if d == 1.0 {
                0.8
            } else {
                0.3 / (1.0 + d) * if (i + j) % 2 == 0 { 1.0 } else { -1.0 }
            }
        });
        let a = (0..n)
            .map(|i| if i % 2 == 0 { 1.0 } else { -0.5 })
            .collect();
        Self {
            n,
            profile,
            s0,
            s1,
            a,
            tau: 1.0,
        }
    }

    /// `S(p) = P M P - tr(P M P)/(n-1) P` with `M = s0 + (a·p) s1`, and
    /// its partials.
    fn s_jet(&self, p: &[f64], dp: &[Vec<f64>]) -> (RMat, Vec<RMat>) {
        let n = self.n;
        let pm = projection(p);
        let k = (n - 1) as f64;
        let big = &self.s0 + &self.s1.scale(dot(&self.a, p));
        let psp = &(&pm * &big) * &pm;
        let t = psp.trace();
        let s = &psp - &pm.scale(t / k);
        let ds = dp
            .iter()
            .map(|d| {
                let dpm = &RMat::outer(d, p) + &RMat::outer(p, d);
                let dpm = dpm.scale(-1.0);
                let dbig = self.s1.scale(dot(&self.a, d));
                let dpsp =
                    &(&(&(&dpm * &big) * &pm) + &(&(&pm * &big) * &dpm)) + &(&(&pm * &dbig) * &pm);
                let dt = dpsp.trace();
                &(&dpsp - &pm.scale(dt / k)) - &dpm.scale(t / k)
            })
            .collect();
        (s, ds)
    }

    /// `H` and its partials along `∂_{y_m}`.
    fn h_jet(&self, y: &[f64]) -> Result<(RMat, Vec<RMat>)> {
        let n = self.n;
        let (x, p) = cylinder_coordinates(y)?;
        let r = (-x).exp();
        // ∂_m x = -p_m / r, ∂_m p = (e_m - p_m p) / r
        let dx: Vec<f64> = p.iter().map(|v| -v / r).collect();
        let dp: Vec<Vec<f64>> = (0..n)
            .map(|m| {
                (0..n)
                    .map(|i| (if i == m { 1.0 } else { 0.0 } - p[m] * p[i]) / r)
                    .collect()
            })
            .collect();
        let k = (n - 1) as i32;
        let xk = x.powi(k);
        let dxk = k as f64 * x.powi(k - 1);
        let (s, ds) = match self.profile {
            GaugeProfile::Identity => return Ok((RMat::zeros(n), alloc::vec![RMat::zeros(n); n])),
            GaugeProfile::Compliant => self.s_jet(&p, &dp),
            GaugeProfile::TraceViolating => {
                let pm = projection(&p).scale(self.tau);
                let dpm = dp
                    .iter()
                    .map(|d| (&RMat::outer(d, &p) + &RMat::outer(&p, d)).scale(-self.tau))
                    .collect();
                (pm, dpm)
            }
        };
        let h = s.scale(xk);
        let dh = (0..n)
            .map(|m| &s.scale(dxk * dx[m]) + &ds[m].scale(xk))
            .collect();
        Ok((h, dh))
    }

    /// Frame components of `A` and their partials at the ball point `y`.
    pub fn jet(&self, y: &[f64]) -> Result<GaugeJet> {
        if y.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        let (h, dh) = self.h_jet(y)?;
        match self.profile {
            GaugeProfile::Identity => Ok(GaugeJet {
                a: RMat::identity(self.n),
                da: dh,
            }),
            GaugeProfile::TraceViolating => Ok(GaugeJet {
                a: &RMat::identity(self.n) + &h,
                da: dh,
            }),
            GaugeProfile::Compliant => inverse_sqrt_jet(&h, &dh),
        }
    }
}

/// `(Id + H)^{-1/2}` and its directional derivatives by the divided
/// differences of `f(λ) = (1 + λ)^{-1/2}` on the spectrum of `H`.
fn inverse_sqrt_jet(h: &RMat, dh: &[RMat]) -> Result<GaugeJet> {
    let n = h.dim();
    let (ev, v) = symmetric_eigen(h);
    if ev.iter().any(|l| 1.0 + l <= 0.0) {
        return Err(Error::NonPositiveGauge);
    }
    let f = |l: f64| (1.0 + l).powf(-0.5);
    let fp = |l: f64| -0.5 * (1.0 + l).powf(-1.5);
    let gamma = RMat::from_fn(n, |i, j| {
        let (a, b) = (ev[i], ev[j]);
        if (a - b).abs() < 1e-6 {
            fp(0.5 * (a + b))
        } else {
            (f(a) - f(b)) / (a - b)
        }
    });
    let a = RMat::from_fn(n, |i, j| {
        (0..n).map(|k| v.get(i, k) * f(ev[k]) * v.get(j, k)).sum()
    });
    let vt = v.transpose();
    let da = dh
        .iter()
        .map(|d| {
            let rot = &(&vt * d) * &v;
            let had = RMat::from_fn(n, |i, j| gamma.get(i, j) * rot.get(i, j));
            &(&v * &had) * &vt
        })
        .collect();
    Ok(GaugeJet { a, da })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(g: &SyntheticGauge, y: &[f64]) -> f64 {
        let jet = g.jet(y).unwrap();
        let h = 1e-6;
        let mut worst: f64 = 0.0;
        for m in 0..g.n {
            let mut yp = y.to_vec();
            let mut ym = y.to_vec();
            yp[m] += h;
            ym[m] -= h;
            let d = &g.jet(&yp).unwrap().a - &g.jet(&ym).unwrap().a;
            worst = worst.max((&d.scale(0.5 / h) - &jet.da[m]).max_abs());
        }
        worst
    }

    #[test]
    fn jets_match_differences() {
        let y = [0.3, -0.5, 0.2, 0.4];
        for profile in GaugeProfile::ALL {
            let g = SyntheticGauge::new(4, profile);
            assert!(fd_check(&g, &y) < 1e-7, "{profile:?}");
        }
    }

    #[test]
    fn compliant_gauge_structure() {
        let g = SyntheticGauge::new(4, GaugeProfile::Compliant);
        let p = [0.5, 0.5, -0.5, 0.5];
        for &x in &[0.05, 0.1] {
            let y = ball_point(x, &p);
            let a = g.jet(&y).unwrap().a;
            // symmetric, fixes the radial direction, trace defect O(x^6)
            assert!((&a - &a.transpose()).max_abs() < 1e-14);
            let ap = a.apply(&p);
            assert!(ap.iter().zip(&p).all(|(u, v)| (u - v).abs() < 1e-14));
            assert!((a.trace() - 4.0).abs() < 10.0 * x.powi(6));
            // A^2 (Id + H) = Id
            let h = g.h_jet(&y).unwrap().0;
            let check = &(&a * &a) * &(&RMat::identity(4) + &h);
            assert!((&check - &RMat::identity(4)).max_abs() < 1e-13);
        }
    }

    #[test]
    fn cylinder_round_trip() {
        let p = [0.6, 0.0, 0.8];
        let (x, q) = cylinder_coordinates(&ball_point(0.3, &p)).unwrap();
        assert!((x - 0.3).abs() < 1e-14);
        assert!(q.iter().zip(&p).all(|(a, b)| (a - b).abs() < 1e-14));
    }
}
