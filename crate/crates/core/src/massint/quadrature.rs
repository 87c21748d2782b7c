use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre polynomial from the Chebyshev guesses.
pub fn gauss_legendre(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::Degenerate("Gauss-Legendre rule with no nodes"));
    }
    let mut nodes = alloc::vec![0.0; m];
    let mut weights = alloc::vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, t);
            dp = d;
            let step = p / d;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, t);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - t * t) * dp * dp);
        nodes[i] = -t;
        nodes[m - 1 - i] = t;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    Ok((nodes, weights))
}

/// `(P_m(t), P_m'(t))` by the three-term recurrence.
fn legendre(m: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    (p1, m as f64 * (t * p1 - p0) / (t * t - 1.0))
}

/// Product rule on the unit sphere `S^{n-1} ⊂ R^n` in hyperspherical angles
/// `ψ_1, ..., ψ_{n-2} ∈ [0, π]` (weights `sin^{n-1-j} ψ_j`) and an azimuth
/// in `[0, 2π]`; Gauss–Legendre in every angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereQuadrature {
    pub n: usize,
    pub polar_nodes: usize,
    pub azimuth_nodes: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

/// Area of the unit sphere `S^{n-1}`.
pub fn sphere_area(n: usize) -> f64 {
    // |S^{k}| = 2π/(k-1) |S^{k-2}|, |S^0| = 2, |S^1| = 2π
    let k = n - 1;
    let (mut area, mut d) = if k.is_multiple_of(2) {
        (2.0, 0)
    } else {
        (2.0 * PI, 1)
    };
    while d < k {
        d += 2;
        area *= 2.0 * PI / (d - 1) as f64;
    }
    area
}

impl SphereQuadrature {
    /// `polar_nodes` per polar angle and `azimuth_nodes` for the azimuth.
    pub fn new(n: usize, polar_nodes: usize, azimuth_nodes: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionOutOfRange(n, "2.."));
        }
        let (tp, wp) = gauss_legendre(polar_nodes)?;
        let (ta, wa) = gauss_legendre(azimuth_nodes)?;
        let polar: Vec<(f64, f64)> = tp
            .iter()
            .zip(&wp)
            .map(|(t, w)| (PI / 2.0 * (t + 1.0), PI / 2.0 * w))
            .collect();
        let azimuth: Vec<(f64, f64)> = ta
            .iter()
            .zip(&wa)
            .map(|(t, w)| (PI * (t + 1.0), PI * w))
            .collect();
        // build up (angles, weight) tuples one angle at a time
        let mut partial: Vec<(Vec<f64>, f64)> = alloc::vec![(Vec::new(), 1.0)];
        for j in 0..n - 2 {
            let power = (n - 2 - j) as i32;
            let mut next = Vec::with_capacity(partial.len() * polar.len());
            for (angles, w) in &partial {
                for &(psi, wpsi) in &polar {
                    let mut a = angles.clone();
                    a.push(psi);
                    next.push((a, w * wpsi * psi.sin().powi(power)));
                }
            }
            partial = next;
        }
        let mut points = Vec::with_capacity(partial.len() * azimuth.len());
        let mut weights = Vec::with_capacity(partial.len() * azimuth.len());
        for (angles, w) in &partial {
            for &(phi, wphi) in &azimuth {
                let mut p = Vec::with_capacity(n);
                let mut s = 1.0;
                for psi in angles {
                    p.push(s * psi.cos());
                    s *= psi.sin();
                }
                p.push(s * phi.cos());
                p.push(s * phi.sin());
                points.push(p);
                weights.push(w * wphi);
            }
        }
        Ok(Self {
            n,
            polar_nodes,
            azimuth_nodes,
            points,
            weights,
        })
    }

    /// The default rule: 48 polar and 96 azimuthal nodes on `S^2`, and
    /// 16/32 on `S^3` and above, where the product grows as a power.
    pub fn default_for(n: usize) -> Result<Self> {
        match n {
            3 => Self::new(n, 48, 96),
            _ => Self::new(n, 16, 32),
        }
    }

    /// The rule with twice as many nodes in every angle.
    pub fn refined(&self) -> Result<Self> {
        Self::new(self.n, 2 * self.polar_nodes, 2 * self.azimuth_nodes)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `Σ w_i f(p_i)` summed in node order.
    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (p, w) in self.points.iter().zip(&self.weights) {
            acc += w * f(p)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (t, w) = gauss_legendre(5).unwrap();
        let int = |k: i32| t.iter().zip(&w).map(|(t, w)| w * t.powi(k)).sum::<f64>();
        assert!((int(0) - 2.0).abs() < 1e-14);
        assert!((int(8) - 2.0 / 9.0).abs() < 1e-14);
        assert!(int(7).abs() < 1e-14);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
        for n in 3..=5 {
            let q = SphereQuadrature::new(n, 12, 24).unwrap();
            let total: f64 = q.weights.iter().sum();
            assert!((total - sphere_area(n)).abs() < 1e-10, "{n} {total}");
            assert!(q.weights.iter().all(|w| *w > 0.0));
            assert!(q
                .points
                .iter()
                .all(|p| (p.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn second_moments() {
        // ∫ p_i^2 = |S^{n-1}| / n
        let q = SphereQuadrature::new(4, 16, 32).unwrap();
        for i in 0..4 {
            let m = q.integrate(|p| Ok(p[i] * p[i])).unwrap();
            assert!((m - sphere_area(4) / 4.0).abs() < 1e-12);
        }
    }
}
