//! The radial form of the conformal gauge change `ρ → θρ`, `g̃ → θ^2 g̃`:
//!
//! `ρ θ'^2 + 2 θ ρ' θ' = θ^4 ρ + θ^2 a`, `θ(0) = 1`,
//!
//! where `a = (1 - |dρ|^2)/ρ` and `ρ, ρ'` are the input defining function
//! and its radial derivative. The root taken is the one continuous at
//! `x = 0`, written without cancellation as
//! `θ' = (θ^4 ρ + θ^2 a) / (θ ρ' + sqrt(θ^2 ρ'^2 + ρ (θ^4 ρ + θ^2 a)))`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::series::{factorial, q, ScalarSeries, Q};
use crate::{Error, Result};

/// Largest integration step accepted.
pub const MAX_STEP: f64 = 1e-3;

/// Radial data of an input defining function.
pub trait RadialProfile {
    fn rho(&self, x: f64) -> f64;
    fn rho_prime(&self, x: f64) -> f64;
    /// `(1 - ρ'^2) / ρ`, extended continuously to `x = 0`.
    fn a(&self, x: f64) -> f64;
}

/// `ρ = sinh x`: already in the target gauge, `a = -sinh x`.
#[derive(Clone, Copy, Debug, Default)]
pub struct InGauge;

impl RadialProfile for InGauge {
    fn rho(&self, x: f64) -> f64 {
        x.sinh()
    }
    fn rho_prime(&self, x: f64) -> f64 {
        x.cosh()
    }
    fn a(&self, x: f64) -> f64 {
        -x.sinh()
    }
}

/// `ρ = x`, `a = 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LinearProfile;

impl RadialProfile for LinearProfile {
    fn rho(&self, x: f64) -> f64 {
        x
    }
    fn rho_prime(&self, _x: f64) -> f64 {
        1.0
    }
    fn a(&self, _x: f64) -> f64 {
        0.0
    }
}

fn slope(p: &dyn RadialProfile, x: f64, theta: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::GaugeBreakdown(x));
    }
    let rho = p.rho(x);
    let dr = p.rho_prime(x);
    let rhs = theta.powi(4) * rho + theta * theta * p.a(x);
    let disc = theta * theta * dr * dr + rho * rhs;
    if disc < 0.0 {
        return Err(Error::GaugeBreakdown(x));
    }
    let den = theta * dr + disc.sqrt();
    if !(den > 0.0) {
        return Err(Error::GaugeBreakdown(x));
    }
    Ok(rhs / den)
}

/// `θ` on a uniform grid `0, h, 2h, ..., x_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub xs: Vec<f64>,
    pub theta: Vec<f64>,
}

/// Classical fourth-order Runge–Kutta with the largest uniform step not
/// exceeding `step`.
pub fn radial_gauge_ode(p: &dyn RadialProfile, x_max: f64, step: f64) -> Result<RadialSolution> {
    if !(step > 0.0) || step > MAX_STEP {
        return Err(Error::StepTooLarge(step));
    }
    if !(x_max > 0.0) {
        return Err(Error::InvalidSeries("x_max must be positive"));
    }
    let steps = (x_max / step).ceil() as usize;
    let h = x_max / steps as f64;
    let mut xs = Vec::with_capacity(steps + 1);
    let mut theta = Vec::with_capacity(steps + 1);
    let mut t = 1.0;
    xs.push(0.0);
    theta.push(t);
    for i in 0..steps {
        let x = i as f64 * h;
        let k1 = slope(p, x, t)?;
        let k2 = slope(p, x + h / 2.0, t + h / 2.0 * k1)?;
        let k3 = slope(p, x + h / 2.0, t + h / 2.0 * k2)?;
        let k4 = slope(p, x + h, t + h * k3)?;
        t += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(t > 0.0) {
            return Err(Error::GaugeBreakdown(x + h));
        }
        xs.push((i + 1) as f64 * h);
        theta.push(t);
    }
    Ok(RadialSolution { xs, theta })
}

impl RadialSolution {
    pub fn step(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    /// Value at the grid point nearest to `x`.
    pub fn at(&self, x: f64) -> f64 {
        let i = ((x / self.step()).round() as usize).min(self.xs.len() - 1);
        self.theta[i]
    }

    /// Largest `|ρθ'^2 + 2θρ'θ' - θ^4ρ - θ^2 a|` over interior grid points,
    /// with `θ'` from a five-point difference of the samples.
    pub fn plug_back_residual(&self, p: &dyn RadialProfile) -> f64 {
        let h = self.step();
        let th = &self.theta;
        let mut worst: f64 = 0.0;
        for i in 2..th.len().saturating_sub(2) {
            let x = self.xs[i];
            let d = (th[i - 2] - 8.0 * th[i - 1] + 8.0 * th[i + 1] - th[i + 2]) / (12.0 * h);
            let t = th[i];
            let (rho, dr) = (p.rho(x), p.rho_prime(x));
            let r = rho * d * d + 2.0 * t * dr * d - t.powi(4) * rho - t * t * p.a(x);
            worst = worst.max(r.abs());
        }
        worst
    }
}

/// Formal solution for the linear profile: the series `θ` with `θ(0) = 1`
/// and `sinh(∫_0^x θ) = x θ(x)`, through `x^order`.
pub fn linear_profile_series(order: usize) -> ScalarSeries {
    let mut theta = ScalarSeries::constant(Q::one(), order);
    // coefficient k of θ enters x^{k+1} of sinh(∫θ) - xθ with weight 1/(k+1) - 1
    for k in 1..=order {
        let rest = sinh_integral_minus_x_theta(&theta, order + 1).coeffs[k + 1].clone();
        let weight = Q::one() / q(k as i64 + 1) - Q::one();
        theta.coeffs[k] = -rest / weight;
    }
    theta
}

fn sinh_integral_minus_x_theta(theta: &ScalarSeries, order: usize) -> ScalarSeries {
    let mut f = ScalarSeries::zero(order);
    for (k, c) in theta.coeffs.iter().enumerate() {
        if k < order {
            f.coeffs[k + 1] = c / q(k as i64 + 1);
        }
    }
    // sinh(f) = Σ f^{2j+1}/(2j+1)!, f = O(x)
    let mut out = ScalarSeries::zero(order);
    let f2 = f.mul(&f);
    let mut power = f.clone();
    let mut j = 0;
    while 2 * j < order {
        out = out.add(&power.scale(&factorial(2 * j + 1).recip()));
        power = power.mul(&f2);
        j += 1;
    }
    let mut xt = ScalarSeries::zero(order);
    for (k, c) in theta.coeffs.iter().enumerate() {
        if k < order {
            xt.coeffs[k + 1] = c.clone();
        }
    }
    out.sub(&xt)
}

/// Evaluate a rational series at `x` in floating point.
pub fn eval_series(s: &ScalarSeries, x: f64) -> f64 {
    use num_traits::ToPrimitive;
    s.coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;
    use crate::fgexpand::series::qr;

    #[test]
    fn linear_series_starts_with_quarter() {
        let s = linear_profile_series(6);
        assert_eq!(s.coeffs[1], Q::zero());
        assert_eq!(s.coeffs[2], qr(1, 4));
    }

    #[test]
    fn in_gauge_is_constant() {
        let sol = radial_gauge_ode(&InGauge, 0.5, 1e-3).unwrap();
        assert!(sol.theta.iter().all(|t| (t - 1.0).abs() < 1e-12));
    }

    #[test]
    fn rejects_large_steps() {
        assert!(radial_gauge_ode(&LinearProfile, 0.2, 1e-2).is_err());
    }
}
