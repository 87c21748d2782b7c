use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::gauge::{GaugeProfile, SyntheticGauge};
use super::integrand::{BoundarySlice, MassIntegrand, MassTermBreakdown};
use super::quadrature::SphereQuadrature;
use crate::clifford::Spinor;
use crate::{Error, Result};

/// Slice integrals at or below this magnitude count as zero.
pub const ZERO_TOL: f64 = 1e-14;

/// Least-squares fit of `log |I(x)|` against `log x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub samples: usize,
    /// Every sample vanished; the slope is undefined and the integral is
    /// certified to vanish.
    pub identically_zero: bool,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub std_error: Option<f64>,
    /// Two-sided 95% Student interval for the slope.
    pub interval: Option<(f64, f64)>,
}

/// Two-sided 95% Student quantiles for 1..=30 degrees of freedom.
const T95: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160,
    2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056,
    2.052, 2.048, 2.045, 2.042,
];

/// Fit over at least five samples; values with `|v| <= zero_tol` are zero.
pub fn decay_fit(xs: &[f64], values: &[f64], zero_tol: f64) -> Result<DecayFit> {
    if xs.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: xs.len(),
            got: values.len(),
        });
    }
    let m = xs.len();
    if m < 5 {
        return Err(Error::TooFewSamples { need: 5, got: m });
    }
    if xs.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::Degenerate("slice parameters must be positive"));
    }
    let zeros = values.iter().filter(|v| v.abs() <= zero_tol).count();
    if zeros == m {
        return Ok(DecayFit {
            samples: m,
            identically_zero: true,
            slope: None,
            intercept: None,
            std_error: None,
            interval: None,
        });
    }
    if zeros > 0 {
        return Err(Error::Degenerate("some but not all slice integrals vanish"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|v| v.abs().ln()).collect();
    let mf = m as f64;
    let mx = lx.iter().sum::<f64>() / mf;
    let my = ly.iter().sum::<f64>() / mf;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all slices coincide"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let df = m - 2;
    let se = (sse / df as f64 / sxx).sqrt();
    let t = T95.get(df - 1).copied().unwrap_or(1.96);
    Ok(DecayFit {
        samples: m,
        identically_zero: false,
        slope: Some(slope),
        intercept: Some(intercept),
        std_error: Some(se),
        interval: Some((slope - t * se, slope + t * se)),
    })
}

/// `count` geometrically spaced values from `lo` to `hi` inclusive.
pub fn geometric_slices(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(lo > 0.0) || !(hi > lo) {
        return Err(Error::Degenerate(
            "need at least two increasing positive slices",
        ));
    }
    let r = (hi / lo).ln() / (count - 1) as f64;
    Ok((0..count).map(|k| lo * (r * k as f64).exp()).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceSample {
    pub x: f64,
    pub integral: MassTermBreakdown,
}

/// Slice integrals of the mass integrand and the verdict on their decay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassDecayReport {
    pub n: usize,
    pub profile: GaugeProfile,
    pub polar_nodes: usize,
    pub azimuth_nodes: usize,
    pub slices: Vec<SliceSample>,
    pub fit: DecayFit,
    /// The rate `n - 2`.
    pub expected: f64,
    /// Largest `|Im| / |Re|` of the slice totals.
    pub max_imag_ratio: f64,
    /// Compliant: zero or slope at least `expected - 0.15`. Identity:
    /// identically zero. Trace-violating: slope below `expected - 0.5`.
    pub pass: bool,
}

pub fn mass_decay(
    n: usize,
    profile: GaugeProfile,
    xs: &[f64],
    quadrature: &SphereQuadrature,
    u: &Spinor,
) -> Result<MassDecayReport> {
    if quadrature.n != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: quadrature.n,
        });
    }
    let integrand = MassIntegrand::new(SyntheticGauge::new(n, profile), u.clone())?;
    let mut slices = Vec::with_capacity(xs.len());
    for &x in xs {
        let slice = BoundarySlice::new(x, quadrature.clone())?;
        slices.push(SliceSample {
            x,
            integral: integrand.integrate(&slice)?,
        });
    }
    let totals: Vec<f64> = slices.iter().map(|s| s.integral.total).collect();
    let fit = decay_fit(xs, &totals, ZERO_TOL)?;
    let max_imag_ratio = slices
        .iter()
        .filter(|s| s.integral.total.abs() > ZERO_TOL)
        .map(|s| s.integral.imag.abs() / s.integral.total.abs())
        .fold(0.0, f64::max);
    let expected = n as f64 - 2.0;
    let pass = match profile {
        GaugeProfile::Identity => fit.identically_zero,
        GaugeProfile::Compliant => {
            fit.identically_zero || fit.slope.is_some_and(|s| s >= expected - 0.15)
        }
        GaugeProfile::TraceViolating => fit.slope.is_some_and(|s| s < expected - 0.5),
    };
    Ok(MassDecayReport {
        n,
        profile,
        polar_nodes: quadrature.polar_nodes,
        azimuth_nodes: quadrature.azimuth_nodes,
        slices,
        fit,
        expected,
        max_imag_ratio,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = geometric_slices(0.02, 0.2, 6).unwrap();
        let vs: Vec<f64> = xs.iter().map(|x| -3.0 * x * x).collect();
        let fit = decay_fit(&xs, &vs, ZERO_TOL).unwrap();
        assert!((fit.slope.unwrap() - 2.0).abs() < 1e-12);
        assert!(fit.std_error.unwrap() < 1e-10);
    }

    #[test]
    fn zero_and_short_inputs() {
        let xs = geometric_slices(0.02, 0.2, 5).unwrap();
        assert!(
            decay_fit(&xs, &[0.0; 5], ZERO_TOL)
                .unwrap()
                .identically_zero
        );
        assert!(decay_fit(&xs[..4], &[1.0; 4], ZERO_TOL).is_err());
        assert!(decay_fit(&xs, &[0.0, 1.0, 1.0, 1.0, 1.0], ZERO_TOL).is_err());
    }
}
