//! Spin geometry on conformally flat charts of the unit ball.
//!
//! A chart carries the metric `g = e^{2f} g_0` with orthonormal frame
//! `e_i = e^{-f} ∂_i`. The spinor bundle is trivialized along this frame,
//! and the frame acts on spinors by `c(e_k) = -g_k` where `g_k` are the
//! generators of [`CliffordRep`](crate::clifford::CliffordRep). With this
//! orientation the spinors `ρ^{-1/2} (1 + i x·) u` are parallel for the
//! Killing connection `∇_X + (i/2) X·` on the ball model, where `x·` is
//! multiplication by `Σ x_i g_i` and `ρ(x) = (1 - |x|^2)/2`.
//!
//! Levi-Civita connection forms are `ω_ij(e_k) = e^{-f} (f_i δ_jk - f_j δ_ik)`
//! with `f_i = ∂_i f`, giving
//! `∇_{e_k} φ = e^{-f} (∂_k φ + ½ Σ_{i≠k} f_i c(e_i) c(e_k) φ)`.

mod chart;
mod fields;
mod gauge;
mod growth;
mod metric;
mod spin;

pub use chart::{rho_ball, ChartKind, ConformalChart};
pub use fields::{
    CliffordProductField, ConstantSpinor, CutoffKillingSpinor, KillingSpinor, PolynomialSpinor,
    SpinorField,
};
pub use gauge::{
    connection_difference, difference_constants, gauge_map, ConnectionDifference, GaugeMap,
    PerturbedMetric, ScaledMetric,
};
pub use growth::{
    killing_norm_sqr_closed_form, norm_growth_check, radial_distance, warped_sectional,
    warped_sectional_fd, NormGrowth,
};
pub use metric::{christoffel, riemann, sectional_curvature, Metric};
pub use spin::{DerivativeMode, LichnerowiczSample, SpinGeometry};

/// Centered-difference step for first derivatives.
pub const FD_STEP: f64 = 1e-5;
/// Step for derivatives of connection data (curvature, divergence).
pub const FD_STEP_CURVATURE: f64 = 1e-4;
