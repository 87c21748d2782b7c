//! Exact formal expansion of conformally compact Einstein metrics in the
//! gauge `g = sinh(x)^{-2} (dx^2 + h(x))`, the gauge transformation to the
//! hyperbolic cylinder, and the radial gauge-change equation.

mod equations;
mod gauge;
mod ode;
mod series;

pub use equations::{
    einstein_residual_symmetric, leading_order_equation, main_residual, main_residual_frozen,
    rational, rational_list, rational_matrix, trace_order_equation, trlambda_residual,
    vanishing_certificate, LeadingOrderEquation, OrderStatus, ShapeSeries, SymmetricResidual,
    TensorSeries, TraceOrderEquation, TraceRoute, VanishingCertificate,
};
pub use gauge::{
    decay_orders, expected_leading_terms, gauge_series, synthetic_h, DecayReport, GaugeSeries,
};
pub use ode::{
    eval_series, linear_profile_series, radial_gauge_ode, InGauge, LinearProfile, RadialProfile,
    RadialSolution, MAX_STEP,
};
pub use series::{binomial_minus_half, factorial, q, qr, MatrixSeries, QMat, ScalarSeries, Q};

/// Default truncation order `2n`, past both thresholds `n - 1` and `2n - 2`.
pub fn default_order(n: usize) -> usize {
    2 * n
}
