//! Order-by-order analysis of the Einstein condition for
//! `g = sinh(x)^{-2} (dx^2 + h(x))` with `h(0) = h_0` round.
//!
//! In an orthonormal frame for `h_0` at one boundary point the tensors
//! become `d × d` matrices (`d = n - 1`) and `h_0 = Id`. The tangential
//! equation is
//!
//! `ρ(ric - (n-2)h + L_η λ + 2 λ×λ - tr(λ) λ) = ρ'((n-2) λ + tr(λ) h)`
//!
//! and the normal equation is `ρ' tr λ = ρ (tr L_η λ + tr λ×λ)`, with
//! `ρ = sinh x`, `λ = -½ ∂_x h`, `λ×λ = λ h^{-1} λ` and traces taken with
//! `h^{-1}`. In the frozen-frame model the boundary data are constant, so
//! `L_η` is `∂_x` and `ric - (n-2)h` is dropped: it vanishes to the order of
//! `h - h_0` and enters multiplied by `ρ`, beyond the orders inspected.

use alloc::vec::Vec;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::series::{factorial, q, qr, MatrixSeries, QMat, ScalarSeries, Q};
use crate::{Error, Result};

/// `h(x) = Σ x^k/k! h^(k)` with `h^(0) = Id`, stored by Taylor coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSeries {
    pub n: usize,
    pub taylor: Vec<QMat>,
}

impl TensorSeries {
    /// The round metric, `h^(k) = 0` for `1 ≤ k ≤ order`.
    pub fn round(n: usize, order: usize) -> Self {
        let d = n - 1;
        let mut taylor = alloc::vec![QMat::zeros(d); order + 1];
        taylor[0] = QMat::identity(d);
        Self { n, taylor }
    }

    pub fn d(&self) -> usize {
        self.n - 1
    }

    pub fn order(&self) -> usize {
        self.taylor.len() - 1
    }

    /// Set `h^(k)`; rejects non-symmetric input.
    pub fn set(&mut self, k: usize, m: QMat) -> Result<()> {
        if k == 0 || k > self.order() {
            return Err(Error::UnsupportedOrder(k));
        }
        if m.dim() != self.d() {
            return Err(Error::LengthMismatch {
                expected: self.d(),
                got: m.dim(),
            });
        }
        if !m.is_symmetric() {
            return Err(Error::InvalidSeries("coefficients must be symmetric"));
        }
        self.taylor[k] = m;
        Ok(())
    }

    /// Power-series coefficients `h^(k)/k!`.
    pub fn power_series(&self) -> MatrixSeries {
        MatrixSeries {
            d: self.d(),
            coeffs: self
                .taylor
                .iter()
                .enumerate()
                .map(|(k, m)| m.scale(&factorial(k).recip()))
                .collect(),
        }
    }

    pub fn shape(&self) -> ShapeSeries {
        ShapeSeries::from_power(&self.power_series())
    }
}

/// Second fundamental form `λ = -½ ∂_x h` of the level sets of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeSeries {
    /// Power-series coefficients of `λ`; one order shorter than `h`.
    pub lambda: MatrixSeries,
}

impl ShapeSeries {
    fn from_power(h: &MatrixSeries) -> Self {
        let mut lambda = h.derivative().scale(&qr(-1, 2));
        lambda.coeffs.pop();
        Self { lambda }
    }

    /// Taylor coefficient `λ^(k)`, equal to `-½ h^(k+1)`.
    pub fn taylor(&self, k: usize) -> QMat {
        self.lambda.coeffs[k].scale(&factorial(k))
    }
}

fn truncate(mut m: MatrixSeries, order: usize) -> MatrixSeries {
    m.coeffs.truncate(order + 1);
    m
}

fn truncate_scalar(mut s: ScalarSeries, order: usize) -> ScalarSeries {
    s.coeffs.truncate(order + 1);
    s
}

struct Terms {
    h: MatrixSeries,
    hinv: MatrixSeries,
    lambda: MatrixSeries,
    lie: MatrixSeries,
    rho: ScalarSeries,
    drho: ScalarSeries,
    order: usize,
}

/// Series data valid through order `K - 2` for `h` of order `K`.
fn terms(h_power: &MatrixSeries) -> Result<Terms> {
    let k = h_power.order();
    if k < 2 {
        return Err(Error::UnsupportedOrder(k));
    }
    let order = k - 2;
    let lambda = truncate(h_power.derivative().scale(&qr(-1, 2)), order);
    let lie = truncate(lambda.derivative(), order);
    Ok(Terms {
        h: truncate(h_power.clone(), order),
        hinv: truncate(h_power.inverse_unipotent()?, order),
        lambda,
        lie,
        rho: ScalarSeries::sinh(order),
        drho: ScalarSeries::cosh(order),
        order,
    })
}

/// Left minus right side of the tangential equation, for `h` given by
/// power-series coefficients (of order `K`) and a Ricci series `ric`;
/// valid through order `K - 2`.
pub fn main_residual(h_power: &MatrixSeries, ric: &MatrixSeries, n: usize) -> Result<MatrixSeries> {
    let t = terms(h_power)?;
    let nm2 = q(n as i64 - 2);
    let tr_l = t.hinv.mul(&t.lambda).trace();
    let ll = t.lambda.mul(&t.hinv).mul(&t.lambda);
    let ric = truncate(ric.clone(), t.order);
    let inner = ric
        .sub(&t.h.scale(&nm2))
        .add(&t.lie)
        .add(&ll.scale(&q(2)))
        .sub(&t.lambda.mul_scalar(&tr_l));
    let lhs = inner.mul_scalar(&t.rho);
    let rhs = t
        .lambda
        .scale(&nm2)
        .add(&t.h.mul_scalar(&tr_l))
        .mul_scalar(&t.drho);
    Ok(lhs.sub(&rhs))
}

/// Left minus right side of the tangential equation in the frozen-frame
/// model (Ricci term dropped).
pub fn main_residual_frozen(h: &TensorSeries) -> Result<MatrixSeries> {
    let hp = h.power_series();
    let ric = hp.scale(&q(h.n as i64 - 2));
    main_residual(&hp, &ric, h.n)
}

/// `ρ' tr λ - ρ (tr L_η λ + tr λ×λ)`, valid through order `K - 2`.
pub fn trlambda_residual_power(h_power: &MatrixSeries) -> Result<ScalarSeries> {
    let t = terms(h_power)?;
    let tr_l = t.hinv.mul(&t.lambda).trace();
    let tr_lie = t.hinv.mul(&t.lie).trace();
    let tr_ll = t.hinv.mul(&t.lambda).mul(&t.hinv).mul(&t.lambda).trace();
    Ok(truncate_scalar(
        tr_l.mul(&t.drho).sub(&tr_lie.add(&tr_ll).mul(&t.rho)),
        t.order,
    ))
}

pub fn trlambda_residual(h: &TensorSeries) -> Result<ScalarSeries> {
    trlambda_residual_power(&h.power_series())
}

/// `h = Id + x^k/k! S`, of order `k + 1`.
fn single_term(n: usize, k: usize, s: &QMat) -> Result<TensorSeries> {
    let mut h = TensorSeries::round(n, k + 1);
    h.set(k, s.clone())?;
    Ok(h)
}

fn traceless_probe(d: usize) -> QMat {
    let mut t = QMat::zeros(d);
    t.set(0, 0, q(1));
    t.set(1, 1, q(-1));
    t
}

/// Coefficient of `x^{k-1}` in the tangential residual of `Id + x^k/k! S`.
fn leading_coefficient(n: usize, k: usize, s: &QMat) -> Result<QMat> {
    let r = main_residual_frozen(&single_term(n, k, s)?)?;
    Ok(r.coeffs[k - 1].clone())
}

/// The lowest-order tangential equation `c h^(k0) + t tr(h^(k0)) Id = 0`,
/// normalized so that `t = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeadingOrderEquation {
    pub n: usize,
    pub k0: usize,
    #[serde(with = "rational")]
    pub coefficient: Q,
    #[serde(with = "rational")]
    pub trace_coefficient: Q,
    /// Factor by which the raw `x^{k0-1}` coefficient exceeds the normalized equation.
    #[serde(with = "rational")]
    pub normalization: Q,
    /// Coefficient of `tr h^(k0)` in the trace of the equation.
    #[serde(with = "rational")]
    pub trace_equation_coefficient: Q,
    /// Normalized equation evaluated on the supplied matrix.
    #[serde(with = "rational_matrix")]
    pub applied: Vec<Vec<Q>>,
    /// The raw residual of the supplied matrix matches the linear form.
    pub consistent: bool,
}

fn leading_equation_unchecked(n: usize, k0: usize, h_sym: &QMat) -> Result<LeadingOrderEquation> {
    let d = n - 1;
    let alpha = leading_coefficient(n, k0, &traceless_probe(d))?
        .get(0, 0)
        .clone();
    let with_id = leading_coefficient(n, k0, &QMat::identity(d))?
        .get(0, 0)
        .clone();
    let gamma = (with_id - &alpha) / q(d as i64);
    if gamma.is_zero() {
        return Err(Error::InvalidSeries("degenerate trace coefficient"));
    }
    let coefficient = &alpha / &gamma;
    let raw = leading_coefficient(n, k0, h_sym)?;
    let tr = h_sym.trace();
    let applied = h_sym.scale(&coefficient).add(&QMat::identity(d).scale(&tr));
    let consistent = raw == applied.scale(&gamma);
    Ok(LeadingOrderEquation {
        n,
        k0,
        trace_equation_coefficient: &coefficient + q(d as i64),
        coefficient,
        trace_coefficient: Q::one(),
        normalization: gamma,
        applied: applied.rows(),
        consistent,
    })
}

fn check_sym_input(n: usize, h_sym: &QMat) -> Result<()> {
    if n < 4 {
        return Err(Error::DimensionTooSmall(n));
    }
    if h_sym.dim() != n - 1 {
        return Err(Error::LengthMismatch {
            expected: n - 1,
            got: h_sym.dim(),
        });
    }
    if !h_sym.is_symmetric() {
        return Err(Error::InvalidSeries("coefficients must be symmetric"));
    }
    Ok(())
}

/// Substitute `h = Id + x^{k0}/k0! h_sym` into the tangential equation and
/// read off the `x^{k0-1}` coefficient as a linear equation in `h_sym`.
pub fn leading_order_equation(n: usize, k0: usize, h_sym: &QMat) -> Result<LeadingOrderEquation> {
    if k0 < 2 {
        return Err(Error::UnsupportedOrder(k0));
    }
    check_sym_input(n, h_sym)?;
    leading_equation_unchecked(n, k0, h_sym)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceRoute {
    /// From the normal equation.
    Normal,
    /// From the trace of the tangential equation (used at `k0 = 2`, where
    /// the normal equation is silent).
    TangentialTrace,
}

/// `c tr h^(k0) = 0`, in the normalization of [`LeadingOrderEquation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceOrderEquation {
    pub n: usize,
    pub k0: usize,
    #[serde(with = "rational")]
    pub coefficient: Q,
    pub route: TraceRoute,
    /// The normal equation does not see traceless data at this order.
    pub traceless_silent: bool,
}

pub fn trace_order_equation(n: usize, k0: usize) -> Result<TraceOrderEquation> {
    if k0 < 2 {
        return Err(Error::UnsupportedOrder(k0));
    }
    if n < 4 {
        return Err(Error::DimensionTooSmall(n));
    }
    let d = n - 1;
    let lead = leading_equation_unchecked(n, k0, &QMat::identity(d))?;
    let normal = |s: &QMat| -> Result<Q> {
        Ok(trlambda_residual(&single_term(n, k0, s)?)?.coeffs[k0 - 1].clone())
    };
    let traceless_silent = normal(&traceless_probe(d))?.is_zero();
    let via_normal = normal(&QMat::identity(d))? / (&lead.normalization * q(d as i64));
    if k0 == 2 {
        debug_assert!(via_normal.is_zero());
        return Ok(TraceOrderEquation {
            n,
            k0,
            coefficient: lead.trace_equation_coefficient,
            route: TraceRoute::TangentialTrace,
            traceless_silent,
        });
    }
    Ok(TraceOrderEquation {
        n,
        k0,
        coefficient: via_normal,
        route: TraceRoute::Normal,
        traceless_silent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderStatus {
    pub order: usize,
    pub coefficient_forced_zero: bool,
    pub trace_forced_zero: bool,
    pub free: bool,
}

/// Outcome of the induction on the expansion of `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingCertificate {
    pub n: usize,
    pub orders: Vec<OrderStatus>,
    /// First order whose coefficient is not forced to vanish.
    pub first_free_order: Option<usize>,
    /// Largest `j` with `tr h^(k) = 0` forced for all `1 ≤ k ≤ j`.
    pub trace_vanishes_through: usize,
}

/// A fixed traceless symmetric matrix with `tr S^2 ≠ 0`.
fn generic_traceless(d: usize) -> QMat {
    let mut s = QMat::from_fn(d, |i, j| {
        if i == j {
            Q::zero()
        } else {
            qr(1, (i + j + 1) as i64)
        }
    });
    s.set(0, 0, q(1));
    s.set(d - 1, d - 1, q(-1));
    s
}

/// Whether the normal equation at order `m - 1` (for `m ≥ n`) forces
/// `tr h^(m) = 0` once a traceless `h^(n-1)` is present: the contribution of the lower
/// coefficient must vanish and `tr h^(m)` must enter with nonzero weight.
fn trace_forced_above_free(n: usize, m: usize) -> Result<bool> {
    let d = n - 1;
    let s = generic_traceless(d);
    let build = |t: Option<&QMat>| -> Result<Q> {
        let mut h = TensorSeries::round(n, m + 1);
        h.set(n - 1, s.clone())?;
        if let Some(t) = t {
            h.set(m, t.clone())?;
        }
        Ok(trlambda_residual(&h)?.coeffs[m - 1].clone())
    };
    let base = build(None)?;
    let with_t = build(Some(&QMat::identity(d)))?;
    Ok(base.is_zero() && !(with_t - base).is_zero())
}

/// Run the induction through `order`: `h^(k)` vanishes while the leading
/// and trace equations have nonzero coefficients, and above the first free
/// order the traces keep vanishing while the normal equation is not reached
/// by products of the free coefficient.
pub fn vanishing_certificate(n: usize, order: usize) -> Result<VanishingCertificate> {
    if n < 4 {
        return Err(Error::DimensionTooSmall(n));
    }
    let d = n - 1;
    let mut orders = Vec::with_capacity(order);
    let mut inducting = true;
    let mut traces = true;
    let mut first_free = None;
    let mut trace_through = 0;
    for k in 1..=order {
        let (coefficient_forced_zero, trace_forced_zero) = if inducting {
            // all lower coefficients vanish: the leading equations decide
            let lead = leading_equation_unchecked(n, k, &QMat::identity(d))?;
            let trace_coeff = if k <= 2 {
                lead.trace_equation_coefficient.clone()
            } else {
                trace_order_equation(n, k)?.coefficient
            };
            let tr = !trace_coeff.is_zero();
            (tr && !lead.coefficient.is_zero(), tr)
        } else {
            // once a trace is left free the induction stops
            (false, traces && trace_forced_above_free(n, k)?)
        };
        if !coefficient_forced_zero && inducting {
            inducting = false;
            first_free = Some(k);
        }
        traces &= trace_forced_zero;
        if traces {
            trace_through = k;
        }
        orders.push(OrderStatus {
            order: k,
            coefficient_forced_zero,
            trace_forced_zero,
            free: !coefficient_forced_zero,
        });
    }
    Ok(VanishingCertificate {
        n,
        orders,
        first_free_order: first_free,
        trace_vanishes_through: trace_through,
    })
}

/// Residuals of both equations for the rotationally symmetric metric
/// `h = c(x)^2 h_0`, whose Ricci tensor is `(n-2) h_0`. Coefficient `k` of
/// each series multiplies `x^k` (and `h_0` for the tangential one).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricResidual {
    pub n: usize,
    #[serde(with = "rational_list")]
    pub main: Vec<Q>,
    #[serde(with = "rational_list")]
    pub trlambda: Vec<Q>,
    pub main_first_nonzero: Option<usize>,
    pub trlambda_first_nonzero: Option<usize>,
}

/// Requires `c(0) = 1`; the residuals are exact through order `order(c) - 2`.
pub fn einstein_residual_symmetric(c: &ScalarSeries, n: usize) -> Result<SymmetricResidual> {
    if !c.coeffs[0].is_one() {
        return Err(Error::InvalidSeries("c(0) must be 1"));
    }
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    let d = n - 1;
    let h = MatrixSeries::from_scalar(&c.mul(c), d);
    let ric = MatrixSeries::identity(d, c.order()).scale(&q(n as i64 - 2));
    let main = main_residual(&h, &ric, n)?;
    let trl = trlambda_residual_power(&h)?;
    let main: Vec<Q> = main.coeffs.iter().map(|m| m.get(0, 0).clone()).collect();
    Ok(SymmetricResidual {
        n,
        main_first_nonzero: main.iter().position(|v| !v.is_zero()),
        trlambda_first_nonzero: trl.valuation(),
        main,
        trlambda: trl.coeffs,
    })
}

/// Serde helpers printing rationals as `"p/q"` strings.
pub mod rational {
    use alloc::string::{String, ToString};

    use serde::{Deserialize, Deserializer, Serializer};

    use super::Q;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| serde::de::Error::custom("expected a rational p/q"))
    }

    pub fn parse(s: &str) -> Option<Q> {
        s.trim().parse().ok()
    }
}

pub mod rational_list {
    use alloc::string::{String, ToString};
    use alloc::vec::Vec;

    use serde::{Deserialize, Deserializer, Serializer};

    use super::Q;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| {
                super::rational::parse(s)
                    .ok_or_else(|| serde::de::Error::custom("expected a rational p/q"))
            })
            .collect()
    }
}

pub mod rational_matrix {
    use alloc::string::{String, ToString};
    use alloc::vec::Vec;

    use serde::{Deserialize, Deserializer, Serializer};

    use super::Q;

    pub fn serialize<S: Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(
            v.iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        super::rational::parse(s)
                            .ok_or_else(|| serde::de::Error::custom("expected a rational p/q"))
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_is_shifted_tensor() {
        let mut h = TensorSeries::round(5, 6);
        h.set(3, generic_traceless(4)).unwrap();
        h.set(4, QMat::identity(4)).unwrap();
        let l = h.shape();
        for k in 0..6 {
            assert_eq!(l.taylor(k), h.taylor[k + 1].scale(&qr(-1, 2)));
        }
    }

    #[test]
    fn first_order_vanishes() {
        // the k = 1 coefficient obeys (n-2) h + tr(h) Id = 0
        for n in 4..=7 {
            let e = leading_equation_unchecked(n, 1, &QMat::identity(n - 1)).unwrap();
            assert_eq!(e.coefficient, q(n as i64 - 2));
            assert!(e.consistent);
        }
    }
}
