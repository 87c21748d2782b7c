use alloc::vec::Vec;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::series::{binomial_minus_half, MatrixSeries, QMat};
use crate::{Error, Result};

/// `A = (Id + H)^{-1/2} = Σ C(-1/2, k) H^k`, truncated, together with `H`.
/// Tangential block only: the normal direction `η` is fixed by `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeSeries {
    pub h: MatrixSeries,
    pub a: MatrixSeries,
}

pub fn gauge_series(h: &MatrixSeries, order: usize) -> Result<GaugeSeries> {
    if order < 1 {
        return Err(Error::UnsupportedOrder(order));
    }
    if h.order() < order {
        return Err(Error::InvalidSeries(
            "H is shorter than the requested order",
        ));
    }
    if !h.coeffs[0].is_zero() {
        return Err(Error::InvalidSeries("H(0) must vanish"));
    }
    let mut hh = h.clone();
    hh.coeffs.truncate(order + 1);
    let mut a = MatrixSeries::identity(h.d, order);
    let mut power = MatrixSeries::identity(h.d, order);
    // H^k = O(x^k), so k ≤ order suffices
    for k in 1..=order {
        power = power.mul(&hh);
        a = a.add(&power.scale(&binomial_minus_half(k)));
    }
    Ok(GaugeSeries { h: hh, a })
}

impl GaugeSeries {
    pub fn order(&self) -> usize {
        self.a.order()
    }

    /// `B = A - Id`.
    pub fn b(&self) -> MatrixSeries {
        self.a.sub(&MatrixSeries::identity(self.a.d, self.order()))
    }

    /// `A^2 (Id + H) - Id`, which vanishes through the truncation order.
    pub fn inverse_defect(&self) -> MatrixSeries {
        let id = MatrixSeries::identity(self.a.d, self.order());
        self.a.mul(&self.a).mul(&id.add(&self.h)).sub(&id)
    }

    /// Coefficient `k` of `A` on the full tangent space, `η` first.
    pub fn full_coefficient(&self, k: usize) -> QMat {
        let d = self.a.d;
        let c = &self.a.coeffs[k];
        QMat::from_fn(d + 1, |i, j| match (i, j) {
            (0, 0) if k == 0 => num_traits::One::one(),
            (0, _) | (_, 0) => Zero::zero(),
            _ => c.get(i - 1, j - 1).clone(),
        })
    }
}

/// `H = x^{n-1} S` for a symmetric `S`, as used to test decay orders.
pub fn synthetic_h(n: usize, s: &QMat, order: usize) -> Result<MatrixSeries> {
    if s.dim() != n - 1 {
        return Err(Error::LengthMismatch {
            expected: n - 1,
            got: s.dim(),
        });
    }
    let mut h = MatrixSeries::zero(s.dim(), order);
    if n - 1 <= order {
        h.coeffs[n - 1] = s.clone();
    }
    Ok(h)
}

/// Observed vanishing orders of `A - Id` and its trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecayReport {
    pub n: usize,
    pub truncation: usize,
    /// Lowest power of `x` in `A - Id`; `None` if zero through truncation.
    pub a_minus_id_order: Option<usize>,
    pub trace_order: Option<usize>,
    pub normal_preserved: bool,
    pub expected_a_order: usize,
    pub expected_trace_order: usize,
    /// `A - Id = O(x^{n-1})`, `tr(A - Id) = O(x^{2n-2})` and `(A - Id) η = 0`.
    pub holds: bool,
}

pub fn decay_orders(g: &GaugeSeries, n: usize) -> DecayReport {
    let b = g.b();
    let a_order = b.valuation();
    let trace_order = b.trace().valuation();
    let d = g.a.d;
    let normal_preserved = (0..=g.order()).all(|k| {
        let full = g.full_coefficient(k);
        let id_k = if k == 0 {
            QMat::identity(d + 1)
        } else {
            QMat::zeros(d + 1)
        };
        let diff = full.sub(&id_k);
        (0..=d).all(|i| diff.get(i, 0).is_zero())
    });
    let expected_a_order = n - 1;
    let expected_trace_order = 2 * n - 2;
    let at_least = |o: Option<usize>, e: usize| o.is_none_or(|v| v >= e);
    DecayReport {
        n,
        truncation: g.order(),
        a_minus_id_order: a_order,
        trace_order,
        normal_preserved,
        expected_a_order,
        expected_trace_order,
        holds: at_least(a_order, expected_a_order)
            && at_least(trace_order, expected_trace_order)
            && normal_preserved,
    }
}

/// Leading coefficients of `A - Id` for `H = x^{n-1} S`: `-½ S` at order
/// `n-1` and `3/8 S^2` at order `2n-2`.
pub fn expected_leading_terms(s: &QMat) -> Vec<QMat> {
    alloc::vec![
        s.scale(&binomial_minus_half(1)),
        s.mul(s).scale(&binomial_minus_half(2))
    ]
}
