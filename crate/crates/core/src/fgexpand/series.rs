//! Truncated power series with exact rational scalar and matrix coefficients.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(k: usize) -> Q {
    (1..=k as i64).fold(Q::one(), |acc, j| acc * q(j))
}

/// Generalized binomial coefficient `C(-1/2, k)`.
pub fn binomial_minus_half(k: usize) -> Q {
    let a = qr(-1, 2);
    (0..k).fold(Q::one(), |acc, j| {
        acc * (&a - q(j as i64)) / q(j as i64 + 1)
    })
}

/// Square matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    d: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.d).map(|i| {
                (0..self.d)
                    .map(|j| alloc::format!("{}", self.get(i, j)))
                    .collect::<Vec<_>>()
            }))
            .finish()
    }
}

impl QMat {
    pub fn zeros(d: usize) -> Self {
        Self {
            d,
            data: alloc::vec![Q::zero(); d * d],
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, |i, j| if i == j { Q::one() } else { Q::zero() })
    }

    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                data.push(f(i, j));
            }
        }
        Self { d, data }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidSeries("matrix rows must form a square"));
        }
        Ok(Self {
            d,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.d + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.d + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Q>> {
        self.data.chunks(self.d).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.d).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> Q {
        (0..self.d).fold(Q::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self {
            d: self.d,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            d: self.d,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            d: self.d,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.d;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * d + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Largest absolute entry, for reporting.
    pub fn max_abs(&self) -> Q {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Q::zero)
    }
}

/// Truncated scalar series `Σ_{k ≤ order} c_k x^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSeries {
    pub coeffs: Vec<Q>,
}

impl ScalarSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: alloc::vec![Q::zero(); order + 1],
        }
    }

    pub fn constant(c: Q, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.resize(order + 1, Q::zero());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn sinh(order: usize) -> Self {
        Self {
            coeffs: (0..=order)
                .map(|k| {
                    if k % 2 == 1 {
                        factorial(k).recip()
                    } else {
                        Q::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn cosh(order: usize) -> Self {
        Self {
            coeffs: (0..=order)
                .map(|k| {
                    if k % 2 == 0 {
                        factorial(k).recip()
                    } else {
                        Q::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for k in 1..=order {
            out.coeffs[k - 1] = &self.coeffs[k] * q(k as i64);
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|v| v * s).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let mut out = Self::zero(order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                out.coeffs[i + j] += &self.coeffs[i] * &o.coeffs[j];
            }
        }
        out
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::InvalidSeries(
                "series with zero constant term is not invertible",
            ));
        }
        let order = self.order();
        let c0 = self.coeffs[0].recip();
        let mut out = Self::zero(order);
        out.coeffs[0] = c0.clone();
        for k in 1..=order {
            let mut acc = Q::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out.coeffs[k - j];
            }
            out.coeffs[k] = -acc * &c0;
        }
        Ok(out)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

/// Truncated series `Σ_{k ≤ order} M_k x^k` with `d × d` rational matrix
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSeries {
    pub d: usize,
    pub coeffs: Vec<QMat>,
}

impl MatrixSeries {
    pub fn zero(d: usize, order: usize) -> Self {
        Self {
            d,
            coeffs: alloc::vec![QMat::zeros(d); order + 1],
        }
    }

    pub fn identity(d: usize, order: usize) -> Self {
        let mut s = Self::zero(d, order);
        s.coeffs[0] = QMat::identity(d);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c(x) · Id`.
    pub fn from_scalar(c: &ScalarSeries, d: usize) -> Self {
        let id = QMat::identity(d);
        Self {
            d,
            coeffs: c.coeffs.iter().map(|v| id.scale(v)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self {
            d: self.d,
            coeffs: self.coeffs.iter().map(|m| m.scale(s)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let mut out = Self::zero(self.d, order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&self.coeffs[i].mul(&o.coeffs[j]));
            }
        }
        out
    }

    pub fn mul_scalar(&self, s: &ScalarSeries) -> Self {
        let order = self.order().min(s.order());
        let mut out = Self::zero(self.d, order);
        for i in 0..=order {
            if s.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                out.coeffs[i + j] = out.coeffs[i + j].add(&self.coeffs[j].scale(&s.coeffs[i]));
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let order = self.order();
        let mut out = Self::zero(self.d, order);
        for k in 1..=order {
            out.coeffs[k - 1] = self.coeffs[k].scale(&q(k as i64));
        }
        out
    }

    pub fn trace(&self) -> ScalarSeries {
        ScalarSeries {
            coeffs: self.coeffs.iter().map(QMat::trace).collect(),
        }
    }

    /// Inverse of a series with invertible constant term equal to `Id`.
    pub fn inverse_unipotent(&self) -> Result<Self> {
        if self.coeffs[0] != QMat::identity(self.d) {
            return Err(Error::InvalidSeries("constant term must be the identity"));
        }
        let order = self.order();
        let mut out = Self::identity(self.d, order);
        for k in 1..=order {
            let mut acc = QMat::zeros(self.d);
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !out.coeffs[k - j].is_zero() {
                    acc = acc.add(&self.coeffs[j].mul(&out.coeffs[k - j]));
                }
            }
            out.coeffs[k] = acc.scale(&q(-1));
        }
        Ok(out)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial_minus_half(0), q(1));
        assert_eq!(binomial_minus_half(1), qr(-1, 2));
        assert_eq!(binomial_minus_half(2), qr(3, 8));
        assert_eq!(binomial_minus_half(3), qr(-5, 16));
    }

    #[test]
    fn sinh_cosh_relations() {
        let s = ScalarSeries::sinh(9);
        let c = ScalarSeries::cosh(9);
        assert_eq!(s.derivative().coeffs[..9], c.coeffs[..9]);
        // cosh^2 - sinh^2 = 1
        let one = c.mul(&c).sub(&s.mul(&s));
        assert_eq!(one, ScalarSeries::constant(q(1), 9));
    }

    #[test]
    fn scalar_and_matrix_inverse() {
        let c = ScalarSeries::from_coeffs(alloc::vec![q(1), q(2), qr(1, 3)], 6);
        assert_eq!(
            c.mul(&c.inverse().unwrap()),
            ScalarSeries::constant(q(1), 6)
        );
        let mut m = MatrixSeries::identity(2, 5);
        m.coeffs[1] = QMat::from_fn(2, |i, j| q((i + 2 * j) as i64));
        m.coeffs[2] = QMat::from_fn(2, |i, j| qr(1, (1 + i + j) as i64));
        assert_eq!(
            m.mul(&m.inverse_unipotent().unwrap()),
            MatrixSeries::identity(2, 5)
        );
    }
}
