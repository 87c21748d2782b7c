//! Exact arithmetic in the cyclotomic field `Q(ζ_N)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^(d-1)` with
//! `d = φ(N)`, as integer numerators over one positive common denominator
//! kept in lowest terms, so equality is structural.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Integer polynomial, lowest degree first.
type IntPoly = Vec<i64>;

fn poly_div_exact(num: &IntPoly, den: &IntPoly) -> IntPoly {
    // den is monic
    let mut rem = num.clone();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// The `N`-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: usize) -> IntPoly {
    assert!(n >= 1);
    let mut p: IntPoly = vec![0; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / a.gcd(&b) * b
}

/// An element of `Q(ζ_N)`; only meaningful together with its [`CycloField`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyc {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyc {
    fn normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -core::mem::take(c);
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c /= &g;
            }
            den /= &g;
        }
        Self { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }
}

/// The field `Q(ζ_N)` with `ζ_N = exp(2πi/N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloField {
    order: usize,
    modulus: IntPoly,
    /// `reduction[k]` holds `ζ^k` in the power basis for `k < max(2d, N)`.
    reduction: Vec<Vec<i64>>,
}

impl CycloField {
    pub fn new(order: usize) -> Self {
        let modulus = cyclotomic_poly(order.max(1));
        let d = modulus.len() - 1;
        let mut reduction = Vec::with_capacity(2 * d);
        let mut cur = vec![0i64; d];
        cur[0] = 1;
        for _ in 0..(2 * d).max(order.max(1)) {
            reduction.push(cur.clone());
            // multiply by ζ and reduce the overflowing top coefficient
            let top = cur[d - 1];
            for j in (1..d).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            for j in 0..d {
                cur[j] -= top * modulus[j];
            }
        }
        Self {
            order: order.max(1),
            modulus,
            reduction,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(&self) -> Cyc {
        Cyc {
            num: vec![BigInt::zero(); self.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(&self) -> Cyc {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Cyc {
        let mut z = self.zero();
        z.num[0] = BigInt::from(v);
        Cyc::normalized(z.num, z.den)
    }

    pub fn from_rational(&self, r: &BigRational) -> Cyc {
        let mut num = vec![BigInt::zero(); self.degree()];
        num[0] = r.numer().clone();
        Cyc::normalized(num, r.denom().clone())
    }

    pub fn from_ratio(&self, p: i64, q: i64) -> Cyc {
        self.from_rational(&BigRational::new(p.into(), q.into()))
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> Cyc {
        let k = k.rem_euclid(self.order as i64) as usize;
        self.power_basis_reduce(
            &{
                let mut v = vec![BigInt::zero(); k + 1];
                v[k] = BigInt::one();
                v
            },
            BigInt::one(),
        )
    }

    /// `ζ_m^k` where `m` divides `N`.
    pub fn root_of_unity(&self, m: usize, k: i64) -> Result<Cyc> {
        if m == 0 || !self.order.is_multiple_of(m) {
            return Err(Error::InvalidGroup(format!(
                "ζ_{m} is not in Q(ζ_{})",
                self.order
            )));
        }
        Ok(self.zeta_pow(k * (self.order / m) as i64))
    }

    fn power_basis_reduce(&self, poly: &[BigInt], den: BigInt) -> Cyc {
        let d = self.degree();
        let mut out = vec![BigInt::zero(); d];
        for (k, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &self.reduction[if k < self.reduction.len() {
                k
            } else {
                k % self.order
            }];
            for (j, r) in row.iter().enumerate() {
                if *r != 0 {
                    out[j] += c * r;
                }
            }
        }
        Cyc::normalized(out, den)
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        Cyc::normalized(num, &a.den * &b.den)
    }

    pub fn neg(&self, a: &Cyc) -> Cyc {
        Cyc {
            num: a.num.iter().map(|c| -c).collect(),
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let d = self.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.power_basis_reduce(&prod, &a.den * &b.den)
    }

    pub fn scale(&self, a: &Cyc, r: &BigRational) -> Cyc {
        let num = a.num.iter().map(|c| c * r.numer()).collect();
        Cyc::normalized(num, &a.den * r.denom())
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self, a: &Cyc) -> Cyc {
        let n = self.order;
        let mut poly = vec![BigInt::zero(); n];
        for (k, c) in a.num.iter().enumerate() {
            poly[(n - k) % n] += c;
        }
        self.power_basis_reduce(&poly, a.den.clone())
    }

    /// Real part `(a + ā) / 2`.
    pub fn re(&self, a: &Cyc) -> Cyc {
        let s = self.add(a, &self.conj(a));
        self.scale(&s, &BigRational::new(1.into(), 2.into()))
    }

    /// Multiplicative inverse, by solving the linear system of `x ↦ a x`.
    pub fn inv(&self, a: &Cyc) -> Result<Cyc> {
        if a.is_zero() {
            return Err(Error::VanishingDenominator);
        }
        let d = self.degree();
        let col = |j: usize| self.mul(a, &self.zeta_pow(j as i64));
        // augmented matrix [M | e0] with M's columns = a ζ^j
        let cols: Vec<Cyc> = (0..d).map(col).collect();
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = cols
                    .iter()
                    .map(|c| BigRational::new(c.num[i].clone(), c.den.clone()))
                    .collect();
                row.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for k in 0..d {
            let piv = (k..d)
                .find(|&i| !m[i][k].is_zero())
                .ok_or(Error::Singular)?;
            m.swap(k, piv);
            let pv = m[k][k].clone();
            for x in m[k].iter_mut() {
                *x /= &pv;
            }
            for i in 0..d {
                if i != k && !m[i][k].is_zero() {
                    let f = m[i][k].clone();
                    for j in k..=d {
                        let t = &m[k][j] * &f;
                        m[i][j] -= t;
                    }
                }
            }
        }
        let den = m
            .iter()
            .fold(BigInt::one(), |acc, row| acc.lcm(row[d].denom()));
        let num = m
            .iter()
            .map(|row| row[d].numer() * (&den / row[d].denom()))
            .collect();
        Ok(Cyc::normalized(num, den))
    }

    pub fn div(&self, a: &Cyc, b: &Cyc) -> Result<Cyc> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Numerical value under `ζ ↦ exp(2πi/N)`.
    pub fn to_complex(&self, a: &Cyc) -> Complex64 {
        let den = a.den.to_f64().unwrap_or(f64::NAN);
        let step = 2.0 * core::f64::consts::PI / self.order as f64;
        a.num
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let w = c.to_f64().unwrap_or(f64::NAN) / den;
                Complex64::from_polar(w, step * k as f64)
            })
            .sum()
    }

    /// Image of `a` under the inclusion `Q(ζ_N) ⊂ Q(ζ_M)`, `N | M`.
    pub fn embed(&self, a: &Cyc, target: &CycloField) -> Result<Cyc> {
        if !target.order.is_multiple_of(self.order) {
            return Err(Error::InvalidGroup(format!(
                "Q(ζ_{}) does not contain Q(ζ_{})",
                target.order, self.order
            )));
        }
        let stride = (target.order / self.order) as i64;
        let mut acc = target.zero();
        for (k, c) in a.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = target.zeta_pow(stride * k as i64);
            let r = BigRational::new(c.clone(), a.den.clone());
            acc = target.add(&acc, &target.scale(&term, &r));
        }
        Ok(acc)
    }

    /// Human-readable form such as `1/2 + 3*z^2`, with `z = ζ_N`.
    pub fn format(&self, a: &Cyc) -> String {
        let mut out = String::new();
        for (k, c) in a.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = BigRational::new(c.clone(), a.den.clone());
            let neg = r.is_negative();
            let mag = r.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => String::from("z"),
                _ => format!("z^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&format!("{mag}"));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}
