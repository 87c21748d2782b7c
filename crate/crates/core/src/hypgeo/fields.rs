use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::chart::rho_ball;
use super::FD_STEP;
use crate::clifford::{CliffordRep, Spinor};
use crate::linalg::{C64, I};
use crate::sampling::Sampler;
use crate::{Error, Result};

/// A spinor field in the trivialization of a ball chart.
pub trait SpinorField {
    fn n(&self) -> usize;
    fn spinor_dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Result<Spinor>;

    /// Coordinate derivative `∂_a φ`; centered differences unless a field
    /// provides a closed form.
    fn partial(&self, x: &[f64], a: usize) -> Result<Spinor> {
        fd_partial(self, x, a, FD_STEP)
    }
}

pub(crate) fn fd_partial<F: SpinorField + ?Sized>(
    field: &F,
    x: &[f64],
    a: usize,
    h: f64,
) -> Result<Spinor> {
    let mut p = x.to_vec();
    let mut q = x.to_vec();
    p[a] += h;
    q[a] -= h;
    let fp = field.eval(&p)?;
    let fq = field.eval(&q)?;
    Ok(fp
        .iter()
        .zip(&fq)
        .map(|(u, v)| (u - v) / (2.0 * h))
        .collect())
}

fn check_len(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    Ok(())
}

/// `φ_u(x) = ρ(x)^{-1/2} (1 + i x·) u`.
#[derive(Clone, Debug)]
pub struct KillingSpinor {
    pub rep: CliffordRep,
    pub u: Spinor,
}

impl KillingSpinor {
    pub fn new(rep: CliffordRep, u: Spinor) -> Result<Self> {
        if u.len() != rep.spinor_dim() {
            return Err(Error::LengthMismatch {
                expected: rep.spinor_dim(),
                got: u.len(),
            });
        }
        Ok(Self { rep, u })
    }

    fn bracket(&self, x: &[f64]) -> Result<Spinor> {
        let xu = self.rep.vector_action(x, &self.u)?;
        Ok(self.u.iter().zip(&xu).map(|(u, v)| u + I * v).collect())
    }
}

impl SpinorField for KillingSpinor {
    fn n(&self) -> usize {
        self.rep.n()
    }

    fn spinor_dim(&self) -> usize {
        self.rep.spinor_dim()
    }

    fn eval(&self, x: &[f64]) -> Result<Spinor> {
        check_len(x, self.n())?;
        let rho = rho_ball(x);
        if rho <= 0.0 {
            return Err(Error::outside(x));
        }
        let s = rho.powf(-0.5);
        Ok(self.bracket(x)?.into_iter().map(|v| v * s).collect())
    }

    fn partial(&self, x: &[f64], a: usize) -> Result<Spinor> {
        check_len(x, self.n())?;
        let rho = rho_ball(x);
        if rho <= 0.0 {
            return Err(Error::outside(x));
        }
        // ∂_a ρ^{-1/2} = ½ x_a ρ^{-3/2}
        let b = self.bracket(x)?;
        let gu = self.rep.gen(a + 1).apply(&self.u);
        let c1 = 0.5 * x[a] * rho.powf(-1.5);
        let c2 = rho.powf(-0.5);
        Ok(b.iter()
            .zip(&gu)
            .map(|(b, g)| b * c1 + I * g * c2)
            .collect())
    }
}

/// `χ(|x|) φ_u(x)` with a smooth cutoff `χ` equal to 1 for `|x| ≤ r0` and 0
/// for `|x| ≥ r1`.
#[derive(Clone, Debug)]
pub struct CutoffKillingSpinor {
    pub killing: KillingSpinor,
    pub r0: f64,
    pub r1: f64,
}

fn smooth_h(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

fn smooth_h_prime(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp() / (t * t)
    }
}

impl CutoffKillingSpinor {
    /// The cutoff `χ(r)` and its derivative.
    pub fn cutoff(&self, r: f64) -> (f64, f64) {
        let t = (r - self.r0) / (self.r1 - self.r0);
        let (a, b) = (smooth_h(1.0 - t), smooth_h(t));
        let (da, db) = (-smooth_h_prime(1.0 - t), smooth_h_prime(t));
        let s = a + b;
        let chi = a / s;
        let dchi = (da * s - a * (da + db)) / (s * s) / (self.r1 - self.r0);
        (chi, dchi)
    }
}

impl SpinorField for CutoffKillingSpinor {
    fn n(&self) -> usize {
        self.killing.n()
    }

    fn spinor_dim(&self) -> usize {
        self.killing.spinor_dim()
    }

    fn eval(&self, x: &[f64]) -> Result<Spinor> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (chi, _) = self.cutoff(r);
        Ok(self.killing.eval(x)?.into_iter().map(|v| v * chi).collect())
    }

    fn partial(&self, x: &[f64], a: usize) -> Result<Spinor> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (chi, dchi) = self.cutoff(r);
        let dr = if r > 0.0 { x[a] / r } else { 0.0 };
        let phi = self.killing.eval(x)?;
        let dphi = self.killing.partial(x, a)?;
        Ok(phi
            .iter()
            .zip(&dphi)
            .map(|(p, d)| p * (dchi * dr) + d * chi)
            .collect())
    }
}

#[derive(Clone, Debug)]
pub struct ConstantSpinor {
    pub n: usize,
    pub value: Spinor,
}

impl SpinorField for ConstantSpinor {
    fn n(&self) -> usize {
        self.n
    }

    fn spinor_dim(&self) -> usize {
        self.value.len()
    }

    fn eval(&self, x: &[f64]) -> Result<Spinor> {
        check_len(x, self.n)?;
        Ok(self.value.clone())
    }

    fn partial(&self, x: &[f64], _a: usize) -> Result<Spinor> {
        check_len(x, self.n)?;
        Ok(alloc::vec![C64::new(0.0, 0.0); self.value.len()])
    }
}

/// `u_0 + Σ x_a u_a + Σ_{a≤b} x_a x_b u_ab` with fixed spinor coefficients.
#[derive(Clone, Debug)]
pub struct PolynomialSpinor {
    pub n: usize,
    pub constant: Spinor,
    pub linear: Vec<Spinor>,
    /// Upper-triangular quadratic coefficients, `quadratic[a][b - a]`.
    pub quadratic: Vec<Vec<Spinor>>,
}

impl PolynomialSpinor {
    pub fn random(n: usize, spinor_dim: usize, sampler: &mut Sampler) -> Self {
        let constant = sampler.spinor(spinor_dim);
        let linear = (0..n).map(|_| sampler.spinor(spinor_dim)).collect();
        let quadratic = (0..n)
            .map(|a| (a..n).map(|_| sampler.spinor(spinor_dim)).collect())
            .collect();
        Self {
            n,
            constant,
            linear,
            quadratic,
        }
    }
}

impl SpinorField for PolynomialSpinor {
    fn n(&self) -> usize {
        self.n
    }

    fn spinor_dim(&self) -> usize {
        self.constant.len()
    }

    fn eval(&self, x: &[f64]) -> Result<Spinor> {
        check_len(x, self.n)?;
        let mut out = self.constant.clone();
        for a in 0..self.n {
            for (o, u) in out.iter_mut().zip(&self.linear[a]) {
                *o += u * x[a];
            }
            for b in a..self.n {
                for (o, u) in out.iter_mut().zip(&self.quadratic[a][b - a]) {
                    *o += u * (x[a] * x[b]);
                }
            }
        }
        Ok(out)
    }

    fn partial(&self, x: &[f64], c: usize) -> Result<Spinor> {
        check_len(x, self.n)?;
        let mut out = self.linear[c].clone();
        for a in 0..self.n {
            for b in a..self.n {
                let w = match (a == c, b == c) {
                    (true, true) => 2.0 * x[c],
                    (true, false) => x[b],
                    (false, true) => x[a],
                    (false, false) => continue,
                };
                for (o, u) in out.iter_mut().zip(&self.quadratic[a][b - a]) {
                    *o += u * w;
                }
            }
        }
        Ok(out)
    }
}

/// `c(Y) φ` for a vector field `Y` with constant frame components.
#[derive(Debug)]
pub struct CliffordProductField<'a, F: SpinorField> {
    pub rep: &'a CliffordRep,
    pub frame_components: Vec<f64>,
    pub inner: &'a F,
}

impl<F: SpinorField> CliffordProductField<'_, F> {
    fn apply(&self, psi: &[C64]) -> Result<Spinor> {
        // frame vectors act by c(e_k) = -g_k
        let neg: Vec<f64> = self.frame_components.iter().map(|v| -v).collect();
        self.rep.vector_action(&neg, psi)
    }
}

impl<F: SpinorField> SpinorField for CliffordProductField<'_, F> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn spinor_dim(&self) -> usize {
        self.inner.spinor_dim()
    }

    fn eval(&self, x: &[f64]) -> Result<Spinor> {
        self.apply(&self.inner.eval(x)?)
    }

    fn partial(&self, x: &[f64], a: usize) -> Result<Spinor> {
        self.apply(&self.inner.partial(x, a)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_partials_match_differences() {
        let rep = CliffordRep::new(4).unwrap();
        let mut s = Sampler::new(3);
        let k = KillingSpinor::new(rep.clone(), s.spinor(4)).unwrap();
        let p = PolynomialSpinor::random(4, 4, &mut s);
        let c = CutoffKillingSpinor {
            killing: k.clone(),
            r0: 0.2,
            r1: 0.6,
        };
        let x = [0.1, -0.2, 0.15, 0.3];
        for a in 0..4 {
            let fields: [&dyn SpinorField; 3] = [&k, &p, &c];
            for f in fields {
                let an = f.partial(&x, a).unwrap();
                let fd = fd_partial(f, &x, a, 1e-5).unwrap();
                let err: f64 = an
                    .iter()
                    .zip(&fd)
                    .map(|(u, v)| (u - v).norm())
                    .fold(0.0, f64::max);
                assert!(err < 1e-8, "{err}");
            }
        }
    }

    #[test]
    fn killing_spinor_at_origin() {
        let rep = CliffordRep::new(3).unwrap();
        let u = alloc::vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)];
        let k = KillingSpinor::new(rep, u.clone()).unwrap();
        let v = k.eval(&[0.0; 3]).unwrap();
        for (a, b) in v.iter().zip(&u) {
            assert!((a - b * 2f64.sqrt()).norm() < 1e-15);
        }
        assert!(k.eval(&[1.0, 0.0, 0.0]).is_err());
    }
}
