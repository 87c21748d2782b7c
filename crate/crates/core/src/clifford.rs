//! Complex Clifford representations with `v·v = -|v|^2`.
//!
//! Generators are built from Pauli matrices by the usual tensor recursion:
//! the Hermitian Euclidean gammas in dimension `2m+1` are
//! `σ1⊗E_k (k < 2m-1), σ2⊗1, σ3⊗1` and `g_k = i E_k`. Dimension `n` uses the
//! first `n` of the `2⌊n/2⌋+1` gammas, so the spinor space has dimension
//! `2^⌊n/2⌋`.
//!
//! For `n = 4` this yields the chiral form
//! `c(v) = [[0, M(v)], [-M(v)*, 0]]` where `M` is the standard embedding of
//! the quaternions into 2×2 complex matrices and `v = (v1, v2, v3, v4)`
//! corresponds to the quaternion `v4 + v3 i + v2 j + v1 k`. The upper block
//! is Σ⁺ and the lower block Σ⁻.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Mul;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, RMat, C64, I};
use crate::{Error, Result};

pub type Spinor = Vec<C64>;
pub type AlgebraElement = CMat;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli() -> [CMat; 3] {
    let z = C64::zero();
    let one = c(1.0, 0.0);
    [
        CMat::from_rows(&[&[z, one], &[one, z]]),
        CMat::from_rows(&[&[z, c(0.0, -1.0)], &[c(0.0, 1.0), z]]),
        CMat::from_rows(&[&[one, z], &[z, -one]]),
    ]
}

/// Hermitian gammas for Euclidean space of dimension `2m+1`.
fn euclidean_gammas(m: usize) -> Vec<CMat> {
    let [s1, s2, s3] = pauli();
    let mut gammas = vec![s1.clone(), s2.clone(), s3.clone()];
    for _ in 1..m {
        let id = CMat::identity(gammas[0].dim());
        let mut next: Vec<CMat> = gammas.iter().map(|e| s1.kron(e)).collect();
        next.push(s2.kron(&id));
        next.push(s3.kron(&id));
        gammas = next;
    }
    gammas
}

#[derive(Clone, Debug)]
pub struct CliffordRep {
    n: usize,
    generators: Vec<CMat>,
}

impl CliffordRep {
    /// Builds the representation for `3 <= n <= 8`.
    pub fn new(n: usize) -> Result<Self> {
        if !(3..=8).contains(&n) {
            return Err(Error::DimensionOutOfRange(n, "3..=8"));
        }
        let generators = euclidean_gammas(n / 2)
            .into_iter()
            .take(n)
            .map(|e| e.scale(I))
            .collect();
        Ok(Self { n, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spinor_dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    /// Generator `g_i` with 1-based index.
    pub fn gen(&self, i: usize) -> &CMat {
        &self.generators[i - 1]
    }

    /// Clifford multiplication by `x = Σ x_i e_i` as a matrix.
    pub fn vector_matrix(&self, x: &[f64]) -> Result<CMat> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut m = CMat::zeros(self.spinor_dim());
        for (xi, g) in x.iter().zip(&self.generators) {
            if *xi != 0.0 {
                m += &g.scale_real(*xi);
            }
        }
        Ok(m)
    }

    pub fn vector_action(&self, x: &[f64], psi: &[C64]) -> Result<Spinor> {
        if psi.len() != self.spinor_dim() {
            return Err(Error::LengthMismatch {
                expected: self.spinor_dim(),
                got: psi.len(),
            });
        }
        Ok(self.vector_matrix(x)?.apply(psi))
    }

    /// `[g_i, g_j]`, 1-based.
    pub fn sigma(&self, i: usize, j: usize) -> AlgebraElement {
        self.gen(i).commutator(self.gen(j))
    }

    /// `g_1 g_i g_j g_k` when `1, i, j, k` are pairwise distinct, else zero.
    pub fn sigma_1ijk(&self, i: usize, j: usize, k: usize) -> AlgebraElement {
        let idx = [1, i, j, k];
        let distinct = (0..4).all(|a| (a + 1..4).all(|b| idx[a] != idx[b]));
        if !distinct {
            return CMat::zeros(self.spinor_dim());
        }
        let m = self.gen(1) * self.gen(i);
        let m = &m * self.gen(j);
        &m * self.gen(k)
    }

    /// Product `g_1 g_2 ... g_n`.
    pub fn volume(&self) -> AlgebraElement {
        self.generators
            .iter()
            .fold(CMat::identity(self.spinor_dim()), |acc, g| &acc * g)
    }
}

/// Floating-point quaternion `a + b i + c j + d k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 0.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_coords(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// `M(q) = [[a + b i, c + d i], [-c + d i, a - b i]]`, a unital ring
    /// homomorphism onto SU(2) for unit `q`.
    pub fn to_su2(&self) -> CMat {
        CMat::from_rows(&[
            &[c(self.a, self.b), c(self.c, self.d)],
            &[c(-self.c, self.d), c(self.a, -self.b)],
        ])
    }

    /// Vector in the Clifford frame order `(e1, e2, e3, e4) = (k, j, i, 1)`.
    pub fn to_frame(&self) -> [f64; 4] {
        [self.d, self.c, self.b, self.a]
    }

    pub fn from_frame(v: &[f64]) -> Self {
        Self::new(v[3], v[2], v[1], v[0])
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: Quaternion) -> Quaternion {
        let l = self;
        Quaternion::new(
            l.a * r.a - l.b * r.b - l.c * r.c - l.d * r.d,
            l.a * r.b + l.b * r.a + l.c * r.d - l.d * r.c,
            l.a * r.c - l.b * r.d + l.c * r.a + l.d * r.b,
            l.a * r.d + l.b * r.c - l.c * r.b + l.d * r.a,
        )
    }
}

/// How Σ⁻ carries the right factor of Spin(4) = SU(2) × SU(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinusConvention {
    /// `q` acts through `M(q)`, matching the chiral blocks of [`CliffordRep`].
    Plain,
    /// `q` acts through the complex conjugate `conj(M(q))`, i.e. on the dual.
    Dual,
}

#[derive(Clone, Debug)]
pub struct Spin4Action {
    pub plus: CMat,
    pub minus: CMat,
    /// `v ↦ p v q̄` in the quaternion basis `(1, i, j, k)`.
    pub rotation: RMat,
}

impl Spin4Action {
    /// The 4×4 block-diagonal action on Σ = Σ⁺ ⊕ Σ⁻.
    pub fn spinor_matrix(&self) -> CMat {
        CMat::from_fn(4, |i, j| match (i < 2, j < 2) {
            (true, true) => self.plus.get(i, j),
            (false, false) => self.minus.get(i - 2, j - 2),
            _ => C64::zero(),
        })
    }

    /// Rotation in the Clifford frame order of [`Quaternion::to_frame`].
    pub fn frame_rotation(&self) -> RMat {
        let perm = [3usize, 2, 1, 0];
        RMat::from_fn(4, |i, j| self.rotation.get(perm[i], perm[j]))
    }
}

const UNIT_TOL: f64 = 1e-12;

pub fn spin4_action(
    p: Quaternion,
    q: Quaternion,
    convention: MinusConvention,
) -> Result<Spin4Action> {
    for x in [p, q] {
        let n2 = x.norm_sqr();
        if (n2 - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitQuaternion(n2));
        }
    }
    let qbar = q.conj();
    let mut rotation = RMat::zeros(4);
    for j in 0..4 {
        let mut e = [0.0; 4];
        e[j] = 1.0;
        let image = (p * Quaternion::from_coords(e)) * qbar;
        for (i, v) in image.coords().iter().enumerate() {
            rotation.set(i, j, *v);
        }
    }
    let minus = match convention {
        MinusConvention::Plain => q.to_su2(),
        MinusConvention::Dual => q.to_su2().conj(),
    };
    Ok(Spin4Action {
        plus: p.to_su2(),
        minus,
        rotation,
    })
}

/// Largest entry of `g_i g_j + g_j g_i + 2 δ_ij`, over all pairs.
pub fn anticommutator_defect(rep: &CliffordRep) -> f64 {
    let n = rep.n();
    let id = CMat::identity(rep.spinor_dim());
    let mut worst: f64 = 0.0;
    for i in 1..=n {
        for j in 1..=n {
            let mut m = rep.gen(i).anticommutator(rep.gen(j));
            if i == j {
                m += &id.scale_real(2.0);
            }
            worst = worst.max(m.max_abs());
        }
    }
    worst
}
