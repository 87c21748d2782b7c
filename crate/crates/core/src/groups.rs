//! Finite subgroups of the unit quaternions with exact coordinates.
//!
//! A unit quaternion `a + b i + c j + d k` is stored as the pair
//! `(α, β) = (a + b√-1, c + d√-1)` of elements of a cyclotomic field, i.e.
//! as the first row of its SU(2) matrix `[[α, β], [-β̄, ᾱ]]`. Every catalog
//! group lives in `Q(ζ_N)` for a small `N`, so products, equality and the
//! real parts `a = Re α` that drive the defect sums are exact.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::BigRational;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::clifford::{spin4_action, MinusConvention, Quaternion};
use crate::cyclotomic::{lcm, Cyc, CycloField};
use crate::linalg::{symmetric_eigen, CMat, RMat, C64};
use crate::{Error, Result};

/// Safety bound for closure saturation.
pub const CLOSURE_CAP: usize = 10_000;

/// The catalog of groups acting freely on `S^3` inside one SU(2) factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupName {
    Trivial,
    /// Cyclic group of order `n`.
    Cyclic(usize),
    /// Binary dihedral group of order `4n`.
    BinaryDihedral(usize),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl GroupName {
    pub fn expected_order(&self) -> usize {
        match *self {
            GroupName::Trivial => 1,
            GroupName::Cyclic(n) => n,
            GroupName::BinaryDihedral(n) => 4 * n,
            GroupName::BinaryTetrahedral => 24,
            GroupName::BinaryOctahedral => 48,
            GroupName::BinaryIcosahedral => 120,
        }
    }

    /// Family tag and parameter, e.g. `("A", Some(5))`.
    pub fn family(&self) -> (&'static str, Option<usize>) {
        match *self {
            GroupName::Trivial => ("trivial", None),
            GroupName::Cyclic(n) => ("A", Some(n)),
            GroupName::BinaryDihedral(n) => ("Dstar", Some(n)),
            GroupName::BinaryTetrahedral => ("Tstar", None),
            GroupName::BinaryOctahedral => ("Ostar", None),
            GroupName::BinaryIcosahedral => ("Istar", None),
        }
    }

    fn field_order(&self) -> usize {
        match *self {
            GroupName::Trivial => 1,
            GroupName::Cyclic(n) => n,
            GroupName::BinaryDihedral(n) => lcm(2 * n, 4),
            GroupName::BinaryTetrahedral => 4,
            GroupName::BinaryOctahedral => 8,
            GroupName::BinaryIcosahedral => 20,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            GroupName::Cyclic(0) => Err(Error::InvalidGroup("A:n needs n >= 1".into())),
            GroupName::BinaryDihedral(n) if n < 2 => {
                Err(Error::InvalidGroup("Dstar:n needs n >= 2".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family() {
            (tag, Some(n)) => write!(f, "{tag}:{n}"),
            (tag, None) => f.write_str(tag),
        }
    }
}

impl FromStr for GroupName {
    type Err = Error;

    /// Parses `A:n`, `Dstar:n`, `Tstar`, `Ostar`, `Istar` or `trivial`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGroup(format!("unrecognised group descriptor '{s}'"));
        let name = match s.split_once(':') {
            Some((tag, n)) => {
                let n: usize = n.trim().parse().map_err(|_| bad())?;
                match tag.trim() {
                    "A" => GroupName::Cyclic(n),
                    "Dstar" => GroupName::BinaryDihedral(n),
                    _ => return Err(bad()),
                }
            }
            None => match s.trim() {
                "Tstar" => GroupName::BinaryTetrahedral,
                "Ostar" => GroupName::BinaryOctahedral,
                "Istar" => GroupName::BinaryIcosahedral,
                "trivial" => GroupName::Trivial,
                _ => return Err(bad()),
            },
        };
        name.validate()?;
        Ok(name)
    }
}

/// Unit quaternion with entries in a cyclotomic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub alpha: Cyc,
    pub beta: Cyc,
}

impl GroupElement {
    pub fn one(f: &CycloField) -> Self {
        Self {
            alpha: f.one(),
            beta: f.zero(),
        }
    }

    pub fn mul(&self, other: &Self, f: &CycloField) -> Self {
        // [[α1, β1], [-β̄1, ᾱ1]] · [[α2, β2], [-β̄2, ᾱ2]], first row
        let alpha = f.sub(
            &f.mul(&self.alpha, &other.alpha),
            &f.mul(&self.beta, &f.conj(&other.beta)),
        );
        let beta = f.add(
            &f.mul(&self.alpha, &other.beta),
            &f.mul(&self.beta, &f.conj(&other.alpha)),
        );
        Self { alpha, beta }
    }

    pub fn inverse(&self, f: &CycloField) -> Self {
        Self {
            alpha: f.conj(&self.alpha),
            beta: f.neg(&self.beta),
        }
    }

    pub fn neg(&self, f: &CycloField) -> Self {
        Self {
            alpha: f.neg(&self.alpha),
            beta: f.neg(&self.beta),
        }
    }

    /// `|α|^2 + |β|^2`, exactly.
    pub fn norm_sqr(&self, f: &CycloField) -> Cyc {
        f.add(
            &f.mul(&self.alpha, &f.conj(&self.alpha)),
            &f.mul(&self.beta, &f.conj(&self.beta)),
        )
    }

    /// Real part `a`; the SU(2) trace is `2a`.
    pub fn real_part(&self, f: &CycloField) -> Cyc {
        f.re(&self.alpha)
    }

    pub fn to_quaternion(&self, f: &CycloField) -> Quaternion {
        let al = f.to_complex(&self.alpha);
        let be = f.to_complex(&self.beta);
        Quaternion::new(al.re, al.im, be.re, be.im)
    }

    pub fn embed(&self, from: &CycloField, to: &CycloField) -> Result<Self> {
        Ok(Self {
            alpha: from.embed(&self.alpha, to)?,
            beta: from.embed(&self.beta, to)?,
        })
    }
}

/// Rotation angle `α ∈ [0, π]` of left multiplication by a unit quaternion,
/// `cos α = Re q`.
pub fn rotation_angle(q: &Quaternion) -> f64 {
    q.a.clamp(-1.0, 1.0).acos()
}

#[derive(Clone, Debug)]
pub struct FiniteSubgroup {
    pub name: GroupName,
    pub field: CycloField,
    pub elements: Vec<GroupElement>,
    pub generators: Vec<GroupElement>,
    /// `right_mul[e][g]` is the index of `elements[e] · generators[g]`.
    pub right_mul: Vec<Vec<usize>>,
}

impl FiniteSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.iter().position(|e| e == g)
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn quaternions(&self) -> Vec<Quaternion> {
        self.elements
            .iter()
            .map(|e| e.to_quaternion(&self.field))
            .collect()
    }

    /// Exact real parts, in element order.
    pub fn real_parts(&self) -> Vec<Cyc> {
        self.elements
            .iter()
            .map(|e| e.real_part(&self.field))
            .collect()
    }

    /// The group `u Γ u⁻¹` for a unit quaternion `u` with entries in `Q(i)`,
    /// given as `(α, β)` over the field of fourth roots of unity.
    pub fn conjugate(&self, u: &GroupElement, u_field: &CycloField) -> Result<FiniteSubgroup> {
        let field = CycloField::new(lcm(self.field.order(), u_field.order()));
        let u = u.embed(u_field, &field)?;
        let uinv = u.inverse(&field);
        let map = |g: &GroupElement| -> Result<GroupElement> {
            let g = g.embed(&self.field, &field)?;
            Ok(u.mul(&g, &field).mul(&uinv, &field))
        };
        Ok(FiniteSubgroup {
            name: self.name,
            elements: self.elements.iter().map(map).collect::<Result<_>>()?,
            generators: self.generators.iter().map(map).collect::<Result<_>>()?,
            right_mul: self.right_mul.clone(),
            field,
        })
    }
}

fn generators(name: GroupName, f: &CycloField) -> Result<Vec<GroupElement>> {
    let elt = |alpha: Cyc, beta: Cyc| GroupElement { alpha, beta };
    let i4 = || f.root_of_unity(4, 1);
    let quat_i = || -> Result<GroupElement> { Ok(elt(i4()?, f.zero())) };
    let quat_j = || elt(f.zero(), f.one());
    let half = |x: &Cyc| f.scale(x, &BigRational::new(1.into(), 2.into()));
    let t_gen = || -> Result<GroupElement> {
        // (1 + i + j + k) / 2
        let one_plus_i = f.add(&f.one(), &i4()?);
        Ok(elt(half(&one_plus_i), half(&one_plus_i)))
    };
    Ok(match name {
        GroupName::Trivial => vec![],
        GroupName::Cyclic(n) => vec![elt(f.root_of_unity(n, 1)?, f.zero())],
        GroupName::BinaryDihedral(n) => vec![elt(f.root_of_unity(2 * n, 1)?, f.zero()), quat_j()],
        GroupName::BinaryTetrahedral => vec![quat_i()?, quat_j(), t_gen()?],
        GroupName::BinaryOctahedral => {
            vec![
                quat_i()?,
                quat_j(),
                t_gen()?,
                elt(f.root_of_unity(8, 1)?, f.zero()),
            ]
        }
        GroupName::BinaryIcosahedral => {
            // (φ + φ⁻¹ i + j) / 2 and i, with φ = 2 cos(π/5)
            let phi = f.add(&f.root_of_unity(10, 1)?, &f.root_of_unity(10, -1)?);
            let phi_inv = f.sub(&phi, &f.one());
            let alpha = half(&f.add(&phi, &f.mul(&phi_inv, &i4()?)));
            vec![elt(alpha, half(&f.one())), quat_i()?]
        }
    })
}

/// Builds a catalog group by saturating its generators.
pub fn build_group(name: GroupName) -> Result<FiniteSubgroup> {
    name.validate()?;
    let field = CycloField::new(name.field_order());
    let gens = generators(name, &field)?;
    for g in &gens {
        if g.norm_sqr(&field) != field.one() {
            return Err(Error::InvalidGroup(format!(
                "generator of {name} is not a unit"
            )));
        }
    }
    let mut elements = vec![GroupElement::one(&field)];
    let mut right_mul: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for g in &gens {
            let prod = elements[next].mul(g, &field);
            let idx = match elements.iter().position(|e| *e == prod) {
                Some(i) => i,
                None => {
                    if elements.len() >= CLOSURE_CAP {
                        return Err(Error::ClosureOverflow(CLOSURE_CAP));
                    }
                    elements.push(prod);
                    elements.len() - 1
                }
            };
            row.push(idx);
        }
        right_mul.push(row);
        next += 1;
    }
    if elements.len() != name.expected_order() {
        return Err(Error::InvalidGroup(format!(
            "{name} closed with {} elements, expected {}",
            elements.len(),
            name.expected_order()
        )));
    }
    Ok(FiniteSubgroup {
        name,
        field,
        elements,
        generators: gens,
        right_mul,
    })
}

/// A homomorphism `Γ → {±1}`, stored by its values on every element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Z2Character {
    pub label: String,
    pub on_generators: Vec<i8>,
    pub values: Vec<i8>,
}

impl Z2Character {
    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1)
    }
}

fn character_label(name: GroupName, on_gens: &[i8]) -> String {
    let bit = |v: i8| if v == 1 { '0' } else { '1' };
    match name {
        GroupName::Cyclic(_) => format!("k{}", bit(on_gens[0])),
        GroupName::BinaryDihedral(_) => format!("k{}{}", bit(on_gens[0]), bit(on_gens[1])),
        GroupName::BinaryOctahedral => format!("k{}", bit(on_gens[3])),
        _ => "1".to_string(),
    }
}

/// Extends generator signs multiplicatively; `None` if inconsistent.
pub fn extend_character(group: &FiniteSubgroup, on_gens: &[i8]) -> Option<Vec<i8>> {
    let mut values = vec![0i8; group.order()];
    values[0] = 1;
    // elements were discovered in BFS order along right_mul
    for (e, row) in group.right_mul.iter().enumerate() {
        for (g, &target) in row.iter().enumerate() {
            let v = values[e] * on_gens[g];
            if values[target] == 0 {
                values[target] = v;
            } else if values[target] != v {
                return None;
            }
        }
    }
    Some(values)
}

/// All `Z/2` characters, trivial first, ordered by generator sign pattern.
pub fn enumerate_characters(group: &FiniteSubgroup) -> Vec<Z2Character> {
    let g = group.generators.len();
    let mut out = Vec::new();
    for mask in 0..(1usize << g) {
        let on_gens: Vec<i8> = (0..g)
            .map(|b| if mask >> b & 1 == 1 { -1 } else { 1 })
            .collect();
        if let Some(values) = extend_character(group, &on_gens) {
            // distinct sign patterns can give the same character
            if out.iter().any(|c: &Z2Character| c.values == values) {
                continue;
            }
            out.push(Z2Character {
                label: character_label(group.name, &on_gens),
                on_generators: on_gens,
                values,
            });
        }
    }
    out.sort_by(|a, b| a.label.cmp(&b.label));
    out
}

pub fn find_character(group: &FiniteSubgroup, label: &str) -> Result<Z2Character> {
    enumerate_characters(group)
        .into_iter()
        .find(|c| c.label == label)
        .ok_or_else(|| Error::NotACharacter(format!("{label} on {}", group.name)))
}

/// The lift `γ ↦ (κ(γ) γ, κ(γ))` into Spin(4) = SU(2) × SU(2).
#[derive(Clone, Debug)]
pub struct SpinLift<'a> {
    pub group: &'a FiniteSubgroup,
    pub character: Z2Character,
}

impl<'a> SpinLift<'a> {
    pub fn new(group: &'a FiniteSubgroup, character: Z2Character) -> Self {
        Self { group, character }
    }

    /// `(p, q)` for element `idx`, as floating quaternions.
    pub fn pair(&self, idx: usize) -> (Quaternion, Quaternion) {
        let k = self.character.values[idx] as f64;
        let g = self.group.elements[idx].to_quaternion(&self.group.field);
        let p = Quaternion::new(k * g.a, k * g.b, k * g.c, k * g.d);
        (p, Quaternion::new(k, 0.0, 0.0, 0.0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedSpinors {
    pub dim_plus: usize,
    pub dim_minus: usize,
    /// Orthonormal basis vectors of the fixed subspace of Σ = Σ⁺ ⊕ Σ⁻,
    /// as `[re, im]` pairs.
    pub basis: Vec<Vec<[f64; 2]>>,
}

/// Exact dimensions of the fixed subspaces, as traces of the averaging
/// projectors: `(1/|Γ|) Σ κ(γ) 2 Re γ` on Σ⁺ and `(1/|Γ|) Σ κ(γ) 2` on Σ⁻.
pub fn fixed_dims_exact(lift: &SpinLift<'_>) -> Result<(usize, usize)> {
    let g = lift.group;
    let f = &g.field;
    let mut plus = f.zero();
    let mut minus = 0i64;
    for (idx, e) in g.elements.iter().enumerate() {
        let k = lift.character.values[idx] as i64;
        let tr = f.scale(&e.real_part(f), &BigRational::from_integer((2 * k).into()));
        plus = f.add(&plus, &tr);
        minus += 2 * k;
    }
    let ord = BigRational::from_integer((g.order() as i64).into());
    let plus = plus.as_rational().ok_or(Error::NotRational)? / ord;
    let minus = BigRational::new(minus.into(), (g.order() as i64).into());
    let to_dim = |r: BigRational| -> Result<usize> {
        if !r.is_integer() {
            return Err(Error::NotRational);
        }
        usize::try_from(r.to_integer()).map_err(|_| Error::NotRational)
    };
    Ok((to_dim(plus)?, to_dim(minus)?))
}

/// Fixed subspace via the floating averaging projector of the Spin(4)
/// action; ranks are counted by thresholding eigenvalues at 1/2.
pub fn fixed_spinor_subspace(
    lift: &SpinLift<'_>,
    convention: MinusConvention,
) -> Result<FixedSpinors> {
    let order = lift.group.order();
    let mut proj = CMat::zeros(4);
    for idx in 0..order {
        let (p, q) = lift.pair(idx);
        let act = spin4_action(p, q, convention)?;
        proj += &act.spinor_matrix();
    }
    let proj = proj.scale_real(1.0 / order as f64);
    // P is a Hermitian projector; diagonalise its real embedding
    let n = 4;
    let big = RMat::from_fn(2 * n, |i, j| {
        let v = proj.get(i % n, j % n);
        match (i < n, j < n) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    });
    let (ev, vecs) = symmetric_eigen(&big);
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for (k, &lam) in ev.iter().enumerate() {
        if lam < 0.5 {
            continue;
        }
        let col = vecs.column(k);
        let mut v: Vec<C64> = (0..n).map(|i| C64::new(col[i], col[i + n])).collect();
        // the real embedding doubles every eigenvector; Gram-Schmidt dedups
        for b in &basis {
            let c: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nv > 0.5 {
            basis.push(v.iter().map(|z| z / nv).collect());
        }
    }
    let weight = |b: &[C64], lo: usize| b[lo..lo + 2].iter().map(|z| z.norm_sqr()).sum::<f64>();
    let dim_plus = basis.iter().map(|b| weight(b, 0)).sum::<f64>().round() as usize;
    let dim_minus = basis.iter().map(|b| weight(b, 2)).sum::<f64>().round() as usize;
    let basis = basis
        .into_iter()
        .map(|b| b.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    Ok(FixedSpinors {
        dim_plus,
        dim_minus,
        basis,
    })
}

/// Whether every non-identity element acts without fixed points on `S^3`:
/// `det(L_γ - 1) = (2 - 2a)^2` is nonzero iff `a ≠ 1`.
pub fn acts_freely(group: &FiniteSubgroup) -> bool {
    let f = &group.field;
    let one = f.one();
    group
        .elements
        .iter()
        .skip(1)
        .all(|e| !f.sub(&one, &e.real_part(f)).is_zero())
}

/// Rotation-angle multiset as cosines, sorted, in floating point.
pub fn cosines(group: &FiniteSubgroup) -> Vec<f64> {
    let mut c: Vec<f64> = group.quaternions().iter().map(|q| q.a).collect();
    c.sort_by(|a, b| a.total_cmp(b));
    c
}

/// Exact element list for JSON dumps: `(α, β)` as strings in `z = ζ_N`.
pub fn element_strings(group: &FiniteSubgroup) -> Vec<(String, String)> {
    let f = &group.field;
    group
        .elements
        .iter()
        .map(|e| (f.format(&e.alpha), f.format(&e.beta)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FiniteSubgroup {
        build_group(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(g("A:6").order(), 6);
        assert_eq!(g("A:1").order(), 1);
        assert_eq!(g("Dstar:3").order(), 12);
        assert_eq!(g("Tstar").order(), 24);
        assert_eq!(g("Ostar").order(), 48);
        assert_eq!(g("Istar").order(), 120);
        assert_eq!(g("trivial").order(), 1);
    }

    #[test]
    fn descriptors_round_trip() {
        for s in ["A:7", "Dstar:4", "Tstar", "Ostar", "Istar", "trivial"] {
            assert_eq!(s.parse::<GroupName>().unwrap().to_string(), s);
        }
        assert!("Dstar:1".parse::<GroupName>().is_err());
        assert!("B:3".parse::<GroupName>().is_err());
    }

    #[test]
    fn character_counts() {
        assert_eq!(enumerate_characters(&g("A:5")).len(), 1);
        assert_eq!(enumerate_characters(&g("A:6")).len(), 2);
        assert_eq!(enumerate_characters(&g("Dstar:4")).len(), 4);
        assert_eq!(enumerate_characters(&g("Dstar:3")).len(), 2);
        assert_eq!(enumerate_characters(&g("Tstar")).len(), 1);
        assert_eq!(enumerate_characters(&g("Ostar")).len(), 2);
        assert_eq!(enumerate_characters(&g("Istar")).len(), 1);
    }

    #[test]
    fn rotation_angles() {
        assert!((rotation_angle(&Quaternion::ONE.neg()) - core::f64::consts::PI).abs() < 1e-15);
        assert!(
            (rotation_angle(&Quaternion::new(0.0, 1.0, 0.0, 0.0)) - core::f64::consts::FRAC_PI_2)
                .abs()
                < 1e-15
        );
        let a5 = g("A:5");
        let z = a5.generators[0].to_quaternion(&a5.field);
        assert!((rotation_angle(&z) - 2.0 * core::f64::consts::PI / 5.0).abs() < 1e-14);
    }

    #[test]
    fn twisted_a2_fixes_plus_half() {
        let a2 = g("A:2");
        let k1 = find_character(&a2, "k1").unwrap();
        let lift = SpinLift::new(&a2, k1);
        assert_eq!(fixed_dims_exact(&lift).unwrap(), (2, 0));
        let fs = fixed_spinor_subspace(&lift, MinusConvention::Plain).unwrap();
        assert_eq!((fs.dim_plus, fs.dim_minus), (2, 0));
    }
}
