use proptest::prelude::*;
use spinrigid_core::clifford::{spin4_action, CliffordRep, MinusConvention, Quaternion};
use spinrigid_core::cyclotomic::CycloField;
use spinrigid_core::eta::{eta_dirac, eta_signature, Calibration};
use spinrigid_core::groups::{
    build_group, enumerate_characters, fixed_dims_exact, FiniteSubgroup, GroupElement, GroupName,
    SpinLift,
};
use spinrigid_core::linalg::{CMat, RMat};

const CAL: Calibration = Calibration {
    sigma_sign: 1,
    dirac_sign: 1,
};

fn unit_quaternion(v: [f64; 4]) -> Quaternion {
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Quaternion::from_coords(v.map(|x| x / len))
}

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("away from zero", |v| {
            v.iter().map(|x| x * x).sum::<f64>() > 1e-2
        })
        .prop_map(unit_quaternion)
}

fn catalog() -> impl Strategy<Value = GroupName> {
    prop_oneof![
        (2usize..=12).prop_map(GroupName::Cyclic),
        (2usize..=6).prop_map(GroupName::BinaryDihedral),
        Just(GroupName::BinaryTetrahedral),
        Just(GroupName::BinaryOctahedral),
        Just(GroupName::BinaryIcosahedral),
    ]
}

/// `u = (1 + 2i + 2j + 4k)/5` with entries in `Q(i)`.
fn conjugator() -> (GroupElement, CycloField) {
    let f = CycloField::new(4);
    let i = f.root_of_unity(4, 1).unwrap();
    let alpha = f.add(&f.from_ratio(1, 5), &f.mul(&f.from_ratio(2, 5), &i));
    let beta = f.add(&f.from_ratio(2, 5), &f.mul(&f.from_ratio(4, 5), &i));
    (GroupElement { alpha, beta }, f)
}

fn max_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn clifford_relations(n in 3usize..=8, v in prop::collection::vec(-2.0f64..2.0, 8), w in prop::collection::vec(-2.0f64..2.0, 8)) {
        let rep = CliffordRep::new(n).unwrap();
        let (v, w) = (&v[..n], &w[..n]);
        let cv = rep.vector_matrix(v).unwrap();
        let cw = rep.vector_matrix(w).unwrap();
        let vw: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
        let id = CMat::identity(rep.spinor_dim());
        // c(v) c(w) + c(w) c(v) = -2 ⟨v, w⟩
        let anti = cv.anticommutator(&cw);
        prop_assert!(max_diff(&anti, &id.scale_real(-2.0 * vw)) < 1e-12);
        // skew-adjoint
        prop_assert!(max_diff(&cv.adjoint(), &cv.scale_real(-1.0)) < 1e-14);
    }

    #[test]
    fn spin4_is_a_homomorphism(p1 in quat(), q1 in quat(), p2 in quat(), q2 in quat()) {
        for conv in [MinusConvention::Plain, MinusConvention::Dual] {
            let a = spin4_action(p1, q1, conv).unwrap();
            let b = spin4_action(p2, q2, conv).unwrap();
            let ab = spin4_action(p1 * p2, q1 * q2, conv).unwrap();
            prop_assert!(max_diff(&(&a.spinor_matrix() * &b.spinor_matrix()), &ab.spinor_matrix()) < 1e-12);
            let r = &a.rotation * &b.rotation;
            prop_assert!((&r - &ab.rotation).max_abs() < 1e-12);
            let orth = &a.rotation.transpose() * &a.rotation;
            prop_assert!((&orth - &RMat::identity(4)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn spin4_rotation_has_kernel_minus_one(p in quat(), q in quat()) {
        let a = spin4_action(p, q, MinusConvention::Plain).unwrap();
        let b = spin4_action(p.neg(), q.neg(), MinusConvention::Plain).unwrap();
        prop_assert!((&a.rotation - &b.rotation).max_abs() < 1e-14);
        prop_assert!(max_diff(&a.spinor_matrix(), &b.spinor_matrix().scale_real(-1.0)) < 1e-14);
    }

    #[test]
    fn characters_are_multiplicative(name in catalog(), picks in prop::collection::vec((0usize..1000, 0usize..1000), 16)) {
        let g = build_group(name).unwrap();
        for ch in enumerate_characters(&g) {
            for &(a, b) in &picks {
                let (a, b) = (a % g.order(), b % g.order());
                let prod = g.elements[a].mul(&g.elements[b], &g.field);
                let c = g.index_of(&prod).unwrap();
                prop_assert_eq!(ch.values[c], ch.values[a] * ch.values[b]);
            }
        }
    }
}

fn conjugation_invariants(g: &FiniteSubgroup) -> Vec<(String, (usize, usize), String)> {
    let es = eta_signature(g, CAL).unwrap();
    enumerate_characters(g)
        .into_iter()
        .map(|ch| {
            let dims = fixed_dims_exact(&SpinLift::new(g, ch.clone())).unwrap();
            let ed = eta_dirac(g, &ch, CAL).unwrap();
            (ch.label, dims, format!("{es} {ed}"))
        })
        .collect()
}

#[test]
fn invariants_survive_conjugation() {
    let (u, uf) = conjugator();
    let names = [
        GroupName::Cyclic(3),
        GroupName::Cyclic(8),
        GroupName::BinaryDihedral(2),
        GroupName::BinaryDihedral(3),
        GroupName::BinaryTetrahedral,
        GroupName::BinaryOctahedral,
        GroupName::BinaryIcosahedral,
    ];
    for name in names {
        let g = build_group(name).unwrap();
        let h = g.conjugate(&u, &uf).unwrap();
        // still a group: closed under multiplication
        for a in h.elements.iter().take(6) {
            for b in &h.elements {
                assert!(h.index_of(&a.mul(b, &h.field)).is_some());
            }
        }
        assert_eq!(
            conjugation_invariants(&g),
            conjugation_invariants(&h),
            "{name}"
        );
    }
}
