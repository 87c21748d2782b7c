use num_rational::BigRational;
use spinrigid_core::eta::{
    eta_dirac, eta_signature, raw_sums_float, reconstruct_rational, rochlin, Calibration,
};
use spinrigid_core::groups::{build_group, enumerate_characters, find_character, GroupName};

const CAL: Calibration = Calibration {
    sigma_sign: 1,
    dirac_sign: 1,
};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn values(name: GroupName, kappa: &str) -> (BigRational, BigRational) {
    let g = build_group(name).unwrap();
    let ch = find_character(&g, kappa).unwrap();
    (
        eta_signature(&g, CAL).unwrap(),
        eta_dirac(&g, &ch, CAL).unwrap(),
    )
}

#[test]
fn polyhedral_untwisted() {
    assert_eq!(
        values(GroupName::BinaryTetrahedral, "1"),
        (rat(49, 36), rat(167, 288))
    );
    assert_eq!(
        values(GroupName::BinaryOctahedral, "k0"),
        (rat(121, 72), rat(383, 576))
    );
    assert_eq!(
        values(GroupName::BinaryIcosahedral, "1"),
        (rat(361, 180), rat(1079, 1440))
    );
}

#[test]
fn octahedral_twisted() {
    let (s, d) = values(GroupName::BinaryOctahedral, "k1");
    assert_eq!(d, rat(-49, 576));
    assert_eq!(rochlin(&s, &d), Some(-1));
}

#[test]
fn cyclic_twisted_matches_integrality() {
    for n in (2..=24i64).step_by(2) {
        let (s, d) = values(GroupName::Cyclic(n as usize), "k1");
        assert_eq!(d, rat(-(n * n + 2), 24 * n), "A:{n}");
        assert_eq!(rochlin(&s, &d), Some(1));
        // the doubled value is integral only for n = 2
        let doubled = rat(-(n * n + 2), 12 * n);
        assert_eq!(rochlin(&s, &doubled).is_some(), n == 2, "A:{n}");
    }
}

#[test]
fn binary_dihedral_all_structures() {
    for n in 2..=12i64 {
        let name = GroupName::BinaryDihedral(n as usize);
        let g = build_group(name).unwrap();
        let s = eta_signature(&g, CAL).unwrap();
        assert_eq!(s, rat(2 * n * n + 1, 6 * n));
        for ch in enumerate_characters(&g) {
            let d = eta_dirac(&g, &ch, CAL).unwrap();
            let expect = match ch.label.as_str() {
                "k00" => rat(4 * n * n + 12 * n - 1, 48 * n),
                "k01" => rat(4 * n * n - 12 * n - 1, 48 * n),
                "k10" | "k11" => rat(-(2 * n * n + 1), 48 * n),
                other => panic!("unexpected label {other}"),
            };
            assert_eq!(d, expect, "Dstar:{n} {}", ch.label);
            assert!(rochlin(&s, &d).is_some());
        }
        let labels: Vec<_> = enumerate_characters(&g)
            .into_iter()
            .map(|c| c.label)
            .collect();
        if n % 2 == 0 {
            assert_eq!(labels, ["k00", "k01", "k10", "k11"]);
        } else {
            assert_eq!(labels, ["k00", "k01"]);
        }
    }
}

#[test]
fn float_reconstruction_agrees_with_exact_path() {
    for n in 2..=16usize {
        let g = build_group(GroupName::Cyclic(n)).unwrap();
        for ch in enumerate_characters(&g) {
            let (fs, fd) = raw_sums_float(&g, &ch);
            let bound = 48 * g.order() as i64;
            assert_eq!(
                reconstruct_rational(fs, bound, 1e-9),
                Some(eta_signature(&g, CAL).unwrap())
            );
            assert_eq!(
                reconstruct_rational(fd, bound, 1e-9),
                Some(eta_dirac(&g, &ch, CAL).unwrap())
            );
        }
    }
}

#[test]
fn icosahedral_real_part_multiset() {
    let g = build_group(GroupName::BinaryIcosahedral).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut expected: Vec<f64> = vec![1.0, -1.0];
    expected.extend(std::iter::repeat_n(0.0, 30));
    expected.extend(std::iter::repeat_n(0.5, 20));
    expected.extend(std::iter::repeat_n(-0.5, 20));
    for v in [phi / 2.0, -phi / 2.0, 0.5 / phi, -0.5 / phi] {
        expected.extend(std::iter::repeat_n(v, 12));
    }
    expected.sort_by(f64::total_cmp);
    let got = spinrigid_core::groups::cosines(&g);
    assert_eq!(got.len(), 120);
    for (a, b) in got.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12);
    }
}
