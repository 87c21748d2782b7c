use proptest::prelude::*;
use spinrigid_core::clifford::CliffordRep;
use spinrigid_core::hypgeo::*;
use spinrigid_core::linalg::{norm_sqr, C64, I};
use spinrigid_core::sampling::Sampler;

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn killing_spinors_are_parallel_at_random_points() {
    let mut s = Sampler::new(101);
    for n in 3..=6 {
        let rep = CliffordRep::new(n).unwrap();
        let an =
            SpinGeometry::new(ConformalChart::hyperbolic(n), DerivativeMode::Analytic).unwrap();
        let fd = SpinGeometry::new(
            ConformalChart::hyperbolic(n),
            DerivativeMode::FiniteDifference,
        )
        .unwrap();
        for _ in 0..25 {
            let x = s.ball_point(n, 0.9);
            let k = KillingSpinor::new(rep.clone(), s.unit_spinor(rep.spinor_dim())).unwrap();
            assert!(an.killing_residual(&k, &x).unwrap() < 1e-8);
            assert!(fd.killing_residual(&k, &x).unwrap() < 1e-5);
            let dh = an.dirac_hat(&k, &x).unwrap();
            assert!(norm_sqr(&dh).sqrt() < 1e-8 * norm_sqr(&k.eval(&x).unwrap()).sqrt().max(1.0));
        }
    }
}

#[test]
fn analytic_connection_forms_match_christoffel_oracle() {
    let mut s = Sampler::new(7);
    for n in [3, 4, 5] {
        for chart in [
            ConformalChart::hyperbolic(n),
            ConformalChart::perturbed(n, 0.05),
        ] {
            let an = SpinGeometry::new(chart, DerivativeMode::Analytic).unwrap();
            let fd = SpinGeometry::new(chart, DerivativeMode::FiniteDifference).unwrap();
            for _ in 0..10 {
                let x = s.ball_point(n, 0.8);
                let a = an.connection_forms(&x).unwrap();
                let b = fd.connection_forms(&x).unwrap();
                for (p, q) in a.iter().zip(&b) {
                    assert!((p - q).max_abs() < 1e-6);
                    assert!((p + &p.transpose()).max_abs() < 1e-12);
                    assert!((q + &q.transpose()).max_abs() < 1e-6);
                }
            }
        }
    }
}

#[test]
fn flat_chart_constant_spinor() {
    let n = 4;
    let geo = SpinGeometry::new(ConformalChart::flat(n), DerivativeMode::Analytic).unwrap();
    let mut s = Sampler::new(3);
    let c = ConstantSpinor {
        n,
        value: s.spinor(4),
    };
    let x = s.ball_point(n, 0.5);
    let nab = geo.nabla(&c, &x).unwrap();
    assert!(nab.iter().all(|v| v.iter().all(|z| z.norm() == 0.0)));
    let kc = geo.killing_connection(&c, &x).unwrap();
    for (k, v) in kc.iter().enumerate() {
        let expect: Vec<C64> = geo
            .frame_clifford(k)
            .apply(&c.value)
            .iter()
            .map(|z| z * I * 0.5)
            .collect();
        assert!(max_diff(v, &expect) < 1e-15);
    }
}

#[test]
fn killing_connection_respects_clifford_structure() {
    let mut s = Sampler::new(19);
    for chart in [
        ConformalChart::hyperbolic(4),
        ConformalChart::perturbed(5, 0.05),
    ] {
        let n = chart.n;
        let geo = SpinGeometry::new(chart, DerivativeMode::Analytic).unwrap();
        let rep = geo.rep.clone();
        let phi = PolynomialSpinor::random(n, rep.spinor_dim(), &mut s);
        let y = s.unit_vector(n);
        let yphi = CliffordProductField {
            rep: &rep,
            frame_components: y.clone(),
            inner: &phi,
        };
        let x = s.ball_point(n, 0.7);
        let xv = s.unit_vector(n);
        let forms = geo.connection_forms(&x).unwrap();
        // ∇_X Y for Y with constant frame components: Σ_k x_k Σ_i y_i ω_ij(e_k) e_j
        let nab_y: Vec<f64> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| xv[k] * (0..n).map(|i| y[i] * forms[k].get(i, j)).sum::<f64>())
                    .sum()
            })
            .collect();
        let hat = |f: &dyn SpinorField| {
            let all = geo.killing_connection(f, &x).unwrap();
            let mut out = vec![C64::new(0.0, 0.0); rep.spinor_dim()];
            for (k, v) in all.iter().enumerate() {
                for (o, z) in out.iter_mut().zip(v) {
                    *o += z * xv[k];
                }
            }
            out
        };
        let lhs1 = hat(&yphi);
        let lhs2 = geo.clifford(&y).apply(&hat(&phi));
        let p = phi.eval(&x).unwrap();
        let lhs3 = geo.clifford(&nab_y).apply(&p);
        let cx = geo.clifford(&xv);
        let cy = geo.clifford(&y);
        let rhs = cx.commutator(&cy).scale(I * 0.5).apply(&p);
        let lhs: Vec<C64> = (0..p.len()).map(|i| lhs1[i] - lhs2[i] - lhs3[i]).collect();
        assert!(max_diff(&lhs, &rhs) < 1e-8, "{}", max_diff(&lhs, &rhs));
    }
}

#[test]
fn curvature_of_killing_connection() {
    let mut s = Sampler::new(23);
    for n in [3, 4, 5] {
        let hyp =
            SpinGeometry::new(ConformalChart::hyperbolic(n), DerivativeMode::Analytic).unwrap();
        let flat = SpinGeometry::new(ConformalChart::flat(n), DerivativeMode::Analytic).unwrap();
        let pert = SpinGeometry::new(ConformalChart::perturbed(n, 0.05), DerivativeMode::Analytic)
            .unwrap();
        let mut pert_max: f64 = 0.0;
        for _ in 0..5 {
            let x = s.ball_point(n, 0.8);
            assert!(hyp.curvature_hat_max(&x).unwrap() < 1e-5);
            assert!((flat.curvature_hat_max(&x).unwrap() - 0.5).abs() < 1e-12);
            pert_max = pert_max.max(pert.curvature_hat_max(&x).unwrap());
            // the direct curvature of ∇̂ agrees with R - R_{-1}
            let u = s.unit_vector(n);
            let v = s.unit_vector(n);
            let a = pert.curvature_hat(&x, &u, &v).unwrap();
            let b = pert.curvature_hat_direct(&x, &u, &v).unwrap();
            assert!((&a - &b).max_abs() < 1e-6);
            // antisymmetry and tensoriality
            let c = pert.curvature_hat(&x, &v, &u).unwrap();
            assert!((&a + &c).max_abs() < 1e-12);
            let w: Vec<f64> = u.iter().zip(&v).map(|(p, q)| 2.0 * p - 3.0 * q).collect();
            let lin = pert.curvature_hat(&x, &w, &v).unwrap();
            assert!((&lin - &a.scale_real(2.0)).max_abs() < 1e-10);
            // scalar curvature recovered from the spinor curvature
            let s_spin = pert.scalar_curvature_from_spin_curvature(&x).unwrap();
            let s_closed = pert.chart.scalar_curvature(&x).unwrap();
            assert!((s_spin - s_closed).abs() < 1e-5 * s_closed.abs().max(1.0));
        }
        assert!(pert_max > 1e-3, "{pert_max}");
    }
}

#[test]
fn flat_curvature_hat_is_half_wedge_norm() {
    let geo = SpinGeometry::new(ConformalChart::flat(4), DerivativeMode::Analytic).unwrap();
    let u = [1.0, 2.0, 0.0, -1.0];
    let v = [0.5, 0.0, 1.0, 1.0];
    let uu: f64 = u.iter().map(|a| a * a).sum();
    let vv: f64 = v.iter().map(|a| a * a).sum();
    let uv: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    let wedge = (uu * vv - uv * uv).sqrt();
    let r = geo.curvature_hat(&[0.1, 0.0, 0.2, 0.0], &u, &v).unwrap();
    assert!((r.operator_norm() - 0.5 * wedge).abs() < 1e-12);
}

#[test]
fn lichnerowicz_identity() {
    let mut s = Sampler::new(31);
    for n in [3, 4, 5] {
        let rep = CliffordRep::new(n).unwrap();
        let dim = rep.spinor_dim();
        for chart in [
            ConformalChart::hyperbolic(n),
            ConformalChart::flat(n),
            ConformalChart::perturbed(n, 0.05),
        ] {
            let geo = SpinGeometry::new(chart, DerivativeMode::Analytic).unwrap();
            for _ in 0..4 {
                let x = s.ball_point(n, 0.7);
                let p = PolynomialSpinor::random(n, dim, &mut s);
                let l = geo.lichnerowicz(&p, &x).unwrap();
                assert!(l.residual.abs() < 1e-5, "{l:?}");
                assert!(l.divergence_imag.abs() < 1e-5, "{l:?}");
            }
        }
        // Killing spinor: every term vanishes
        let geo =
            SpinGeometry::new(ConformalChart::hyperbolic(n), DerivativeMode::Analytic).unwrap();
        let k = KillingSpinor::new(rep.clone(), s.unit_spinor(dim)).unwrap();
        let l = geo.lichnerowicz(&k, &s.ball_point(n, 0.7)).unwrap();
        assert!(l.killing_term < 1e-12 && l.dirac_term < 1e-12 && l.scalar_term.abs() < 1e-9);
        assert!(l.divergence.abs() < 1e-6);
        // flat chart, constant spinor: nonzero sides
        let geo = SpinGeometry::new(ConformalChart::flat(n), DerivativeMode::Analytic).unwrap();
        let c = ConstantSpinor {
            n,
            value: s.unit_spinor(dim),
        };
        let l = geo.lichnerowicz(&c, &s.ball_point(n, 0.7)).unwrap();
        // n(n-1)/4 + n/4 - n^2/4 = 0: the terms are nonzero but cancel
        assert!(l.scalar_term > 0.1 && l.killing_term > 0.1 && l.dirac_term > 0.1);
        assert!(l.residual.abs() < 1e-8, "{l:?}");
    }
}

#[test]
fn killing_norm_closed_form() {
    let mut s = Sampler::new(41);
    let rep = CliffordRep::new(5).unwrap();
    for _ in 0..20 {
        let u = s.spinor(4);
        let x = s.ball_point(5, 0.95);
        let k = KillingSpinor::new(rep.clone(), u.clone()).unwrap();
        let a = norm_sqr(&k.eval(&x).unwrap());
        let b = killing_norm_sqr_closed_form(&rep, &u, &x).unwrap();
        assert!((a - b).abs() < 1e-10 * a);
    }
}

#[test]
fn warped_product_examples() {
    assert_eq!(warped_sectional(0.0, 1.3), -1.0);
    assert_eq!(warped_sectional(1.0, 0.0), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn covariant_derivative_leibniz(seed in 0u64..1000, c in -2.0f64..2.0) {
        // ∇(c φ + ψ) = c ∇φ + ∇ψ, and ∇(h φ) = dh ⊗ φ + h ∇φ for h = x_0
        let n = 4;
        let mut s = Sampler::new(seed);
        let geo = SpinGeometry::new(ConformalChart::perturbed(n, 0.05), DerivativeMode::Analytic).unwrap();
        let mut p = PolynomialSpinor::random(n, 4, &mut s);
        let q = PolynomialSpinor::random(n, 4, &mut s);
        let x = s.ball_point(n, 0.6);
        let np = geo.nabla(&p, &x).unwrap();
        let nq = geo.nabla(&q, &x).unwrap();
        let mut sum = p.clone();
        sum.constant = p.constant.iter().zip(&q.constant).map(|(a, b)| a * c + b).collect();
        for a in 0..n {
            sum.linear[a] = p.linear[a].iter().zip(&q.linear[a]).map(|(u, v)| u * c + v).collect();
            for b in 0..(n - a) {
                sum.quadratic[a][b] = p.quadratic[a][b].iter().zip(&q.quadratic[a][b]).map(|(u, v)| u * c + v).collect();
            }
        }
        let ns = geo.nabla(&sum, &x).unwrap();
        for k in 0..n {
            let expect: Vec<C64> = np[k].iter().zip(&nq[k]).map(|(u, v)| u * c + v).collect();
            prop_assert!(max_diff(&ns[k], &expect) < 1e-9);
        }
        // multiply the constant-only field by x_0: φ = x_0 u
        let u = p.constant.clone();
        p.constant = vec![C64::new(0.0, 0.0); 4];
        p.linear = (0..n).map(|a| if a == 0 { u.clone() } else { vec![C64::new(0.0, 0.0); 4] }).collect();
        p.quadratic = (0..n).map(|a| (a..n).map(|_| vec![C64::new(0.0, 0.0); 4]).collect()).collect();
        let cu = ConstantSpinor { n, value: u.clone() };
        let nu = geo.nabla(&cu, &x).unwrap();
        let nx = geo.nabla(&p, &x).unwrap();
        let e_f = geo.chart.scale(&x).unwrap();
        for k in 0..n {
            let dh = if k == 0 { 1.0 / e_f } else { 0.0 };
            let expect: Vec<C64> = u.iter().zip(&nu[k]).map(|(a, b)| a * dh + b * x[0]).collect();
            prop_assert!(max_diff(&nx[k], &expect) < 1e-9);
        }
    }

    #[test]
    fn norm_derivative_bounded(seed in 0u64..1000) {
        let mut s = Sampler::new(seed);
        let n = 3 + (seed % 3) as usize;
        let rep = CliffordRep::new(n).unwrap();
        let u = s.unit_spinor(rep.spinor_dim());
        let dirs = vec![s.unit_vector(n), s.unit_vector(n)];
        let radii: Vec<f64> = (0..20).map(|k| 0.049 * k as f64).collect();
        let g = norm_growth_check(&u, n, &radii, &dirs).unwrap();
        prop_assert!(g.max_derivative_ratio <= 1.0 + 1e-9);
        prop_assert!(g.c1 >= 2.0 - 1e-9 && g.c2 <= 2.0 + 1e-9);
    }
}
