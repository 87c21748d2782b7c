//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines come out in order; exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use spinrigid::golden;
use spinrigid_core::clifford::{CliffordRep, MinusConvention};
use spinrigid_core::eta::{
    table1_report, table2_allowed, EtaResult, ResidueSource, Sweep, TableMatch,
};
use spinrigid_core::fgexpand::{
    default_order, eval_series, gauge_series, leading_order_equation, linear_profile_series, q, qr,
    radial_gauge_ode, vanishing_certificate, InGauge, LinearProfile, MatrixSeries, QMat,
};
use spinrigid_core::groups::{
    build_group, enumerate_characters, fixed_dims_exact, fixed_spinor_subspace, GroupName, SpinLift,
};
use spinrigid_core::hypgeo::{
    norm_growth_check, ConformalChart, DerivativeMode, KillingSpinor, PolynomialSpinor,
    SpinGeometry,
};
use spinrigid_core::linalg::C64;
use spinrigid_core::massint::{geometric_slices, mass_decay, GaugeProfile, SphereQuadrature};
use spinrigid_core::sampling::Sampler;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let v = f();
    let took = start.elapsed();
    match limit {
        Some(l) => verdict(
            v.pass && took < l,
            format!(
                "{}; {:.2}s (limit {}s)",
                v.detail,
                took.as_secs_f64(),
                l.as_secs()
            ),
        ),
        None => verdict(v.pass, format!("{}; {:.2}s", v.detail, took.as_secs_f64())),
    }
}

fn rat(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

fn parse_frac(num: &str, den: &str) -> BigRational {
    BigRational::new(num.parse().unwrap(), den.parse().unwrap())
}

fn table1() -> Vec<EtaResult> {
    let (table, _) = golden::load().expect("golden table");
    table1_report(&table, &Sweep::default()).expect("table sweep")
}

fn closed_sigma(name: GroupName) -> Option<BigRational> {
    match name {
        GroupName::Cyclic(n) => {
            let n = n as i64;
            Some(rat((n - 1) * (n - 2), 3 * n))
        }
        GroupName::BinaryDihedral(n) => {
            let n = n as i64;
            Some(rat(2 * n * n + 1, 6 * n))
        }
        GroupName::BinaryTetrahedral => Some(rat(49, 36)),
        GroupName::BinaryOctahedral => Some(rat(121, 72)),
        GroupName::BinaryIcosahedral => Some(rat(361, 180)),
        GroupName::Trivial => None,
    }
}

fn closed_dirac_untwisted(name: GroupName) -> Option<BigRational> {
    match name {
        GroupName::Cyclic(n) => {
            let n = n as i64;
            Some(rat(n * n - 1, 12 * n))
        }
        GroupName::BinaryDihedral(n) => {
            let n = n as i64;
            Some(rat(4 * n * n + 12 * n - 1, 48 * n))
        }
        GroupName::BinaryTetrahedral => Some(rat(167, 288)),
        GroupName::BinaryOctahedral => Some(rat(383, 576)),
        GroupName::BinaryIcosahedral => Some(rat(1079, 1440)),
        GroupName::Trivial => None,
    }
}

fn closed_residue(name: GroupName) -> Option<i64> {
    match name {
        GroupName::Cyclic(n) => Some(1 - n as i64),
        GroupName::BinaryDihedral(n) => Some(-(n as i64) - 2),
        GroupName::BinaryTetrahedral => Some(-6),
        GroupName::BinaryOctahedral => Some(-7),
        GroupName::BinaryIcosahedral => Some(-8),
        GroupName::Trivial => None,
    }
}

fn c1_eta_sigma() -> Verdict {
    timed(Some(Duration::from_secs(1)), || {
        let mut checked = 0;
        let mut bad = Vec::new();
        for name in Sweep::default().groups() {
            let Some(expect) = closed_sigma(name) else {
                continue;
            };
            let g = build_group(name).unwrap();
            let (table, _) = golden::load().unwrap();
            let cal = table.calibration().unwrap();
            let got = spinrigid_core::eta::eta_signature(&g, cal).unwrap();
            checked += 1;
            if got != expect {
                bad.push(format!("{name}: {got} != {expect}"));
            }
        }
        verdict(
            bad.is_empty(),
            format!("{checked} groups exact{}", list(&bad)),
        )
    })
}

fn c2_eta_dirac() -> Verdict {
    timed(Some(Duration::from_secs(1)), || {
        let rows = table1();
        let mut checked = 0;
        let mut bad = Vec::new();
        for r in rows
            .iter()
            .filter(|r| r.trivial_character && r.group != "trivial")
        {
            let name: GroupName = r.group.parse().unwrap();
            let expect = closed_dirac_untwisted(name).unwrap();
            let got = parse_frac(&r.eta_dirac.num, &r.eta_dirac.den);
            checked += 1;
            if got != expect || r.table_match != TableMatch::Exact {
                bad.push(format!("{} {}: {got}", r.group, r.kappa));
            }
        }
        verdict(
            bad.is_empty(),
            format!(
                "{checked} untwisted rows exact against closed forms and golden data{}",
                list(&bad)
            ),
        )
    })
}

fn c3_rochlin() -> Verdict {
    timed(None, || {
        let rows = table1();
        let mut bad = Vec::new();
        for r in &rows {
            if !r.integrality_ok {
                bad.push(format!("{} {} not integral", r.group, r.kappa));
            }
            if r.trivial_character && r.group != "trivial" {
                let name: GroupName = r.group.parse().unwrap();
                let want = closed_residue(name).unwrap();
                let ok = r.rochlin.is_some_and(|v| (v - want).rem_euclid(16) == 0);
                if !ok || r.rochlin_matches_table_sigma != Some(true) {
                    bad.push(format!(
                        "{} {} residue {:?} vs {want}",
                        r.group, r.kappa, r.rochlin
                    ));
                }
            }
        }
        // the printed (A_n even, twisted) entry is integral only at n = 2; the
        // defect sum -(n^2+2)/(24n) gives residue 1 throughout
        let mut flagged = 0;
        for r in rows
            .iter()
            .filter(|r| r.group.starts_with("A:") && r.kappa == "k1")
        {
            let n = r.n.unwrap() as i64;
            let got = parse_frac(&r.eta_dirac.num, &r.eta_dirac.den);
            if got != rat(-(n * n + 2), 24 * n)
                || r.rochlin.is_none_or(|v| (v - 1).rem_euclid(16) != 0)
            {
                bad.push(format!("A:{n} k1 computed {got}"));
            }
            let should_flag = n > 2;
            if r.flag.is_some() != should_flag {
                bad.push(format!("A:{n} k1 flag {:?}", r.flag));
            }
            flagged += r.flag.is_some() as usize;
        }
        verdict(
            bad.is_empty(),
            format!("{} structures integral, untwisted residues match, {flagged} misprinted rows flagged{}", rows.len(), list(&bad)),
        )
    })
}

fn c4_table2() -> Verdict {
    timed(None, || {
        let (table, _) = golden::load().unwrap();
        let mut bad = Vec::new();
        let mut checked = 0;
        for name in Sweep::default().groups() {
            let g = build_group(name).unwrap();
            let a = table2_allowed(&g, &table, ResidueSource::Tabulated).unwrap();
            let n = name.family().1.unwrap_or(0) as i64;
            let norm = |v: i64| {
                let r = v.rem_euclid(16);
                if r > 8 {
                    r - 16
                } else {
                    r
                }
            };
            let mut expect: Option<Vec<i64>> = match name {
                GroupName::Trivial => Some(vec![0]),
                GroupName::Cyclic(m) if m % 2 == 0 => Some(vec![1]),
                GroupName::BinaryDihedral(_) => Some(vec![norm(-n), -2, 0]),
                GroupName::BinaryOctahedral => Some(vec![-1]),
                _ => None,
            };
            if let Some(e) = expect.as_mut() {
                e.sort();
                e.dedup();
            }
            checked += 1;
            if a.residues != expect || !a.matches_printed {
                bad.push(format!("{name}: {:?} vs {expect:?}", a.residues));
            }
        }
        verdict(bad.is_empty(), format!("{checked} groups{}", list(&bad)))
    })
}

fn c5_fixed_spinors() -> Verdict {
    timed(None, || {
        let mut bad = Vec::new();
        let mut checked = 0;
        for name in Sweep::default().groups() {
            let g = build_group(name).unwrap();
            for ch in enumerate_characters(&g) {
                let expect = match name {
                    GroupName::Trivial => Some((2, 2)),
                    GroupName::Cyclic(2) if !ch.is_trivial() => Some((2, 0)),
                    _ if ch.is_trivial() => Some((0, 2)),
                    _ => None,
                };
                let Some(expect) = expect else { continue };
                let label = ch.label.clone();
                let lift = SpinLift::new(&g, ch);
                let exact = fixed_dims_exact(&lift).unwrap();
                checked += 1;
                for conv in [MinusConvention::Plain, MinusConvention::Dual] {
                    let f = fixed_spinor_subspace(&lift, conv).unwrap();
                    if (f.dim_plus, f.dim_minus) != expect {
                        bad.push(format!("{name} {label} {conv:?}"));
                    }
                }
                if exact != expect {
                    bad.push(format!("{name} {label}: {exact:?}"));
                }
            }
        }
        verdict(
            bad.is_empty(),
            format!("{checked} lifts, both conventions{}", list(&bad)),
        )
    })
}

fn c6_killing() -> Verdict {
    timed(Some(Duration::from_secs(5)), || {
        let mut s = Sampler::new(6);
        let (mut an_max, mut fd_max) = (0.0f64, 0.0f64);
        for n in [3, 4] {
            let rep = CliffordRep::new(n).unwrap();
            let an =
                SpinGeometry::new(ConformalChart::hyperbolic(n), DerivativeMode::Analytic).unwrap();
            let fd = SpinGeometry::new(
                ConformalChart::hyperbolic(n),
                DerivativeMode::FiniteDifference,
            )
            .unwrap();
            for _ in 0..100 {
                let x = s.ball_point(n, 0.9);
                let k = KillingSpinor::new(rep.clone(), s.unit_spinor(rep.spinor_dim())).unwrap();
                an_max = an_max.max(an.killing_residual(&k, &x).unwrap());
                fd_max = fd_max.max(fd.killing_residual(&k, &x).unwrap());
            }
        }
        verdict(
            an_max < 1e-8 && fd_max < 1e-4,
            format!("analytic {an_max:.2e} < 1e-8, fd {fd_max:.2e} < 1e-4"),
        )
    })
}

fn c7_curvature() -> Verdict {
    timed(None, || {
        let mut s = Sampler::new(7);
        let n = 4;
        let hyp =
            SpinGeometry::new(ConformalChart::hyperbolic(n), DerivativeMode::Analytic).unwrap();
        let pert = SpinGeometry::new(ConformalChart::perturbed(n, 0.05), DerivativeMode::Analytic)
            .unwrap();
        let (mut hmax, mut pmax) = (0.0f64, 0.0f64);
        for _ in 0..20 {
            let x = s.ball_point(n, 0.8);
            hmax = hmax.max(hyp.curvature_hat_max(&x).unwrap());
            pmax = pmax.max(pert.curvature_hat_max(&x).unwrap());
        }
        verdict(
            hmax < 1e-5 && pmax > 1e-3,
            format!("hyperbolic {hmax:.2e} < 1e-5, perturbed {pmax:.2e} > 1e-3"),
        )
    })
}

fn c8_lichnerowicz() -> Verdict {
    timed(None, || {
        let mut s = Sampler::new(8);
        let mut worst = 0.0f64;
        let mut pairs = 0;
        for n in [3, 4] {
            for chart in [ConformalChart::hyperbolic(n), ConformalChart::flat(n)] {
                let geo = SpinGeometry::new(chart, DerivativeMode::Analytic).unwrap();
                let dim = geo.rep.spinor_dim();
                for _ in 0..5 {
                    let x = s.ball_point(n, 0.7);
                    let p = PolynomialSpinor::random(n, dim, &mut s);
                    worst = worst.max(geo.lichnerowicz(&p, &x).unwrap().residual.abs());
                    pairs += 1;
                }
            }
        }
        verdict(
            worst < 1e-5,
            format!("{pairs} pairs, max |residual| {worst:.2e} < 1e-5"),
        )
    })
}

fn c9_certificates() -> Verdict {
    timed(None, || {
        let mut bad = Vec::new();
        for n in 4..=8usize {
            let c = vanishing_certificate(n, default_order(n)).unwrap();
            let zero_ok = c
                .orders
                .iter()
                .filter(|s| s.order <= n - 2)
                .all(|s| s.coefficient_forced_zero);
            if !zero_ok || c.first_free_order != Some(n - 1) || c.trace_vanishes_through < 2 * n - 3
            {
                bad.push(format!("n={n} certificate"));
            }
            let d = n - 1;
            let h = QMat::from_fn(d, |i, j| qr(1 + i as i64 + j as i64, 1 + (i * j) as i64));
            for k0 in 2..=n {
                let e = leading_order_equation(n, k0, &h).unwrap();
                if e.coefficient != q(n as i64 - 1 - k0 as i64) || !e.consistent {
                    bad.push(format!("n={n} k0={k0} coefficient {}", e.coefficient));
                }
                if k0 == 2 && e.trace_equation_coefficient != q(2 * (n as i64 - 2)) {
                    bad.push(format!("n={n} trace coefficient"));
                }
            }
        }
        verdict(bad.is_empty(), format!("n = 4..8 exact{}", list(&bad)))
    })
}

fn c10_gauge_series() -> Verdict {
    timed(None, || {
        let mut s = Sampler::new(10);
        let mut bad = 0;
        for trial in 0..10 {
            let d = 2 + trial % 3;
            let order = 12;
            let mut h = MatrixSeries::zero(d, order);
            for k in 1..=order {
                h.coeffs[k] = QMat::from_fn(d, |_, _| q(0));
                for i in 0..d {
                    for j in i..d {
                        let v = qr(
                            s.uniform(-9.0, 9.0).round() as i64,
                            s.uniform(1.0, 7.0).round() as i64,
                        );
                        h.coeffs[k].set(i, j, v.clone());
                        h.coeffs[k].set(j, i, v);
                    }
                }
            }
            let a = gauge_series(&h, order).unwrap();
            if a.inverse_defect().coeffs.iter().any(|c| !c.is_zero()) {
                bad += 1;
            }
        }
        verdict(
            bad == 0,
            format!("10 random rational inputs through order 12, {bad} nonzero defects"),
        )
    })
}

fn c11_ode() -> Verdict {
    timed(None, || {
        let flat = radial_gauge_ode(&InGauge, 0.5, 1e-3).unwrap();
        let dev = flat
            .theta
            .iter()
            .map(|t| (t - 1.0).abs())
            .fold(0.0, f64::max);
        let plug_in = flat.plug_back_residual(&InGauge);
        let lin = radial_gauge_ode(&LinearProfile, 0.2, 1e-3).unwrap();
        let at = lin.at(0.1);
        let series = (at - 1.0025).abs();
        let oracle = (at - eval_series(&linear_profile_series(10), 0.1)).abs();
        let plug_lin = lin.plug_back_residual(&LinearProfile);
        verdict(
            dev < 1e-10 && series < 1e-4 && plug_in.max(plug_lin) < 1e-8,
            format!(
                "in-gauge {dev:.1e} < 1e-10, theta(0.1) - 1.0025 = {series:.1e} (series oracle {oracle:.1e}), plug-back {:.1e} < 1e-8",
                plug_in.max(plug_lin)
            ),
        )
    })
}

fn c12_mass_decay() -> Verdict {
    timed(Some(Duration::from_secs(30)), || {
        let n = 4;
        let xs = geometric_slices(0.02, 0.2, 8).unwrap();
        let quad = SphereQuadrature::default_for(n).unwrap();
        let mut u = vec![C64::new(0.0, 0.0); 4];
        u[0] = C64::new(1.0, 0.0);
        let run = |p| mass_decay(n, p, &xs, &quad, &u).unwrap();
        let c = run(GaugeProfile::Compliant);
        let i = run(GaugeProfile::Identity);
        let t = run(GaugeProfile::TraceViolating);
        let expected = (n - 2) as f64;
        let c_ok = c.fit.identically_zero || c.fit.slope.is_some_and(|s| s >= expected - 0.15);
        let t_ok = t.fit.slope.is_some_and(|s| s < expected - 0.5);
        verdict(
            c_ok && i.fit.identically_zero && t_ok,
            format!(
                "compliant slope {:.4} >= {}, identity zero {}, trace-violating slope {:.4} < {}",
                c.fit.slope.unwrap_or(f64::NAN),
                expected - 0.15,
                i.fit.identically_zero,
                t.fit.slope.unwrap_or(f64::NAN),
                expected - 0.5
            ),
        )
    })
}

fn c13_norm_growth() -> Verdict {
    timed(None, || {
        let n = 4;
        let mut u = vec![C64::new(0.0, 0.0); 4];
        u[0] = C64::new(1.0, 0.0);
        let radii: Vec<f64> = (0..=99).map(|k| 0.99 * k as f64 / 99.0).collect();
        let mut s = Sampler::new(13);
        let dirs: Vec<Vec<f64>> = (0..16).map(|_| s.unit_vector(n)).collect();
        let g = norm_growth_check(&u, n, &radii, &dirs).unwrap();
        let finite = g.c1.is_finite() && g.c2.is_finite() && g.c1 > 0.0 && g.c2 > 0.0;
        verdict(
            finite && g.max_derivative_ratio <= 1.0 + 1e-9,
            format!(
                "c1 = {:.4}, c2 = {:.4} over {} samples to |x| = 0.99, max |X|phi|^2| / |phi|^2 = {:.12}",
                g.c1, g.c2, g.samples, g.max_derivative_ratio
            ),
        )
    })
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_spinrigid"))
}

fn c14_determinism() -> Verdict {
    timed(None, || {
        let dir = tempfile::tempdir().unwrap();
        let runs: [&[&str]; 8] = [
            &["tables"],
            &["fixed-spinors"],
            &["groups", "--group", "Ostar"],
            &[
                "killing-check",
                "--n",
                "4",
                "--samples",
                "100",
                "--seed",
                "5",
            ],
            &[
                "curvature-check",
                "--n",
                "3",
                "--samples",
                "20",
                "--seed",
                "5",
            ],
            &[
                "lichnerowicz-check",
                "--n",
                "3",
                "--samples",
                "20",
                "--seed",
                "5",
            ],
            &["fg", "--n", "5", "--order", "10"],
            &[
                "mass-decay",
                "--n",
                "3",
                "--slices",
                "6",
                "--profile",
                "compliant",
            ],
        ];
        let mut bad = Vec::new();
        for (i, args) in runs.iter().enumerate() {
            for format in ["json", "csv"] {
                let mut outputs = Vec::new();
                for rep in 0..2 {
                    let out = dir.path().join(format!("r{i}-{format}-{rep}"));
                    let status = Command::new(binary())
                        .args(*args)
                        .args(["--format", format, "--out"])
                        .arg(&out)
                        .status()
                        .unwrap();
                    if status.code() == Some(2) {
                        bad.push(format!("{} errored", args[0]));
                    }
                    outputs.push(std::fs::read(&out).unwrap_or_default());
                }
                if outputs[0].is_empty() || outputs[0] != outputs[1] {
                    bad.push(format!("{} {format}", args[0]));
                }
            }
        }
        verdict(
            bad.is_empty(),
            format!(
                "{} commands x json/csv byte-identical{}",
                runs.len(),
                list(&bad)
            ),
        )
    })
}

fn list(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("; failures: {}", bad.join(", "))
    }
}

/// Criteria that cannot hold as stated, with the reason. They still run
/// and print FAIL; the process fails only if one of them starts passing or
/// another criterion fails.
const EXPECTED_FAILURES: &[(usize, &str)] = &[(
    4,
    "binary dihedral groups of odd order parameter have only two Z/2 characters, so the printed set {-n, -2, 0} has no structures behind -2 and 0",
)];

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("eta signature exactness", c1_eta_sigma),
        ("eta Dirac, untwisted structures", c2_eta_dirac),
        ("Rochlin consistency and integrality", c3_rochlin),
        ("allowed signature sets", c4_table2),
        ("fixed-spinor dimensions", c5_fixed_spinors),
        ("Killing equation", c6_killing),
        ("curvature of the Killing connection", c7_curvature),
        ("pointwise Lichnerowicz identity", c8_lichnerowicz),
        ("expansion certificates", c9_certificates),
        ("gauge series inverse identity", c10_gauge_series),
        ("radial gauge ODE", c11_ode),
        ("mass integrand decay", c12_mass_decay),
        ("Killing spinor norm growth", c13_norm_growth),
        ("report determinism", c14_determinism),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        let expected = EXPECTED_FAILURES.iter().find(|(k, _)| *k == i + 1);
        println!(
            "[{}] criterion {:>2} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
        match (v.pass, expected) {
            (true, None) => passed += 1,
            (false, Some((_, why))) => println!("       expected failure: {why}"),
            (true, Some(_)) => {
                println!("       listed as an expected failure but passed");
                unexpected += 1;
                passed += 1;
            }
            (false, None) => unexpected += 1,
        }
    }
    println!(
        "acceptance: {passed} of {} criteria passed, {} expected failure(s), {unexpected} unexpected",
        criteria.len(),
        EXPECTED_FAILURES.len()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
