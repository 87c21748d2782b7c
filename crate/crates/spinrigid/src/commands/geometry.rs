use spinrigid_core::clifford::CliffordRep;
use spinrigid_core::hypgeo::{
    ConformalChart, DerivativeMode, KillingSpinor, PolynomialSpinor, SpinGeometry,
};
use spinrigid_core::sampling::Sampler;

use super::{params, Outcome};
use crate::cli::{run_config, Chart, CurvatureArgs, KillingArgs, LichnerowiczArgs, Mode};
use crate::error::{CliError, Result};
use crate::report::{num, sci, Check, Report, Table};

/// Coefficient of `|x|^4` in the perturbed conformal factor.
pub const PERTURBATION: f64 = 0.05;

fn validate(n: usize, samples: usize, radius: f64) -> Result<()> {
    if !(3..=8).contains(&n) {
        return Err(CliError::Usage(format!("--n must lie in 3..=8, got {n}")));
    }
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(CliError::Usage(format!(
            "--radius must lie in (0, 1), got {radius}"
        )));
    }
    Ok(())
}

fn chart_of(chart: Chart, n: usize) -> ConformalChart {
    match chart {
        Chart::Hyperbolic => ConformalChart::hyperbolic(n),
        Chart::Flat => ConformalChart::flat(n),
        Chart::Perturbed => ConformalChart::perturbed(n, PERTURBATION),
    }
}

fn chart_name(chart: Chart) -> &'static str {
    match chart {
        Chart::Hyperbolic => "hyperbolic",
        Chart::Flat => "flat",
        Chart::Perturbed => "perturbed",
    }
}

/// Per-point csv rows: index, coordinates, one value.
fn point_table(n: usize, value: &str) -> Table {
    let mut header: Vec<String> = vec!["index".into()];
    header.extend((0..n).map(|i| format!("x{i}")));
    header.push(value.into());
    Table {
        header,
        rows: Vec::new(),
    }
}

fn point_row(i: usize, x: &[f64], v: f64, digits: usize) -> Vec<String> {
    let mut row = vec![i.to_string()];
    row.extend(x.iter().map(|c| sci(*c, digits)));
    row.push(sci(v, digits));
    row
}

fn verdict_body(
    points: usize,
    max_residual: f64,
    tolerance: f64,
    extra: serde_json::Map<String, serde_json::Value>,
) -> serde_json::Map<String, serde_json::Value> {
    let mut body = params! { "points" => points, "tolerance" => tolerance };
    body.insert("max_residual".into(), num(max_residual));
    body.extend(extra);
    body
}

fn point_params(
    n: usize,
    samples: usize,
    radius: f64,
) -> serde_json::Map<String, serde_json::Value> {
    params! { "n" => n, "samples" => samples, "radius" => radius }
}

pub fn killing_check(a: &KillingArgs) -> Result<Outcome> {
    validate(a.n, a.samples, a.radius)?;
    let (mode, default_tol, mode_name) = match a.mode {
        Mode::Analytic => (DerivativeMode::Analytic, 1e-8, "analytic"),
        Mode::Fd => (DerivativeMode::FiniteDifference, 1e-4, "fd"),
    };
    let mut p = point_params(a.n, a.samples, a.radius);
    p.insert("mode".into(), mode_name.into());
    let config = run_config(&a.common, Some(default_tol), p)?;
    let tol = config.tolerance.unwrap_or(default_tol);
    let rep = CliffordRep::new(a.n)?;
    let geo = SpinGeometry::new(ConformalChart::hyperbolic(a.n), mode)?;
    let mut s = Sampler::new(a.common.seed);
    let mut table = point_table(a.n, "residual");
    let mut worst: f64 = 0.0;
    for i in 0..a.samples {
        let x = s.ball_point(a.n, a.radius);
        let field = KillingSpinor::new(rep.clone(), s.unit_spinor(rep.spinor_dim()))?;
        let r = geo.killing_residual(&field, &x)?;
        worst = worst.max(r);
        table.push(point_row(i, &x, r, a.common.digits));
    }
    let pass = worst < tol;
    let checks = vec![Check::new(
        "max |killing connection of phi_u| / |phi_u|",
        num(worst),
        tol,
        format!("tolerance ({mode_name} connection)"),
        pass,
    )];
    let body = verdict_body(
        a.samples,
        worst,
        tol,
        params! { "n" => a.n, "mode" => mode_name },
    );
    Ok(Outcome {
        report: Report::new("killing-check", config, body, checks),
        table,
    })
}

pub fn curvature_check(a: &CurvatureArgs) -> Result<Outcome> {
    validate(a.n, a.samples, a.radius)?;
    // hyperbolic: R̂ vanishes; flat: R̂ = -R_{-1} has norm 1/2 on frame
    // pairs; perturbed: R̂ must be detected as nonzero
    let default_tol = match a.chart {
        Chart::Hyperbolic => 1e-5,
        Chart::Flat => 1e-8,
        Chart::Perturbed => 1e-3,
    };
    let mut p = point_params(a.n, a.samples, a.radius);
    p.insert("chart".into(), chart_name(a.chart).into());
    let config = run_config(&a.common, Some(default_tol), p)?;
    let tol = config.tolerance.unwrap_or(default_tol);
    let geo = SpinGeometry::new(chart_of(a.chart, a.n), DerivativeMode::Analytic)?;
    let mut s = Sampler::new(a.common.seed);
    let mut table = point_table(a.n, "curvature_hat_norm");
    let mut worst: f64 = 0.0;
    let mut worst_dev: f64 = 0.0;
    for i in 0..a.samples {
        let x = s.ball_point(a.n, a.radius);
        let r = geo.curvature_hat_max(&x)?;
        worst = worst.max(r);
        worst_dev = worst_dev.max((r - 0.5).abs());
        table.push(point_row(i, &x, r, a.common.digits));
    }
    let (residual, pass, expectation, reference) = match a.chart {
        Chart::Hyperbolic => (worst, worst < tol, "vanishes", serde_json::json!(tol)),
        Chart::Flat => (
            worst_dev,
            worst_dev < tol,
            "equals 1/2 on frame pairs",
            serde_json::json!(0.5),
        ),
        Chart::Perturbed => (
            worst,
            worst > tol,
            "exceeds tolerance somewhere",
            serde_json::json!(tol),
        ),
    };
    let checks = vec![Check::new(
        format!(
            "curvature of the Killing connection ({})",
            chart_name(a.chart)
        ),
        num(worst),
        reference,
        format!("expected: {expectation}"),
        pass,
    )];
    let body = verdict_body(
        a.samples,
        residual,
        tol,
        params! { "n" => a.n, "chart" => chart_name(a.chart), "expectation" => expectation, "max_norm" => worst },
    );
    Ok(Outcome {
        report: Report::new("curvature-check", config, body, checks),
        table,
    })
}

pub fn lichnerowicz_check(a: &LichnerowiczArgs) -> Result<Outcome> {
    validate(a.n, a.samples, a.radius)?;
    let default_tol = 1e-5;
    let mut p = point_params(a.n, a.samples, a.radius);
    p.insert("chart".into(), chart_name(a.chart).into());
    let config = run_config(&a.common, Some(default_tol), p)?;
    let tol = config.tolerance.unwrap_or(default_tol);
    let geo = SpinGeometry::new(chart_of(a.chart, a.n), DerivativeMode::Analytic)?;
    let dim = geo.rep.spinor_dim();
    let mut s = Sampler::new(a.common.seed);
    let mut table = point_table(a.n, "residual");
    let mut worst: f64 = 0.0;
    let mut worst_imag: f64 = 0.0;
    for i in 0..a.samples {
        let x = s.ball_point(a.n, a.radius);
        let field = PolynomialSpinor::random(a.n, dim, &mut s);
        let l = geo.lichnerowicz(&field, &x)?;
        worst = worst.max(l.residual.abs());
        worst_imag = worst_imag.max(l.divergence_imag.abs());
        table.push(point_row(i, &x, l.residual, a.common.digits));
    }
    let pass = worst < tol;
    let checks = vec![Check::new(
        format!("lichnerowicz residual ({})", chart_name(a.chart)),
        num(worst),
        tol,
        "tolerance (finite-difference divergence)",
        pass,
    )];
    let body = verdict_body(
        a.samples,
        worst,
        tol,
        params! { "n" => a.n, "chart" => chart_name(a.chart), "max_imaginary_divergence" => worst_imag },
    );
    Ok(Outcome {
        report: Report::new("lichnerowicz-check", config, body, checks),
        table,
    })
}
