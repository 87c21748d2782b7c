use serde_json::json;
use spinrigid_core::linalg::C64;
use spinrigid_core::massint::{self, geometric_slices, GaugeProfile, SphereQuadrature};

use super::{params, Outcome};
use crate::cli::{run_config, MassDecayArgs, Profile};
use crate::error::{CliError, Result};
use crate::report::{num, sci, Check, Report, Table};

pub fn mass_decay(a: &MassDecayArgs) -> Result<Outcome> {
    if !(3..=6).contains(&a.n) {
        return Err(CliError::Usage(format!(
            "--n must lie in 3..=6, got {}",
            a.n
        )));
    }
    if !(a.x_min > 0.0 && a.x_min < a.x_max && a.x_max < 1.0) {
        return Err(CliError::Usage("need 0 < --x-min < --x-max < 1".into()));
    }
    let profile = match a.profile {
        Profile::Compliant => GaugeProfile::Compliant,
        Profile::TraceViolating => GaugeProfile::TraceViolating,
        Profile::Identity => GaugeProfile::Identity,
    };
    let quadrature = match (a.polar, a.azimuth) {
        (None, None) => SphereQuadrature::default_for(a.n)?,
        (p, az) => {
            let d = SphereQuadrature::default_for(a.n)?;
            SphereQuadrature::new(
                a.n,
                p.unwrap_or(d.polar_nodes),
                az.unwrap_or(d.azimuth_nodes),
            )?
        }
    };
    let config = run_config(
        &a.common,
        None,
        params! {
            "n" => a.n,
            "slices" => a.slices,
            "profile" => profile.name(),
            "x_range" => [a.x_min, a.x_max],
            "polar_nodes" => quadrature.polar_nodes,
            "azimuth_nodes" => quadrature.azimuth_nodes,
        },
    )?;
    let xs = geometric_slices(a.x_min, a.x_max, a.slices)?;
    // first basis spinor; the integrand is a quadratic form in it
    let dim = 1usize << (a.n / 2);
    let mut u = vec![C64::new(0.0, 0.0); dim];
    u[0] = C64::new(1.0, 0.0);
    let r = massint::mass_decay(a.n, profile, &xs, &quadrature, &u)?;

    let (computed, reference) = match profile {
        GaugeProfile::Identity => (
            json!(if r.fit.identically_zero {
                "identically zero"
            } else {
                "nonzero"
            }),
            json!("identically zero"),
        ),
        GaugeProfile::Compliant => (
            json!(r.fit.slope),
            json!(format!(">= {}", r.expected - 0.15)),
        ),
        GaugeProfile::TraceViolating => {
            (json!(r.fit.slope), json!(format!("< {}", r.expected - 0.5)))
        }
    };
    let checks = vec![Check::new(
        format!("decay rate ({})", profile.name()),
        computed,
        reference,
        "expected rate n-2 for gauges compliant with the expansion",
        r.pass,
    )];
    let digits = a.common.digits;
    let mut table = Table::new(&["x", "integral", "term1", "term2", "term3", "imag"]);
    for s in &r.slices {
        let b = &s.integral;
        table.push(vec![
            sci(s.x, digits),
            sci(b.total, digits),
            sci(b.term1, digits),
            sci(b.term2, digits),
            sci(b.term3, digits),
            sci(b.imag, digits),
        ]);
    }
    let mut body = params! {
        "n" => a.n,
        "profile" => profile.name(),
        "expected" => r.expected,
        "identically_zero" => r.fit.identically_zero,
        "fit" => r.fit,
        "slices" => r.slices,
    };
    body.insert(
        "slope".into(),
        r.fit.slope.map_or(serde_json::Value::Null, num),
    );
    body.insert("max_imag_ratio".into(), num(r.max_imag_ratio));
    Ok(Outcome {
        report: Report::new("mass-decay", config, body, checks),
        table,
    })
}
