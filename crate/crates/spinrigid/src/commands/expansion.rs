use std::fs;
use std::path::Path;

use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};
use spinrigid_core::fgexpand::{
    default_order, einstein_residual_symmetric, leading_order_equation, main_residual_frozen, q,
    rational, trace_order_equation, trlambda_residual, vanishing_certificate, OrderStatus, QMat,
    ScalarSeries, TensorSeries, Q,
};

use super::{params, Outcome};
use crate::cli::{run_config, Ansatz, FgArgs};
use crate::error::{CliError, Result};
use crate::report::{Check, Report, Table};

/// Free data for `--free-coeff`. Entries are integers or strings `p/q`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FreeCoeff {
    /// Frozen ansatz: order of the supplied coefficient (default `n - 1`).
    #[serde(default)]
    order: Option<usize>,
    /// Frozen ansatz: the symmetric `(n-1) x (n-1)` Taylor coefficient.
    #[serde(default)]
    matrix: Option<Vec<Vec<Value>>>,
    /// Symmetric ansatz: power-series coefficients of `c`, starting at `c(0) = 1`.
    #[serde(default)]
    c: Option<Vec<Value>>,
}

fn rational_of(v: &Value, path: &Path) -> Result<Q> {
    let parsed = match v {
        Value::Number(n) => n.as_i64().map(q),
        Value::String(s) => rational::parse(s.trim()),
        _ => None,
    };
    parsed.ok_or_else(|| {
        CliError::Usage(format!(
            "{}: expected an integer or 'p/q', got {v}",
            path.display()
        ))
    })
}

fn read_free(path: &Path) -> Result<FreeCoeff> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.into(),
        source,
    })
}

fn fmt_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Per-order status under the rotationally symmetric ansatz: with all lower
/// coefficients zero, `c = 1 + x^k` is ruled out when the residual is
/// nonzero at its leading order `k - 1`. Coefficients are multiples of the
/// identity, so the trace decides everything.
fn symmetric_orders(n: usize, order: usize) -> Result<Vec<OrderStatus>> {
    (1..=order)
        .map(|k| {
            let mut coeffs = vec![q(0); k + 1];
            coeffs[0] = q(1);
            coeffs[k] = q(1);
            let r = einstein_residual_symmetric(&ScalarSeries::from_coeffs(coeffs, k + 2), n)?;
            let forced = !r.main[k - 1].is_zero() || !r.trlambda[k - 1].is_zero();
            Ok(OrderStatus {
                order: k,
                coefficient_forced_zero: forced,
                trace_forced_zero: forced,
                free: !forced,
            })
        })
        .collect()
}

fn frozen_free(
    n: usize,
    order: usize,
    free: &FreeCoeff,
    path: &Path,
    checks: &mut Vec<Check>,
) -> Result<Value> {
    let rows = free.matrix.as_ref().ok_or_else(|| {
        CliError::Usage(format!("{}: frozen ansatz needs 'matrix'", path.display()))
    })?;
    let k = free.order.unwrap_or(n - 1);
    if k == 0 || k + 2 > order {
        return Err(CliError::Usage(format!(
            "free order {k} must lie in 1..={}",
            order.saturating_sub(2)
        )));
    }
    let m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| rational_of(v, path))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let s = QMat::from_rows(m)?;
    if s.dim() != n - 1 {
        return Err(CliError::Usage(format!("matrix must be {0}x{0}", n - 1)));
    }
    let mut h = TensorSeries::round(n, order);
    h.set(k, s.clone())?;
    let main = main_residual_frozen(&h)?;
    let trl = trlambda_residual(&h)?;
    // residuals are exact through order - 2
    let valid = order - 2;
    let main_first = main.valuation().filter(|&v| v <= valid);
    let trl_first = trl.valuation().filter(|&v| v <= valid);
    let leading_clean = main.coeffs[k - 1].is_zero() && trl.coeffs[k - 1].is_zero();
    let traceless = s.trace().is_zero();
    let predicted = traceless && k == n - 1;
    checks.push(Check::new(
        format!("free coefficient at order {k} survives the leading equations"),
        leading_clean,
        predicted,
        "certificate: only traceless data at order n-1 are free",
        leading_clean == predicted,
    ));
    Ok(json!({
        "order": k,
        "traceless": traceless,
        "leading_order_clean": leading_clean,
        "main_first_nonzero": main_first,
        "trlambda_first_nonzero": trl_first,
        "valid_through": valid,
    }))
}

fn symmetric_free(
    n: usize,
    order: usize,
    statuses: &[OrderStatus],
    free: &FreeCoeff,
    path: &Path,
    checks: &mut Vec<Check>,
) -> Result<Value> {
    let vals = free.c.as_ref().ok_or_else(|| {
        CliError::Usage(format!("{}: symmetric ansatz needs 'c'", path.display()))
    })?;
    let coeffs: Vec<Q> = vals
        .iter()
        .map(|v| rational_of(v, path))
        .collect::<Result<_>>()?;
    if coeffs.is_empty() || coeffs.len() > order + 1 {
        return Err(CliError::Usage(format!(
            "'c' must have between 1 and {} coefficients",
            order + 1
        )));
    }
    let r = einstein_residual_symmetric(&ScalarSeries::from_coeffs(coeffs.clone(), order), n)?;
    let valid = order - 2;
    let first = [r.main_first_nonzero, r.trlambda_first_nonzero]
        .into_iter()
        .flatten()
        .filter(|&v| v <= valid)
        .min();
    // the lowest perturbed order k is forced to vanish, so the residual
    // must show up at order k - 1
    let lowest = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, v)| !v.is_zero())
        .map(|(k, _)| k);
    let predicted = lowest
        .filter(|&k| {
            k - 1 <= valid
                && statuses
                    .get(k - 1)
                    .is_some_and(|s| s.coefficient_forced_zero)
        })
        .map(|k| k - 1);
    checks.push(Check::new(
        "first nonzero residual order for the supplied c",
        json!(first),
        json!(predicted),
        "certificate: the lowest perturbed order is forced to vanish",
        first == predicted,
    ));
    Ok(json!({
        "c": coeffs.iter().map(fmt_q).collect::<Vec<_>>(),
        "main": r.main.iter().map(fmt_q).collect::<Vec<_>>(),
        "trlambda": r.trlambda.iter().map(fmt_q).collect::<Vec<_>>(),
        "first_nonzero": first,
        "valid_through": valid,
    }))
}

pub fn fg(a: &FgArgs) -> Result<Outcome> {
    let n = a.n;
    if !(4..=12).contains(&n) {
        return Err(CliError::Usage(format!(
            "--n must lie in 4..=12 (the trace induction needs n > 3), got {n}"
        )));
    }
    let order = a.order.unwrap_or_else(|| default_order(n));
    if order < 3 {
        return Err(CliError::Usage("--order must be at least 3".into()));
    }
    let ansatz = match a.ansatz {
        Ansatz::Frozen => "frozen",
        Ansatz::Symmetric => "symmetric",
    };
    let config = run_config(
        &a.common,
        None,
        params! {
            "n" => n,
            "order" => order,
            "ansatz" => ansatz,
            "free_coeff" => a.free_coeff.as_ref().map(|p| p.display().to_string()),
        },
    )?;

    let mut checks = Vec::new();
    let mut body = params! { "n" => n, "ansatz" => ansatz, "truncation" => order };
    let statuses = match a.ansatz {
        Ansatz::Frozen => {
            let cert = vanishing_certificate(n, order)?;
            let forced_ok = cert
                .orders
                .iter()
                .filter(|s| s.order <= n - 2)
                .all(|s| s.coefficient_forced_zero);
            checks.push(Check::new(
                "coefficients forced to vanish",
                json!(cert
                    .orders
                    .iter()
                    .filter(|s| s.coefficient_forced_zero)
                    .map(|s| s.order)
                    .max()),
                n - 2,
                "closed form: h^(k) = 0 for k <= n-2",
                forced_ok,
            ));
            checks.push(Check::new(
                "first free order",
                json!(cert.first_free_order),
                n - 1,
                "closed form: free data at order n-1",
                cert.first_free_order == Some(n - 1)
                    || (order < n - 1 && cert.first_free_order.is_none()),
            ));
            let trace_expected = (2 * n - 3).min(order);
            checks.push(Check::new(
                "traces vanish through",
                cert.trace_vanishes_through,
                trace_expected,
                "closed form: tr h^(k) = 0 for k <= 2n-3",
                cert.trace_vanishes_through >= trace_expected,
            ));
            let mut equations = Vec::new();
            for k0 in 2..=order.min(n + 1) {
                let lead = leading_order_equation(n, k0, &QMat::identity(n - 1))?;
                let expect = q(n as i64 - 1 - k0 as i64);
                checks.push(Check::new(
                    format!("leading coefficient at order {k0}"),
                    fmt_q(&lead.coefficient),
                    fmt_q(&expect),
                    "closed form: n-1-k0",
                    lead.coefficient == expect && lead.consistent,
                ));
                let tr = trace_order_equation(n, k0)?;
                if k0 == 2 {
                    let expect = q(2 * (n as i64 - 2));
                    checks.push(Check::new(
                        "trace coefficient at order 2",
                        fmt_q(&lead.trace_equation_coefficient),
                        fmt_q(&expect),
                        "closed form: 2(n-2)",
                        lead.trace_equation_coefficient == expect,
                    ));
                }
                equations.push(json!({
                    "k0": k0,
                    "coefficient": fmt_q(&lead.coefficient),
                    "trace_equation_coefficient": fmt_q(&lead.trace_equation_coefficient),
                    "trace_order_coefficient": fmt_q(&tr.coefficient),
                    "trace_route": tr.route,
                }));
            }
            body.insert("first_free_order".into(), json!(cert.first_free_order));
            body.insert(
                "trace_vanishes_through".into(),
                json!(cert.trace_vanishes_through),
            );
            body.insert("leading_equations".into(), json!(equations));
            cert.orders
        }
        Ansatz::Symmetric => {
            let statuses = symmetric_orders(n, order)?;
            let round = einstein_residual_symmetric(&ScalarSeries::constant(q(1), order), n)?;
            let einstein =
                round.main_first_nonzero.is_none() && round.trlambda_first_nonzero.is_none();
            checks.push(Check::new(
                "round cylinder is Einstein",
                einstein,
                true,
                "c = 1 gives the hyperbolic metric",
                einstein,
            ));
            let all_forced = statuses.iter().all(|s| s.coefficient_forced_zero);
            checks.push(Check::new(
                "every symmetric coefficient forced to vanish",
                all_forced,
                true,
                "pure-trace data are ruled out by the trace equations",
                all_forced,
            ));
            statuses
        }
    };
    if let Some(path) = &a.free_coeff {
        let free = read_free(path)?;
        let result = match a.ansatz {
            Ansatz::Frozen => frozen_free(n, order, &free, path, &mut checks)?,
            Ansatz::Symmetric => symmetric_free(n, order, &statuses, &free, path, &mut checks)?,
        };
        body.insert("free_coefficient".into(), result);
    }
    let mut table = Table::new(&[
        "order",
        "coefficient_forced_zero",
        "trace_forced_zero",
        "free",
    ]);
    for s in &statuses {
        table.push(vec![
            s.order.to_string(),
            s.coefficient_forced_zero.to_string(),
            s.trace_forced_zero.to_string(),
            s.free.to_string(),
        ]);
    }
    body.insert("orders".into(), json!(statuses));
    Ok(Outcome {
        report: Report::new("fg", config, body, checks),
        table,
    })
}
