use serde_json::{json, Value};
use spinrigid_core::clifford::MinusConvention;
use spinrigid_core::eta::{
    eta_result, table1_report, table2_allowed, EtaResult, Fraction, ResidueSource, Sweep,
    TableMatch,
};
use spinrigid_core::groups::{
    acts_freely, build_group, cosines, element_strings, enumerate_characters, fixed_dims_exact,
    fixed_spinor_subspace, FiniteSubgroup, GroupName, SpinLift, Z2Character,
};

use super::{params, Outcome};
use crate::cli::{run_config, FixedSpinorArgs, GroupArgs, TablesArgs};
use crate::error::{CliError, Result};
use crate::golden;
use crate::report::{sci, Check, Report, Table};

fn parse_group(s: &str) -> Result<GroupName> {
    s.parse::<GroupName>()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn frac(f: &Fraction) -> String {
    format!("{}/{}", f.num, f.den)
}

fn match_label(m: &TableMatch) -> String {
    match m {
        TableMatch::Exact => "exact".into(),
        TableMatch::Mismatch { table } => format!("mismatch (table {})", frac(table)),
        TableMatch::NotTabulated => "not tabulated".into(),
    }
}

fn printed(m: &TableMatch, computed: &Fraction) -> Value {
    match m {
        TableMatch::Exact => json!(frac(computed)),
        TableMatch::Mismatch { table } => json!(frac(table)),
        TableMatch::NotTabulated => Value::Null,
    }
}

fn characters(group: &FiniteSubgroup, kappa: Option<&str>) -> Result<Vec<Z2Character>> {
    let all = enumerate_characters(group);
    match kappa {
        None => Ok(all),
        Some(k) => {
            let picked: Vec<_> = all.into_iter().filter(|c| c.label == k).collect();
            if picked.is_empty() {
                return Err(CliError::Usage(format!(
                    "{} has no character '{k}'",
                    group.name
                )));
            }
            Ok(picked)
        }
    }
}

fn sweep_of(a: &TablesArgs) -> Result<Sweep> {
    if a.cyclic_min < 1
        || a.cyclic_min > a.cyclic_max
        || a.dihedral_min < 2
        || a.dihedral_min > a.dihedral_max
    {
        return Err(CliError::Usage("empty or invalid sweep range".into()));
    }
    Ok(Sweep {
        cyclic: (a.cyclic_min, a.cyclic_max),
        dihedral: (a.dihedral_min, a.dihedral_max),
    })
}

fn eta_checks(r: &EtaResult, checks: &mut Vec<Check>) {
    let key = format!("{} {}", r.group, r.kappa);
    let row_ref = format!("golden:eta_rows[{} {}]", r.group, r.kappa);
    if r.trivial_character {
        checks.push(Check::new(
            format!("eta_sigma {}", r.group),
            frac(&r.eta_sigma),
            printed(&r.sigma_match, &r.eta_sigma),
            format!("golden:eta_sigma[{}]", r.group),
            !matches!(r.sigma_match, TableMatch::Mismatch { .. }),
        ));
        checks.push(Check::new(
            format!("eta_dirac {key}"),
            frac(&r.eta_dirac),
            printed(&r.table_match, &r.eta_dirac),
            row_ref.clone(),
            !matches!(r.table_match, TableMatch::Mismatch { .. }),
        ));
        if let Some(t) = r.table_sigma {
            checks.push(Check::new(
                format!("rochlin {key}"),
                json!(r.rochlin),
                t,
                format!("{row_ref}.sigma (mod 16)"),
                r.rochlin_matches_table_sigma == Some(true),
            ));
        }
    }
    checks.push(Check::new(
        format!("integrality {key}"),
        json!(r.rochlin),
        "integer",
        "derived: -eta_sigma - 8 eta_dirac must be an integer",
        r.integrality_ok && r.denominators_ok,
    ));
}

pub fn tables(a: &TablesArgs) -> Result<Outcome> {
    let sweep = sweep_of(a)?;
    let config = run_config(
        &a.common,
        None,
        params! {
            "group" => a.group,
            "kappa" => a.kappa,
            "cyclic" => [sweep.cyclic.0, sweep.cyclic.1],
            "dihedral" => [sweep.dihedral.0, sweep.dihedral.1],
        },
    )?;
    let (table, _) = golden::load()?;
    let (rows, groups): (Vec<EtaResult>, Vec<GroupName>) = match &a.group {
        Some(g) => {
            let name = parse_group(g)?;
            let group = build_group(name)?;
            let cal = table.calibration()?;
            let rows = characters(&group, a.kappa.as_deref())?
                .iter()
                .map(|ch| eta_result(&group, ch, cal, Some(&table)))
                .collect::<spinrigid_core::Result<_>>()?;
            (rows, vec![name])
        }
        None => {
            let mut rows = table1_report(&table, &sweep)?;
            if let Some(k) = &a.kappa {
                rows.retain(|r| &r.kappa == k);
            }
            (rows, sweep.groups())
        }
    };

    let mut checks = Vec::new();
    for r in &rows {
        eta_checks(r, &mut checks);
    }
    // allowed-signature sets are compared and reported, but the exit status
    // follows the eta rows only
    let mut allowed = Vec::new();
    let mut allowed_mismatches = Vec::new();
    for name in &groups {
        let g = build_group(*name)?;
        let tab = table2_allowed(&g, &table, ResidueSource::Tabulated)?;
        let comp = table2_allowed(&g, &table, ResidueSource::Computed)?;
        if !tab.matches_printed {
            allowed_mismatches.push(format!(
                "{name}: {:?} vs printed {:?}",
                tab.residues, tab.printed
            ));
        }
        allowed.push(json!({ "tabulated": tab, "computed": comp }));
    }
    let flags: Vec<String> = rows
        .iter()
        .filter_map(|r| {
            r.flag
                .as_ref()
                .map(|f| format!("{} {}: {f}", r.group, r.kappa))
        })
        .collect();

    let mut csv = Table::new(&[
        "group",
        "n",
        "kappa",
        "order",
        "eta_sigma",
        "eta_dirac",
        "rochlin",
        "integrality_ok",
        "table_match",
        "flag",
    ]);
    for r in &rows {
        csv.push(vec![
            r.group.clone(),
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            r.kappa.clone(),
            r.order.to_string(),
            frac(&r.eta_sigma),
            frac(&r.eta_dirac),
            r.rochlin.map(|v| v.to_string()).unwrap_or_default(),
            r.integrality_ok.to_string(),
            match_label(&r.table_match),
            r.flag.clone().unwrap_or_default(),
        ]);
    }
    let body = params! {
        "rows" => rows,
        "allowed" => allowed,
        "allowed_mismatches" => allowed_mismatches,
        "flags" => flags,
    };
    Ok(Outcome {
        report: Report::new("tables", config, body, checks),
        table: csv,
    })
}

pub fn groups(a: &GroupArgs) -> Result<Outcome> {
    let name = parse_group(&a.group)?;
    let config = run_config(&a.common, None, params! { "group" => name.to_string() })?;
    let g = build_group(name)?;
    let elems = element_strings(&g);
    let quats = g.quaternions();
    let chars: Vec<Value> = enumerate_characters(&g)
        .iter()
        .map(|c| json!({ "label": c.label, "on_generators": c.on_generators }))
        .collect();
    let checks = vec![
        Check::new(
            "order",
            g.order(),
            name.expected_order(),
            "closed form",
            g.order() == name.expected_order(),
        ),
        Check::new(
            "acts_freely",
            acts_freely(&g),
            true,
            "fixed-point-free action on S^3",
            acts_freely(&g),
        ),
    ];
    let digits = a.common.digits;
    let mut csv = Table::new(&["index", "alpha", "beta", "a", "b", "c", "d"]);
    let mut elements = Vec::with_capacity(elems.len());
    for (i, ((al, be), q)) in elems.iter().zip(&quats).enumerate() {
        csv.push(vec![
            i.to_string(),
            al.clone(),
            be.clone(),
            sci(q.a, digits),
            sci(q.b, digits),
            sci(q.c, digits),
            sci(q.d, digits),
        ]);
        elements.push(json!({ "alpha": al, "beta": be }));
    }
    let body = params! {
        "group" => name.to_string(),
        "order" => g.order(),
        "field" => format!("Q(zeta_{})", g.field.order()),
        "elements" => elements,
        "characters" => chars,
        "cosines" => cosines(&g),
    };
    Ok(Outcome {
        report: Report::new("groups", config, body, checks),
        table: csv,
    })
}

/// Known dimensions: untwisted lifts of nontrivial groups fix only Σ⁻,
/// everything is fixed for the trivial group, and the twisted lift of the
/// group of order 2 fixes only Σ⁺.
fn expected_fixed(name: GroupName, ch: &Z2Character) -> Option<(usize, usize)> {
    match name {
        GroupName::Trivial => Some((2, 2)),
        GroupName::Cyclic(2) if !ch.is_trivial() => Some((2, 0)),
        _ if ch.is_trivial() => Some((0, 2)),
        _ => None,
    }
}

pub fn fixed_spinors(a: &FixedSpinorArgs) -> Result<Outcome> {
    let config = run_config(
        &a.common,
        None,
        params! { "group" => a.group, "kappa" => a.kappa },
    )?;
    let names = match &a.group {
        Some(g) => vec![parse_group(g)?],
        None => Sweep::default().groups(),
    };
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut csv = Table::new(&["group", "kappa", "dim_plus", "dim_minus", "plain", "dual"]);
    for name in names {
        let g = build_group(name)?;
        let chars = match (&a.group, &a.kappa) {
            (Some(_), k) => characters(&g, k.as_deref())?,
            (None, Some(k)) => enumerate_characters(&g)
                .into_iter()
                .filter(|c| &c.label == k)
                .collect(),
            (None, None) => enumerate_characters(&g),
        };
        for ch in chars {
            let label = ch.label.clone();
            let expected = expected_fixed(name, &ch);
            let lift = SpinLift::new(&g, ch);
            let exact = fixed_dims_exact(&lift)?;
            let plain = fixed_spinor_subspace(&lift, MinusConvention::Plain)?;
            let dual = fixed_spinor_subspace(&lift, MinusConvention::Dual)?;
            let pd = (plain.dim_plus, plain.dim_minus);
            let dd = (dual.dim_plus, dual.dim_minus);
            let consistent = pd == exact && dd == exact;
            let (reference, provenance) = match expected {
                Some(e) => (json!([e.0, e.1]), "closed form for this lift"),
                None => (json!([exact.0, exact.1]), "exact projector trace"),
            };
            checks.push(Check::new(
                format!("fixed {name} {label}"),
                json!([exact.0, exact.1]),
                reference,
                provenance,
                consistent && expected.is_none_or(|e| e == exact),
            ));
            rows.push(json!({
                "group": name.to_string(),
                "kappa": label,
                "dim_plus": exact.0,
                "dim_minus": exact.1,
                "plain": [pd.0, pd.1],
                "dual": [dd.0, dd.1],
            }));
            csv.push(vec![
                name.to_string(),
                label,
                exact.0.to_string(),
                exact.1.to_string(),
                format!("{}/{}", pd.0, pd.1),
                format!("{}/{}", dd.0, dd.1),
            ]);
        }
    }
    let body = params! { "rows" => rows };
    Ok(Outcome {
        report: Report::new("fixed-spinors", config, body, checks),
        table: csv,
    })
}
