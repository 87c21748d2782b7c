use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::RunConfig;

pub const SCHEMA: u32 = 1;

/// One comparison of a computed value against its reference.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub computed: Value,
    pub reference: Value,
    /// Origin of the reference: a golden-data row, a closed form, or a
    /// tolerance bound.
    pub provenance: String,
    pub pass: bool,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        computed: impl Into<Value>,
        reference: impl Into<Value>,
        provenance: impl Into<String>,
        pass: bool,
    ) -> Self {
        Check {
            name: name.into(),
            computed: computed.into(),
            reference: reference.into(),
            provenance: provenance.into(),
            pass,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: RunConfig,
    /// Command-specific fields, serialized at the top level.
    #[serde(flatten)]
    pub body: Map<String, Value>,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub pass: bool,
}

impl Report {
    pub fn new(
        command: &str,
        config: RunConfig,
        body: Map<String, Value>,
        checks: Vec<Check>,
    ) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        let summary = Summary {
            checks: checks.len(),
            passed,
            failed: checks.len() - passed,
        };
        Report {
            schema: SCHEMA,
            command: command.into(),
            config,
            body,
            pass: summary.failed == 0,
            checks,
            summary,
        }
    }

    /// Like [`Report::new`], but the verdict also requires `extra_pass`.
    pub fn with_verdict(
        command: &str,
        config: RunConfig,
        body: Map<String, Value>,
        checks: Vec<Check>,
        extra_pass: bool,
    ) -> Self {
        let mut r = Self::new(command, config, body, checks);
        r.pass &= extra_pass;
        r
    }
}

/// Rows for csv output.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// The checks themselves, for commands without a natural table.
    pub fn of_checks(checks: &[Check]) -> Self {
        let mut t = Table::new(&["name", "computed", "reference", "provenance", "pass"]);
        for c in checks {
            t.push(vec![
                c.name.clone(),
                value_cell(&c.computed),
                value_cell(&c.reference),
                c.provenance.clone(),
                c.pass.to_string(),
            ]);
        }
        t
    }
}

fn value_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Float with `digits` significant digits in scientific notation.
pub fn sci(v: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), v)
}

/// JSON number for finite values, `null` otherwise.
pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Format;

    fn config() -> RunConfig {
        RunConfig {
            seed: 3,
            tolerance: None,
            tolerance_overridden: false,
            digits: 4,
            format: Format::Json,
            golden: "bundled".into(),
            params: Map::new(),
        }
    }

    #[test]
    fn summary_counts() {
        let checks = vec![
            Check::new("a", 1, 1, "x", true),
            Check::new("b", 2, 1, "x", false),
        ];
        let r = Report::new("t", config(), Map::new(), checks);
        assert_eq!(
            r.summary,
            Summary {
                checks: 2,
                passed: 1,
                failed: 1
            }
        );
        assert!(!r.pass);
        assert!(!Report::with_verdict("t", config(), Map::new(), vec![], false).pass);
    }

    #[test]
    fn body_is_flattened_after_the_header() {
        let mut body = Map::new();
        body.insert("points".into(), 5.into());
        let text = serde_json::to_string(&Report::new("t", config(), body, vec![])).unwrap();
        assert!(text.starts_with(r#"{"schema":1,"command":"t","config":{"#));
        assert!(text.contains(r#""points":5,"checks":[]"#));
    }

    #[test]
    fn formatting() {
        assert_eq!(sci(1234.5678, 4), "1.235e3");
        assert_eq!(num(f64::NAN), Value::Null);
        let t = Table::of_checks(&[Check::new("a", "1/2", Value::Null, "p", true)]);
        assert_eq!(t.rows[0], ["a", "1/2", "", "p", "true"]);
    }
}
