use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Everything that determines a report, echoed verbatim into it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    /// Tolerance in force for the command (the override if one was given).
    pub tolerance: Option<f64>,
    pub tolerance_overridden: bool,
    /// Significant digits for floats in csv and pretty output.
    pub digits: usize,
    pub format: Format,
    pub golden: String,
    #[serde(flatten)]
    pub params: serde_json::Map<String, serde_json::Value>,
}
