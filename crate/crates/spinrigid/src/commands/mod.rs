//! One function per subcommand, each producing a report and its csv rows.

mod eta;
mod expansion;
mod geometry;
mod mass;

pub use eta::{fixed_spinors, groups, tables};
pub use expansion::fg;
pub use geometry::{curvature_check, killing_check, lichnerowicz_check};
pub use mass::mass_decay;

use crate::report::{Report, Table};

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub table: Table,
}

/// Builds a JSON object from `key => value` pairs.
macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        #[allow(unused_mut)]
        let mut m = serde_json::Map::new();
        $(m.insert($k.to_string(), serde_json::json!($v));)*
        m
    }};
}
pub(crate) use params;
