//! Printed reference tables, loaded from the bundled data file or from the
//! path in `SPINRIGID_DATA`.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use spinrigid_core::eta::GoldenTable;

use crate::error::{CliError, Result};

pub const DATA_ENV: &str = "SPINRIGID_DATA";

const BUNDLED: &str = include_str!("../data/tables.json");

/// Where the golden table came from, echoed into reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoldenSource {
    Bundled,
    File(PathBuf),
}

impl GoldenSource {
    pub fn label(&self) -> String {
        match self {
            GoldenSource::Bundled => "bundled:data/tables.json".into(),
            GoldenSource::File(p) => format!("file:{}", p.display()),
        }
    }
}

pub fn bundled() -> Result<GoldenTable> {
    parse(BUNDLED, Path::new("data/tables.json"))
}

pub fn from_file(path: &Path) -> Result<GoldenTable> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    parse(&text, path)
}

/// The table named by `SPINRIGID_DATA`, else the bundled one.
pub fn load() -> Result<(GoldenTable, GoldenSource)> {
    match env::var_os(DATA_ENV) {
        Some(p) if !p.is_empty() => {
            let path = PathBuf::from(p);
            Ok((from_file(&path)?, GoldenSource::File(path)))
        }
        _ => Ok((bundled()?, GoldenSource::Bundled)),
    }
}

fn parse(text: &str, path: &Path) -> Result<GoldenTable> {
    let table: GoldenTable = serde_json::from_str(text).map_err(|source| CliError::Parse {
        path: path.into(),
        source,
    })?;
    if table.schema != 1 {
        return Err(CliError::Usage(format!(
            "{}: unsupported golden schema {}",
            path.display(),
            table.schema
        )));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use spinrigid_core::groups::GroupName;

    use super::*;

    #[test]
    fn bundled_table_parses() {
        let t = bundled().unwrap();
        assert_eq!(t.calibration_orders, [2, 3, 4]);
        assert!(t.row(GroupName::Cyclic(6), "k1").is_some());
        assert!(t.row(GroupName::Cyclic(5), "k1").is_none());
        assert_eq!(t.rows_for(GroupName::BinaryDihedral(4)).count(), 4);
        assert!(t.calibration().is_ok());
    }

    #[test]
    fn rejects_other_schemas() {
        let text = BUNDLED.replacen("\"schema\": 1", "\"schema\": 2", 1);
        assert!(matches!(
            parse(&text, Path::new("x")),
            Err(CliError::Usage(_))
        ));
    }
}
