use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::estimates::QuotientReport;

/// One acceptance check with its measured value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Option<f64>,
    pub limit: Option<f64>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    /// Passes when `value <= limit`; NaN fails.
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            passed: value <= limit,
            value: Some(value),
            limit: Some(limit),
            detail: String::new(),
        }
    }

    pub fn flag(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            value: None,
            limit: None,
            detail: detail.into(),
        }
    }
}

/// A rendered CSV file.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub file: String,
    pub bytes: Vec<u8>,
}

impl Table {
    pub fn new(file: &str, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        for row in rows {
            w.write_record(&row).expect("in-memory write");
        }
        Self {
            file: file.into(),
            bytes: w.into_inner().expect("in-memory flush"),
        }
    }

    pub fn from_report(file: &str, report: &QuotientReport) -> Result<Self> {
        let mut bytes = Vec::new();
        report.write_csv(&mut bytes)?;
        Ok(Self {
            file: file.into(),
            bytes,
        })
    }
}

/// What an experiment hands to the file layer.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub results: Value,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}
