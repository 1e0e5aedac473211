//! Versioned JSON reports and CSV output.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::settings::Settings;

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

/// One checked identity or evaluated value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub err: Option<f64>,
}

impl Record {
    pub fn check(id: impl Into<String>, expected: impl Into<String>, computed: impl Into<String>, pass: bool) -> Self {
        Record {
            id: id.into(),
            expected: expected.into(),
            computed: computed.into(),
            pass,
            residual: None,
            x: None,
            re: None,
            im: None,
            err: None,
        }
    }

    pub fn with_residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }
}

/// Quadrature settings used by a numeric command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub half_width: f64,
    pub step: f64,
    pub epsilon: f64,
    pub budget: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset_scale: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    /// Effective settings after merging flags, config file and defaults.
    pub config: Settings,
    pub records: Vec<Record>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridInfo>,
    #[serde(default)]
    pub warnings: Vec<String>,
    pub wall_time_s: Option<f64>,
    pub all_pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, config: Settings) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            config,
            records: Vec::new(),
            grid: None,
            warnings: Vec::new(),
            wall_time_s: None,
            all_pass: true,
        }
    }

    pub fn push(&mut self, r: Record) {
        self.all_pass &= r.pass;
        self.records.push(r);
    }

    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.pass).count()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    /// Wave scans become `x1[,x2],re,im,err`; anything else one row per record.
    pub fn write_csv<W: Write>(&self, out: W) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let is_wave = !self.records.is_empty() && self.records.iter().all(|r| r.x.is_some() && r.re.is_some());
        if is_wave {
            let dim = self.records[0].x.as_ref().map_or(0, Vec::len);
            let mut header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
            header.extend(["re", "im", "err"].map(String::from));
            w.write_record(&header)?;
            for r in &self.records {
                let mut row: Vec<String> = r.x.iter().flatten().map(|v| v.to_string()).collect();
                for v in [r.re, r.im] {
                    row.push(v.map_or_else(String::new, |v| v.to_string()));
                }
                row.push(r.err.map_or_else(String::new, |v| format!("{v:e}")));
                w.write_record(&row)?;
            }
        } else {
            w.write_record(["id", "expected", "computed", "pass", "residual"])?;
            for r in &self.records {
                let residual = r.residual.map_or_else(String::new, |v| format!("{v:e}"));
                w.write_record([r.id.as_str(), &r.expected, &r.computed, if r.pass { "true" } else { "false" }, &residual])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
