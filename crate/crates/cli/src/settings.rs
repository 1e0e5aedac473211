//! Run settings shared by the command line and the TOML config file.
//!
//! Every field is optional. Command-line values override the file, and
//! anything still unset falls back to the built-in default of the command.

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Rank: N of so(N) for `verify serre|tau`, n of so(2n+1) otherwise.
    #[arg(long = "n", visible_alias = "rank", global = true, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,

    /// Spectral parameters, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,

    /// Coupling c > 0.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,

    /// Position, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,

    /// Integration route: direct, recursive or gustafson.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,

    /// Quadrature half-width L (a multiple of the step).
    #[arg(long = "grid-L", global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_l: Option<f64>,

    /// Quadrature step.
    #[arg(long = "grid-step", global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,

    /// Scale of the contour heights of the Gustafson route.
    #[arg(long = "offset-scale", global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset_scale: Option<f64>,

    /// Gauge of the Toda check: printed or tilde.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge: Option<String>,

    /// Finite-difference step of the Toda check.
    #[arg(long = "fd-step", global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,

    /// Pass threshold overriding the command default.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,

    /// Scan x1 over `start,end,points` (eval wave).
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<Vec<f64>>,

    /// Lower parameters of the Gustafson check; `re` or `re:im`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<String>>,

    /// Upper parameters of the Gustafson check; `re` or `re:im`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<String>>,

    /// Largest number of nodes for `check a8` (checks m = 1..=M).
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,

    /// Random samples per m for `check a8`.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,

    /// Seed for `check a8`.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// Output format: json or csv.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,

    /// Omit the wall time so that reports are byte-identical across runs.
    #[arg(long = "no-timing", global = true, num_args = 0, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_timing: Option<bool>,
}

macro_rules! merge_fields {
    ($hi:expr, $lo:expr, $($f:ident),*) => {
        Settings { $($f: $hi.$f.or($lo.$f),)* }
    };
}

impl Settings {
    /// Field-wise `self` over `base`.
    pub fn over(self, base: Settings) -> Settings {
        merge_fields!(
            self, base, n, gamma, c, x, route, grid_l, grid_step, offset_scale, gauge, fd_step, tol, scan, lower,
            upper, m, samples, seed, out, format, no_timing
        )
    }

    pub fn from_toml_file(path: &Path) -> anyhow::Result<Settings> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
