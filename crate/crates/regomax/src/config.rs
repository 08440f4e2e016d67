//! Run configuration, a TOML document. Every key is optional; missing keys
//! take the defaults below and unknown keys are rejected.
//!
//! ```toml
//! alpha = 0.5
//! year = 2008
//! workers = 0                  # 0: one per available core
//!
//! [input]
//! path = "flows_2008.csv"
//! format = "native_csv"        # or "icio_csv"
//! [input.icio]
//! separator = "_"
//! orientation = "rows_sell"    # or "columns_sell"
//! ignore_unknown = false
//!
//! [registries]
//! countries = "countries.csv"  # bundled lists when absent
//! sectors = "sectors.csv"
//!
//! [output]
//! dir = "runs"
//!
//! [selection]
//! country = "USA"
//! sectors = "1-21"
//!
//! [regomax]
//! compare_published = false
//!
//! [sensitivity]
//! mode = "sector_map"          # or "country_map"
//! source_sector = "C23 PET"
//! source_country = "USA"       # country_map only
//! countries = []               # all countries when empty
//! include_source = false
//! step = 0.01
//! rank_tol = 1e-14
//! dry_run = false
//!
//! [network]
//! k = 4
//! formats = ["dot", "json_graph", "edge_csv"]
//!
//! [tolerances]
//! rank = 1e-12
//! # ... see `ToleranceConfig`
//! ```
//!
//! Precedence: command-line flags, then this file, then the defaults. The
//! file is taken from `--config`, else from the `REGOMAX_CONFIG`
//! environment variable.

use std::path::{Path, PathBuf};

use regomax_core::{Tolerances, DEFAULT_ALPHA};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphFormat;
use crate::ingest::{FlowFormat, IcioLayout};

pub const CONFIG_ENV: &str = "REGOMAX_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub year: Option<i32>,
    pub workers: usize,
    pub input: InputConfig,
    pub registries: RegistryConfig,
    pub output: OutputConfig,
    pub selection: SelectionConfig,
    pub regomax: RegomaxConfig,
    pub sensitivity: SensitivityConfig,
    pub network: NetworkConfig,
    pub tolerances: ToleranceConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: DEFAULT_ALPHA,
            year: None,
            workers: 0,
            input: InputConfig::default(),
            registries: RegistryConfig::default(),
            output: OutputConfig::default(),
            selection: SelectionConfig::default(),
            regomax: RegomaxConfig::default(),
            sensitivity: SensitivityConfig::default(),
            network: NetworkConfig::default(),
            tolerances: ToleranceConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFormat {
    #[default]
    NativeCsv,
    IcioCsv,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputConfig {
    pub path: Option<PathBuf>,
    pub format: InputFormat,
    pub icio: IcioLayout,
}

impl InputConfig {
    pub fn flow_format(&self) -> FlowFormat {
        match self.format {
            InputFormat::NativeCsv => FlowFormat::NativeCsv,
            InputFormat::IcioCsv => FlowFormat::IcioCsv(self.icio.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegistryConfig {
    pub countries: Option<PathBuf>,
    pub sectors: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("runs") }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectionConfig {
    pub country: Option<String>,
    /// Inclusive 1-based range `first-last`, or a single index.
    pub sectors: String,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            country: None,
            sectors: "1-21".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegomaxConfig {
    pub compare_published: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitivityMode {
    #[default]
    SectorMap,
    CountryMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensitivityConfig {
    pub mode: SensitivityMode,
    pub source_sector: String,
    pub source_country: Option<String>,
    pub countries: Vec<String>,
    pub include_source: bool,
    pub step: f64,
    pub rank_tol: f64,
    pub dry_run: bool,
}

impl Default for SensitivityConfig {
    fn default() -> Self {
        let opts = regomax_core::SensitivityOptions::default();
        SensitivityConfig {
            mode: SensitivityMode::SectorMap,
            source_sector: "C23 PET".to_string(),
            source_country: None,
            countries: Vec::new(),
            include_source: false,
            step: opts.step,
            rank_tol: opts.rank_tol,
            dry_run: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    pub k: usize,
    pub formats: Vec<GraphFormat>,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig {
            k: regomax_core::network::DEFAULT_LINKS_PER_NODE,
            formats: GraphFormat::ALL.to_vec(),
        }
    }
}

/// Mirror of [`Tolerances`] with the same defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub stochastic: f64,
    pub rank: f64,
    pub rank_max_iter: usize,
    pub eigen: f64,
    pub eigen_max_iter: usize,
    pub series: f64,
    pub series_max_terms: usize,
    pub decomposition: f64,
    pub reduced_stochastic: f64,
    pub weights: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        let t = Tolerances::default();
        ToleranceConfig {
            stochastic: t.stochastic,
            rank: t.rank,
            rank_max_iter: t.rank_max_iter,
            eigen: t.eigen,
            eigen_max_iter: t.eigen_max_iter,
            series: t.series,
            series_max_terms: t.series_max_terms,
            decomposition: t.decomposition,
            reduced_stochastic: t.reduced_stochastic,
            weights: t.weights,
        }
    }
}

impl ToleranceConfig {
    pub fn to_core(&self) -> Tolerances {
        Tolerances {
            stochastic: self.stochastic,
            rank: self.rank,
            rank_max_iter: self.rank_max_iter,
            eigen: self.eigen,
            eigen_max_iter: self.eigen_max_iter,
            series: self.series,
            series_max_terms: self.series_max_terms,
            decomposition: self.decomposition,
            reduced_stochastic: self.reduced_stochastic,
            weights: self.weights,
            ..Tolerances::default()
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Explicit path, else `$REGOMAX_CONFIG`, else defaults.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Self::from_file(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
                _ => Ok(RunConfig::default()),
            },
        }
    }

    /// Range checks that do not need the data.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha = {} must lie in (0, 1)", self.alpha)));
        }
        let step = self.sensitivity.step;
        if !(step > 0.0 && step < 1.0) {
            return Err(Error::Config(format!("sensitivity.step = {step} must lie in (0, 1)")));
        }
        if !(self.sensitivity.rank_tol > 0.0) {
            return Err(Error::Config("sensitivity.rank_tol must be positive".into()));
        }
        if self.network.formats.is_empty() {
            return Err(Error::Config("network.formats is empty".into()));
        }
        Ok(())
    }

    pub fn worker_count(&self) -> usize {
        if self.workers > 0 {
            self.workers
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}
