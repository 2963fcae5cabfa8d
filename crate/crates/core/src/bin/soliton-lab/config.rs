//! Run configuration: defaults, then an optional `key = value` file, then flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    fn parse(s: &str) -> Result<Self, UsageError> {
        Format::from_str(s.trim(), true)
            .map_err(|_| UsageError(format!("unknown format {s:?} (csv, json, svg)")))
    }
}

/// Options shared by every subcommand. All are optional here so that values
/// from `--config` can be told apart from explicit flags.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Dimension n.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Outer radius of the computed range.
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Local error tolerance of the integrator.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Radius below which the origin series is used.
    #[arg(long = "switch-radius")]
    pub switch_radius: Option<f64>,
    /// Number of sample radii for probes and closed-form tables.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output directory [default: $SOLITON_LAB_OUT, else the current directory].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output formats, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Vec<Format>,
    /// File of `key = value` lines; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub r_max: f64,
    pub tol: f64,
    pub switch_radius: f64,
    pub samples: usize,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    /// Whether `dim` was given at all, by flag or file.
    pub dim_given: bool,
}

impl RunConfig {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

#[derive(Debug, Default)]
struct FileConfig {
    dim: Option<usize>,
    rmax: Option<f64>,
    tol: Option<f64>,
    switch_radius: Option<f64>,
    samples: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Vec<Format>>,
}

fn parse_value<T: std::str::FromStr>(
    path: &Path,
    line: usize,
    key: &str,
    v: &str,
) -> Result<T, UsageError> {
    v.parse().map_err(|_| {
        UsageError(format!(
            "{}:{line}: bad value {v:?} for {key}",
            path.display()
        ))
    })
}

fn read_file(path: &Path) -> Result<FileConfig, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    let mut c = FileConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(UsageError(format!(
                "{}:{}: expected key = value",
                path.display(),
                i + 1
            )));
        };
        let (k, v) = (k.trim(), v.trim());
        match k.replace('-', "_").as_str() {
            "dim" => c.dim = Some(parse_value(path, i + 1, k, v)?),
            "rmax" | "r_max" => c.rmax = Some(parse_value(path, i + 1, k, v)?),
            "tol" => c.tol = Some(parse_value(path, i + 1, k, v)?),
            "switch_radius" => c.switch_radius = Some(parse_value(path, i + 1, k, v)?),
            "samples" => c.samples = Some(parse_value(path, i + 1, k, v)?),
            "out" => c.out = Some(PathBuf::from(v)),
            "format" => c.format = Some(v.split(',').map(Format::parse).collect::<Result<_, _>>()?),
            _ => {
                return Err(UsageError(format!(
                    "{}:{}: unknown key {k:?}",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(c)
}

pub const DEFAULT_DIM: usize = 3;
pub const DEFAULT_RMAX: f64 = 100.0;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SAMPLES: usize = 200;

impl CommonArgs {
    /// Resolves flags over the config file over the environment over defaults.
    pub fn resolve(&self, default_formats: &[Format]) -> Result<RunConfig, UsageError> {
        let file = match &self.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let dim = self.dim.or(file.dim);
        let out = self
            .out
            .clone()
            .or(file.out)
            .or_else(|| {
                std::env::var_os("SOLITON_LAB_OUT")
                    .filter(|v| !v.is_empty())
                    .map(PathBuf::from)
            })
            .unwrap_or_else(|| PathBuf::from("."));
        let mut formats = if !self.format.is_empty() {
            self.format.clone()
        } else {
            file.format.unwrap_or_else(|| default_formats.to_vec())
        };
        formats.sort();
        formats.dedup();
        let cfg = RunConfig {
            dim: dim.unwrap_or(DEFAULT_DIM),
            r_max: self.rmax.or(file.rmax).unwrap_or(DEFAULT_RMAX),
            tol: self.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            switch_radius: self
                .switch_radius
                .or(file.switch_radius)
                .unwrap_or(soliton_lab::geometry::DEFAULT_SWITCH_RADIUS),
            samples: self.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
            out,
            formats,
            dim_given: dim.is_some(),
        };
        if !(cfg.r_max > 0.0 && cfg.r_max.is_finite()) {
            return Err(UsageError(format!(
                "--rmax must be positive and finite, got {}",
                cfg.r_max
            )));
        }
        if cfg.samples < 2 {
            return Err(UsageError(format!(
                "--samples must be at least 2, got {}",
                cfg.samples
            )));
        }
        Ok(cfg)
    }
}
