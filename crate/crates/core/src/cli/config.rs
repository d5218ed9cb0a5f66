//! Run configuration files.
//!
//! ```text
//! # comment
//! [dimensionless]
//! eps1 = 0.005
//! mu = 0.008
//! nu = 0.05
//! eta = 7
//! delta = 0.1
//!
//! [run]
//! step = 1/2000
//! nu_min = 0
//! nu_max = 0.1
//! nu_step = 0.005
//! ```
//!
//! Exactly one of `[physical]` (keys `rho S E beta b c d m l`) or
//! `[dimensionless]` must be present. Numbers may be written as `a/b`.

use super::Analysis;
use crate::fundsys::{DEFAULT_STEP, DEFAULT_SUBINTERVALS};
use crate::params::{DimensionlessParams, PhysicalParams};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamBlock {
    Physical(PhysicalParams<f64>),
    Dimensionless(DimensionlessParams<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub analysis: Option<Analysis>,
    pub step: f64,
    pub subintervals: usize,
    pub omega_max: f64,
    pub modes: usize,
    pub nu_values: Vec<f64>,
    pub sweep_modes: Vec<usize>,
    /// Mode drawn by the `modeshape` analysis (1-based).
    pub mode: usize,
    pub grid: usize,
    /// Simplex iteration cap per eigenvalue search.
    pub max_iterations: usize,
    pub output: Option<PathBuf>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            analysis: None,
            step: DEFAULT_STEP,
            subintervals: DEFAULT_SUBINTERVALS,
            omega_max: 20.0,
            modes: 5,
            nu_values: nu_grid(0.0, 0.1, 0.005),
            sweep_modes: vec![1, 2],
            mode: 1,
            grid: 101,
            max_iterations: 500,
            output: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ParamBlock,
    pub run: RunOptions,
}

impl FromStr for RunConfig {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// `start, start + step, ...` up to `stop` inclusive (with a little slack).
pub fn nu_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let count = ((stop - start) / step + 1e-9).floor();
    if !(count >= 0.0) || !count.is_finite() {
        return Vec::new();
    }
    (0..=count as usize)
        .map(|i| start + step * i as f64)
        .collect()
}

fn parse_number(raw: &str) -> Option<f64> {
    let raw = raw.trim();
    let value = match raw.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?,
        None => raw.parse::<f64>().ok()?,
    };
    value.is_finite().then_some(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Physical,
    Dimensionless,
    Run,
}

struct Entry {
    line: usize,
    value: String,
}

pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
    let mut sections: BTreeMap<Section, (usize, BTreeMap<String, Entry>)> = BTreeMap::new();
    let mut current: Option<Section> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let section = match name.trim() {
                "physical" => Section::Physical,
                "dimensionless" => Section::Dimensionless,
                "run" => Section::Run,
                other => {
                    return Err(ConfigError::new(
                        line_no,
                        format!("unknown section [{other}]"),
                    ))
                }
            };
            if sections.contains_key(&section) {
                return Err(ConfigError::new(
                    line_no,
                    format!("duplicate section [{}]", name.trim()),
                ));
            }
            sections.insert(section, (line_no, BTreeMap::new()));
            current = Some(section);
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::new(
                line_no,
                format!("expected `key = value`, got `{line}`"),
            ));
        };
        let Some(section) = current else {
            return Err(ConfigError::new(line_no, "key outside of any section"));
        };
        let key = key.trim().to_string();
        let entries = &mut sections.get_mut(&section).unwrap().1;
        if entries.contains_key(&key) {
            return Err(ConfigError::new(line_no, format!("duplicate key `{key}`")));
        }
        entries.insert(
            key,
            Entry {
                line: line_no,
                value: value.trim().to_string(),
            },
        );
    }

    let physical = sections.remove(&Section::Physical);
    let dimensionless = sections.remove(&Section::Dimensionless);
    let params = match (physical, dimensionless) {
        (Some(_), Some((line, _))) => {
            return Err(ConfigError::new(
                line,
                "[physical] and [dimensionless] are mutually exclusive",
            ))
        }
        (None, None) => {
            return Err(ConfigError::new(
                0,
                "missing [physical] or [dimensionless] section",
            ))
        }
        (Some((line, entries)), None) => ParamBlock::Physical(physical_block(line, entries)?),
        (None, Some((line, entries))) => {
            ParamBlock::Dimensionless(dimensionless_block(line, entries)?)
        }
    };
    let run = match sections.remove(&Section::Run) {
        Some((_, entries)) => run_block(entries)?,
        None => RunOptions::default(),
    };
    Ok(RunConfig { params, run })
}

struct Fields {
    header: usize,
    entries: BTreeMap<String, Entry>,
}

impl Fields {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => parse_number(&e.value).map(Some).ok_or_else(|| {
                ConfigError::new(e.line, format!("`{key}` is not a number: `{}`", e.value))
            }),
        }
    }

    fn required(&mut self, key: &str) -> Result<f64, ConfigError> {
        self.number(key)?
            .ok_or_else(|| ConfigError::new(self.header, format!("missing key `{key}`")))
    }

    fn positive(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        let line = self.entries.get(key).map(|e| e.line).unwrap_or(self.header);
        match self.number(key)? {
            Some(v) if v <= 0.0 => Err(ConfigError::new(
                line,
                format!("`{key}` must be positive, got {v}"),
            )),
            other => Ok(other),
        }
    }

    fn count(&mut self, key: &str, allow_zero: bool) -> Result<Option<usize>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => match e.value.parse::<usize>() {
                Ok(0) if !allow_zero => Err(ConfigError::new(
                    e.line,
                    format!("`{key}` must be positive"),
                )),
                Ok(v) => Ok(Some(v)),
                Err(_) => Err(ConfigError::new(
                    e.line,
                    format!("`{key}` is not a whole number: `{}`", e.value),
                )),
            },
        }
    }

    fn finish(self) -> Result<(), ConfigError> {
        match self.entries.into_iter().next() {
            Some((key, e)) => Err(ConfigError::new(e.line, format!("unknown key `{key}`"))),
            None => Ok(()),
        }
    }
}

fn physical_block(
    header: usize,
    entries: BTreeMap<String, Entry>,
) -> Result<PhysicalParams<f64>, ConfigError> {
    let mut f = Fields { header, entries };
    let p = PhysicalParams {
        rho: f.required("rho")?,
        area: f.required("S")?,
        modulus: f.required("E")?,
        beta: f.required("beta")?,
        damping: f.required("b")?,
        stiffness: f.required("c")?,
        feedback: f.required("d")?,
        mass: f.required("m")?,
        length: f.required("l")?,
    };
    f.finish()?;
    Ok(p)
}

fn dimensionless_block(
    header: usize,
    entries: BTreeMap<String, Entry>,
) -> Result<DimensionlessParams<f64>, ConfigError> {
    let mut f = Fields { header, entries };
    let dp = DimensionlessParams {
        eps1: f.required("eps1")?,
        mu: f.required("mu")?,
        nu: f.required("nu")?,
        eta: f.required("eta")?,
        delta: f.required("delta")?,
    };
    f.finish()?;
    Ok(dp)
}

fn list<T>(e: &Entry, key: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, ConfigError> {
    e.value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            parse(s).ok_or_else(|| ConfigError::new(e.line, format!("bad entry `{s}` in `{key}`")))
        })
        .collect()
}

fn run_block(entries: BTreeMap<String, Entry>) -> Result<RunOptions, ConfigError> {
    let mut f = Fields { header: 0, entries };
    let mut run = RunOptions::default();

    if let Some(e) = f.take("analysis") {
        run.analysis =
            Some(e.value.parse().map_err(|_| {
                ConfigError::new(e.line, format!("unknown analysis `{}`", e.value))
            })?);
    }
    if let Some(v) = f.positive("step")? {
        run.step = v;
    }
    if let Some(v) = f.count("subintervals", false)? {
        run.subintervals = v;
    }
    if let Some(v) = f.positive("omega_max")? {
        run.omega_max = v;
    }
    if let Some(v) = f.count("modes", true)? {
        run.modes = v;
    }
    if let Some(v) = f.count("mode", false)? {
        run.mode = v;
    }
    if let Some(v) = f.count("grid", false)? {
        if v < 2 {
            return Err(ConfigError::new(0, "`grid` needs at least 2 points"));
        }
        run.grid = v;
    }
    if let Some(v) = f.count("max_iterations", false)? {
        run.max_iterations = v;
    }
    if let Some(e) = f.take("output") {
        run.output = Some(PathBuf::from(e.value));
    }
    if let Some(e) = f.take("sweep_modes") {
        let modes = list(&e, "sweep_modes", |s| {
            s.parse::<usize>().ok().filter(|&m| m > 0)
        })?;
        run.sweep_modes = modes;
    }

    let explicit = f.take("nu_values");
    let nu_line = explicit.as_ref().map(|e| e.line).unwrap_or(0);
    let nu_min = f.number("nu_min")?;
    let nu_max = f.number("nu_max")?;
    let nu_step = f.positive("nu_step")?;
    match explicit {
        Some(e) => {
            if nu_min.is_some() || nu_max.is_some() || nu_step.is_some() {
                return Err(ConfigError::new(
                    e.line,
                    "`nu_values` excludes nu_min/nu_max/nu_step",
                ));
            }
            run.nu_values = list(&e, "nu_values", parse_number)?;
        }
        None if nu_min.is_some() || nu_max.is_some() || nu_step.is_some() => {
            run.nu_values = nu_grid(
                nu_min.unwrap_or(0.0),
                nu_max.unwrap_or(0.1),
                nu_step.unwrap_or(0.005),
            );
        }
        None => {}
    }
    if run.nu_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(ConfigError::new(
            nu_line,
            "feedback grid must be strictly ascending",
        ));
    }
    if run.nu_values.iter().any(|&v| v < 0.0) {
        return Err(ConfigError::new(
            nu_line,
            "feedback values must be non-negative",
        ));
    }
    f.finish()?;
    Ok(run)
}
