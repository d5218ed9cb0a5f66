//! Command-line front end: run configs in, CSV tables out.
//!
//! Every table starts with `#` comment lines echoing the resolved parameters and
//! options, followed by a header row. Output is a pure function of the config.

pub mod config;
pub mod format;

pub use config::{ConfigError, ParamBlock, RunConfig, RunOptions};

use crate::asymptotic::{
    boundary_frequency, corrected_eigenvalue, critical_feedback, excitation_indicator,
    CriticalFeedback,
};
use crate::conservative::{find_roots, ConservativeRoot};
use crate::fundsys::{find_eigenvalue, mode_shape, sweep_feedback, SearchOptions, SpectralPoint};
use crate::params::DimensionlessParams;
use format::{number, optional, NA};
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analysis {
    Spectrum,
    Stability,
    Sweep,
    Modeshape,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::Spectrum => "spectrum",
            Analysis::Stability => "stability",
            Analysis::Sweep => "sweep",
            Analysis::Modeshape => "modeshape",
        }
    }
}

impl FromStr for Analysis {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.trim() {
            "spectrum" => Ok(Analysis::Spectrum),
            "stability" => Ok(Analysis::Stability),
            "sweep" => Ok(Analysis::Sweep),
            "modeshape" => Ok(Analysis::Modeshape),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("{0}")]
    Convergence(String),
    #[error(transparent)]
    Solver(#[from] crate::error::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Params(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Solver(_) | CliError::Io(_) => 1,
        }
    }
}

/// A rendered table plus how many numeric solves failed to converge.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub csv: String,
    pub unconverged: usize,
    pub warnings: Vec<String>,
}

/// Dimensionless parameters after conversion and validation.
pub fn resolve_params(
    cfg: &RunConfig,
) -> Result<(DimensionlessParams<f64>, Vec<String>), CliError> {
    let dp = match cfg.params {
        ParamBlock::Physical(p) => p
            .to_dimensionless()
            .map_err(|e| CliError::Params(e.to_string()))?,
        ParamBlock::Dimensionless(dp) => dp,
    };
    let report = dp.validate();
    if !report.is_valid() {
        let msg = report
            .violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        return Err(CliError::Params(msg));
    }
    Ok((
        dp,
        report.warnings.iter().map(ToString::to_string).collect(),
    ))
}

pub fn search_options(run: &RunOptions) -> SearchOptions<f64> {
    SearchOptions {
        step: run.step,
        subintervals: run.subintervals,
        max_iterations: run.max_iterations,
        ..SearchOptions::default()
    }
}

/// Runs `analysis` on `cfg`. In strict mode any unconverged solve is an error.
pub fn execute(analysis: Analysis, cfg: &RunConfig, strict: bool) -> Result<Report, CliError> {
    let (dp, warnings) = resolve_params(cfg)?;
    let mut report = match analysis {
        Analysis::Spectrum => run_spectrum(cfg, &dp)?,
        Analysis::Stability => run_stability(cfg, &dp)?,
        Analysis::Sweep => run_sweep(cfg, &dp)?,
        Analysis::Modeshape => run_modeshape(cfg, &dp)?,
    };
    report.warnings = warnings;
    if strict && report.unconverged > 0 {
        return Err(CliError::Convergence(format!(
            "{} eigenvalue search(es) did not converge",
            report.unconverged
        )));
    }
    Ok(report)
}

fn preamble(analysis: Analysis, cfg: &RunConfig, dp: &DimensionlessParams<f64>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# flexbar {}", analysis.name());
    if let ParamBlock::Physical(p) = cfg.params {
        for (k, v) in [
            ("rho", p.rho),
            ("S", p.area),
            ("E", p.modulus),
            ("beta", p.beta),
            ("b", p.damping),
            ("c", p.stiffness),
            ("d", p.feedback),
            ("m", p.mass),
            ("l", p.length),
        ] {
            let _ = writeln!(out, "# physical.{k} = {}", number(v));
        }
    }
    for (k, v) in [
        ("eps1", dp.eps1),
        ("mu", dp.mu),
        ("nu", dp.nu),
        ("eta", dp.eta),
        ("delta", dp.delta),
    ] {
        let _ = writeln!(out, "# {k} = {}", number(v));
    }
    let run = &cfg.run;
    let _ = writeln!(out, "# step = {}", number(run.step));
    let _ = writeln!(out, "# subintervals = {}", run.subintervals);
    let _ = writeln!(out, "# omega_max = {}", number(run.omega_max));
    let _ = writeln!(out, "# modes = {}", run.modes);
    let nus: Vec<String> = run.nu_values.iter().map(|&v| number(v)).collect();
    let _ = writeln!(out, "# nu_values = {}", nus.join(", "));
    let sweep: Vec<String> = run.sweep_modes.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "# sweep_modes = {}", sweep.join(", "));
    let _ = writeln!(out, "# mode = {}", run.mode);
    let _ = writeln!(out, "# grid = {}", run.grid);
    let _ = writeln!(out, "# max_iterations = {}", run.max_iterations);
    out
}

fn roots(
    cfg: &RunConfig,
    dp: &DimensionlessParams<f64>,
    count: usize,
) -> Result<Vec<ConservativeRoot<f64>>, CliError> {
    Ok(find_roots(dp, cfg.run.omega_max, count)?.roots)
}

fn line(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join(","));
    out.push('\n');
}

fn flag(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

pub fn run_spectrum(cfg: &RunConfig, dp: &DimensionlessParams<f64>) -> Result<Report, CliError> {
    let opts = search_options(&cfg.run);
    let mut csv = preamble(Analysis::Spectrum, cfg, dp);
    csv.push_str(
        "index,omega_conservative,q_asymptotic,omega_asymptotic,q_numeric,omega_numeric,delta\n",
    );
    let mut unconverged = 0;
    for root in roots(cfg, dp, cfg.run.modes)? {
        let asym = corrected_eigenvalue(root.omega, dp).ok();
        let seed = asym.map_or(SpectralPoint::guess(0.0, root.omega), SpectralPoint::from);
        let point = find_eigenvalue(dp, seed, &opts);
        if !point.converged {
            unconverged += 1;
        }
        let numeric = |v: f64| {
            if point.converged {
                number(v)
            } else {
                NA.to_string()
            }
        };
        line(
            &mut csv,
            &[
                root.index.to_string(),
                number(root.omega),
                optional(asym.map(|a| a.q)),
                optional(asym.map(|a| a.omega)),
                numeric(point.q),
                numeric(point.omega),
                number(point.delta_value),
            ],
        );
    }
    Ok(Report {
        csv,
        unconverged,
        warnings: Vec::new(),
    })
}

pub fn run_stability(cfg: &RunConfig, dp: &DimensionlessParams<f64>) -> Result<Report, CliError> {
    let modes = roots(cfg, dp, cfg.run.modes)?;
    let mut csv = preamble(Analysis::Stability, cfg, dp);
    let mut header = vec!["nu".to_string(), "omega_boundary".to_string()];
    for r in &modes {
        header.push(format!("nu_crit_{}", r.index));
        header.push(format!("excited_{}", r.index));
    }
    line(&mut csv, &header);

    let critical: Vec<String> = modes
        .iter()
        .map(|r| match critical_feedback(r.omega, dp) {
            Ok(CriticalFeedback::Critical(nu)) => number(nu),
            Ok(CriticalFeedback::NeverExcited { .. }) => "never_excited".to_string(),
            Err(_) => NA.to_string(),
        })
        .collect();
    for &nu in &cfg.run.nu_values {
        let at = dp.with_nu(nu);
        let mut cells = vec![number(nu), optional(boundary_frequency(nu, dp).value())];
        for (r, crit) in modes.iter().zip(&critical) {
            cells.push(crit.clone());
            cells.push(
                excitation_indicator(r.omega, &at)
                    .map_or_else(|_| NA.to_string(), |rep| flag(rep.excited)),
            );
        }
        line(&mut csv, &cells);
    }
    Ok(Report {
        csv,
        unconverged: 0,
        warnings: Vec::new(),
    })
}

pub fn run_sweep(cfg: &RunConfig, dp: &DimensionlessParams<f64>) -> Result<Report, CliError> {
    let opts = search_options(&cfg.run);
    let modes = &cfg.run.sweep_modes;
    let rows = sweep_feedback(dp, &cfg.run.nu_values, modes, &opts)?;
    let mut csv = preamble(Analysis::Sweep, cfg, dp);
    let mut header = vec!["nu".to_string()];
    for m in modes {
        header.push(format!("q_{m}"));
        header.push(format!("omega_{m}"));
        header.push(format!("converged_{m}"));
    }
    line(&mut csv, &header);

    let unconverged = rows.iter().filter(|r| !r.point.converged).count();
    if !modes.is_empty() {
        for chunk in rows.chunks(modes.len()) {
            let mut cells = vec![number(chunk[0].nu)];
            for r in chunk {
                cells.push(number(r.point.q));
                cells.push(number(r.point.omega));
                cells.push(flag(r.point.converged));
            }
            line(&mut csv, &cells);
        }
    }
    Ok(Report {
        csv,
        unconverged,
        warnings: Vec::new(),
    })
}

pub fn run_modeshape(cfg: &RunConfig, dp: &DimensionlessParams<f64>) -> Result<Report, CliError> {
    let opts = search_options(&cfg.run);
    let mode = cfg.run.mode;
    let found = roots(cfg, dp, mode)?;
    let Some(root) = found.get(mode - 1) else {
        return Err(CliError::Params(format!(
            "mode {mode} not found below omega_max = {}",
            number(cfg.run.omega_max)
        )));
    };
    let seed = SpectralPoint::from(corrected_eigenvalue(root.omega, dp)?);
    let point = find_eigenvalue(dp, seed, &opts);
    let shape = mode_shape(&point, dp, cfg.run.grid, &opts).map_err(|e| {
        CliError::Convergence(format!(
            "mode {mode} (q = {}, omega = {}): {e}",
            number(point.q),
            number(point.omega)
        ))
    })?;

    let mut csv = preamble(Analysis::Modeshape, cfg, dp);
    let _ = writeln!(csv, "# q = {}", number(point.q));
    let _ = writeln!(csv, "# omega = {}", number(point.omega));
    let _ = writeln!(csv, "# c3 = {}", number(shape.c3));
    let _ = writeln!(csv, "# c4 = {}", number(shape.c4));
    csv.push_str("x,u1,u2\n");
    for ((x, u1), u2) in shape.grid.iter().zip(&shape.u1).zip(&shape.u2) {
        line(&mut csv, &[number(*x), number(*u1), number(*u2)]);
    }
    Ok(Report {
        csv,
        unconverged: usize::from(!point.converged),
        warnings: Vec::new(),
    })
}
