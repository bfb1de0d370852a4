//! Command-line front end: `modes`, `point` and `sweep`.
//!
//! Settings are layered: built-in defaults, then a `--figure` preset, then a
//! `key = value` config file, then flags. Exit codes: 0 success, 1 bad
//! configuration, 2 numerical failure, 3 I/O failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::detector::{decay_probability_accelerated, DetectorConfig, Truncation};
use crate::error::Error;
use crate::inertial::CavityGeometry;
use crate::rindler::RindlerGeometry;
use crate::sweep::{self, linear_grid, Figure, PlacementSet, SweepPlan, CSV_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_invalid_input() {
            CliError::Config(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "rindler-purcell",
    version,
    about = "Decay probability of a detector in a uniformly accelerated cavity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Resting and accelerated spectra, one CSV row per mode.
    Modes(Flags),
    /// Decay probability at a single acceleration (0 for a resting cavity).
    Point(Flags),
    /// Decay probability over an acceleration grid, as CSV.
    Sweep(Flags),
}

#[derive(Debug, Default, Args)]
struct Flags {
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    /// Acceleration for `modes` and `point`.
    #[arg(long)]
    accel: Option<f64>,
    #[arg(long)]
    accel_min: Option<f64>,
    #[arg(long)]
    accel_max: Option<f64>,
    #[arg(long)]
    accel_steps: Option<usize>,
    /// Resting-cavity mode the detector gap is tuned to.
    #[arg(long)]
    mode_n: Option<usize>,
    /// center, nodes, node:J or offset:X
    #[arg(long)]
    placement: Option<String>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    k_max: Option<usize>,
    /// Start from the settings of figure 1 to 5.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    figure: Option<u8>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    verbose: bool,
}

/// Every setting a run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub length: f64,
    pub mass: f64,
    pub accel: f64,
    pub accel_min: f64,
    pub accel_max: f64,
    pub accel_steps: usize,
    pub mode_n: usize,
    pub placement: PlacementSet,
    pub tau: f64,
    pub epsilon: f64,
    pub k_max: usize,
    pub output: Option<PathBuf>,
    pub verbose: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            length: 1.0,
            mass: 1.0,
            accel: 1.0,
            accel_min: 1.8 / 400.0,
            accel_max: 1.8,
            accel_steps: 400,
            mode_n: 2,
            placement: PlacementSet::Center,
            tau: 50.0,
            epsilon: 1.0,
            k_max: 32,
            output: None,
            verbose: false,
        }
    }
}

const KEYS: [&str; 12] = [
    "length",
    "mass",
    "accel",
    "accel_min",
    "accel_max",
    "accel_steps",
    "mode_n",
    "placement",
    "tau",
    "epsilon",
    "k_max",
    "output",
];

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse '{value}' for {key}")))
}

impl RunConfig {
    pub fn from_figure(figure: Figure) -> Self {
        let p = figure.preset();
        Self {
            length: p.length,
            mass: p.mass,
            accel_min: p.accel_min,
            accel_max: p.accel_max,
            accel_steps: p.accel_steps,
            mode_n: p.mode_n,
            placement: p.placements,
            tau: p.tau,
            epsilon: p.epsilon,
            k_max: p.k_max,
            ..Self::default()
        }
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "length" => self.length = parse_value(key, value)?,
            "mass" => self.mass = parse_value(key, value)?,
            "accel" => self.accel = parse_value(key, value)?,
            "accel_min" => self.accel_min = parse_value(key, value)?,
            "accel_max" => self.accel_max = parse_value(key, value)?,
            "accel_steps" => self.accel_steps = parse_value(key, value)?,
            "mode_n" => self.mode_n = parse_value(key, value)?,
            "placement" => {
                self.placement = value
                    .parse()
                    .map_err(|e: Error| CliError::Config(e.to_string()))?
            }
            "tau" => self.tau = parse_value(key, value)?,
            "epsilon" => self.epsilon = parse_value(key, value)?,
            "k_max" => self.k_max = parse_value(key, value)?,
            "output" => self.output = Some(PathBuf::from(value.trim())),
            _ => return Err(CliError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Applies a `key = value` file. Blank lines and lines starting with `#`
    /// are skipped; unknown or repeated keys are errors.
    pub fn apply_config_text(&mut self, text: &str) -> CliResult<()> {
        let mut seen = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected 'key = value'", n + 1))
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(CliError::Config(format!(
                    "line {}: unknown key '{key}'",
                    n + 1
                )));
            }
            if seen.contains(&key) {
                return Err(CliError::Config(format!(
                    "line {}: '{key}' given twice",
                    n + 1
                )));
            }
            seen.push(key);
            self.set(key, value).map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("line {}: {m}", n + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    fn apply_flags(&mut self, f: &Flags) -> CliResult<()> {
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = f.$field {
                    self.$field = v;
                }
            )*};
        }
        take!(
            length,
            mass,
            accel,
            accel_min,
            accel_max,
            accel_steps,
            mode_n,
            tau,
            epsilon,
            k_max
        );
        if let Some(p) = &f.placement {
            self.set("placement", p)?;
        }
        if let Some(o) = &f.output {
            self.output = Some(o.clone());
        }
        self.verbose |= f.verbose;
        Ok(())
    }

    /// Settings that determine a sweep's CSV, one `key = value` per line.
    /// Feeding these lines back as a config file reproduces the sweep.
    pub fn sweep_echo(&self) -> Vec<String> {
        vec![
            format!("length = {}", self.length),
            format!("mass = {}", self.mass),
            format!("accel_min = {}", self.accel_min),
            format!("accel_max = {}", self.accel_max),
            format!("accel_steps = {}", self.accel_steps),
            format!("mode_n = {}", self.mode_n),
            format!("placement = {}", self.placement),
            format!("tau = {}", self.tau),
            format!("epsilon = {}", self.epsilon),
            format!("k_max = {}", self.k_max),
        ]
    }

    pub fn sweep_plan(&self) -> CliResult<SweepPlan> {
        if !(self.accel_min.is_finite() && self.accel_max.is_finite()) {
            return Err(CliError::Config(
                "acceleration bounds must be finite".into(),
            ));
        }
        if self.accel_steps == 0 {
            return Err(CliError::Config("accel_steps must be >= 1".into()));
        }
        if self.accel_steps > 1 && !(self.accel_max > self.accel_min) {
            return Err(CliError::Config(format!(
                "accel_max = {} must exceed accel_min = {}",
                self.accel_max, self.accel_min
            )));
        }
        let plan = SweepPlan {
            length: self.length,
            mass: self.mass,
            accels: linear_grid(self.accel_min, self.accel_max, self.accel_steps),
            mode_n: self.mode_n,
            placements: self.placement,
            tau: self.tau,
            epsilon: self.epsilon,
            k_max: self.k_max,
        };
        plan.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(plan)
    }

    fn cavity(&self) -> CliResult<CavityGeometry> {
        CavityGeometry::new(self.length, self.mass).map_err(|e| CliError::Config(e.to_string()))
    }

    fn rindler(&self) -> CliResult<RindlerGeometry> {
        RindlerGeometry::new(self.cavity()?, self.accel)
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

fn resolve(flags: &Flags) -> CliResult<RunConfig> {
    let mut config = match flags.figure {
        Some(n) => {
            RunConfig::from_figure(Figure::from_number(n).expect("range checked by the parser"))
        }
        None => RunConfig::default(),
    };
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        config.apply_config_text(&text)?;
    }
    config.apply_flags(flags)?;
    Ok(config)
}

fn csv_number(v: f64) -> String {
    format!("{v:.11e}")
}

fn header(lines: &[String]) -> String {
    let mut out = format!("# rindler-purcell v{CSV_VERSION}\n");
    for l in lines {
        let _ = writeln!(out, "# {l}");
    }
    out
}

/// Spectrum table at `accel`.
pub fn modes_csv(config: &RunConfig) -> CliResult<String> {
    let cavity = config.cavity()?;
    let geom = config.rindler()?;
    if config.k_max == 0 {
        return Err(CliError::Config("k_max must be >= 1".into()));
    }
    let modes = geom.modes(config.k_max)?;
    let mut out = header(&[
        format!("length = {}", config.length),
        format!("mass = {}", config.mass),
        format!("accel = {}", config.accel),
        format!("k_max = {}", config.k_max),
    ]);
    out.push_str("k,omega_inertial,Omega,shift,method\n");
    for m in &modes {
        let omega = cavity.mode_frequency(m.k())?;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            m.k(),
            csv_number(omega),
            csv_number(m.omega()),
            csv_number((m.omega() - omega) / omega),
            m.route().name()
        );
    }
    Ok(out)
}

/// Single probability at `accel` for the single placement in `config`.
/// Returns the value line and, verbosely, the per-mode breakdown.
pub fn point_report(config: &RunConfig) -> CliResult<(String, Vec<String>)> {
    let cavity = config.cavity()?;
    let placements = config.placement.placements(config.mode_n)?;
    if placements.len() != 1 {
        return Err(CliError::Config(
            "point needs a single placement (center, node:J or offset:X)".into(),
        ));
    }
    if config.k_max < config.mode_n {
        return Err(CliError::Config(format!(
            "k_max = {} does not reach the resonant mode {}",
            config.k_max, config.mode_n
        )));
    }
    let det = DetectorConfig::resonant(
        &cavity,
        config.mode_n,
        placements[0],
        config.tau,
        config.epsilon,
    )?;
    let truncation = Truncation::with_k_max(config.k_max);
    let (result, method) = if config.accel == 0.0 {
        (cavity.decay_probability_rest(&det, truncation)?, "rest")
    } else {
        let geom = config.rindler()?;
        let x = placements[0].offset(config.length)?;
        if x.abs() >= 0.5 * config.length {
            return Err(CliError::Config(format!(
                "placement offset {x} is not inside the cavity"
            )));
        }
        let modes = geom.modes(config.k_max)?;
        let method = modes.first().map_or("", |m| m.route().name());
        (
            decay_probability_accelerated(&geom, &modes, &det, truncation)?,
            method,
        )
    };
    let mut detail = vec![format!(
        "# method = {method}, converged = {}",
        result.converged
    )];
    detail.push("k,Omega,term".into());
    detail.extend(
        result
            .terms
            .iter()
            .map(|t| format!("{},{},{}", t.k, csv_number(t.frequency), csv_number(t.term))),
    );
    Ok((csv_number(result.probability), detail))
}

/// Sweep CSV. Failed grid points are written as `NaN` and reported in the
/// returned list.
pub fn sweep_csv(config: &RunConfig) -> CliResult<(String, Vec<String>)> {
    let plan = config.sweep_plan()?;
    let result = sweep::run_sweep(&plan)?;
    let mut out = header(&config.sweep_echo());
    out.push('a');
    for p in &result.placements {
        let _ = write!(out, ",P_{p}");
    }
    out.push('\n');
    for point in &result.points {
        out.push_str(&csv_number(point.accel));
        for c in 0..result.placements.len() {
            let v = point.values.as_ref().map_or(f64::NAN, |v| v[c]);
            let _ = write!(out, ",{}", csv_number(v));
        }
        out.push('\n');
    }
    let mut notes: Vec<String> = result
        .failures()
        .map(|(a, e)| format!("a = {a}: {e}"))
        .collect();
    let unconverged = result
        .points
        .iter()
        .filter(|p| p.values.is_ok() && !p.converged)
        .count();
    if config.verbose && unconverged > 0 {
        notes.push(format!(
            "{unconverged} of {} points did not meet the mode-sum tolerance within k_max = {}",
            result.points.len(),
            config.k_max
        ));
    }
    Ok((out, notes))
}

fn emit(config: &RunConfig, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match &config.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

/// Runs one command line. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(&cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Modes(flags) => {
            let config = resolve(flags)?;
            let text = modes_csv(&config)?;
            emit(&config, &text, stdout)
        }
        Command::Point(flags) => {
            let config = resolve(flags)?;
            let (value, detail) = point_report(&config)?;
            if config.verbose {
                for line in &detail {
                    let _ = writeln!(stderr, "{line}");
                }
            }
            emit(&config, &format!("{value}\n"), stdout)
        }
        Command::Sweep(flags) => {
            let config = resolve(flags)?;
            if config.verbose {
                let _ = writeln!(
                    stderr,
                    "sweeping {} points over a in [{}, {}]",
                    config.accel_steps, config.accel_min, config.accel_max
                );
            }
            let (text, notes) = sweep_csv(&config)?;
            emit(&config, &text, stdout)?;
            let failures = notes.iter().filter(|n| n.starts_with("a = ")).count();
            for n in &notes {
                let _ = writeln!(stderr, "{n}");
            }
            if failures > 0 {
                return Err(CliError::Numerical(format!(
                    "{failures} grid points failed"
                )));
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_parsing() {
        let mut c = RunConfig::default();
        c.apply_config_text("# comment\n\nmass = 0.5\n  tau=12 \nplacement = nodes\n")
            .unwrap();
        assert_eq!(c.mass, 0.5);
        assert_eq!(c.tau, 12.0);
        assert_eq!(c.placement, PlacementSet::AllNodes);
        assert!(RunConfig::default().apply_config_text("mas = 1").is_err());
        assert!(RunConfig::default().apply_config_text("mass 1").is_err());
        assert!(RunConfig::default().apply_config_text("mass = x").is_err());
        assert!(RunConfig::default()
            .apply_config_text("tau = 1\ntau = 2")
            .is_err());
    }

    #[test]
    fn echo_round_trips() {
        let mut c = RunConfig::from_figure(Figure::NodesMode4);
        c.tau = 0.1 + 0.2;
        let text = c.sweep_echo().join("\n");
        let mut d = RunConfig::default();
        d.apply_config_text(&text).unwrap();
        assert_eq!(d.sweep_plan().unwrap(), c.sweep_plan().unwrap());
    }

    #[test]
    fn flags_override_file() {
        let flags = Flags {
            mass: Some(3.0),
            ..Flags::default()
        };
        let mut c = RunConfig::default();
        c.apply_config_text("mass = 2\nlength = 2").unwrap();
        c.apply_flags(&flags).unwrap();
        assert_eq!(c.mass, 3.0);
        assert_eq!(c.length, 2.0);
    }

    #[test]
    fn number_format() {
        assert_eq!(csv_number(0.0035), "3.50000000000e-3");
        assert_eq!(csv_number(12.5), "1.25000000000e1");
    }

    #[test]
    fn bad_geometry_is_config_error() {
        let mut c = RunConfig::default();
        c.accel = 2.0;
        assert_eq!(modes_csv(&c).unwrap_err().exit_code(), 1);
        assert_eq!(point_report(&c).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn massless_modes_are_closed_form() {
        let mut c = RunConfig::default();
        c.mass = 0.0;
        c.k_max = 3;
        let text = modes_csv(&c).unwrap();
        assert_eq!(
            text.lines().filter(|l| l.ends_with(",closed-form")).count(),
            3
        );
    }
}
