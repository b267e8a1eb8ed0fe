//! Configuration, sweeps and report rendering behind the `gainatom` binary.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use gainatom_core::balance::{self, CriticalPumps};
use gainatom_core::bloch::{self, BlochState};
use gainatom_core::params::{self, derive_rates, RegimeWarning};
use gainatom_core::{
    oracle, response, semiclassical, AtomParams, DerivedRates, DriveParams, GammaOmegaMode,
    OracleCheck, RegimeThresholds, ResponsePoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    #[default]
    Detuning,
    Pump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Grid over detuning or pump rate, both in units of γ₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 2 {
            bail!("sweep.n_points = {} must be at least 2", self.n_points);
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.min >= self.max {
            bail!(
                "sweep needs finite min < max, got [{}, {}]",
                self.min,
                self.max
            );
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| {
                if i + 1 == self.n_points {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

/// Time grid for the `bloch` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochSpec {
    /// Initial excited population.
    pub initial_excited: f64,
    /// End time in units of 1/γ₀.
    pub t_end: f64,
    /// Step in units of 1/γ₀.
    pub dt: f64,
    /// Write every `every`-th step.
    pub every: usize,
}

impl Default for BlochSpec {
    fn default() -> Self {
        Self {
            initial_excited: 0.0,
            t_end: 10.0,
            dt: 1e-3,
            every: 100,
        }
    }
}

fn default_omega0() -> f64 {
    AtomParams::default().omega0
}
fn default_omega_u() -> f64 {
    AtomParams::default().omega_u
}
fn default_gamma0() -> f64 {
    AtomParams::default().gamma0
}
fn default_gamma_u() -> f64 {
    AtomParams::default().gamma_u
}
fn default_rabi_probe() -> f64 {
    0.01
}

/// Everything needed to reproduce one run.
///
/// Frequencies and rates are in natural units; detuning and the sweep grid
/// are in units of `gamma0`. `pump_rate`, when present, takes precedence over
/// `rabi_pump`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_omega0")]
    pub omega0: f64,
    #[serde(default = "default_omega_u")]
    pub omega_u: f64,
    #[serde(default = "default_gamma0")]
    pub gamma0: f64,
    #[serde(default)]
    pub gamma_nr: f64,
    #[serde(default = "default_gamma_u")]
    pub gamma_u: f64,
    #[serde(default = "default_rabi_probe")]
    pub rabi_probe: f64,
    #[serde(default)]
    pub rabi_pump: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pump_rate: Option<f64>,
    #[serde(default)]
    pub detuning: f64,
    #[serde(default)]
    pub gamma_omega_mode: GammaOmegaMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<BlochSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config uses defaults")
    }
}

/// Command-line overrides, applied on top of the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    #[arg(long, global = true)]
    pub omega0: Option<f64>,
    #[arg(long, global = true)]
    pub omega_u: Option<f64>,
    #[arg(long, global = true)]
    pub gamma0: Option<f64>,
    #[arg(long, global = true)]
    pub gamma_nr: Option<f64>,
    #[arg(long, global = true)]
    pub gamma_u: Option<f64>,
    #[arg(long, global = true)]
    pub rabi_probe: Option<f64>,
    #[arg(long, global = true)]
    pub rabi_pump: Option<f64>,
    #[arg(long, global = true)]
    pub pump_rate: Option<f64>,
    /// Probe detuning in units of γ₀.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub detuning: Option<f64>,
    #[arg(long, global = true, value_parser = parse_mode)]
    pub mode: Option<GammaOmegaMode>,
    #[arg(long, global = true, value_enum)]
    pub variable: Option<SweepVariable>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub max: Option<f64>,
    #[arg(long, global = true)]
    pub n_points: Option<usize>,
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

fn parse_mode(s: &str) -> std::result::Result<GammaOmegaMode, String> {
    match s {
        "flat" => Ok(GammaOmegaMode::Flat),
        "cubic" | "cubic_free_space" => Ok(GammaOmegaMode::CubicFreeSpace),
        _ => Err(format!("unknown mode `{s}` (expected flat or cubic)")),
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).context("parsing config")?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml_str(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Apply overrides. Sweep overrides create a sweep table from
    /// `default_sweep` if the config has none.
    pub fn apply(&mut self, o: &Overrides, default_sweep: SweepSpec) {
        macro_rules! set {
            ($field:ident) => {
                if let Some(v) = o.$field {
                    self.$field = v;
                }
            };
        }
        set!(omega0);
        set!(omega_u);
        set!(gamma0);
        set!(gamma_nr);
        set!(gamma_u);
        set!(rabi_probe);
        set!(rabi_pump);
        set!(detuning);
        if let Some(p) = o.pump_rate {
            self.pump_rate = Some(p);
        }
        if let Some(m) = o.mode {
            self.gamma_omega_mode = m;
        }
        if o.variable.is_some() || o.min.is_some() || o.max.is_some() || o.n_points.is_some() {
            let s = self.sweep.get_or_insert(default_sweep);
            if let Some(v) = o.variable {
                s.variable = v;
            }
            if let Some(v) = o.min {
                s.min = v;
            }
            if let Some(v) = o.max {
                s.max = v;
            }
            if let Some(v) = o.n_points {
                s.n_points = v;
            }
        }
        if let Some(p) = &o.output {
            self.output.path = Some(p.clone());
        }
        if let Some(f) = o.format {
            self.output.format = f;
        }
    }

    pub fn atom(&self) -> AtomParams {
        AtomParams {
            omega0: self.omega0,
            omega_u: self.omega_u,
            gamma0: self.gamma0,
            gamma_nr: self.gamma_nr,
            gamma_u: self.gamma_u,
        }
    }

    /// Drive at `detuning_over_gamma0`, with the configured pump.
    pub fn drive_at(&self, detuning_over_gamma0: f64) -> DriveParams {
        let atom = self.atom();
        let d = DriveParams::at_detuning(
            &atom,
            detuning_over_gamma0 * self.gamma0,
            self.rabi_probe,
            self.rabi_pump,
        );
        match self.pump_rate {
            Some(p) => d.with_pump_rate(&atom, p),
            None => d,
        }
    }

    pub fn drive(&self) -> DriveParams {
        self.drive_at(self.detuning)
    }

    pub fn rates(&self) -> Result<DerivedRates> {
        Ok(derive_rates(
            &self.atom(),
            &self.drive(),
            self.gamma_omega_mode,
        )?)
    }

    pub fn validate(&self) -> Result<()> {
        self.atom().validate()?;
        self.drive().validate()?;
        if let Some(p) = self.pump_rate {
            if !p.is_finite() || p < 0.0 {
                bail!("pump_rate = {p} must be finite and ≥ 0");
            }
        }
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        if let Some(b) = &self.bloch {
            if !(0.0..=1.0).contains(&b.initial_excited) {
                bail!(
                    "bloch.initial_excited = {} outside [0, 1]",
                    b.initial_excited
                );
            }
        }
        self.rates()?;
        Ok(())
    }

    /// Sweep for `variable`, or `default` if the config has none.
    fn sweep_for(&self, variable: SweepVariable, default: SweepSpec) -> Result<SweepSpec> {
        let s = self.sweep.unwrap_or(default);
        s.validate()?;
        if s.variable != variable {
            bail!(
                "this subcommand sweeps `{:?}` but the config sweeps `{:?}`",
                variable,
                s.variable
            );
        }
        Ok(s)
    }

    pub fn warnings(&self) -> Result<Vec<RegimeWarning>> {
        let rates = self.rates()?;
        Ok(params::regime_warnings(
            &self.atom(),
            &self.drive(),
            &rates,
            &RegimeThresholds::default(),
        ))
    }
}

pub const DEFAULT_SPECTRUM_SWEEP: SweepSpec = SweepSpec {
    variable: SweepVariable::Detuning,
    min: -4.0,
    max: 4.0,
    n_points: 201,
};

pub const DEFAULT_PUMP_SWEEP: SweepSpec = SweepSpec {
    variable: SweepVariable::Pump,
    min: 0.0,
    max: 4.0,
    n_points: 201,
};

fn metadata(cfg: &RunConfig, out: &mut String) -> Result<()> {
    out.push_str("# gainatom ");
    out.push_str(env!("CARGO_PKG_VERSION"));
    out.push('\n');
    for line in cfg.to_toml_string()?.lines() {
        if line.is_empty() {
            continue;
        }
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    Ok(())
}

/// Response at every detuning of the sweep, in grid order.
pub fn spectrum_rows(cfg: &RunConfig) -> Result<Vec<ResponsePoint>> {
    cfg.validate()?;
    let sweep = cfg.sweep_for(SweepVariable::Detuning, DEFAULT_SPECTRUM_SWEEP)?;
    let atom = cfg.atom();
    sweep
        .grid()
        .into_par_iter()
        .map(|x| {
            let drive = cfg.drive_at(x);
            let rates = derive_rates(&atom, &drive, cfg.gamma_omega_mode)?;
            Ok(response::response_point(&rates, &drive))
        })
        .collect()
}

pub fn run_spectrum(cfg: &RunConfig) -> Result<String> {
    let rows = spectrum_rows(cfg)?;
    match cfg.output.format {
        Format::Json => Ok(serde_json::to_string_pretty(&serde_json::json!({
            "config": cfg,
            "rows": rows,
        }))?),
        Format::Csv => {
            let mut out = String::new();
            metadata(cfg, &mut out)?;
            out.push_str("detuning_over_gamma0,sigma_sc,sigma_abs,sigma_ext,w_sc,w_abs,w_inc\n");
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.detuning, r.sigma_sc, r.sigma_abs, r.sigma_ext, r.w_sc, r.w_abs, r.w_inc
                )?;
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpRow {
    pub pump_over_gamma0: f64,
    pub sigma_sc: f64,
    pub sigma_abs: f64,
    pub sigma_ext: f64,
}

/// Cross-sections at every pump rate of the sweep, at the configured detuning.
pub fn pump_rows(cfg: &RunConfig) -> Result<Vec<PumpRow>> {
    cfg.validate()?;
    let sweep = cfg.sweep_for(SweepVariable::Pump, DEFAULT_PUMP_SWEEP)?;
    let base = cfg.rates()?;
    Ok(sweep
        .grid()
        .into_par_iter()
        .map(|p| {
            let r = base.with_pump_rate(p * cfg.gamma0);
            PumpRow {
                pump_over_gamma0: p,
                sigma_sc: response::scattering_cross_section(&r),
                sigma_abs: response::absorption_cross_section(&r),
                sigma_ext: response::extinction_cross_section(&r),
            }
        })
        .collect())
}

/// Critical pumps in units of γ₀.
pub fn critical_pumps(cfg: &RunConfig) -> Result<CriticalPumps> {
    let c = balance::critical_pumps_closed_form(cfg.gamma_nr, cfg.gamma0)?;
    Ok(CriticalPumps {
        p_abs_zero: c.p_abs_zero / cfg.gamma0,
        p_ext_zero: c.p_ext_zero / cfg.gamma0,
    })
}

pub fn run_pumpsweep(cfg: &RunConfig) -> Result<String> {
    let rows = pump_rows(cfg)?;
    let crit = critical_pumps(cfg)?;
    match cfg.output.format {
        Format::Json => Ok(serde_json::to_string_pretty(&serde_json::json!({
            "config": cfg,
            "rows": rows,
            "critical_pumps": crit,
        }))?),
        Format::Csv => {
            let mut out = String::new();
            metadata(cfg, &mut out)?;
            out.push_str("P_over_gamma0,sigma_sc,sigma_abs,sigma_ext\n");
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{}",
                    r.pump_over_gamma0, r.sigma_sc, r.sigma_abs, r.sigma_ext
                )?;
            }
            writeln!(out, "# {}", serde_json::to_string(&crit)?)?;
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub p_abs_zero: f64,
    pub p_ext_zero: f64,
    /// Same crossings from the bracketing root solver.
    pub p_abs_zero_root: f64,
    pub p_ext_zero_root: f64,
    pub unitarity_residual_at_resonance: f64,
}

pub fn balance_report(cfg: &RunConfig) -> Result<BalanceReport> {
    cfg.validate()?;
    let crit = critical_pumps(cfg)?;
    let rates = cfg.rates()?;
    let root = balance::critical_pumps_numeric(&rates)?;
    let resonant = rates.at_resonance();
    let drive = DriveParams {
        omega_probe: resonant.omega,
        ..cfg.drive()
    };
    Ok(BalanceReport {
        p_abs_zero: crit.p_abs_zero,
        p_ext_zero: crit.p_ext_zero,
        p_abs_zero_root: root.p_abs_zero / cfg.gamma0,
        p_ext_zero_root: root.p_ext_zero / cfg.gamma0,
        unitarity_residual_at_resonance: balance::unitarity_residual(&resonant, &drive),
    })
}

pub fn run_balance(cfg: &RunConfig) -> Result<String> {
    Ok(serde_json::to_string_pretty(&balance_report(cfg)?)?)
}

pub fn run_bloch(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let spec = cfg.bloch.unwrap_or_default();
    let rates = cfg.rates()?;
    let init = BlochState::with_excited_population(spec.initial_excited)?;
    let traj = bloch::integrate_trajectory(
        &rates,
        &init,
        spec.t_end / cfg.gamma0,
        spec.dt / cfg.gamma0,
        spec.every,
    )?;
    let mut out = String::new();
    if cfg.output.format == Format::Json {
        return Ok(serde_json::to_string_pretty(&serde_json::json!({
            "config": cfg,
            "trajectory": traj,
        }))?);
    }
    metadata(cfg, &mut out)?;
    out.push_str("t_gamma0,rho_gg,rho_ee,re_rho_eg,im_rho_eg,rho_ee_analytic\n");
    for (t, s) in &traj {
        let exact = bloch::analytic_evolution(&rates, spec.initial_excited, *t)?;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            t * cfg.gamma0,
            s.rho_gg,
            s.rho_ee,
            s.rho_eg.re,
            s.rho_eg.im,
            exact.rho_ee
        )?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub detuning_over_gamma0: f64,
    pub w_sc: f64,
    pub w_coh: f64,
    pub ratio: f64,
    /// `(P − γ)²/Γ²`.
    pub factor: f64,
}

pub fn compare_rows(cfg: &RunConfig) -> Result<Vec<CompareRow>> {
    cfg.validate()?;
    let sweep = cfg.sweep_for(SweepVariable::Detuning, DEFAULT_SPECTRUM_SWEEP)?;
    let atom = cfg.atom();
    sweep
        .grid()
        .into_par_iter()
        .map(|x| {
            let drive = cfg.drive_at(x);
            let rates = derive_rates(&atom, &drive, cfg.gamma_omega_mode)?;
            let w_sc = response::scattered_power(&rates, &drive);
            let w_coh = semiclassical::coherent_power(&rates, &drive);
            Ok(CompareRow {
                detuning_over_gamma0: x,
                w_sc,
                w_coh,
                ratio: w_coh / w_sc,
                factor: semiclassical::discrepancy_factor(&rates),
            })
        })
        .collect()
}

pub fn run_compare(cfg: &RunConfig) -> Result<String> {
    let rows = compare_rows(cfg)?;
    if cfg.output.format == Format::Json {
        return Ok(serde_json::to_string_pretty(&serde_json::json!({
            "config": cfg,
            "rows": rows,
        }))?);
    }
    let mut out = String::new();
    metadata(cfg, &mut out)?;
    out.push_str("detuning_over_gamma0,w_sc,w_coh,ratio,factor\n");
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.detuning_over_gamma0, r.w_sc, r.w_coh, r.ratio, r.factor
        )?;
    }
    Ok(out)
}

/// Oracle report and whether every target passed.
pub fn run_oracle(cfg: &RunConfig) -> Result<(String, bool)> {
    cfg.atom().validate()?;
    let checks: Vec<OracleCheck> = oracle::run_oracle_suite(&cfg.atom())?;
    let pass = checks.iter().all(|c| c.pass);
    Ok((serde_json::to_string_pretty(&checks)?, pass))
}

/// Write `text` to the configured path, or return it for stdout.
pub fn emit(cfg: &RunConfig, text: &str) -> Result<Option<String>> {
    match &cfg.output.path {
        Some(p) => {
            std::fs::write(p, text).with_context(|| format!("writing {p}"))?;
            Ok(None)
        }
        None => Ok(Some(text.to_owned())),
    }
}
