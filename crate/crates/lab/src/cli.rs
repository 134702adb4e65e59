//! The `eckhaus` command line: one subcommand and one TOML config per run.
//!
//! Every run writes into the configured output directory:
//! `config.resolved.toml` (all defaults expanded), `manifest.json` and the
//! command's data files. Exit codes: 0 success, 2 configuration error,
//! 3 numerical failure or failed verdict.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use eckhaus_core::bounds::scan_max_re_plus;
use eckhaus_core::expansion::expansion_coeffs_fd;
use eckhaus_core::symbol::damped_dispersion;
use eckhaus_core::{
    check_spectral_bounds, classify_region, eval_dispersion, expansion_coeffs, sideband_threshold,
    AnsatzCoefficients, CglParams,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_ansatz_V, x_grid, AnsatzOrder};
use crate::cgl::{self, CglSystem};
use crate::io::{self, AnsatzRecord, Dtype, ExpansionRecord, ParamsRecord};
use crate::kdv::{self, KdvProfile, KdvSystem};
use crate::modulation::{ModulationState, ModulationSystem, Variables};
use crate::stepper::{simulate_with, StepperConfig};
use crate::validation::{
    cgl_end_to_end, failure_demo, run_validation, EndToEndConfig, SweepPlan, ValidationReport,
};
use crate::{LabError, Result, SpectralField, SpectralGrid};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "eckhaus", version, about = "Wave-train modulation experiments for the Ginzburg-Landau equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dispersion curves, thresholds and region summary.
    Spectrum { config: PathBuf },
    /// One CGL, modulation or KdV simulation.
    Simulate { config: PathBuf },
    /// ε-sweep, failure run or end-to-end CGL comparison.
    Validate { config: PathBuf },
    /// Ansatz and expansion coefficient tables.
    Coeffs { config: PathBuf },
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn default_epsilon() -> Option<f64> {
    Some(0.1)
}

/// (α, β) with either ε (marginal regime) or ζ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub zeta: Option<f64>,
}

impl ParamsConfig {
    pub fn resolve(&self) -> Result<CglParams> {
        let p = match (self.epsilon, self.zeta) {
            (_, Some(z)) => CglParams::from_wavenumber(self.alpha, self.beta, z),
            (Some(e), None) => CglParams::marginal(self.alpha, self.beta, e),
            (None, None) => return Err(LabError::Config("one of epsilon or zeta is required".into())),
        };
        p.map_err(|e| LabError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub params: ParamsConfig,
    #[serde(default = "SpectrumConfig::default_kmax")]
    pub kmax: f64,
    /// Rows of the dispersion table.
    #[serde(default = "SpectrumConfig::default_points")]
    pub points: usize,
    /// Weight decay rate for the damped curves.
    #[serde(default = "SpectrumConfig::default_eta")]
    pub eta: f64,
    /// Grid size of the bound check.
    #[serde(default = "SpectrumConfig::default_bound_points")]
    pub bound_points: usize,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

impl SpectrumConfig {
    fn default_kmax() -> f64 {
        10.0
    }
    fn default_points() -> usize {
        2001
    }
    fn default_eta() -> f64 {
        8.0
    }
    fn default_bound_points() -> usize {
        10_001
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimSystem {
    Cgl,
    Modulation,
    Kdv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialData {
    Zero,
    WaveTrain,
    /// The KdV ansatz built from `profile`; for the KdV system the profile
    /// itself.
    Ansatz,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub params: ParamsConfig,
    pub system: SimSystem,
    pub initial: InitialData,
    #[serde(default)]
    pub order: Option<AnsatzOrder>,
    #[serde(default)]
    pub profile: KdvProfile,
    #[serde(default = "SimulateConfig::default_true")]
    pub subtract_mean: bool,
    /// 2π-periods of the ξ-domain.
    #[serde(default = "SimulateConfig::default_periods")]
    pub periods: f64,
    #[serde(default = "SimulateConfig::default_n_xi")]
    pub n_xi: usize,
    #[serde(default)]
    pub stepper: StepperConfig,
    /// Write one CSV per record.
    #[serde(default = "SimulateConfig::default_true")]
    pub snapshots: bool,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

impl SimulateConfig {
    fn default_true() -> bool {
        true
    }
    fn default_periods() -> f64 {
        8.0
    }
    fn default_n_xi() -> usize {
        256
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidateMode {
    Sweep,
    Failure,
    EndToEnd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    pub mode: ValidateMode,
    #[serde(default = "ValidateConfig::default_order")]
    pub order: AnsatzOrder,
    /// Concurrent sweep points; 0 uses every core.
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub plan: SweepPlan,
    /// Sideband-region point whose sweep supplies the reference bound and
    /// the control run of a failure demonstration.
    #[serde(default = "ValidateConfig::default_reference")]
    pub reference: [f64; 2],
    #[serde(default)]
    pub end_to_end: EndToEndConfig,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

impl ValidateConfig {
    fn default_order() -> AnsatzOrder {
        AnsatzOrder::One
    }
    fn default_reference() -> [f64; 2] {
        [1.0, 0.0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffsConfig {
    pub params: ParamsConfig,
    /// Step of the finite-difference cross-check.
    #[serde(default = "CoeffsConfig::default_fd_step")]
    pub fd_step: f64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

impl CoeffsConfig {
    fn default_fd_step() -> f64 {
        1e-3
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub config: serde_json::Value,
    pub threads: usize,
    pub wall_time_s: f64,
    pub files: Vec<String>,
    pub metrics: serde_json::Value,
}

/// Exit code for an error: configuration problems and domain violations
/// give [`EXIT_CONFIG`], everything else [`EXIT_NUMERICAL`].
pub fn exit_code(e: &LabError) -> i32 {
    use eckhaus_core::Error as E;
    match e {
        LabError::Config(_) | LabError::Precondition(_) => EXIT_CONFIG,
        LabError::Core(c) => match c {
            E::NearSingular { .. } => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        },
        _ => EXIT_NUMERICAL,
    }
}

/// Machine-readable error record.
pub fn error_json(e: &LabError) -> String {
    let kind = if exit_code(e) == EXIT_CONFIG { "config" } else { "numerical" };
    serde_json::json!({ "error": { "kind": kind, "message": e.to_string() } }).to_string()
}

/// Parses a config, rejecting unknown keys.
pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))
}

fn output_dir(config_path: &Path, out: &Path) -> Result<PathBuf> {
    let dir = if out.is_absolute() {
        out.to_path_buf()
    } else {
        config_path.parent().unwrap_or(Path::new(".")).join(out)
    };
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

struct Run {
    dir: PathBuf,
    files: Vec<String>,
    start: Instant,
}

impl Run {
    fn new<T: Serialize>(config_path: &Path, out: &Path, cfg: &T) -> Result<Self> {
        let dir = output_dir(config_path, out)?;
        let text = toml::to_string(cfg).map_err(|e| LabError::Format(e.to_string()))?;
        fs::write(dir.join("config.resolved.toml"), text)?;
        Ok(Self { dir, files: vec!["config.resolved.toml".into()], start: Instant::now() })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.dir.join(name)
    }

    fn finish<T: Serialize>(mut self, command: &str, cfg: &T, threads: usize, metrics: serde_json::Value) -> Result<()> {
        self.files.push("manifest.json".into());
        let m = Manifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: serde_json::to_value(cfg).map_err(|e| LabError::Format(e.to_string()))?,
            threads,
            wall_time_s: self.start.elapsed().as_secs_f64(),
            files: self.files.clone(),
            metrics,
        };
        io::write_json(&self.dir.join("manifest.json"), &m)
    }
}

/// Runs one command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let res = match &cli.command {
        Command::Spectrum { config } => cmd_spectrum(config),
        Command::Simulate { config } => cmd_simulate(config),
        Command::Validate { config } => cmd_validate(config),
        Command::Coeffs { config } => cmd_coeffs(config),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            exit_code(&e)
        }
    }
}

pub fn cmd_spectrum(path: &Path) -> Result<i32> {
    let cfg: SpectrumConfig = load_config(path)?;
    let p = cfg.params.resolve()?;
    if cfg.points < 2 || !(cfg.kmax > 0.0) {
        return Err(LabError::Config("points ≥ 2 and kmax > 0 are required".into()));
    }
    let mut run = Run::new(path, &cfg.output, &cfg)?;
    let n = cfg.points;
    let rows = (0..n).map(|i| {
        // symmetric about k = 0 to the last bit
        let k = cfg.kmax * (2.0 * i as f64 - (n - 1) as f64) / (n - 1) as f64;
        let d = eval_dispersion(&p, k);
        let w = damped_dispersion(&p, k, cfg.eta);
        vec![
            k,
            d.lambda_plus.re,
            d.lambda_plus.im,
            d.lambda_minus.re,
            d.lambda_minus.im,
            w.lambda_plus.re,
            w.lambda_plus.im,
            w.lambda_minus.re,
            w.lambda_minus.im,
        ]
    });
    io::write_csv(
        &run.path("dispersion.csv"),
        &["k", "re_plus", "im_plus", "re_minus", "im_minus", "re_damped_plus", "im_damped_plus", "re_damped_minus", "im_damped_minus"],
        rows,
    )?;
    let verdict = classify_region(p.alpha, p.beta);
    let threshold = sideband_threshold(p.alpha, p.beta).ok();
    let bounds = check_spectral_bounds(&p, cfg.kmax, cfg.bound_points);
    let (k_max, re_max) = scan_max_re_plus(&p, cfg.kmax, cfg.bound_points);
    let summary = serde_json::json!({
        "params": ParamsRecord::from(&p),
        "region": format!("{:?}", verdict.region),
        "r_of_z": verdict.r_of_z,
        "sigma_s": threshold.map(|t| t.0),
        "zeta_s": threshold.map(|t| t.1),
        "zeta_bd_squared": threshold.map(|t| t.1 * t.1),
        "expansion": ExpansionRecord::from(&expansion_coeffs(&p)),
        "max_re_plus": { "k": k_max, "value": re_max },
        "bounds": match &bounds {
            Ok(b) => serde_json::json!({
                "holds": b.holds(),
                "minus_margin": b.minus_margin,
                "minus_margin_k": b.minus_margin_k,
                "plus_constant": b.plus_constant,
                "plus_constant_k": b.plus_constant_k,
                "violation_k": b.violation.map(|v| v.k),
            }),
            Err(e) => serde_json::json!({ "skipped": e.to_string() }),
        },
    });
    io::write_json(&run.path("summary.json"), &summary)?;
    run.finish("spectrum", &cfg, 1, summary)?;
    Ok(EXIT_OK)
}

enum Sim {
    Cgl(CglSystem, SpectralField),
    Modulation(ModulationSystem, ModulationState),
    Kdv(KdvSystem, SpectralField),
}

pub fn cmd_simulate(path: &Path) -> Result<i32> {
    let cfg: SimulateConfig = load_config(path)?;
    let p = cfg.params.resolve()?;
    if p.epsilon <= 0.0 {
        return Err(LabError::Config("simulate needs ε > 0 to size the grid".into()));
    }
    let xi = SpectralGrid::new(cfg.n_xi, 2.0 * std::f64::consts::PI * cfg.periods)
        .map_err(|e| LabError::Config(e.to_string()))?;
    let xg = x_grid(&xi, p.epsilon)?;
    let order = cfg.order.unwrap_or(AnsatzOrder::One);
    let a0 = match cfg.initial {
        InitialData::Zero => SpectralField::zeros(xi, true),
        _ => cfg.profile.sample(xi, cfg.subtract_mean),
    };
    let ansatz = || -> Result<ModulationState> {
        let c = AnsatzCoefficients::new(&p)?;
        build_ansatz_V(&a0, &c, &p, order, xg)
    };
    let sim = match cfg.system {
        SimSystem::Cgl => {
            let g = cgl::cgl_grid(&p, &xg)?;
            let u0 = match cfg.initial {
                InitialData::Zero => SpectralField::zeros(g, false),
                InitialData::WaveTrain => cgl::wave_train(&p, g, 0.0)?,
                InitialData::Ansatz => cgl::build_modulated_cgl(&p, &ansatz()?, 0.0, 0.0, 0.0)?,
            };
            Sim::Cgl(CglSystem::new(p, g), u0)
        }
        SimSystem::Modulation => {
            let v0 = match cfg.initial {
                InitialData::Zero | InitialData::WaveTrain => ModulationState::zeros(xg),
                InitialData::Ansatz => ansatz()?,
            };
            Sim::Modulation(ModulationSystem::new(p, xg, Variables::LocalWaveNumber), v0)
        }
        SimSystem::Kdv => {
            let c = AnsatzCoefficients::new(&p)?;
            let a = match cfg.initial {
                InitialData::WaveTrain => SpectralField::zeros(xi, true),
                _ => a0.clone(),
            };
            let guard = 100.0 * a.sup().max(1e-300);
            Sim::Kdv(KdvSystem::from_coefficients(xi, &c, guard), a)
        }
    };
    let mut run = Run::new(path, &cfg.output, &cfg)?;
    if cfg.snapshots {
        fs::create_dir_all(run.dir.join("trajectory"))?;
    }
    let mut times = Vec::new();
    let mut drift = 0.0f64;
    let mut conservation = (0.0f64, 0.0f64);
    let mut idx = 0usize;
    let z2 = p.zeta * p.zeta;
    let mut snap_files = Vec::new();
    let dir = run.dir.clone();
    let mut snap = |idx: usize| -> PathBuf {
        let name = format!("trajectory/rec_{idx:05}.csv");
        snap_files.push(name.clone());
        dir.join(name)
    };
    let last = match &sim {
        Sim::Cgl(sys, u0) => {
            let g = *u0.grid();
            let wave = cfg.initial == InitialData::WaveTrain;
            let end = simulate_with(sys, vec![u0.coeffs().to_vec()], cfg.stepper, |t, u| {
                let f = SpectralField::from_coeffs(g, u[0].clone(), false)?;
                if wave {
                    drift = drift.max(f.sub(&cgl::wave_train(&p, g, t)?)?.sup());
                }
                if cfg.snapshots {
                    io::write_cgl_csv(&snap(idx), &f)?;
                }
                times.push(t * z2);
                idx += 1;
                Ok(())
            })?;
            SpectralField::from_coeffs(g, end[0].clone(), false)?
        }
        Sim::Modulation(sys, v0) => {
            let end = simulate_with(sys, v0.to_state(), cfg.stepper, |t, u| {
                let v = ModulationState::from_state(xg, u)?;
                if cfg.initial != InitialData::Ansatz {
                    drift = drift.max(v.sup());
                }
                if cfg.snapshots {
                    io::write_modulation_csv(&snap(idx), &v)?;
                }
                times.push(t);
                idx += 1;
                Ok(())
            })?;
            ModulationState::from_state(xg, &end)?.psi
        }
        Sim::Kdv(sys, a) => {
            let (m0, p0) = (kdv::mass(a), kdv::momentum(a));
            let end = simulate_with(sys, vec![a.coeffs().to_vec()], cfg.stepper, |t, u| {
                let f = SpectralField::from_coeffs(xi, u[0].clone(), true)?;
                conservation.0 = conservation.0.max((kdv::mass(&f) - m0).abs());
                conservation.1 = conservation.1.max((kdv::momentum(&f) - p0).abs());
                if cfg.snapshots {
                    let pts = xi.points();
                    let vals = f.to_real();
                    io::write_csv(&snap(idx), &["xi", "a"], pts.iter().zip(&vals).map(|(x, v)| vec![*x, *v]))?;
                }
                times.push(t);
                idx += 1;
                Ok(())
            })?;
            SpectralField::from_coeffs(xi, end[0].clone(), true)?
        }
    };
    run.files.extend(snap_files);
    io::write_field_binary(&run.path("final.bin"), &last, Dtype::Fourier)?;
    io::write_field_csv(&run.path("final_fourier.csv"), &last)?;
    io::write_csv(&run.path("times.csv"), &["t"], times.iter().map(|t| vec![*t]))?;
    let metrics = serde_json::json!({
        "params": ParamsRecord::from(&p),
        "records": times.len(),
        "drift": (cfg.initial == InitialData::WaveTrain || cfg.initial == InitialData::Zero).then_some(drift),
        "mass_drift": (cfg.system == SimSystem::Kdv).then_some(conservation.0),
        "momentum_drift": (cfg.system == SimSystem::Kdv).then_some(conservation.1),
        "grid": { "n": last.grid().n(), "length": last.grid().length() },
    });
    run.finish("simulate", &cfg, 1, metrics)?;
    Ok(EXIT_OK)
}

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| LabError::Config(format!("thread pool: {e}")))
}

fn write_sweep_files(run: &mut Run, rep: &ValidationReport, prefix: &str) -> Result<()> {
    io::write_json(&run.path(&format!("{prefix}report.json")), rep)?;
    io::write_csv(
        &run.path(&format!("{prefix}summary.csv")),
        &["epsilon", "max_sup_error", "max_hm_error", "max_analytic_error", "max_residual_sup", "max_residual_hm", "c_hat"],
        rep.points.iter().enumerate().map(|(i, p)| {
            vec![
                p.epsilon,
                p.max_sup_error,
                p.max_hm_error,
                p.max_analytic_error,
                p.max_residual_sup,
                p.max_residual_hm,
                rep.energy.get(i).map_or(f64::NAN, |e| e.c_hat),
            ]
        }),
    )?;
    io::write_csv(
        &run.path(&format!("{prefix}errors.csv")),
        &["epsilon", "t", "sup_error", "hm_error", "analytic_error", "residual_sup", "residual_hm", "energy"],
        rep.points.iter().enumerate().flat_map(|(i, p)| {
            let energy = rep.energy.get(i);
            (0..p.times.len()).map(move |j| {
                vec![
                    p.epsilon,
                    p.times[j],
                    p.sup_error[j],
                    p.hm_error[j],
                    p.analytic_error[j],
                    p.residual_sup[j],
                    p.residual_hm[j],
                    energy.map_or(f64::NAN, |e| e.energy[j]),
                ]
            })
        }),
    )
}

pub fn cmd_validate(path: &Path) -> Result<i32> {
    let cfg: ValidateConfig = load_config(path)?;
    cfg.plan.validate()?;
    let pool = thread_pool(cfg.threads)?;
    let threads = pool.current_num_threads();
    let mut run = Run::new(path, &cfg.output, &cfg)?;
    let (code, metrics) = pool.install(|| -> Result<(i32, serde_json::Value)> {
        match cfg.mode {
            ValidateMode::Sweep => {
                let rep = run_validation(&cfg.plan, cfg.order)?;
                write_sweep_files(&mut run, &rep, "")?;
                let code = if rep.passed() { EXIT_OK } else { EXIT_NUMERICAL };
                Ok((code, serde_json::json!({ "passed": rep.passed(), "verdicts": rep.verdicts })))
            }
            ValidateMode::Failure => {
                let [ra, rb] = cfg.reference;
                let reference = run_validation(&SweepPlan { alpha: ra, beta: rb, ..cfg.plan.clone() }, cfg.order)?;
                write_sweep_files(&mut run, &reference, "reference_")?;
                let demo = failure_demo(cfg.plan.alpha, cfg.plan.beta, &cfg.plan, Some(&reference))?;
                let control = failure_demo(ra, rb, &cfg.plan, Some(&reference))?;
                io::write_json(&run.path("failure.json"), &demo)?;
                io::write_json(&run.path("control.json"), &control)?;
                let ok = demo.failure_detected && !control.failure_detected;
                let verdict = if ok {
                    "failure demonstrated (expected)"
                } else if !demo.failure_detected {
                    "no failure detected"
                } else {
                    "control run failed"
                };
                println!("{verdict}");
                let code = if ok { EXIT_OK } else { EXIT_NUMERICAL };
                Ok((code, serde_json::json!({ "verdict": verdict, "failure": demo.failure_detected, "control_failure": control.failure_detected })))
            }
            ValidateMode::EndToEnd => {
                let rep = cgl_end_to_end(&cfg.plan, &cfg.end_to_end)?;
                io::write_json(&run.path("end_to_end.json"), &rep)?;
                io::write_csv(
                    &run.path("phase.csv"),
                    &["t", "phase", "phase_ode"],
                    (0..rep.times.len()).map(|i| vec![rep.times[i], rep.phase[i], rep.phase_ode[i]]),
                )?;
                io::write_csv(
                    &run.path("windows.csv"),
                    &["w", "error"],
                    rep.windows.iter().zip(&rep.window_error).map(|(w, e)| vec![*w, *e]),
                )?;
                Ok((EXIT_OK, serde_json::json!({ "fit_a": rep.fit_a, "fit_b": rep.fit_b, "max_phase": rep.max_phase })))
            }
        }
    })?;
    run.finish("validate", &cfg, threads, metrics)?;
    Ok(code)
}

pub fn cmd_coeffs(path: &Path) -> Result<i32> {
    let cfg: CoeffsConfig = load_config(path)?;
    let p = cfg.params.resolve()?;
    let mut run = Run::new(path, &cfg.output, &cfg)?;
    let ansatz = AnsatzCoefficients::new(&p).ok().map(|a| AnsatzRecord::from(&a));
    let exp = ExpansionRecord::from(&expansion_coeffs(&p));
    let fd = ExpansionRecord::from(&expansion_coeffs_fd(&p, cfg.fd_step));
    println!("{:<10} {:>25}", "ansatz", "value");
    if let Some(a) = &ansatz {
        for (name, v) in [
            ("nu0", a.nu0),
            ("nu1", a.nu1),
            ("nu2", a.nu2),
            ("nu3", a.nu3),
            ("gamma_lin", a.gamma_lin),
            ("gamma_non", a.gamma_non),
            ("c", a.c),
            ("sigma", a.sigma),
        ] {
            println!("{name:<10} {:>25}", io::fmt17(v));
        }
    } else {
        println!("(degenerate: α = β)");
    }
    println!("{:<10} {:>25} {:>25}", "expansion", "closed form", "finite difference");
    for (name, a, b) in [("c1", exp.c1, fd.c1), ("c2", exp.c2, fd.c2), ("c3", exp.c3, fd.c3), ("c4", exp.c4, fd.c4)] {
        println!("{name:<10} {:>25} {:>25}", io::fmt17(a), io::fmt17(b));
    }
    let out = serde_json::json!({
        "params": ParamsRecord::from(&p),
        "ansatz": ansatz,
        "expansion": exp,
        "expansion_fd": fd,
    });
    io::write_json(&run.path("coeffs.json"), &out)?;
    run.finish("coeffs", &cfg, 1, serde_json::Value::Null)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let r: std::result::Result<CoeffsConfig, _> =
            toml::from_str("params = { alpha = 1.0, beta = 0.0 }\nbogus = 1\n");
        assert!(r.is_err());
    }

    #[test]
    fn missing_required_key_is_a_config_error() {
        let r: std::result::Result<CoeffsConfig, _> = toml::from_str("params = { alpha = 1.0 }\n");
        assert!(r.is_err());
        assert_eq!(exit_code(&LabError::Config("x".into())), EXIT_CONFIG);
        assert_eq!(exit_code(&LabError::BlowUp { t: 0.0, sup: 9.0 }), EXIT_NUMERICAL);
    }

    #[test]
    fn resolved_config_round_trips() {
        let cfg: ValidateConfig = toml::from_str("mode = \"sweep\"\n").unwrap();
        let text = toml::to_string(&cfg).unwrap();
        let back: ValidateConfig = toml::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }
}
