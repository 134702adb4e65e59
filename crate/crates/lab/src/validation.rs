//! Scaling experiments: ε-sweeps of the modulation system against the KdV
//! ansatz, slope fits, the energy diagnostic, the failure run in the
//! Hopf-Turing region and the end-to-end comparison in CGL variables.

use std::f64::consts::PI;
use std::time::Instant;

use eckhaus_core::bounds::scan_max_re_plus;
use eckhaus_core::{classify_region, AnsatzCoefficients, CglParams, Region};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::ansatz::{
    build_ansatz_V, fd_time_derivative_check, residual_V, x_grid, AnsatzOrder, NormSelection,
};
use crate::cgl::{self, CglSystem, PhaseUnwrapper};
use crate::kdv::{solve_kdv_records, KdvConfig, KdvProfile, KdvState, KdvTrajectory};
use crate::modulation::{phase_tendency, ModulationState, ModulationSystem, Variables};
use crate::norms::{analytic_norm, hm_norm, AnalyticNormParams};
use crate::stepper::{simulate_with, Scheme, StepperConfig};
use crate::{LabError, Result, SpectralField, SpectralGrid};

/// Margin subtracted from theoretical exponents to form slope thresholds.
pub const SLOPE_MARGIN: f64 = 0.3;
/// Error-norm slope thresholds: H^m (theory 5/2) and sup (theory 3).
pub const HM_SLOPE_MIN: f64 = 2.2;
pub const SUP_SLOPE_MIN: f64 = 2.6;
/// Largest tolerated relative disagreement of the two ∂ₜV evaluations.
pub const RESIDUAL_FD_TOL: f64 = 1e-6;
/// Factor by which a failure run must escape the fitted bound.
pub const ESCAPE_FACTOR: f64 = 10.0;
/// Allowed spread of the energy constant Ĉ across a sweep.
pub const ENERGY_SPREAD: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepPlan {
    pub alpha: f64,
    pub beta: f64,
    pub epsilons: Vec<f64>,
    /// Existence window of the KdV solution; τ₁ starts at τ₀/2.
    pub tau0: f64,
    /// Fixed horizon; overrides the τ₀/2-and-halve search.
    pub tau1: Option<f64>,
    pub max_halvings: usize,
    pub profile: KdvProfile,
    pub subtract_mean: bool,
    /// Number P of 2π-periods of the ξ-domain.
    pub periods: f64,
    pub n_xi: usize,
    /// Records over the horizon.
    pub records: usize,
    /// Upper bound on the modulation step; the actual step divides the
    /// record spacing evenly.
    pub dt_max: f64,
    pub scheme: Scheme,
    pub kdv: KdvConfig,
    pub norms: NormSelection,
    pub guard: f64,
}

impl Default for SweepPlan {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.0,
            epsilons: vec![0.2, 0.15, 0.1],
            tau0: 2.0,
            tau1: None,
            max_halvings: 3,
            profile: KdvProfile::default(),
            subtract_mean: true,
            periods: 8.0,
            n_xi: 256,
            records: 200,
            dt_max: 0.25,
            scheme: Scheme::EtdRk4,
            kdv: KdvConfig::default(),
            norms: NormSelection::default(),
            guard: crate::modulation::DEFAULT_GUARD,
        }
    }
}

impl SweepPlan {
    pub fn xi_grid(&self) -> Result<SpectralGrid> {
        SpectralGrid::new(self.n_xi, 2.0 * PI * self.periods)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(LabError::Config(m));
        if self.epsilons.is_empty() {
            return bad("at least one ε is required".into());
        }
        if self.epsilons.iter().any(|e| !(*e > 0.0)) {
            return bad("every ε must be positive".into());
        }
        if !(self.tau0 >= 0.0) || self.tau1.is_some_and(|t| !(t >= 0.0 && t <= self.tau0)) {
            return bad(format!("need 0 ≤ τ₁ ≤ τ₀ (τ₀ = {}, τ₁ = {:?})", self.tau0, self.tau1));
        }
        if self.records < 1 || !(self.dt_max > 0.0) || !(self.periods > 0.0) {
            return bad("records ≥ 1, dt_max > 0 and periods > 0 are required".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PointStatus {
    Completed,
    BlowUp { t: f64, sup: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub epsilon: f64,
    pub n_x: usize,
    pub dt: f64,
    pub steps: usize,
    pub status: PointStatus,
    pub times: Vec<f64>,
    pub sup_error: Vec<f64>,
    pub hm_error: Vec<f64>,
    pub analytic_error: Vec<f64>,
    pub residual_sup: Vec<f64>,
    pub residual_hm: Vec<f64>,
    pub max_sup_error: f64,
    pub max_hm_error: f64,
    pub max_analytic_error: f64,
    pub max_residual_sup: f64,
    pub max_residual_hm: f64,
    /// Relative disagreement of chain-rule and finite-difference ∂ₜV.
    pub residual_fd_mismatch: f64,
    pub runtime_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// 95% confidence interval for the slope.
    pub ci_low: f64,
    pub ci_high: f64,
    pub points: usize,
}

impl SlopeFit {
    /// C·ε^p from the fit.
    pub fn predict(&self, epsilon: f64) -> f64 {
        (self.intercept + self.slope * epsilon.ln()).exp()
    }
}

/// Least squares on (ln x, ln y); `None` below three usable points.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<SlopeFit> {
    let pts: Vec<(f64, f64)> =
        xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && **y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let se = (rss / (nf - 2.0) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, nf - 2.0).ok()?.inverse_cdf(0.975);
    Some(SlopeFit { slope, intercept, ci_low: slope - t * se, ci_high: slope + t * se, points: n })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyTrace {
    pub epsilon: f64,
    pub kappa: f64,
    pub times: Vec<f64>,
    /// E = ½‖(V − V_app)/ε^κ‖²_{H^m}.
    pub energy: Vec<f64>,
    /// Smallest Ĉ with E′ ≤ Ĉε³(E + 1) on the records.
    pub c_hat: f64,
    /// Fewer than five records: the derivative is not trustworthy.
    pub noisy: bool,
}

/// Energy constant from an H^m error series.
pub fn energy_diagnostic(times: &[f64], hm_error: &[f64], epsilon: f64, kappa: f64) -> EnergyTrace {
    let scale = epsilon.powf(-kappa);
    let energy: Vec<f64> = hm_error.iter().map(|e| 0.5 * (e * scale).powi(2)).collect();
    let n = energy.len();
    let mut c_hat = 0.0f64;
    for i in 0..n {
        if n < 2 {
            break;
        }
        let (a, b) = match i {
            0 => (0, 1),
            _ if i == n - 1 => (n - 2, n - 1),
            _ => (i - 1, i + 1),
        };
        let d = (energy[b] - energy[a]) / (times[b] - times[a]);
        c_hat = c_hat.max(d / (epsilon.powi(3) * (energy[i] + 1.0)));
    }
    EnergyTrace { epsilon, kappa, times: times.to_vec(), energy, c_hat, noisy: n < 5 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub plan: SweepPlan,
    pub order: AnsatzOrder,
    pub region: String,
    pub tau1: f64,
    pub halvings: usize,
    pub points: Vec<PointResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sup_slope: Option<SlopeFit>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hm_slope: Option<SlopeFit>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual_slope: Option<SlopeFit>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual_hm_slope: Option<SlopeFit>,
    /// Residual sup slope − 3.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kappa: Option<f64>,
    pub energy: Vec<EnergyTrace>,
    /// max Ĉ / min Ĉ over the sweep.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub energy_spread: Option<f64>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// The KdV trajectory at τ = iτ₁/records, shared by every ε.
pub fn kdv_records(plan: &SweepPlan, coeffs: &AnsatzCoefficients, tau1: f64) -> Result<KdvTrajectory> {
    let xi = plan.xi_grid()?;
    let a0 = KdvState::new(plan.profile.sample(xi, plan.subtract_mean));
    solve_kdv_records(&a0, coeffs, tau1 / plan.records as f64, plan.records, &plan.kdv)
}

fn error_norms(d: &ModulationState, sel: NormSelection) -> (f64, f64, f64) {
    let pair = |f: &dyn Fn(&SpectralField) -> f64| f(&d.psi).hypot(f(&d.s));
    (
        d.sup(),
        pair(&|u| hm_norm(u, sel.m)),
        pair(&|u| analytic_norm(u, AnalyticNormParams { mu: sel.mu, s: sel.m })),
    )
}

/// One ε of the sweep; no region check.
pub fn run_point(
    plan: &SweepPlan,
    epsilon: f64,
    order: AnsatzOrder,
    tau1: f64,
    kdv: &KdvTrajectory,
) -> Result<PointResult> {
    let start = Instant::now();
    let p = CglParams::marginal(plan.alpha, plan.beta, epsilon)?;
    let c = AnsatzCoefficients::new(&p)?;
    let xi = plan.xi_grid()?;
    let xg = x_grid(&xi, epsilon)?;
    let e3 = epsilon.powi(3);

    let fd_traj = {
        let a0 = KdvState::new(kdv.states[0].clone());
        let h = fd_spacing(&xi, &c);
        let cfg = KdvConfig { dt_max: plan.kdv.dt_max.min(h / 4.0), ..plan.kdv };
        solve_kdv_records(&a0, &c, h, 8, &cfg)?
    };
    let fd_times: Vec<f64> = fd_traj.taus.iter().map(|t| t / e3).collect();
    let fd_mismatch = fd_time_derivative_check(&fd_traj.states, &fd_times, &c, &p, order, xg)?;
    if fd_mismatch > RESIDUAL_FD_TOL {
        return Err(LabError::ResidualMismatch(fd_mismatch));
    }

    let t_end = tau1 / e3;
    let dt_rec = t_end / plan.records as f64;
    let stride = if tau1 > 0.0 { (dt_rec / plan.dt_max).ceil().max(1.0) as usize } else { 1 };
    let dt = if tau1 > 0.0 { dt_rec / stride as f64 } else { plan.dt_max };
    let mut sys = ModulationSystem::new(p, xg, Variables::LocalWaveNumber);
    sys.guard = plan.guard;
    let v0 = build_ansatz_V(&kdv.states[0], &c, &p, order, xg)?;
    let cfg = StepperConfig {
        dt,
        scheme: plan.scheme,
        dealias: true,
        t_end: if tau1 > 0.0 { dt * (stride * plan.records) as f64 } else { 0.0 },
        record_stride: stride,
    };
    let mut out = PointResult {
        epsilon,
        n_x: xg.n(),
        dt,
        steps: if tau1 > 0.0 { stride * plan.records } else { 0 },
        status: PointStatus::Completed,
        times: Vec::new(),
        sup_error: Vec::new(),
        hm_error: Vec::new(),
        analytic_error: Vec::new(),
        residual_sup: Vec::new(),
        residual_hm: Vec::new(),
        max_sup_error: 0.0,
        max_hm_error: 0.0,
        max_analytic_error: 0.0,
        max_residual_sup: 0.0,
        max_residual_hm: 0.0,
        residual_fd_mismatch: fd_mismatch,
        runtime_s: 0.0,
    };
    let mut idx = 0usize;
    let res = simulate_with(&sys, v0.to_state(), cfg, |t, u| {
        let a = &kdv.states[idx];
        let v = ModulationState::from_state(xg, u)?;
        let app = build_ansatz_V(a, &c, &p, order, xg)?;
        let (s, h, an) = error_norms(&v.sub(&app)?, plan.norms);
        let r = residual_V(a, &c, &p, order, xg)?;
        out.times.push(t);
        out.sup_error.push(s);
        out.hm_error.push(h);
        out.analytic_error.push(an);
        out.residual_sup.push(r.sup());
        out.residual_hm.push(r.psi.hypot_hm(&r.s, plan.norms.m));
        idx += 1;
        Ok(())
    });
    match res {
        Ok(_) => {}
        Err(LabError::BlowUp { t, sup }) => out.status = PointStatus::BlowUp { t, sup },
        Err(e) => return Err(e),
    }
    let mx = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    out.max_sup_error = mx(&out.sup_error);
    out.max_hm_error = mx(&out.hm_error);
    out.max_analytic_error = mx(&out.analytic_error);
    out.max_residual_sup = mx(&out.residual_sup);
    out.max_residual_hm = mx(&out.residual_hm);
    out.runtime_s = start.elapsed().as_secs_f64();
    Ok(out)
}

/// Record spacing in τ for the finite-difference check: the fastest
/// resolved Airy frequency times the spacing stays at 0.05.
pub fn fd_spacing(xi: &SpectralGrid, c: &AnsatzCoefficients) -> f64 {
    let kmax = xi.wavenumber(xi.nyquist()).abs() * 2.0 / 3.0;
    let omega = c.gamma_lin.abs() * kmax.powi(3) + 2.0 * c.gamma_non.abs() * kmax;
    if omega > 0.0 { (0.05 / omega).min(2e-3) } else { 2e-3 }
}

trait HmPair {
    fn hypot_hm(&self, other: &SpectralField, m: f64) -> f64;
}

impl HmPair for SpectralField {
    fn hypot_hm(&self, other: &SpectralField, m: f64) -> f64 {
        hm_norm(self, m).hypot(hm_norm(other, m))
    }
}

fn run_points(plan: &SweepPlan, order: AnsatzOrder, tau1: f64) -> Result<Vec<PointResult>> {
    let p0 = CglParams::marginal(plan.alpha, plan.beta, plan.epsilons[0])?;
    let c0 = AnsatzCoefficients::new(&p0)?;
    let kdv = kdv_records(plan, &c0, tau1)?;
    plan.epsilons.par_iter().map(|&e| run_point(plan, e, order, tau1, &kdv)).collect()
}

fn region_name(r: Region) -> String {
    format!("{r:?}")
}

/// ε-sweep in the sideband region with slope fits and verdicts.
pub fn run_validation(plan: &SweepPlan, order: AnsatzOrder) -> Result<ValidationReport> {
    plan.validate()?;
    let verdict = classify_region(plan.alpha, plan.beta);
    if verdict.region != Region::SidebandAs || plan.alpha == plan.beta {
        return Err(LabError::Precondition(format!(
            "(α, β) = ({}, {}) is {:?}; the sweep needs the sideband region with α ≠ β",
            plan.alpha, plan.beta, verdict.region
        )));
    }
    let mut tau1 = plan.tau1.unwrap_or(plan.tau0 / 2.0);
    let mut halvings = 0;
    let mut notes = Vec::new();
    let points = loop {
        let pts = run_points(plan, order, tau1)?;
        let blown = pts.iter().any(|p| matches!(p.status, PointStatus::BlowUp { .. }));
        if blown && plan.tau1.is_none() && halvings < plan.max_halvings {
            notes.push(format!("blow-up at τ₁ = {tau1}; halving"));
            tau1 /= 2.0;
            halvings += 1;
            continue;
        }
        break pts;
    };
    Ok(assemble_report(plan, order, region_name(verdict.region), tau1, halvings, points, notes))
}

fn assemble_report(
    plan: &SweepPlan,
    order: AnsatzOrder,
    region: String,
    tau1: f64,
    halvings: usize,
    points: Vec<PointResult>,
    mut notes: Vec<String>,
) -> ValidationReport {
    let eps: Vec<f64> = points.iter().map(|p| p.epsilon).collect();
    let col = |f: fn(&PointResult) -> f64| points.iter().map(f).collect::<Vec<f64>>();
    let sup_slope = fit_slope(&eps, &col(|p| p.max_sup_error));
    let hm_slope = fit_slope(&eps, &col(|p| p.max_hm_error));
    let residual_slope = fit_slope(&eps, &col(|p| p.max_residual_sup));
    let residual_hm_slope = fit_slope(&eps, &col(|p| p.max_residual_hm));
    if sup_slope.is_none() {
        notes.push("insufficient points for fit".into());
    }
    let kappa = residual_slope.map(|f| f.slope - 3.0);
    let energy: Vec<EnergyTrace> = match kappa {
        Some(k) => points.iter().map(|p| energy_diagnostic(&p.times, &p.hm_error, p.epsilon, k)).collect(),
        None => Vec::new(),
    };
    let energy_spread = (energy.len() >= 2).then(|| {
        let hi = energy.iter().map(|e| e.c_hat).fold(0.0, f64::max);
        let lo = energy.iter().map(|e| e.c_hat).fold(f64::INFINITY, f64::min);
        hi / lo
    });
    let completed = points.iter().all(|p| p.status == PointStatus::Completed);
    let mut verdicts = vec![Verdict {
        criterion: "all sweep points completed".into(),
        pass: completed,
        detail: format!("τ₁ = {tau1}"),
    }];
    if let (Some(h), Some(s)) = (hm_slope, sup_slope) {
        verdicts.push(Verdict {
            criterion: format!("H^m error slope ≥ {HM_SLOPE_MIN}"),
            pass: h.slope >= HM_SLOPE_MIN,
            detail: format!("{:.4} [{:.4}, {:.4}]", h.slope, h.ci_low, h.ci_high),
        });
        verdicts.push(Verdict {
            criterion: format!("sup error slope ≥ {SUP_SLOPE_MIN}"),
            pass: s.slope >= SUP_SLOPE_MIN,
            detail: format!("{:.4} [{:.4}, {:.4}]", s.slope, s.ci_low, s.ci_high),
        });
    }
    if let Some(r) = energy_spread {
        verdicts.push(Verdict {
            criterion: format!("energy constant stable within {ENERGY_SPREAD}×"),
            pass: r <= ENERGY_SPREAD,
            detail: format!("spread {r:.4}"),
        });
    }
    ValidationReport {
        plan: plan.clone(),
        order,
        region,
        tau1,
        halvings,
        points,
        sup_slope,
        hm_slope,
        residual_slope,
        residual_hm_slope,
        kappa,
        energy,
        energy_spread,
        verdicts,
        notes,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailurePoint {
    pub epsilon: f64,
    pub status: PointStatus,
    pub max_sup_error: f64,
    /// Fitted sideband-region bound C·ε^p at this ε, if available.
    pub bound: Option<f64>,
    pub escaped: bool,
    pub failure: bool,
    /// Energy constant with the reference κ, if a reference is given.
    pub c_hat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureReport {
    pub alpha: f64,
    pub beta: f64,
    pub region: String,
    /// (k, max Re λ₊) from a dispersion scan.
    pub max_re_plus: (f64, f64),
    pub tau1: f64,
    pub points: Vec<FailurePoint>,
    pub failure_detected: bool,
}

/// Runs the sweep pipeline at (α, β) and flags failure of the ansatz: the
/// blow-up guard trips or the sup error exceeds [`ESCAPE_FACTOR`] times the
/// sup-error bound fitted in a sideband-region report.
pub fn failure_demo(
    alpha: f64,
    beta: f64,
    plan: &SweepPlan,
    reference: Option<&ValidationReport>,
) -> Result<FailureReport> {
    let plan = SweepPlan { alpha, beta, ..plan.clone() };
    plan.validate()?;
    let region = classify_region(alpha, beta).region;
    let tau1 = plan.tau1.unwrap_or(plan.tau0 / 2.0);
    let pts = run_points(&plan, AnsatzOrder::One, tau1)?;
    let scan = CglParams::marginal(alpha, beta, plan.epsilons[0])
        .map(|p| scan_max_re_plus(&p, 10.0, 20_001))
        .unwrap_or((f64::NAN, f64::NAN));
    let points: Vec<FailurePoint> = pts
        .iter()
        .map(|p| {
            let bound = reference.and_then(|r| r.sup_slope).map(|f| f.predict(p.epsilon));
            let c_hat = reference
                .and_then(|r| r.kappa)
                .map(|k| energy_diagnostic(&p.times, &p.hm_error, p.epsilon, k).c_hat);
            let escaped = bound.is_some_and(|b| p.max_sup_error >= ESCAPE_FACTOR * b);
            let blown = matches!(p.status, PointStatus::BlowUp { .. });
            FailurePoint {
                epsilon: p.epsilon,
                status: p.status,
                max_sup_error: p.max_sup_error,
                bound,
                escaped,
                failure: escaped || blown,
                c_hat,
            }
        })
        .collect();
    Ok(FailureReport {
        alpha,
        beta,
        region: region_name(region),
        max_re_plus: scan,
        tau1,
        failure_detected: points.iter().any(|p| p.failure),
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EndToEndConfig {
    pub epsilon: f64,
    /// Reference point X₀ in CGL coordinates.
    pub x0: f64,
    /// Window half-widths W, in CGL units.
    pub windows: Vec<f64>,
    /// Horizon in τ = ε³t.
    pub tau: f64,
    pub records: usize,
    /// Upper bound on the CGL step in T.
    pub dt_max: f64,
    /// Points with |Ψ| below this are masked.
    pub amplitude_floor: f64,
}

impl Default for EndToEndConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            x0: 0.0,
            windows: vec![0.0, 5.0, 10.0, 20.0, 40.0],
            tau: 0.25,
            records: 100,
            dt_max: 0.05,
            amplitude_floor: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndToEndReport {
    pub epsilon: f64,
    pub x0: f64,
    pub times: Vec<f64>,
    /// Unwrapped φ(X₀, T) measured on the CGL field.
    pub phase: Vec<f64>,
    /// φ(X₀, T) integrated from dφ/dt = F(V) − cψ at x₀(t).
    pub phase_ode: Vec<f64>,
    /// sup|φ(X₀, ·)|.
    pub max_phase: f64,
    /// ε·sup|φ(X₀, ·)|, bounded when |φ| = O(1/ε).
    pub scaled_phase: f64,
    /// sup over time of |φ − φ_ode|: quadrature error of the record spacing.
    pub phase_ode_gap: f64,
    pub windows: Vec<f64>,
    /// sup over time of the pointwise error on each window.
    pub window_error: Vec<f64>,
    /// a + bW fit of window_error.
    pub fit_a: f64,
    pub fit_b: f64,
    /// sup over time of Ψ₀|s − s_app| at X₀.
    pub s_error_at_x0: f64,
    pub masked_points: usize,
}

/// Full CGL run from the modulated ansatz and pointwise comparison with the
/// ansatz after removing the global phase.
pub fn cgl_end_to_end(plan: &SweepPlan, cfg: &EndToEndConfig) -> Result<EndToEndReport> {
    plan.validate()?;
    let eps = cfg.epsilon;
    let p = CglParams::marginal(plan.alpha, plan.beta, eps)?;
    let c = AnsatzCoefficients::new(&p)?;
    let xi = plan.xi_grid()?;
    let xg = x_grid(&xi, eps)?;
    let cg = cgl::cgl_grid(&p, &xg)?;
    let e3 = eps.powi(3);
    let z2 = p.zeta * p.zeta;
    let kdv = {
        let a0 = KdvState::new(plan.profile.sample(xi, plan.subtract_mean));
        solve_kdv_records(&a0, &c, cfg.tau / cfg.records as f64, cfg.records, &plan.kdv)?
    };
    let t_rec = cfg.tau / e3 / cfg.records as f64;
    let big_t_rec = t_rec / z2;
    let stride = (big_t_rec / cfg.dt_max).ceil().max(1.0) as usize;
    let dt = big_t_rec / stride as f64;
    let v0 = build_ansatz_V(&kdv.states[0], &c, &p, AnsatzOrder::One, xg)?;
    let u0 = cgl::build_modulated_cgl(&p, &v0, 0.0, cfg.x0, 0.0)?;
    let sys = CglSystem::new(p, cg);
    let scfg = StepperConfig {
        dt,
        scheme: plan.scheme,
        dealias: true,
        t_end: dt * (stride * cfg.records) as f64,
        record_stride: stride,
    };
    let pts = cg.points();
    let half = cg.length() / 2.0;
    let dist = |x: f64| {
        let d = (x - cfg.x0).rem_euclid(cg.length());
        d.min(cg.length() - d).min(half)
    };
    let mut rep = EndToEndReport {
        epsilon: eps,
        x0: cfg.x0,
        times: Vec::new(),
        phase: Vec::new(),
        phase_ode: Vec::new(),
        max_phase: 0.0,
        scaled_phase: 0.0,
        phase_ode_gap: 0.0,
        windows: cfg.windows.clone(),
        window_error: vec![0.0; cfg.windows.len()],
        fit_a: 0.0,
        fit_b: 0.0,
        s_error_at_x0: 0.0,
        masked_points: 0,
    };
    let mut unwrap = PhaseUnwrapper::new();
    let mut idx = 0usize;
    let mut last_rate: Option<(f64, f64)> = None;
    simulate_with(&sys, vec![u0.coeffs().to_vec()], scfg, |big_t, u| {
        let t = big_t * z2;
        let psi_f = SpectralField::from_coeffs(cg, u[0].clone(), false)?;
        let phi = unwrap.push(cgl::phase_at(&p, &psi_f, cfg.x0, big_t));
        let app_v = build_ansatz_V(&kdv.states[idx], &c, &p, AnsatzOrder::One, xg)?;
        let app = cgl::build_modulated_cgl(&p, &app_v, t, cfg.x0, 0.0)?;
        let rot = num_complex::Complex64::from_polar(1.0, -phi);
        let vals = psi_f.to_complex();
        let app_vals = app.to_complex();
        for (j, (z, za)) in vals.iter().zip(&app_vals).enumerate() {
            if z.norm() < cfg.amplitude_floor {
                rep.masked_points += 1;
                continue;
            }
            let e = (z * rot - za).norm();
            let d = dist(pts[j]);
            for (w, acc) in cfg.windows.iter().zip(rep.window_error.iter_mut()) {
                if d <= *w + 0.5 * cg.dx() {
                    *acc = acc.max(e);
                }
            }
        }
        let v = cgl::extract_modulation(&p, &psi_f, t)?;
        let x0t = p.zeta * cfg.x0 - p.c * t;
        let rate = phase_tendency(&p, &v)?.eval_at(x0t).re - p.c * v.psi.eval_at(x0t).re;
        let ode = match (last_rate, rep.phase_ode.last()) {
            (Some((t_prev, r_prev)), Some(&prev)) => prev + 0.5 * (t - t_prev) * (rate + r_prev),
            _ => phi,
        };
        last_rate = Some((t, rate));
        let ds = (v.s.eval_at(x0t).re - app_v.s.eval_at(x0t).re).abs() * p.psi0;
        rep.s_error_at_x0 = rep.s_error_at_x0.max(ds);
        rep.times.push(t);
        rep.phase.push(phi);
        rep.phase_ode.push(ode);
        idx += 1;
        Ok(())
    })?;
    rep.max_phase = rep.phase.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    rep.scaled_phase = eps * rep.max_phase;
    rep.phase_ode_gap = rep.phase.iter().zip(&rep.phase_ode).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let (a, b) = linear_fit(&rep.windows, &rep.window_error);
    rep.fit_a = a;
    rep.fit_b = b;
    Ok(rep)
}

/// Least-squares y ≈ a + bx.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return (ys.first().copied().unwrap_or(0.0), 0.0);
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - b * mx, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub epsilon: f64,
    pub t_end: f64,
    /// sup over records of |extract(Ψ(t)) − V(t)|.
    pub max_difference: f64,
}

/// Evolves V₀ under the modulation system and the modulated wave train
/// under CGL, then compares after extraction.
pub fn coordinate_chain(
    p: &CglParams,
    v0: &ModulationState,
    t_end: f64,
    records: usize,
    dt_max: f64,
) -> Result<ChainReport> {
    let xg = *v0.grid();
    let cg = cgl::cgl_grid(p, &xg)?;
    let z2 = p.zeta * p.zeta;
    let t_rec = t_end / records as f64;
    let stride_v = (t_rec / dt_max).ceil().max(1.0) as usize;
    let stride_c = (t_rec / z2 / dt_max).ceil().max(1.0) as usize;
    let sys_v = ModulationSystem::new(*p, xg, Variables::LocalWaveNumber);
    let mut vs = Vec::new();
    simulate_with(
        &sys_v,
        v0.to_state(),
        StepperConfig {
            dt: t_rec / stride_v as f64,
            scheme: Scheme::EtdRk4,
            dealias: true,
            t_end,
            record_stride: stride_v,
        },
        |_, u| {
            vs.push(ModulationState::from_state(xg, u)?);
            Ok(())
        },
    )?;
    let u0 = cgl::build_modulated_cgl(p, v0, 0.0, 0.0, 0.0)?;
    let sys_c = CglSystem::new(*p, cg);
    let mut diff = 0.0f64;
    let mut idx = 0usize;
    let dtc = t_rec / z2 / stride_c as f64;
    simulate_with(
        &sys_c,
        vec![u0.coeffs().to_vec()],
        StepperConfig { dt: dtc, scheme: Scheme::EtdRk4, dealias: true, t_end: t_end / z2, record_stride: stride_c },
        |big_t, u| {
            let f = SpectralField::from_coeffs(cg, u[0].clone(), false)?;
            let v = cgl::extract_modulation(p, &f, big_t * z2)?;
            if let Some(w) = vs.get(idx) {
                diff = diff.max(v.sub(w)?.sup());
            }
            idx += 1;
            Ok(())
        },
    )?;
    Ok(ChainReport { epsilon: p.epsilon, t_end, max_difference: diff })
}
