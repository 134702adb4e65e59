//! Pseudo-spectral solver for ∂τA = γ_lin ∂ξ³A + γ_non ∂ξ(A²) on a periodic
//! ξ-grid, its linearization, and the library of initial profiles.

use std::f64::consts::PI;

use eckhaus_core::AnsatzCoefficients;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::stepper::{simulate_with, LinearOp, Scheme, StepperConfig, System};
use crate::{field, LabError, Result, SpectralField, SpectralGrid};

type C = Complex64;

/// Periodic images summed when wrapping localised profiles.
const IMAGES: i32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KdvProfile {
    /// a·exp(−(ξ − L/2)²/w²), wrapped periodically.
    GaussianPeriodic { amplitude: f64, width: f64 },
    /// a·cos(2πjξ/L).
    Cosine { amplitude: f64, mode: u32 },
    /// a·sech²((ξ − L/2)/w), wrapped periodically.
    Sech2 { amplitude: f64, width: f64 },
}

impl Default for KdvProfile {
    fn default() -> Self {
        KdvProfile::Sech2 { amplitude: 1.0, width: 2.0 }
    }
}

impl KdvProfile {
    pub fn eval(&self, xi: f64, length: f64) -> f64 {
        let wrapped = |f: &dyn Fn(f64) -> f64| -> f64 {
            (-IMAGES..=IMAGES).map(|j| f(xi - 0.5 * length + j as f64 * length)).sum()
        };
        match *self {
            KdvProfile::GaussianPeriodic { amplitude, width } => {
                wrapped(&|y| amplitude * (-(y / width).powi(2)).exp())
            }
            KdvProfile::Cosine { amplitude, mode } => {
                amplitude * (2.0 * PI * mode as f64 * xi / length).cos()
            }
            KdvProfile::Sech2 { amplitude, width } => wrapped(&|y| amplitude / (y / width).cosh().powi(2)),
        }
    }

    /// The profile on `grid`, optionally with its mean removed.
    pub fn sample(&self, grid: SpectralGrid, subtract_mean: bool) -> SpectralField {
        let l = grid.length();
        let mut f = SpectralField::from_fn(grid, |x| self.eval(x, l));
        if subtract_mean {
            f.coeffs_mut()[0] = C::new(0.0, 0.0);
        }
        f
    }
}

/// A(ξ, τ) on the slow grid together with an estimate of its analytic strip.
#[derive(Debug, Clone, PartialEq)]
pub struct KdvState {
    pub a: SpectralField,
    pub mu_a: f64,
}

impl KdvState {
    pub fn new(a: SpectralField) -> Self {
        let mu_a = strip_width(&a);
        Self { a, mu_a }
    }

    pub fn grid(&self) -> &SpectralGrid {
        self.a.grid()
    }
}

/// Exponential decay rate of |â(k)| fitted over the resolved band, a proxy
/// for the half-width of the strip of analyticity. Returns +∞ for fields
/// with fewer than three significant modes.
pub fn strip_width(a: &SpectralField) -> f64 {
    let g = a.grid();
    let peak = a.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return f64::INFINITY;
    }
    let floor = peak * 1e-13;
    let pts: Vec<(f64, f64)> = (1..g.nyquist())
        .filter_map(|i| {
            let c = a.coeffs()[i].norm().max(a.coeffs()[g.n() - i].norm());
            (c > floor).then(|| (g.wavenumber(i), c.ln()))
        })
        .collect();
    if pts.len() < 3 {
        return f64::INFINITY;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2)));
    (-sxy / sxx).max(0.0)
}

fn dxi_cube(grid: &SpectralGrid, gamma: f64) -> Vec<C> {
    grid.wavenumbers().into_iter().map(|k| C::new(0.0, -gamma * k * k * k)).collect()
}

/// Multiplies by ik in place, zeroing the Nyquist mode.
fn dxi(grid: &SpectralGrid, c: &mut [C]) {
    let nyq = grid.nyquist();
    for (i, z) in c.iter_mut().enumerate() {
        *z *= if i == nyq { C::new(0.0, 0.0) } else { C::new(0.0, grid.wavenumber(i)) };
    }
}

fn physical(grid: &SpectralGrid, c: &[C]) -> Vec<f64> {
    let mut v = c.to_vec();
    field::inverse(grid, &mut v);
    v.into_iter().map(|z| z.re).collect()
}

fn spectral(grid: &SpectralGrid, v: impl IntoIterator<Item = f64>) -> Vec<C> {
    let mut c: Vec<C> = v.into_iter().map(|x| C::new(x, 0.0)).collect();
    field::forward(grid, &mut c);
    c
}

pub struct KdvSystem {
    grid: SpectralGrid,
    gamma_non: f64,
    linear: LinearOp,
    pub guard: f64,
}

impl KdvSystem {
    pub fn new(grid: SpectralGrid, gamma_lin: f64, gamma_non: f64, guard: f64) -> Self {
        Self { grid, gamma_non, linear: LinearOp::Scalar(dxi_cube(&grid, gamma_lin)), guard }
    }

    pub fn from_coefficients(grid: SpectralGrid, c: &AnsatzCoefficients, guard: f64) -> Self {
        Self::new(grid, c.gamma_lin, c.gamma_non, guard)
    }
}

impl System for KdvSystem {
    fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    fn components(&self) -> usize {
        1
    }

    fn linear(&self) -> &LinearOp {
        &self.linear
    }

    fn nonlinear(&self, t: f64, u: &[Vec<C>], out: &mut [Vec<C>]) -> Result<()> {
        let a = physical(&self.grid, &u[0]);
        let sup = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(sup <= self.guard) {
            return Err(LabError::BlowUp { t, sup });
        }
        let mut sq = spectral(&self.grid, a.iter().map(|x| self.gamma_non * x * x));
        dxi(&self.grid, &mut sq);
        out[0] = sq;
        Ok(())
    }
}

/// γ_lin ∂ξ³A + γ_non ∂ξ(A²), dealiased.
pub fn kdv_rhs(a: &SpectralField, gamma_lin: f64, gamma_non: f64) -> Result<SpectralField> {
    let lin = a.derivative(3).scaled(gamma_lin);
    let nl = a.mul(a)?.derivative(1).scaled(gamma_non);
    lin.add(&nl)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KdvConfig {
    /// Upper bound on the KdV step; the actual step divides the record
    /// spacing evenly.
    pub dt_max: f64,
    pub scheme: Scheme,
    /// Abort once sup|A| exceeds this multiple of its initial value.
    pub guard_factor: f64,
}

impl Default for KdvConfig {
    fn default() -> Self {
        Self { dt_max: 1e-3, scheme: Scheme::EtdRk4, guard_factor: 100.0 }
    }
}

#[derive(Debug, Clone, Default)]
pub struct KdvTrajectory {
    pub taus: Vec<f64>,
    pub states: Vec<SpectralField>,
}

/// Integrates to `t_end` with step `dt`, recording every `stride` steps.
pub fn solve_kdv(
    initial: &KdvState,
    coeffs: &AnsatzCoefficients,
    t_end: f64,
    dt: f64,
    stride: usize,
    scheme: Scheme,
) -> Result<KdvTrajectory> {
    let grid = *initial.grid();
    let guard = 100.0 * initial.a.sup().max(1e-300);
    let sys = KdvSystem::from_coefficients(grid, coeffs, guard);
    let cfg = StepperConfig { dt, scheme, dealias: true, t_end, record_stride: stride };
    let mut traj = KdvTrajectory::default();
    simulate_with(&sys, vec![initial.a.coeffs().to_vec()], cfg, |t, u| {
        traj.taus.push(t);
        traj.states.push(SpectralField::from_coeffs(grid, u[0].clone(), true)?);
        Ok(())
    })?;
    Ok(traj)
}

/// States at τ = 0, Δτ, …, count·Δτ, the step dividing Δτ evenly.
pub fn solve_kdv_records(
    initial: &KdvState,
    coeffs: &AnsatzCoefficients,
    dtau: f64,
    count: usize,
    config: &KdvConfig,
) -> Result<KdvTrajectory> {
    let mut a0 = initial.a.clone();
    a0.dealias();
    if count == 0 || dtau == 0.0 {
        return Ok(KdvTrajectory { taus: vec![0.0], states: vec![a0] });
    }
    if !(dtau > 0.0) || !(config.dt_max > 0.0) {
        return Err(LabError::Config(format!("record spacing {dtau} and dt_max {} must be positive", config.dt_max)));
    }
    let sub = (dtau / config.dt_max).ceil().max(1.0) as usize;
    let dt = dtau / sub as f64;
    let grid = *initial.grid();
    let guard = config.guard_factor * a0.sup().max(1e-300);
    let sys = KdvSystem::from_coefficients(grid, coeffs, guard);
    let cfg = StepperConfig {
        dt,
        scheme: config.scheme,
        dealias: true,
        t_end: dt * (sub * count) as f64,
        record_stride: sub,
    };
    let mut traj = KdvTrajectory::default();
    let mut idx = 0usize;
    simulate_with(&sys, vec![a0.into_coeffs()], cfg, |_, u| {
        traj.taus.push(idx as f64 * dtau);
        traj.states.push(SpectralField::from_coeffs(grid, u[0].clone(), true)?);
        idx += 1;
        Ok(())
    })?;
    Ok(traj)
}

/// ∫A over the period.
pub fn mass(a: &SpectralField) -> f64 {
    a.integral().re
}

/// ∫A² over the period.
pub fn momentum(a: &SpectralField) -> f64 {
    let g = a.grid();
    g.dk() * a.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>()
}
