//! Pseudo-spectral CGL solver on a periodic X-grid and the maps between
//! CGL fields and modulation variables.

use std::f64::consts::PI;

use eckhaus_core::CglParams;
use num_complex::Complex64;

use crate::modulation::ModulationState;
use crate::stepper::{LinearOp, System};
use crate::{field, LabError, Result, SpectralField, SpectralGrid};

type C = Complex64;

/// Default blow-up guard on sup|Ψ|.
pub const DEFAULT_GUARD: f64 = 4.0;

/// Tolerance on the integer winding of the phase over the domain.
pub const WINDING_TOL: f64 = 1e-9;

pub struct CglSystem {
    params: CglParams,
    grid: SpectralGrid,
    linear: LinearOp,
    pub guard: f64,
}

impl CglSystem {
    pub fn new(params: CglParams, grid: SpectralGrid) -> Self {
        let lin = grid
            .wavenumbers()
            .into_iter()
            .map(|k| C::new(1.0 - k * k, -params.alpha * k * k))
            .collect();
        Self { params, grid, linear: LinearOp::Scalar(lin), guard: DEFAULT_GUARD }
    }

    pub fn params(&self) -> &CglParams {
        &self.params
    }
}

impl System for CglSystem {
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
        let mut phys = u[0].clone();
        field::inverse(&self.grid, &mut phys);
        let mut sup = 0.0f64;
        let b = C::new(1.0, self.params.beta);
        for z in phys.iter_mut() {
            let a2 = z.norm_sqr();
            sup = sup.max(a2);
            *z = -b * *z * a2;
        }
        let sup = sup.sqrt();
        if !(sup <= self.guard) {
            return Err(LabError::BlowUp { t, sup });
        }
        field::forward(&self.grid, &mut phys);
        out[0] = phys;
        Ok(())
    }
}

/// X-grid matching an x-grid: same point count, length L_x/ζ.
pub fn cgl_grid(p: &CglParams, xgrid: &SpectralGrid) -> Result<SpectralGrid> {
    SpectralGrid::new(xgrid.n(), xgrid.length() / p.zeta)
}

/// Ψ₀ e^{i(ζX + Ω₀T)} sampled on `grid`; ζL_X/(2π) must be an integer.
pub fn wave_train(p: &CglParams, grid: SpectralGrid, t_cgl: f64) -> Result<SpectralField> {
    check_winding(p.zeta * grid.length() / (2.0 * PI))?;
    let vals: Vec<C> = grid
        .points()
        .into_iter()
        .map(|x| C::from_polar(p.psi0, p.zeta * x + p.omega0 * t_cgl))
        .collect();
    SpectralField::from_complex(grid, &vals)
}

fn check_winding(w: f64) -> Result<()> {
    if (w - w.round()).abs() > WINDING_TOL * w.abs().max(1.0) {
        return Err(LabError::Winding(w));
    }
    Ok(())
}

/// Ψ = Ψ₀e^{i(ζX + Ω₀T)} e^{s + iφ} with φ_x = ψ, built from V on the x-grid
/// at modulation time t (T = t/ζ²).
///
/// φ is fixed by φ(ζX₀ − ct) = `phase_at_x0`. The total phase must wind an
/// integer number of times over the domain: L_x(1 + ψ̄)/(2π) ∈ ℤ.
pub fn build_modulated_cgl(
    p: &CglParams,
    v: &ModulationState,
    t: f64,
    x0_cgl: f64,
    phase_at_x0: f64,
) -> Result<SpectralField> {
    let xgrid = *v.grid();
    let grid = cgl_grid(p, &xgrid)?;
    let psi_mean = v.psi.mean().re;
    check_winding(xgrid.length() * (1.0 + psi_mean) / (2.0 * PI))?;
    let shift = p.c * t;
    let fluct = v.psi.sub(&SpectralField::from_fn(xgrid, |_| psi_mean))?;
    let big_phi = fluct.antiderivative();
    // values at x = ζX − ct, i.e. the fields translated by ct
    let phi_vals = big_phi.translated(shift).to_real();
    let s_vals = v.s.translated(shift).to_real();
    let x_ref = p.zeta * x0_cgl - shift;
    let phi_ref = big_phi.eval_at(x_ref).re;
    let t_cgl = t / (p.zeta * p.zeta);
    let vals: Vec<C> = grid
        .points()
        .into_iter()
        .enumerate()
        .map(|(j, xx)| {
            let x = p.zeta * xx - shift;
            let phi = phase_at_x0 + psi_mean * (x - x_ref) + phi_vals[j] - phi_ref;
            C::from_polar(p.psi0 * s_vals[j].exp(), p.zeta * xx + p.omega0 * t_cgl + phi)
        })
        .collect();
    SpectralField::from_complex(grid, &vals)
}

/// Recovers V on the x-grid from a CGL field at modulation time t:
/// s = ln|Ψ| − r₀, ψ = Im(Ψ_X/Ψ)/ζ − 1.
pub fn extract_modulation(p: &CglParams, psi_cgl: &SpectralField, t: f64) -> Result<ModulationState> {
    let grid = *psi_cgl.grid();
    let xgrid = SpectralGrid::new(grid.n(), grid.length() * p.zeta)?;
    let u = psi_cgl.to_complex();
    let ux = psi_cgl.derivative(1).to_complex();
    let pts = grid.points();
    let mut s = Vec::with_capacity(u.len());
    let mut psi = Vec::with_capacity(u.len());
    for (j, (z, zx)) in u.iter().zip(&ux).enumerate() {
        let a = z.norm();
        if !(a > 0.0) {
            return Err(LabError::AmplitudeZero(pts[j]));
        }
        s.push(a.ln() - p.r0);
        psi.push((zx / z).im / p.zeta - 1.0);
    }
    let shift = p.c * t;
    Ok(ModulationState {
        psi: SpectralField::from_real(xgrid, &psi)?.translated(-shift),
        s: SpectralField::from_real(xgrid, &s)?.translated(-shift),
    })
}

/// arg(Ψ/Ψ_per) at one CGL point, Ψ_per = Ψ₀e^{i(ζX + Ω₀T)}.
pub fn phase_at(p: &CglParams, psi_cgl: &SpectralField, x0_cgl: f64, t_cgl: f64) -> f64 {
    let z = psi_cgl.eval_at(x0_cgl);
    (z * C::from_polar(1.0, -(p.zeta * x0_cgl + p.omega0 * t_cgl))).arg()
}

/// Continuous phase from a sequence of wrapped samples.
#[derive(Debug, Clone, Default)]
pub struct PhaseUnwrapper {
    last: Option<f64>,
    offset: f64,
}

impl PhaseUnwrapper {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, wrapped: f64) -> f64 {
        if let Some(prev) = self.last {
            let mut d = wrapped - prev;
            while d > PI {
                d -= 2.0 * PI;
                self.offset -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
                self.offset += 2.0 * PI;
            }
        }
        self.last = Some(wrapped);
        wrapped + self.offset
    }
}
