//! Modulation systems of the wave train in the co-moving frame
//! x = ζ(X − cζT), t = ζ²T:
//!
//! ```text
//! ∂ₜψ = ψ_xx + (c − 2α)ψ_x + αs_xxx + 2s_xx − 2σβs_x + ∂ₓ(αs_x² − σβh(s) − αψ² + 2ψs_x)
//! ∂ₜs = −αψ_x − 2ψ + s_xx + (c − 2α)s_x − 2σs + s_x² − σh(s) − ψ² − 2αψs_x
//! ```
//!
//! with h(s) = e^{2s} − 1 − 2s. The phase form replaces ψ by φ with ψ = φ_x
//! and drops the outer ∂ₓ of the first nonlinearity.

use eckhaus_core::{symbol, CglParams, Mat2};
use num_complex::Complex64;

use crate::stepper::{LinearOp, State, System};
use crate::{field, LabError, Result, SpectralField, SpectralGrid};

type C = Complex64;

/// h(s) = e^{2s} − 1 − 2s.
pub fn h(s: f64) -> f64 {
    (2.0 * s).exp_m1() - 2.0 * s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variables {
    /// V = (ψ, s).
    LocalWaveNumber,
    /// (φ, s).
    Phase,
}

/// The pair V = (ψ, s) of local wave number and log-amplitude deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationState {
    pub psi: SpectralField,
    pub s: SpectralField,
}

impl ModulationState {
    pub fn zeros(grid: SpectralGrid) -> Self {
        Self { psi: SpectralField::zeros(grid, true), s: SpectralField::zeros(grid, true) }
    }

    pub fn grid(&self) -> &SpectralGrid {
        self.psi.grid()
    }

    pub fn to_state(&self) -> State {
        vec![self.psi.coeffs().to_vec(), self.s.coeffs().to_vec()]
    }

    pub fn from_state(grid: SpectralGrid, u: &State) -> Result<Self> {
        Ok(Self {
            psi: SpectralField::from_coeffs(grid, u[0].clone(), true)?,
            s: SpectralField::from_coeffs(grid, u[1].clone(), true)?,
        })
    }

    /// max(sup|ψ|, sup|s|).
    pub fn sup(&self) -> f64 {
        self.psi.sup().max(self.s.sup())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { psi: self.psi.sub(&other.psi)?, s: self.s.sub(&other.s)? })
    }
}

pub struct ModulationSystem {
    params: CglParams,
    grid: SpectralGrid,
    variables: Variables,
    linear: LinearOp,
    /// Abort once sup|ψ| or sup|s| exceeds this.
    pub guard: f64,
}

/// Default blow-up guard on sup|ψ| and sup|s|.
pub const DEFAULT_GUARD: f64 = 2.0;

impl ModulationSystem {
    pub fn new(params: CglParams, grid: SpectralGrid, variables: Variables) -> Self {
        let nyq = grid.nyquist();
        let blocks = (0..grid.n())
            .map(|i| {
                let k = grid.wavenumber(i);
                let m = match variables {
                    Variables::LocalWaveNumber => symbol::symbol_v(&params, k),
                    Variables::Phase => symbol::eval_symbol(&params, k),
                };
                if i == nyq {
                    // a real operator acts on the sampled cos(k_N x) through
                    // the real parts of its symbol
                    let r = |z: C| C::new(z.re, 0.0);
                    Mat2::new(r(m.a), r(m.b), r(m.c), r(m.d))
                } else {
                    m
                }
            })
            .collect();
        Self { params, grid, variables, linear: LinearOp::Block(blocks), guard: DEFAULT_GUARD }
    }

    pub fn params(&self) -> &CglParams {
        &self.params
    }

    /// Physical ψ, s and s_x.
    fn physical(&self, u: &[Vec<C>]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let g = &self.grid;
        let to_phys = |mut c: Vec<C>| {
            field::inverse(g, &mut c);
            c.into_iter().map(|z| z.re).collect::<Vec<f64>>()
        };
        let ks = g.wavenumbers();
        let nyq = g.nyquist();
        let deriv = |c: &[C]| -> Vec<C> {
            c.iter()
                .zip(&ks)
                .enumerate()
                .map(|(i, (z, &k))| if i == nyq { C::new(0.0, 0.0) } else { z * C::new(0.0, k) })
                .collect()
        };
        let psi = match self.variables {
            Variables::LocalWaveNumber => to_phys(u[0].clone()),
            Variables::Phase => to_phys(deriv(&u[0])),
        };
        (psi, to_phys(u[1].clone()), to_phys(deriv(&u[1])))
    }

    /// Physical values of the nonlinear brackets
    /// (αs_x² − σβh(s) − αψ² + 2ψs_x, s_x² − σh(s) − ψ² − 2αψs_x).
    pub fn brackets(&self, psi: &[f64], s: &[f64], sx: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let CglParams { alpha: a, beta: b, sigma: sg, .. } = self.params;
        let mut n1 = Vec::with_capacity(psi.len());
        let mut n2 = Vec::with_capacity(psi.len());
        for ((&p, &s), &sx) in psi.iter().zip(s).zip(sx) {
            let hs = h(s);
            n1.push(a * sx * sx - sg * b * hs - a * p * p + 2.0 * p * sx);
            n2.push(sx * sx - sg * hs - p * p - 2.0 * a * p * sx);
        }
        (n1, n2)
    }

    /// L V + N(V) for a state on this system's grid.
    pub fn tendency(&self, v: &ModulationState) -> Result<ModulationState> {
        let u = v.to_state();
        let mut out = vec![vec![C::new(0.0, 0.0); self.grid.n()]; 2];
        self.nonlinear(0.0, &u, &mut out)?;
        out.iter_mut().for_each(|c| field::dealias(&self.grid, c));
        if let LinearOp::Block(blocks) = &self.linear {
            for (i, m) in blocks.iter().enumerate() {
                let [p, q] = m.apply([u[0][i], u[1][i]]);
                out[0][i] += p;
                out[1][i] += q;
            }
        }
        ModulationState::from_state(self.grid, &out)
    }
}

impl System for ModulationSystem {
    fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    fn components(&self) -> usize {
        2
    }

    fn linear(&self) -> &LinearOp {
        &self.linear
    }

    fn nonlinear(&self, t: f64, u: &[Vec<C>], out: &mut [Vec<C>]) -> Result<()> {
        let (psi, s, sx) = self.physical(u);
        let sup = psi.iter().chain(&s).fold(0.0f64, |m, v| m.max(v.abs()));
        if !(sup <= self.guard) {
            return Err(LabError::BlowUp { t, sup });
        }
        let (n1, n2) = self.brackets(&psi, &s, &sx);
        let g = &self.grid;
        let to_spec = |v: Vec<f64>| {
            let mut c: Vec<C> = v.into_iter().map(|x| C::new(x, 0.0)).collect();
            field::forward(g, &mut c);
            c
        };
        let mut c1 = to_spec(n1);
        if self.variables == Variables::LocalWaveNumber {
            let nyq = g.nyquist();
            for (i, z) in c1.iter_mut().enumerate() {
                *z *= if i == nyq { C::new(0.0, 0.0) } else { C::new(0.0, g.wavenumber(i)) };
            }
        }
        out[0] = c1;
        out[1] = to_spec(n2);
        Ok(())
    }
}

/// ∂ₜV = LV + N(V) at one state, products 2/3-dealiased.
#[allow(non_snake_case)]
pub fn rhs_modulation_V(params: &CglParams, v: &ModulationState) -> Result<ModulationState> {
    ModulationSystem::new(*params, *v.grid(), Variables::LocalWaveNumber).tendency(v)
}

/// ∂ₜφ expressed through V:
/// ψ_x + (c − 2α)ψ + αs_xx − 2βσs + 2s_x + αs_x² − σβh(s) − αψ² + 2ψs_x.
pub fn phase_tendency(params: &CglParams, v: &ModulationState) -> Result<SpectralField> {
    let sys = ModulationSystem::new(*params, *v.grid(), Variables::LocalWaveNumber);
    let psi = v.psi.to_real();
    let s = v.s.to_real();
    let sx = v.s.derivative(1).to_real();
    let (n1, _) = sys.brackets(&psi, &s, &sx);
    let mut nl = SpectralField::from_real(*v.grid(), &n1)?;
    nl.dealias();
    let CglParams { alpha: a, beta: b, sigma: sg, c, .. } = *params;
    let lin = v
        .psi
        .map_symbol(|k| C::new(c - 2.0 * a, k), true)
        .add(&v.s.map_symbol(|k| C::new(-a * k * k - 2.0 * b * sg, 2.0 * k), true))?;
    lin.add(&nl)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wave_train_is_an_equilibrium() {
        let p = CglParams::marginal(1.0, 0.0, 0.1).unwrap();
        let g = SpectralGrid::new(64, 100.0).unwrap();
        let r = rhs_modulation_V(&p, &ModulationState::zeros(g)).unwrap();
        assert_eq!(r.sup(), 0.0);
    }

    #[test]
    fn constant_amplitude_restoring_force() {
        let p = CglParams::marginal(0.7, 0.2, 0.1).unwrap();
        let g = SpectralGrid::new(32, 50.0).unwrap();
        for &s0 in &[1e-3, -1e-3, 0.05, -0.05] {
            let v = ModulationState {
                psi: SpectralField::zeros(g, true),
                s: SpectralField::from_fn(g, |_| s0),
            };
            let r = rhs_modulation_V(&p, &v).unwrap();
            let want = -2.0 * p.sigma * s0 - p.sigma * h(s0);
            let got = r.s.to_real();
            assert!(got.iter().all(|x| (x - want).abs() < 1e-13), "{} {want}", got[0]);
            assert!(r.psi.sup() < 1e-14);
            assert!(want * s0 < 0.0);
        }
    }

    #[test]
    fn phase_form_matches_derivative() {
        let p = CglParams::marginal(1.0, 0.3, 0.2).unwrap();
        let g = SpectralGrid::new(64, 80.0).unwrap();
        let phi = SpectralField::from_fn(g, |x| 0.01 * (2.0 * std::f64::consts::PI * x / 80.0).sin());
        let s = SpectralField::from_fn(g, |x| 0.02 * (4.0 * std::f64::consts::PI * x / 80.0).cos());
        let v = ModulationState { psi: phi.derivative(1), s: s.clone() };
        let rv = rhs_modulation_V(&p, &v).unwrap();
        let ft = phase_tendency(&p, &v).unwrap();
        let d = ft.derivative(1).sub(&rv.psi).unwrap().sup();
        assert!(d < 1e-14, "{d}");
        let sys = ModulationSystem::new(p, g, Variables::Phase);
        let rp = sys.tendency(&ModulationState { psi: phi, s }).unwrap();
        assert!(rp.s.sub(&rv.s).unwrap().sup() < 1e-15);
        assert!(rp.psi.sub(&ft).unwrap().sup() < 1e-15);
    }
}
