//! Improved-ansatz hierarchy: A₀ solves KdV, each A_m (m ≥ 1) a linearized
//! inhomogeneous KdV equation
//!
//! ```text
//! ∂τA_m = γ_lin ∂ξ³A_m + 2γ_non ∂ξ(A₀A_m) + f_{A,m}
//! B_m   = (f_{B,m} − 2A_m)/(2σ_s)
//! ```
//!
//! with forcings f_{A,m}, f_{B,m} assembled from user-supplied coefficient
//! tables over the lower levels. No tables ship with the crate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::norms::{analytic_norm, AnalyticNormParams};
use crate::stepper::{simulate_with, LinearOp, StepperConfig, System};
use crate::{field, LabError, Result, SpectralField, SpectralGrid};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub field: FieldKind,
    pub level: usize,
    #[serde(default)]
    pub deriv: u32,
}

/// coeff · ∂ξ^deriv (Π factors).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: f64,
    #[serde(default)]
    pub deriv: u32,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelTable {
    pub index: usize,
    #[serde(default)]
    pub f_a: Vec<Term>,
    #[serde(default)]
    pub f_b: Vec<Term>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientTables {
    #[serde(default)]
    pub level: Vec<LevelTable>,
}

impl CoefficientTables {
    pub fn from_toml(s: &str) -> Result<Self> {
        let t: Self = toml::from_str(s).map_err(|e| LabError::Config(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    /// Every factor of level m refers to a strictly lower level.
    pub fn validate(&self) -> Result<()> {
        for lt in &self.level {
            if lt.index == 0 {
                return Err(LabError::Config("level 0 is the KdV equation and takes no table".into()));
            }
            for term in lt.f_a.iter().chain(&lt.f_b) {
                if term.factors.is_empty() {
                    return Err(LabError::Config(format!("level {}: term without factors", lt.index)));
                }
                if let Some(f) = term.factors.iter().find(|f| f.level >= lt.index) {
                    return Err(LabError::Config(format!(
                        "level {}: factor refers to level {}",
                        lt.index, f.level
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, m: usize) -> Option<&LevelTable> {
        self.level.iter().find(|l| l.index == m)
    }
}

/// One level of the hierarchy at a fixed τ.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyLevel {
    pub index: usize,
    pub a: SpectralField,
    pub b: Option<SpectralField>,
}

fn deriv_coeffs(grid: &SpectralGrid, c: &[C], d: u32) -> Vec<C> {
    if d == 0 {
        return c.to_vec();
    }
    let nyq = grid.nyquist();
    c.iter()
        .enumerate()
        .map(|(i, &z)| if i == nyq { C::new(0.0, 0.0) } else { z * C::new(0.0, grid.wavenumber(i)).powu(d) })
        .collect()
}

fn to_phys(grid: &SpectralGrid, mut c: Vec<C>) -> Vec<f64> {
    field::inverse(grid, &mut c);
    c.into_iter().map(|z| z.re).collect()
}

fn to_spec(grid: &SpectralGrid, v: &[f64]) -> Vec<C> {
    let mut c: Vec<C> = v.iter().map(|&x| C::new(x, 0.0)).collect();
    field::forward(grid, &mut c);
    c
}

/// Σ terms evaluated from the A and B coefficients of the lower levels.
fn eval_terms(grid: &SpectralGrid, terms: &[Term], a: &[Vec<C>], b: &[Vec<C>]) -> Vec<C> {
    let n = grid.n();
    let mut out = vec![C::new(0.0, 0.0); n];
    for term in terms {
        let mut prod = vec![term.coeff; n];
        for f in &term.factors {
            let src = match f.field {
                FieldKind::A => &a[f.level],
                FieldKind::B => &b[f.level],
            };
            let v = to_phys(grid, deriv_coeffs(grid, src, f.deriv));
            prod.iter_mut().zip(&v).for_each(|(p, x)| *p *= x);
        }
        let spec = deriv_coeffs(grid, &to_spec(grid, &prod), term.deriv);
        out.iter_mut().zip(&spec).for_each(|(o, s)| *o += s);
    }
    out
}

/// The coupled system for (A₀, …, A_N).
pub struct HierarchySystem {
    grid: SpectralGrid,
    gamma_non: f64,
    sigma_s: f64,
    tables: Vec<LevelTable>,
    linear: LinearOp,
    pub guard: f64,
}

impl HierarchySystem {
    pub fn new(
        grid: SpectralGrid,
        gamma_lin: f64,
        gamma_non: f64,
        sigma_s: f64,
        tables: &CoefficientTables,
        order: usize,
    ) -> Result<Self> {
        tables.validate()?;
        let tabs = (1..=order).map(|m| tables.get(m).cloned().ok_or(LabError::MissingTable(m))).collect::<Result<_>>()?;
        let lin = grid.wavenumbers().into_iter().map(|k| C::new(0.0, -gamma_lin * k * k * k)).collect();
        Ok(Self { grid, gamma_non, sigma_s, tables: tabs, linear: LinearOp::Scalar(lin), guard: f64::INFINITY })
    }

    fn f_b(&self, m: usize, a: &[Vec<C>], b: &[Vec<C>]) -> Vec<C> {
        match m {
            0 => vec![C::new(0.0, 0.0); self.grid.n()],
            _ => eval_terms(&self.grid, &self.tables[m - 1].f_b, a, b),
        }
    }

    /// B_m = (f_{B,m} − 2A_m)/(2σ_s) for every level.
    pub fn slaved(&self, a: &[Vec<C>]) -> Vec<Vec<C>> {
        let mut b: Vec<Vec<C>> = Vec::with_capacity(a.len());
        for m in 0..a.len() {
            let fb = self.f_b(m, a, &b);
            b.push(fb.iter().zip(&a[m]).map(|(f, x)| (f - x * 2.0) / (2.0 * self.sigma_s)).collect());
        }
        b
    }
}

impl System for HierarchySystem {
    fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    fn components(&self) -> usize {
        self.tables.len() + 1
    }

    fn linear(&self) -> &LinearOp {
        &self.linear
    }

    fn nonlinear(&self, t: f64, u: &[Vec<C>], out: &mut [Vec<C>]) -> Result<()> {
        let g = &self.grid;
        let a0 = to_phys(g, u[0].clone());
        let sup = a0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(sup <= self.guard) {
            return Err(LabError::BlowUp { t, sup });
        }
        let b = self.slaved(u);
        for m in 0..u.len() {
            let am = if m == 0 { a0.clone() } else { to_phys(g, u[m].clone()) };
            let factor = if m == 0 { 1.0 } else { 2.0 };
            let prod: Vec<f64> = a0.iter().zip(&am).map(|(x, y)| factor * self.gamma_non * x * y).collect();
            let mut spec = deriv_coeffs(g, &to_spec(g, &prod), 1);
            if m > 0 {
                let fa = eval_terms(g, &self.tables[m - 1].f_a, u, &b);
                spec.iter_mut().zip(&fa).for_each(|(s, f)| *s += f);
            }
            out[m] = spec;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StripConfig {
    /// Decay rate η of the strip widths μ_m(τ) = μ_{m,0} − ητ.
    pub eta: f64,
    /// μ_{m,0} = mu0 − m·mu_step.
    pub mu0: f64,
    pub mu_step: f64,
    /// Smallest admissible strip width μ*.
    pub mu_star: f64,
    /// Sobolev index of the weighted norm.
    pub s: f64,
    /// Bounded means sup_τ‖·‖ ≤ bound_factor·‖·‖ at τ = 0 for every level
    /// with nonzero initial data, and finite norms otherwise.
    pub bound_factor: f64,
}

impl Default for StripConfig {
    fn default() -> Self {
        Self { eta: 8.0, mu0: 1.0, mu_step: 0.1, mu_star: 0.1, s: 1.0, bound_factor: 1.0 + 1e-6 }
    }
}

impl StripConfig {
    pub fn mu(&self, m: usize, tau: f64) -> f64 {
        self.mu0 - m as f64 * self.mu_step - self.eta * tau
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripReport {
    pub eta: f64,
    pub taus: Vec<f64>,
    /// norms[m][i]: weighted norm of A_m at taus[i].
    pub norms: Vec<Vec<f64>>,
    /// First (level, μ, τ) at which μ_m(τ) dropped below μ*.
    pub exhausted: Option<(usize, f64, f64)>,
    pub bounded: bool,
}

#[derive(Debug, Clone)]
pub struct HierarchyRun {
    pub taus: Vec<f64>,
    /// levels[i]: all levels at taus[i], each with its slaved B.
    pub levels: Vec<Vec<HierarchyLevel>>,
    pub strip: StripReport,
}

/// Integrates levels 0..=order from the supplied initial levels (missing
/// levels start from zero) and records the shrinking-strip norms.
pub fn hierarchy_extend(
    initial: &[HierarchyLevel],
    system: &HierarchySystem,
    stepper: StepperConfig,
    strip: StripConfig,
) -> Result<HierarchyRun> {
    let grid = *system.grid();
    let ncomp = system.components();
    if initial.first().map(|l| l.index) != Some(0) {
        return Err(LabError::Precondition("level 0 initial data is required".into()));
    }
    let mut u0 = vec![vec![C::new(0.0, 0.0); grid.n()]; ncomp];
    for l in initial {
        if l.index >= ncomp {
            return Err(LabError::MissingTable(l.index));
        }
        if l.a.grid() != &grid {
            return Err(LabError::GridMismatch(l.a.grid().n(), grid.n()));
        }
        u0[l.index] = l.a.coeffs().to_vec();
    }
    let mut run = HierarchyRun {
        taus: Vec::new(),
        levels: Vec::new(),
        strip: StripReport { eta: strip.eta, taus: Vec::new(), norms: vec![Vec::new(); ncomp], exhausted: None, bounded: true },
    };
    simulate_with(system, u0, stepper, |tau, u| {
        let b = system.slaved(u);
        let mut lv = Vec::with_capacity(ncomp);
        for m in 0..ncomp {
            let a = SpectralField::from_coeffs(grid, u[m].clone(), true)?;
            let mu = strip.mu(m, tau);
            if mu < strip.mu_star && run.strip.exhausted.is_none() {
                run.strip.exhausted = Some((m, mu, tau));
            }
            run.strip.norms[m].push(analytic_norm(&a, AnalyticNormParams { mu: mu.max(0.0), s: strip.s }));
            lv.push(HierarchyLevel { index: m, b: Some(SpectralField::from_coeffs(grid, b[m].clone(), true)?), a });
        }
        run.taus.push(tau);
        run.strip.taus.push(tau);
        run.levels.push(lv);
        Ok(())
    })?;
    run.strip.bounded = run.strip.exhausted.is_none()
        && run.strip.norms.iter().all(|n| {
            let n0 = n[0];
            n.iter().all(|&x| x.is_finite() && (n0 == 0.0 || x <= strip.bound_factor * n0))
        });
    Ok(run)
}

/// Runs the level-0 strip bookkeeping for each η and returns the reports
/// with the smallest η whose norms stayed bounded.
pub fn eta_sweep(
    initial: &[HierarchyLevel],
    system: &HierarchySystem,
    stepper: StepperConfig,
    strip: StripConfig,
    etas: &[f64],
) -> Result<(Vec<StripReport>, Option<f64>)> {
    let mut reports = Vec::with_capacity(etas.len());
    for &eta in etas {
        reports.push(hierarchy_extend(initial, system, stepper, StripConfig { eta, ..strip })?.strip);
    }
    let best = reports.iter().filter(|r| r.bounded).map(|r| r.eta).fold(None, |m: Option<f64>, e| {
        Some(m.map_or(e, |m| m.min(e)))
    });
    Ok((reports, best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kdv::KdvProfile;
    use std::f64::consts::PI;

    #[test]
    fn tables_parse_and_validate() {
        let t = CoefficientTables::from_toml(
            r#"
            [[level]]
            index = 1
            f_a = [{ coeff = 0.5, deriv = 1, factors = [{ field = "A", level = 0, deriv = 2 }] }]
            f_b = [{ coeff = -1.0, factors = [{ field = "B", level = 0 }, { field = "A", level = 0 }] }]
            "#,
        )
        .unwrap();
        assert_eq!(t.level[0].f_a[0].factors[0].deriv, 2);
        let bad = "[[level]]\nindex = 1\nf_a = [{ coeff = 1.0, factors = [{ field = \"A\", level = 1 }] }]";
        assert!(matches!(CoefficientTables::from_toml(bad), Err(LabError::Config(_))));
    }

    #[test]
    fn missing_table_is_reported() {
        let g = SpectralGrid::new(32, 10.0).unwrap();
        let r = HierarchySystem::new(g, -1.0, -1.0, 2.0, &CoefficientTables::default(), 1);
        assert!(matches!(r, Err(LabError::MissingTable(1))));
    }

    #[test]
    fn b0_is_slaved_exactly() {
        let g = SpectralGrid::new(64, 2.0 * PI * 8.0).unwrap();
        let sys = HierarchySystem::new(g, -1.0, -1.0, 2.0, &CoefficientTables::default(), 0).unwrap();
        let a = KdvProfile::default().sample(g, true);
        let b = sys.slaved(&[a.coeffs().to_vec()]);
        let d = b[0].iter().zip(a.coeffs()).map(|(b, a)| (b + a * 0.5).norm()).fold(0.0, f64::max);
        assert!(d < 1e-15);
    }
}
