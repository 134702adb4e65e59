//! The long-wave ansatz ψ = ε²A(εx, ε³t), s = ε²B(εx, ε³t) and its residual
//! Res(V) = ∂ₜV − LV − N(V) in the modulation system.

use eckhaus_core::{AnsatzCoefficients, CglParams};
use serde::{Deserialize, Serialize};

use crate::grid::next_pow2;
use crate::kdv::kdv_rhs;
use crate::modulation::{rhs_modulation_V, ModulationState};
use crate::norms::{analytic_norm, hm_norm, AnalyticNormParams};
use crate::{LabError, Result, SpectralField, SpectralGrid};

/// Largest x-grid the default sizing will produce.
pub const MAX_X_POINTS: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum AnsatzOrder {
    /// B = ν₀A.
    Zero,
    /// B = ν₀A + εν₁∂ξA + ε²ν₂∂ξ²A + ε²ν₃A².
    One,
}

impl TryFrom<u8> for AnsatzOrder {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            0 => Ok(AnsatzOrder::Zero),
            1 => Ok(AnsatzOrder::One),
            _ => Err(format!("ansatz order must be 0 or 1, got {v}")),
        }
    }
}

impl From<AnsatzOrder> for u8 {
    fn from(o: AnsatzOrder) -> u8 {
        match o {
            AnsatzOrder::Zero => 0,
            AnsatzOrder::One => 1,
        }
    }
}

/// x-grid holding A(εx) exactly: L_x = L_ξ/ε and n_x = next_pow2(n_ξ/ε),
/// capped at [`MAX_X_POINTS`] but never below n_ξ.
pub fn x_grid(xi: &SpectralGrid, epsilon: f64) -> Result<SpectralGrid> {
    if !(epsilon > 0.0) {
        return Err(LabError::Precondition(format!("ε = {epsilon} must be positive")));
    }
    let n = next_pow2(xi.n() as f64 / epsilon).min(MAX_X_POINTS).max(xi.n());
    SpectralGrid::new(n, xi.length() / epsilon)
}

fn check_grids(xi: &SpectralGrid, x: &SpectralGrid, epsilon: f64) -> Result<()> {
    let want = xi.length() / epsilon;
    if (x.length() - want).abs() > 1e-12 * want || x.n() < xi.n() {
        return Err(LabError::Grid(format!(
            "x-grid (n = {}, L = {}) cannot hold the scaled ξ-grid (n = {}, L/ε = {want})",
            x.n(),
            x.length(),
            xi.n()
        )));
    }
    Ok(())
}

/// B(ξ) at the given order.
pub fn slaved_b(a: &SpectralField, c: &AnsatzCoefficients, epsilon: f64, order: AnsatzOrder) -> Result<SpectralField> {
    let b0 = a.scaled(c.nu0);
    match order {
        AnsatzOrder::Zero => Ok(b0),
        AnsatzOrder::One => {
            let e = epsilon;
            b0.add(&a.derivative(1).scaled(e * c.nu1))?
                .add(&a.derivative(2).scaled(e * e * c.nu2))?
                .add(&a.mul(a)?.scaled(e * e * c.nu3))
        }
    }
}

/// V*_app on `xgrid` from A on its ξ-grid.
#[allow(non_snake_case)]
pub fn build_ansatz_V(
    a: &SpectralField,
    c: &AnsatzCoefficients,
    p: &CglParams,
    order: AnsatzOrder,
    xgrid: SpectralGrid,
) -> Result<ModulationState> {
    let e = p.epsilon;
    check_grids(a.grid(), &xgrid, e)?;
    let b = slaved_b(a, c, e, order)?;
    Ok(ModulationState {
        psi: a.scaled(e * e).stretched(xgrid)?,
        s: b.scaled(e * e).stretched(xgrid)?,
    })
}

/// ∂ₜV*_app by the chain rule, with ∂τA taken from the KdV right-hand side.
pub fn ansatz_time_derivative(
    a: &SpectralField,
    c: &AnsatzCoefficients,
    p: &CglParams,
    order: AnsatzOrder,
    xgrid: SpectralGrid,
) -> Result<ModulationState> {
    let e = p.epsilon;
    check_grids(a.grid(), &xgrid, e)?;
    let at = kdv_rhs(a, c.gamma_lin, c.gamma_non)?;
    let mut bt = at.scaled(c.nu0);
    if order == AnsatzOrder::One {
        bt = bt
            .add(&at.derivative(1).scaled(e * c.nu1))?
            .add(&at.derivative(2).scaled(e * e * c.nu2))?
            .add(&a.mul(&at)?.scaled(2.0 * e * e * c.nu3))?;
    }
    let e5 = e.powi(5);
    Ok(ModulationState { psi: at.scaled(e5).stretched(xgrid)?, s: bt.scaled(e5).stretched(xgrid)? })
}

/// Res(V) = ∂ₜV − LV − N(V) of the ansatz built from one KdV state.
#[allow(non_snake_case)]
pub fn residual_V(
    a: &SpectralField,
    c: &AnsatzCoefficients,
    p: &CglParams,
    order: AnsatzOrder,
    xgrid: SpectralGrid,
) -> Result<ModulationState> {
    let v = build_ansatz_V(a, c, p, order, xgrid)?;
    let dt = ansatz_time_derivative(a, c, p, order, xgrid)?;
    dt.sub(&rhs_modulation_V(p, &v)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualNorms {
    pub t: f64,
    pub sup: f64,
    pub hm: f64,
    pub analytic: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormSelection {
    /// Sobolev index m of the H^m norm.
    pub m: f64,
    /// Strip width μ of the analytic norm, in x units.
    pub mu: f64,
}

impl Default for NormSelection {
    fn default() -> Self {
        Self { m: 1.0, mu: 0.0 }
    }
}

fn pair(u: &ModulationState, f: impl Fn(&SpectralField) -> f64) -> f64 {
    f(&u.psi).hypot(f(&u.s))
}

pub fn residual_norms(t: f64, r: &ModulationState, sel: NormSelection) -> ResidualNorms {
    ResidualNorms {
        t,
        sup: r.sup(),
        hm: pair(r, |u| hm_norm(u, sel.m)),
        analytic: pair(r, |u| analytic_norm(u, AnalyticNormParams { mu: sel.mu, s: sel.m })),
    }
}

/// Residual norms along a KdV trajectory recorded at modulation times
/// `times` (τ = ε³t).
pub fn residual_series(
    states: &[SpectralField],
    times: &[f64],
    c: &AnsatzCoefficients,
    p: &CglParams,
    order: AnsatzOrder,
    xgrid: SpectralGrid,
    sel: NormSelection,
) -> Result<Vec<ResidualNorms>> {
    states
        .iter()
        .zip(times)
        .map(|(a, &t)| Ok(residual_norms(t, &residual_V(a, c, p, order, xgrid)?, sel)))
        .collect()
}

/// Largest relative discrepancy between the chain-rule ∂ₜV and a
/// five-point central difference over uniformly spaced records.
///
/// Relative to sup|∂ₜV| over the checked records.
pub fn fd_time_derivative_check(
    states: &[SpectralField],
    times: &[f64],
    c: &AnsatzCoefficients,
    p: &CglParams,
    order: AnsatzOrder,
    xgrid: SpectralGrid,
) -> Result<f64> {
    if states.len() != times.len() || states.len() < 5 {
        return Err(LabError::Stride(format!("need at least 5 records, got {}", states.len())));
    }
    let h = times[1] - times[0];
    for w in times.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1e-300) {
            return Err(LabError::Stride(format!("spacing {} differs from {h}", w[1] - w[0])));
        }
    }
    if !(h > 0.0) {
        return Err(LabError::Stride(format!("spacing {h} must be positive")));
    }
    let v: Vec<ModulationState> =
        states.iter().map(|a| build_ansatz_V(a, c, p, order, xgrid)).collect::<Result<_>>()?;
    let mut diff = 0.0f64;
    let mut scale = 0.0f64;
    for i in 2..states.len() - 2 {
        let exact = ansatz_time_derivative(&states[i], c, p, order, xgrid)?;
        let fd = |f: fn(&ModulationState) -> &SpectralField| -> Result<SpectralField> {
            f(&v[i + 1])
                .sub(f(&v[i - 1]))?
                .scaled(8.0)
                .sub(&f(&v[i + 2]).sub(f(&v[i - 2]))?)
                .map(|x| x.scaled(1.0 / (12.0 * h)))
        };
        let approx = ModulationState { psi: fd(|m| &m.psi)?, s: fd(|m| &m.s)? };
        diff = diff.max(approx.sub(&exact)?.sup());
        scale = scale.max(exact.sup());
    }
    Ok(if scale > 0.0 { diff / scale } else { diff })
}
