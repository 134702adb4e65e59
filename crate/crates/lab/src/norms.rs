//! Discrete weighted Fourier norms with the Δk rectangle rule.

use serde::{Deserialize, Serialize};

use crate::{transforms::FieldPair, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticNormParams {
    /// Strip half-width μ ≥ 0.
    pub mu: f64,
    /// Sobolev index.
    pub s: f64,
}

/// (Δk Σ e^{2μ|k|}(1 + k²)^s |û(k)|²)^{1/2}; μ = 0 gives the H^s norm.
///
/// May return +∞ when the weight overflows.
pub fn analytic_norm(u: &SpectralField, p: AnalyticNormParams) -> f64 {
    let g = u.grid();
    let sum: f64 = u
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = g.wavenumber(i);
            (2.0 * p.mu * k.abs()).exp() * (1.0 + k * k).powf(p.s) * c.norm_sqr()
        })
        .sum();
    (g.dk() * sum).sqrt()
}

pub fn hm_norm(u: &SpectralField, m: f64) -> f64 {
    analytic_norm(u, AnalyticNormParams { mu: 0.0, s: m })
}

/// Δk Σ (1 + |k|^m) e^{μ|k|} |û(k)|.
pub fn w_norm(u: &SpectralField, mu: f64, m: f64) -> f64 {
    let g = u.grid();
    let sum: f64 = u
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = g.wavenumber(i).abs();
            (1.0 + k.powf(m)) * (mu * k).exp() * c.norm()
        })
        .sum();
    g.dk() * sum
}

/// max over grid points of |u|.
pub fn sup_norm(u: &SpectralField) -> f64 {
    u.sup()
}

/// (Δx Σ|u|²)^{1/2} computed in physical space.
pub fn l2_physical(u: &SpectralField) -> f64 {
    let dx = u.grid().dx();
    (u.to_complex().iter().map(|z| z.norm_sqr()).sum::<f64>() * dx).sqrt()
}

/// √(‖a‖² + ‖b‖²) for a pair under a scalar norm.
pub fn pair_norm(v: &FieldPair, norm: impl Fn(&SpectralField) -> f64) -> f64 {
    norm(&v.first).hypot(norm(&v.second))
}

/// max of the two component norms, used for sup norms of pairs.
pub fn pair_max(v: &FieldPair, norm: impl Fn(&SpectralField) -> f64) -> f64 {
    norm(&v.first).max(norm(&v.second))
}
