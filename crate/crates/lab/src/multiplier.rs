use std::fmt;
use std::sync::Arc;

use eckhaus_core::{transforms, Mat2};
use num_complex::Complex64;

use crate::{LabError, Result, SpectralField};

type Symbol = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
type MatSymbol = Arc<dyn Fn(f64) -> Mat2 + Send + Sync>;

/// Fourier multiplier (g_op u)^(k) = g(k) û(k).
#[derive(Clone)]
pub struct Multiplier {
    symbol: Symbol,
    pub label: String,
    /// g(−k) = conj(g(k)), so real fields stay real.
    pub real_symmetric: bool,
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier").field("label", &self.label).finish()
    }
}

impl Multiplier {
    pub fn new(
        label: impl Into<String>,
        real_symmetric: bool,
        symbol: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { symbol: Arc::new(symbol), label: label.into(), real_symmetric }
    }

    pub fn identity() -> Self {
        Self::new("id", true, |_| Complex64::new(1.0, 0.0))
    }

    /// ∂ₓ^order.
    pub fn derivative(order: u32) -> Self {
        Self::new(format!("d^{order}"), true, move |k| Complex64::new(0.0, k).powu(order))
    }

    pub fn eval(&self, k: f64) -> Complex64 {
        (self.symbol)(k)
    }

    /// Product of symbols; applying it equals applying both factors.
    pub fn compose(&self, other: &Multiplier) -> Self {
        let (a, b) = (self.symbol.clone(), other.symbol.clone());
        Self {
            symbol: Arc::new(move |k| a(k) * b(k)),
            label: format!("{}∘{}", self.label, other.label),
            real_symmetric: self.real_symmetric && other.real_symmetric,
        }
    }
}

/// θ̂(k) = ik·min{1, |k|⁻¹}.
pub fn theta_symbol() -> Multiplier {
    Multiplier::new("theta", true, transforms::theta_hat)
}

pub fn apply_multiplier(m: &Multiplier, u: &SpectralField) -> SpectralField {
    u.map_symbol(|k| m.eval(k), m.real_symmetric)
}

/// 2×2 multiplier acting on field pairs.
#[derive(Clone)]
pub struct MatMultiplier {
    symbol: MatSymbol,
    pub label: String,
}

impl fmt::Debug for MatMultiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatMultiplier").field("label", &self.label).finish()
    }
}

impl MatMultiplier {
    pub fn new(label: impl Into<String>, symbol: impl Fn(f64) -> Mat2 + Send + Sync + 'static) -> Self {
        Self { symbol: Arc::new(symbol), label: label.into() }
    }

    pub fn eval(&self, k: f64) -> Mat2 {
        (self.symbol)(k)
    }

    pub fn apply(&self, a: &SpectralField, b: &SpectralField) -> Result<(SpectralField, SpectralField)> {
        if a.grid() != b.grid() {
            return Err(LabError::GridMismatch(a.grid().n(), b.grid().n()));
        }
        let grid = *a.grid();
        let mut x = a.coeffs().to_vec();
        let mut y = b.coeffs().to_vec();
        for i in 0..grid.n() {
            let [p, q] = self.eval(grid.wavenumber(i)).apply([x[i], y[i]]);
            x[i] = p;
            y[i] = q;
        }
        Ok((
            SpectralField::from_coeffs(grid, x, false)?,
            SpectralField::from_coeffs(grid, y, false)?,
        ))
    }
}
