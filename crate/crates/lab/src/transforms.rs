//! The changes of variables V → Y → Z → 𝒵 applied to pairs of fields.

use eckhaus_core::{transforms as sym, CglParams, Mat2};
use num_complex::Complex64;

use crate::{LabError, Result, SpectralField, SpectralGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Two components on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPair {
    pub first: SpectralField,
    pub second: SpectralField,
}

impl FieldPair {
    pub fn new(first: SpectralField, second: SpectralField) -> Result<Self> {
        if first.grid() != second.grid() {
            return Err(LabError::GridMismatch(first.grid().n(), second.grid().n()));
        }
        Ok(Self { first, second })
    }

    pub fn grid(&self) -> &SpectralGrid {
        self.first.grid()
    }

    /// Largest coefficient-wise distance to another pair.
    pub fn max_coeff_diff(&self, other: &FieldPair) -> f64 {
        let d = |a: &SpectralField, b: &SpectralField| {
            a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
        };
        d(&self.first, &other.first).max(d(&self.second, &other.second))
    }

    fn map_blocks(&self, mut m: impl FnMut(f64) -> Result<Mat2>, is_real: bool) -> Result<Self> {
        let grid = *self.grid();
        let mut a = self.first.coeffs().to_vec();
        let mut b = self.second.coeffs().to_vec();
        for i in 0..grid.n() {
            let [x, y] = m(grid.wavenumber(i))?.apply([a[i], b[i]]);
            a[i] = x;
            b[i] = y;
        }
        Ok(Self {
            first: SpectralField::from_coeffs(grid, a, is_real && self.first.is_real())?,
            second: SpectralField::from_coeffs(grid, b, is_real && self.second.is_real())?,
        })
    }
}

/// S_θ: first component times min{1, |k|⁻¹} (forward) or max{1, |k|}
/// (inverse); the second component is untouched.
pub fn s_theta(v: &FieldPair, direction: Direction) -> Result<FieldPair> {
    v.map_blocks(
        |k| {
            Ok(match direction {
                Direction::Forward => sym::s_theta(k),
                Direction::Inverse => sym::s_theta_inv(k),
            })
        },
        true,
    )
}

/// θ⁻¹, recovering φ from χ = θ(φ) up to its mean.
///
/// The k = 0 mode must vanish to within `tol`; the result is mean-free.
pub fn theta_inverse(chi: &SpectralField, tol: f64) -> Result<SpectralField> {
    let z = chi.coeffs()[0].norm();
    if z > tol {
        return Err(LabError::ZeroMode(z));
    }
    Ok(chi.map_symbol(
        |k| if k == 0.0 { Complex64::new(0.0, 0.0) } else { sym::theta_hat(k).inv() },
        true,
    ))
}

/// Per-wavenumber Ŝ_diag or its inverse; the output is complex in general.
pub fn s_diag(p: &CglParams, y: &FieldPair, direction: Direction) -> Result<FieldPair> {
    y.map_blocks(
        |k| {
            Ok(match direction {
                Direction::Forward => sym::s_diag(p, k)?,
                Direction::Inverse => sym::s_diag_inv(p, k)?,
            })
        },
        false,
    )
}

/// S_ω: both components times e^{μ|k|} (forward) or e^{−μ|k|} (inverse).
///
/// The forward weight is checked against overflow; the offending mode with
/// the largest |k| is reported.
pub fn s_omega(mu: f64, y: &FieldPair, direction: Direction) -> Result<FieldPair> {
    let sign = match direction {
        Direction::Forward => 1.0,
        Direction::Inverse => -1.0,
    };
    let out = y.map_blocks(
        |k| {
            let w = Complex64::new(sym::omega_hat(sign * mu, k), 0.0);
            Ok(Mat2::scalar(w))
        },
        true,
    )?;
    let grid = *y.grid();
    let mut worst: Option<f64> = None;
    for comp in [&out.first, &out.second] {
        for (i, c) in comp.coeffs().iter().enumerate() {
            if !(c.re.is_finite() && c.im.is_finite()) {
                let k = grid.wavenumber(i);
                if worst.is_none_or(|w| k.abs() > w.abs()) {
                    worst = Some(k);
                }
            }
        }
    }
    match worst {
        Some(k) => Err(LabError::Overflow { k, mu }),
        None => Ok(out),
    }
}
