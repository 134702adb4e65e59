use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{LabError, Result, SpectralGrid};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(n)
        } else {
            p.plan_fft_inverse(n)
        }
    })
}

/// Physical samples to coefficients, û = Δx/√(2π)·Σ u_m e^{−ik x_m}.
pub fn forward(grid: &SpectralGrid, data: &mut [Complex64]) {
    plan(grid.n(), true).process(data);
    let scale = grid.dx() / (2.0 * PI).sqrt();
    data.iter_mut().for_each(|z| *z *= scale);
}

/// Coefficients to physical samples, inverse of [`forward`].
pub fn inverse(grid: &SpectralGrid, data: &mut [Complex64]) {
    plan(grid.n(), false).process(data);
    let scale = (2.0 * PI).sqrt() / grid.length();
    data.iter_mut().for_each(|z| *z *= scale);
}

/// Fourier coefficients of a periodic function.
///
/// With the normalisation of [`forward`] the discrete Parseval identity reads
/// Δx Σ|u|² = Δk Σ|û|².
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: SpectralGrid,
    coeffs: Vec<Complex64>,
    is_real: bool,
}

impl SpectralField {
    pub fn zeros(grid: SpectralGrid, is_real: bool) -> Self {
        Self { grid, coeffs: vec![Complex64::new(0.0, 0.0); grid.n()], is_real }
    }

    pub fn from_coeffs(grid: SpectralGrid, coeffs: Vec<Complex64>, is_real: bool) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(LabError::GridMismatch(coeffs.len(), grid.n()));
        }
        Ok(Self { grid, coeffs, is_real })
    }

    pub fn from_real(grid: SpectralGrid, values: &[f64]) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(LabError::GridMismatch(values.len(), grid.n()));
        }
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        forward(&grid, &mut data);
        let mut f = Self { grid, coeffs: data, is_real: true };
        f.symmetrize();
        Ok(f)
    }

    pub fn from_complex(grid: SpectralGrid, values: &[Complex64]) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(LabError::GridMismatch(values.len(), grid.n()));
        }
        let mut data = values.to_vec();
        forward(&grid, &mut data);
        Ok(Self { grid, coeffs: data, is_real: false })
    }

    pub fn from_fn(grid: SpectralGrid, f: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = grid.points().into_iter().map(f).collect();
        Self::from_real(grid, &values).expect("sizes match by construction")
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn set_real(&mut self, is_real: bool) {
        self.is_real = is_real;
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        let mut data = self.coeffs.clone();
        inverse(&self.grid, &mut data);
        data
    }

    /// Physical samples; the imaginary parts are discarded.
    pub fn to_real(&self) -> Vec<f64> {
        self.to_complex().into_iter().map(|z| z.re).collect()
    }

    /// Largest violation of û(−k) = conj(û(k)).
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.grid.n();
        (0..n)
            .map(|i| (self.coeffs[(n - i) % n] - self.coeffs[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Projects onto conjugate-symmetric coefficients.
    pub fn symmetrize(&mut self) {
        let n = self.grid.n();
        for i in 0..=n / 2 {
            let j = (n - i) % n;
            let avg = 0.5 * (self.coeffs[i] + self.coeffs[j].conj());
            self.coeffs[i] = avg;
            self.coeffs[j] = avg.conj();
        }
    }

    /// Multiplies every coefficient by g(k).
    ///
    /// For real fields the Nyquist mode cos(k_N x) is acted on by Re g(k_N),
    /// which is what a real operator does to that sampled mode.
    pub fn map_symbol(&self, g: impl Fn(f64) -> Complex64, preserves_reality: bool) -> Self {
        let is_real = self.is_real && preserves_reality;
        let nyq = self.grid.nyquist();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let mut s = g(self.grid.wavenumber(i));
                if is_real && i == nyq {
                    s = Complex64::new(s.re, 0.0);
                }
                c * s
            })
            .collect();
        Self { grid: self.grid, coeffs, is_real }
    }

    pub fn derivative(&self, order: u32) -> Self {
        self.map_symbol(|k| Complex64::new(0.0, k).powu(order), true)
    }

    /// Zeroes every mode with |j| > n/3.
    pub fn dealias(&mut self) {
        dealias(&self.grid, &mut self.coeffs);
    }

    /// v(x) = u(x − a).
    pub fn translated(&self, a: f64) -> Self {
        self.map_symbol(|k| Complex64::from_polar(1.0, -k * a), true)
    }

    /// Spectral interpolation at an arbitrary point.
    pub fn eval_at(&self, x: f64) -> Complex64 {
        let nyq = self.grid.nyquist();
        let sum: Complex64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let k = self.grid.wavenumber(i);
                if i == nyq && self.is_real {
                    c * (k * x).cos()
                } else {
                    c * Complex64::from_polar(1.0, k * x)
                }
            })
            .sum();
        sum * ((2.0 * PI).sqrt() / self.grid.length())
    }

    /// Spatial mean (1/L)∫u.
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0] * ((2.0 * PI).sqrt() / self.grid.length())
    }

    /// ∫₀ᴸ u dx.
    pub fn integral(&self) -> Complex64 {
        self.coeffs[0] * (2.0 * PI).sqrt()
    }

    /// Mean-free antiderivative; the mean of `self` must be handled by the
    /// caller.
    pub fn antiderivative(&self) -> Self {
        self.map_symbol(
            |k| if k == 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, -1.0 / k) },
            true,
        )
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { grid: self.grid, coeffs: self.coeffs.iter().map(|&c| c * a).collect(), is_real: self.is_real }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(LabError::GridMismatch(self.grid.n(), other.grid.n()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid, coeffs, is_real: self.is_real && other.is_real })
    }

    /// Pointwise product evaluated in physical space, 2/3-dealiased.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(LabError::GridMismatch(self.grid.n(), other.grid.n()));
        }
        let a = self.to_complex();
        let b = other.to_complex();
        let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let mut f = Self::from_complex(self.grid, &prod)?;
        f.is_real = self.is_real && other.is_real;
        if f.is_real {
            f.symmetrize();
        }
        f.dealias();
        Ok(f)
    }

    /// Largest |u| over the grid points.
    pub fn sup(&self) -> f64 {
        self.to_complex().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Re-embeds a field into a longer grid as u(x/ratio), ratio being the
    /// length quotient. Mode j keeps its index; the coefficient picks up the
    /// factor `ratio` and the Nyquist mode of the source is dropped.
    pub fn stretched(&self, target: SpectralGrid) -> Result<Self> {
        let ratio = target.length() / self.grid.length();
        if target.n() < self.grid.n() {
            return Err(LabError::Grid(format!(
                "target grid ({}) coarser than source ({})",
                target.n(),
                self.grid.n()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); target.n()];
        for i in 0..self.grid.n() {
            if i == self.grid.nyquist() {
                continue;
            }
            let j = self.grid.mode(i);
            let t = target.index(j).expect("finer grid holds every mode");
            out[t] = self.coeffs[i] * ratio;
        }
        Ok(Self { grid: target, coeffs: out, is_real: self.is_real })
    }
}

/// 2/3-rule truncation in place.
pub fn dealias(grid: &SpectralGrid, coeffs: &mut [Complex64]) {
    for (i, c) in coeffs.iter_mut().enumerate() {
        if !grid.in_dealiased_band(i) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}
