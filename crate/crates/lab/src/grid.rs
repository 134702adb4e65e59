use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{LabError, Result};

/// Periodic grid of `n` points on [0, length).
///
/// Coefficients are stored in FFT order: index `i` carries the mode
/// j = i for i ≤ n/2 and j = i − n above, so the Nyquist mode sits at
/// +n/2 and the wavenumber set is {2πj/L : −n/2 < j ≤ n/2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    n: usize,
    length: f64,
}

impl SpectralGrid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(LabError::Grid(format!("n = {n} must be a power of two ≥ 2")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(LabError::Grid(format!("length {length} must be positive")));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Signed mode number of storage index `i`.
    pub fn mode(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Storage index of signed mode `j`, if it exists on this grid.
    pub fn index(&self, j: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if j > -half && j <= half {
            Some(j.rem_euclid(self.n as i64) as usize)
        } else {
            None
        }
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        self.dk() * self.mode(i) as f64
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    pub fn nyquist(&self) -> usize {
        self.n / 2
    }

    pub fn points(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n).map(|i| i as f64 * dx).collect()
    }

    /// Whether storage index `i` survives the 2/3 truncation.
    pub fn in_dealiased_band(&self, i: usize) -> bool {
        3 * self.mode(i).unsigned_abs() as usize <= self.n
    }
}

/// Smallest power of two ≥ `x`.
pub fn next_pow2(x: f64) -> usize {
    let n = x.ceil().max(2.0) as usize;
    n.next_power_of_two()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_layout() {
        let g = SpectralGrid::new(8, 2.0 * PI).unwrap();
        assert_eq!(g.wavenumbers(), vec![0.0, 1.0, 2.0, 3.0, 4.0, -3.0, -2.0, -1.0]);
        assert_eq!(g.index(-3), Some(5));
        assert_eq!(g.index(4), Some(4));
        assert_eq!(g.index(-4), None);
        assert!(SpectralGrid::new(12, 1.0).is_err());
        assert!(SpectralGrid::new(8, 0.0).is_err());
    }

    #[test]
    fn pow2_rounding() {
        assert_eq!(next_pow2(2560.0), 4096);
        assert_eq!(next_pow2(1024.0), 1024);
        assert_eq!(next_pow2(0.3), 2);
    }
}
