//! Slaving and KdV coefficients of the long-wave ansatz
//!
//! ```text
//! ψ = ε² A(εx, ε³t),   s = ε² (ν₀A + εν₁∂ξA + ε²ν₂∂ξ²A + ε²ν₃A²)
//! ∂τA = γ_lin ∂ξ³A + γ_non ∂ξ(A²)
//! ```

use crate::{CglParams, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzCoefficients {
    pub nu0: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub nu3: f64,
    pub gamma_lin: f64,
    pub gamma_non: f64,
    /// Group velocity 2(α − β).
    pub c: f64,
    pub sigma: f64,
}

impl AnsatzCoefficients {
    pub fn new(p: &CglParams) -> Result<Self> {
        let (a, b, s) = (p.alpha, p.beta, p.sigma);
        if a == b {
            return Err(Error::Degenerate(a));
        }
        if !(s > 0.0) {
            return Err(Error::NonPositiveSigma(s));
        }
        let nu0 = -1.0 / s;
        let nu1 = (2.0 * b / s - a) / (2.0 * s);
        let nu2 = (-1.0 / s - 2.0 * b * nu1) / (2.0 * s);
        let nu3 = (-2.0 / s - 1.0) / (2.0 * s);
        Ok(Self {
            nu0,
            nu1,
            nu2,
            nu3,
            gamma_lin: (b - a) * (1.0 + a * b) / (1.0 + b * b),
            gamma_non: b - a,
            c: 2.0 * (a - b),
            sigma: s,
        })
    }

    /// 1 + 2ν₀ − 2βσν₁, which vanishes at σ = σ_s and is O(ε²) in the
    /// marginal regime.
    pub fn eq_a_defect(&self, beta: f64) -> f64 {
        1.0 + 2.0 * self.nu0 - 2.0 * beta * self.sigma * self.nu1
    }

    /// Residuals of the four slaving relations; all zero up to rounding.
    pub fn slaving_defects(&self, alpha: f64, beta: f64) -> [f64; 4] {
        let s = self.sigma;
        [
            self.nu0 + 1.0 / s,
            2.0 * s * self.nu1 - (2.0 * beta / s - alpha),
            2.0 * s * self.nu2 - (-1.0 / s - 2.0 * beta * self.nu1),
            2.0 * s * self.nu3 - (-2.0 / s - 1.0),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at_sigma(a: f64, b: f64, s: f64) -> CglParams {
        CglParams::from_wavenumber(a, b, 1.0 / (1.0 + s).sqrt()).unwrap()
    }

    #[test]
    fn hand_computed_values() {
        let p = CglParams::marginal(1.0, 0.0, 0.0).unwrap();
        let k = AnsatzCoefficients::new(&p).unwrap();
        assert_eq!((k.nu0, k.nu1, k.nu2, k.nu3), (-0.5, -0.25, -0.125, -0.5));
        assert_eq!((k.gamma_lin, k.gamma_non, k.c), (-1.0, -1.0, 2.0));

        let k = AnsatzCoefficients::new(&at_sigma(0.0, 1.0, 1.5)).unwrap();
        assert_eq!((k.gamma_lin, k.gamma_non, k.c), (0.5, 1.0, -2.0));
    }

    #[test]
    fn defect_vanishes_at_threshold() {
        for &(a, b) in &[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.5), (2.0, 0.3)] {
            let p = CglParams::marginal(a, b, 0.0).unwrap();
            let k = AnsatzCoefficients::new(&p).unwrap();
            assert!(k.eq_a_defect(b).abs() < 1e-14);
            assert!(k.slaving_defects(a, b).iter().all(|d| d.abs() < 1e-14));
        }
    }

    #[test]
    fn degenerate_diagonal_rejected() {
        let p = at_sigma(0.3, 0.3, 1.0);
        assert_eq!(AnsatzCoefficients::new(&p), Err(Error::Degenerate(0.3)));
    }
}
