//! Parameter bundle for the wave train Ψ₀ e^{i(ζX + Ω₀T)}.

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// The CGL coefficients (α, β), the wave number ζ and everything derived
/// from them.
///
/// `sigma` is stored directly rather than recomputed from `zeta`, so that a
/// marginal construction satisfies `sigma == sigma_s - epsilon²` bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CglParams {
    pub alpha: f64,
    pub beta: f64,
    pub zeta: f64,
    /// Distance parameter from the sideband threshold; 0 when ζ was given
    /// directly.
    pub epsilon: f64,
    /// σ = ζ⁻² − 1.
    pub sigma: f64,
    /// Ψ₀ = √(1 − ζ²).
    pub psi0: f64,
    /// r₀ = ln Ψ₀.
    pub r0: f64,
    /// Ω₀ = −αζ² − βΨ₀².
    pub omega0: f64,
    /// Speed of the co-moving frame.
    pub c: f64,
}

impl CglParams {
    /// Wave train with wave number `zeta`; co-moving speed 2(α − β).
    pub fn from_wavenumber(alpha: f64, beta: f64, zeta: f64) -> Result<Self> {
        if !(zeta.abs() < 1.0) || zeta == 0.0 {
            return Err(Error::WaveNumber(zeta));
        }
        let z2 = zeta * zeta;
        Ok(Self::assemble(alpha, beta, zeta, 0.0, 1.0 / z2 - 1.0))
    }

    /// Marginally sideband-unstable wave train with σ = σ_s − ε² and ζ > 0.
    pub fn marginal(alpha: f64, beta: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0) {
            return Err(Error::Domain { value: epsilon, domain: "ε ≥ 0" });
        }
        let (sigma_s, _) = crate::sideband_threshold(alpha, beta)?;
        let sigma = sigma_s - epsilon * epsilon;
        if !(sigma > 0.0) {
            return Err(Error::NonPositiveSigma(sigma));
        }
        let zeta = 1.0 / (1.0 + sigma).sqrt();
        Ok(Self::assemble(alpha, beta, zeta, epsilon, sigma))
    }

    fn assemble(alpha: f64, beta: f64, zeta: f64, epsilon: f64, sigma: f64) -> Self {
        let z2 = zeta * zeta;
        let psi0 = (1.0 - z2).sqrt();
        Self {
            alpha,
            beta,
            zeta,
            epsilon,
            sigma,
            psi0,
            r0: psi0.ln(),
            omega0: -alpha * z2 - beta * psi0 * psi0,
            c: 2.0 * (alpha - beta),
        }
    }

    /// Same parameters in a frame moving with speed `c`.
    pub fn with_speed(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    /// σ_s = 2(1 + β²)/(1 + αβ).
    pub fn sigma_s(&self) -> Result<f64> {
        crate::sideband_threshold(self.alpha, self.beta).map(|(s, _)| s)
    }

    /// Residuals of Ψ₀² + ζ² = 1 and Ω₀ + αζ² + βΨ₀² = 0.
    pub fn existence_defects(&self) -> (f64, f64) {
        let z2 = self.zeta * self.zeta;
        let p2 = self.psi0 * self.psi0;
        (p2 + z2 - 1.0, self.omega0 + self.alpha * z2 + self.beta * p2)
    }
}
