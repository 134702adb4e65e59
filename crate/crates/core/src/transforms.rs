//! Per-wavenumber symbols of the pseudo-derivative θ and of the changes of
//! variables S_θ, S_diag and S_ω.

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::{symbol, CglParams, Error, Mat2, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this |υ(k)| the diagonalising transform is reported as singular.
pub const UPSILON_FLOOR: f64 = 1e-8;

/// min{1, |k|⁻¹}.
pub fn theta_factor(k: f64) -> f64 {
    if k.abs() <= 1.0 {
        1.0
    } else {
        1.0 / k.abs()
    }
}

/// θ̂(k) = ik·min{1, |k|⁻¹}.
pub fn theta_hat(k: f64) -> Complex64 {
    if k.abs() <= 1.0 {
        Complex64::new(0.0, k)
    } else {
        Complex64::new(0.0, k.signum())
    }
}

/// θ̂(k)/γ(k), continued by its limit −σ/2 at k = 0.
pub fn theta_over_gamma(p: &CglParams, k: f64) -> Complex64 {
    let s = p.sigma;
    if k.abs() <= 1.0 {
        I * s / Complex64::new(p.alpha * k, -2.0)
    } else {
        I * (s * k.signum()) / Complex64::new(p.alpha * k * k, -2.0 * k)
    }
}

/// γ(k)/θ̂(k), continued by its limit −2/σ at k = 0.
pub fn gamma_over_theta(p: &CglParams, k: f64) -> Complex64 {
    let s = p.sigma;
    if k.abs() <= 1.0 {
        Complex64::new(p.alpha * k, -2.0) / (I * s)
    } else {
        Complex64::new(p.alpha * k * k, -2.0 * k) / (I * (s * k.signum()))
    }
}

/// Ŝ_θ(k) = diag(min{1, |k|⁻¹}, 1).
pub fn s_theta(k: f64) -> Mat2 {
    Mat2::diag(Complex64::new(theta_factor(k), 0.0), Complex64::new(1.0, 0.0))
}

pub fn s_theta_inv(k: f64) -> Mat2 {
    Mat2::diag(Complex64::new(1.0 / theta_factor(k), 0.0), Complex64::new(1.0, 0.0))
}

fn checked_upsilon(p: &CglParams, k: f64) -> Result<Complex64> {
    let u = symbol::upsilon(p, k);
    if u.norm() < UPSILON_FLOOR {
        return Err(Error::NearSingular { k, modulus: u.norm() });
    }
    Ok(u)
}

/// Ŝ_diag(k) = [[1, −(1 − υ)θ̂/γ], [−1, (1 + υ)θ̂/γ]], which takes the
/// (χ, s) symbol to diag(λ₊, λ₋).
///
/// 1 − υ is evaluated as (γ² + 2βγ)/(1 + υ) so the k → 0 limit is exact.
pub fn s_diag(p: &CglParams, k: f64) -> Result<Mat2> {
    let u = checked_upsilon(p, k)?;
    let g = symbol::gamma(p, k);
    let one = Complex64::new(1.0, 0.0);
    let one_minus = (g * g + g * (2.0 * p.beta)) / (one + u);
    let tg = theta_over_gamma(p, k);
    Ok(Mat2::new(one, -one_minus * tg, -one, (one + u) * tg))
}

/// Ŝ_diag(k)⁻¹ = (2υ)⁻¹ [[1 + υ, 1 − υ], [γ/θ̂, γ/θ̂]].
pub fn s_diag_inv(p: &CglParams, k: f64) -> Result<Mat2> {
    let u = checked_upsilon(p, k)?;
    let g = symbol::gamma(p, k);
    let one = Complex64::new(1.0, 0.0);
    let one_minus = (g * g + g * (2.0 * p.beta)) / (one + u);
    let go = gamma_over_theta(p, k);
    Ok(Mat2::new(one + u, one_minus, go, go).scale((u * 2.0).inv()))
}

/// Diagonal symbol L̂_Z(k) = diag(λ₂,₊, λ₂,₋) of the damped diagonal system.
pub fn symbol_z(p: &CglParams, k: f64, eta: f64) -> Mat2 {
    let d = symbol::damped_dispersion(p, k, eta);
    Mat2::diag(d.lambda_plus, d.lambda_minus)
}

/// ω̂(k) = e^{μ|k|}.
pub fn omega_hat(mu: f64, k: f64) -> f64 {
    (mu * k.abs()).exp()
}
