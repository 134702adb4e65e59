//! Fourier symbols of the linearised modulation operators and their
//! eigenvalue curves λ±(k).

use num_complex::Complex64;

use crate::{transforms, CglParams, Mat2};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Symbol L̂(k) of the linear part acting on the phase/amplitude pair (φ, s).
pub fn eval_symbol(p: &CglParams, k: f64) -> Mat2 {
    let (a, b, s) = (p.alpha, p.beta, p.sigma);
    let diag = re(-k * k) + I * ((p.c - 2.0 * a) * k);
    Mat2::new(
        diag,
        re(-a * k * k - 2.0 * b * s) + I * (2.0 * k),
        re(a * k * k) - I * (2.0 * k),
        diag - re(2.0 * s),
    )
}

/// Symbol of the linear part L acting on the local wave number pair (ψ, s).
///
/// Carries the third-order entry α∂ₓ³ in the upper right; similar to
/// [`eval_symbol`] through diag(ik, 1).
pub fn symbol_v(p: &CglParams, k: f64) -> Mat2 {
    let (a, b, s) = (p.alpha, p.beta, p.sigma);
    let diag = re(-k * k) + I * ((p.c - 2.0 * a) * k);
    Mat2::new(
        diag,
        re(-2.0 * k * k) - I * (a * k * k * k + 2.0 * s * b * k),
        re(-2.0) - I * (a * k),
        diag - re(2.0 * s),
    )
}

/// Symbol L̂_Y(k) for the pair (χ, s) with χ = θ(φ).
pub fn symbol_y(p: &CglParams, k: f64) -> Mat2 {
    let (a, b, s) = (p.alpha, p.beta, p.sigma);
    let diag = re(-k * k) + I * ((p.c - 2.0 * a) * k);
    let th = transforms::theta_hat(k);
    Mat2::new(
        diag,
        th * (re(-2.0 * b * s - a * k * k) + I * (2.0 * k)),
        transforms::gamma_over_theta(p, k) * s,
        diag - re(2.0 * s),
    )
}

/// γ(k) = (αk² − 2ik)/σ.
pub fn gamma(p: &CglParams, k: f64) -> Complex64 {
    Complex64::new(p.alpha * k * k, -2.0 * k) / p.sigma
}

/// υ(k) = √(1 − γ² − 2βγ), principal branch (cut along the negative reals).
pub fn upsilon(p: &CglParams, k: f64) -> Complex64 {
    let g = gamma(p, k);
    let u = (re(1.0) - g * g - g * (2.0 * p.beta)).sqrt();
    debug_assert!(u.re >= 0.0);
    u
}

/// The two eigenvalues of L̂(k) at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSample {
    pub k: f64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
}

/// λ±(k) = i(c − 2α)k − k² − σ ± συ(k).
///
/// λ₊ is evaluated as −σ(γ² + 2βγ)/(1 + υ) in place of σ(υ − 1) so that the
/// k → 0 tangency carries no cancellation error.
pub fn eval_dispersion(p: &CglParams, k: f64) -> DispersionSample {
    let g = gamma(p, k);
    let u = upsilon(p, k);
    let base = Complex64::new(-k * k, (p.c - 2.0 * p.alpha) * k);
    let lambda_plus = base - (g * g + g * (2.0 * p.beta)) * p.sigma / (re(1.0) + u);
    let lambda_minus = base - re(p.sigma) - u * p.sigma;
    DispersionSample { k, lambda_plus, lambda_minus }
}

/// Spectral curves of the weighted system, λ±(k) − ε²η|k|.
pub fn damped_dispersion(p: &CglParams, k: f64, eta: f64) -> DispersionSample {
    let mut s = eval_dispersion(p, k);
    let shift = p.epsilon * p.epsilon * eta * k.abs();
    s.lambda_plus -= shift;
    s.lambda_minus -= shift;
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(a: f64, b: f64, sigma: f64, speed: f64) -> CglParams {
        let zeta = 1.0 / (1.0 + sigma).sqrt();
        CglParams::from_wavenumber(a, b, zeta).unwrap().with_speed(speed)
    }

    #[test]
    fn symbol_at_zero_wavenumber() {
        let p = params(0.7, -0.4, 1.5, 0.3);
        let m = eval_symbol(&p, 0.0);
        let s = p.sigma;
        assert_eq!(m.a, c(0.0, 0.0));
        assert!((m.b - c(-2.0 * p.beta * s, 0.0)).norm() < 1e-15);
        assert_eq!(m.c, c(0.0, 0.0));
        assert!((m.d - c(-2.0 * s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn symbol_direct_substitution() {
        let p = params(0.0, 0.0, 2.0, 0.0);
        assert!((p.sigma - 2.0).abs() < 1e-14);
        let m = eval_symbol(&p, 1.0);
        let want = Mat2::new(c(-1.0, 0.0), c(0.0, 2.0), c(0.0, -2.0), c(-5.0, 0.0));
        assert!((m - want).max_abs() < 1e-13);
    }

    #[test]
    fn dispersion_at_origin() {
        let p = params(1.3, 0.2, 1.7, 2.2);
        let d = eval_dispersion(&p, 0.0);
        assert_eq!(d.lambda_plus, c(0.0, 0.0));
        assert!((d.lambda_minus - c(-2.0 * p.sigma, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_coefficients_match_direct_formula() {
        // α = β = 0, σ = 2, c = 0: trace −2k² − 4, determinant k⁴, so
        // λ± = −k² − 2 ± 2√(1 + k²)
        let p = params(0.0, 0.0, 2.0, 0.0);
        for &k in &[0.1, 0.5, 0.9, 1.5, 3.0] {
            let d = eval_dispersion(&p, k);
            let root = c(2.0 * (1.0 + k * k).sqrt(), 0.0);
            let base = c(-k * k - 2.0, 0.0);
            assert!((d.lambda_plus - (base + root)).norm() < 1e-12);
            assert!((d.lambda_minus - (base - root)).norm() < 1e-12);
        }
    }

    #[test]
    fn similar_symbols_share_trace_and_det() {
        let p = params(1.1, -0.6, 0.9, -0.2);
        for &k in &[-3.0, -1.0, -0.2, 0.3, 1.0, 2.5] {
            let l = eval_symbol(&p, k);
            for m in [symbol_v(&p, k), symbol_y(&p, k)] {
                assert!((m.trace() - l.trace()).norm() < 1e-12);
                assert!((m.det() - l.det()).norm() < 1e-11 * (1.0 + l.det().norm()));
            }
        }
    }

    #[test]
    fn damped_curves_shift_by_eta() {
        let p = CglParams::marginal(1.0, 0.0, 0.1).unwrap();
        let d = damped_dispersion(&p, -0.5, 8.0);
        let u = eval_dispersion(&p, -0.5);
        assert!((u.lambda_plus - d.lambda_plus - c(0.04, 0.0)).norm() < 1e-15);
    }
}
