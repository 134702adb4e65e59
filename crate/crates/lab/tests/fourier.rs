use std::f64::consts::PI;

use eckhaus_core::CglParams;
use eckhaus_lab::kdv::KdvProfile;
use eckhaus_lab::multiplier::{apply_multiplier, theta_symbol, Multiplier};
use eckhaus_lab::norms::{analytic_norm, hm_norm, l2_physical, w_norm, AnalyticNormParams};
use eckhaus_lab::transforms::{s_diag, s_omega, s_theta, Direction, FieldPair};
use eckhaus_lab::validation::fit_slope;
use eckhaus_lab::{SpectralField, SpectralGrid};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erf;

fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Real field with random coefficients e^{−|k|}·U(−1, 1) on modes |j| ≤ jmax.
fn random_analytic(grid: SpectralGrid, jmax: i64, rng: &mut ChaCha8Rng) -> SpectralField {
    let mut u = SpectralField::zeros(grid, true);
    for j in 1..=jmax {
        let k = grid.dk() * j as f64;
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * (-k).exp();
        let (ip, im) = (grid.index(j).unwrap(), grid.index(-j).unwrap());
        u.coeffs_mut()[ip] = c;
        u.coeffs_mut()[im] = c.conj();
    }
    u.coeffs_mut()[0] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
    u
}

#[test]
fn derivative_symbol_maps_sine_to_cosine() {
    let g = SpectralGrid::new(32, 2.0 * PI).unwrap();
    let u = SpectralField::from_fn(g, f64::sin);
    let du = apply_multiplier(&Multiplier::derivative(1), &u);
    let want = SpectralField::from_fn(g, f64::cos);
    assert!(du.sub(&want).unwrap().sup() < 1e-12);
    assert_eq!(apply_multiplier(&Multiplier::identity(), &u), u);
}

#[test]
fn parseval_holds() {
    let g = SpectralGrid::new(512, 50.0).unwrap();
    let u = SpectralField::from_fn(g, |x| (-(x - 25.0).powi(2) / 4.0).exp() * (1.3 * x).sin() + 0.2);
    let a = analytic_norm(&u, AnalyticNormParams { mu: 0.0, s: 0.0 });
    assert!((a - l2_physical(&u)).abs() < 1e-12 * a);
}

#[test]
fn transform_pairs_invert() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = SpectralGrid::new(256, 40.0 * PI).unwrap();
    let p = CglParams::marginal(1.0, 0.0, 0.1).unwrap();
    for _ in 0..20 {
        let mut a = random_analytic(g, 40, &mut rng);
        a.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
        let v = FieldPair::new(a, random_analytic(g, 40, &mut rng)).unwrap();
        let t = s_theta(&s_theta(&v, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
        assert!(t.max_coeff_diff(&v) < 1e-10);
        let d = s_diag(&p, &s_diag(&p, &v, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
        assert!(d.max_coeff_diff(&v) < 1e-10);
        let kmax = g.wavenumber(g.nyquist()).abs();
        let mu = 30.0 / kmax;
        let w = s_omega(mu, &s_omega(mu, &v, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
        assert!(w.max_coeff_diff(&v) < 1e-10);
    }
}

#[test]
fn s_theta_is_identity_on_long_waves() {
    let g = SpectralGrid::new(64, 80.0).unwrap();
    let a = SpectralField::from_fn(g, |x| (2.0 * PI * 3.0 * x / 80.0).sin());
    let b = SpectralField::from_fn(g, |x| (2.0 * PI * 5.0 * x / 80.0).cos());
    let v = FieldPair::new(a, b).unwrap();
    assert!(s_theta(&v, Direction::Forward).unwrap().max_coeff_diff(&v) < 1e-13);
    assert_eq!(s_omega(0.0, &v, Direction::Forward).unwrap(), v);
}

#[test]
fn omega_weight_matches_gaussian_integral() {
    let mu = 1.0;
    let g = SpectralGrid::new(8192, 2000.0).unwrap();
    let u = SpectralField::from_fn(g, |x| (-(x - 1000.0).powi(2) / 2.0).exp());
    let v = FieldPair::new(u.clone(), SpectralField::zeros(g, true)).unwrap();
    let w = s_omega(mu, &v, Direction::Forward).unwrap();
    let zero = AnalyticNormParams { mu: 0.0, s: 0.0 };
    let ratio = analytic_norm(&w.first, zero) / analytic_norm(&u, zero);
    // ∫e^{2μ|k|−k²}dk / ∫e^{−k²}dk = e^{μ²}(1 + erf μ)
    let want = ((mu * mu).exp() * (1.0 + erf(mu))).sqrt();
    assert!((ratio / want - 1.0).abs() < 1e-6, "{ratio} vs {want}");
}

#[test]
fn banach_algebra_constant_is_grid_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = AnalyticNormParams { mu: 0.5, s: 1.0 };
    for _ in 0..10 {
        let g = SpectralGrid::new(128, 20.0 * PI).unwrap();
        let u = random_analytic(g, 20, &mut rng);
        let v = random_analytic(g, 20, &mut rng);
        let ratio = |n: usize| {
            let fine = SpectralGrid::new(n, g.length()).unwrap();
            let uf = u.stretched(fine).unwrap().scaled(1.0);
            let vf = v.stretched(fine).unwrap();
            let uv = uf.mul(&vf).unwrap();
            analytic_norm(&uv, p) / (analytic_norm(&uf, p) * analytic_norm(&vf, p))
        };
        let (r1, r2) = (ratio(128), ratio(512));
        assert!(r1.is_finite() && r1 > 0.0);
        assert!((r1 / r2 - 1.0).abs() < 1e-10, "{r1} {r2}");
    }
}

fn long_wave(eps: f64) -> SpectralField {
    let xi = SpectralGrid::new(256, 16.0 * PI).unwrap();
    let a = KdvProfile::GaussianPeriodic { amplitude: 1.0, width: 2.0 }.sample(xi, false);
    let xg = SpectralGrid::new(256, xi.length() / eps).unwrap();
    a.stretched(xg).unwrap()
}

#[test]
fn multiplier_norms_scale_with_symbol_order() {
    let eps = [0.1, 0.05, 0.025];
    for theta0 in [1.0, 2.0, 3.0] {
        let g = Multiplier::new("g", true, move |k: f64| Complex64::new((k.abs() / (1.0 + k * k).sqrt()).powf(theta0), 0.0));
        let norms: Vec<f64> = eps.iter().map(|&e| hm_norm(&apply_multiplier(&g, &long_wave(e)), 0.0)).collect();
        let fit = fit_slope(&eps, &norms).unwrap();
        assert!((fit.slope - (theta0 - 0.5)).abs() < 0.1, "θ₀ = {theta0}: slope {}", fit.slope);
    }
}

#[test]
fn half_theta_long_waves_are_small_in_w_norm() {
    let eps = [0.2, 0.1, 0.05];
    let half = Multiplier::new("theta^1/2", true, |k: f64| Complex64::new(theta_symbol().eval(k).norm().sqrt(), 0.0));
    let norms: Vec<f64> = eps.iter().map(|&e| w_norm(&apply_multiplier(&half, &long_wave(e)), 0.0, 2.0)).collect();
    let fit = fit_slope(&eps, &norms).unwrap();
    assert!(fit.slope >= 0.45, "slope {}", fit.slope);
}

proptest! {
    #[test]
    fn composition_equals_sequential_application(seed in 0u64..1000, a in 0u32..4, b in 0u32..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = SpectralGrid::new(64, 30.0).unwrap();
        let u = random_analytic(g, 20, &mut rng);
        let (ma, mb) = (Multiplier::derivative(a), theta_symbol().compose(&Multiplier::derivative(b)));
        let lhs = apply_multiplier(&ma, &apply_multiplier(&mb, &u));
        let rhs = apply_multiplier(&ma.compose(&mb), &u);
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-12 * (1.0 + lhs.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)));
    }

    #[test]
    fn real_fields_round_trip(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = SpectralGrid::new(128, 17.0).unwrap();
        let vals: Vec<f64> = (0..128).map(|_| rng.random_range(-1.0..1.0)).collect();
        let u = SpectralField::from_real(g, &vals).unwrap();
        prop_assert!(u.symmetry_defect() < 1e-12);
        let back = u.to_real();
        let err = vals.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }
}
