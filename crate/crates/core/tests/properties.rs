use eckhaus_core::expansion::expansion_coeffs_fd;
use eckhaus_core::symbol::eval_symbol;
use eckhaus_core::{
    classify_region, eval_dispersion, expansion_coeffs, r_of_z, sideband_threshold, AnsatzCoefficients, CglParams,
    Region,
};
use proptest::prelude::*;

fn params(a: f64, b: f64, sigma: f64, c: f64) -> CglParams {
    CglParams::from_wavenumber(a, b, 1.0 / (1.0 + sigma).sqrt()).unwrap().with_speed(c)
}

fn admissible() -> impl Strategy<Value = (f64, f64)> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_filter("1 + αβ > 0", |(a, b)| 1.0 + a * b > 0.05)
}

proptest! {
    #[test]
    fn curves_are_reality_symmetric((a, b) in admissible(), sigma in 0.2f64..4.0, c in -3.0f64..3.0, k in -10.0f64..10.0) {
        let p = params(a, b, sigma, c);
        let (d, m) = (eval_dispersion(&p, k), eval_dispersion(&p, -k));
        prop_assert!((d.lambda_plus.conj() - m.lambda_plus).norm() <= 1e-12 * (1.0 + d.lambda_plus.norm()));
        prop_assert!((d.lambda_minus.conj() - m.lambda_minus).norm() <= 1e-12 * (1.0 + d.lambda_minus.norm()));
    }

    #[test]
    fn curves_reproduce_trace_and_determinant((a, b) in admissible(), sigma in 0.2f64..4.0, c in -3.0f64..3.0, k in -10.0f64..10.0) {
        let p = params(a, b, sigma, c);
        let d = eval_dispersion(&p, k);
        let m = eval_symbol(&p, k);
        let (tr, det) = (m.trace(), m.det());
        prop_assert!((d.lambda_plus + d.lambda_minus - tr).norm() <= 1e-10 * tr.norm().max(1.0));
        prop_assert!((d.lambda_plus * d.lambda_minus - det).norm() <= 1e-10 * det.norm().max(1.0));
    }

    #[test]
    fn upsilon_has_positive_real_part((a, b) in admissible(), sigma in 0.2f64..4.0, k in -10.0f64..10.0) {
        let p = params(a, b, sigma, 0.0);
        prop_assert!(eckhaus_core::symbol::upsilon(&p, k).re > 0.0);
    }

    #[test]
    fn diffusion_coefficient_sign_marks_the_threshold((a, b) in admissible(), sigma in 0.2f64..6.0) {
        let (sigma_s, _) = sideband_threshold(a, b).unwrap();
        prop_assume!((sigma - sigma_s).abs() > 1e-6);
        let c2 = expansion_coeffs(&params(a, b, sigma, 2.0 * (a - b))).c2;
        prop_assert_eq!(c2 > 0.0, sigma > sigma_s);
    }

    #[test]
    fn classifier_is_odd_symmetric(a in -6.0f64..6.0, b in -6.0f64..6.0) {
        prop_assert_eq!(classify_region(a, b).region, classify_region(-a, -b).region);
    }

    #[test]
    fn threshold_identity(a in -5.0f64..5.0, b in -5.0f64..5.0) {
        prop_assume!(1.0 + a * b > 1e-3);
        let (s, z) = sideband_threshold(a, b).unwrap();
        prop_assert!((1.0 / (z * z) - 1.0 - s).abs() <= 1e-12 * s.max(1.0));
    }

    #[test]
    fn quartic_root_plugs_back(z in 0.3334f64..0.7499) {
        let r = r_of_z(z).unwrap();
        prop_assert!(r.is_finite() && r > 0.0);
        let q = r.powi(4) * z * z * (4.0 * z - 3.0) + r * r * (5.0 * z * z - 4.0 * z + 1.0) + 1.0;
        prop_assert!(q.abs() <= 1e-10 * r.powi(4).max(1.0), "z = {}, r = {}, residual {}", z, r, q);
    }

    #[test]
    fn real_part_derivatives_follow_the_taylor_pattern((a, b) in admissible(), sigma in 0.5f64..4.0) {
        let p = params(a, b, sigma, 2.0 * (a - b));
        let h = 1e-3;
        let re = |k: f64| eval_dispersion(&p, k).lambda_plus.re;
        let odd = (re(h) - re(-h)) / (2.0 * h);
        prop_assert!(odd.abs() < 1e-12);
        let e = expansion_coeffs(&p);
        let f = expansion_coeffs_fd(&p, h);
        prop_assert!((e.c2 - f.c2).abs() <= 1e-5 * e.c2.abs().max(1e-3));
        prop_assert!((e.c4 - f.c4).abs() <= 1e-5 * e.c4.abs().max(1e-3));
    }

    #[test]
    fn kdv_dispersion_is_minus_threshold_c3((a, b) in admissible(), eps in 0.01f64..0.3) {
        prop_assume!((a - b).abs() > 1e-3 && classify_region(a, b).region == Region::SidebandAs);
        let p = CglParams::marginal(a, b, eps).unwrap();
        let c = AnsatzCoefficients::new(&p).unwrap();
        let c3s = expansion_coeffs(&p).c3s.unwrap();
        prop_assert!((c.gamma_lin + c3s).abs() <= 1e-12 * c3s.abs().max(1.0));
    }

    #[test]
    fn existence_conditions((a, b) in admissible(), eps in 0.0f64..0.5) {
        let p = CglParams::marginal(a, b, eps).unwrap();
        let (d1, d2) = p.existence_defects();
        prop_assert!(d1.abs() < 1e-15 && d2.abs() < 1e-14);
    }
}
