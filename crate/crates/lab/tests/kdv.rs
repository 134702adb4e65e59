use std::f64::consts::PI;

use eckhaus_core::{AnsatzCoefficients, CglParams};
use eckhaus_lab::ansatz::{build_ansatz_V, residual_series, x_grid, AnsatzOrder, NormSelection};
use eckhaus_lab::hierarchy::{eta_sweep, hierarchy_extend, CoefficientTables, HierarchyLevel, HierarchySystem, StripConfig};
use eckhaus_lab::kdv::{mass, momentum, solve_kdv, solve_kdv_records, KdvConfig, KdvProfile, KdvState};
use eckhaus_lab::stepper::{Scheme, StepperConfig};
use eckhaus_lab::validation::{fit_slope, SweepPlan};
use eckhaus_lab::{SpectralField, SpectralGrid};
use num_complex::Complex64 as C;

fn coeffs(eps: f64) -> (CglParams, AnsatzCoefficients) {
    let p = CglParams::marginal(1.0, 0.0, eps).unwrap();
    (p, AnsatzCoefficients::new(&p).unwrap())
}

fn xi_grid() -> SpectralGrid {
    SpectralGrid::new(256, 2.0 * PI * 8.0).unwrap()
}

fn sech() -> SpectralField {
    KdvProfile::Sech2 { amplitude: 1.0, width: 2.0 }.sample(xi_grid(), true)
}

#[test]
fn mass_and_momentum_are_conserved() {
    let (_, c) = coeffs(0.1);
    let a0 = KdvState::new(sech());
    let tau = 1.0;
    let tr = solve_kdv_records(&a0, &c, 0.1, 10, &KdvConfig::default()).unwrap();
    let (m0, p0) = (mass(&tr.states[0]), momentum(&tr.states[0]));
    for (t, a) in tr.taus.iter().zip(&tr.states).skip(1) {
        let dm = (mass(a) - m0).abs() / t;
        let dp = (momentum(a) - p0).abs() / p0 / t;
        assert!(dm < 1e-10, "mass drift {dm} per unit τ at τ = {t}");
        assert!(dp < 1e-8, "momentum drift {dp} per unit τ at τ = {t}");
    }
    assert_eq!(*tr.taus.last().unwrap(), tau);
}

#[test]
fn linear_kdv_is_the_airy_flow() {
    let (_, mut c) = coeffs(0.1);
    c.gamma_non = 0.0;
    let a0 = sech();
    let tr = solve_kdv(&KdvState::new(a0.clone()), &c, 1.0, 0.01, 100, Scheme::EtdRk4).unwrap();
    let want = a0.map_symbol(|k| C::from_polar(1.0, -c.gamma_lin * k * k * k), true);
    let mut got = tr.states.last().unwrap().clone();
    got.dealias();
    let mut want = want;
    want.dealias();
    assert!(got.sub(&want).unwrap().sup() < 1e-11);
}

#[test]
fn kdv_commutes_with_translation() {
    let (_, c) = coeffs(0.1);
    let shift = 3.7;
    let run = |a: SpectralField| solve_kdv_records(&KdvState::new(a), &c, 0.25, 2, &KdvConfig::default()).unwrap();
    let plain = run(sech());
    let moved = run(sech().translated(shift));
    let d = moved.states[2].sub(&plain.states[2].translated(shift)).unwrap().sup();
    assert!(d < 1e-12, "translation defect {d}");
}

#[test]
fn refinement_correction_is_third_order() {
    let a = sech();
    let (eps, diffs): (Vec<f64>, Vec<f64>) = [0.2, 0.1, 0.05]
        .iter()
        .map(|&e| {
            let (p, c) = coeffs(e);
            let xg = x_grid(a.grid(), e).unwrap();
            let v1 = build_ansatz_V(&a, &c, &p, AnsatzOrder::One, xg).unwrap();
            let v0 = build_ansatz_V(&a, &c, &p, AnsatzOrder::Zero, xg).unwrap();
            (e, v1.sub(&v0).unwrap().sup())
        })
        .unzip();
    let fit = fit_slope(&eps, &diffs).unwrap();
    assert!(fit.slope >= 2.9, "order 1 − order 0 slope {}", fit.slope);
}

fn max_residual(eps: f64, order: AnsatzOrder, states: &[SpectralField], taus: &[f64]) -> f64 {
    let (p, c) = coeffs(eps);
    let xg = x_grid(states[0].grid(), eps).unwrap();
    let times: Vec<f64> = taus.iter().map(|t| t / eps.powi(3)).collect();
    residual_series(states, &times, &c, &p, order, xg, NormSelection::default())
        .unwrap()
        .iter()
        .map(|r| r.sup)
        .fold(0.0, f64::max)
}

#[test]
fn residual_scaling_is_locked() {
    let plan = SweepPlan { records: 20, ..Default::default() };
    let (_, c) = coeffs(0.2);
    let tr = eckhaus_lab::validation::kdv_records(&plan, &c, 1.0).unwrap();
    let eps = [0.2, 0.14, 0.1];
    let r1: Vec<f64> = eps.iter().map(|&e| max_residual(e, AnsatzOrder::One, &tr.states, &tr.taus)).collect();
    let fit = fit_slope(&eps, &r1).unwrap();
    println!("residual slope {:.4} [{:.4}, {:.4}]", fit.slope, fit.ci_low, fit.ci_high);
    assert!((fit.slope - 5.52).abs() <= 0.2, "residual slope {}", fit.slope);
    let r0 = max_residual(0.1, AnsatzOrder::Zero, &tr.states, &tr.taus);
    assert!(r0 > 3.0 * r1[2], "order 0 residual {r0} vs order 1 {}", r1[2]);
}

const TABLE: &str = r#"
[[level]]
index = 1
f_a = [{ coeff = 0.3, deriv = 1, factors = [{ field = "A", level = 0 }, { field = "B", level = 0 }] }]
f_b = [{ coeff = 0.5, factors = [{ field = "A", level = 0 }, { field = "A", level = 0 }] }]
"#;

fn hierarchy(order: usize, tables: &CoefficientTables) -> HierarchySystem {
    let (p, c) = coeffs(0.1);
    HierarchySystem::new(xi_grid(), c.gamma_lin, c.gamma_non, p.sigma_s().unwrap(), tables, order).unwrap()
}

fn level0() -> Vec<HierarchyLevel> {
    vec![HierarchyLevel { index: 0, a: sech(), b: None }]
}

fn stepper(t_end: f64) -> StepperConfig {
    StepperConfig { dt: 1e-3, scheme: Scheme::EtdRk4, dealias: true, t_end, record_stride: 10 }
}

#[test]
fn unforced_levels_stay_zero() {
    let tables = CoefficientTables::from_toml("[[level]]\nindex = 1\n").unwrap();
    let run = hierarchy_extend(&level0(), &hierarchy(1, &tables), stepper(0.05), StripConfig::default()).unwrap();
    for lv in &run.levels {
        assert_eq!(lv[1].a.sup(), 0.0);
    }
}

#[test]
fn leading_level_matches_kdv_and_its_slaving() {
    let tables = CoefficientTables::from_toml(TABLE).unwrap();
    let sys = hierarchy(1, &tables);
    let run = hierarchy_extend(&level0(), &sys, stepper(0.05), StripConfig::default()).unwrap();
    let (p, c) = coeffs(0.1);
    let kdv = solve_kdv(&KdvState::new(sech()), &c, 0.05, 1e-3, 10, Scheme::EtdRk4).unwrap();
    let sigma_s = p.sigma_s().unwrap();
    for (lv, a) in run.levels.iter().zip(&kdv.states) {
        assert!(lv[0].a.sub(a).unwrap().sup() < 1e-13);
        let b0 = lv[0].b.as_ref().unwrap();
        assert!(b0.add(&lv[0].a.scaled(1.0 / sigma_s)).unwrap().sup() < 1e-14);
    }
}

#[test]
fn forced_levels_keep_their_mass() {
    let tables = CoefficientTables::from_toml(TABLE).unwrap();
    let run = hierarchy_extend(&level0(), &hierarchy(1, &tables), stepper(0.05), StripConfig::default()).unwrap();
    let last = run.levels.last().unwrap();
    assert!(last[1].a.sup() > 1e-4, "level 1 was not driven");
    for m in 0..2 {
        let d = (mass(&last[m].a) - mass(&run.levels[0][m].a)).abs();
        assert!(d < 1e-10, "level {m} mass drift {d}");
    }
}

#[test]
fn eta_sweep_picks_the_smallest_bounded_rate() {
    let sys = hierarchy(0, &CoefficientTables::default());
    let a = KdvProfile::Sech2 { amplitude: 10.0, width: 2.0 }.sample(xi_grid(), true);
    let init = vec![HierarchyLevel { index: 0, a, b: None }];
    let etas = [1.0, 2.0, 4.0, 8.0];
    let (reports, best) = eta_sweep(&init, &sys, stepper(0.1), StripConfig::default(), &etas).unwrap();
    let bounded: Vec<bool> = reports.iter().map(|r| r.bounded).collect();
    assert_eq!(bounded, [false, false, false, true]);
    assert_eq!(best, Some(8.0));
    let growth: Vec<f64> = reports.iter().map(|r| r.norms[0].iter().cloned().fold(0.0, f64::max) / r.norms[0][0]).collect();
    assert!(growth.windows(2).all(|w| w[0] >= w[1]), "norm growth must fall with η: {growth:?}");
}
