use eckhaus_core::{AnsatzCoefficients, CglParams};
use eckhaus_lab::ansatz::{build_ansatz_V, x_grid, AnsatzOrder};
use eckhaus_lab::modulation::{ModulationState, ModulationSystem, Variables};
use eckhaus_lab::stepper::{simulate_with, Scheme, StepperConfig};
use eckhaus_lab::validation::{failure_demo, kdv_records, run_validation, PointStatus, SweepPlan};
use eckhaus_lab::LabError;

fn quick_plan() -> SweepPlan {
    SweepPlan { n_xi: 128, tau1: Some(0.25), records: 20, ..Default::default() }
}

#[test]
fn zero_horizon_gives_zero_errors() {
    let plan = SweepPlan { tau1: Some(0.0), ..quick_plan() };
    let r = run_validation(&plan, AnsatzOrder::One).unwrap();
    for p in &r.points {
        assert_eq!(p.times, vec![0.0]);
        assert_eq!((p.max_sup_error, p.max_hm_error), (0.0, 0.0));
    }
}

#[test]
fn refined_ansatz_is_never_worse() {
    let plan = quick_plan();
    let tau1 = plan.tau1.unwrap();
    let p0 = CglParams::marginal(plan.alpha, plan.beta, plan.epsilons[0]).unwrap();
    let kdv = kdv_records(&plan, &AnsatzCoefficients::new(&p0).unwrap(), tau1).unwrap();
    for &eps in &plan.epsilons {
        let p = CglParams::marginal(plan.alpha, plan.beta, eps).unwrap();
        let c = AnsatzCoefficients::new(&p).unwrap();
        let xg = x_grid(&plan.xi_grid().unwrap(), eps).unwrap();
        let sys = ModulationSystem::new(p, xg, Variables::LocalWaveNumber);
        let v0 = build_ansatz_V(&kdv.states[0], &c, &p, AnsatzOrder::One, xg).unwrap();
        let t_end = tau1 / eps.powi(3);
        let stride = (t_end / plan.records as f64 / plan.dt_max).ceil() as usize;
        let dt = t_end / (plan.records * stride) as f64;
        let cfg = StepperConfig { dt, scheme: Scheme::EtdRk4, dealias: true, t_end, record_stride: stride };
        let (mut e0, mut e1, mut idx) = (0.0f64, 0.0f64, 0usize);
        simulate_with(&sys, v0.to_state(), cfg, |_, u| {
            let v = ModulationState::from_state(xg, u)?;
            let a = &kdv.states[idx];
            e0 = e0.max(v.sub(&build_ansatz_V(a, &c, &p, AnsatzOrder::Zero, xg)?)?.sup());
            e1 = e1.max(v.sub(&build_ansatz_V(a, &c, &p, AnsatzOrder::One, xg)?)?.sup());
            idx += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(idx, plan.records + 1);
        assert!(e1 <= e0, "ε = {eps}: order 1 error {e1} > order 0 error {e0}");
    }
}

#[test]
fn sweeps_are_deterministic() {
    let plan = quick_plan();
    let a = run_validation(&plan, AnsatzOrder::One).unwrap();
    let b = run_validation(&plan, AnsatzOrder::One).unwrap();
    for (x, y) in a.points.iter().zip(&b.points) {
        assert_eq!(x.sup_error, y.sup_error);
        assert_eq!(x.hm_error, y.hm_error);
        assert_eq!(x.residual_sup, y.residual_sup);
    }
    assert_eq!(a.sup_slope, b.sup_slope);
}

#[test]
fn sweep_outside_the_sideband_region_is_refused() {
    let plan = SweepPlan { alpha: 4.0, beta: 1.0, ..quick_plan() };
    assert!(matches!(run_validation(&plan, AnsatzOrder::One), Err(LabError::Precondition(_))));
    let plan = SweepPlan { epsilons: vec![], ..quick_plan() };
    assert!(matches!(run_validation(&plan, AnsatzOrder::One), Err(LabError::Config(_))));
}

#[test]
fn ansatz_fails_outside_the_sideband_region() {
    let plan = SweepPlan { tau1: None, ..quick_plan() };
    let reference = run_validation(&SweepPlan { tau1: Some(0.25), ..plan.clone() }, AnsatzOrder::One).unwrap();
    let bad = failure_demo(4.0, 1.0, &plan, Some(&reference)).unwrap();
    assert!(bad.failure_detected);
    assert!(bad.max_re_plus.1 > 0.0);
    assert!(bad.points.iter().all(|p| matches!(p.status, PointStatus::BlowUp { .. })));
    let control = failure_demo(1.0, 0.0, &quick_plan(), Some(&reference)).unwrap();
    assert!(!control.failure_detected, "{control:?}");
}
