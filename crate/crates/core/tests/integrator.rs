use lmgbrain::dynamics::{resolve_dt, simulate, CoupledState, InitialState, SimulationConfig, Stepper, TimeStep};
use lmgbrain::hamiltonian::{build_parts, LmgParams};
use lmgbrain::plasticity::PlasticityParams;
use lmgbrain::spin::{dicke_state, inner_product, SpinSector};
use proptest::prelude::*;

fn frozen(n: usize, gamma: f64, g0: f64, count: usize, t_max: f64) -> SimulationConfig {
    SimulationConfig::new(
        n,
        LmgParams::new(g0, gamma),
        PlasticityParams::frozen(0.5),
        InitialState::Count(count),
        t_max,
    )
}

fn with_dt(mut c: SimulationConfig, dt: f64) -> SimulationConfig {
    c.dt = TimeStep::Fixed(dt);
    // coarse steps are the point here; the norm check is a diagnostic
    c.norm_tolerance = 1e-2;
    c
}

#[test]
fn energy_constant_with_frozen_plasticity() {
    for (n, gamma, count) in [(10, 1.0, 10), (20, 0.8, 3), (40, 0.9, 21)] {
        let tr = simulate(&frozen(n, gamma, 1.0, count, 100.0)).unwrap();
        let e0 = tr.records[0].energy;
        let drift = tr.records.iter().map(|r| (r.energy - e0).abs()).fold(0.0, f64::max);
        assert!(drift <= 1e-8, "N={n}: energy drift {drift:e}");
    }
}

#[test]
fn parity_trap_holds_for_any_plasticity() {
    let settings = [
        PlasticityParams::frozen(0.5),
        PlasticityParams {
            tau_r: 1.0,
            tau_f: 0.0,
            u_base: 0.5,
            r0: 1.0,
            u0: 0.5,
        },
        PlasticityParams {
            tau_r: 100.0,
            tau_f: 1000.0,
            u_base: 0.02,
            r0: 1.0,
            u0: 0.02,
        },
    ];
    for gamma in [1.0, 0.8, 0.3] {
        for p in settings {
            let c = SimulationConfig::new(20, LmgParams::new(0.5, gamma), p, InitialState::Count(10), 100.0);
            let tr = simulate(&c).unwrap();
            for rec in &tr.records {
                assert!((rec.e - 0.5).abs() <= 1e-8, "gamma={gamma} t={} E={}", rec.t, rec.e);
            }
        }
    }
}

fn final_e(c: &SimulationConfig) -> f64 {
    simulate(c).unwrap().records.last().unwrap().e
}

/// Observed order from errors at dt, dt/2, dt/4 against a dt/32 reference.
fn measured_order(base: &SimulationConfig, dt: f64) -> (f64, f64) {
    let reference = final_e(&with_dt(base.clone(), dt / 32.0));
    let err: Vec<f64> = [1.0, 2.0, 4.0]
        .iter()
        .map(|k| (final_e(&with_dt(base.clone(), dt / k)) - reference).abs())
        .collect();
    ((err[0] / err[1]).log2(), (err[1] / err[2]).log2())
}

#[test]
fn rk4_global_order_is_four() {
    let base = frozen(10, 0.8, 1.0, 0, 20.0);
    let (p1, p2) = measured_order(&base, 0.1);
    for p in [p1, p2] {
        assert!((3.7..=4.3).contains(&p), "order {p1} {p2}");
    }
}

#[test]
fn rk4_order_with_feedback() {
    let mut base = frozen(10, 0.8, 1.0, 0, 20.0);
    base.plasticity = PlasticityParams {
        tau_r: 2.0,
        tau_f: 5.0,
        u_base: 0.3,
        r0: 1.0,
        u0: 0.3,
    };
    let (p1, p2) = measured_order(&base, 0.1);
    for p in [p1, p2] {
        assert!((3.5..=4.5).contains(&p), "order {p1} {p2}");
    }
}

#[test]
fn time_reversal_returns_to_start() {
    let s = SpinSector::new(12).unwrap();
    let parts = build_parts(s, 0.8);
    let lmg = LmgParams::new(1.0, 0.8);
    let psi0 = dicke_state(s, 2).unwrap();
    let mut state = CoupledState {
        psi: psi0.clone(),
        synapse: PlasticityParams::frozen(0.5).initial_state(),
        t: 0.0,
    };
    let mut stepper = Stepper::new(&parts, lmg, PlasticityParams::frozen(0.5));
    let dt = 0.005;
    for _ in 0..4000 {
        stepper.step(&mut state, dt);
    }
    for _ in 0..4000 {
        stepper.step(&mut state, -dt);
    }
    let f = inner_product(&psi0, &state.psi).unwrap().norm_sqr();
    assert!(1.0 - f <= 1e-6, "fidelity deficit {}", 1.0 - f);
    assert!(state.t.abs() < 1e-9);
}

#[test]
fn trajectories_converge_as_dt_shrinks() {
    let mut c = frozen(16, 0.7, 0.5, 0, 50.0);
    c.plasticity = PlasticityParams {
        tau_r: 5.0,
        tau_f: 0.0,
        u_base: 0.5,
        r0: 1.0,
        u0: 0.5,
    };
    c.record_stride = None;
    let coarse = simulate(&with_dt(c.clone(), 0.05)).unwrap();
    let fine = simulate(&with_dt(c.clone(), 0.025)).unwrap();
    let finer = simulate(&with_dt(c, 0.0125)).unwrap();
    let dev = |a: &lmgbrain::dynamics::Trajectory, b: &lmgbrain::dynamics::Trajectory, step: usize| {
        a.records
            .iter()
            .zip(b.records.iter().step_by(step))
            .map(|(x, y)| (x.e - y.e).abs().max((x.r - y.r).abs()))
            .fold(0.0, f64::max)
    };
    let d1 = dev(&coarse, &fine, 2);
    let d2 = dev(&fine, &finer, 2);
    assert!(d2 < d1 / 8.0, "{d1:e} {d2:e}");
}

#[test]
fn eigenstate_only_rotates_phase() {
    // with gamma=0, K is diagonal, so every Dicke state is an eigenstate
    let tr = simulate(&with_dt(frozen(12, 0.0, 1.3, 4, 30.0), 0.01)).unwrap();
    for rec in &tr.records {
        assert!((rec.fidelity - 1.0).abs() < 1e-9);
        assert!((rec.e - 4.0 / 12.0).abs() < 1e-9);
    }
}

#[test]
fn auto_dt_respects_rate_bound() {
    let c = SimulationConfig::new(
        20,
        LmgParams::new(30.0, 0.8),
        PlasticityParams {
            tau_r: 100.0,
            tau_f: 1000.0,
            u_base: 0.02,
            r0: 1.0,
            u0: 0.02,
        },
        InitialState::Count(0),
        100.0,
    );
    let dt = resolve_dt(&c).unwrap();
    assert!(dt <= 0.05 / (30.0 * 22.0 / 4.0 + 0.01 + 0.001) * (1.0 + 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn norm_and_synapse_bounds_at_auto_dt(
        n in 2usize..24,
        gamma in 0.0f64..1.0,
        g0 in 0.05f64..3.0,
        tau_r in prop_oneof![Just(0.0), 0.1f64..50.0],
        tau_f in prop_oneof![Just(0.0), 0.5f64..500.0],
        u_base in 0.01f64..1.0,
        frac in 0.0f64..=1.0,
    ) {
        let p = PlasticityParams { tau_r, tau_f, u_base, r0: 1.0, u0: u_base };
        let c = SimulationConfig::new(n, LmgParams::new(g0, gamma), p, InitialState::Fraction(frac), 50.0);
        let tr = simulate(&c).unwrap();
        let mut last = -1.0;
        for rec in &tr.records {
            prop_assert!(rec.t > last);
            last = rec.t;
            prop_assert!((rec.norm - 1.0).abs() <= 1e-6);
            prop_assert!((0.0..=1.0).contains(&rec.r) && (0.0..=1.0).contains(&rec.u));
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&rec.e));
            prop_assert!(rec.s_block >= 0.0 && rec.s_linear >= 0.0);
        }
        prop_assert!((tr.records.last().unwrap().t - 50.0).abs() < 1e-9);
    }
}
