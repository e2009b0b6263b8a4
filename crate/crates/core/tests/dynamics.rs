use std::f64::consts::{FRAC_PI_2, TAU};

use approx::assert_relative_eq;
use optocool::constants::HBAR;
use optocool::dynamics::*;
use optocool::model::{bose_occupation, presets};
use optocool::trajectory::{design_scaling, direct_ramp, schedule_from_scaling, FrequencySchedule};
use optocool::Error;

const MASS: f64 = 50e-15;
const TEMP: f64 = 0.02;

fn omega() -> f64 {
    TAU * 134e3
}

fn eta1() -> f64 {
    presets::ground_state().derived().unwrap().eta[0]
}

fn sta(omega0: f64, omega_f: f64, tf_omega: f64) -> FrequencySchedule {
    let tf = tf_omega / omega();
    schedule_from_scaling(&design_scaling(omega0, omega_f, tf).unwrap(), 2001).unwrap()
}

fn constant(w: f64, duration: f64) -> FrequencySchedule {
    FrequencySchedule::from_samples(duration, vec![w * w; 11]).unwrap()
}

fn coarse() -> IntegratorSettings {
    IntegratorSettings {
        steps_per_period: 50,
        min_steps: 1000,
        ..IntegratorSettings::default()
    }
}

/// Exact STA map for b(0) = 1 and ḃ(0) = ḃ(t_f) = 0, with the phase
/// θ = ω₀∫b⁻² dt taken by composite Simpson on an independent quintic.
fn sta_transfer_oracle(omega0: f64, omega_f: f64, t_f: f64) -> [[f64; 2]; 2] {
    let bf = (omega0 / omega_f).sqrt();
    let b = |t: f64| {
        let s = t / t_f;
        1.0 + (bf - 1.0) * (10.0 * s.powi(3) - 15.0 * s.powi(4) + 6.0 * s.powi(5))
    };
    let n = 200_000;
    let h = t_f / n as f64;
    let mut sum = b(0.0).powi(-2) + b(t_f).powi(-2);
    for k in 1..n {
        sum += if k % 2 == 1 { 4.0 } else { 2.0 } * b(k as f64 * h).powi(-2);
    }
    let theta = omega0 * sum * h / 3.0;
    [
        [bf * theta.cos(), bf * theta.sin() / (MASS * omega0)],
        [-MASS * omega0 * theta.sin() / bf, theta.cos() / bf],
    ]
}

fn transfer_error(t: &TransferMatrix, oracle: &[[f64; 2]; 2], x_over_p: f64) -> f64 {
    [
        (t.s11 - oracle[0][0]).abs(),
        (t.s12 - oracle[0][1]).abs() / x_over_p,
        (t.s21 - oracle[1][0]).abs() * x_over_p,
        (t.s22 - oracle[1][1]).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

#[test]
fn constant_oscillator_full_and_quarter_period() {
    let w = omega();
    let vac = thermal_state(w, 0.0, MASS);
    let s = IntegratorSettings::default();
    let full = propagate(&vac, &constant(w, TAU / w), MASS, &s).unwrap().transfer;
    assert!((full.s11 - 1.0).abs() < 1e-8 && (full.s22 - 1.0).abs() < 1e-8);
    assert!(full.s12.abs() * MASS * w < 1e-8 && full.s21.abs() / (MASS * w) < 1e-8);

    let quarter = propagate(&vac, &constant(w, FRAC_PI_2 / w), MASS, &s).unwrap().transfer;
    assert!(quarter.s11.abs() < 1e-8 && quarter.s22.abs() < 1e-8);
    assert!((quarter.s12 * MASS * w - 1.0).abs() < 1e-8);
    assert!((quarter.s21 / (MASS * w) + 1.0).abs() < 1e-8);
}

#[test]
fn sta_preserves_occupation_and_purity() {
    let w = omega();
    let w0 = w * (1.0 + eta1()).sqrt();
    let initial = thermal_state(w0, TEMP, MASS);
    let n_i = occupation(&initial, w0, MASS);
    for tf in [0.2, 0.6, 2.0] {
        let run = propagate(&initial, &sta(w0, w, tf), MASS, &IntegratorSettings::default()).unwrap();
        let n_f = occupation(&run.state, w, MASS);
        assert!((n_f - n_i).abs() <= 1e-3 * (n_i + 1.0), "t_f = {tf}: {n_f} vs {n_i}");
        assert!(run.symplectic_residual <= 1e-8);
        assert!((run.state.purity() - initial.purity()).abs() <= 1e-8);
        assert!(run.state.heisenberg_ratio() >= 1.0 - HEISENBERG_SLACK);
    }
}

#[test]
fn pure_states_stay_pure() {
    let w = omega();
    let w0 = w * (1.0 + eta1()).sqrt();
    let vac = thermal_state(w0, 0.0, MASS);
    let run = propagate(&vac, &sta(w0, w, 0.2), MASS, &IntegratorSettings::default()).unwrap();
    assert!((run.state.heisenberg_ratio() - 1.0).abs() < 1e-8);
    assert!(occupation(&run.state, w, MASS).abs() < 1e-8);
}

#[test]
fn transfer_matrix_matches_closed_form_and_converges_at_fourth_order() {
    let w = omega();
    let w0 = w * (1.0 + eta1()).sqrt();
    let tf = 0.6 / w;
    let oracle = sta_transfer_oracle(w0, w, tf);
    let schedule = sta(w0, w, 0.6);
    let vac = thermal_state(w0, 0.0, MASS);
    let x_over_p = 1.0 / (MASS * w);

    let run = |spp: usize| {
        let s = IntegratorSettings {
            steps_per_period: spp,
            ..coarse()
        };
        propagate(&vac, &schedule, MASS, &s).unwrap()
    };
    let (c, f) = (run(50), run(100));
    assert_eq!(f.steps, 2 * c.steps);
    let e_coarse = transfer_error(&c.transfer, &oracle, x_over_p);
    let e_fine = transfer_error(&f.transfer, &oracle, x_over_p);
    assert!(e_coarse / e_fine >= 8.0, "ratio {}", e_coarse / e_fine);
    let default = propagate(&vac, &schedule, MASS, &IntegratorSettings::default()).unwrap();
    assert!(transfer_error(&default.transfer, &oracle, x_over_p) < 1e-6);
}

#[test]
fn refinement_check_reports_small_change() {
    let w = omega();
    let w0 = w * (1.0 + eta1()).sqrt();
    let settings = IntegratorSettings {
        refinement_check: true,
        ..IntegratorSettings::default()
    };
    let initial = thermal_state(w0, TEMP, MASS);
    let run = propagate(&initial, &sta(w0, w, 0.6), MASS, &settings).unwrap();
    let delta = run.refinement_delta.unwrap();
    assert!(delta < 1e-4, "{delta}");
}

#[test]
fn sudden_jump_matches_closed_form() {
    let w = omega();
    for (w0, wf) in [(w * (1.0 + eta1()).sqrt(), w), (w, w / 10.0)] {
        let initial = thermal_state(w0, TEMP, MASS);
        let n = occupation(&initial, w0, MASS);
        let ramp = direct_ramp(w0, wf, 1e-6 / w, 101).unwrap();
        let run = propagate(&initial, &ramp, MASS, &IntegratorSettings::default()).unwrap();
        let expected = (n + 0.5) * (w0 / wf + wf / w0) / 2.0 - 0.5;
        assert_relative_eq!(occupation(&run.state, wf, MASS), expected, max_relative = 1e-4);
    }
}

#[test]
fn invariant_is_conserved_along_sta() {
    let w = omega();
    let w0 = w * (1.0 + eta1()).sqrt();
    let initial = thermal_state(w0, TEMP, MASS);
    for tf in [0.2, 2.0] {
        let schedule = sta(w0, w, tf);
        let poly = schedule.scaling().unwrap().clone();
        let i0 = invariant_expectation(&initial, 1.0, 0.0, w0, MASS);
        let mut worst: f64 = 0.0;
        let mut seen = 0;
        propagate_observed(&initial, &schedule, MASS, &IntegratorSettings::default(), 500, |t, st| {
            let [b, bdot, _] = poly.at(t);
            let i = invariant_expectation(st, b, bdot, w0, MASS);
            worst = worst.max((i - i0).abs() / i0);
            seen += 1;
        })
        .unwrap();
        assert!(seen > 10);
        assert!(worst <= 1e-6, "t_f = {tf}: drift {worst}");
    }
}

#[test]
fn undamped_limit_matches_propagate() {
    let w = omega();
    let w0 = w * (1.0 + eta1()).sqrt();
    let initial = GaussianState::new(1e-12, -3e-21, 4e-28, 1e-50, 9e-41).unwrap();
    let schedule = sta(w0, w, 0.6);
    let s = IntegratorSettings::default();
    let exact = propagate(&initial, &schedule, MASS, &s).unwrap().state;
    let damping = DampingSpec {
        gamma: 0.0,
        bath_occupation: 3110.0,
        omega_bath: w,
    };
    let damped = propagate_damped(&initial, &schedule, MASS, &damping, &s).unwrap();
    for (a, b) in [
        (exact.mean_x, damped.mean_x),
        (exact.mean_p, damped.mean_p),
        (exact.cov_xx, damped.cov_xx),
        (exact.cov_xp, damped.cov_xp),
        (exact.cov_pp, damped.cov_pp),
    ] {
        assert_relative_eq!(a, b, max_relative = 1e-10);
    }
}

#[test]
fn damping_relaxes_to_bath() {
    let w = omega();
    let n_th = bose_occupation(w, TEMP);
    let damping = DampingSpec {
        gamma: 0.1 * w,
        bath_occupation: n_th,
        omega_bath: w,
    };
    let start = thermal_state(w, 0.0, MASS);
    let end = propagate_damped(&start, &constant(w, 200.0 / w), MASS, &damping, &IntegratorSettings::default()).unwrap();
    // Stationary point of the Lyapunov equation with these coefficients.
    let target = thermal_state(w, TEMP, MASS);
    assert_relative_eq!(end.cov_xx, target.cov_xx, max_relative = 1e-3);
    assert_relative_eq!(end.cov_pp, target.cov_pp, max_relative = 1e-3);
    assert!(end.cov_xp.abs() < 1e-3 * (target.cov_xx * target.cov_pp).sqrt());
    assert_relative_eq!(occupation(&end, w, MASS), n_th, max_relative = 1e-3);
}

#[test]
fn high_q_relaxation_is_negligible() {
    let w = omega();
    let w0 = w * (1.0 + eta1()).sqrt();
    let initial = thermal_state(w0, TEMP, MASS);
    let schedule = sta(w0, w, 2.0);
    let s = IntegratorSettings::default();
    let undamped = occupation(&propagate(&initial, &schedule, MASS, &s).unwrap().state, w, MASS);
    let damping = DampingSpec {
        gamma: w / 1e5,
        bath_occupation: bose_occupation(w, TEMP),
        omega_bath: w,
    };
    let damped = occupation(&propagate_damped(&initial, &schedule, MASS, &damping, &s).unwrap(), w, MASS);
    let added = damped - undamped;
    assert!(added > 0.0 && added <= 0.1, "{added}");
}

#[test]
fn rk4_agrees_when_fine_and_drifts_when_coarse() {
    let w = omega();
    let w0 = w * (1.0 + eta1()).sqrt();
    let initial = thermal_state(w0, TEMP, MASS);
    let schedule = sta(w0, w, 0.2);
    let fine = IntegratorSettings {
        steps_per_period: 2000,
        method: "rk4".into(),
        ..IntegratorSettings::default()
    };
    let rk = propagate(&initial, &schedule, MASS, &fine).unwrap();
    let mg = propagate(&initial, &schedule, MASS, &IntegratorSettings::default()).unwrap();
    assert_eq!(rk.stepper, "rk4");
    assert_eq!(mg.stepper, "magnus4");
    assert_relative_eq!(occupation(&rk.state, w, MASS), occupation(&mg.state, w, MASS), max_relative = 1e-6);

    let default_rk4 = IntegratorSettings {
        method: "rk4".into(),
        ..IntegratorSettings::default()
    };
    let err = propagate(&initial, &sta(w0, w, 2.0), MASS, &default_rk4).unwrap_err();
    assert!(matches!(err, Error::SymplecticDrift { residual } if residual > 1e-8));
}

#[test]
fn settings_validation() {
    let bad = [
        IntegratorSettings {
            steps_per_period: 49,
            ..IntegratorSettings::default()
        },
        IntegratorSettings {
            min_steps: 999,
            ..IntegratorSettings::default()
        },
        IntegratorSettings {
            method: "euler".into(),
            ..IntegratorSettings::default()
        },
    ];
    for s in bad {
        assert!(s.validate().is_err());
    }
    let w = omega();
    let schedule = sta(w * 3000.0, w, 0.6);
    let s = IntegratorSettings::default();
    let h = s.max_step(&schedule);
    assert_relative_eq!(h, TAU / (200.0 * schedule.omega_max()), max_relative = 1e-15);
    assert_eq!(s.step_count(&schedule), (schedule.t_f / h).ceil() as usize);
    let long = constant(w, 1.0);
    assert_relative_eq!(s.max_step(&long), TAU / (200.0 * w), max_relative = 1e-15);
    let short = constant(w, 1e-9);
    assert_eq!(s.step_count(&short), 20_000);
}

#[test]
fn vacuum_energy_scale() {
    let w = omega();
    let v = thermal_state(w, 0.0, MASS);
    assert_relative_eq!(mean_energy(&v, w, MASS), HBAR * w / 2.0, max_relative = 1e-14);
}
