use super::schedule::FrequencySchedule;
use crate::dynamics::IntegratorSettings;
use crate::error::{Error, Result};
use crate::integrate::{rk4_step, step_count};

const COLLAPSE: f64 = 1e-9;

/// b(t) and ḃ(t) on the schedule's sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ErmakovSolution {
    pub times: Vec<f64>,
    pub b: Vec<f64>,
    pub bdot: Vec<f64>,
}

/// Forward integration of b̈ = ω₀²/b³ - ω_eff²(t) b from b = 1, ḃ = 0.
pub fn solve_ermakov(schedule: &FrequencySchedule, settings: &IntegratorSettings) -> Result<ErmakovSolution> {
    solve_ermakov_from(schedule, 1.0, 0.0, settings)
}

pub fn solve_ermakov_from(
    schedule: &FrequencySchedule,
    b_init: f64,
    bdot_init: f64,
    settings: &IntegratorSettings,
) -> Result<ErmakovSolution> {
    settings.validate()?;
    let w0 = schedule.omega0;
    if !(w0 > 0.0) {
        return Err(Error::invalid("omega0", "must be positive"));
    }
    // Reduced time τ = ω₀ t.
    let rhs = |tau: f64, y: &[f64; 2]| {
        let ratio = schedule.eval(tau / w0) / (w0 * w0);
        [y[1], 1.0 / y[0].powi(3) - ratio * y[0]]
    };
    let dt = schedule.dt();
    let per_interval = step_count(dt, settings.max_step(schedule));
    let h = w0 * dt / per_interval as f64;

    let n = schedule.len();
    let mut out = ErmakovSolution {
        times: Vec::with_capacity(n),
        b: Vec::with_capacity(n),
        bdot: Vec::with_capacity(n),
    };
    let mut y = [b_init, bdot_init / w0];
    out.times.push(0.0);
    out.b.push(y[0]);
    out.bdot.push(y[1] * w0);
    for i in 1..n {
        let tau0 = w0 * schedule.time(i - 1);
        for k in 0..per_interval {
            y = rk4_step(&rhs, tau0 + k as f64 * h, &y, h);
            if !(y[0] > COLLAPSE) {
                return Err(Error::SingularScaling {
                    time: (tau0 + (k + 1) as f64 * h) / w0,
                    b: y[0],
                });
            }
        }
        out.times.push(schedule.time(i));
        out.b.push(y[0]);
        out.bdot.push(y[1] * w0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::{design_scaling, schedule_from_scaling};
    use approx::assert_relative_eq;

    #[test]
    fn fixed_point_stays_put() {
        let s = FrequencySchedule::from_samples(10.0, vec![4.0; 101]).unwrap();
        let sol = solve_ermakov(&s, &IntegratorSettings::default()).unwrap();
        for (b, bd) in sol.b.iter().zip(&sol.bdot) {
            assert!((b - 1.0).abs() < 1e-14);
            assert!(bd.abs() < 1e-13);
        }
    }

    #[test]
    fn free_expansion_closed_form() {
        // ω_eff ≡ 0 with ω₀ = 3: b(t) = √(1 + ω₀² t²).
        let mut s = FrequencySchedule::from_samples(2.0, vec![0.0; 201]).unwrap();
        s.omega0 = 3.0;
        let sol = solve_ermakov(&s, &IntegratorSettings::default()).unwrap();
        for (t, b) in sol.times.iter().zip(&sol.b) {
            assert_relative_eq!(*b, (1.0 + 9.0 * t * t).sqrt(), max_relative = 1e-10);
        }
    }

    #[test]
    fn round_trip_recovers_design() {
        let w0 = (1.0 + 9_160_364.845763676f64).sqrt();
        for tf in [0.2, 0.6, 2.0] {
            let poly = design_scaling(w0, 1.0, tf).unwrap();
            let sched = schedule_from_scaling(&poly, 401).unwrap();
            let sol = solve_ermakov(&sched, &IntegratorSettings::default()).unwrap();
            let worst = sol
                .times
                .iter()
                .zip(&sol.b)
                .map(|(t, b)| ((b - poly.at(*t)[0]) / poly.at(*t)[0]).abs())
                .fold(0.0, f64::max);
            assert!(worst <= 1e-6, "t_f = {tf}: {worst:e}");
        }
    }

    #[test]
    fn collapse_is_reported() {
        // Huge stiffness against a tiny ω₀: the inner turning point sits near b = 1e-15.
        let mut s = FrequencySchedule::from_samples(1.0, vec![1e12; 11]).unwrap();
        s.omega0 = 1e-9;
        let err = solve_ermakov(&s, &IntegratorSettings::default()).unwrap_err();
        assert!(matches!(err, Error::SingularScaling { .. }));
    }
}
