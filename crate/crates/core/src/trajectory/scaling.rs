use serde::{Deserialize, Serialize};

use super::schedule::FrequencyProfile;
use crate::error::{Error, Result};

/// Quintic smoothstep 10s³ - 15s⁴ + 6s⁵ and its first two derivatives.
pub(crate) fn smoothstep(s: f64) -> [f64; 3] {
    let s2 = s * s;
    [
        s2 * s * (10.0 + s * (-15.0 + 6.0 * s)),
        s2 * (30.0 + s * (-60.0 + 30.0 * s)),
        s * (60.0 + s * (-180.0 + 120.0 * s)),
    ]
}

/// Ermakov scaling function b as a polynomial in reduced time s = t/t_f.
///
/// `coeffs[k]` multiplies sᵏ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingPolynomial {
    pub coeffs: [f64; 6],
    /// Initial effective frequency ω₀, rad/s.
    pub omega0: f64,
    /// Target frequency ω_f, rad/s.
    pub omega_f: f64,
    /// Duration, s.
    pub t_f: f64,
}

/// Minimal polynomial with b(0) = 1, b(1) = √(ω₀/ω_f) and vanishing first and
/// second derivatives at both ends.
pub fn design_scaling(omega0: f64, omega_f: f64, t_f: f64) -> Result<ScalingPolynomial> {
    for (name, v) in [("omega0", omega0), ("omega_f", omega_f), ("t_f", t_f)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(name, "must be positive"));
        }
    }
    let gap = (omega0 / omega_f).sqrt() - 1.0;
    Ok(ScalingPolynomial {
        coeffs: [1.0, 0.0, 0.0, 10.0 * gap, -15.0 * gap, 6.0 * gap],
        omega0,
        omega_f,
        t_f,
    })
}

impl ScalingPolynomial {
    pub fn b_final(&self) -> f64 {
        (self.omega0 / self.omega_f).sqrt()
    }

    /// b(s), b'(s), b''(s) with derivatives taken in reduced time.
    pub fn reduced(&self, s: f64) -> [f64; 3] {
        let c = &self.coeffs;
        let mut b = 0.0;
        let mut db = 0.0;
        let mut ddb = 0.0;
        for k in (0..6).rev() {
            b = b * s + c[k];
            if k >= 1 {
                db = db * s + k as f64 * c[k];
            }
            if k >= 2 {
                ddb = ddb * s + (k * (k - 1)) as f64 * c[k];
            }
        }
        [b, db, ddb]
    }

    /// b(t), ḃ(t), b̈(t) in physical time, with t clamped to [0, t_f].
    pub fn at(&self, t: f64) -> [f64; 3] {
        let s = (t / self.t_f).clamp(0.0, 1.0);
        let [b, db, ddb] = self.reduced(s);
        [b, db / self.t_f, ddb / (self.t_f * self.t_f)]
    }

    /// ω_eff² = ω₀²/b⁴ - b̈/b.
    pub fn omega_eff_sq_at(&self, t: f64) -> f64 {
        let [b, _, bdd] = self.at(t);
        let b2 = b * b;
        self.omega0 * self.omega0 / (b2 * b2) - bdd / b
    }

    /// Residuals of the six boundary conditions, in reduced-time derivatives.
    pub fn boundary_residuals(&self) -> [f64; 6] {
        let start = self.reduced(0.0);
        let end = self.reduced(1.0);
        [
            start[0] - 1.0,
            start[1],
            start[2],
            end[0] - self.b_final(),
            end[1],
            end[2],
        ]
    }
}

impl FrequencyProfile for ScalingPolynomial {
    fn omega_eff_sq(&self, t: f64) -> f64 {
        self.omega_eff_sq_at(t)
    }

    fn scaling(&self) -> Option<&ScalingPolynomial> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn trivial_when_frequencies_match() {
        let b = design_scaling(3.0, 3.0, 1.0).unwrap();
        for i in 0..=100 {
            let [v, dv, ddv] = b.reduced(i as f64 / 100.0);
            assert_eq!((v, dv, ddv), (1.0, 0.0, 0.0));
        }
    }

    #[test]
    fn final_value_and_midpoint() {
        let b = design_scaling(3026.8, 1.0, 0.6).unwrap();
        assert_relative_eq!(b.b_final(), 55.02, max_relative = 1e-4);
        assert_relative_eq!(b.reduced(0.5)[0], (1.0 + b.b_final()) / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        assert!(design_scaling(0.0, 1.0, 1.0).is_err());
        assert!(design_scaling(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn smoothstep_derivatives_match_finite_differences() {
        let h = 1e-5;
        for s in [0.1, 0.37, 0.8] {
            let [p, dp, ddp] = smoothstep(s);
            let [pp, dpp, _] = smoothstep(s + h);
            let [pm, dpm, _] = smoothstep(s - h);
            assert_relative_eq!(dp, (pp - pm) / (2.0 * h), max_relative = 1e-8);
            assert_relative_eq!(ddp, (dpp - dpm) / (2.0 * h), max_relative = 1e-7);
            assert!(p > 0.0 && p < 1.0);
        }
    }

    proptest! {
        #[test]
        fn boundary_conditions_hold(w0 in 0.01f64..1e4, wf in 0.01f64..1e4, tf in 1e-3f64..1e3) {
            let b = design_scaling(w0, wf, tf).unwrap();
            for r in b.boundary_residuals() {
                prop_assert!(r.abs() <= 1e-12 * b.b_final().max(1.0), "residual {r}");
            }
            for i in 0..=10_000 {
                prop_assert!(b.reduced(i as f64 / 1e4)[0] > 0.0);
            }
        }

        #[test]
        fn expansion_never_dips_below_one(w0 in 1.0f64..1e4, ratio in 1.0f64..1e4) {
            let b = design_scaling(w0, w0 / ratio, 1.0).unwrap();
            for i in 0..=1000 {
                prop_assert!(b.reduced(i as f64 / 1e3)[0] >= 1.0);
            }
        }
    }
}
