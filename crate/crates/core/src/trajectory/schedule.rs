use std::fmt;
use std::sync::{Arc, OnceLock};

use super::scaling::{design_scaling, smoothstep, ScalingPolynomial};
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

pub const DEFAULT_SAMPLES: usize = 2001;

/// Closed-form ω_eff²(t), in rad²/s².
pub trait FrequencyProfile: fmt::Debug + Send + Sync {
    fn omega_eff_sq(&self, t: f64) -> f64;

    /// The Ermakov scaling function behind this profile, if it has one.
    fn scaling(&self) -> Option<&ScalingPolynomial> {
        None
    }
}

/// Uniformly sampled ω_eff²(t) over [0, t_f]. Values may be negative.
#[derive(Debug, Clone)]
pub struct FrequencySchedule {
    pub t_f: f64,
    pub omega0: f64,
    pub omega_f: f64,
    pub values: Vec<f64>,
    pub analytic: Option<Arc<dyn FrequencyProfile>>,
}

impl FrequencySchedule {
    /// Builds a schedule from samples alone; evaluation between samples is linear.
    pub fn from_samples(t_f: f64, values: Vec<f64>) -> Result<Self> {
        if !(t_f.is_finite() && t_f > 0.0) {
            return Err(Error::invalid("t_f", "must be positive"));
        }
        if values.len() < 2 {
            return Err(Error::invalid("values", "at least two samples are required"));
        }
        let omega0 = values[0].abs().sqrt();
        let omega_f = values[values.len() - 1].abs().sqrt();
        Ok(Self {
            t_f,
            omega0,
            omega_f,
            values,
            analytic: None,
        })
    }

    fn sampled(
        profile: Arc<dyn FrequencyProfile>,
        omega0: f64,
        omega_f: f64,
        t_f: f64,
        samples: usize,
    ) -> Result<Self> {
        if samples < 2 {
            return Err(Error::invalid("samples", "at least two samples are required"));
        }
        let last = samples - 1;
        let values = (0..samples)
            .map(|i| match i {
                0 => omega0 * omega0,
                i if i == last => omega_f * omega_f,
                i => profile.omega_eff_sq(t_f * i as f64 / last as f64),
            })
            .collect();
        Ok(Self {
            t_f,
            omega0,
            omega_f,
            values,
            analytic: Some(profile),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.t_f / (self.values.len() - 1) as f64
    }

    pub fn time(&self, index: usize) -> f64 {
        self.t_f * index as f64 / (self.values.len() - 1) as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| self.time(i))
    }

    /// ω_eff²(t): exact when an analytic source exists, linear interpolation otherwise.
    pub fn eval(&self, t: f64) -> f64 {
        if let Some(profile) = &self.analytic {
            return profile.omega_eff_sq(t.clamp(0.0, self.t_f));
        }
        let x = (t / self.dt()).clamp(0.0, (self.values.len() - 1) as f64);
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let frac = x - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }

    pub fn scaling(&self) -> Option<&ScalingPolynomial> {
        self.analytic.as_deref().and_then(|p| p.scaling())
    }

    /// max(√|ω_eff²|) over the samples, never below ω₀.
    pub fn omega_max(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.abs().sqrt())
            .fold(self.omega0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Samples the Ermakov-consistent schedule ω₀²/b⁴ - b̈/b.
pub fn schedule_from_scaling(b: &ScalingPolynomial, samples: usize) -> Result<FrequencySchedule> {
    FrequencySchedule::sampled(Arc::new(b.clone()), b.omega0, b.omega_f, b.t_f, samples)
}

/// Smoothstep ramp of ω_eff itself. Not a shortcut; used as a baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectRamp {
    pub omega0: f64,
    pub omega_f: f64,
    pub t_f: f64,
}

impl FrequencyProfile for DirectRamp {
    fn omega_eff_sq(&self, t: f64) -> f64 {
        let s = (t / self.t_f).clamp(0.0, 1.0);
        let w = self.omega0 + (self.omega_f - self.omega0) * smoothstep(s)[0];
        w * w
    }
}

pub fn direct_ramp(omega0: f64, omega_f: f64, t_f: f64, samples: usize) -> Result<FrequencySchedule> {
    for (name, v) in [("omega0", omega0), ("omega_f", omega_f), ("t_f", t_f)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(name, "must be positive"));
        }
    }
    let ramp = DirectRamp { omega0, omega_f, t_f };
    FrequencySchedule::sampled(Arc::new(ramp), omega0, omega_f, t_f, samples)
}

/// A family of frequency schedules connecting ω₀ to ω_f in time t_f.
pub trait ScheduleDesigner: Named + Send + Sync {
    /// Whether the schedule preserves populations exactly.
    fn is_shortcut(&self) -> bool;

    fn design(&self, omega0: f64, omega_f: f64, t_f: f64, samples: usize) -> Result<FrequencySchedule>;
}

pub struct QuinticShortcut;

impl Named for QuinticShortcut {
    fn name(&self) -> &'static str {
        "sta-quintic"
    }
}

impl ScheduleDesigner for QuinticShortcut {
    fn is_shortcut(&self) -> bool {
        true
    }

    fn design(&self, omega0: f64, omega_f: f64, t_f: f64, samples: usize) -> Result<FrequencySchedule> {
        schedule_from_scaling(&design_scaling(omega0, omega_f, t_f)?, samples)
    }
}

pub struct SmoothRamp;

impl Named for SmoothRamp {
    fn name(&self) -> &'static str {
        "direct-ramp"
    }
}

impl ScheduleDesigner for SmoothRamp {
    fn is_shortcut(&self) -> bool {
        false
    }

    fn design(&self, omega0: f64, omega_f: f64, t_f: f64, samples: usize) -> Result<FrequencySchedule> {
        direct_ramp(omega0, omega_f, t_f, samples)
    }
}

pub const DEFAULT_DESIGNER: &str = "sta-quintic";

pub fn designers() -> &'static Registry<dyn ScheduleDesigner> {
    static REGISTRY: OnceLock<Registry<dyn ScheduleDesigner>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        Registry::<dyn ScheduleDesigner>::new("schedule designer")
            .with(Arc::new(QuinticShortcut))
            .with(Arc::new(SmoothRamp))
    })
}
