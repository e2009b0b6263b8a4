//! Inverse engineering of cooling trajectories: the Ermakov scaling function,
//! the frequency schedule it implies, the drive intensities that realize the
//! schedule, and the audit of the approximations those drives rely on.

mod controls;
mod ermakov;
mod scaling;
mod schedule;
mod validity;

pub use controls::{controls_from_schedule, controls_with_bound, ControlSchedule};
pub use ermakov::{solve_ermakov, solve_ermakov_from, ErmakovSolution};
pub use scaling::{design_scaling, ScalingPolynomial};
pub use schedule::{
    designers, direct_ramp, schedule_from_scaling, DirectRamp, FrequencyProfile, FrequencySchedule,
    QuinticShortcut, ScheduleDesigner, SmoothRamp, DEFAULT_DESIGNER, DEFAULT_SAMPLES,
};
pub use validity::{validate, ValidityReport, BO_FLOOR, MIN_AUDIT_SAMPLES};
