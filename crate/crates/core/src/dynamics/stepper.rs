use std::sync::{Arc, OnceLock};

use super::transfer::Mat2;
use crate::integrate::rk4_step;
use crate::registry::{Named, Registry};

/// One fixed step of the linear flow dS/dτ = A(τ) S.
pub trait Stepper: Named + Send + Sync {
    /// Returns the one-step propagator over [t, t + h].
    fn step(&self, generator: &dyn Fn(f64) -> Mat2, t: f64, h: f64) -> Mat2;
}

/// Classical fourth-order Runge-Kutta applied to the identity.
///
/// Not symplectic: each step shrinks det S by about (ωh)⁶/72.
pub struct Rk4;

impl Named for Rk4 {
    fn name(&self) -> &'static str {
        "rk4"
    }
}

impl Stepper for Rk4 {
    fn step(&self, generator: &dyn Fn(f64) -> Mat2, t: f64, h: f64) -> Mat2 {
        let rhs = |tau: f64, y: &[f64; 4]| (generator(tau) * Mat2::from_flat(*y)).flatten();
        Mat2::from_flat(rk4_step(&rhs, t, &Mat2::IDENTITY.flatten(), h))
    }
}

/// Fourth-order Magnus expansion with two Gauss-Legendre nodes.
///
/// The step is the exponential of a matrix with the generator's trace, so for
/// a Hamiltonian generator det S = 1 up to rounding.
pub struct Magnus4;

impl Named for Magnus4 {
    fn name(&self) -> &'static str {
        "magnus4"
    }
}

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // √3/6
const COMMUTATOR_WEIGHT: f64 = 0.144_337_567_297_406_43; // √3/12

impl Stepper for Magnus4 {
    fn step(&self, generator: &dyn Fn(f64) -> Mat2, t: f64, h: f64) -> Mat2 {
        let a1 = generator(t + (0.5 - GAUSS_OFFSET) * h);
        let a2 = generator(t + (0.5 + GAUSS_OFFSET) * h);
        let commutator = a2 * a1 - a1 * a2;
        let omega = (a1 + a2).scale(0.5 * h) + commutator.scale(COMMUTATOR_WEIGHT * h * h);
        omega.exp()
    }
}

pub const DEFAULT_STEPPER: &str = "magnus4";

pub fn steppers() -> &'static Registry<dyn Stepper> {
    static REGISTRY: OnceLock<Registry<dyn Stepper>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        Registry::<dyn Stepper>::new("stepper")
            .with(Arc::new(Magnus4))
            .with(Arc::new(Rk4))
    })
}
