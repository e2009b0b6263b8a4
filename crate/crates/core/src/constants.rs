//! CODATA-2018 exact constants. These are not configurable.

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s.
pub const C_LIGHT: f64 = 2.997_924_58e8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_b: f64,
    pub c_light: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    k_b: K_B,
    c_light: C_LIGHT,
};
