use std::ops::{Add, Mul, Sub};

use serde::Serialize;

/// Dense 2×2 matrix acting on dimensionless (X, P).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);
    pub const ZERO: Mat2 = Mat2([[0.0, 0.0], [0.0, 0.0]]);

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn transpose(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn scale(&self, k: f64) -> Mat2 {
        let m = &self.0;
        Mat2([[k * m[0][0], k * m[0][1]], [k * m[1][0], k * m[1][1]]])
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |a, b| a.max(b.abs()))
    }

    pub fn flatten(&self) -> [f64; 4] {
        let m = &self.0;
        [m[0][0], m[0][1], m[1][0], m[1][1]]
    }

    pub fn from_flat(v: [f64; 4]) -> Mat2 {
        Mat2([[v[0], v[1]], [v[2], v[3]]])
    }

    /// Matrix exponential in closed form. For traceless N, N² = -det(N)·I.
    pub fn exp(&self) -> Mat2 {
        let half_tr = 0.5 * self.trace();
        let n = *self - Mat2::IDENTITY.scale(half_tr);
        let q = -n.det();
        let (c, s) = if q.abs() < 1e-8 {
            (1.0 + q / 2.0 + q * q / 24.0, 1.0 + q / 6.0 + q * q / 120.0)
        } else if q > 0.0 {
            let r = q.sqrt();
            (r.cosh(), r.sinh() / r)
        } else {
            let r = (-q).sqrt();
            let (sin, cos) = r.sin_cos();
            (cos, sin / r)
        };
        let e = Mat2::IDENTITY.scale(c) + n.scale(s);
        if half_tr == 0.0 {
            e
        } else {
            e.scale(half_tr.exp())
        }
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::from_flat(std::array::from_fn(|i| self.flatten()[i] + o.flatten()[i]))
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::from_flat(std::array::from_fn(|i| self.flatten()[i] - o.flatten()[i]))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// Phase-space map (x, p) → (x, p) in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferMatrix {
    pub s11: f64,
    pub s12: f64,
    pub s21: f64,
    pub s22: f64,
}

impl TransferMatrix {
    pub const SYMPLECTIC_TOLERANCE: f64 = 1e-8;

    pub fn det(&self) -> f64 {
        self.s11 * self.s22 - self.s12 * self.s21
    }

    pub fn symplectic_residual(&self) -> f64 {
        (self.det() - 1.0).abs()
    }

    /// Converts a map on (x/x_r, p/p_r) to SI.
    pub(crate) fn from_scaled(m: &Mat2, x_r: f64, p_r: f64) -> Self {
        let s = &m.0;
        Self {
            s11: s[0][0],
            s12: s[0][1] * x_r / p_r,
            s21: s[1][0] * p_r / x_r,
            s22: s[1][1],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exp_of_rotation_generator() {
        let a = Mat2([[0.0, 1.0], [-1.0, 0.0]]).scale(0.7);
        let e = a.exp();
        assert_relative_eq!(e.0[0][0], 0.7f64.cos(), max_relative = 1e-15);
        assert_relative_eq!(e.0[0][1], 0.7f64.sin(), max_relative = 1e-15);
        assert_relative_eq!(e.0[1][0], -0.7f64.sin(), max_relative = 1e-15);
        assert_relative_eq!(e.det(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn exp_of_inverted_and_damped_generators() {
        let a = Mat2([[0.0, 1.0], [4.0, 0.0]]).scale(0.5);
        let e = a.exp();
        assert_relative_eq!(e.0[0][0], 1.0f64.cosh(), max_relative = 1e-14);
        assert_relative_eq!(e.0[0][1], 1.0f64.sinh() / 2.0, max_relative = 1e-14);
        let d = Mat2([[0.0, 1.0], [-1.0, -0.2]]);
        assert_relative_eq!(d.exp().det(), (-0.2f64).exp(), max_relative = 1e-14);
        // Near-nilpotent branch against a truncated series.
        let tiny = Mat2([[0.0, 1e-5], [-1e-5, 0.0]]);
        assert_relative_eq!(tiny.exp().0[0][1], 1e-5, max_relative = 1e-10);
    }
}
