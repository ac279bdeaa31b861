use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::scalar::Scalar;

/// Rotation quaternion `w + xi + yj + zk`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Quaternion<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    /// Rotation of `angle_deg` about a unit `axis`.
    pub fn from_axis_angle(axis: [T; 3], angle_deg: T) -> Self {
        let (s, c) = (angle_deg.to_radians() / T::lit(2.0)).sin_cos();
        Self::new(c, axis[0] * s, axis[1] * s, axis[2] * s)
    }

    /// Head orientation from Euler angles: yaw about `+Y`, then pitch about
    /// the yawed `+X`, then roll about the resulting `+Z`.
    pub fn from_euler(yaw_deg: T, pitch_deg: T, roll_deg: T) -> Self {
        let (o, i) = (T::zero(), T::one());
        let q_yaw = Self::from_axis_angle([o, i, o], yaw_deg);
        let q_pitch = Self::from_axis_angle([i, o, o], pitch_deg);
        let q_roll = Self::from_axis_angle([o, o, i], roll_deg);
        (q_yaw * q_pitch * q_roll).normalized()
    }

    pub fn norm(&self) -> T {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.w / n, self.x / n, self.y / n, self.z / n)
    }

    pub fn conjugate(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Rotates `v` by this quaternion (`q v q*`).
    pub fn rotate(&self, v: [T; 3]) -> [T; 3] {
        // t = 2 (q_vec × v); v' = v + w t + q_vec × t
        let qv = [self.x, self.y, self.z];
        let two = T::lit(2.0);
        let t = cross(qv, v).map(|c| c * two);
        let u = cross(qv, t);
        [
            v[0] + self.w * t[0] + u[0],
            v[1] + self.w * t[1] + u[1],
            v[2] + self.w * t[2] + u[2],
        ]
    }

    /// Gaze direction: the forward axis `(0, 0, -1)` rotated by `self`.
    pub fn direction(&self) -> Result<[T; 3], ParamError> {
        let n = self.norm();
        if n.is_nan() || (n - T::one()).abs() > T::lit(1e-6) {
            return Err(ParamError::new("quaternion", format!("norm {n} is not 1")));
        }
        let d = self.rotate([T::zero(), T::zero(), -T::one()]);
        let len = norm3(d);
        Ok(d.map(|c| c / len))
    }
}

impl<T: Scalar> Mul for Quaternion<T> {
    type Output = Self;

    fn mul(self, r: Self) -> Self {
        let l = self;
        Self::new(
            l.w * r.w - l.x * r.x - l.y * r.y - l.z * r.z,
            l.w * r.x + l.x * r.w + l.y * r.z - l.z * r.y,
            l.w * r.y - l.x * r.z + l.y * r.w + l.z * r.x,
            l.w * r.z + l.x * r.y - l.y * r.x + l.z * r.w,
        )
    }
}

fn cross<T: Scalar>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm3<T: Scalar>(v: [T; 3]) -> T {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `(yaw, pitch)` in degrees of a unit direction, yaw in `[-180, 180)`.
pub fn direction_to_angles<T: Scalar>(d: [T; 3]) -> Result<(T, T), ParamError> {
    let n = norm3(d);
    if n.is_nan() || (n - T::one()).abs() > T::lit(1e-6) {
        return Err(ParamError::new("direction", format!("norm {n} is not 1")));
    }
    let dy = (d[1] / n).max(-T::one()).min(T::one());
    let pitch = dy.asin().to_degrees();
    let yaw = crate::angle::normalize_yaw((-d[0]).atan2(-d[2]).to_degrees());
    Ok((yaw, pitch))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Rotation matrices built independently of the quaternion algebra.
    fn rot_y(deg: f64) -> [[f64; 3]; 3] {
        let (s, c) = deg.to_radians().sin_cos();
        [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]
    }

    fn rot_x(deg: f64) -> [[f64; 3]; 3] {
        let (s, c) = deg.to_radians().sin_cos();
        [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]
    }

    fn rot_z(deg: f64) -> [[f64; 3]; 3] {
        let (s, c) = deg.to_radians().sin_cos();
        [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
    }

    fn matmul(a: [[f64; 3]; 3], b: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        out
    }

    fn apply(m: [[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| (0..3).map(|k| m[i][k] * v[k]).sum())
    }

    #[test]
    fn identity() {
        let q = Quaternion::from_euler(0.0_f64, 0.0, 0.0);
        assert_eq!(q, Quaternion::identity());
        assert_eq!(q.direction().unwrap(), [0.0, 0.0, -1.0]);
    }

    #[test]
    fn yaw_quarter_turn() {
        let q = Quaternion::from_euler(90.0_f64, 0.0, 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(q.w, h, epsilon = 1e-15);
        assert_abs_diff_eq!(q.x, 0.0);
        assert_abs_diff_eq!(q.y, h, epsilon = 1e-15);
        assert_abs_diff_eq!(q.z, 0.0);
        let d = q.direction().unwrap();
        assert_abs_diff_eq!(d[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn pitch_up() {
        let d = Quaternion::from_euler(0.0_f64, 90.0, 0.0).direction().unwrap();
        assert_abs_diff_eq!(d[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn matches_rotation_matrices() {
        let basis = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for &(y, p, r) in &[(90.0, 0.0, 0.0), (30.0, -20.0, 10.0), (-150.0, 75.0, -40.0), (200.0, 5.0, 170.0)] {
            let q = Quaternion::from_euler(y, p, r);
            let m = matmul(matmul(rot_y(y), rot_x(p)), rot_z(r));
            for e in basis {
                let a = q.rotate(e);
                let b = apply(m, e);
                for k in 0..3 {
                    assert_abs_diff_eq!(a[k], b[k], epsilon = 1e-12);
                }
            }
            assert_abs_diff_eq!(q.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn angle_recovery() {
        assert_eq!(direction_to_angles([0.0_f64, 0.0, -1.0]).unwrap(), (0.0, 0.0));
        let (yaw, pitch) = direction_to_angles([-1.0_f64, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(yaw, 90.0);
        assert_abs_diff_eq!(pitch, 0.0);
        let d = Quaternion::from_euler(33.5_f64, -21.25, 0.0).direction().unwrap();
        let (yaw, pitch) = direction_to_angles(d).unwrap();
        assert_abs_diff_eq!(yaw, 33.5, epsilon = 1e-9);
        assert_abs_diff_eq!(pitch, -21.25, epsilon = 1e-9);
    }

    #[test]
    fn rejects_non_unit() {
        assert_eq!(
            Quaternion::new(2.0_f64, 0.0, 0.0, 0.0).direction().unwrap_err().field,
            "quaternion"
        );
        assert_eq!(direction_to_angles([0.5_f64, 0.0, 0.0]).unwrap_err().field, "direction");
    }

    #[test]
    fn f32_pipeline() {
        let d = Quaternion::from_euler(33.5_f32, -21.25, 0.0).direction().unwrap();
        let (yaw, pitch) = direction_to_angles(d).unwrap();
        assert!((yaw - 33.5).abs() < 1e-3 && (pitch + 21.25).abs() < 1e-3);
    }
}
