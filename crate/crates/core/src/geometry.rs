//! Points, directions and poses.
//!
//! The table plane is `z = 0`. Orientation is a boresight given by yaw
//! (counter-clockwise from +x, about +z) and pitch (elevation above the
//! horizontal plane). A pose maps body-frame vectors to world frame with
//! `R = Rz(yaw) * Ry(-pitch)`, so the body +x axis becomes the boresight.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        self * (1.0 / n)
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Rotate about the +z axis.
    pub fn rotate_z(self, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        Vec3::new(c * self.x - s * self.y, s * self.x + c * self.y, self.z)
    }

    /// Rotate about the +y axis.
    pub fn rotate_y(self, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        Vec3::new(c * self.x + s * self.z, self.y, -s * self.x + c * self.z)
    }

    /// Unit vector for a (yaw, pitch) boresight.
    pub fn from_angles(yaw: f64, pitch: f64) -> Vec3 {
        let (sy, cy) = yaw.sin_cos();
        let (sp, cp) = pitch.sin_cos();
        Vec3::new(cp * cy, cp * sy, sp)
    }

    /// Inverse of [`Vec3::from_angles`]; yaw is 0 for vertical vectors.
    pub fn to_angles(self) -> (f64, f64) {
        let h = self.x.hypot(self.y);
        let pitch = self.z.atan2(h);
        let yaw = if h > 1e-15 { self.y.atan2(self.x) } else { 0.0 };
        (normalize_angle(yaw), pitch)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Wrap an angle into (-pi, pi].
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a % (2.0 * PI);
    if r <= -PI {
        r += 2.0 * PI;
    } else if r > PI {
        r -= 2.0 * PI;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pose {
    pub position: Vec3,
    /// Radians.
    #[serde(default)]
    pub yaw: f64,
    /// Radians.
    #[serde(default)]
    pub pitch: f64,
}

impl Pose {
    pub fn new(position: Vec3, yaw: f64, pitch: f64) -> Self {
        Self {
            position,
            yaw: normalize_angle(yaw),
            pitch: normalize_angle(pitch),
        }
    }

    pub fn at(position: Vec3) -> Self {
        Self::new(position, 0.0, 0.0)
    }

    pub fn boresight(&self) -> Vec3 {
        Vec3::from_angles(self.yaw, self.pitch)
    }

    /// Body-frame direction to world frame (no translation).
    pub fn rotate(&self, v: Vec3) -> Vec3 {
        v.rotate_y(-self.pitch).rotate_z(self.yaw)
    }

    /// Body-frame point to world frame.
    pub fn transform_point(&self, p: Vec3) -> Vec3 {
        self.rotate(p) + self.position
    }

    /// Compose a child pose expressed in this pose's body frame.
    pub fn compose(&self, child: &Pose) -> Pose {
        let position = self.transform_point(child.position);
        let (yaw, pitch) = self.rotate(child.boresight()).to_angles();
        Pose { position, yaw, pitch }
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite() && self.yaw.is_finite() && self.pitch.is_finite()
    }

    pub fn angles_normalized(&self) -> bool {
        let ok = |a: f64| a > -PI && a <= PI;
        ok(self.yaw) && ok(self.pitch)
    }
}
