//! Minimal 3D vector math and body-frame transforms.
//!
//! World frame is flat-earth NED: x north, y east, z down. Aircraft body
//! frame: x forward, y right, z down. Attitude is the standard aerospace
//! yaw → pitch → roll sequence.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        if n == 0.0 { Vec3::ZERO } else { self * (1.0 / n) }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
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
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Rotate a world-frame (NED) vector into the body frame of an aircraft
/// with the given attitude. Inverse of the yaw-pitch-roll body-to-world
/// rotation, applied as Rx(-roll) · Ry(-pitch) · Rz(-yaw).
pub fn world_to_body(v: Vec3, heading_deg: f64, pitch_deg: f64, bank_deg: f64) -> Vec3 {
    let (sy, cy) = heading_deg.to_radians().sin_cos();
    let (sp, cp) = pitch_deg.to_radians().sin_cos();
    let (sr, cr) = bank_deg.to_radians().sin_cos();

    // undo yaw
    let v = Vec3::new(cy * v.x + sy * v.y, -sy * v.x + cy * v.y, v.z);
    // undo pitch
    let v = Vec3::new(cp * v.x - sp * v.z, v.y, sp * v.x + cp * v.z);
    // undo roll
    Vec3::new(v.x, cr * v.y + sr * v.z, -sr * v.y + cr * v.z)
}

/// Body-frame unit vector for a line of sight at the given azimuth
/// (+right) and elevation (+up) in degrees.
pub fn body_direction(azimuth_deg: f64, elevation_deg: f64) -> Vec3 {
    let (sa, ca) = azimuth_deg.to_radians().sin_cos();
    let (se, ce) = elevation_deg.to_radians().sin_cos();
    // body z is down, so +elevation points toward -z
    Vec3::new(ce * ca, ce * sa, -se)
}

/// Azimuth/elevation (degrees, +right / +up) of a body-frame vector.
/// Returns (0, 0) for the zero vector.
pub fn body_to_angles(v: Vec3) -> (f64, f64) {
    if v.norm() == 0.0 {
        return (0.0, 0.0);
    }
    let az = v.y.atan2(v.x).to_degrees();
    let el = (-v.z).atan2(v.x.hypot(v.y)).to_degrees();
    (az, el)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn world_to_body_level_north() {
        // Level flight heading north: body axes coincide with NED.
        let v = world_to_body(Vec3::new(1.0, 2.0, 3.0), 0.0, 0.0, 0.0);
        assert_close(v.x, 1.0, 1e-12);
        assert_close(v.y, 2.0, 1e-12);
        assert_close(v.z, 3.0, 1e-12);
    }

    #[test]
    fn world_to_body_heading_east() {
        // Heading 090: world east becomes body forward.
        let v = world_to_body(Vec3::new(0.0, 1.0, 0.0), 90.0, 0.0, 0.0);
        assert_close(v.x, 1.0, 1e-12);
        assert_close(v.y, 0.0, 1e-12);
    }

    #[test]
    fn angles_round_trip() {
        for &(az, el) in &[(0.0, 0.0), (45.0, 10.0), (-120.0, -30.0), (170.0, 85.0)] {
            let (a, e) = body_to_angles(body_direction(az, el));
            assert_close(a, az, 1e-9);
            assert_close(e, el, 1e-9);
        }
    }

    #[test]
    fn pitch_up_sees_horizon_below() {
        // Pitched up 10°, a level line of sight ahead appears 10° below.
        let los = Vec3::new(1.0, 0.0, 0.0);
        let v = world_to_body(los, 0.0, 10.0, 0.0);
        let (az, el) = body_to_angles(v);
        assert_close(az, 0.0, 1e-12);
        assert_close(el, -10.0, 1e-9);
    }

    #[test]
    fn bank_rotates_lateral_sight_lines() {
        // Banked right 90°, a co-altitude target to the east sits along the
        // canopy axis: elevation +90 in the body frame.
        let v = world_to_body(Vec3::new(0.0, 1.0, 0.0), 0.0, 0.0, 90.0);
        let (_, el) = body_to_angles(v);
        assert_close(el, 90.0, 1e-9);
    }
}
