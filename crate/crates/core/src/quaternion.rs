use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

/// Quaternion `w + x i + y j + z k`, stored as `[w, x, y, z]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quat(pub [f64; 4]);

impl Quat {
    pub const ONE: Quat = Quat([1.0, 0.0, 0.0, 0.0]);

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat([w, x, y, z])
    }

    /// Unit quaternion rotating by `angle` about the (normalized) `axis`.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let (s, c) = (angle / 2.0).sin_cos();
        Quat([c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n])
    }

    pub fn w(&self) -> f64 {
        self.0[0]
    }

    pub fn dot(&self, other: &Quat) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Quat {
        let n = self.norm();
        Quat(self.0.map(|c| c / n))
    }

    pub fn conj(&self) -> Quat {
        let [w, x, y, z] = self.0;
        Quat([w, -x, -y, -z])
    }

    pub fn scale(&self, s: f64) -> Quat {
        Quat(self.0.map(|c| c * s))
    }

    pub fn add(&self, other: &Quat) -> Quat {
        let mut out = self.0;
        for (o, b) in out.iter_mut().zip(other.0.iter()) {
            *o += b;
        }
        Quat(out)
    }

    pub fn powi(&self, k: u32) -> Quat {
        (0..k).fold(Quat::ONE, |acc, _| acc * *self)
    }
}

impl Mul for Quat {
    type Output = Quat;

    fn mul(self, rhs: Quat) -> Quat {
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = rhs.0;
        Quat([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ])
    }
}

impl Neg for Quat {
    type Output = Quat;

    fn neg(self) -> Quat {
        self.scale(-1.0)
    }
}
