//! Plain three-vector helpers and the geometric domain types: wave vectors,
//! unit directions and rays.

use crate::error::{Error, Result};

/// A point or vector in R³.
pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: Vec3, t: f64) -> Vec3 {
    [a[0] * t, a[1] * t, a[2] * t]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn finite(a: Vec3) -> bool {
    a.iter().all(|c| c.is_finite())
}

/// Incident wave vector `k` together with its cached modulus `κ = |k|`.
///
/// Fixes the plane wave `e^{i k·x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    k: Vec3,
    kappa: f64,
}

impl WaveVector {
    pub fn new(k: Vec3) -> Result<Self> {
        let kappa = norm(k);
        if !finite(k) || !(kappa > 0.0) {
            return Err(Error::Domain(format!(
                "wave vector must be finite and nonzero, got {k:?}"
            )));
        }
        Ok(Self { k, kappa })
    }

    pub fn k(&self) -> Vec3 {
        self.k
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Propagation direction `k/κ`.
    pub fn unit(&self) -> Vec3 {
        scale(self.k, 1.0 / self.kappa)
    }
}

/// A unit vector on S².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction(Vec3);

impl Direction {
    /// Normalizes `u`; the zero vector and non-finite input are rejected.
    pub fn new(u: Vec3) -> Result<Self> {
        let big = u.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if !finite(u) || !(big > 0.0) {
            return Err(Error::Domain(format!(
                "direction must be finite and nonzero, got {u:?}"
            )));
        }
        let u = scale(u, 1.0 / big);
        let mut v = scale(u, 1.0 / norm(u));
        // one refinement pass pulls |v| to within an ulp or two of 1
        let m = norm(v);
        if m != 1.0 {
            v = scale(v, 1.0 / m);
        }
        Ok(Self(v))
    }

    pub fn as_vec(&self) -> Vec3 {
        self.0
    }

    /// Polar cosine and azimuth of the direction.
    pub fn polar_azimuth(&self) -> (f64, f64) {
        let [x, y, z] = self.0;
        (z.clamp(-1.0, 1.0), y.atan2(x))
    }
}

/// The half-line `{x0 + s·dir : s > 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub x0: Vec3,
    pub dir: Direction,
}

impl Ray {
    pub fn new(x0: Vec3, dir: Direction) -> Result<Self> {
        if !finite(x0) {
            return Err(Error::Domain(format!("ray start must be finite, got {x0:?}")));
        }
        Ok(Self { x0, dir })
    }

    pub fn point(&self, s: f64) -> Vec3 {
        add(self.x0, scale(self.dir.as_vec(), s))
    }
}
