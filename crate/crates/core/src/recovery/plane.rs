//! Recovery of `ψ₁` at points of a plane from intensities on that plane.
//!
//! Every target is reached by an in-plane ray. Rays start at the plane's
//! anchor point and pass through the target, so targets on a common line
//! through the anchor share one recovered expansion. Targets closer to the
//! anchor than the near-zone bound fall back to a ray ending at the target,
//! pointed along the in-plane direction least aligned with `k`.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::engine::{reconstruct_on_ray, recover_expansion, RecoveryReport, SamplingPlan};
use crate::error::{Error, Result};
use crate::geom::{add, cross, dot, norm, scale, sub, Direction, Ray, Vec3, WaveVector};
use crate::measure::Intensity;

/// In-plane directions with `θ·k/κ` at or above `1 − PLANE_DIRECTION_TOL`
/// are refused.
pub const PLANE_DIRECTION_TOL: f64 = 1e-6;

/// A plane through `point` spanned by an orthonormal pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    point: Vec3,
    t1: Vec3,
    t2: Vec3,
}

impl Plane {
    /// Orthonormalizes the tangent pair (Gram–Schmidt); a degenerate pair is
    /// rejected.
    pub fn new(point: Vec3, t1: Vec3, t2: Vec3) -> Result<Self> {
        let u = Direction::new(t1)?.as_vec();
        let w = sub(t2, scale(u, dot(u, t2)));
        if norm(w) <= 1e-12 * norm(t2) {
            return Err(Error::Domain("plane tangents are parallel".into()));
        }
        let v = Direction::new(w)?.as_vec();
        Ok(Self { point, t1: u, t2: v })
    }

    pub fn point(&self) -> Vec3 {
        self.point
    }

    pub fn tangents(&self) -> (Vec3, Vec3) {
        (self.t1, self.t2)
    }

    pub fn normal(&self) -> Vec3 {
        cross(self.t1, self.t2)
    }

    /// In-plane unit direction minimizing `θ·k`.
    fn least_aligned(&self, k: &WaveVector) -> Vec3 {
        let (a, b) = (dot(k.k(), self.t1), dot(k.k(), self.t2));
        let m = a.hypot(b);
        if m <= 1e-12 * k.kappa() {
            self.t1
        } else {
            scale(add(scale(self.t1, a), scale(self.t2, b)), -1.0 / m)
        }
    }
}

#[derive(Debug, Clone)]
pub struct TargetOutcome {
    pub point: Vec3,
    /// Index into [`PlaneRecovery::rays`] of the ray used, if one was chosen.
    pub ray: Option<usize>,
    /// Distance from the ray start to the target.
    pub range: f64,
    pub value: Result<Complex64>,
}

#[derive(Debug, Clone)]
pub struct RayOutcome {
    pub ray: Ray,
    pub report: Result<RecoveryReport>,
}

#[derive(Debug, Clone)]
pub struct PlaneRecovery {
    pub targets: Vec<TargetOutcome>,
    /// Distinct rays, each recovered once.
    pub rays: Vec<RayOutcome>,
}

fn ray_key(ray: &Ray) -> [i64; 6] {
    let q = ray.x0.map(|c| (c * 1e9).round() as i64);
    let d = ray.dir.as_vec().map(|c| (c * 1e12).round() as i64);
    [q[0], q[1], q[2], d[0], d[1], d[2]]
}

fn choose_ray(plane: &Plane, k: &WaveVector, near_zone: f64, x: Vec3) -> Result<(Ray, f64)> {
    let rel = sub(x, plane.point);
    let off_plane = dot(rel, plane.normal());
    if off_plane.abs() > 1e-9 * (1.0 + norm(rel)) {
        return Err(Error::Domain(format!(
            "target {x:?} lies {off_plane:e} off the plane"
        )));
    }
    let range = norm(rel);
    let (start, dir, range) = if range > 0.0 && range >= near_zone {
        (plane.point, Direction::new(rel)?, range)
    } else {
        if !(near_zone > 0.0) {
            return Err(Error::OutOfZone { s: range, bound: near_zone });
        }
        let d = Direction::new(plane.least_aligned(k))?;
        (sub(x, scale(d.as_vec(), near_zone)), d, near_zone)
    };
    let gap = 1.0 - dot(dir.as_vec(), k.unit());
    if gap <= PLANE_DIRECTION_TOL {
        return Err(Error::DegenerateDirection { gap });
    }
    Ok((Ray::new(start, dir)?, range))
}

/// Recovers `ψ₁` at each target in the plane; failures are per target.
pub fn recover_on_plane<M: Intensity + Sync + ?Sized>(
    measure: &M,
    plane: &Plane,
    k: &WaveVector,
    plan: &SamplingPlan,
    targets: &[Vec3],
) -> PlaneRecovery {
    let mut rays: Vec<Ray> = Vec::new();
    let mut index: HashMap<[i64; 6], usize> = HashMap::new();
    let chosen: Vec<_> = targets
        .iter()
        .map(|&x| {
            choose_ray(plane, k, plan.near_zone, x).map(|(ray, range)| {
                let i = *index.entry(ray_key(&ray)).or_insert_with(|| {
                    rays.push(ray);
                    rays.len() - 1
                });
                (i, range)
            })
        })
        .collect();

    let reports: Vec<Result<RecoveryReport>> = rays
        .par_iter()
        .map(|ray| recover_expansion(measure, ray, k, plan))
        .collect();

    let outcomes = targets
        .iter()
        .zip(chosen)
        .map(|(&point, choice)| match choice {
            Err(e) => TargetOutcome {
                point,
                ray: None,
                range: f64::NAN,
                value: Err(e),
            },
            Ok((i, range)) => TargetOutcome {
                point,
                ray: Some(i),
                range,
                value: reports[i]
                    .as_ref()
                    .map_err(Clone::clone)
                    .and_then(|r| reconstruct_on_ray(r, k, range)),
            },
        })
        .collect();

    PlaneRecovery {
        targets: outcomes,
        rays: rays
            .into_iter()
            .zip(reports)
            .map(|(ray, report)| RayOutcome { ray, report })
            .collect(),
    }
}
