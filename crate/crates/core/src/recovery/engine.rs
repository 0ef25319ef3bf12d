use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex64;

use super::kernel::{check_direction, choose_tau, extract_leading, kernel_determinant, kernel_is_degenerate, phase_period};
use super::refit::joint_refit;
use super::residual::{amplification_estimate, residual_b, scaled_residual};
use super::richardson::richardson_refine;
use crate::error::{Error, Result};
use crate::field::{FarFieldExpansion, Gauge};
use crate::geom::{dot, norm, scale, sub, Direction, Ray, Vec3, WaveVector};
use crate::measure::Intensity;

/// Default number of recovered coefficients.
pub const DEFAULT_ORDER: usize = 4;
/// Default coefficient tolerance feeding the amplification policy.
pub const DEFAULT_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tau {
    /// `τ = π / (2(κ − k·θ))`, giving `|D| = 2`.
    Auto,
    Fixed(f64),
}

/// Radii and offsets at which intensities are sampled along a ray.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    /// Ascending base radii, measured from the recovery frame origin.
    pub s_grid: Vec<f64>,
    pub tau: Tau,
    /// Number of coefficients `f_1..f_order` to recover.
    pub order: usize,
    pub richardson: bool,
    /// Snap base radii to whole periods of the interference phase so that the
    /// oscillating remainders look alike at every radius.
    pub phase_lock: bool,
    /// Target accuracy; a level is abandoned once its expected round-off
    /// exceeds a tenth of this.
    pub tolerance: f64,
    /// Smallest radius at which reconstructions are trusted.
    pub near_zone: f64,
    /// After the induction, refit all coefficients jointly to the samples.
    pub joint_refit: bool,
}

impl SamplingPlan {
    pub fn new(s_grid: Vec<f64>, order: usize) -> Self {
        Self {
            s_grid,
            tau: Tau::Auto,
            order,
            richardson: true,
            phase_lock: true,
            tolerance: DEFAULT_TOLERANCE,
            near_zone: 0.0,
            joint_refit: true,
        }
    }

    pub fn with_tau(mut self, tau: Tau) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    pub fn with_phase_lock(mut self, on: bool) -> Self {
        self.phase_lock = on;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn with_near_zone(mut self, r: f64) -> Self {
        self.near_zone = r;
        self
    }

    pub fn with_joint_refit(mut self, on: bool) -> Self {
        self.joint_refit = on;
        self
    }

    fn validate(&self, tau: f64) -> Result<()> {
        if self.s_grid.is_empty() {
            return Err(Error::InvalidPlan("radius grid is empty".into()));
        }
        if self.s_grid.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidPlan("radii must be positive and finite".into()));
        }
        if self.s_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPlan("radius grid must be strictly ascending".into()));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidPlan(format!("τ must be positive, got {tau}")));
        }
        if self.s_grid[0] < 10.0 * tau {
            return Err(Error::InvalidPlan(format!(
                "smallest radius {} is below 10τ = {}",
                self.s_grid[0],
                10.0 * tau
            )));
        }
        if self.order < 1 {
            return Err(Error::InvalidPlan("order must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidPlan("tolerance must be positive".into()));
        }
        if !(self.near_zone >= 0.0) || !self.near_zone.is_finite() {
            return Err(Error::InvalidPlan("near-zone bound must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Diagnostics for one recovered coefficient `f_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelDiagnostics {
    /// 1-based coefficient index `j`.
    pub level: usize,
    pub d_abs: f64,
    pub tau: f64,
    /// Base radii actually sampled (after phase locking).
    pub radii: Vec<f64>,
    pub raw: Vec<Complex64>,
    pub refined: Complex64,
    /// `|refined − raw at the largest radius|`.
    pub error_estimate: f64,
    /// The coefficient after the joint refit, when one was applied.
    pub refit: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryReport {
    /// Recovered `f_j''`, plane-wave gauged, in the frame of the ray origin.
    pub expansion: FarFieldExpansion,
    pub per_level: Vec<LevelDiagnostics>,
    pub warnings: Vec<String>,
    /// Set when the amplification policy stopped the induction early.
    pub truncated: bool,
    pub near_zone: f64,
}

impl RecoveryReport {
    pub fn coeffs(&self) -> &[Complex64] {
        &self.expansion.coeffs
    }
}

/// One induction step: estimates `f_{n+1}''` from `b_n` sampled at `s` and
/// `s + τ`, where `n = prefix.len()`.
pub fn recover_next<M: Intensity + ?Sized>(
    measure: &M,
    prefix: &[Complex64],
    k: &WaveVector,
    q: Vec3,
    dir: Direction,
    s: f64,
    tau: f64,
) -> Result<Complex64> {
    check_direction(k, dir)?;
    let d = kernel_determinant(k, dir, tau);
    if kernel_is_degenerate(d) {
        return Err(Error::DegenerateTau { d_abs: d.norm(), tau });
    }
    let g_x = residual_b(measure, prefix, k, q, dir, s)?;
    let g_y = residual_b(measure, prefix, k, q, dir, s + tau)?;
    extract_leading(g_x, g_y, s, tau, k, dir)
}

/// Each point is measured once; later levels reuse the stored intensity.
struct Recorded<'a, M: ?Sized> {
    inner: &'a M,
    seen: RefCell<HashMap<[u64; 3], f64>>,
}

impl<M: Intensity + ?Sized> Intensity for Recorded<'_, M> {
    fn intensity(&self, x: Vec3) -> Result<f64> {
        let key = x.map(f64::to_bits);
        if let Some(&v) = self.seen.borrow().get(&key) {
            return Ok(v);
        }
        let v = self.inner.intensity(x)?;
        self.seen.borrow_mut().insert(key, v);
        Ok(v)
    }
}

fn lock_grid(grid: &[f64], period: f64) -> Result<Vec<f64>> {
    let locked: Vec<f64> = grid
        .iter()
        .map(|&s| (s / period).round().max(1.0) * period)
        .collect();
    if locked.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidPlan(format!(
            "radius grid collapses when locked to the phase period {period}"
        )));
    }
    Ok(locked)
}

/// The base radii a plan samples along `dir`, after optional phase locking.
pub fn sampled_radii(plan: &SamplingPlan, k: &WaveVector, dir: Direction) -> Result<Vec<f64>> {
    if plan.phase_lock {
        lock_grid(&plan.s_grid, phase_period(k, dir)?)
    } else {
        Ok(plan.s_grid.clone())
    }
}

/// Recovers `f_1''..f_n''` along `ray` in the frame of its start point.
pub fn recover_expansion<M: Intensity + ?Sized>(
    measure: &M,
    ray: &Ray,
    k: &WaveVector,
    plan: &SamplingPlan,
) -> Result<RecoveryReport> {
    recover_expansion_in_frame(measure, ray, ray.x0, k, plan)
}

/// As [`recover_expansion`] but with an explicit frame origin `q` such that
/// the ray is a sub-ray of `{q + sθ}`; radii are then measured from `q` and
/// must reach beyond the ray start.
pub fn recover_expansion_in_frame<M: Intensity + ?Sized>(
    measure: &M,
    ray: &Ray,
    q: Vec3,
    k: &WaveVector,
    plan: &SamplingPlan,
) -> Result<RecoveryReport> {
    let dir = ray.dir;
    check_direction(k, dir)?;
    let offset = sub(ray.x0, q);
    let s_start = dot(offset, dir.as_vec());
    let scale_len = 1.0 + norm(q).max(norm(ray.x0));
    if s_start < -1e-12 * scale_len || norm(sub(offset, scale(dir.as_vec(), s_start))) > 1e-9 * scale_len {
        return Err(Error::Domain(format!(
            "ray starting at {:?} does not lie on the ray from frame origin {q:?}",
            ray.x0
        )));
    }
    let tau = match plan.tau {
        Tau::Auto => choose_tau(k, dir)?,
        Tau::Fixed(t) => t,
    };
    plan.validate(tau)?;
    let d = kernel_determinant(k, dir, tau);
    let d_abs = d.norm();
    if kernel_is_degenerate(d) {
        return Err(Error::DegenerateTau { d_abs, tau });
    }
    let radii = sampled_radii(plan, k, dir)?;
    if radii[0] <= s_start {
        return Err(Error::InvalidPlan(format!(
            "radius {} does not reach past the ray start at {s_start}",
            radii[0]
        )));
    }
    let s_max = radii[radii.len() - 1] + tau;
    let measure = Recorded {
        inner: measure,
        seen: RefCell::new(HashMap::new()),
    };

    let mut coeffs: Vec<Complex64> = Vec::with_capacity(plan.order);
    let mut per_level = Vec::with_capacity(plan.order);
    let mut warnings = Vec::new();
    let mut truncated = false;

    for n in 0..plan.order {
        let noise = amplification_estimate(s_max, n);
        if noise > 0.1 * plan.tolerance {
            warnings.push(format!(
                "level {}: expected round-off {noise:.3e} at radius {s_max:.6e} exceeds 0.1 × tolerance {:.3e}; \
                 stopping after {n} coefficient(s)",
                n + 1,
                plan.tolerance
            ));
            truncated = true;
            break;
        }
        let raw = radii
            .iter()
            .map(|&s| recover_next(&measure, &coeffs, k, q, dir, s, tau))
            .collect::<Result<Vec<_>>>()?;
        let last = raw[raw.len() - 1];
        let refined = if plan.richardson && raw.len() >= 2 {
            let est: Vec<_> = radii.iter().copied().zip(raw.iter().copied()).collect();
            let r = richardson_refine(&est)?;
            if let Some(w) = r.warning {
                warnings.push(format!("level {}: {w}", n + 1));
            }
            r.value
        } else {
            last
        };
        per_level.push(LevelDiagnostics {
            level: n + 1,
            d_abs,
            tau,
            radii: radii.clone(),
            raw,
            refined,
            error_estimate: (refined - last).norm(),
            refit: None,
        });
        coeffs.push(refined);
    }

    if plan.joint_refit && !coeffs.is_empty() {
        let samples = radii
            .iter()
            .flat_map(|&s| [s, s + tau])
            .map(|s| Ok((s, scaled_residual(&measure, q, dir, s)?)))
            .collect::<Result<Vec<_>>>()?;
        match joint_refit(&coeffs, &samples, k, dir) {
            Some(fit) => {
                for (level, c) in per_level.iter_mut().zip(&fit.coeffs) {
                    level.refit = Some(*c);
                }
                coeffs = fit.coeffs;
            }
            None => warnings.push(format!(
                "joint refit skipped: {} samples cannot determine {} complex coefficients",
                samples.len(),
                coeffs.len()
            )),
        }
    }

    Ok(RecoveryReport {
        expansion: FarFieldExpansion {
            frame_origin: q,
            dir,
            coeffs,
            gauge: Gauge::PlaneWave,
        },
        per_level,
        warnings,
        truncated,
        near_zone: plan.near_zone,
    })
}

/// `ψ̂₁(q + s·θ) = e^{ik·q} (e^{iκs}/s) Σ_j f̂_j'' / s^{j−1}`.
pub fn reconstruct_on_ray(report: &RecoveryReport, k: &WaveVector, s_eval: f64) -> Result<Complex64> {
    if !(s_eval >= report.near_zone) || !(s_eval > 0.0) {
        return Err(Error::OutOfZone {
            s: s_eval,
            bound: report.near_zone,
        });
    }
    report.expansion.eval(k, s_eval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::FnIntensity;
    use std::f64::consts::PI;

    fn setup() -> (FnIntensity<impl Fn(Vec3) -> Result<f64>>, WaveVector, Ray) {
        (
            FnIntensity(|_x: Vec3| Ok(1.0)),
            WaveVector::new([0.0, 0.0, 1.0]).unwrap(),
            Ray::new([0.0; 3], Direction::new([1.0, 0.0, 0.0]).unwrap()).unwrap(),
        )
    }

    #[test]
    fn plan_validation() {
        let (m, k, ray) = setup();
        let bad = [
            SamplingPlan::new(vec![], 2),
            SamplingPlan::new(vec![200.0, 100.0], 2),
            SamplingPlan::new(vec![5.0, 100.0], 2),
            SamplingPlan::new(vec![100.0, 200.0], 0),
        ];
        for plan in bad {
            assert!(matches!(
                recover_expansion(&m, &ray, &k, &plan),
                Err(Error::InvalidPlan(_))
            ));
        }
    }

    #[test]
    fn locked_grid_hits_whole_periods() {
        let (_, k, ray) = setup();
        let plan = SamplingPlan::new(vec![1e3, 2e3, 4e3], 1);
        let radii = sampled_radii(&plan, &k, ray.dir).unwrap();
        for (s, want) in radii.iter().zip([1e3, 2e3, 4e3]) {
            assert!(((s / (2.0 * PI)).round() - s / (2.0 * PI)).abs() < 1e-9);
            assert!((s - want).abs() <= PI);
        }
        let off = sampled_radii(&plan.clone().with_phase_lock(false), &k, ray.dir).unwrap();
        assert_eq!(off, vec![1e3, 2e3, 4e3]);
    }

    #[test]
    fn amplification_truncates() {
        let (m, k, ray) = setup();
        let plan = SamplingPlan::new(vec![1e3, 2e3, 4e3], 4);
        let r = recover_expansion(&m, &ray, &k, &plan).unwrap();
        assert!(r.truncated);
        assert_eq!(r.coeffs().len(), 3);
        assert_eq!(r.per_level.len(), 3);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn frame_must_contain_ray() {
        let (m, k, _) = setup();
        let ray = Ray::new([5.0, 1.0, 0.0], Direction::new([1.0, 0.0, 0.0]).unwrap()).unwrap();
        let plan = SamplingPlan::new(vec![100.0, 200.0], 1);
        assert!(recover_expansion_in_frame(&m, &ray, [0.0; 3], &k, &plan).is_err());
        assert!(recover_expansion_in_frame(&m, &ray, [0.0, 1.0, 0.0], &k, &plan).is_ok());
        assert!(recover_expansion_in_frame(&m, &ray, [6.0, 1.0, 0.0], &k, &plan).is_err());
    }

    #[test]
    fn out_of_zone() {
        let (m, k, ray) = setup();
        let plan = SamplingPlan::new(vec![100.0, 200.0], 1).with_near_zone(50.0);
        let r = recover_expansion(&m, &ray, &k, &plan).unwrap();
        assert!(matches!(reconstruct_on_ray(&r, &k, 10.0), Err(Error::OutOfZone { .. })));
        assert_eq!(reconstruct_on_ray(&r, &k, 60.0).unwrap(), Complex64::new(0.0, 0.0));
    }
}
