//! Experiment configuration: one TOML document with `scene`, `geometry`,
//! `plan`, `noise`, `checks` and `output` sections.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{MultipoleSpectrum, RadiatingField, DEFAULT_DEGREE_BOUND, MAX_DEGREE};
use crate::geom::{dot, norm, scale, sub, Direction, Ray, Vec3, WaveVector};
use crate::recovery::{Plane, SamplingPlan, Tau, DEFAULT_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_id")]
    pub id: String,
    pub scene: SceneConfig,
    pub geometry: GeometryConfig,
    pub plan: PlanConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_id() -> String {
    "experiment".into()
}

/// One multipole entry `(l, m, Re c_lm, Im c_lm)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode(pub i64, pub i64, pub f64, pub f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub wave_vector: Vec3,
    #[serde(default)]
    pub modes: Vec<Mode>,
    #[serde(default)]
    pub center: Vec3,
    pub r_min: f64,
    #[serde(default = "default_degree_bound")]
    pub degree_bound: usize,
}

fn default_degree_bound() -> usize {
    DEFAULT_DEGREE_BOUND
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GeometryConfig {
    Ray {
        start: Vec3,
        direction: Vec3,
        /// Origin `q` of the recovery frame; the ray must lie on `{q + sθ}`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        frame_origin: Option<Vec3>,
    },
    Plane {
        point: Vec3,
        tangents: [Vec3; 2],
        targets: Vec<Vec3>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauSetting {
    Auto,
    Fixed(f64),
}

impl Serialize for TauSetting {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TauSetting::Auto => s.serialize_str("auto"),
            TauSetting::Fixed(t) => s.serialize_f64(*t),
        }
    }
}

impl<'de> Deserialize<'de> for TauSetting {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Num(f64),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) if s == "auto" => Ok(TauSetting::Auto),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "tau must be \"auto\" or a positive number, got {s:?}"
            ))),
            Raw::Num(t) => Ok(TauSetting::Fixed(t)),
            Raw::Int(t) => Ok(TauSetting::Fixed(t as f64)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanConfig {
    pub s_grid: Vec<f64>,
    #[serde(default = "default_tau")]
    pub tau: TauSetting,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_true")]
    pub richardson: bool,
    #[serde(default = "default_true")]
    pub phase_lock: bool,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub near_zone: f64,
    #[serde(default = "default_true")]
    pub joint_refit: bool,
}

fn default_tau() -> TauSetting {
    TauSetting::Auto
}
fn default_order() -> usize {
    2
}
fn default_true() -> bool {
    true
}
fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// Relative amplitude η of the perturbation `I·(1 + η·u)`.
    pub amplitude: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Pass/fail checks that decide the exit status.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    /// Bound on `|refined − oracle|` per level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient_tolerance: Option<f64>,
    /// Bound on the relative reconstruction error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruction_tolerance: Option<f64>,
    /// Ray parameters at which reconstructions are compared.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eval_radii: Vec<f64>,
    /// Admissible window for per-level convergence slopes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_range: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Tsv,
}

impl ReportFormat {
    pub fn delimiter(self) -> u8 {
        match self {
            ReportFormat::Csv => b',',
            ReportFormat::Tsv => b'\t',
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Tsv => "tsv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_format")]
    pub format: ReportFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            format: default_format(),
        }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_format() -> ReportFormat {
    ReportFormat::Csv
}

fn finite3(v: Vec3) -> bool {
    v.iter().all(|c| c.is_finite())
}

fn check_exterior(path: &str, p: Vec3, center: Vec3, r_min: f64) -> Result<()> {
    let d = norm(sub(p, center));
    if !(d >= r_min) {
        return Err(Error::config(
            path,
            format!("point {p:?} lies at distance {d} from the source center, inside r_min = {r_min}"),
        ));
    }
    Ok(())
}

/// Distance from `c` to the ray `{x0 + sθ : s >= 0}`.
fn ray_distance(x0: Vec3, dir: Vec3, c: Vec3) -> f64 {
    let rel = sub(c, x0);
    let t = dot(rel, dir).max(0.0);
    norm(sub(rel, scale(dir, t)))
}

impl ExperimentConfig {
    pub fn wave_vector(&self) -> Result<WaveVector> {
        WaveVector::new(self.scene.wave_vector)
    }

    pub fn field(&self) -> Result<RadiatingField> {
        let sc = &self.scene;
        let entries = sc.modes.iter().map(|&Mode(l, m, re, im)| (l as usize, m as i32, Complex64::new(re, im)));
        let spectrum = MultipoleSpectrum::from_entries(sc.degree_bound, entries)?;
        RadiatingField::new(spectrum, sc.center, sc.r_min, self.wave_vector()?.kappa())
    }

    pub fn sampling_plan(&self) -> SamplingPlan {
        let p = &self.plan;
        SamplingPlan {
            s_grid: p.s_grid.clone(),
            tau: match p.tau {
                TauSetting::Auto => Tau::Auto,
                TauSetting::Fixed(t) => Tau::Fixed(t),
            },
            order: p.order,
            richardson: p.richardson,
            phase_lock: p.phase_lock,
            tolerance: p.tolerance,
            near_zone: p.near_zone,
            joint_refit: p.joint_refit,
        }
    }

    /// Ray and recovery frame origin, for ray geometries.
    pub fn ray(&self) -> Result<Option<(Ray, Vec3)>> {
        match &self.geometry {
            GeometryConfig::Ray {
                start,
                direction,
                frame_origin,
            } => {
                let ray = Ray::new(*start, Direction::new(*direction)?)?;
                Ok(Some((ray, frame_origin.unwrap_or(*start))))
            }
            GeometryConfig::Plane { .. } => Ok(None),
        }
    }

    pub fn plane(&self) -> Result<Option<(Plane, Vec<Vec3>)>> {
        match &self.geometry {
            GeometryConfig::Plane {
                point,
                tangents,
                targets,
            } => Ok(Some((Plane::new(*point, tangents[0], tangents[1])?, targets.clone()))),
            GeometryConfig::Ray { .. } => Ok(None),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config("<root>", e.to_string()))
    }

    fn validate(&self) -> Result<()> {
        let sc = &self.scene;
        let k = WaveVector::new(sc.wave_vector).map_err(|e| Error::config("scene.wave_vector", e.to_string()))?;
        let _ = k;
        if !finite3(sc.center) {
            return Err(Error::config("scene.center", "must be finite"));
        }
        if !(sc.r_min > 0.0) || !sc.r_min.is_finite() {
            return Err(Error::config("scene.r_min", format!("must be positive, got {}", sc.r_min)));
        }
        if sc.degree_bound > MAX_DEGREE {
            return Err(Error::config(
                "scene.degree_bound",
                format!("{} exceeds the supported maximum {MAX_DEGREE}", sc.degree_bound),
            ));
        }
        for (i, &Mode(l, m, re, im)) in sc.modes.iter().enumerate() {
            let path = format!("scene.modes[{i}]");
            if l < 0 || l as usize > sc.degree_bound {
                return Err(Error::config(path, format!("mode ({l}, {m}, {re}, {im}) has degree outside 0..={}", sc.degree_bound)));
            }
            if m.abs() > l {
                return Err(Error::config(path, format!("mode ({l}, {m}, {re}, {im}) has |m| > l")));
            }
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::config(path, format!("mode ({l}, {m}, {re}, {im}) amplitude is not finite")));
            }
        }

        let (c, r) = (sc.center, sc.r_min);
        match &self.geometry {
            GeometryConfig::Ray {
                start,
                direction,
                frame_origin,
            } => {
                if !finite3(*start) {
                    return Err(Error::config("geometry.start", "must be finite"));
                }
                check_exterior("geometry.start", *start, c, r)?;
                let dir = Direction::new(*direction).map_err(|e| Error::config("geometry.direction", e.to_string()))?;
                let miss = ray_distance(*start, dir.as_vec(), c);
                if !(miss >= r) {
                    return Err(Error::config(
                        "geometry.direction",
                        format!("ray passes within {miss} of the source center, inside r_min = {r}"),
                    ));
                }
                if let Some(q) = frame_origin {
                    let off = sub(*start, *q);
                    let along = dot(off, dir.as_vec());
                    let scale_len = 1.0 + norm(*q).max(norm(*start));
                    if !finite3(*q) || along < 0.0 || norm(sub(off, scale(dir.as_vec(), along))) > 1e-9 * scale_len {
                        return Err(Error::config(
                            "geometry.frame_origin",
                            "the ray must lie on the half-line from the frame origin along the direction",
                        ));
                    }
                }
            }
            GeometryConfig::Plane {
                point,
                tangents,
                targets,
            } => {
                if !finite3(*point) {
                    return Err(Error::config("geometry.point", "must be finite"));
                }
                check_exterior("geometry.point", *point, c, r)?;
                let plane = Plane::new(*point, tangents[0], tangents[1])
                    .map_err(|e| Error::config("geometry.tangents", e.to_string()))?;
                let gap = dot(sub(c, *point), plane.normal()).abs();
                if !(gap >= r) {
                    return Err(Error::config(
                        "geometry.point",
                        format!("plane passes within {gap} of the source center, inside r_min = {r}"),
                    ));
                }
                if targets.is_empty() {
                    return Err(Error::config("geometry.targets", "at least one target is required"));
                }
                for (i, t) in targets.iter().enumerate() {
                    let path = format!("geometry.targets[{i}]");
                    if !finite3(*t) {
                        return Err(Error::config(path, "must be finite"));
                    }
                    check_exterior(&path, *t, c, r)?;
                }
            }
        }

        let p = &self.plan;
        if p.s_grid.is_empty() {
            return Err(Error::config("plan.s_grid", "must not be empty"));
        }
        if p.s_grid.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return Err(Error::config("plan.s_grid", "radii must be positive and finite"));
        }
        if p.s_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::config("plan.s_grid", "radii must be strictly ascending"));
        }
        if let TauSetting::Fixed(t) = p.tau {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::config("plan.tau", format!("must be \"auto\" or positive, got {t}")));
            }
        }
        if p.order < 1 {
            return Err(Error::config("plan.order", "must be at least 1"));
        }
        if !(p.tolerance > 0.0) {
            return Err(Error::config("plan.tolerance", "must be positive"));
        }
        if !(p.near_zone >= 0.0) || !p.near_zone.is_finite() {
            return Err(Error::config("plan.near_zone", "must be nonnegative"));
        }
        if let Some(n) = &self.noise {
            if !(0.0..1.0).contains(&n.amplitude) {
                return Err(Error::config("noise.amplitude", "must lie in [0, 1)"));
            }
        }
        let ch = &self.checks;
        for (path, v) in [
            ("checks.coefficient_tolerance", ch.coefficient_tolerance),
            ("checks.reconstruction_tolerance", ch.reconstruction_tolerance),
        ] {
            if let Some(t) = v {
                if !(t > 0.0) {
                    return Err(Error::config(path, "must be positive"));
                }
            }
        }
        if ch.eval_radii.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return Err(Error::config("checks.eval_radii", "radii must be positive and finite"));
        }
        if let Some([lo, hi]) = ch.slope_range {
            if !(lo <= hi) {
                return Err(Error::config("checks.slope_range", "lower bound exceeds upper bound"));
            }
        }
        Ok(())
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
        let msg = e.message().to_string();
        let path = e
            .span()
            .map(|sp| {
                let line = text[..sp.start].matches('\n').count() + 1;
                format!("line {line}")
            })
            .unwrap_or_else(|| "<document>".into());
        Error::config(path, msg)
    })?;
    cfg.validate()?;
    Ok(cfg)
}
