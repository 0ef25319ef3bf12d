//! C ABI over `holophase`.
//!
//! Scenes and reports are opaque heap handles created by `hp_*_new` /
//! `hp_recover_*` and released with the matching `hp_*_free`. Every fallible
//! call returns an [`HpStatus`]; on failure the message is available from
//! [`hp_last_error_message`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;

use holophase::field::{Hologram, MultipoleSpectrum, RadiatingField, DEFAULT_DEGREE_BOUND};
use holophase::measure::Intensity;
use holophase::recovery::{choose_tau, reconstruct_on_ray, recover_expansion, RecoveryReport, SamplingPlan, Tau};
use holophase::{Direction, Error, Ray, Vec3, WaveVector};

/// Result codes. `HP_STATUS_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    UnsupportedDegree = 3,
    OutOfRegion = 4,
    DegenerateDirection = 5,
    DegenerateTau = 6,
    OutOfZone = 7,
    Measurement = 8,
    InvalidPlan = 9,
    NoAdmissibleDirection = 10,
    Config = 11,
    Io = 12,
    Report = 13,
    IndexOutOfRange = 14,
    Panic = 15,
}

impl From<&Error> for HpStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => HpStatus::Domain,
            Error::UnsupportedDegree { .. } => HpStatus::UnsupportedDegree,
            Error::OutOfRegion { .. } => HpStatus::OutOfRegion,
            Error::DegenerateDirection { .. } => HpStatus::DegenerateDirection,
            Error::DegenerateTau { .. } => HpStatus::DegenerateTau,
            Error::OutOfZone { .. } => HpStatus::OutOfZone,
            Error::Measurement(_) => HpStatus::Measurement,
            Error::InvalidPlan(_) => HpStatus::InvalidPlan,
            Error::NoAdmissibleDirection => HpStatus::NoAdmissibleDirection,
            Error::Config { .. } => HpStatus::Config,
            Error::Io { .. } => HpStatus::Io,
            Error::Report(_) => HpStatus::Report,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(status: HpStatus, msg: impl Into<String>) -> HpStatus {
    set_last_error(msg.into());
    status
}

fn from_error(e: Error) -> HpStatus {
    let status = HpStatus::from(&e);
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), HpStatus>) -> HpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HpStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(HpStatus::Panic, "internal panic"),
    }
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Sampling plan. `tau <= 0` selects the automatic offset; `tolerance <= 0`
/// selects the library default.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HpPlan {
    pub s_grid: *const f64,
    pub s_len: usize,
    pub tau: f64,
    pub order: usize,
    pub richardson: bool,
    pub phase_lock: bool,
    pub tolerance: f64,
    pub near_zone: f64,
    pub joint_refit: bool,
}

/// Opaque plane wave plus multipole radiation solution.
pub struct HpScene {
    k: WaveVector,
    field: RadiatingField,
}

/// Opaque recovery result.
pub struct HpReport {
    k: WaveVector,
    report: RecoveryReport,
}

unsafe fn read3(p: *const f64) -> Result<Vec3, HpStatus> {
    if p.is_null() {
        return Err(fail(HpStatus::NullPointer, "null vector argument"));
    }
    Ok([*p, *p.add(1), *p.add(2)])
}

fn lift<T>(r: holophase::Result<T>) -> Result<T, HpStatus> {
    r.map_err(from_error)
}

unsafe fn write_complex(z: Complex64, re: *mut f64, im: *mut f64) -> Result<(), HpStatus> {
    if re.is_null() || im.is_null() {
        return Err(fail(HpStatus::NullPointer, "null output pointer"));
    }
    *re = z.re;
    *im = z.im;
    Ok(())
}

unsafe fn read_plan(plan: *const HpPlan) -> Result<SamplingPlan, HpStatus> {
    let p = plan
        .as_ref()
        .ok_or_else(|| fail(HpStatus::NullPointer, "null plan"))?;
    if p.s_grid.is_null() && p.s_len > 0 {
        return Err(fail(HpStatus::NullPointer, "null radius grid"));
    }
    let grid = if p.s_len == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(p.s_grid, p.s_len).to_vec()
    };
    let mut out = SamplingPlan::new(grid, p.order)
        .with_richardson(p.richardson)
        .with_phase_lock(p.phase_lock)
        .with_near_zone(p.near_zone)
        .with_joint_refit(p.joint_refit);
    if p.tau > 0.0 {
        out = out.with_tau(Tau::Fixed(p.tau));
    }
    if p.tolerance > 0.0 {
        out = out.with_tolerance(p.tolerance);
    }
    Ok(out)
}

/// Creates an empty scene (zero radiated field).
///
/// # Safety
/// `k` and `center` must point to three readable doubles; `out` must be a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hp_scene_new(
    k: *const f64,
    center: *const f64,
    r_min: f64,
    out: *mut *mut HpScene,
) -> HpStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(HpStatus::NullPointer, "null output handle"));
        }
        let k = lift(WaveVector::new(read3(k)?))?;
        let field = lift(RadiatingField::new(
            MultipoleSpectrum::default(),
            read3(center)?,
            r_min,
            k.kappa(),
        ))?;
        *out = Box::into_raw(Box::new(HpScene { k, field }));
        Ok(())
    })
}

/// Adds `re + i·im` to the amplitude of mode `(l, m)`.
///
/// # Safety
/// `scene` must be a live handle from [`hp_scene_new`].
#[no_mangle]
pub unsafe extern "C" fn hp_scene_add_mode(scene: *mut HpScene, l: u32, m: i32, re: f64, im: f64) -> HpStatus {
    guard(|| {
        let sc = scene
            .as_mut()
            .ok_or_else(|| fail(HpStatus::NullPointer, "null scene"))?;
        let mut spectrum = sc.field.spectrum().clone();
        if spectrum.degree_bound() < l as usize {
            let wider = lift(MultipoleSpectrum::from_entries(
                (l as usize).max(DEFAULT_DEGREE_BOUND),
                spectrum.iter(),
            ))?;
            spectrum = wider;
        }
        lift(spectrum.insert(l as usize, m, Complex64::new(re, im)))?;
        sc.field = lift(RadiatingField::new(
            spectrum,
            sc.field.center(),
            sc.field.r_min(),
            sc.field.kappa(),
        ))?;
        Ok(())
    })
}

/// Radiated field `ψ₁(x)`.
///
/// # Safety
/// `scene` must be live; `x` must point to three doubles; `re`, `im` writable.
#[no_mangle]
pub unsafe extern "C" fn hp_scene_eval_radiated(
    scene: *const HpScene,
    x: *const f64,
    re: *mut f64,
    im: *mut f64,
) -> HpStatus {
    guard(|| {
        let sc = scene.as_ref().ok_or_else(|| fail(HpStatus::NullPointer, "null scene"))?;
        let v = lift(sc.field.eval_radiated(read3(x)?))?;
        write_complex(v, re, im)
    })
}

/// Intensity `|e^{ik·x} + ψ₁(x)|²`.
///
/// # Safety
/// `scene` must be live; `x` must point to three doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hp_scene_intensity(scene: *const HpScene, x: *const f64, out: *mut f64) -> HpStatus {
    guard(|| {
        let sc = scene.as_ref().ok_or_else(|| fail(HpStatus::NullPointer, "null scene"))?;
        if out.is_null() {
            return Err(fail(HpStatus::NullPointer, "null output pointer"));
        }
        *out = lift(sc.field.intensity(&sc.k, read3(x)?))?;
        Ok(())
    })
}

/// # Safety
/// `scene` must be NULL or a handle from [`hp_scene_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hp_scene_free(scene: *mut HpScene) {
    if !scene.is_null() {
        drop(Box::from_raw(scene));
    }
}

/// Offset τ maximizing `|D|` for direction `dir`.
///
/// # Safety
/// `k`, `dir` must point to three doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hp_choose_tau(k: *const f64, dir: *const f64, out: *mut f64) -> HpStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(HpStatus::NullPointer, "null output pointer"));
        }
        let k = lift(WaveVector::new(read3(k)?))?;
        let d = lift(Direction::new(read3(dir)?))?;
        *out = lift(choose_tau(&k, d))?;
        Ok(())
    })
}

unsafe fn recover_into(
    measure: &dyn Intensity,
    k: WaveVector,
    x0: *const f64,
    dir: *const f64,
    plan: *const HpPlan,
    out: *mut *mut HpReport,
) -> Result<(), HpStatus> {
    if out.is_null() {
        return Err(fail(HpStatus::NullPointer, "null output handle"));
    }
    let ray = lift(Ray::new(read3(x0)?, lift(Direction::new(read3(dir)?))?))?;
    let plan = read_plan(plan)?;
    let report = lift(recover_expansion(measure, &ray, &k, &plan))?;
    *out = Box::into_raw(Box::new(HpReport { k, report }));
    Ok(())
}

/// Recovers coefficients from the scene's synthetic intensities along the
/// ray `x0 + s·dir`.
///
/// # Safety
/// `scene` must be live; `x0`, `dir` point to three doubles; `plan` valid
/// with `s_grid` readable for `s_len` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hp_recover_scene(
    scene: *const HpScene,
    x0: *const f64,
    dir: *const f64,
    plan: *const HpPlan,
    out: *mut *mut HpReport,
) -> HpStatus {
    guard(|| {
        let sc = scene.as_ref().ok_or_else(|| fail(HpStatus::NullPointer, "null scene"))?;
        let holo = lift(Hologram::new(sc.field.clone(), sc.k))?;
        recover_into(&holo, sc.k, x0, dir, plan, out)
    })
}

/// Intensity callback: writes `|ψ(x)|²` to `out` and returns 0 on success.
pub type HpIntensityFn = Option<unsafe extern "C" fn(ctx: *mut c_void, x: *const f64, out: *mut f64) -> i32>;

struct Callback {
    f: unsafe extern "C" fn(*mut c_void, *const f64, *mut f64) -> i32,
    ctx: *mut c_void,
}

impl Intensity for Callback {
    fn intensity(&self, x: Vec3) -> holophase::Result<f64> {
        let mut v = f64::NAN;
        let code = unsafe { (self.f)(self.ctx, x.as_ptr(), &mut v) };
        if code != 0 {
            return Err(Error::Measurement(format!("callback returned {code} at {x:?}")));
        }
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::Measurement(format!("callback intensity {v} at {x:?} is invalid")));
        }
        Ok(v)
    }
}

/// Recovers coefficients from intensities supplied by `measure`.
///
/// # Safety
/// `measure` must be callable with `ctx` for the duration of the call;
/// vector, plan and output pointers as in [`hp_recover_scene`].
#[no_mangle]
pub unsafe extern "C" fn hp_recover_callback(
    measure: HpIntensityFn,
    ctx: *mut c_void,
    k: *const f64,
    x0: *const f64,
    dir: *const f64,
    plan: *const HpPlan,
    out: *mut *mut HpReport,
) -> HpStatus {
    guard(|| {
        let f = measure.ok_or_else(|| fail(HpStatus::NullPointer, "null intensity callback"))?;
        let k = lift(WaveVector::new(read3(k)?))?;
        recover_into(&Callback { f, ctx }, k, x0, dir, plan, out)
    })
}

/// Number of recovered coefficients (0 for NULL).
///
/// # Safety
/// `report` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn hp_report_len(report: *const HpReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.coeffs().len())
}

/// Whether the amplification policy stopped recovery early.
///
/// # Safety
/// `report` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn hp_report_truncated(report: *const HpReport) -> bool {
    report.as_ref().is_some_and(|r| r.report.truncated)
}

/// Plane-wave-gauged coefficient `f_{index+1}''`.
///
/// # Safety
/// `report` must be live; `re`, `im` writable.
#[no_mangle]
pub unsafe extern "C" fn hp_report_coefficient(
    report: *const HpReport,
    index: usize,
    re: *mut f64,
    im: *mut f64,
) -> HpStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| fail(HpStatus::NullPointer, "null report"))?;
        let c = r.report.coeffs().get(index).copied().ok_or_else(|| {
            fail(
                HpStatus::IndexOutOfRange,
                format!("coefficient index {index} out of range 0..{}", r.report.coeffs().len()),
            )
        })?;
        write_complex(c, re, im)
    })
}

/// Reconstructed `ψ₁` at ray parameter `s` from the ray start.
///
/// # Safety
/// `report` must be live; `re`, `im` writable.
#[no_mangle]
pub unsafe extern "C" fn hp_report_reconstruct(report: *const HpReport, s: f64, re: *mut f64, im: *mut f64) -> HpStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| fail(HpStatus::NullPointer, "null report"))?;
        let v = lift(reconstruct_on_ray(&r.report, &r.k, s))?;
        write_complex(v, re, im)
    })
}

/// # Safety
/// `report` must be NULL or a handle from a `hp_recover_*` call not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hp_report_free(report: *mut HpReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
