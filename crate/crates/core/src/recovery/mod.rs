//! Recovery of the radiated field from intensity-only samples along rays.
//!
//! The only input channel is [`Intensity`](crate::measure::Intensity). Along
//! a ray `q + sθ` the scaled residual `a(s) = s(|ψ|² − 1)` carries the
//! leading far-field coefficient in a two-phase interference term, which the
//! two-point kernel extracts; subtracting the intensity of the partial field
//! built from the coefficients found so far and rescaling exposes the next
//! coefficient in the same form. Raw estimates over a grid of radii are then
//! extrapolated to `s → ∞`, and the whole coefficient vector is finally refit
//! to all samples jointly.
//!
//! The engine assumes the intensity can be queried at the (large) radii it
//! chooses; it does not continue data from a bounded interval analytically.

mod engine;
mod kernel;
mod plane;
mod refit;
mod residual;
mod richardson;

pub use engine::{
    reconstruct_on_ray, recover_expansion, recover_expansion_in_frame, recover_next, sampled_radii,
    LevelDiagnostics, RecoveryReport, SamplingPlan, Tau, DEFAULT_ORDER, DEFAULT_TOLERANCE,
};
pub use kernel::{
    check_direction, choose_tau, extract_leading, kernel_determinant, kernel_is_degenerate, phase_period, phase_rate,
    DIRECTION_TOL, KERNEL_TOL,
};
pub use plane::{recover_on_plane, Plane, PlaneRecovery, RayOutcome, TargetOutcome, PLANE_DIRECTION_TOL};
pub use refit::{joint_refit, Refit};
pub use residual::{
    amplification_estimate, model_residual, partial_field, residual_b, scaled_residual, ROUNDOFF,
};
pub use richardson::{richardson_refine, Refined};
