//! Phase recovery for radiated scalar waves from intensity-only data.
//!
//! A plane wave `e^{ik·x}` interferes with an outgoing radiation solution
//! `ψ₁` of the Helmholtz equation. Given only `|e^{ik·x} + ψ₁(x)|²` along a
//! ray whose direction differs from `k/|k|`, the far-field coefficients of
//! `ψ₁` along that ray are recovered one after another and `ψ₁` itself is
//! rebuilt from them.
//!
//! - [`field`]: exact synthetic multipole fields, their intensities and
//!   closed-form far-field coefficients.
//! - [`recovery`]: the extraction kernel, the induction over coefficients,
//!   the frame shift to arbitrary rays, and plane-wide recovery.
//! - [`cli`]: configuration-driven experiments and report writing.

pub mod cli;
pub mod error;
pub mod field;
pub mod geom;
pub mod measure;
pub mod recovery;

pub use error::{Error, Result};
pub use geom::{Direction, Ray, Vec3, WaveVector};
pub use measure::Intensity;
