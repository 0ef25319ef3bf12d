//! Exact synthetic fields: plane waves, outgoing multipole radiation
//! solutions, their intensities, and closed-form far-field coefficients.

mod expansion;
mod multipole;
pub mod special;

pub use expansion::{aw_coefficients, eval_aw, FarFieldExpansion, Gauge};
pub use multipole::{Hologram, MultipoleSpectrum, RadiatingField, DEFAULT_DEGREE_BOUND};
pub use special::{sph_hankel1, sph_harmonic, MAX_DEGREE};

pub(crate) use expansion::series;
