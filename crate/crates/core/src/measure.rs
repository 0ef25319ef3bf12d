//! The intensity-only measurement seam.
//!
//! Recovery code reads the total field exclusively through [`Intensity`]: a
//! point in R³ goes in, a nonnegative real comes out. Synthetic holograms,
//! noisy wrappers and foreign callbacks all plug in here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::Vec3;

pub trait Intensity {
    /// Measured `|ψ₀ + ψ₁|²` at the physical point `x`.
    fn intensity(&self, x: Vec3) -> Result<f64>;
}

impl<T: Intensity + ?Sized> Intensity for &T {
    fn intensity(&self, x: Vec3) -> Result<f64> {
        (**self).intensity(x)
    }
}

impl<T: Intensity + ?Sized> Intensity for Box<T> {
    fn intensity(&self, x: Vec3) -> Result<f64> {
        (**self).intensity(x)
    }
}

/// Adapts a closure into an [`Intensity`].
pub struct FnIntensity<F>(pub F);

impl<F> Intensity for FnIntensity<F>
where
    F: Fn(Vec3) -> Result<f64>,
{
    fn intensity(&self, x: Vec3) -> Result<f64> {
        let v = (self.0)(x)?;
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::Measurement(format!(
                "intensity at {x:?} must be finite and nonnegative, got {v}"
            )));
        }
        Ok(v)
    }
}

/// Multiplicative perturbation `I·(1 + η·u)` with `u` uniform in [-1, 1].
///
/// `u` is a deterministic function of the seed and the measurement point, so
/// results do not depend on query order or thread scheduling.
#[derive(Debug, Clone)]
pub struct Noisy<M> {
    inner: M,
    amplitude: f64,
    seed: u64,
}

impl<M> Noisy<M> {
    pub fn new(inner: M, amplitude: f64, seed: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&amplitude) {
            return Err(Error::Domain(format!(
                "relative noise amplitude must lie in [0, 1), got {amplitude}"
            )));
        }
        Ok(Self {
            inner,
            amplitude,
            seed,
        })
    }

    fn draw(&self, x: Vec3) -> f64 {
        let stream = x[0].to_bits() ^ x[1].to_bits().rotate_left(21) ^ x[2].to_bits().rotate_left(42);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng.random_range(-1.0..=1.0)
    }
}

impl<M: Intensity> Intensity for Noisy<M> {
    fn intensity(&self, x: Vec3) -> Result<f64> {
        let clean = self.inner.intensity(x)?;
        Ok(clean * (1.0 + self.amplitude * self.draw(x)))
    }
}
