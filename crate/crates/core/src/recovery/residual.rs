//! Scaled intensity residuals `a(s)` and the induction residuals `b_n(s)`.
//!
//! Everything is expressed in the frame `x' = x − q` of a ray through `q`,
//! where the plane wave reads `e^{ik·q} e^{ik·x'}` and the intensity equals
//! `|e^{ik·x'} + e^{−ik·q} ψ₁|²`.

use num_complex::Complex64;

use crate::error::Result;
use crate::field::series;
use crate::geom::{add, dot, scale, Direction, Vec3, WaveVector};
use crate::measure::Intensity;

/// Round-off floor used by the amplification policy.
pub const ROUNDOFF: f64 = 2.3e-16;

/// `ã(s) = s·(I(q + s·θ) − 1)`.
pub fn scaled_residual<M: Intensity + ?Sized>(
    measure: &M,
    q: Vec3,
    dir: Direction,
    s: f64,
) -> Result<f64> {
    let x = add(q, scale(dir.as_vec(), s));
    Ok(s * (measure.intensity(x)? - 1.0))
}

/// `ψ_{1,n}` at radius `s`: the truncated series built from `prefix`, with
/// no plane-wave gauge factor.
pub fn partial_field(prefix: &[Complex64], k: &WaveVector, s: f64) -> Complex64 {
    series(prefix, k.kappa(), s)
}

/// `a_n(s) = s·(|e^{ik·x'} + ψ_{1,n}(x')|² − 1)`, expanded so that no
/// cancellation against the unit plane-wave intensity occurs.
pub fn model_residual(prefix: &[Complex64], k: &WaveVector, dir: Direction, s: f64) -> f64 {
    let p = partial_field(prefix, k, s);
    let plane = Complex64::from_polar(1.0, s * dot(k.k(), dir.as_vec()));
    s * (2.0 * (plane.conj() * p).re + p.norm_sqr())
}

/// `b_n(s) = s^n·(ã(s) − a_n(s))` with `n = prefix.len()`.
pub fn residual_b<M: Intensity + ?Sized>(
    measure: &M,
    prefix: &[Complex64],
    k: &WaveVector,
    q: Vec3,
    dir: Direction,
    s: f64,
) -> Result<f64> {
    let a = scaled_residual(measure, q, dir, s)?;
    let a_n = model_residual(prefix, k, dir, s);
    Ok(s.powi(prefix.len() as i32) * (a - a_n))
}

/// Expected round-off in `b_n` sampled up to radius `s`: `s^{n+1}·ε`.
pub fn amplification_estimate(s: f64, n: usize) -> f64 {
    s.powi(n as i32 + 1) * ROUNDOFF
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::FnIntensity;

    #[test]
    fn zero_field() {
        let one = FnIntensity(|_x: Vec3| Ok(1.0));
        let k = WaveVector::new([0.0, 0.0, 1.0]).unwrap();
        let dir = Direction::new([1.0, 0.0, 0.0]).unwrap();
        for s in [1.0, 1e3, 1e6] {
            assert_eq!(scaled_residual(&one, [0.0; 3], dir, s).unwrap(), 0.0);
            assert_eq!(residual_b(&one, &[], &k, [0.0; 3], dir, s).unwrap(), 0.0);
        }
    }

    #[test]
    fn model_residual_matches_direct_modulus() {
        let k = WaveVector::new([0.2, 0.1, -0.9]).unwrap();
        let dir = Direction::new([0.5, -0.5, 0.1]).unwrap();
        let prefix = [Complex64::new(0.3, -0.2), Complex64::new(-1.0, 0.4)];
        for s in [3.0, 17.0, 250.0] {
            let p = partial_field(&prefix, &k, s);
            let plane = Complex64::from_polar(1.0, s * dot(k.k(), dir.as_vec()));
            let direct = s * ((plane + p).norm_sqr() - 1.0);
            let got = model_residual(&prefix, &k, dir, s);
            assert!((got - direct).abs() <= 1e-13 * (1.0 + s));
        }
    }

    #[test]
    fn empty_prefix_is_zero_model() {
        let k = WaveVector::new([0.0, 1.0, 0.0]).unwrap();
        let dir = Direction::new([1.0, 0.0, 0.0]).unwrap();
        assert_eq!(partial_field(&[], &k, 5.0), Complex64::new(0.0, 0.0));
        assert_eq!(model_residual(&[], &k, dir, 5.0), 0.0);
    }

    #[test]
    fn two_term_prefix_bound() {
        let k = WaveVector::new([0.0, 0.0, 1.0]).unwrap();
        let f = [Complex64::new(0.1, -0.3), Complex64::new(2.0, 1.0)];
        for s in [10.0, 100.0, 1e4] {
            let lead = Complex64::from_polar(1.0 / s, s) * f[0];
            assert!((partial_field(&f, &k, s) - lead).norm() <= f[1].norm() / (s * s) * (1.0 + 1e-12));
        }
    }
}
