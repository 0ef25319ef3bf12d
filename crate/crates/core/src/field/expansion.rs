use num_complex::Complex64;

use super::multipole::RadiatingField;
use super::special::{hankel_poly_coeff, i_pow, neg_i_pow, sph_harmonic};
use crate::error::{Error, Result};
use crate::geom::{dot, Direction, Vec3, WaveVector};

/// Phase convention of stored far-field coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// `f_j'`: expansion of `ψ₁(q + s·θ)` itself.
    Raw,
    /// `f_j'' = e^{-ik·q} f_j'`: expansion of `e^{-ik·q} ψ₁(q + s·θ)`.
    PlaneWave,
}

/// Truncated expansion
/// `ψ₁(q + sθ) ≈ (e^{iκs}/s) Σ_{j=1}^{J} f_j / s^{j−1}` along one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldExpansion {
    pub frame_origin: Vec3,
    pub dir: Direction,
    /// `coeffs[j - 1]` holds `f_j`. Empty means the zero field.
    pub coeffs: Vec<Complex64>,
    pub gauge: Gauge,
}

impl FarFieldExpansion {
    /// Converts to the plane-wave gauge `f_j'' = e^{-ik·q} f_j'`.
    pub fn gauged(&self, k: &WaveVector) -> Self {
        match self.gauge {
            Gauge::PlaneWave => self.clone(),
            Gauge::Raw => {
                let phase = Complex64::from_polar(1.0, -dot(k.k(), self.frame_origin));
                Self {
                    coeffs: self.coeffs.iter().map(|&f| f * phase).collect(),
                    gauge: Gauge::PlaneWave,
                    ..self.clone()
                }
            }
        }
    }

    /// Physical `ψ₁` value at `frame_origin + s·dir`.
    pub fn eval(&self, k: &WaveVector, s: f64) -> Result<Complex64> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::Domain(format!("expansion radius must be positive, got {s}")));
        }
        let v = series(&self.coeffs, k.kappa(), s);
        Ok(match self.gauge {
            Gauge::Raw => v,
            Gauge::PlaneWave => v * Complex64::from_polar(1.0, dot(k.k(), self.frame_origin)),
        })
    }
}

/// `(e^{iκs}/s) Σ_j coeffs[j-1] / s^{j−1}`, summed by Horner in `1/s`.
pub(crate) fn series(coeffs: &[Complex64], kappa: f64, s: f64) -> Complex64 {
    let inv = 1.0 / s;
    let poly = coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &f| acc * inv + f);
    poly * Complex64::from_polar(inv, kappa * s)
}

/// Closed-form far-field coefficients `f_1..f_J` of a multipole field in its
/// own centered frame.
///
/// Each mode contributes
/// `f_{j+1} += c_lm Y_lm(θ) (−i)^{l+1} (l+j)!/(j!(l−j)!) (i/2)^j / κ^{j+1}`
/// for `j <= l`, so `f_j` vanishes for `j > L + 1`.
pub fn aw_coefficients(field: &RadiatingField, dir: Direction, terms: usize) -> Result<FarFieldExpansion> {
    if terms < 1 {
        return Err(Error::Domain("number of expansion terms must be at least 1".into()));
    }
    let kappa = field.kappa();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); terms];
    for (l, m, c) in field.spectrum().iter() {
        let angular = c * sph_harmonic(l, m, dir)? * neg_i_pow(l + 1);
        for (j, slot) in coeffs.iter_mut().enumerate().take(l + 1) {
            let radial = hankel_poly_coeff(l, j) * 0.5f64.powi(j as i32) / kappa.powi(j as i32 + 1);
            *slot += angular * i_pow(j) * radial;
        }
    }
    Ok(FarFieldExpansion {
        frame_origin: field.center(),
        dir,
        coeffs,
        gauge: Gauge::Raw,
    })
}

/// Evaluates a truncated expansion; see [`FarFieldExpansion::eval`].
pub fn eval_aw(expansion: &FarFieldExpansion, k: &WaveVector, s: f64) -> Result<Complex64> {
    expansion.eval(k, s)
}
