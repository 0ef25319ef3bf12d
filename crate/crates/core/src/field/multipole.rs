use std::collections::BTreeMap;

use num_complex::Complex64;

use super::special::{check_degree, sph_hankel1, sph_harmonic};
use crate::error::{Error, Result};
use crate::geom::{dot, norm, sub, Direction, Vec3, WaveVector};
use crate::measure::Intensity;

/// Default degree bound of a [`MultipoleSpectrum`].
pub const DEFAULT_DEGREE_BOUND: usize = 8;

/// Finite set of multipole amplitudes `c_lm` with `0 <= l <= L_max`, `|m| <= l`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipoleSpectrum {
    degree_bound: usize,
    entries: BTreeMap<(usize, i32), Complex64>,
}

impl Default for MultipoleSpectrum {
    fn default() -> Self {
        Self::new(DEFAULT_DEGREE_BOUND).expect("default degree bound is supported")
    }
}

impl MultipoleSpectrum {
    pub fn new(degree_bound: usize) -> Result<Self> {
        check_degree(degree_bound)?;
        Ok(Self {
            degree_bound,
            entries: BTreeMap::new(),
        })
    }

    /// Builds a spectrum from `(l, m, c_lm)` triples; repeated keys add up.
    pub fn from_entries(
        degree_bound: usize,
        entries: impl IntoIterator<Item = (usize, i32, Complex64)>,
    ) -> Result<Self> {
        let mut s = Self::new(degree_bound)?;
        for (l, m, c) in entries {
            s.insert(l, m, c)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, l: usize, m: i32, c: Complex64) -> Result<()> {
        if l > self.degree_bound {
            return Err(Error::Domain(format!(
                "mode (l={l}, m={m}) exceeds the degree bound {}",
                self.degree_bound
            )));
        }
        if m.unsigned_abs() as usize > l {
            return Err(Error::Domain(format!("mode (l={l}, m={m}) has |m| > l")));
        }
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::Domain(format!("mode (l={l}, m={m}) amplitude is not finite")));
        }
        *self.entries.entry((l, m)).or_default() += c;
        Ok(())
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Largest degree carrying an entry, `None` for the empty spectrum.
    pub fn max_degree(&self) -> Option<usize> {
        self.entries.keys().map(|&(l, _)| l).max()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i32, Complex64)> + '_ {
        self.entries.iter().map(|(&(l, m), &c)| (l, m, c))
    }
}

/// Exact outgoing multipole field
/// `ψ₁(x) = Σ c_lm h_l(κ|x−c|) Y_lm((x−c)/|x−c|)`, defined for `|x − c| >= r_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiatingField {
    spectrum: MultipoleSpectrum,
    center: Vec3,
    r_min: f64,
    kappa: f64,
}

impl RadiatingField {
    pub fn new(spectrum: MultipoleSpectrum, center: Vec3, r_min: f64, kappa: f64) -> Result<Self> {
        if !(r_min > 0.0) || !r_min.is_finite() {
            return Err(Error::Domain(format!("exclusion radius must be positive, got {r_min}")));
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::Domain(format!("wavenumber must be positive, got {kappa}")));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("source center must be finite, got {center:?}")));
        }
        Ok(Self {
            spectrum,
            center,
            r_min,
            kappa,
        })
    }

    /// The identically vanishing radiation solution.
    pub fn zero(kappa: f64) -> Result<Self> {
        Self::new(MultipoleSpectrum::default(), [0.0; 3], 1.0, kappa)
    }

    pub fn spectrum(&self) -> &MultipoleSpectrum {
        &self.spectrum
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Whether `x` lies in the modelled exterior region.
    pub fn contains(&self, x: Vec3) -> bool {
        norm(sub(x, self.center)) >= self.r_min
    }

    pub fn eval_radiated(&self, x: Vec3) -> Result<Complex64> {
        let rel = sub(x, self.center);
        let r = norm(rel);
        if !(r >= self.r_min) {
            return Err(Error::OutOfRegion {
                distance: r,
                r_min: self.r_min,
            });
        }
        if self.spectrum.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let dir = Direction::new(rel)?;
        let z = self.kappa * r;
        let mut radial = Vec::with_capacity(self.spectrum.degree_bound() + 1);
        let mut total = Complex64::new(0.0, 0.0);
        for (l, m, c) in self.spectrum.iter() {
            while radial.len() <= l {
                radial.push(sph_hankel1(radial.len(), z)?);
            }
            total += c * radial[l] * sph_harmonic(l, m, dir)?;
        }
        Ok(total)
    }

    fn check_wave_vector(&self, k: &WaveVector) -> Result<()> {
        if (k.kappa() - self.kappa).abs() > 1e-12 * self.kappa {
            return Err(Error::Domain(format!(
                "|k| = {} does not match the field wavenumber {}",
                k.kappa(),
                self.kappa
            )));
        }
        Ok(())
    }

    /// `e^{ik·x} + ψ₁(x)`.
    pub fn eval_total(&self, k: &WaveVector, x: Vec3) -> Result<Complex64> {
        self.check_wave_vector(k)?;
        let psi1 = self.eval_radiated(x)?;
        Ok(Complex64::from_polar(1.0, dot(k.k(), x)) + psi1)
    }

    /// `|e^{ik·x} + ψ₁(x)|²`.
    pub fn intensity(&self, k: &WaveVector, x: Vec3) -> Result<f64> {
        Ok(self.eval_total(k, x)?.norm_sqr())
    }
}

/// A synthetic hologram: the intensity of plane wave plus radiated field.
///
/// This is the only view of a [`RadiatingField`] handed to recovery code.
#[derive(Debug, Clone)]
pub struct Hologram {
    field: RadiatingField,
    k: WaveVector,
}

impl Hologram {
    pub fn new(field: RadiatingField, k: WaveVector) -> Result<Self> {
        field.check_wave_vector(&k)?;
        Ok(Self { field, k })
    }
}

impl Intensity for Hologram {
    fn intensity(&self, x: Vec3) -> Result<f64> {
        self.field.intensity(&self.k, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn monopole() -> RadiatingField {
        let s = MultipoleSpectrum::from_entries(8, [(0, 0, Complex64::new(1.0, 0.0))]).unwrap();
        RadiatingField::new(s, [0.0; 3], 1.0, 1.0).unwrap()
    }

    #[test]
    fn zero_spectrum_vanishes() {
        let f = RadiatingField::zero(1.0).unwrap();
        assert_eq!(f.eval_radiated([3.0, 1.0, -2.0]).unwrap(), Complex64::new(0.0, 0.0));
        let k = WaveVector::new([0.0, 0.0, 1.0]).unwrap();
        let t = f.eval_total(&k, [1.0, 2.0, 0.0]).unwrap();
        assert_eq!(t, Complex64::new(1.0, 0.0));
        assert!((f.intensity(&k, [0.3, 2.0, 7.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn monopole_at_pi() {
        let f = monopole();
        let v = f.eval_radiated([PI, 0.0, 0.0]).unwrap();
        let want = Complex64::new(0.0, 1.0 / PI * 0.5 / PI.sqrt());
        assert!((v - want).norm() < 1e-16);
        assert!((v.im - 0.0897936).abs() < 1e-7);
        let k = WaveVector::new([0.0, 0.0, 1.0]).unwrap();
        let t = f.eval_total(&k, [PI, 0.0, 0.0]).unwrap();
        assert!((t - Complex64::new(1.0, want.im)).norm() < 1e-15);
        let i = f.intensity(&k, [PI, 0.0, 0.0]).unwrap();
        assert!((i - 1.008063).abs() < 1e-6);
    }

    #[test]
    fn translation() {
        let s = MultipoleSpectrum::from_entries(
            8,
            [(1, -1, Complex64::new(0.3, 0.2)), (2, 1, Complex64::new(-1.0, 0.5))],
        )
        .unwrap();
        let q = [1.5, -2.0, 0.25];
        let shifted = RadiatingField::new(s.clone(), q, 1.0, 1.3).unwrap();
        let centered = RadiatingField::new(s, [0.0; 3], 1.0, 1.3).unwrap();
        let x = [4.0, 3.0, -5.0];
        let a = shifted.eval_radiated(x).unwrap();
        let b = centered.eval_radiated(sub(x, q)).unwrap();
        assert!((a - b).norm() <= 1e-15 * a.norm());
    }

    #[test]
    fn exclusion_ball_rejected() {
        let f = monopole();
        assert!(matches!(
            f.eval_radiated([0.5, 0.0, 0.0]),
            Err(Error::OutOfRegion { .. })
        ));
        assert!(f.eval_radiated([0.0; 3]).is_err());
    }

    #[test]
    fn invalid_spectra() {
        let mut s = MultipoleSpectrum::new(3).unwrap();
        assert!(s.insert(2, 3, Complex64::new(1.0, 0.0)).is_err());
        assert!(s.insert(4, 0, Complex64::new(1.0, 0.0)).is_err());
        assert!(RadiatingField::new(s.clone(), [0.0; 3], 0.0, 1.0).is_err());
        assert!(RadiatingField::new(s, [0.0; 3], 1.0, -1.0).is_err());
    }

    #[test]
    fn mismatched_wave_vector() {
        let f = monopole();
        let k = WaveVector::new([0.0, 0.0, 2.0]).unwrap();
        assert!(f.eval_total(&k, [3.0, 0.0, 0.0]).is_err());
        assert!(Hologram::new(f, k).is_err());
    }
}
