//! Outgoing spherical Hankel functions and unit-normalized complex spherical
//! harmonics.
//!
//! The Hankel function is evaluated through its terminating closed form
//!
//! ```text
//! h_l(z) = (-i)^(l+1) e^{iz}/z  Σ_{k=0}^{l} (l+k)! / (k! (l-k)!) · (i/(2z))^k
//! ```
//!
//! which stays accurate at very large arguments and hands the far-field
//! coefficients of multipole fields over directly.
//!
//! Harmonics carry the Condon–Shortley phase and satisfy ∫|Y_lm|² dΩ = 1,
//! with `Y_{l,-m} = (-1)^m conj(Y_{lm})`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::Direction;

/// Largest degree accepted by [`sph_hankel1`] and [`sph_harmonic`].
pub const MAX_DEGREE: usize = 16;

/// `(l+k)! / (k! (l-k)!)` for `k <= l`.
pub(crate) fn hankel_poly_coeff(l: usize, k: usize) -> f64 {
    debug_assert!(k <= l);
    let mut a = 1.0;
    for j in 0..k {
        a = a * ((l + j + 1) * (l - j)) as f64 / (j + 1) as f64;
    }
    a
}

/// `(-i)^n`.
pub(crate) fn neg_i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// `i^n`.
pub(crate) fn i_pow(n: usize) -> Complex64 {
    neg_i_pow(n).conj()
}

pub(crate) fn check_degree(l: usize) -> Result<()> {
    if l > MAX_DEGREE {
        Err(Error::UnsupportedDegree { l, max: MAX_DEGREE })
    } else {
        Ok(())
    }
}

/// Spherical Hankel function of the first kind `h_l^{(1)}(z)` for real `z > 0`.
pub fn sph_hankel1(l: usize, z: f64) -> Result<Complex64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!(
            "spherical Hankel argument must be positive and finite, got {z}"
        )));
    }
    check_degree(l)?;
    let w = Complex64::new(0.0, 0.5 / z);
    let mut poly = Complex64::new(hankel_poly_coeff(l, l), 0.0);
    for k in (0..l).rev() {
        poly = poly * w + hankel_poly_coeff(l, k);
    }
    let outgoing = Complex64::from_polar(1.0 / z, z);
    Ok(neg_i_pow(l + 1) * outgoing * poly)
}

/// Normalized associated Legendre value `P̄_l^m(x)` for `0 <= m <= l`, scaled
/// so that `P̄_l^m(cos θ) e^{imφ}` is the unit-normalized harmonic.
fn normalized_legendre(l: usize, m: usize, x: f64) -> f64 {
    let mut pmm = 1.0;
    if m > 0 {
        let omx2 = (1.0 - x) * (1.0 + x);
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= omx2 * fact / (fact + 1.0);
            fact += 2.0;
        }
    }
    pmm = ((2 * m + 1) as f64 * pmm / (4.0 * PI)).sqrt();
    if m % 2 == 1 {
        pmm = -pmm;
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * ((2 * m + 3) as f64).sqrt() * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut oldfact = ((2 * m + 3) as f64).sqrt();
    for ll in (m + 2)..=l {
        let (llf, mf) = (ll as f64, m as f64);
        let fact = ((4.0 * llf * llf - 1.0) / (llf * llf - mf * mf)).sqrt();
        let pll = (x * pmmp1 - pmm / oldfact) * fact;
        oldfact = fact;
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pmmp1
}

/// Unit-normalized complex spherical harmonic `Y_lm` at `dir`.
pub fn sph_harmonic(l: usize, m: i32, dir: Direction) -> Result<Complex64> {
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Err(Error::Domain(format!(
            "spherical harmonic order |m| = {am} exceeds degree l = {l}"
        )));
    }
    check_degree(l)?;
    let (cos_theta, phi) = dir.polar_azimuth();
    let p = normalized_legendre(l, am, cos_theta);
    let y = Complex64::from_polar(p, am as f64 * phi);
    if m < 0 {
        let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
        Ok(y.conj() * sign)
    } else {
        Ok(y)
    }
}
