//! The two-point extraction kernel and the choice of offset τ.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::{dot, Direction, WaveVector};

/// Directions with `1 − θ·k/κ` at or below this are treated as parallel to `k`.
pub const DIRECTION_TOL: f64 = 1e-12;
/// Kernels with `|sin(τ(k·θ − κ))| = |D|/2` at or below this are rejected.
pub const KERNEL_TOL: f64 = 1e-6;

/// Phase rate `k·θ − κ` of the interference term along the ray; nonpositive.
pub fn phase_rate(k: &WaveVector, dir: Direction) -> f64 {
    dot(k.k(), dir.as_vec()) - k.kappa()
}

/// Rejects `θ = k/|k|`, along which the interference phase is stationary.
pub fn check_direction(k: &WaveVector, dir: Direction) -> Result<()> {
    let gap = 1.0 - dot(k.unit(), dir.as_vec());
    if gap <= DIRECTION_TOL {
        return Err(Error::DegenerateDirection { gap });
    }
    Ok(())
}

/// `D = 2i·sin(τ(k·θ − κ))`.
pub fn kernel_determinant(k: &WaveVector, dir: Direction, tau: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * (tau * phase_rate(k, dir)).sin())
}

/// Whether a kernel determinant is too small to invert.
pub fn kernel_is_degenerate(d: Complex64) -> bool {
    !(0.5 * d.norm() > KERNEL_TOL)
}

/// Offset making `τ(k·θ − κ) = −π/2`, so that `D = −2i` and `|D|` is maximal.
pub fn choose_tau(k: &WaveVector, dir: Direction) -> Result<f64> {
    check_direction(k, dir)?;
    Ok(PI / (2.0 * -phase_rate(k, dir)))
}

/// Period in `s` of the interference phase `e^{i(k·θ − κ)s}`.
pub fn phase_period(k: &WaveVector, dir: Direction) -> Result<f64> {
    check_direction(k, dir)?;
    Ok(2.0 * PI / -phase_rate(k, dir))
}

/// Solves the 2×2 phase system for the leading coefficient `F` of a real
/// function `g(s) = e^{iφ(s)}F + e^{−iφ(s)}F̄ + O(1/s)`, `φ(s) = (κ − k·θ)s`,
/// sampled at `s` and `s + τ` on a ray through the frame origin:
///
/// ```text
/// F ≈ (e^{i(k·y − κ|y|)} g(s) − e^{i(k·x − κ|x|)} g(s+τ)) / D
/// ```
///
/// Exact when `g` has no remainder.
pub fn extract_leading(
    g_x: f64,
    g_y: f64,
    s: f64,
    tau: f64,
    k: &WaveVector,
    dir: Direction,
) -> Result<Complex64> {
    let d = kernel_determinant(k, dir, tau);
    if kernel_is_degenerate(d) {
        return Err(Error::DegenerateTau { d_abs: d.norm(), tau });
    }
    let rate = phase_rate(k, dir);
    let (phase_x, phase_y) = (rate * s, rate * (s + tau));
    let at_y = Complex64::from_polar(1.0, phase_y);
    let at_x = Complex64::from_polar(1.0, phase_x);
    // divide by the determinant of the phases actually applied; at large s
    // the rounded phase difference drifts from τ(k·θ − κ) by ~ε·|rate·s|
    let applied = Complex64::new(0.0, 2.0 * (phase_y - phase_x).sin());
    if kernel_is_degenerate(applied) {
        return Err(Error::DegenerateTau { d_abs: applied.norm(), tau });
    }
    Ok((at_y * g_x - at_x * g_y) / applied)
}
