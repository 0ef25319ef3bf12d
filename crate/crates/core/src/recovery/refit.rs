//! Joint refit of all recovered coefficients against the sampled intensities.
//!
//! The induction fixes `f_j` before `f_{j+1}` is seen, so the extrapolation
//! error left in `f_j` reappears in level `n` multiplied by `s^{n−j}`. The
//! refit instead treats the coefficients as one unknown vector and fits the
//! truncated model `a_m(s; f)` to every sample at once, starting from the
//! induction values. `m` is as large as the samples determine, so the
//! coefficients beyond the requested ones absorb the tail of the series
//! instead of biasing the leading ones.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::residual::model_residual;
use crate::geom::{Direction, WaveVector};

const MAX_ITER: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Refit {
    pub coeffs: Vec<Complex64>,
    /// RMS of `ã − a_m` over the samples at the start and at the end.
    pub rms_start: f64,
    pub rms_end: f64,
    pub iterations: usize,
}

fn rms(coeffs: &[Complex64], samples: &[(f64, f64)], k: &WaveVector, dir: Direction) -> f64 {
    let sum: f64 = samples
        .iter()
        .map(|&(s, a)| (a - model_residual(coeffs, k, dir, s)).powi(2))
        .sum();
    (sum / samples.len() as f64).sqrt()
}

/// Gauss–Newton on `Σ (ã(s_i) − a_m(s_i; f))²` over `f_1..f_m`, with
/// `m = ⌊samples/2⌋` and `f_j` beyond `start` initialised to zero.
///
/// `samples` holds `(s, ã(s))` pairs. Returns `None` when there are fewer
/// real samples than real unknowns in `start`. The fitted residual never
/// exceeds that of the start point; only the first `start.len()`
/// coefficients are returned.
pub fn joint_refit(start: &[Complex64], samples: &[(f64, f64)], k: &WaveVector, dir: Direction) -> Option<Refit> {
    let keep = start.len();
    if keep == 0 || samples.len() < 2 * keep {
        return None;
    }
    let n = samples.len() / 2;
    let s0 = samples.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    // f_j enters a_m with weight s^{1−j}; step sizes follow
    let steps: Vec<f64> = (0..n).map(|j| s0.powi(j as i32)).collect();

    let mut coeffs = start.to_vec();
    coeffs.resize(n, Complex64::new(0.0, 0.0));
    let rms_start = rms(&coeffs, samples, k, dir);
    let mut current = rms_start;
    let mut iterations = 0;
    for _ in 0..MAX_ITER {
        let r = DVector::from_iterator(
            samples.len(),
            samples.iter().map(|&(s, a)| a - model_residual(&coeffs, k, dir, s)),
        );
        let mut jac = DMatrix::zeros(samples.len(), 2 * n);
        for j in 0..n {
            for (part, unit) in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)].into_iter().enumerate() {
                let h = unit * steps[j];
                let (mut up, mut down) = (coeffs.clone(), coeffs.clone());
                up[j] += h;
                down[j] -= h;
                // exact: the model is quadratic in f
                for (i, &(s, _)) in samples.iter().enumerate() {
                    jac[(i, 2 * j + part)] = 0.5 * (model_residual(&up, k, dir, s) - model_residual(&down, k, dir, s));
                }
            }
        }
        let svd = jac.svd(true, true);
        let cutoff = 1e-13 * svd.singular_values.max();
        let Ok(step) = svd.solve(&r, cutoff) else { break };
        let trial: Vec<Complex64> = (0..n)
            .map(|j| coeffs[j] + Complex64::new(step[2 * j], step[2 * j + 1]) * steps[j])
            .collect();
        let next = rms(&trial, samples, k, dir);
        if !(next < current) {
            break;
        }
        coeffs = trial;
        current = next;
        iterations += 1;
    }
    coeffs.truncate(keep);
    Some(Refit {
        coeffs,
        rms_start,
        rms_end: current,
        iterations,
    })
}
