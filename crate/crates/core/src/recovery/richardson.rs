//! Extrapolation of raw coefficient estimates `F̂(s) = F + c₁/s + c₂/s² + …`
//! to `s → ∞`.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Refined {
    pub value: Complex64,
    pub warning: Option<String>,
}

/// Eliminates the `1/s` term using the two largest radii and, given three or
/// more, the `1/s²` term as well (Neville's scheme in `h = 1/s` evaluated at
/// `h = 0` over the three largest radii).
pub fn richardson_refine(estimates: &[(f64, Complex64)]) -> Result<Refined> {
    let mut pts: Vec<(f64, Complex64)> = estimates.to_vec();
    if pts.iter().any(|&(s, _)| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::InvalidPlan("extrapolation radii must be positive".into()));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InvalidPlan("extrapolation radii must be distinct".into()));
    }
    match pts.len() {
        0 => Err(Error::InvalidPlan("no estimates to extrapolate".into())),
        1 => Ok(Refined {
            value: pts[0].1,
            warning: Some("single radius: estimate returned without extrapolation".into()),
        }),
        n => {
            let tail = &pts[n.saturating_sub(3)..];
            let h: Vec<f64> = tail.iter().map(|&(s, _)| 1.0 / s).collect();
            let mut p: Vec<Complex64> = tail.iter().map(|&(_, f)| f).collect();
            // Neville tableau at h = 0
            for m in 1..p.len() {
                for i in 0..p.len() - m {
                    let (hi, hm) = (h[i], h[i + m]);
                    p[i] = (p[i + 1] * hi - p[i] * hm) / (hi - hm);
                }
            }
            Ok(Refined {
                value: p[0],
                warning: None,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eliminates_first_order_term() {
        let f = Complex64::new(0.3, -1.2);
        let c = Complex64::new(5.0, 2.0);
        let est: Vec<_> = [100.0, 250.0].iter().map(|&s| (s, f + c / s)).collect();
        let r = richardson_refine(&est).unwrap();
        assert!((r.value - f).norm() < 1e-14);
        assert!(r.warning.is_none());
    }

    #[test]
    fn two_point_formula() {
        let est = [(2.0, Complex64::new(1.0, 0.0)), (5.0, Complex64::new(3.0, 1.0))];
        let want = (est[1].1 * 5.0 - est[0].1 * 2.0) / 3.0;
        assert!((richardson_refine(&est).unwrap().value - want).norm() < 1e-15);
    }

    #[test]
    fn eliminates_second_order_with_three() {
        let f = Complex64::new(-0.5, 0.25);
        let est: Vec<_> = [1e3, 2e3, 4e3, 10.0]
            .iter()
            .map(|&s| (s, f + Complex64::new(3.0, 1.0) / s + Complex64::new(-40.0, 7.0) / (s * s)))
            .collect();
        assert!((richardson_refine(&est).unwrap().value - f).norm() < 1e-13);
    }

    #[test]
    fn constant_and_degenerate_inputs() {
        let c = Complex64::new(2.0, -3.0);
        let est: Vec<_> = [1.0, 2.0, 3.0].iter().map(|&s| (s, c)).collect();
        assert!((richardson_refine(&est).unwrap().value - c).norm() < 1e-14);
        let one = richardson_refine(&[(5.0, c)]).unwrap();
        assert_eq!(one.value, c);
        assert!(one.warning.is_some());
        assert!(richardson_refine(&[(5.0, c), (5.0, c)]).is_err());
        assert!(richardson_refine(&[]).is_err());
    }
}
