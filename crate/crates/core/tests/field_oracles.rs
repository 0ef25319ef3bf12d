//! Field-core checks against values frozen from an arbitrary-precision
//! Bessel/harmonic implementation, plus structural identities.

use holophase::field::*;
use holophase::{Direction, Error, WaveVector};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

// (l, z, re h_l(z), im h_l(z))
const HANKEL: &[(usize, f64, f64, f64)] = &[
    (0, 0.5, 0.958851077208406, -1.7551651237807454),
    (1, 1.0, 0.30116867893975679, -1.3817732906760362),
    (2, 3.7, 0.29766960887405134, -0.062878964225218373),
    (3, 0.9, 0.0066361207712632, -24.854432313850216),
    (5, 12.25, -0.051935964755505244, -0.068845331796071642),
    (8, 2.0, 6.6832043238470203e-6, -4530.1158146337609),
    (12, 40.0, -0.023141111049475956, 0.011060907392226071),
    (16, 17.0, 0.062422150314618647, -0.075336001076919736),
];

// (l, m, direction, re Y, im Y)
const HARMONICS: &[(usize, i32, [f64; 3], f64, f64)] = &[
    (0, 0, [1.0, 2.0, 3.0], 0.28209479177387814, 0.0),
    (1, 0, [0.3, -0.4, 0.5], 0.34549414947133548, 0.0),
    (1, 1, [1.0, 1.0, 0.2], -0.24189428832645371, -0.24189428832645371),
    (1, -1, [1.0, 1.0, 0.2], 0.24189428832645371, -0.24189428832645371),
    (2, -2, [0.1, 0.7, -0.3], -0.31425697791717118, -0.091658285225841605),
    (3, 2, [-1.0, 0.5, 2.0], 0.12743743686805508, -0.16991658249074011),
    (5, -3, [0.2, -0.9, 0.1], 0.18564272887979009, 0.24118019797981096),
    (8, 7, [1.0, -2.0, 0.5], -0.039351348256800805, 0.37723016604795255),
    (16, 5, [0.3, 0.2, -0.6], 0.0063353976699010386, -0.0012946708806162912),
];

fn mixed_spectrum() -> MultipoleSpectrum {
    MultipoleSpectrum::from_entries(
        8,
        [
            (0, 0, c(0.3, -0.5)),
            (1, -1, c(-0.7, 0.2)),
            (1, 1, c(0.1, 0.9)),
            (2, 0, c(0.5, 0.5)),
            (2, 2, c(-0.4, 0.1)),
            (3, -2, c(0.8, -0.3)),
            (3, 1, c(-0.2, -0.6)),
        ],
    )
    .unwrap()
}

fn mixed_field() -> RadiatingField {
    RadiatingField::new(mixed_spectrum(), [0.0; 3], 1.0, 1.7).unwrap()
}

#[test]
fn hankel_matches_reference() {
    for &(l, z, re, im) in HANKEL {
        let h = sph_hankel1(l, z).unwrap();
        assert!(rel(h, c(re, im)) < 1e-12, "h_{l}({z}) = {h}");
    }
}

#[test]
fn hankel_wronskian() {
    // j_l y_{l-1} - j_{l-1} y_l = 1/z^2
    for l in 1..=MAX_DEGREE {
        for &z in &[0.7, 2.5, 9.0, 31.0] {
            let a = sph_hankel1(l, z).unwrap();
            let b = sph_hankel1(l - 1, z).unwrap();
            let w = a.re * b.im - b.re * a.im;
            let scale = a.norm() * b.norm();
            assert!((w - 1.0 / (z * z)).abs() <= 1e-12 * scale.max(1.0 / (z * z)), "l={l} z={z} w={w}");
        }
    }
}

#[test]
fn hankel_recurrence() {
    // h_{l+1} + h_{l-1} = (2l+1)/z h_l
    for l in 1..MAX_DEGREE {
        for &z in &[1.3, 6.0, 50.0] {
            let lhs = sph_hankel1(l + 1, z).unwrap() + sph_hankel1(l - 1, z).unwrap();
            let rhs = sph_hankel1(l, z).unwrap() * ((2 * l + 1) as f64 / z);
            assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm().max(rhs.norm()), "l={l} z={z}");
        }
    }
}

#[test]
fn hankel_rejects_bad_input() {
    assert!(matches!(sph_hankel1(MAX_DEGREE + 1, 1.0), Err(Error::UnsupportedDegree { .. })));
    assert!(matches!(sph_hankel1(0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(sph_hankel1(0, -1.0), Err(Error::Domain(_))));
    assert!(matches!(sph_hankel1(0, f64::NAN), Err(Error::Domain(_))));
}

#[test]
fn harmonics_match_reference() {
    for &(l, m, v, re, im) in HARMONICS {
        let y = sph_harmonic(l, m, Direction::new(v).unwrap()).unwrap();
        assert!((y - c(re, im)).norm() < 1e-13, "Y_{l}^{m}({v:?}) = {y}");
    }
}

fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

#[test]
fn harmonics_orthonormal_under_quadrature() {
    let nodes = gauss_legendre(24);
    let nphi = 40;
    let modes: Vec<(usize, i32)> = (0..=5usize)
        .flat_map(|l| (-(l as i32)..=l as i32).map(move |m| (l, m)))
        .collect();
    let mut samples = Vec::new();
    for &(x, w) in &nodes {
        let st = (1.0 - x * x).sqrt();
        for j in 0..nphi {
            let phi = 2.0 * PI * j as f64 / nphi as f64;
            let d = Direction::new([st * phi.cos(), st * phi.sin(), x]).unwrap();
            let ys: Vec<Complex64> = modes.iter().map(|&(l, m)| sph_harmonic(l, m, d).unwrap()).collect();
            samples.push((w * 2.0 * PI / nphi as f64, ys));
        }
    }
    for a in 0..modes.len() {
        for b in 0..modes.len() {
            let ip: Complex64 = samples.iter().map(|(w, ys)| ys[a] * ys[b].conj() * *w).sum();
            let expect = if a == b { 1.0 } else { 0.0 };
            assert!((ip - expect).norm() < 1e-12, "<{:?},{:?}> = {ip}", modes[a], modes[b]);
        }
    }
}

#[test]
fn field_matches_reference() {
    let f = mixed_field();
    let cases = [
        ([2.0, 0.5, -1.0], c(-0.021952986051225333, 0.055869747810571782)),
        ([10.0, -3.0, 4.0], c(0.021819689110096552, 0.0082709157341696631)),
        ([0.0, 0.0, 7.5], c(-0.042629676233596642, 0.0041071028355588839)),
    ];
    for (x, expect) in cases {
        let v = f.eval_radiated(x).unwrap();
        assert!(rel(v, expect) < 1e-12, "{x:?}: {v} vs {expect}");
    }
}

#[test]
fn far_field_coefficients_match_reference_fit() {
    let f = mixed_field();
    let dir = Direction::new([0.48, -0.6, 0.64]).unwrap();
    let exp = aw_coefficients(&f, dir, 6).unwrap();
    let expect = [
        c(0.17601737503420681, 0.36348034117831933),
        c(-0.96120641309642626, 0.41467090418290818),
        c(-0.53624724436982983, -1.2194098550248684),
        c(0.68915562391904548, -0.35856844197835345),
    ];
    for (j, e) in expect.iter().enumerate() {
        assert!(rel(exp.coeffs[j], *e) < 1e-12, "f_{} = {} vs {e}", j + 1, exp.coeffs[j]);
    }
    // a degree-3 source has exactly four nonzero coefficients
    assert_eq!(exp.coeffs[4], Complex64::new(0.0, 0.0));
    assert_eq!(exp.coeffs[5], Complex64::new(0.0, 0.0));
}

#[test]
fn radiation_condition() {
    // r psi_1 e^{-i kappa r} -> f_1, with error ~ |f_2| / r
    let f = mixed_field();
    let dir = Direction::new([-0.2, 0.9, 0.1]).unwrap();
    let f1 = aw_coefficients(&f, dir, 1).unwrap().coeffs[0];
    let mut last = f64::INFINITY;
    for r in [1e1, 1e2, 1e3, 1e4] {
        let x = dir.as_vec().map(|u| u * r);
        let v = f.eval_radiated(x).unwrap() * r * Complex64::new(0.0, -1.7 * r).exp();
        let err = (v - f1).norm();
        assert!(err < last / 5.0, "r={r} err={err}");
        last = err;
    }
}

#[test]
fn zero_field_is_zero() {
    let f = RadiatingField::zero(1.0).unwrap();
    let k = WaveVector::new([0.0, 0.0, 1.0]).unwrap();
    assert_eq!(f.eval_radiated([3.0, 4.0, 5.0]).unwrap(), Complex64::new(0.0, 0.0));
    assert!((f.intensity(&k, [3.0, 4.0, 5.0]).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn interior_points_rejected() {
    let f = mixed_field();
    assert!(matches!(f.eval_radiated([0.5, 0.0, 0.0]), Err(Error::OutOfRegion { .. })));
}

fn arb_spectrum() -> impl Strategy<Value = Vec<(usize, i32, f64, f64)>> {
    prop::collection::vec(
        (0usize..=8, -8i32..=8, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(l, m, a, b)| {
            let m = m.clamp(-(l as i32), l as i32);
            (l, m, a, b)
        }),
        1..8,
    )
}

fn build(entries: &[(usize, i32, f64, f64)]) -> RadiatingField {
    let mut s = MultipoleSpectrum::new(8).unwrap();
    for &(l, m, a, b) in entries {
        s.insert(l, m, c(a, b)).unwrap();
    }
    RadiatingField::new(s, [0.0; 3], 1.0, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn harmonic_conjugate_symmetry(l in 0usize..=MAX_DEGREE, m in 0i32..=16, x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
        prop_assume!(x * x + y * y + z * z > 1e-3);
        let m = m.min(l as i32);
        let d = Direction::new([x, y, z]).unwrap();
        let pos = sph_harmonic(l, m, d).unwrap();
        let neg = sph_harmonic(l, -m, d).unwrap();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((neg - pos.conj() * sign).norm() < 1e-12);
    }

    #[test]
    fn harmonic_addition_theorem(l in 0usize..=MAX_DEGREE, x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
        prop_assume!(x * x + y * y + z * z > 1e-3);
        let d = Direction::new([x, y, z]).unwrap();
        let total: f64 = (-(l as i32)..=l as i32).map(|m| sph_harmonic(l, m, d).unwrap().norm_sqr()).sum();
        let expect = (2 * l + 1) as f64 / (4.0 * PI);
        prop_assert!((total - expect).abs() < 1e-12 * expect.max(1.0));
    }

    #[test]
    fn field_is_linear(a in arb_spectrum(), b in arb_spectrum(), alpha in -2.0f64..2.0, px in 2.0f64..30.0, py in -30.0f64..30.0, pz in -30.0f64..30.0) {
        let fa = build(&a);
        let fb = build(&b);
        let mut merged = MultipoleSpectrum::new(8).unwrap();
        for (l, m, v) in fa.spectrum().iter() {
            merged.insert(l, m, v * alpha).unwrap();
        }
        for (l, m, v) in fb.spectrum().iter() {
            merged.insert(l, m, v).unwrap();
        }
        let fm = RadiatingField::new(merged, [0.0; 3], 1.0, 1.0).unwrap();
        let x = [px, py, pz];
        let lhs = fm.eval_radiated(x).unwrap();
        let rhs = fa.eval_radiated(x).unwrap() * alpha + fb.eval_radiated(x).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn finite_expansion_is_exact(entries in arb_spectrum(), x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0, s in 2.0f64..500.0) {
        prop_assume!(x * x + y * y + z * z > 1e-3);
        let f = build(&entries);
        let dir = Direction::new([x, y, z]).unwrap();
        let l = f.spectrum().max_degree().unwrap_or(0);
        let exp = aw_coefficients(&f, dir, l + 1).unwrap();
        let k = WaveVector::new([0.0, 0.0, 1.0]).unwrap();
        let direct = f.eval_radiated(dir.as_vec().map(|u| u * s)).unwrap();
        let series = eval_aw(&exp, &k, s).unwrap();
        let scale = exp.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max) / s;
        prop_assert!((series - direct).norm() <= 1e-12 * direct.norm().max(scale));
    }
}
