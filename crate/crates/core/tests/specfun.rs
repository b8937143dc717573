use parakepler::geometry::SpaceTag;
use parakepler::specfun::*;
use parakepler::{energy, Error, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

fn pochhammer(x: C64, n: usize) -> C64 {
    (0..n).fold(c(1.0, 0.0), |acc, j| acc * (x + j as f64))
}

fn legendre(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return p0;
    }
    for j in 1..n {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

#[test]
fn elementary_closed_forms() {
    for t in [c(0.3, 0.0), c(-0.5, 0.2), c(0.1, -0.8), c(-0.9, 0.0)] {
        // F(a, b, b; t) = (1 − t)^{−a}
        let a = c(0.7, 0.3);
        let f = hyp2f1(&Hyp2F1Params::new(a, c(2.5, 0.0), c(2.5, 0.0)), t).unwrap();
        assert!(close(f, (-a * (c(1.0, 0.0) - t).ln()).exp(), 1e-13), "{t}");
        // F(1, 1, 2; t) = −ln(1 − t)/t
        let f = hyp2f1(&Hyp2F1Params::real(1.0, 1.0, 2.0), t).unwrap();
        assert!(close(f, -(c(1.0, 0.0) - t).ln() / t, 1e-12), "{t}");
    }
    // F(½, 1, 3/2; −x²) = atan(x)/x
    for x in [0.2f64, 0.5, 0.9] {
        let f = hyp2f1(&Hyp2F1Params::real(0.5, 1.0, 1.5), c(-x * x, 0.0)).unwrap();
        assert!(close(f, c(x.atan() / x, 0.0), 1e-13));
    }
}

#[test]
fn legendre_polynomials() {
    for n in 0..12usize {
        let p = Hyp2F1Params::real(-(n as f64), n as f64 + 1.0, 1.0);
        assert_eq!(p.polynomial_degree(), Some(n));
        for x in [-3.0, -0.7, 0.0, 0.4, 1.0, 5.0] {
            let t = c((1.0 - x) / 2.0, 0.0);
            let f = hyp2f1(&p, t).unwrap();
            // the monomial sum cancels near the zeros; scale by Σ|c_j t^j|
            let cond: f64 = p.polynomial_coefficients().unwrap().iter().enumerate().map(|(j, cj)| (cj * t.powi(j as i32)).norm()).sum();
            let want = legendre(n, x);
            assert!((f.re - want).abs() <= 1e-14 * cond, "n={n} x={x}");
            assert_eq!(f.im, 0.0);
        }
    }
}

#[test]
fn chu_vandermonde() {
    // F(−n, b, c; 1) = (c − b)_n / (c)_n
    let b = c(0.3, -1.2);
    let g = c(2.0, 0.0);
    for n in 0..10usize {
        let p = Hyp2F1Params::new(c(-(n as f64), 0.0), b, g);
        let f = hyp2f1(&p, c(1.0, 0.0)).unwrap();
        assert!(close(f, pochhammer(g - b, n) / pochhammer(g, n), 1e-12));
    }
}

#[test]
fn terminating_series_far_outside_the_disc() {
    let p = Hyp2F1Params::new(c(4.0, -2.5), c(-3.0, 0.0), c(2.0, 0.0));
    let t = c(-25.0, 7.0);
    let coeffs = p.polynomial_coefficients().unwrap();
    let direct: C64 = coeffs.iter().enumerate().map(|(j, cj)| cj * t.powi(j as i32)).sum();
    assert!(close(hyp2f1(&p, t).unwrap(), direct, 1e-13));
}

#[test]
fn gamma_pole_handling() {
    assert!(matches!(hyp2f1(&Hyp2F1Params::real(0.5, 1.0, -2.0), c(0.1, 0.0)), Err(Error::Parameter(_))));
    // degree 1 < 3 never reaches the γ = −3 pole
    let f = hyp2f1(&Hyp2F1Params::real(-1.0, 2.0, -3.0), c(0.5, 0.0)).unwrap();
    assert!(close(f, c(1.0 + 2.0 / 3.0 * 0.5, 0.0), 1e-15));
    assert!(matches!(hyp2f1(&Hyp2F1Params::real(-4.0, 2.0, -2.0), c(0.5, 0.0)), Err(Error::Parameter(_))));
    assert!(matches!(hyp2f1(&Hyp2F1Params::real(0.5, 0.5, 1.5), c(1.2, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn complex_pow_conventions() {
    assert_eq!(complex_pow(c(0.0, 0.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    assert_eq!(complex_pow(c(0.0, 0.0), c(1.5, -2.0)).unwrap(), c(0.0, 0.0));
    assert!(complex_pow(c(0.0, 0.0), c(-0.5, 0.0)).is_err());
    let v = complex_pow(c(-4.0, 0.0), c(0.5, 0.0)).unwrap();
    assert!(close(v, c(0.0, 2.0), 1e-15));
    assert_eq!(complex_pow(c(9.0, 0.0), c(0.5, 0.0)).unwrap(), c(3.0, 0.0));
}

#[test]
fn spectral_roots_square_to_radicand() {
    for space in SpaceTag::ALL {
        for e in [0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
            for k in 1..=6u32 {
                let eps = parakepler::kepler::energy_unchecked(space, e, k);
                for branch in [Branch::Plus, Branch::Minus] {
                    let r = spectral_root(space, e, k, branch);
                    let rad = spectral_radicand(space, e, eps, branch);
                    assert!((r * r - rad).norm() <= 1e-13 * (1.0 + rad.norm()), "{space} e={e} k={k}");
                }
            }
        }
    }
}

#[test]
fn h3_minus_branch_is_negative_for_bound_states() {
    let e = 10.0;
    for k in 1..=3u32 {
        let eps = energy(SpaceTag::H3, e, k).unwrap();
        let r = spectral_root(SpaceTag::H3, e, k, Branch::Minus);
        let (p, on_axis) = principal_spectral_root(SpaceTag::H3, e, eps, Branch::Minus);
        assert!(r.re < 0.0 && !on_axis);
        assert!((p + r).norm() < 1e-13 * (1.0 + r.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn prop_horner_matches_term_sum(n in 0usize..10, ar in -3.0f64..3.0, ai in -2.0f64..2.0,
                                    g in 0.5f64..6.0, tr in -3.0f64..3.0, ti in -3.0f64..3.0) {
        let p = Hyp2F1Params::new(c(-(n as f64), 0.0), c(ar, ai), c(g, 0.0));
        let t = c(tr, ti);
        let coeffs = p.polynomial_coefficients().unwrap();
        let mut cond = 0.0;
        let mut direct = c(0.0, 0.0);
        for (j, cj) in coeffs.iter().enumerate() {
            let term = cj * t.powi(j as i32);
            cond += term.norm();
            direct += term;
        }
        let f = hyp2f1(&p, t).unwrap();
        // a few ulp of the largest term
        prop_assert!((f - direct).norm() <= 8.0 * (n as f64 + 1.0) * f64::EPSILON * cond);
    }

    #[test]
    fn prop_derivative_matches_finite_difference(ar in -2.0f64..2.0, br in 0.2f64..2.0, g in 0.6f64..4.0,
                                                  tr in -0.5f64..0.5, ti in -0.5f64..0.5, n in 0usize..5,
                                                  poly in any::<bool>()) {
        let alpha = if poly { c(-(n as f64), 0.0) } else { c(ar, 0.3) };
        let p = Hyp2F1Params::new(alpha, c(br, -0.2), c(g, 0.0));
        let t = c(tr, ti);
        let h = 1e-4;
        let f = |z: C64| hyp2f1(&p, z).unwrap();
        let fd = (f(t + h) - f(t - h) + (f(t - 2.0 * h) - f(t + 2.0 * h)) / 8.0) / (1.5 * h);
        let d = hyp2f1_derivative(&p, t, 1).unwrap();
        prop_assert!((d - fd).norm() <= 1e-7 * (1.0 + d.norm()), "{} vs {}", d, fd);
        let d2 = hyp2f1_derivative(&p, t, 2).unwrap();
        let fd2 = (hyp2f1_derivative(&p, t + h, 1).unwrap() - hyp2f1_derivative(&p, t - h, 1).unwrap()) / (2.0 * h);
        prop_assert!((d2 - fd2).norm() <= 1e-6 * (1.0 + d2.norm()));
    }
}
