use super::*;
use crate::report::{Accumulator, ResidualReport};

/// 3×3 complex matrix in (t1, t2, φ) order.
pub type Metric = [[C64; 3]; 3];

fn singular_guard(p: &ParabolicPoint) -> Result<()> {
    let one = C64::new(1.0, 0.0);
    let tiny = 1e-15;
    let scale = 1.0 + p.t1.norm().max(p.t2.norm());
    for (name, t) in [("t1", p.t1), ("t2", p.t2)] {
        if t.norm() <= tiny || (one - t).norm() <= tiny {
            return Err(Error::SingularLocus(format!("{name} = {t} on a metric singularity")));
        }
    }
    if (p.t1 - p.t2).norm() <= tiny * scale {
        return Err(Error::SingularLocus("t1 = t2".into()));
    }
    Ok(())
}

/// Closed-form diagonal metric in parabolic coordinates.
pub fn metric_parabolic(space: SpaceTag, p: &ParabolicPoint) -> Result<Metric> {
    singular_guard(p)?;
    let one = C64::new(1.0, 0.0);
    let (t1, t2) = (p.t1, p.t2);
    let d11 = 4.0 * t1 * (one - t1) * (one - t1);
    let d22 = 4.0 * t2 * (one - t2) * (one - t2);
    let (g11, g22, gpp) = match space {
        SpaceTag::H3 => ((t1 - t2) / d11, (t2 - t1) / d22, -t1 * t2),
        SpaceTag::S3 => ((t2 - t1) / d11, (t1 - t2) / d22, t1 * t2),
    };
    let z = C64::new(0.0, 0.0);
    Ok([[g11, z, z], [z, g22, z], [z, z, gpp]])
}

/// Spherical-chart metric diag(1, r², r² sin²θ), r = sinh χ or sin χ.
pub fn metric_spherical(space: SpaceTag, p: &SphericalPoint) -> [[f64; 3]; 3] {
    let r = space.radius_fn(p.chi);
    let st = p.theta.sin();
    [[1.0, 0.0, 0.0], [0.0, r * r, 0.0], [0.0, 0.0, r * r * st * st]]
}

fn chart_t(space: SpaceTag, chi: f64, theta: f64) -> Result<(C64, C64)> {
    let sp = SphericalPoint { chi, theta, phi: 0.0 };
    let p = spherical_to_parabolic(space, &sp)?;
    Ok((p.t1, p.t2))
}

/// ∂(t1, t2)/∂(χ, θ) by central differences with one Richardson level.
/// Returns (extrapolated, plain step-h estimate).
type Jacobian = [[C64; 2]; 2];

fn chart_jacobian(space: SpaceTag, p: &SphericalPoint, h: f64) -> Result<(Jacobian, Jacobian)> {
    let central = |h: f64| -> Result<[[C64; 2]; 2]> {
        let (a1, a2) = chart_t(space, p.chi + h, p.theta)?;
        let (b1, b2) = chart_t(space, p.chi - h, p.theta)?;
        let (c1, c2) = chart_t(space, p.chi, p.theta + h)?;
        let (d1, d2) = chart_t(space, p.chi, p.theta - h)?;
        let s = 1.0 / (2.0 * h);
        Ok([[(a1 - b1) * s, (c1 - d1) * s], [(a2 - b2) * s, (c2 - d2) * s]])
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    let mut rich = coarse;
    for i in 0..2 {
        for j in 0..2 {
            rich[i][j] = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
        }
    }
    Ok((rich, coarse))
}

/// Pull the parabolic metric back to (χ, θ, φ) through a finite-difference
/// Jacobian and compare with the spherical-chart metric.
///
/// Diagonal entries are compared relative to themselves, off-diagonal ones
/// relative to the geometric mean of the matching diagonal entries. On S₃ the
/// comparison accepts either overall sign.
pub fn metric_pullback_check(space: SpaceTag, p: &SphericalPoint, h: f64) -> Result<ResidualReport> {
    p.validate(space)?;
    if !(p.chi > 0.05) || p.theta <= 1e-3 || p.theta >= PI - 1e-3 {
        return Err(Error::Domain("pullback check needs chi > 0.05 and theta away from the poles".into()));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Parameter(format!("step h = {h}")));
    }
    let par = spherical_to_parabolic(space, p)?;
    let g = metric_parabolic(space, &par)?;
    let (jac, plain) = chart_jacobian(space, p, h)?;
    let pull = |j: &[[C64; 2]; 2]| -> [[C64; 3]; 3] {
        let z = C64::new(0.0, 0.0);
        let mut out = [[z; 3]; 3];
        for a in 0..2 {
            for b in 0..2 {
                out[a][b] = j[0][a] * g[0][0] * j[0][b] + j[1][a] * g[1][1] * j[1][b];
            }
        }
        out[2][2] = g[2][2];
        out
    };
    let want = metric_spherical(space, p);
    let deviation = |got: &[[C64; 3]; 3], sign: f64| -> f64 {
        let mut worst = 0.0f64;
        for a in 0..3 {
            for b in 0..3 {
                let scale = (want[a][a] * want[b][b]).sqrt();
                let d = (got[a][b] - sign * want[a][b]).norm() / scale;
                worst = worst.max(d);
            }
        }
        worst
    };
    let got = pull(&jac);
    let coarse = pull(&plain);
    let signs: &[f64] = match space {
        SpaceTag::H3 => &[1.0],
        SpaceTag::S3 => &[1.0, -1.0],
    };
    let (sign, dev) = signs
        .iter()
        .map(|&s| (s, deviation(&got, s)))
        .fold((1.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    // Richardson consistency: the plain and extrapolated pullbacks must agree
    // to within the truncation we expect from a sane step.
    let mut spread = 0.0f64;
    for a in 0..3 {
        for b in 0..3 {
            let scale = (want[a][a] * want[b][b]).sqrt();
            spread = spread.max((got[a][b] - coarse[a][b]).norm() / scale);
        }
    }
    let gpp_dev = (g[2][2] - sign * want[2][2]).norm() / want[2][2];
    let mut acc = Accumulator::new();
    acc.push(&[p.chi, p.theta, p.phi], dev, dev);
    Ok(acc
        .finish(&format!("metric-pullback-{space}"), 1e-6)
        .with_detail("sign", sign)
        .with_detail("richardson_spread", spread)
        .with_detail("g_phiphi_deviation", gpp_dev)
        .with_check("richardson_converged", spread < 1e-3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h3_phi_component() {
        let g = metric_parabolic(SpaceTag::H3, &ParabolicPoint::real(0.5, -1.0, 0.0)).unwrap();
        assert_eq!(g[2][2], C64::new(0.5, 0.0));
    }

    #[test]
    fn swap_symmetry() {
        for space in SpaceTag::ALL {
            let p = ParabolicPoint::new(C64::new(0.3, 0.2), C64::new(-0.4, 0.1), 0.0);
            let q = ParabolicPoint::new(p.t2, p.t1, 0.0);
            let (g, h) = (metric_parabolic(space, &p).unwrap(), metric_parabolic(space, &q).unwrap());
            assert_eq!(g[0][0], h[1][1]);
            assert_eq!(g[1][1], h[0][0]);
        }
    }

    #[test]
    fn singular_points_rejected() {
        for (t1, t2) in [(0.0, -1.0), (0.5, 0.0), (0.0, 0.0)] {
            let r = metric_parabolic(SpaceTag::H3, &ParabolicPoint::real(t1, t2, 0.0));
            assert!(matches!(r, Err(Error::SingularLocus(_))));
        }
    }

    #[test]
    fn pullback_examples() {
        let p = SphericalPoint::new(SpaceTag::H3, 1.0, 1.0, 0.0).unwrap();
        let r = metric_pullback_check(SpaceTag::H3, &p, 1e-5).unwrap();
        assert!(r.passed, "{r}");
        let p = SphericalPoint::new(SpaceTag::S3, 0.8, 0.9, 0.0).unwrap();
        let r = metric_pullback_check(SpaceTag::S3, &p, 1e-5).unwrap();
        assert!(r.passed, "{r}");
        assert!(r.details["g_phiphi_deviation"] < 1e-14);
    }

    #[test]
    fn huge_step_is_flagged() {
        let p = SphericalPoint::new(SpaceTag::H3, 1.0, 1.0, 0.0).unwrap();
        let r = metric_pullback_check(SpaceTag::H3, &p, 0.5).unwrap();
        assert!(!r.passed);
        assert!(!r.checks["richardson_converged"]);
    }
}
