use super::*;
use crate::report::{Accumulator, ResidualReport};

fn half_angle_weights(theta: f64) -> (f64, f64) {
    // (1 + cos θ, 1 − cos θ) without cancellation near the poles
    let (s, c) = (0.5 * theta).sin_cos();
    (2.0 * c * c, 2.0 * s * s)
}

/// sin χ · e^{i(π/2 − χ)}, the S₃ chart kernel.
fn sphere_kernel(chi: f64) -> C64 {
    let (s, c) = chi.sin_cos();
    C64::new(s * s, s * c)
}

pub fn spherical_to_parabolic(space: SpaceTag, p: &SphericalPoint) -> Result<ParabolicPoint> {
    p.validate(space)?;
    let (up, down) = half_angle_weights(p.theta);
    match space {
        SpaceTag::H3 => {
            // t1 = (q3 + q)/(1 + q), t2 = (q3 − q)/(1 − q), q = tanh χ
            let t1 = 0.5 * up * -(-2.0 * p.chi).exp_m1();
            let t2 = -0.5 * down * (2.0 * p.chi).exp_m1();
            if !t2.is_finite() {
                return Err(Error::Domain(format!("chi = {} overflows the H3 chart", p.chi)));
            }
            Ok(ParabolicPoint::real(t1, t2 + 0.0, p.phi))
        }
        SpaceTag::S3 => {
            let k = sphere_kernel(p.chi);
            Ok(ParabolicPoint::new(up * k, down * k.conj(), p.phi))
        }
    }
}

pub fn parabolic_to_spherical(space: SpaceTag, p: &ParabolicPoint) -> Result<Located<SphericalPoint>> {
    p.validate(space)?;
    let phi = wrap_angle(p.phi);
    let (t1, t2) = (p.t1, p.t2);
    let one = C64::new(1.0, 0.0);
    if t1.norm() == 0.0 && t2.norm() == 0.0 {
        let origin = SphericalPoint { chi: 0.0, theta: 0.0, phi };
        return Ok(Located::flagged(origin, Degenerate::Theta));
    }
    let scale = t1.norm().max(t2.norm());
    if (t1 - t2).norm() <= 1e-14 * scale {
        return Err(Error::SingularLocus(format!("t1 = t2 = {t1}")));
    }
    // tan²(θ/2) = −t2(1 − t1) / (t1(1 − t2)), positive on the real slice
    let theta = 2.0 * (t2.norm() * (one - t1).norm()).sqrt().atan2((t1.norm() * (one - t2).norm()).sqrt());
    let chi = match space {
        SpaceTag::H3 => 0.5 * ((-t2.re).ln_1p() - (-t1.re).ln_1p()),
        SpaceTag::S3 => {
            // (t1 − t2) = i tan χ · (2 − t1 − t2)
            let z = t1 - t2;
            let d = C64::new(2.0, 0.0) - t1 - t2;
            let sgn = (z * d.conj()).im;
            z.norm().atan2(if sgn < 0.0 { -d.norm() } else { d.norm() })
        }
    };
    Ok(Located::regular(SphericalPoint { chi, theta: theta.min(PI), phi }))
}

/// Ambient point of a spherical-chart point (direct formula, no parabolic
/// coordinates involved).
pub fn spherical_to_ambient(space: SpaceTag, p: &SphericalPoint) -> Result<AmbientPoint> {
    p.validate(space)?;
    let (c0, r) = match space {
        SpaceTag::H3 => (p.chi.cosh(), p.chi.sinh()),
        SpaceTag::S3 => (p.chi.cos(), p.chi.sin()),
    };
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    Ok(AmbientPoint::new(c0, r * st * cp, r * st * sp, r * ct))
}

pub fn parabolic_to_ambient(space: SpaceTag, p: &ParabolicPoint) -> Result<AmbientPoint> {
    p.validate(space)?;
    let (sp, cp) = p.phi.sin_cos();
    match space {
        SpaceTag::H3 => {
            let (t1, t2) = (p.t1.re, p.t2.re);
            let s = ((1.0 - t1) * (1.0 - t2)).sqrt();
            let rho = (-t1 * t2).max(0.0).sqrt();
            let x3 = (t1 + t2 - 2.0 * t1 * t2) / (2.0 * s);
            let x0 = (2.0 - t1 - t2) / (2.0 * s);
            Ok(AmbientPoint::new(x0, rho * cp, rho * sp, x3))
        }
        SpaceTag::S3 => {
            let pf = polar_factors_unchecked(p);
            let rho = (pf.a * pf.b).sqrt();
            Ok(AmbientPoint::new(pf.alpha.sin(), rho * cp, rho * sp, 0.5 * (pf.a - pf.b)))
        }
    }
}

fn check_ambient(space: SpaceTag, p: &AmbientPoint) -> Result<()> {
    let scale = 1.0 + p.c0 * p.c0;
    let res = p.quadric_residual(space);
    if !(res.abs() <= 1e-10 * scale) {
        return Err(Error::Domain(format!("ambient point off the {space} quadric by {res:.3e}")));
    }
    if space == SpaceTag::H3 && p.c0 <= 0.0 {
        return Err(Error::Domain("H3 requires x0 > 0".into()));
    }
    Ok(())
}

/// (v + c3, v − c3) for v = |c| without cancellation.
fn split_pair(p: &AmbientPoint) -> (f64, f64, f64) {
    let v = p.vector_norm();
    let rho2 = p.c1 * p.c1 + p.c2 * p.c2;
    if p.c3 >= 0.0 {
        let plus = v + p.c3;
        let minus = if plus > 0.0 { rho2 / plus } else { 0.0 };
        (v, plus, minus)
    } else {
        let minus = v - p.c3;
        (v, rho2 / minus, minus)
    }
}

pub fn ambient_to_parabolic(space: SpaceTag, p: &AmbientPoint) -> Result<Located<ParabolicPoint>> {
    check_ambient(space, p)?;
    let (v, plus, minus) = split_pair(p);
    let axis = p.c1 == 0.0 && p.c2 == 0.0;
    let phi = if axis { 0.0 } else { wrap_angle(p.c2.atan2(p.c1)) };
    let point = match space {
        SpaceTag::H3 => {
            // t1 = (x3 + x)/(x0 + x), t2 = (x3 − x)/(x0 − x) = −(x − x3)(x0 + x)
            let t1 = plus / (p.c0 + v);
            let t2 = -minus * (p.c0 + v);
            ParabolicPoint::real(t1, t2 + 0.0, phi)
        }
        SpaceTag::S3 => {
            let t1 = plus * C64::new(v, p.c0);
            let t2 = minus * C64::new(v, -p.c0);
            ParabolicPoint::new(t1, t2, phi)
        }
    };
    Ok(if axis { Located::flagged(point, Degenerate::Phi) } else { Located::regular(point) })
}

pub fn quasi_from_ambient(space: SpaceTag, p: &AmbientPoint) -> Result<QuasiCartesian> {
    check_ambient(space, p)?;
    if !(p.c0 > 0.0) {
        return Err(Error::Domain(format!("quasi-Cartesian chart needs c0 > 0, got {}", p.c0)));
    }
    Ok(QuasiCartesian::new(p.c1 / p.c0, p.c2 / p.c0, p.c3 / p.c0))
}

pub fn ambient_from_quasi(space: SpaceTag, q: &QuasiCartesian) -> Result<AmbientPoint> {
    q.validate(space)?;
    let r2 = q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3;
    let c0 = match space {
        SpaceTag::H3 => 1.0 / (1.0 - r2).sqrt(),
        SpaceTag::S3 => 1.0 / (1.0 + r2).sqrt(),
    };
    Ok(AmbientPoint::new(c0, c0 * q.q1, c0 * q.q2, c0 * q.q3))
}

pub fn quasi_to_parabolic(space: SpaceTag, q: &QuasiCartesian) -> Result<ParabolicPoint> {
    Ok(ambient_to_parabolic(space, &ambient_from_quasi(space, q)?)?.value)
}

pub fn parabolic_to_quasi(space: SpaceTag, p: &ParabolicPoint) -> Result<QuasiCartesian> {
    quasi_from_ambient(space, &parabolic_to_ambient(space, p)?)
}

/// |t1* + t1(1−t2)/(1−t1)|, |t2* + t2(1−t1)/(1−t2)|, |Im t1 t2|, each
/// divided by 1 + |t|.
pub fn constraint_residuals(p: &ParabolicPoint) -> (f64, f64, f64) {
    let one = C64::new(1.0, 0.0);
    let (t1, t2) = (p.t1, p.t2);
    let r1 = (t1.conj() + t1 * (one - t2) / (one - t1)).norm() / (1.0 + t1.norm());
    let r2 = (t2.conj() + t2 * (one - t1) / (one - t2)).norm() / (1.0 + t2.norm());
    let r3 = (t1 * t2).im.abs() / (1.0 + (t1 * t2).norm());
    (r1, r2, r3)
}

/// Report of the S₃ conjugation constraint at one point. Points with
/// t1 = 1 or t2 = 1 are skipped.
pub fn constraint_check(p: &ParabolicPoint) -> ResidualReport {
    constraint_check_all(std::slice::from_ref(p))
}

pub fn constraint_check_all(points: &[ParabolicPoint]) -> ResidualReport {
    let one = C64::new(1.0, 0.0);
    let mut acc = Accumulator::new();
    for p in points {
        if p.t1 == one || p.t2 == one {
            acc.skip();
            continue;
        }
        let (r1, r2, r3) = constraint_residuals(p);
        let abs = (p.t1.conj() + p.t1 * (one - p.t2) / (one - p.t1)).norm();
        acc.push(&[p.t1.re, p.t1.im, p.t2.re, p.t2.im], abs, r1.max(r2).max(r3));
    }
    acc.finish("constraint", 1e-12)
}

fn polar_factors_unchecked(p: &ParabolicPoint) -> PolarFactors {
    let (a, b) = (p.t1.norm(), p.t2.norm());
    let alpha = if a >= b { p.t1.arg() } else { -p.t2.arg() };
    PolarFactors { a, b, alpha }
}

pub fn polar_decompose(p: &ParabolicPoint) -> Result<Located<PolarFactors>> {
    p.validate(SpaceTag::S3)?;
    let pf = polar_factors_unchecked(p);
    if pf.a == 0.0 && pf.b == 0.0 {
        return Ok(Located::flagged(PolarFactors { a: 0.0, b: 0.0, alpha: 0.0 }, Degenerate::Alpha));
    }
    if pf.a > 0.0 && pf.b > 0.0 {
        let mismatch = angle_diff(p.t1.arg(), -p.t2.arg()).abs();
        if mismatch > 1e-8 {
            return Err(Error::Constraint(format!("arg t1 + arg t2 = {mismatch:.3e}")));
        }
    }
    Ok(Located::regular(pf))
}

/// Ambient image of polar data: y0 = sin α, y3 = (a − b)/2, |y⊥| = √(ab).
pub fn polar_to_ambient(pf: &PolarFactors, phi: f64) -> AmbientPoint {
    let rho = (pf.a * pf.b).sqrt();
    AmbientPoint::new(pf.alpha.sin(), rho * phi.cos(), rho * phi.sin(), 0.5 * (pf.a - pf.b))
}
