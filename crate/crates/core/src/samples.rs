//! Seeded point sets away from the chart singularities.

use crate::geometry::{spherical_to_parabolic, ParabolicPoint, QuasiCartesian, SpaceTag, SphericalPoint};
use crate::kepler::StateParams;
use crate::sampling::Sampler;
use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Minimum distance kept from t ∈ {0, 1}, from t1 = t2, from the poles
/// θ ∈ {0, π} and (on S₃) from the equator χ = π/2.
pub const GUARD: f64 = 1e-3;

/// Largest χ drawn on H₃.
pub const H3_CHI_MAX: f64 = 4.0;

pub fn well_separated(p: &ParabolicPoint, guard: f64) -> bool {
    let one = C64::new(1.0, 0.0);
    [p.t1, p.t2].iter().all(|&t| t.norm() >= guard && (one - t).norm() >= guard) && (p.t1 - p.t2).norm() >= guard
}

fn draw_spherical(space: SpaceTag, s: &mut Sampler) -> SphericalPoint {
    loop {
        let chi = match space {
            SpaceTag::H3 => s.uniform(0.05, H3_CHI_MAX),
            SpaceTag::S3 => s.uniform(0.05, PI - 0.05),
        };
        if space == SpaceTag::S3 && (chi - FRAC_PI_2).abs() < GUARD {
            continue;
        }
        let theta = s.uniform(GUARD, PI - GUARD);
        let phi = s.uniform(0.0, 2.0 * PI);
        return SphericalPoint { chi, theta, phi };
    }
}

/// `n` spherical points whose parabolic images pass `well_separated`.
pub fn spherical_points(space: SpaceTag, seed: u64, n: usize) -> Vec<SphericalPoint> {
    let mut s = Sampler::new(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let sp = draw_spherical(space, &mut s);
        if let Ok(p) = spherical_to_parabolic(space, &sp) {
            if well_separated(&p, GUARD) {
                out.push(sp);
            }
        }
    }
    out
}

/// Parabolic images of `spherical_points`.
pub fn parabolic_points(space: SpaceTag, seed: u64, n: usize) -> Vec<ParabolicPoint> {
    spherical_points(space, seed, n)
        .iter()
        .map(|sp| spherical_to_parabolic(space, sp).expect("sampled point is in range"))
        .collect()
}

/// Sample for the separated equation of factor `which`.
///
/// H₃: real t1 ∈ (0, 1), real t2 ∈ [−20, 0). S₃: half the points come from
/// the physical slice, half are arbitrary complex t with |t| < 0.9.
pub fn ode_points(state: &StateParams, which: u8, seed: u64, n: usize) -> Vec<C64> {
    let mut s = Sampler::new(seed ^ ((which as u64) << 32));
    match state.space {
        SpaceTag::H3 => (0..n)
            .map(|_| {
                if which == 1 {
                    C64::new(s.uniform(GUARD, 1.0 - GUARD), 0.0)
                } else {
                    C64::new(s.uniform(-20.0, -GUARD), 0.0)
                }
            })
            .collect(),
        SpaceTag::S3 => {
            let slice = parabolic_points(SpaceTag::S3, seed.wrapping_add(which as u64), n / 2);
            let mut out: Vec<C64> = slice.iter().map(|p| if which == 1 { p.t1 } else { p.t2 }).collect();
            while out.len() < n {
                let r = 0.9 * s.unit().sqrt();
                let t = C64::from_polar(r, s.uniform(0.0, 2.0 * PI));
                if t.norm() >= GUARD {
                    out.push(t);
                }
            }
            out
        }
    }
}

/// Quasi-Cartesian points for the Runge–Lenz check: off the polar axis,
/// q ≥ 0.05, H₃ radius ≤ 0.85, S₃ on the northern hemisphere (χ ≤ 1.3).
pub fn quasi_points(space: SpaceTag, seed: u64, n: usize) -> Vec<QuasiCartesian> {
    let mut s = Sampler::new(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let r = match space {
            SpaceTag::H3 => s.uniform(0.1, 0.85),
            SpaceTag::S3 => s.uniform(0.1, 1.3).tan(),
        };
        let theta = s.uniform(0.15, PI - 0.15);
        let phi = s.uniform(0.0, 2.0 * PI);
        let (st, ct) = theta.sin_cos();
        let q = QuasiCartesian::new(r * st * phi.cos(), r * st * phi.sin(), r * ct);
        if let Ok(p) = crate::geometry::quasi_to_parabolic(space, &q) {
            if well_separated(&p, 1e-2) {
                out.push(q);
            }
        }
    }
    out
}
