//! Verification engine: exact-derivative residuals of the separated
//! equations, the Hamiltonian and the B operator; finite-difference check of
//! the Runge–Lenz identity; exact polynomial algebra for the commutators.

mod poly;
mod runge_lenz;

pub use poly::*;
pub use runge_lenz::*;

use crate::error::{Error, Result};
use crate::geometry::{parabolic_to_ambient, ParabolicPoint, SpaceTag};
use crate::kepler::{branch_logs, factor, power_base, SeparatedFactor, StateParams};
use crate::report::{Accumulator, ResidualReport};
use num_complex::Complex64 as C64;

pub const ODE_TOL: f64 = 1e-10;
pub const HAMILTONIAN_TOL: f64 = 1e-9;
pub const B_OPERATOR_TOL: f64 = 1e-9;
pub const COS_THETA_TOL: f64 = 1e-12;

/// Exact (f, f′, f″) of t^a (1−t)^b F(α, β, γ; t), principal branches.
pub fn factor_derivatives(f: &SeparatedFactor, t: C64) -> Result<(C64, C64, C64)> {
    let [a, b, c] = f.jet(t)?;
    Ok((a, b, c))
}

/// (1 − t)(t(1 − t) f″ + (1 − 2t) f′), i.e. (1−t) d/dt t(1−t) d/dt f.
fn radial_part(t: C64, jet: &[C64; 3]) -> C64 {
    let one = C64::new(1.0, 0.0);
    (one - t) * (t * (one - t) * jet[2] + (one - 2.0 * t) * jet[1])
}

/// Residual of (1−t)(t(1−t)f′)′ + (λt − m²/4t + κ) f = 0 on the samples.
///
/// f is scaled by its largest magnitude over the sample; each residual is
/// divided by 1 + |κ f|.
pub fn ode_residual(state: &StateParams, which: u8, sample: &[C64]) -> Result<ResidualReport> {
    let f = factor(state, which)?;
    let (lambda, kappa) = state.ode_coefficients(which);
    let m2 = (state.qn.m as f64).powi(2);
    let mut jets = Vec::with_capacity(sample.len());
    let mut acc = Accumulator::new();
    for &t in sample {
        let one = C64::new(1.0, 0.0);
        if t.norm() < 1e-12 || (one - t).norm() < 1e-12 {
            acc.skip();
            continue;
        }
        match f.jet(power_base(state.space, t)) {
            Ok(j) => jets.push((t, j)),
            Err(_) => acc.skip(),
        }
    }
    let scale = jets.iter().map(|(_, j)| j[0].norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for (t, j) in &jets {
        let j = [j[0] / scale, j[1] / scale, j[2] / scale];
        let kin = radial_part(*t, &j);
        let pot = (lambda * t - m2 / (4.0 * t) + kappa) * j[0];
        let r = kin + pot;
        // the κ f term plays the role of the eigenvalue side
        acc.push(&[t.re, t.im], r.norm(), r.norm() / (1.0 + (kappa * j[0]).norm()));
    }
    Ok(acc.finish(&format!("ode-{}-f{which}", state.space), ODE_TOL))
}

struct PointData {
    p: ParabolicPoint,
    j1: [C64; 3],
    j2: [C64; 3],
    phase: C64,
}

fn point_data(state: &StateParams, points: &[ParabolicPoint], acc: &mut Accumulator) -> Vec<PointData> {
    let f1 = factor(state, 1).expect("factor 1");
    let f2 = factor(state, 2).expect("factor 2");
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let one = C64::new(1.0, 0.0);
        let scale = 1.0 + p.t1.norm().max(p.t2.norm());
        let singular = [p.t1, p.t2].iter().any(|&t| t.norm() < 1e-12 || (one - t).norm() < 1e-12)
            || (p.t1 - p.t2).norm() < 1e-12 * scale;
        if singular || p.validate(state.space).is_err() {
            acc.skip();
            continue;
        }
        let jets = branch_logs(state.space, p).and_then(|(l1, l2)| {
            Ok((
                f1.jet_with_log(power_base(state.space, p.t1), l1, 2)?,
                f2.jet_with_log(power_base(state.space, p.t2), l2, 2)?,
            ))
        });
        match jets {
            Ok((j1, j2)) => out.push(PointData { p: *p, j1, j2, phase: C64::from_polar(1.0, state.qn.m as f64 * p.phi) }),
            Err(_) => acc.skip(),
        }
    }
    out
}

fn sample_scale(data: &[PointData]) -> f64 {
    data.iter().map(|d| (d.j1[0] * d.j2[0]).norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE)
}

fn coords(p: &ParabolicPoint) -> [f64; 5] {
    [p.t1.re, p.t1.im, p.t2.re, p.t2.im, p.phi]
}

/// HΨ for the Hamiltonian of `op_space`, from the jets of f1 and f2.
fn apply_hamiltonian(op_space: SpaceTag, e: f64, m: i32, d: &PointData, s: f64) -> (C64, C64) {
    let (t1, t2) = (d.p.t1, d.p.t2);
    let j1 = [d.j1[0] / s, d.j1[1] / s, d.j1[2] / s];
    let psi = j1[0] * d.j2[0] * d.phase;
    let kin = (2.0 / (t1 - t2) * radial_part(t1, &j1) * d.j2[0] + 2.0 / (t2 - t1) * j1[0] * radial_part(t2, &d.j2)) * d.phase;
    let m2 = (m as f64).powi(2);
    let ang = m2 / (2.0 * t1 * t2) * psi;
    let ratio = (2.0 - t1 - t2) / (t1 - t2);
    let h = match op_space {
        SpaceTag::S3 => kin + ang - C64::new(0.0, e) * ratio * psi,
        SpaceTag::H3 => -kin - ang - e * ratio * psi,
    };
    (h, psi)
}

/// Relative residual of HΨ − εΨ with the state's own Hamiltonian.
pub fn hamiltonian_residual(state: &StateParams, sample: &[ParabolicPoint]) -> ResidualReport {
    hamiltonian_residual_in(state.space, state, sample)
}

/// Same, with the Hamiltonian of `op_space` (a mismatched space is the
/// negative control).
pub fn hamiltonian_residual_in(op_space: SpaceTag, state: &StateParams, sample: &[ParabolicPoint]) -> ResidualReport {
    let mut acc = Accumulator::new();
    let data = point_data(state, sample, &mut acc);
    let s = sample_scale(&data);
    for d in &data {
        let (h, psi) = apply_hamiltonian(op_space, state.e, state.qn.m, d, s);
        let r = h - state.epsilon * psi;
        acc.push(&coords(&d.p), r.norm(), r.norm() / (1.0 + (state.epsilon * psi).norm()));
    }
    acc.finish(&format!("hamiltonian-{}", state.space), HAMILTONIAN_TOL)
}

/// cos θ = (t1 + t2 − 2 t1 t2)/(t1 − t2).
pub fn cos_theta_parabolic(p: &ParabolicPoint) -> C64 {
    (p.t1 + p.t2 - 2.0 * p.t1 * p.t2) / (p.t1 - p.t2)
}

/// BΨ from the expanded second-order form, with the angular potential
/// −ie cos θ (S₃) or +e cos θ (H₃).
fn apply_b(space: SpaceTag, e: f64, m: i32, d: &PointData, s: f64) -> (C64, C64) {
    let (t1, t2) = (d.p.t1, d.p.t2);
    let one = C64::new(1.0, 0.0);
    let j1 = [d.j1[0] / s, d.j1[1] / s, d.j1[2] / s];
    let j2 = d.j2;
    let f = j1[0] * j2[0];
    let diff = 2.0 * t2 * (one - t1) * (one - 2.0 * t1) / (t1 - t2) * j1[1] * j2[0]
        + 2.0 * t1 * (one - t2) * (one - 2.0 * t2) / (t2 - t1) * j1[0] * j2[1]
        + 2.0 * t1 * t2 * (one - t1) * (one - t1) / (t1 - t2) * j1[2] * j2[0]
        + 2.0 * t1 * t2 * (one - t2) * (one - t2) / (t2 - t1) * j1[0] * j2[2]
        + (t1 + t2) / (2.0 * t1 * t2) * (m as f64).powi(2) * f;
    let coupling = match space {
        SpaceTag::S3 => C64::new(0.0, -e),
        SpaceTag::H3 => C64::new(e, 0.0),
    };
    let b = (diff + coupling * cos_theta_parabolic(&d.p) * f) * d.phase;
    (b, f * d.phase)
}

/// Relative residual of BΨ − (k1 + k2)Ψ; also checks cos θ from the
/// parabolic formula against q3/q from the ambient chart.
pub fn b_operator_residual(state: &StateParams, sample: &[ParabolicPoint]) -> ResidualReport {
    let mut acc = Accumulator::new();
    let data = point_data(state, sample, &mut acc);
    let s = sample_scale(&data);
    let lam = state.b_eigenvalue();
    let mut cos_worst = 0.0f64;
    for d in &data {
        let (b, psi) = apply_b(state.space, state.e, state.qn.m, d, s);
        let r = b - lam * psi;
        acc.push(&coords(&d.p), r.norm(), r.norm() / (1.0 + (lam * psi).norm()));
        match parabolic_to_ambient(state.space, &d.p) {
            Ok(x) => {
                let q = (x.c1 * x.c1 + x.c2 * x.c2 + x.c3 * x.c3).sqrt();
                cos_worst = cos_worst.max((cos_theta_parabolic(&d.p) - x.c3 / q).norm());
            }
            Err(_) => cos_worst = f64::INFINITY,
        }
    }
    acc.finish(&format!("b-operator-{}", state.space), B_OPERATOR_TOL)
        .with_detail("cos_theta_identity", cos_worst)
        .with_check("cos_theta_identity", cos_worst <= COS_THETA_TOL)
}

/// Exact BΨ at one point (unscaled), for the Runge–Lenz comparison.
pub fn b_operator_apply(state: &StateParams, p: &ParabolicPoint) -> Result<(C64, C64)> {
    let mut acc = Accumulator::new();
    let data = point_data(state, std::slice::from_ref(p), &mut acc);
    let d = data.first().ok_or_else(|| Error::SingularLocus(format!("B operator at {p:?}")))?;
    Ok(apply_b(state.space, state.e, state.qn.m, d, 1.0))
}

/// Exact HΨ at one point (unscaled).
pub fn hamiltonian_apply(state: &StateParams, p: &ParabolicPoint) -> Result<(C64, C64)> {
    let mut acc = Accumulator::new();
    let data = point_data(state, std::slice::from_ref(p), &mut acc);
    let d = data.first().ok_or_else(|| Error::SingularLocus(format!("Hamiltonian at {p:?}")))?;
    Ok(apply_hamiltonian(state.space, state.e, state.qn.m, d, 1.0))
}

/// The separated-equation terms that make up B in its unexpanded form:
/// returns (D1Ψ, D2Ψ) with Di = (1−ti) ∂i ti(1−ti) ∂i.
pub fn separated_terms(state: &StateParams, p: &ParabolicPoint) -> Result<(C64, C64)> {
    let mut acc = Accumulator::new();
    let data = point_data(state, std::slice::from_ref(p), &mut acc);
    let d = data.first().ok_or_else(|| Error::SingularLocus(format!("point {p:?}")))?;
    Ok((
        radial_part(d.p.t1, &d.j1) * d.j2[0] * d.phase,
        d.j1[0] * radial_part(d.p.t2, &d.j2) * d.phase,
    ))
}
