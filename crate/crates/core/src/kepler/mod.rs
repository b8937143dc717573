//! Bound states: spectra, separation constants, hypergeometric parameters,
//! wave functions in the parabolic and spherical charts, normalization.

mod norm;
mod radial;
mod wave;

pub use norm::*;
pub use radial::*;
pub use wave::*;

use crate::error::{Error, Result};
use crate::geometry::SpaceTag;
use crate::specfun::Hyp2F1Params;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n1: u32,
    pub n2: u32,
    pub m: i32,
}

impl QuantumNumbers {
    pub fn new(n1: u32, n2: u32, m: i32) -> Self {
        Self { n1, n2, m }
    }

    /// Principal number k = n1 + n2 + |m| + 1.
    pub fn k(&self) -> u32 {
        self.n1 + self.n2 + self.m.unsigned_abs() + 1
    }

    /// Every (n1, n2, m) sharing principal number k; there are k² of them.
    pub fn with_k(k: u32) -> Vec<QuantumNumbers> {
        let mut out = Vec::new();
        if k == 0 {
            return out;
        }
        for am in 0..k {
            for n1 in 0..(k - am) {
                let n2 = k - 1 - am - n1;
                if am == 0 {
                    out.push(Self::new(n1, n2, 0));
                } else {
                    out.push(Self::new(n1, n2, am as i32));
                    out.push(Self::new(n1, n2, -(am as i32)));
                }
            }
        }
        out
    }
}

/// Full parameter bundle of a separated bound state
/// Ψ = t1^{a1}(1−t1)^{b1} F(α1,β1,γ1;t1) · t2^{a2}(1−t2)^{b2} F(α2,β2,γ2;t2) · e^{imφ}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    pub space: SpaceTag,
    pub e: f64,
    pub qn: QuantumNumbers,
    pub k: u32,
    pub epsilon: f64,
    pub a1: f64,
    pub a2: f64,
    pub b1: C64,
    pub b2: C64,
    pub alpha1: C64,
    pub beta1: C64,
    pub gamma1: C64,
    pub alpha2: C64,
    pub beta2: C64,
    pub gamma2: C64,
    pub k1: C64,
    pub k2: C64,
    /// H₃ only: set when n2 ≤ n1. Such states are admissible (b1 > 0 still
    /// holds), the flag just makes them easy to find.
    #[serde(default)]
    pub n2_not_above_n1: bool,
}

fn check_coupling(e: f64) -> Result<()> {
    if !(e.is_finite() && e >= 0.0) {
        return Err(Error::Parameter(format!("coupling e = {e} must be finite and nonnegative (attractive)")));
    }
    Ok(())
}

/// ε = −e²/2k² ∓ (k²−1)/2 (minus on H₃, plus on S₃), evaluated as a single
/// quotient so integer couplings give the correctly rounded value.
pub fn energy_unchecked(space: SpaceTag, e: f64, k: u32) -> f64 {
    let kk = (k as f64) * (k as f64);
    let curv = kk * (kk - 1.0);
    match space {
        SpaceTag::H3 => (-(e * e) - curv) / (2.0 * kk),
        SpaceTag::S3 => (-(e * e) + curv) / (2.0 * kk),
    }
}

/// Bound-state energy of level k. On H₃ only k < √e is a bound state.
pub fn energy(space: SpaceTag, e: f64, k: u32) -> Result<f64> {
    check_coupling(e)?;
    if k == 0 {
        return Err(Error::Parameter("k must be >= 1".into()));
    }
    if space == SpaceTag::H3 && !h3_admissible(e, k) {
        return Err(Error::NotBoundState(format!("H3 level k = {k} requires k < sqrt(e) = {:.6}", e.sqrt())));
    }
    Ok(energy_unchecked(space, e, k))
}

/// The two closed-form pieces of ε: the flat Rydberg term −e²/2k² and the
/// curvature shift ∓(k²−1)/2.
pub fn energy_split(space: SpaceTag, e: f64, k: u32) -> (f64, f64) {
    let kf = k as f64;
    let rydberg = -(e * e) / (2.0 * kf * kf);
    let curv = (kf * kf - 1.0) / 2.0;
    match space {
        SpaceTag::H3 => (rydberg, -curv),
        SpaceTag::S3 => (rydberg, curv),
    }
}

pub fn h3_admissible(e: f64, k: u32) -> bool {
    let kf = k as f64;
    k >= 1 && kf * kf < e
}

/// Number of H₃ levels, i.e. integers k ≥ 1 with k < √e.
pub fn bound_count_h3(e: f64) -> u32 {
    if !(e > 1.0) {
        return 0;
    }
    let mut k = 0u32;
    while h3_admissible(e, k + 1) {
        k += 1;
    }
    k
}

/// The H₃ energy interval [−e²/2, ½ − e] that contains every level.
pub fn h3_energy_interval(e: f64) -> (f64, f64) {
    (-(e * e) / 2.0, 0.5 - e)
}

/// Assemble all separation data of a bound state from the closed forms.
pub fn assemble_state(space: SpaceTag, e: f64, qn: QuantumNumbers) -> Result<StateParams> {
    check_coupling(e)?;
    let k = qn.k();
    if space == SpaceTag::H3 && !h3_admissible(e, k) {
        return Err(Error::NotBoundState(format!("H3 state with k = {k} needs k < sqrt(e) = {:.6}", e.sqrt())));
    }
    Ok(assemble_state_unchecked(space, e, qn))
}

/// Same closed forms without the H₃ admissibility check (for negative
/// controls and forced evaluation).
pub fn assemble_state_unchecked(space: SpaceTag, e: f64, qn: QuantumNumbers) -> StateParams {
    let k = qn.k();
    let kf = k as f64;
    let am = qn.m.unsigned_abs() as f64;
    let (n1, n2) = (qn.n1 as f64, qn.n2 as f64);
    let m2 = am * am;
    let a = am / 2.0;
    let gamma = C64::new(am + 1.0, 0.0);
    // ρ is e/k on H₃ and −ie/k on S₃; every parameter is the same rational
    // expression in ρ.
    let rho = match space {
        SpaceTag::H3 => C64::new(e / kf, 0.0),
        SpaceTag::S3 => C64::new(0.0, -e / kf),
    };
    let d = n2 - n1 + rho;
    let b1 = 0.5 * d;
    let k1 = ((kf + rho) * (kf + rho) - d * d + m2 - 1.0) / 4.0;
    let k2 = ((kf - rho) * (kf - rho) - d * d + m2 - 1.0) / 4.0;
    StateParams {
        space,
        e,
        qn,
        k,
        epsilon: energy_unchecked(space, e, k),
        a1: a,
        a2: a,
        b1,
        b2: -b1,
        alpha1: n2 + am + 1.0 + rho,
        beta1: C64::new(-n1, 0.0),
        gamma1: gamma,
        alpha2: n1 + am + 1.0 - rho,
        beta2: C64::new(-n2, 0.0),
        gamma2: gamma,
        k1,
        k2,
        n2_not_above_n1: space == SpaceTag::H3 && qn.n2 <= qn.n1,
    }
}

/// All admissible states with k ≤ k_max (H₃ additionally k < √e).
pub fn admissible_states(space: SpaceTag, e: f64, k_max: u32) -> Vec<StateParams> {
    (1..=k_max)
        .filter(|&k| space == SpaceTag::S3 || h3_admissible(e, k))
        .flat_map(QuantumNumbers::with_k)
        .filter_map(|qn| assemble_state(space, e, qn).ok())
        .collect()
}

/// One separated factor t^a (1−t)^b F(α, β, γ; t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparatedFactor {
    pub a: f64,
    pub b: C64,
    pub params: Hyp2F1Params,
}

pub fn factor(state: &StateParams, which: u8) -> Result<SeparatedFactor> {
    match which {
        1 => Ok(SeparatedFactor {
            a: state.a1,
            b: state.b1,
            params: Hyp2F1Params::new(state.alpha1, state.beta1, state.gamma1),
        }),
        2 => Ok(SeparatedFactor {
            a: state.a2,
            b: state.b2,
            params: Hyp2F1Params::new(state.alpha2, state.beta2, state.gamma2),
        }),
        other => Err(Error::Parameter(format!("factor index {other} (expected 1 or 2)"))),
    }
}

impl StateParams {
    /// Sum k1 + k2, the eigenvalue of the B operator.
    pub fn b_eigenvalue(&self) -> C64 {
        self.k1 + self.k2
    }

    /// The separation-constant difference the model requires: e on H₃,
    /// −ie on S₃.
    pub fn expected_k_difference(&self) -> C64 {
        match self.space {
            SpaceTag::H3 => C64::new(self.e, 0.0),
            SpaceTag::S3 => C64::new(0.0, -self.e),
        }
    }

    /// (λ, κ) of the separated equation
    /// (1−t)(t(1−t)f′)′ + (λt − m²/4t + κ) f = 0 for factor `which`.
    pub fn ode_coefficients(&self, which: u8) -> (C64, C64) {
        let (e, eps) = (self.e, self.epsilon);
        match (self.space, which) {
            (SpaceTag::S3, 1) => (C64::new(-eps / 2.0, e / 2.0), self.k1),
            (SpaceTag::S3, _) => (C64::new(-eps / 2.0, -e / 2.0), self.k2),
            (SpaceTag::H3, 1) => (C64::new((eps - e) / 2.0, 0.0), self.k1),
            (SpaceTag::H3, _) => (C64::new((eps + e) / 2.0, 0.0), self.k2),
        }
    }

    /// Residual of the unsquared quantization relation: the principal root
    /// √(1 + 2(e − ε)) (H₃) or √(1 + 2(ε − ie)) (S₃) minus (2n1 + |m| + 1)
    /// must equal 2b1.
    pub fn quantization_residual(&self) -> f64 {
        let rad = match self.space {
            SpaceTag::H3 => C64::new(1.0 + 2.0 * (self.e - self.epsilon), 0.0),
            SpaceTag::S3 => C64::new(1.0 + 2.0 * self.epsilon, -2.0 * self.e),
        };
        let n = 2.0 * self.qn.n1 as f64 + self.qn.m.unsigned_abs() as f64 + 1.0;
        (rad.sqrt() - n - 2.0 * self.b1).norm()
    }

    /// Worst violation among b1 + b2 = 0, β_i = −n_i, γ_i = |m| + 1,
    /// a_i = |m|/2 and the k1 − k2 rule, scaled by 1 + |k1|.
    pub fn invariant_residual(&self) -> f64 {
        let am = self.qn.m.unsigned_abs() as f64;
        let scale = 1.0 + self.k1.norm().max(self.k2.norm());
        [
            (self.b1 + self.b2).norm(),
            (self.beta1 + self.qn.n1 as f64).norm(),
            (self.beta2 + self.qn.n2 as f64).norm(),
            (self.gamma1 - (am + 1.0)).norm(),
            (self.gamma2 - (am + 1.0)).norm(),
            (self.a1 - am / 2.0).abs(),
            (self.a2 - am / 2.0).abs(),
            (self.k1 - self.k2 - self.expected_k_difference()).norm() / scale,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// H₃ admissibility conditions: b1 > 0, b2 < 0, a2 + b2 + n2 < 0.
    pub fn h3_conditions(&self) -> bool {
        self.space == SpaceTag::H3
            && self.b1.re > 0.0
            && self.b2.re < 0.0
            && self.a2 + self.b2.re + (self.qn.n2 as f64) < 0.0
    }

    /// Copy with ε, k1 and b1 shifted (b2 follows b1 so that b1 + b2 = 0
    /// is not what breaks).
    pub fn perturbed(&self, d_eps: f64, d_k1: f64, d_b1: f64) -> StateParams {
        let mut s = self.clone();
        s.epsilon += d_eps;
        s.k1 += d_k1;
        s.b1 += d_b1;
        s
    }
}
