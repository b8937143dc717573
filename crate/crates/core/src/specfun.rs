//! Gauss hypergeometric function, complex powers with an explicit branch
//! policy, and the closed-form spectral square roots.

use crate::error::{Error, Result};
use crate::geometry::SpaceTag;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

const INTEGER_TOL: f64 = 1e-12;
const SERIES_MAX_TERMS: usize = 100_000;

/// Parameters (α, β, γ) of F(α, β, γ; t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyp2F1Params {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
}

fn nonpositive_integer(z: C64) -> Option<usize> {
    let r = z.re.round();
    if r <= 0.0 && (z - r).norm() <= INTEGER_TOL {
        Some((-r) as usize)
    } else {
        None
    }
}

impl Hyp2F1Params {
    pub fn new(alpha: C64, beta: C64, gamma: C64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn real(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::new(alpha.into(), beta.into(), gamma.into())
    }

    /// Degree of the terminating series, if α or β is a nonpositive integer.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match (nonpositive_integer(self.alpha), nonpositive_integer(self.beta)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial_degree().is_some()
    }

    /// Parameters shifted by `n` in each slot (the derivative relation).
    pub fn shifted(&self, n: usize) -> Self {
        let s = n as f64;
        Self::new(self.alpha + s, self.beta + s, self.gamma + s)
    }

    fn check_gamma(&self) -> Result<()> {
        if let Some(g) = nonpositive_integer(self.gamma) {
            // A terminating series of degree < |γ| never reaches the pole.
            match self.polynomial_degree() {
                Some(d) if d < g => Ok(()),
                _ => Err(Error::Parameter(format!("gamma = {} is a nonpositive integer", self.gamma))),
            }
        } else {
            Ok(())
        }
    }

    /// Series coefficients c_j = (α)_j (β)_j / ((γ)_j j!) of a polynomial F.
    pub fn polynomial_coefficients(&self) -> Option<Vec<C64>> {
        let n = self.polynomial_degree()?;
        let mut c = Vec::with_capacity(n + 1);
        let mut term = C64::new(1.0, 0.0);
        c.push(term);
        for j in 0..n {
            let jf = j as f64;
            term *= (self.alpha + jf) * (self.beta + jf) / ((self.gamma + jf) * (jf + 1.0));
            c.push(term);
        }
        Some(c)
    }
}

/// F(α, β, γ; t).
///
/// Terminating cases are summed exactly (Horner on the coefficient list) for
/// any t; otherwise the Gauss series is summed for |t| < 1 until the term drops
/// below 1e-16 of the partial sum.
pub fn hyp2f1(p: &Hyp2F1Params, t: C64) -> Result<C64> {
    p.check_gamma()?;
    if let Some(c) = p.polynomial_coefficients() {
        return Ok(horner(&c, t));
    }
    if !(t.norm() < 1.0) {
        return Err(Error::Domain(format!("|t| = {} outside the series disc", t.norm())));
    }
    let mut sum = C64::new(1.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    for j in 0..SERIES_MAX_TERMS {
        let jf = j as f64;
        term *= (p.alpha + jf) * (p.beta + jf) / ((p.gamma + jf) * (jf + 1.0)) * t;
        sum += term;
        if term.norm() < 1e-16 * sum.norm() && j > 2 {
            return Ok(sum);
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergent(format!("2F1 series at t = {t}")))
}

fn horner(c: &[C64], t: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &cj| acc * t + cj)
}

/// dⁿ/dtⁿ F(α, β, γ; t) = (α)_n (β)_n / (γ)_n · F(α+n, β+n, γ+n; t).
pub fn hyp2f1_derivative(p: &Hyp2F1Params, t: C64, order: usize) -> Result<C64> {
    p.check_gamma()?;
    if let Some(d) = p.polynomial_degree() {
        if d < order {
            return Ok(C64::new(0.0, 0.0));
        }
    }
    let mut pref = C64::new(1.0, 0.0);
    for j in 0..order {
        let jf = j as f64;
        pref *= (p.alpha + jf) * (p.beta + jf) / (p.gamma + jf);
    }
    Ok(pref * hyp2f1(&p.shifted(order), t)?)
}

/// Principal-branch power exp(w · Log z), cut on the negative reals.
///
/// `z^0 = 1` for every z; `0^w = 0` when Re w > 0.
pub fn complex_pow(base: C64, exponent: C64) -> Result<C64> {
    if exponent == C64::new(0.0, 0.0) {
        return Ok(C64::new(1.0, 0.0));
    }
    if base == C64::new(0.0, 0.0) {
        return if exponent.re > 0.0 {
            Ok(C64::new(0.0, 0.0))
        } else {
            Err(Error::Domain(format!("0 raised to {exponent}")))
        };
    }
    if exponent.im == 0.0 && base.im == 0.0 && base.re > 0.0 {
        return Ok(C64::new(base.re.powf(exponent.re), 0.0));
    }
    Ok((exponent * base.ln()).exp())
}

/// Which sign of the coupling enters the radicand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// The radicand whose root `spectral_root` returns in closed form:
/// H₃: 1/4 + (±e − ε)/2; S₃: 1/4 + (ε ± ie)/2.
pub fn spectral_radicand(space: SpaceTag, e: f64, epsilon: f64, branch: Branch) -> C64 {
    let s = branch.sign();
    match space {
        SpaceTag::H3 => C64::new(0.25 + (s * e - epsilon) / 2.0, 0.0),
        SpaceTag::S3 => C64::new(0.25 + epsilon / 2.0, s * e / 2.0),
    }
}

/// Closed-form root at the bound-state energy of level k:
/// H₃ → (k ± e/k)/2, S₃ → (k ± ie/k)/2.
///
/// For H₃ the minus branch is returned with its sign, (k − e/k)/2 < 0 for
/// bound states; this is the root the quantization condition selects, not
/// the principal one.
pub fn spectral_root(space: SpaceTag, e: f64, k: u32, branch: Branch) -> C64 {
    let kf = k as f64;
    let r = branch.sign() * e / kf;
    match space {
        SpaceTag::H3 => C64::new((kf + r) / 2.0, 0.0),
        SpaceTag::S3 => C64::new(kf / 2.0, r / 2.0),
    }
}

/// Principal square root of the radicand at an arbitrary ε, plus a flag set
/// when the root lies on the imaginary axis (branch ambiguity).
pub fn principal_spectral_root(space: SpaceTag, e: f64, epsilon: f64, branch: Branch) -> (C64, bool) {
    let r = spectral_radicand(space, e, epsilon, branch).sqrt();
    (r, r.re == 0.0)
}
