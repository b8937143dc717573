use super::*;
use crate::geometry::{spherical_to_parabolic, SphericalPoint};
use crate::quadrature::composite;
use std::f64::consts::PI;

/// Tensor-product Gauss–Legendre layout in (χ, θ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormGrid {
    pub chi_panels: usize,
    pub theta_panels: usize,
    pub order: usize,
}

impl Default for NormGrid {
    fn default() -> Self {
        Self { chi_panels: 24, theta_panels: 8, order: 16 }
    }
}

impl NormGrid {
    fn doubled(&self) -> Self {
        Self { order: 2 * self.order, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// Constant c with ∫ |cΨ|² dV = 1.
    pub c: f64,
    /// ∫ |Ψ|² dV.
    pub integral: f64,
    /// |c(order) − c(2·order)| / c.
    pub error_estimate: f64,
    /// Upper end of the χ integration.
    pub chi_max: f64,
}

const H3_CHI_CAP: f64 = 300.0;

fn theta_profile(state: &StateParams, chi: f64, thetas: &[(f64, f64)]) -> Result<f64> {
    let r = state.space.radius_fn(chi);
    let mut s = 0.0;
    for &(th, w) in thetas {
        let sp = SphericalPoint { chi, theta: th, phi: 0.0 };
        let p = spherical_to_parabolic(state.space, &sp)?;
        let psi = wavefunction(state, &p)?;
        s += w * psi.norm_sqr() * th.sin();
    }
    Ok(2.0 * PI * r * r * s)
}

/// Radius beyond which the H₃ radial density stays below 1e−14 of its peak.
fn h3_chi_max(state: &StateParams, thetas: &[(f64, f64)]) -> Result<f64> {
    let step = 0.25;
    let mut peak = 0.0f64;
    let mut chi = step;
    let mut prev = f64::INFINITY;
    while chi <= H3_CHI_CAP {
        let v = theta_profile(state, chi, thetas)?;
        if !v.is_finite() {
            break;
        }
        peak = peak.max(v);
        if peak > 0.0 && v < 1e-14 * peak && v <= prev {
            return Ok(chi);
        }
        prev = v;
        chi += step;
    }
    Err(Error::Integrability(format!(
        "|psi|^2 does not decay below 1e-14 of its peak before chi = {H3_CHI_CAP}"
    )))
}

fn integrate(state: &StateParams, grid: &NormGrid, chi_max: f64) -> Result<f64> {
    let thetas = composite(0.0, PI, grid.theta_panels, grid.order);
    let chis = match state.space {
        SpaceTag::H3 => composite(0.0, chi_max, grid.chi_panels, grid.order),
        SpaceTag::S3 => {
            // split at the equator, where the chart has its t = 1 point
            let mut c = composite(0.0, PI / 2.0, grid.chi_panels / 2 + 1, grid.order);
            c.extend(composite(PI / 2.0, PI, grid.chi_panels / 2 + 1, grid.order));
            c
        }
    };
    let mut total = 0.0;
    for &(chi, w) in &chis {
        total += w * theta_profile(state, chi, &thetas)?;
    }
    Ok(total)
}

/// Normalization constant by quadrature in the spherical chart (φ integral
/// done analytically since |Ψ| does not depend on φ).
pub fn normalize(state: &StateParams, grid: &NormGrid) -> Result<Normalization> {
    if grid.order < 2 || grid.chi_panels < 1 || grid.theta_panels < 1 {
        return Err(Error::Parameter("quadrature grid too small".into()));
    }
    let chi_max = match state.space {
        SpaceTag::H3 => h3_chi_max(state, &composite(0.0, PI, grid.theta_panels, grid.order))?,
        SpaceTag::S3 => PI,
    };
    let i1 = integrate(state, grid, chi_max)?;
    let i2 = integrate(state, &grid.doubled(), chi_max)?;
    if !(i2 > 0.0 && i2.is_finite()) {
        return Err(Error::Integrability(format!("norm integral = {i2}")));
    }
    let (c1, c2) = (1.0 / i1.sqrt(), 1.0 / i2.sqrt());
    Ok(Normalization { c: c2, integral: i2, error_estimate: (c1 - c2).abs() / c2, chi_max })
}
