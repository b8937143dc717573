//! Charts on H₃ and S₃: ambient (embedding), spherical, quasi-Cartesian and
//! parabolic coordinates, the parabolic metrics and the S₃ conjugation
//! constraint.

mod charts;
mod limit;
mod metric;

pub use charts::*;
pub use limit::*;
pub use metric::*;

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Which constant-curvature space (unit curvature radius).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceTag {
    /// Hyperboloid x0² − x² = 1, x0 > 0.
    H3,
    /// Sphere y0² + y² = 1.
    S3,
}

impl SpaceTag {
    pub const ALL: [SpaceTag; 2] = [SpaceTag::H3, SpaceTag::S3];

    /// +1 on H₃, −1 on S₃.
    pub fn sigma(self) -> i32 {
        match self {
            SpaceTag::H3 => 1,
            SpaceTag::S3 => -1,
        }
    }

    /// Unit multiplying the coupling when passing to this model (e ⇒ ie on S₃).
    pub fn coupling_rot(self) -> C64 {
        match self {
            SpaceTag::H3 => C64::new(1.0, 0.0),
            SpaceTag::S3 => C64::new(0.0, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceTag::H3 => "h3",
            SpaceTag::S3 => "s3",
        }
    }

    /// sinh χ or sin χ.
    pub fn radius_fn(self, chi: f64) -> f64 {
        match self {
            SpaceTag::H3 => chi.sinh(),
            SpaceTag::S3 => chi.sin(),
        }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpaceTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h3" => Ok(SpaceTag::H3),
            "s3" => Ok(SpaceTag::S3),
            other => Err(Error::Parameter(format!("unknown space '{other}' (expected h3 or s3)"))),
        }
    }
}

/// Point of the ambient 4-space: (x0, x) on H₃, (y0, y) on S₃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl AmbientPoint {
    pub fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        Self { c0, c1, c2, c3 }
    }

    /// Deviation from the defining quadric.
    pub fn quadric_residual(&self, space: SpaceTag) -> f64 {
        let v = self.c1 * self.c1 + self.c2 * self.c2 + self.c3 * self.c3;
        match space {
            SpaceTag::H3 => self.c0 * self.c0 - v - 1.0,
            SpaceTag::S3 => self.c0 * self.c0 + v - 1.0,
        }
    }

    pub fn negated(&self) -> Self {
        Self::new(-self.c0, -self.c1, -self.c2, -self.c3)
    }

    fn vector_norm(&self) -> f64 {
        (self.c1 * self.c1 + self.c2 * self.c2 + self.c3 * self.c3).sqrt()
    }
}

/// Geodesic polar coordinates (χ, θ, φ) about the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    pub chi: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    /// Checked constructor; φ must already lie in [0, 2π).
    pub fn new(space: SpaceTag, chi: f64, theta: f64, phi: f64) -> Result<Self> {
        let p = Self { chi, theta, phi };
        p.validate(space)?;
        Ok(p)
    }

    /// Like `new` but wraps φ into [0, 2π) first.
    pub fn wrapped(space: SpaceTag, chi: f64, theta: f64, phi: f64) -> Result<Self> {
        Self::new(space, chi, theta, wrap_angle(phi))
    }

    pub fn validate(&self, space: SpaceTag) -> Result<()> {
        let chi_max = match space {
            SpaceTag::H3 => f64::INFINITY,
            SpaceTag::S3 => PI,
        };
        if !(self.chi.is_finite() && self.chi >= 0.0 && self.chi <= chi_max) {
            return Err(Error::Domain(format!("chi = {} out of range for {space}", self.chi)));
        }
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::Domain(format!("theta = {} outside [0, pi]", self.theta)));
        }
        if !(self.phi >= 0.0 && self.phi < 2.0 * PI) {
            return Err(Error::Domain(format!("phi = {} outside [0, 2pi)", self.phi)));
        }
        Ok(())
    }
}

/// Parabolic coordinates (t1, t2, φ); real on H₃, complex on S₃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolicPoint {
    pub t1: C64,
    pub t2: C64,
    pub phi: f64,
}

/// Tolerance for accepting a point as lying on the S₃ real slice.
pub const CONSTRAINT_TOL: f64 = 1e-10;

impl ParabolicPoint {
    pub fn new(t1: C64, t2: C64, phi: f64) -> Self {
        Self { t1, t2, phi }
    }

    pub fn real(t1: f64, t2: f64, phi: f64) -> Self {
        Self::new(C64::new(t1, 0.0), C64::new(t2, 0.0), phi)
    }

    /// Checked constructor.
    pub fn checked(space: SpaceTag, t1: C64, t2: C64, phi: f64) -> Result<Self> {
        let p = Self::new(t1, t2, phi);
        p.validate(space)?;
        Ok(p)
    }

    /// Range checks on H₃, constraint checks on S₃.
    pub fn validate(&self, space: SpaceTag) -> Result<()> {
        if !(self.t1.is_finite() && self.t2.is_finite() && self.phi.is_finite()) {
            return Err(Error::Domain("non-finite parabolic coordinates".into()));
        }
        match space {
            SpaceTag::H3 => {
                let tol = 1e-12;
                if self.t1.im.abs() > tol * (1.0 + self.t1.re.abs()) || self.t2.im.abs() > tol * (1.0 + self.t2.re.abs()) {
                    return Err(Error::Domain("H3 parabolic coordinates must be real".into()));
                }
                if !(self.t1.re >= 0.0 && self.t1.re < 1.0) {
                    return Err(Error::Domain(format!("H3 requires 0 <= t1 < 1, got {}", self.t1.re)));
                }
                if !(self.t2.re <= 0.0) {
                    return Err(Error::Domain(format!("H3 requires t2 <= 0, got {}", self.t2.re)));
                }
                Ok(())
            }
            SpaceTag::S3 => {
                let worst = slice_residual(self);
                if !(worst <= CONSTRAINT_TOL) {
                    return Err(Error::Constraint(format!("S3 conjugation constraint residual {worst:.3e}")));
                }
                Ok(())
            }
        }
    }
}

/// Division-free form of the S₃ constraint, finite at t = 1:
/// |t1*(1−t1) + t1(1−t2)|, |t2*(1−t2) + t2(1−t1)| and |Im t1 t2|, scaled.
fn slice_residual(p: &ParabolicPoint) -> f64 {
    let one = C64::new(1.0, 0.0);
    let (t1, t2) = (p.t1, p.t2);
    let r1 = (t1.conj() * (one - t1) + t1 * (one - t2)).norm() / (1.0 + t1.norm()).powi(2);
    let r2 = (t2.conj() * (one - t2) + t2 * (one - t1)).norm() / (1.0 + t2.norm()).powi(2);
    let r3 = (t1 * t2).im.abs() / (1.0 + (t1 * t2).norm());
    r1.max(r2).max(r3)
}

/// Quasi-Cartesian coordinates q_l = c_l / c0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiCartesian {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl QuasiCartesian {
    pub fn new(q1: f64, q2: f64, q3: f64) -> Self {
        Self { q1, q2, q3 }
    }

    pub fn radius(&self) -> f64 {
        (self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.q1, self.q2, self.q3]
    }

    pub fn from_array(q: [f64; 3]) -> Self {
        Self::new(q[0], q[1], q[2])
    }

    pub fn validate(&self, space: SpaceTag) -> Result<()> {
        let r = self.radius();
        if !r.is_finite() || (space == SpaceTag::H3 && r >= 1.0) {
            return Err(Error::Domain(format!("quasi-Cartesian radius {r} outside the {space} chart")));
        }
        Ok(())
    }
}

/// S₃ polar data t1 = a e^{iα}, t2 = b e^{−iα}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarFactors {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
}

/// Which coordinate of a returned point is not determined by the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degenerate {
    Theta,
    Phi,
    Alpha,
}

/// A chart value together with an optional degeneracy flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Located<T> {
    pub value: T,
    pub degenerate: Option<Degenerate>,
}

impl<T> Located<T> {
    pub fn regular(value: T) -> Self {
        Self { value, degenerate: None }
    }

    pub fn flagged(value: T, d: Degenerate) -> Self {
        Self { value, degenerate: Some(d) }
    }
}

/// Wrap an angle into [0, 2π).
pub fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(2.0 * PI);
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// Signed difference of two angles, in (−π, π].
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}
