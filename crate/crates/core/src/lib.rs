//! Bound states of the Coulomb problem on the hyperbolic space H₃ and the
//! sphere S₃ in (real and complex) parabolic coordinates, together with a
//! residual-based verification engine.
//!
//! ```
//! use parakepler::{assemble_state, QuantumNumbers, SpaceTag};
//!
//! let s = assemble_state(SpaceTag::H3, 5.0, QuantumNumbers::new(0, 1, 0)).unwrap();
//! assert_eq!(s.epsilon, -4.625);
//! assert_eq!(s.b1.re, 1.75);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod kepler;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod samples;
pub mod sampling;
pub mod specfun;

pub use error::{Error, Result};
pub use geometry::{AmbientPoint, ParabolicPoint, PolarFactors, QuasiCartesian, SpaceTag, SphericalPoint};
pub use kepler::{
    assemble_state, bound_count_h3, energy, factor, normalize, radial_spherical, wavefunction, QuantumNumbers,
    SeparatedFactor, StateParams,
};
pub use num_complex::Complex64 as C64;
pub use report::ResidualReport;

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/spaces-and-charts.md")]
    pub mod spaces_and_charts {}
    #[doc = include_str!("../../../book/src/hypergeometric.md")]
    pub mod hypergeometric {}
    #[doc = include_str!("../../../book/src/bound-states.md")]
    pub mod bound_states {}
    #[doc = include_str!("../../../book/src/symmetry-operators.md")]
    pub mod symmetry_operators {}
    #[doc = include_str!("../../../book/src/verification.md")]
    pub mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
