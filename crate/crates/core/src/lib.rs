//! Spectral heat solves on the upper half space `R^d_+ x R` from Dirichlet or
//! Neumann boundary data, anisotropic Littlewood-Paley analysis, homogeneous
//! Besov / Bessel-potential / Sobolev norms, and an experiment harness that
//! measures the two-sided regularity and trace estimates numerically.

// `!(x > 0)` style guards reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod harness;
pub mod lp_bank;
pub mod multiplier;
pub mod norms;
pub mod oracle;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::{cpowi, Cplx, Real};

pub type Grid64 = grid::Grid<f64>;
pub type Grid32 = grid::Grid<f32>;
pub type SampledField64 = grid::SampledField<f64>;
pub type SpectralField64 = grid::SpectralField<f64>;
pub type SampledField32 = grid::SampledField<f32>;
pub type SpectralField32 = grid::SpectralField<f32>;
