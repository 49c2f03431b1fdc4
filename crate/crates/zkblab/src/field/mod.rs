//! Grids, discrete transforms, spectral calculus, and the norms and
//! inequalities used as measuring instruments.
//!
//! Fourier convention: 𝓕[f](ξ,η) = (1/2π)∫∫ e^{−ixξ−iyη} f dx dy. The DFT is
//! mapped onto it by the factor dx·dy/(2π) forward and dξ·dη/(2π) inverse,
//! with the phase of the box origin (−Lx, −Ly) folded in, so [`SpecField`]
//! coefficients approximate continuum transform values.

pub(crate) mod fft;
mod grid;
mod inequalities;
mod io;
mod norms;
pub(crate) mod spectral;

pub use grid::{make_grid, Field, Grid};
pub use inequalities::{
    boundary_ratio, gn_l2q_check, gn_linf_check, product_constant, product_l2_check,
    require_boundary_clean, smoothing_factor, InequalityCheck, BOUNDARY_GUARD,
};
pub use io::{read_dump, write_csv, write_dump, DUMP_MAGIC};
pub use norms::{norm, NormKind, NormValue};
pub use spectral::{
    fractional_dx, spectral_derivative, to_physical, to_spectral, Axis, SpecField, ZeroModePolicy,
};
