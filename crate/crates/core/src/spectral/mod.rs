//! Fields on the periodic square, their Fourier representation, and the
//! spectral operators of the SQG equation.

mod fft;
mod field;
mod grid;
mod ops;
pub mod snapshot;
mod sup;

pub use fft::Fft2;
pub use field::{to_physical, to_spectral, ScalarField, VectorField};
pub use grid::{GridSpec, DEFAULT_DEALIAS_FRACTION};
pub(crate) use ops::lp_norm_values;
pub use ops::{
    advect, dealiased_product, flux_divergence, fractional_laplacian, gradient, lp_norm, partial,
    riesz_perp, weighted_energy,
};
pub use sup::sup_norm;
