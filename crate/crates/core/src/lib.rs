//! Pseudo-spectral simulation of the dissipative surface quasi-geostrophic
//! equation
//!
//! ```text
//! θ_t + u·∇θ + κΛ^αθ = εΔθ,   u = R^⊥θ,
//! ```
//!
//! on the periodic square, together with Littlewood–Paley diagnostics: dyadic
//! blocks, Besov norms, the dissipation wavenumber and criterion functional,
//! and the low-pass energy flux.

pub mod error;
pub mod flux;
pub mod frame;
pub mod io;
pub mod littlewood_paley;
pub mod regularity;
pub mod solver;
pub mod spectral;

pub use error::{Result, SqgError};
pub use frame::DiagnosticsFrame;
pub use littlewood_paley::{BlockSet, DyadicProfile};
pub use solver::{InitialCondition, SolverConfig, Trajectory};
pub use spectral::{GridSpec, ScalarField, VectorField};
