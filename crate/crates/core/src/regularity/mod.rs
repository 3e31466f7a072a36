//! Dissipation wavenumber, the criterion functional f(t) and its time
//! integral, admissible (s, l) pairs, the B^s_{l,l} Lyapunov functional with
//! its Gronwall envelope, and the Prodi–Serrin comparison.

mod compare;
mod criterion;
mod lyapunov;
mod params;
mod wavenumber;

pub use compare::{
    compare_criteria, prodi_serrin_gamma, prodi_serrin_norm, CompareReport, ProdiSerrin,
};
pub use criterion::{
    criterion_f, criterion_integral, cumulative_cubic, cumulative_trapezoid, f_from_linf,
    trapezoid, CriterionSeries,
};
pub use lyapunov::{gronwall_monitor, lyapunov_from_norms, lyapunov_functional, GronwallReport};
pub use params::{admissible_parameters, is_admissible};
pub use wavenumber::{dissipation_wavenumber, wavenumber_from_linf, WavenumberReport};
