//! Low-pass energy flux Π_Q, the mollification remainder r_Q, the two-term
//! flux decomposition, the dyadic flux bound and the energy-equality budget.

mod balance;
mod remainder;
mod report;

pub use balance::{
    energy_balance_report, low_mode_budget, tail_correlation, EnergyBalanceReport, LowModeBudget,
    TailCorrelationRow,
};
pub use remainder::{rq_remainder, rq_remainder_direct, DIRECT_MAX_N};
pub use report::{bound_from_norms, energy_flux, flux_bound, FluxCalculator, FluxReport, FluxRow};
