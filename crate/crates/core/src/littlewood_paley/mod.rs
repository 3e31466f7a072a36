//! Smooth dyadic (Littlewood–Paley) decomposition on the torus.
//!
//! Blocks use λ_q = 2^q. The top shell is q_max = ⌊log₂ k_cut⌋; together the
//! blocks −1..=q_max reproduce every field supported in the dealiased disc.

mod besov;
mod blocks;
mod bony;
mod estimates;
mod profile;

pub use besov::{
    besov_from_norms, besov_norm, c_natural_tail, tail_sequence, tail_surrogate, TAIL_SHELLS,
};
pub use blocks::{high_pass, low_pass, low_pass_vec, project_block, project_block_vec, BlockSet};
pub use bony::{bony_decompose, commutator, BonySplit};
pub use estimates::{
    alias_free_size, bernstein_ratio, dissipation_ratio, low_mode_transport_integral,
    max_component_frequency, TransportIntegral,
};
pub use profile::{lambda, make_profile, smooth_step, DyadicProfile};

pub(crate) use blocks::{check_shell, lambda_at_slot};
