use serde::{Deserialize, Serialize};

use crate::error::{Result, SqgError};
use crate::littlewood_paley::{lambda, lambda_at_slot, BlockSet};
use crate::spectral::ScalarField;

/// Dissipation wavenumber Λ = λ_Q: the smallest dyadic scale (Q ≥ 1) above
/// which every resolved block satisfies λ_p^{1−α}‖θ_p‖_∞ < c₀κ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavenumberReport {
    pub q: i32,
    pub lambda: f64,
    /// False when the top resolved shell itself violates the threshold, so the
    /// grid cannot certify where dissipation takes over.
    pub resolved: bool,
    /// λ_p^{1−α}‖θ_p‖_∞ for p = −1..=q_max.
    pub witness: Vec<f64>,
    pub threshold: f64,
}

pub(crate) fn check_params(alpha: f64, kappa: f64, c0: f64) -> Result<()> {
    if !(kappa > 0.0) || !(c0 > 0.0) || !(alpha > 0.0) {
        return Err(SqgError::OutOfRange(format!(
            "need alpha, kappa, c0 > 0; got alpha={alpha}, kappa={kappa}, c0={c0}"
        )));
    }
    Ok(())
}

pub fn dissipation_wavenumber(
    theta: &ScalarField,
    alpha: f64,
    kappa: f64,
    c0: f64,
) -> Result<WavenumberReport> {
    check_params(alpha, kappa, c0)?;
    let linf = BlockSet::new(theta).norms(f64::INFINITY)?;
    Ok(wavenumber_from_linf(&linf, alpha, kappa, c0))
}

/// Same as [`dissipation_wavenumber`] from block sup-norms (slot 0 is q = −1).
pub fn wavenumber_from_linf(linf: &[f64], alpha: f64, kappa: f64, c0: f64) -> WavenumberReport {
    let threshold = c0 * kappa;
    let witness: Vec<f64> = linf
        .iter()
        .enumerate()
        .map(|(i, n)| lambda_at_slot(i).powf(1.0 - alpha) * n)
        .collect();
    let q_max = linf.len() as i32 - 2;
    let slot = |p: i32| (p + 1) as usize;
    // Largest shell that breaks the threshold; Q sits there (or at 1).
    let last_violation = (1..=q_max).rev().find(|&p| witness[slot(p)] >= threshold);
    let q = last_violation.unwrap_or(1).max(1);
    WavenumberReport {
        q,
        lambda: lambda(q),
        resolved: witness[slot(q_max)] < threshold,
        witness,
        threshold,
    }
}
