use serde::{Deserialize, Serialize};

use super::criterion::cumulative_trapezoid;
use crate::error::{Result, SqgError};
use crate::littlewood_paley::{besov_from_norms, lambda_at_slot, BlockSet};
use crate::solver::Trajectory;
use crate::spectral::ScalarField;

fn check_l(l: u32) -> Result<()> {
    if l < 4 || !l.is_multiple_of(2) {
        return Err(SqgError::OutOfRange(format!(
            "l must be even and ≥ 4, got {l}"
        )));
    }
    Ok(())
}

/// Σ_{q=−1}^{q_max} λ_q^{sl}‖θ_q‖_l^l.
pub fn lyapunov_functional(theta: &ScalarField, s: f64, l: u32) -> Result<f64> {
    check_l(l)?;
    let norms = BlockSet::new(theta).norms(l as f64)?;
    Ok(lyapunov_from_norms(&norms, s, l))
}

pub fn lyapunov_from_norms(l_norms: &[f64], s: f64, l: u32) -> f64 {
    let lf = l as f64;
    l_norms
        .iter()
        .enumerate()
        .map(|(i, n)| lambda_at_slot(i).powf(s * lf) * n.powi(l as i32))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GronwallReport {
    pub s: f64,
    pub l: u32,
    pub times: Vec<f64>,
    /// ‖θ(t)‖_{B^s_{l,l}} / (‖θ₀‖_{B^s_{l,l}}·exp ∫₀ᵗ f); empty when undefined.
    pub ratios: Vec<f64>,
    pub max_ratio: Option<f64>,
    pub initial_norm: f64,
    /// False when ‖θ₀‖_{B^s_{l,l}} = 0 and the ratio has no meaning.
    pub defined: bool,
}

/// Ratio of the B^s_{l,l} norm to its Gronwall envelope at every stored
/// sample. ∫f is accumulated over the diagnostics frames, which include every
/// sample step.
pub fn gronwall_monitor(traj: &Trajectory, s: f64, l: u32) -> Result<GronwallReport> {
    check_l(l)?;
    let ft: Vec<f64> = traj.frames.iter().map(|f| f.t).collect();
    let fv: Vec<f64> = traj.frames.iter().map(|f| f.f).collect();
    let integral = cumulative_trapezoid(&ft, &fv);
    let mut times = Vec::new();
    let mut norms = Vec::new();
    let mut exps = Vec::new();
    for sample in &traj.samples {
        let i = traj
            .frames
            .iter()
            .position(|f| f.step == sample.step)
            .ok_or_else(|| {
                SqgError::Schema(format!(
                    "no diagnostics frame at sample step {}",
                    sample.step
                ))
            })?;
        let blocks = BlockSet::new(&sample.field).norms(l as f64)?;
        times.push(sample.t);
        norms.push(besov_from_norms(&blocks, s, l as f64)?);
        exps.push(integral[i].exp());
    }
    let initial_norm = norms.first().copied().unwrap_or(0.0);
    let defined = initial_norm > 0.0;
    let ratios: Vec<f64> = if defined {
        norms
            .iter()
            .zip(&exps)
            .map(|(n, e)| n / (initial_norm * e))
            .collect()
    } else {
        Vec::new()
    };
    Ok(GronwallReport {
        s,
        l,
        times,
        max_ratio: ratios.iter().copied().reduce(f64::max),
        ratios,
        initial_norm,
        defined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::{besov_norm, lambda};
    use crate::spectral::{lp_norm, GridSpec};

    #[test]
    fn zero_scaling_and_brute_force() {
        let g = GridSpec::new(64).unwrap();
        assert_eq!(
            lyapunov_functional(&ScalarField::zeros(g), 0.875, 6).unwrap(),
            0.0
        );
        let th = ScalarField::from_fn(g, |x, y| (8.0 * x).cos() + 0.2 * (3.0 * y).sin());
        let v = lyapunov_functional(&th, 0.875, 6).unwrap();
        let scaled = lyapunov_functional(&th.scale(-1.5), 0.875, 6).unwrap();
        assert!((scaled - 1.5f64.powi(6) * v).abs() < 1e-11 * scaled);

        let blocks = BlockSet::new(&th);
        let oracle: f64 = (-1..=g.q_max())
            .map(|q| lambda(q).powf(0.875 * 6.0) * lp_norm(blocks.block(q), 6.0).unwrap().powi(6))
            .sum();
        assert!((v - oracle).abs() < 1e-12 * oracle);
    }

    #[test]
    fn positive_shells_match_besov() {
        let g = GridSpec::new(64).unwrap();
        let th = ScalarField::from_fn(g, |x, y| (x + y).cos() + (6.0 * x - 2.0 * y).sin());
        let (s, l) = (0.8, 4);
        let norms = BlockSet::new(&th).norms(4.0).unwrap();
        let functional = lyapunov_from_norms(&norms, s, l);
        let low = lambda(-1).powf(s * 4.0) * norms[0].powi(4);
        let besov = besov_norm(&th, s, 4.0, 4.0).unwrap();
        let tail = (besov - norms[0]).powi(4);
        assert!((functional - low - tail).abs() < 1e-12 * functional);
    }

    #[test]
    fn rejects_odd_l() {
        let g = GridSpec::new(16).unwrap();
        assert!(lyapunov_functional(&ScalarField::zeros(g), 0.5, 5).is_err());
        assert!(lyapunov_functional(&ScalarField::zeros(g), 0.5, 2).is_err());
    }
}
