use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::run::{run_with, RunOptions, Trajectory};
use crate::error::{Result, SqgError};
use crate::spectral::lp_norm;

/// ‖θ_{ε_i}(t) − θ_{ε_j}(t)‖₂ at one shared sample time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub i: usize,
    pub j: usize,
    pub epsilon_i: f64,
    pub epsilon_j: f64,
    pub step: u64,
    pub t: f64,
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct ViscositySequence {
    pub epsilons: Vec<f64>,
    pub runs: Vec<Trajectory>,
    pub distances: Vec<DistanceRow>,
}

impl ViscositySequence {
    /// Distances between neighbours ε_i, ε_{i+1} at each shared time, as
    /// `[pair][time]`.
    pub fn consecutive_distances(&self) -> Vec<Vec<f64>> {
        (0..self.epsilons.len().saturating_sub(1))
            .map(|i| {
                self.distances
                    .iter()
                    .filter(|r| r.i == i && r.j == i + 1)
                    .map(|r| r.distance)
                    .collect()
            })
            .collect()
    }
}

pub fn check_epsilons(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(SqgError::OutOfRange("empty epsilon list".into()));
    }
    if eps.iter().any(|e| !(*e >= 0.0 && e.is_finite())) {
        return Err(SqgError::OutOfRange(format!(
            "epsilons must be finite and non-negative: {eps:?}"
        )));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SqgError::OutOfRange(format!(
            "epsilons must be strictly decreasing: {eps:?}"
        )));
    }
    Ok(())
}

/// One run per ε from the shared θ₀, with all pairwise L² distances at the
/// snapshot times common to every run.
pub fn viscosity_sequence(cfg: &SolverConfig, epsilons: &[f64]) -> Result<ViscositySequence> {
    check_epsilons(epsilons)?;
    let opts = RunOptions {
        keep_samples: true,
        stop_after: None,
    };
    let runs = epsilons
        .par_iter()
        .map(|&eps| {
            let mut c = cfg.clone();
            c.epsilon = eps;
            run_with(&c, &opts, &mut [])
        })
        .collect::<Result<Vec<_>>>()?;
    let distances = pairwise_distances(&runs)?;
    Ok(ViscositySequence {
        epsilons: epsilons.to_vec(),
        runs,
        distances,
    })
}

/// ‖θ_i − θ_j‖₂ for every pair of runs at every snapshot step they share.
pub fn pairwise_distances(runs: &[Trajectory]) -> Result<Vec<DistanceRow>> {
    let mut distances = Vec::new();
    for i in 0..runs.len() {
        for j in (i + 1)..runs.len() {
            for a in &runs[i].samples {
                let Some(b) = runs[j].sample_at_step(a.step) else {
                    continue;
                };
                distances.push(DistanceRow {
                    i,
                    j,
                    epsilon_i: runs[i].config.epsilon,
                    epsilon_j: runs[j].config.epsilon,
                    step: a.step,
                    t: a.t,
                    distance: lp_norm(&a.field.sub(&b.field)?, 2.0)?,
                });
            }
        }
    }
    Ok(distances)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::config::{InitialCondition, TimeStep};
    use crate::spectral::GridSpec;

    fn cfg() -> SolverConfig {
        let mut c = SolverConfig::new(
            GridSpec::new(32).unwrap(),
            InitialCondition::SingleMode {
                k1: 2,
                k2: 1,
                amplitude: 1.0,
            },
        );
        c.dt = TimeStep::Fixed(0.02);
        c.t_end = 0.1;
        c
    }

    #[test]
    fn validation() {
        assert!(check_epsilons(&[1e-2, 5e-3, 0.0]).is_ok());
        assert!(check_epsilons(&[1e-2, 1e-2]).is_err());
        assert!(check_epsilons(&[1e-3, 1e-2]).is_err());
        assert!(check_epsilons(&[-1.0]).is_err());
        assert!(check_epsilons(&[]).is_err());
    }

    #[test]
    fn single_epsilon_has_no_distances() {
        let seq = viscosity_sequence(&cfg(), &[1e-2]).unwrap();
        assert_eq!(seq.runs.len(), 1);
        assert!(seq.distances.is_empty());
    }

    #[test]
    fn zero_epsilon_flagged() {
        let seq = viscosity_sequence(&cfg(), &[1e-2, 0.0]).unwrap();
        assert!(seq.runs[1]
            .warnings
            .iter()
            .any(|w| w.contains("unregularized")));
        assert!(!seq.distances.is_empty());
    }
}
