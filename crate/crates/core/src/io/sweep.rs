use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::format::fmt17;
use super::manifest::RunManifest;
use super::rundir::run_to_dir;
use crate::error::{Result, SqgError};
use crate::flux::{energy_balance_report, tail_correlation, TailCorrelationRow};
use crate::solver::{check_epsilons, pairwise_distances, DistanceRow, RunOptions, SolverConfig};

#[derive(Debug)]
pub struct SweepOutcome {
    pub run_dirs: Vec<PathBuf>,
    pub manifests: Vec<RunManifest>,
    pub distances: Vec<DistanceRow>,
    pub tails: Vec<TailCorrelationRow>,
}

/// Run one trajectory per ε into `dir/eps_<i>` and write `distances.csv`
/// (pairwise L² distances at matched snapshot times) and `tails.csv`
/// (energy-equality residual against the time-averaged tail surrogate).
pub fn sweep_to_dir(cfg: &SolverConfig, epsilons: &[f64], dir: &Path) -> Result<SweepOutcome> {
    check_epsilons(epsilons)?;
    cfg.validate()?;
    fs::create_dir_all(dir).map_err(|e| SqgError::io(dir, e))?;
    let opts = RunOptions {
        keep_samples: true,
        stop_after: None,
    };
    let results: Vec<_> = epsilons
        .par_iter()
        .enumerate()
        .map(|(i, &eps)| {
            let mut c = cfg.clone();
            c.epsilon = eps;
            let d = dir.join(format!("eps_{i}"));
            run_to_dir(&c, &d, &opts).map(|(t, m)| (d, t, m))
        })
        .collect::<Result<_>>()?;
    let mut run_dirs = Vec::new();
    let mut runs = Vec::new();
    let mut manifests = Vec::new();
    for (d, t, m) in results {
        run_dirs.push(d);
        runs.push(t);
        manifests.push(m);
    }
    let distances = pairwise_distances(&runs)?;
    let reports = runs
        .iter()
        .map(energy_balance_report)
        .collect::<Result<Vec<_>>>()?;
    let tails = tail_correlation(&reports);

    let mut s = String::from("i,j,epsilon_i,epsilon_j,step,t,distance\n");
    for r in &distances {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.i,
            r.j,
            fmt17(r.epsilon_i),
            fmt17(r.epsilon_j),
            r.step,
            fmt17(r.t),
            fmt17(r.distance)
        );
    }
    let p = dir.join("distances.csv");
    fs::write(&p, s).map_err(|e| SqgError::io(&p, e))?;

    let mut s = String::from("epsilon,tail_mean,relative_residual,pi_integral_below_top\n");
    for r in &tails {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt17(r.epsilon),
            fmt17(r.tail_mean),
            fmt17(r.relative_residual),
            fmt17(r.pi_integral_below_top)
        );
    }
    let p = dir.join("tails.csv");
    fs::write(&p, s).map_err(|e| SqgError::io(&p, e))?;

    Ok(SweepOutcome {
        run_dirs,
        manifests,
        distances,
        tails,
    })
}
