use serde::{Deserialize, Serialize};

use super::report::FluxCalculator;
use crate::error::{Result, SqgError};
use crate::littlewood_paley::DyadicProfile;
use crate::regularity::{cumulative_cubic, trapezoid};
use crate::solver::Trajectory;
use crate::spectral::{weighted_energy, ScalarField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyBalanceReport {
    pub epsilon: f64,
    pub initial_energy: f64,
    pub final_energy: f64,
    /// ∫₀ᵀ κ‖Λ^{α/2}θ‖₂² dt
    pub dissipation_kappa: f64,
    /// ∫₀ᵀ ε‖∇θ‖₂² dt
    pub dissipation_eps: f64,
    /// |E(T) + ∫D − E(0)|, with ∫D from the four-point cubic rule.
    pub residual: f64,
    pub relative_residual: f64,
    /// Largest |E(t) + ∫₀ᵗD − E(0)| / E(0) over all frames.
    pub max_relative_residual: f64,
    pub energy_monotone: bool,
    /// ∫₀ᵀ|Π_Q| dt for Q = −1..=q_max.
    pub pi_integrals: Vec<f64>,
    /// Tail surrogate per frame and its time average.
    pub tail_series: Vec<f64>,
    pub tail_mean: f64,
}

impl EnergyBalanceReport {
    pub fn pi_integral(&self, big_q: i32) -> f64 {
        self.pi_integrals[(big_q + 1) as usize]
    }
}

pub fn energy_balance_report(traj: &Trajectory) -> Result<EnergyBalanceReport> {
    let frames = &traj.frames;
    if frames.len() < 2 {
        return Err(SqgError::OutOfRange(format!(
            "energy balance needs at least 2 frames, got {}",
            frames.len()
        )));
    }
    let t: Vec<f64> = frames.iter().map(|f| f.t).collect();
    let e: Vec<f64> = frames.iter().map(|f| f.energy).collect();
    let dk: Vec<f64> = frames.iter().map(|f| f.dissipation_kappa).collect();
    let de: Vec<f64> = frames.iter().map(|f| f.dissipation_eps).collect();
    let total: Vec<f64> = dk.iter().zip(&de).map(|(a, b)| a + b).collect();
    let cum = cumulative_cubic(&t, &total);
    let e0 = e[0];
    let last = e.len() - 1;
    let residual = (e[last] + cum[last] - e0).abs();
    let rel = |r: f64| if e0 > 0.0 { r / e0 } else { r };
    let max_relative_residual = e
        .iter()
        .zip(&cum)
        .map(|(ei, ci)| rel((ei + ci - e0).abs()))
        .fold(0.0, f64::max);
    let shells = frames.iter().map(|f| f.pi_q.len()).min().unwrap_or(0);
    let pi_integrals = (0..shells)
        .map(|i| {
            let y: Vec<f64> = frames.iter().map(|f| f.pi_q[i].abs()).collect();
            trapezoid(&t, &y)
        })
        .collect();
    let tail_series: Vec<f64> = frames.iter().map(|f| f.tail).collect();
    let span = t[last] - t[0];
    let tail_mean = if span > 0.0 {
        trapezoid(&t, &tail_series) / span
    } else {
        tail_series[0]
    };
    Ok(EnergyBalanceReport {
        epsilon: traj.config.epsilon,
        initial_energy: e0,
        final_energy: e[last],
        dissipation_kappa: cumulative_cubic(&t, &dk)[last],
        dissipation_eps: cumulative_cubic(&t, &de)[last],
        residual,
        relative_residual: rel(residual),
        max_relative_residual,
        energy_monotone: e.windows(2).all(|w| w[1] <= w[0]),
        pi_integrals,
        tail_series,
        tail_mean,
    })
}

/// One line of the cross-run table relating tail decay to the flux.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCorrelationRow {
    pub epsilon: f64,
    pub tail_mean: f64,
    pub relative_residual: f64,
    /// ∫₀ᵀ|Π_{q_max−1}| dt
    pub pi_integral_below_top: f64,
}

/// Rows sorted by decreasing tail surrogate.
pub fn tail_correlation(reports: &[EnergyBalanceReport]) -> Vec<TailCorrelationRow> {
    let mut rows: Vec<TailCorrelationRow> = reports
        .iter()
        .map(|r| TailCorrelationRow {
            epsilon: r.epsilon,
            tail_mean: r.tail_mean,
            relative_residual: r.relative_residual,
            pi_integral_below_top: r
                .pi_integrals
                .len()
                .checked_sub(2)
                .map(|i| r.pi_integrals[i])
                .unwrap_or(0.0),
        })
        .collect();
    rows.sort_by(|a, b| b.tail_mean.total_cmp(&a.tail_mean));
    rows
}

/// Filtered-energy budget d/dt ½‖θ_{≤Q}‖₂² = Π_Q − κ‖Λ^{α/2}θ_{≤Q}‖₂² − ε‖∇θ_{≤Q}‖₂²
/// checked on stored samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowModeBudget {
    pub q: i32,
    pub times: Vec<f64>,
    pub filtered_energy: Vec<f64>,
    pub rhs: Vec<f64>,
    /// Per Simpson panel: |ΔE − ∫rhs| / ∫(|Π_Q| + dissipation).
    pub relative_residuals: Vec<f64>,
    pub max_relative_residual: f64,
}

pub fn low_mode_budget(traj: &Trajectory, big_q: i32) -> Result<LowModeBudget> {
    let cfg = &traj.config;
    crate::littlewood_paley::check_shell(&cfg.grid, big_q)?;
    let samples = &traj.samples;
    if samples.len() < 3 {
        return Err(SqgError::OutOfRange(format!(
            "budget check needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    let profile = DyadicProfile::default();
    let mut times = Vec::new();
    let mut energy = Vec::new();
    let mut rhs = Vec::new();
    let mut size = Vec::new();
    for s in samples {
        let filtered: ScalarField = s
            .field
            .apply_radial(|r| profile.low_pass_multiplier(big_q, r));
        let e = 0.5 * weighted_energy(&filtered, |_| 1.0);
        let dk = cfg.kappa * weighted_energy(&filtered, |k| k.powf(cfg.alpha));
        let de = cfg.epsilon * weighted_energy(&filtered, |k| k * k);
        let pi = if cfg.advection {
            FluxCalculator::new(&s.field)?.pi_q(big_q)
        } else {
            0.0
        };
        times.push(s.t);
        energy.push(e);
        rhs.push(pi - dk - de);
        size.push(pi.abs() + dk + de);
    }
    let mut rel = Vec::new();
    let mut i = 0;
    while i + 2 < times.len() {
        let h = 0.5 * (times[i + 2] - times[i]);
        let simpson = |y: &[f64]| h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
        let delta = energy[i + 2] - energy[i];
        let scale = simpson(&size);
        let r = (delta - simpson(&rhs)).abs();
        rel.push(if scale > 0.0 { r / scale } else { r });
        i += 2;
    }
    Ok(LowModeBudget {
        q: big_q,
        max_relative_residual: rel.iter().copied().fold(0.0, f64::max),
        relative_residuals: rel,
        times,
        filtered_energy: energy,
        rhs,
    })
}
