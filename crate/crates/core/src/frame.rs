//! One time sample of every monitored quantity.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::flux::{FluxCalculator, FluxRow};
use crate::littlewood_paley::{besov_from_norms, tail_sequence, tail_surrogate, BlockSet};
use crate::regularity::{admissible_parameters, f_from_linf, wavenumber_from_linf};
use crate::solver::SolverConfig;
use crate::spectral::{sup_norm, weighted_energy, ScalarField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsFrame {
    pub step: u64,
    pub t: f64,
    /// ½‖θ‖₂²
    pub energy: f64,
    /// κ‖Λ^{α/2}θ‖₂²
    pub dissipation_kappa: f64,
    /// ε‖∇θ‖₂²
    pub dissipation_eps: f64,
    /// Sup norm of the interpolant, not just the grid maximum.
    pub linf: f64,
    pub mean: f64,
    #[serde(rename = "Q")]
    pub q: i32,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub resolved: bool,
    pub f: f64,
    /// Trapezoid ∫₀ᵗ f over the frames so far.
    pub f_integral: f64,
    /// ‖θ‖_{B^s_{l,l}} with (s, l) from the admissible pair for α; absent for α ≥ 1.
    pub besov_sll: Option<f64>,
    pub gronwall_ratio: Option<f64>,
    /// max of λ_q^{1/2}‖θ_q‖₂ over the top three shells.
    pub tail: f64,
    /// ‖θ_q‖₂ for q = −1..=q_max.
    pub shell_l2: Vec<f64>,
    /// Π_Q for Q = −1..=q_max.
    pub pi_q: Vec<f64>,
    /// Dyadic flux bound for Q = −1..=q_max.
    pub flux_bound: Vec<f64>,
}

/// Builds frames in time order, carrying the running ∫f and the initial
/// Besov norm needed by the Gronwall ratio.
#[derive(Debug, Clone)]
pub struct FrameBuilder {
    alpha: f64,
    kappa: f64,
    epsilon: f64,
    c0: f64,
    sl: Option<(f64, u32)>,
    flux_table: bool,
    prev: Option<(f64, f64, f64)>,
    besov0: Option<f64>,
}

impl FrameBuilder {
    pub fn new(cfg: &SolverConfig) -> Self {
        FrameBuilder {
            alpha: cfg.alpha,
            kappa: cfg.kappa,
            epsilon: cfg.epsilon,
            c0: cfg.c0,
            sl: admissible_parameters(cfg.alpha).ok(),
            flux_table: cfg.flux_table,
            prev: None,
            besov0: None,
        }
    }

    /// Continue after `last`, with `first` the frame at t = 0.
    pub fn resume(cfg: &SolverConfig, first: &DiagnosticsFrame, last: &DiagnosticsFrame) -> Self {
        let mut b = Self::new(cfg);
        b.besov0 = first.besov_sll;
        b.prev = Some((last.t, last.f, last.f_integral));
        b
    }

    /// The (s, l) pair used for `besov_sll`.
    pub fn besov_parameters(&self) -> Option<(f64, u32)> {
        self.sl
    }

    pub fn frame(
        &mut self,
        step: u64,
        t: f64,
        theta: &ScalarField,
    ) -> Result<(DiagnosticsFrame, Vec<FluxRow>)> {
        let blocks = BlockSet::new(theta);
        let linf_blocks = blocks.norms(f64::INFINITY)?;
        let shell_l2 = blocks.norms(2.0)?;
        let report = wavenumber_from_linf(&linf_blocks, self.alpha, self.kappa, self.c0);
        let f = f_from_linf(&linf_blocks, report.q);
        let f_integral = match self.prev {
            Some((tp, fp, ip)) => ip + 0.5 * (t - tp) * (f + fp),
            None => 0.0,
        };
        self.prev = Some((t, f, f_integral));

        let besov_sll = match self.sl {
            Some((s, l)) => Some(besov_from_norms(&blocks.norms(l as f64)?, s, l as f64)?),
            None => None,
        };
        if self.besov0.is_none() {
            self.besov0 = besov_sll;
        }
        let gronwall_ratio = match (besov_sll, self.besov0) {
            (Some(b), Some(b0)) if b0 > 0.0 => Some(b / (b0 * f_integral.exp())),
            _ => None,
        };

        let calc = FluxCalculator::with_block_norms(theta, shell_l2.clone())?;
        let shells: Vec<i32> = (-1..=calc.q_max()).collect();
        let pi_q = shells.iter().map(|&q| calc.pi_q(q)).collect();
        let flux_bound = shells.iter().map(|&q| calc.bound(q)).collect();
        let rows = if self.flux_table {
            shells
                .iter()
                .map(|&q| calc.report(q, false).map(|r| FluxRow::new(t, &r)))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };

        let alpha = self.alpha;
        let frame = DiagnosticsFrame {
            step,
            t,
            energy: 0.5 * weighted_energy(theta, |_| 1.0),
            dissipation_kappa: self.kappa * weighted_energy(theta, |k| k.powf(alpha)),
            dissipation_eps: self.epsilon * weighted_energy(theta, |k| k * k),
            linf: sup_norm(theta),
            mean: theta.mean(),
            q: report.q,
            lambda: report.lambda,
            resolved: report.resolved,
            f,
            f_integral,
            besov_sll,
            gronwall_ratio,
            tail: tail_surrogate(&tail_sequence(&shell_l2)),
            shell_l2,
            pi_q,
            flux_bound,
        };
        Ok((frame, rows))
    }
}
