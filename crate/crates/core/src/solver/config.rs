use serde::{Deserialize, Serialize};

use crate::error::{Result, SqgError};
use crate::spectral::{riesz_perp, GridSpec, ScalarField};

/// One Gaussian bump of a `GaussianBlobs` initial condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Blob {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialCondition {
    /// amplitude·cos(k·x)
    SingleMode { k1: i64, k2: i64, amplitude: f64 },
    /// Random phases with |θ̂(k)| ∝ |k|^{−β/2} on k_min ≤ |k| ≤ k_max,
    /// rescaled so the root-mean-square of θ equals `amplitude`.
    RandomSpectrum {
        beta: f64,
        k_min: f64,
        k_max: f64,
        amplitude: f64,
        seed: u64,
    },
    /// Periodized Gaussians, truncated to the dealiased band.
    GaussianBlobs { blobs: Vec<Blob> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeStep {
    /// 0.5/(N·max|u₀|), fixed for the whole run.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub alpha: f64,
    pub kappa: f64,
    pub epsilon: f64,
    pub grid: GridSpec,
    pub dt: TimeStep,
    pub t_end: f64,
    pub c0: f64,
    pub ic: InitialCondition,
    pub snapshot_every: u64,
    pub diagnostics_every: u64,
    /// Switch for the nonlinear term; off gives the pure linear flow.
    pub advection: bool,
    /// Emit the per-Q flux decomposition table at every diagnostics frame.
    pub flux_table: bool,
}

/// Step count and uniform step actually used by a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub dt: f64,
    pub steps: u64,
}

impl Schedule {
    pub fn time(&self, step: u64) -> f64 {
        step as f64 * self.dt
    }
}

impl SolverConfig {
    /// Defaults for everything except the grid and initial condition.
    pub fn new(grid: GridSpec, ic: InitialCondition) -> Self {
        SolverConfig {
            alpha: 0.5,
            kappa: 1.0,
            epsilon: 0.0,
            grid,
            dt: TimeStep::Auto,
            t_end: 1.0,
            c0: 0.01,
            ic,
            snapshot_every: 50,
            diagnostics_every: 10,
            advection: true,
            flux_table: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SqgError::OutOfRange(m));
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return bad(format!("alpha must lie in (0, 2], got {}", self.alpha));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return bad(format!("kappa must be positive, got {}", self.kappa));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            ));
        }
        if let TimeStep::Fixed(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("dt must be positive, got {dt}"));
            }
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be non-negative, got {}", self.t_end));
        }
        if !(self.c0 > 0.0 && self.c0.is_finite()) {
            return bad(format!("c0 must be positive, got {}", self.c0));
        }
        if self.snapshot_every == 0 || self.diagnostics_every == 0 {
            return bad("snapshot_every and diagnostics_every must be at least 1".into());
        }
        Ok(())
    }

    /// α > 1 is accepted but lies outside the supercritical/critical range.
    pub fn is_subcritical(&self) -> bool {
        self.alpha > 1.0
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.is_subcritical() {
            w.push(format!("subcritical: alpha = {} > 1", self.alpha));
        }
        if self.epsilon == 0.0 {
            w.push("unregularized: epsilon = 0".to_string());
        }
        w
    }

    /// Resolve the time step against θ₀. The step is shrunk so that an integer
    /// number of uniform steps lands exactly on t_end.
    pub fn schedule(&self, theta0: &ScalarField) -> Schedule {
        let raw = match self.dt {
            TimeStep::Fixed(dt) => dt,
            TimeStep::Auto => {
                let u = riesz_perp(theta0);
                let umax =
                    u.u1.values()
                        .iter()
                        .zip(u.u2.values())
                        .fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b)));
                // A motionless field has no advective limit; fall back to u = 1.
                let umax = if umax > 1e-12 { umax } else { 1.0 };
                0.5 / (self.grid.n() as f64 * umax)
            }
        };
        if self.t_end == 0.0 {
            return Schedule { dt: raw, steps: 0 };
        }
        let ratio = self.t_end / raw;
        let steps = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) {
            ratio.round()
        } else {
            ratio.ceil()
        }
        .max(1.0) as u64;
        Schedule {
            dt: self.t_end / steps as f64,
            steps,
        }
    }
}
