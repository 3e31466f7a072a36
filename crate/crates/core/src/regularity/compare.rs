use serde::{Deserialize, Serialize};

use super::criterion::{need_frames, trapezoid};
use crate::error::{Result, SqgError};
use crate::littlewood_paley::besov_norm;
use crate::solver::Trajectory;

/// γ = 2/p + 1 − α + α/s.
pub fn prodi_serrin_gamma(s: f64, p: f64, alpha: f64) -> f64 {
    2.0 / p + 1.0 - alpha + alpha / s
}

fn check(s: f64, p: f64) -> Result<()> {
    if !(s >= 1.0 && s.is_finite()) {
        return Err(SqgError::OutOfRange(format!("need 1 ≤ s < ∞, got s = {s}")));
    }
    if !(p > 2.0) {
        return Err(SqgError::OutOfRange(format!("need 2 < p ≤ ∞, got p = {p}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProdiSerrin {
    /// (∫‖θ‖_{B^γ_{p,∞}}^s dt)^{1/s}
    pub norm: f64,
    pub gamma: f64,
}

/// L^s(0,T; B^γ_{p,∞}) norm over the stored samples (trapezoid in time).
pub fn prodi_serrin_norm(traj: &Trajectory, s: f64, p: f64, alpha: f64) -> Result<ProdiSerrin> {
    check(s, p)?;
    let gamma = prodi_serrin_gamma(s, p, alpha);
    let mut t = Vec::with_capacity(traj.samples.len());
    let mut y = Vec::with_capacity(traj.samples.len());
    for sample in &traj.samples {
        t.push(sample.t);
        y.push(besov_norm(&sample.field, gamma, p, f64::INFINITY)?.powf(s));
    }
    Ok(ProdiSerrin {
        norm: trapezoid(&t, &y).powf(1.0 / s),
        gamma,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub s: f64,
    pub p: f64,
    pub gamma: f64,
    pub f_integral: f64,
    /// ∫ f over U = {t : Λ(t) > 2}.
    pub f_integral_u: f64,
    /// Prodi–Serrin norm raised to the power s.
    pub norm_pow_s: f64,
    /// ∫_U f / norm^s; zero when U is empty.
    pub ratio: f64,
    /// Fraction of frames that lie in U.
    pub u_fraction: f64,
    pub all_resolved: bool,
}

pub fn compare_criteria(traj: &Trajectory, s: f64, p: f64) -> Result<CompareReport> {
    check(s, p)?;
    need_frames(traj, 2)?;
    let ps = prodi_serrin_norm(traj, s, p, traj.config.alpha)?;
    let t: Vec<f64> = traj.frames.iter().map(|f| f.t).collect();
    let f: Vec<f64> = traj.frames.iter().map(|f| f.f).collect();
    let fu: Vec<f64> = traj
        .frames
        .iter()
        .map(|fr| if fr.lambda > 2.0 { fr.f } else { 0.0 })
        .collect();
    let f_integral_u = trapezoid(&t, &fu);
    let norm_pow_s = ps.norm.powf(s);
    let ratio = if f_integral_u == 0.0 {
        0.0
    } else {
        f_integral_u / norm_pow_s
    };
    let in_u = traj.frames.iter().filter(|fr| fr.lambda > 2.0).count();
    Ok(CompareReport {
        s,
        p,
        gamma: ps.gamma,
        f_integral: trapezoid(&t, &f),
        f_integral_u,
        norm_pow_s,
        ratio,
        u_fraction: in_u as f64 / traj.frames.len() as f64,
        all_resolved: traj.frames.iter().all(|fr| fr.resolved),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!((prodi_serrin_gamma(2.0, 4.0, 0.5) - 1.25).abs() < 1e-15);
        assert!((prodi_serrin_gamma(1.0, f64::INFINITY, 0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parameter_ranges() {
        assert!(check(0.5, 4.0).is_err());
        assert!(check(2.0, 2.0).is_err());
        assert!(check(2.0, f64::INFINITY).is_ok());
        assert!(check(f64::INFINITY, 4.0).is_err());
    }
}
