use serde::{Deserialize, Serialize};

use super::wavenumber::WavenumberReport;
use crate::error::{Result, SqgError};
use crate::littlewood_paley::{lambda_at_slot, BlockSet};
use crate::solver::Trajectory;
use crate::spectral::ScalarField;

/// f = sup_{−1 ≤ q ≤ Q} λ_q‖θ_q‖_∞, with λ_{−1} = 1/2.
pub fn criterion_f(theta: &ScalarField, report: &WavenumberReport) -> Result<f64> {
    let linf = BlockSet::new(theta).norms(f64::INFINITY)?;
    Ok(f_from_linf(&linf, report.q))
}

pub fn f_from_linf(linf: &[f64], q: i32) -> f64 {
    let top = ((q + 1).max(0) as usize).min(linf.len() - 1);
    linf[..=top]
        .iter()
        .enumerate()
        .map(|(i, n)| lambda_at_slot(i) * n)
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSeries {
    pub times: Vec<f64>,
    pub f_values: Vec<f64>,
    /// Trapezoid ∫f dt over the frame times.
    pub integral: f64,
    pub q_series: Vec<i32>,
    /// Indices of frames whose dissipation wavenumber was not certified.
    pub unresolved_frames: Vec<usize>,
}

pub fn trapezoid(t: &[f64], y: &[f64]) -> f64 {
    t.windows(2)
        .zip(y.windows(2))
        .map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1]))
        .sum()
}

/// Running trapezoid integral, starting at 0.
pub fn cumulative_trapezoid(t: &[f64], y: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(t.len());
    for i in 0..t.len() {
        if i > 0 {
            acc += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
        }
        out.push(acc);
    }
    out
}

/// Running integral that integrates the cubic through four neighbouring
/// samples over each interval; fourth-order on non-uniform times. Falls back
/// to the trapezoid rule below four samples.
pub fn cumulative_cubic(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len().min(y.len());
    if n < 4 {
        return cumulative_trapezoid(&t[..n], &y[..n]);
    }
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    for i in 0..n - 1 {
        let j0 = i.saturating_sub(1).min(n - 4);
        let h = t[i + 1] - t[i];
        let x: Vec<f64> = (j0..j0 + 4).map(|j| (t[j] - t[i]) / h).collect();
        // Newton divided differences, then expand to monomials in x.
        let mut c: Vec<f64> = y[j0..j0 + 4].to_vec();
        for k in 1..4 {
            for m in (k..4).rev() {
                c[m] = (c[m] - c[m - 1]) / (x[m] - x[m - k]);
            }
        }
        let mut poly = vec![c[3]];
        for k in (0..3).rev() {
            let mut next = vec![0.0; poly.len() + 1];
            for (m, a) in poly.iter().enumerate() {
                next[m + 1] += a;
                next[m] -= a * x[k];
            }
            next[0] += c[k];
            poly = next;
        }
        let integral: f64 = poly
            .iter()
            .enumerate()
            .map(|(m, a)| a / (m + 1) as f64)
            .sum();
        acc += h * integral;
        out.push(acc);
    }
    out
}

pub(crate) fn need_frames(traj: &Trajectory, k: usize) -> Result<()> {
    if traj.frames.len() < k {
        return Err(SqgError::OutOfRange(format!(
            "need at least {k} diagnostics frames, trajectory has {}",
            traj.frames.len()
        )));
    }
    Ok(())
}

pub fn criterion_integral(traj: &Trajectory) -> Result<CriterionSeries> {
    need_frames(traj, 2)?;
    let times: Vec<f64> = traj.frames.iter().map(|f| f.t).collect();
    let f_values: Vec<f64> = traj.frames.iter().map(|f| f.f).collect();
    Ok(CriterionSeries {
        integral: trapezoid(&times, &f_values),
        q_series: traj.frames.iter().map(|f| f.q).collect(),
        unresolved_frames: traj
            .frames
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.resolved)
            .map(|(i, _)| i)
            .collect(),
        times,
        f_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::lambda;
    use crate::regularity::dissipation_wavenumber;
    use crate::spectral::GridSpec;

    #[test]
    fn zero_and_homogeneity() {
        let g = GridSpec::new(64).unwrap();
        let z = ScalarField::zeros(g);
        let r = dissipation_wavenumber(&z, 0.5, 1.0, 0.01).unwrap();
        assert_eq!(criterion_f(&z, &r).unwrap(), 0.0);

        let th = ScalarField::from_fn(g, |x, y| (x + 2.0 * y).sin() + 0.3 * (5.0 * x).cos());
        let r = dissipation_wavenumber(&th, 0.5, 1.0, 0.01).unwrap();
        let f1 = criterion_f(&th, &r).unwrap();
        let f2 = criterion_f(&th.scale(2.0), &r).unwrap();
        assert!((f2 - 2.0 * f1).abs() < 1e-13 * f1);
    }

    #[test]
    fn shell_two_block_brute_force() {
        let g = GridSpec::new(64).unwrap();
        // |k| = 4 sits where φ_2 = 1, so the block is the field itself.
        let th = ScalarField::from_fn(g, |x, _| 0.5 * (4.0 * x).cos());
        let blocks = BlockSet::new(&th);
        let oracle = (-1..=3)
            .map(|q| {
                let sup = blocks
                    .block(q)
                    .values()
                    .iter()
                    .fold(0.0f64, |m, v| m.max(v.abs()));
                lambda(q) * sup
            })
            .fold(0.0, f64::max);
        let report = WavenumberReport {
            q: 3,
            lambda: 8.0,
            resolved: true,
            witness: vec![],
            threshold: 0.01,
        };
        let f = criterion_f(&th, &report).unwrap();
        assert!((f - oracle).abs() < 1e-14);
        assert!((f - 2.0).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_additive() {
        let t: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = t.iter().map(|t| (3.0 * t).exp()).collect();
        let whole = trapezoid(&t, &y);
        let split = trapezoid(&t[..5], &y[..5]) + trapezoid(&t[4..], &y[4..]);
        assert!((whole - split).abs() < 1e-14 * whole);
        let c = cumulative_trapezoid(&t, &y);
        assert_eq!(c[0], 0.0);
        assert!((c[10] - whole).abs() < 1e-14 * whole);
    }

    #[test]
    fn cubic_rule_exact_for_cubics_on_uneven_times() {
        let t = [0.0, 0.1, 0.35, 0.4, 0.7, 1.0, 1.05];
        let y: Vec<f64> = t
            .iter()
            .map(|x| 1.0 - 2.0 * x + 3.0 * x * x - 4.0 * x * x * x)
            .collect();
        let exact = |x: f64| x - x * x + x * x * x - x.powi(4);
        for (c, &x) in cumulative_cubic(&t, &y).iter().zip(&t) {
            assert!((c - exact(x)).abs() < 1e-14, "{c} vs {}", exact(x));
        }
    }

    #[test]
    fn cubic_rule_fourth_order() {
        let err = |n: usize| {
            let t: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
            let y: Vec<f64> = t.iter().map(|x| (3.0 * x).exp()).collect();
            (cumulative_cubic(&t, &y)[n] - ((3.0f64).exp() - 1.0) / 3.0).abs()
        };
        let order = (err(80) / err(160)).log2();
        assert!(order > 3.9, "{order}");
    }
}
