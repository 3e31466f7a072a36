use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::littlewood_paley::{check_shell, lambda, lambda_at_slot, BlockSet, DyadicProfile};
use crate::spectral::{dealiased_product, riesz_perp, weighted_energy, ScalarField, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxReport {
    pub q: i32,
    /// Π_Q = ∫(uθ)_{≤Q}·∇θ_{≤Q}, by Parseval.
    pub pi_q: f64,
    /// ∫(uθ)·∇(θ_{≤Q})_{≤Q} by grid quadrature; equal to `pi_q` up to round-off.
    pub pi_q_adjoint: f64,
    pub term_rq: f64,
    pub term_high: f64,
    /// ∫u_{≤Q}θ_{≤Q}·∇θ_{≤Q}, zero for divergence-free u.
    pub cancellation: f64,
    pub bound: f64,
    pub ratio: f64,
    /// ‖uθ‖₂‖∇θ‖₂, which bounds every term above.
    pub magnitude: f64,
}

impl FluxReport {
    /// Π_Q − term_rQ − term_high.
    pub fn decomposition_residual(&self) -> f64 {
        self.pi_q - self.term_rq - self.term_high
    }

    /// Relative residual of the two-term decomposition.
    pub fn relative_residual(&self) -> f64 {
        if self.magnitude > 0.0 {
            self.decomposition_residual().abs() / self.magnitude
        } else {
            self.decomposition_residual().abs()
        }
    }
}

/// One row of the flux table: (t, Q, Pi_Q, term_rQ, term_high, bound, ratio).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxRow {
    pub t: f64,
    pub q: i32,
    pub pi_q: f64,
    pub term_rq: f64,
    pub term_high: f64,
    pub bound: f64,
    pub ratio: f64,
}

impl FluxRow {
    pub fn new(t: f64, r: &FluxReport) -> Self {
        FluxRow {
            t,
            q: r.q,
            pi_q: r.pi_q,
            term_rq: r.term_rq,
            term_high: r.term_high,
            bound: r.bound,
            ratio: r.ratio,
        }
    }
}

/// Σ_{p=−1}^{q_max} λ_{|p−Q|}^{−1/2} λ_p ‖θ_p‖₂² from block L² norms.
pub fn bound_from_norms(l2_norms: &[f64], big_q: i32) -> f64 {
    l2_norms
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let p = i as i32 - 1;
            lambda((p - big_q).abs()).powf(-0.5) * lambda_at_slot(i) * n * n
        })
        .sum()
}

pub fn flux_bound(theta: &ScalarField, big_q: i32) -> Result<f64> {
    check_shell(theta.grid(), big_q)?;
    Ok(bound_from_norms(&BlockSet::new(theta).norms(2.0)?, big_q))
}

/// Shared state for evaluating the flux at several cutoffs of one field:
/// u = R^⊥θ and the dealiased products uθ are formed once.
pub struct FluxCalculator {
    theta: ScalarField,
    u: VectorField,
    flux: VectorField,
    l2_norms: Vec<f64>,
    profile: DyadicProfile,
    magnitude: f64,
}

impl FluxCalculator {
    pub fn new(theta: &ScalarField) -> Result<Self> {
        Self::with_block_norms(theta, BlockSet::new(theta).norms(2.0)?)
    }

    pub fn with_block_norms(theta: &ScalarField, l2_norms: Vec<f64>) -> Result<Self> {
        let u = riesz_perp(theta);
        let flux = VectorField {
            u1: dealiased_product(&u.u1, theta)?,
            u2: dealiased_product(&u.u2, theta)?,
        };
        let flux_l2 = weighted_energy(&flux.u1, |_| 1.0) + weighted_energy(&flux.u2, |_| 1.0);
        let grad_l2 = weighted_energy(theta, |k| k * k);
        Ok(FluxCalculator {
            l2_norms,
            theta: theta.clone(),
            u,
            flux,
            profile: DyadicProfile::default(),
            magnitude: (flux_l2 * grad_l2).sqrt(),
        })
    }

    pub fn q_max(&self) -> i32 {
        self.theta.grid().q_max()
    }

    fn low(&self, big_q: i32, r: f64) -> f64 {
        self.profile.low_pass_multiplier(big_q, r)
    }

    /// Σ_k m(|k|)·Re[(k·f̂)·conj(i θ̂)] normalized as a torus integral, i.e.
    /// ∫ f·∇θ_m for the field θ_m with coefficients m·θ̂.
    fn pair(&self, f: &VectorField, m: impl Fn(f64) -> f64) -> f64 {
        let g = self.theta.grid();
        let c = self.theta.coeffs();
        let (f1, f2) = (f.u1.coeffs(), f.u2.coeffs());
        let mut s = 0.0;
        for idx in 0..g.len() {
            if c[idx] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (k1, k2) = g.wavevector(idx);
            let w = m(((k1 * k1 + k2 * k2) as f64).sqrt());
            if w == 0.0 {
                continue;
            }
            let kf = f1[idx] * k1 as f64 + f2[idx] * k2 as f64;
            let ith = Complex64::new(-c[idx].im, c[idx].re);
            s += w * (kf * ith.conj()).re;
        }
        s * g.cell_area() / g.len() as f64
    }

    pub fn pi_q(&self, big_q: i32) -> f64 {
        self.pair(&self.flux, |r| {
            let l = self.low(big_q, r);
            l * l
        })
    }

    pub fn bound(&self, big_q: i32) -> f64 {
        bound_from_norms(&self.l2_norms, big_q)
    }

    /// Full decomposition at cutoff Q. `adjoint` also evaluates the
    /// physical-space form of Π_Q.
    pub fn report(&self, big_q: i32, adjoint: bool) -> Result<FluxReport> {
        check_shell(self.theta.grid(), big_q)?;
        let lo = |f: &ScalarField| f.apply_radial(|r| self.low(big_q, r));
        let hi = |f: &ScalarField| f.apply_radial(|r| 1.0 - self.low(big_q, r));
        let th_lo = lo(&self.theta);
        let th_hi = hi(&self.theta);
        let high = VectorField {
            u1: dealiased_product(&hi(&self.u.u1), &th_hi)?,
            u2: dealiased_product(&hi(&self.u.u2), &th_hi)?,
        };
        let low = VectorField {
            u1: dealiased_product(&lo(&self.u.u1), &th_lo)?,
            u2: dealiased_product(&lo(&self.u.u2), &th_lo)?,
        };
        let filtered = self.flux.map(|f| lo(f));
        let remainder = VectorField {
            u1: filtered.u1.add(&high.u1)?.sub(&low.u1)?,
            u2: filtered.u2.add(&high.u2)?.sub(&low.u2)?,
        };
        let single = |r: f64| self.low(big_q, r);
        let pi_q = self.pi_q(big_q);
        let term_rq = self.pair(&remainder, single);
        let term_high = -self.pair(&high, single);
        let cancellation = self.pair(&low, single);
        let pi_q_adjoint = if adjoint {
            let twice = self.theta.apply_radial(|r| {
                let l = self.low(big_q, r);
                l * l
            });
            let grad = crate::spectral::gradient(&twice);
            self.flux.u1.inner(&grad.u1)? + self.flux.u2.inner(&grad.u2)?
        } else {
            f64::NAN
        };
        let bound = self.bound(big_q);
        Ok(FluxReport {
            q: big_q,
            pi_q,
            pi_q_adjoint,
            term_rq,
            term_high,
            cancellation,
            bound,
            ratio: if bound > 0.0 { pi_q.abs() / bound } else { 0.0 },
            magnitude: self.magnitude,
        })
    }
}

/// Flux report at cutoff Q, with both forms of Π_Q evaluated.
pub fn energy_flux(theta: &ScalarField, big_q: i32) -> Result<FluxReport> {
    check_shell(theta.grid(), big_q)?;
    FluxCalculator::new(theta)?.report(big_q, true)
}
