//! Paraproduct splitting of the advection term and the block commutator.

use super::blocks::{block_or_zero, check_shell, low_pass_or_zero, project_block};
use crate::error::Result;
use crate::spectral::{advect, ScalarField, VectorField};

/// The three paraproduct pieces of Δ_q(u·∇θ).
#[derive(Debug, Clone)]
pub struct BonySplit {
    /// Σ_{|q−p|≤2} Δ_q(u_{≤p−2}·∇θ_p)
    pub low_high: ScalarField,
    /// Σ_{|q−p|≤2} Δ_q(u_p·∇θ_{≤p−2})
    pub high_low: ScalarField,
    /// Σ_{p≥q−2} Δ_q(u_p·∇θ̃_p), θ̃_p = θ_{p−1} + θ_p + θ_{p+1}
    pub high_high: ScalarField,
}

impl BonySplit {
    pub fn sum(&self) -> ScalarField {
        self.low_high
            .add(&self.high_low)
            .and_then(|s| s.add(&self.high_high))
            .expect("terms share a grid")
    }
}

fn vec_low(u: &VectorField, big_q: i32) -> VectorField {
    u.map(|c| low_pass_or_zero(c, big_q))
}

fn vec_block(u: &VectorField, p: i32) -> VectorField {
    u.map(|c| block_or_zero(c, p))
}

fn accumulate(acc: &mut Option<ScalarField>, term: ScalarField) {
    *acc = Some(match acc.take() {
        None => term,
        Some(a) => a.add(&term).expect("terms share a grid"),
    });
}

pub fn bony_decompose(u: &VectorField, theta: &ScalarField, q: i32) -> Result<BonySplit> {
    u.grid().same_as(theta.grid())?;
    check_shell(theta.grid(), q)?;
    let g = *theta.grid();
    let q_max = g.q_max();

    let mut low_high = None;
    let mut high_low = None;
    for p in (q - 2).max(-1)..=(q + 2).min(q_max) {
        accumulate(
            &mut low_high,
            advect(&vec_low(u, p - 2), &block_or_zero(theta, p))?,
        );
        accumulate(
            &mut high_low,
            advect(&vec_block(u, p), &low_pass_or_zero(theta, p - 2))?,
        );
    }

    let mut high_high = None;
    for p in (q - 2).max(-1)..=q_max {
        let tilde = block_or_zero(theta, p - 1)
            .add(&block_or_zero(theta, p))?
            .add(&block_or_zero(theta, p + 1))?;
        accumulate(&mut high_high, advect(&vec_block(u, p), &tilde)?);
    }

    let zero = || ScalarField::zeros(g);
    Ok(BonySplit {
        low_high: project_block(&low_high.unwrap_or_else(zero), q)?,
        high_low: project_block(&high_low.unwrap_or_else(zero), q)?,
        high_high: project_block(&high_high.unwrap_or_else(zero), q)?,
    })
}

/// [Δ_q, u_{≤p−2}·∇]θ_p = Δ_q(u_{≤p−2}·∇θ_p) − u_{≤p−2}·∇Δ_qθ_p.
pub fn commutator(u: &VectorField, theta: &ScalarField, q: i32, p: i32) -> Result<ScalarField> {
    u.grid().same_as(theta.grid())?;
    check_shell(theta.grid(), q)?;
    check_shell(theta.grid(), p)?;
    let low = vec_low(u, p - 2);
    let theta_p = project_block(theta, p)?;
    let first = project_block(&advect(&low, &theta_p)?, q)?;
    let second = advect(&low, &project_block(&theta_p, q)?)?;
    first.sub(&second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{lp_norm, riesz_perp, GridSpec};

    #[test]
    fn zero_velocity() {
        let g = GridSpec::new(32).unwrap();
        let th = ScalarField::from_fn(g, |x, y| x.sin() + (2.0 * y).cos());
        let split = bony_decompose(&VectorField::zeros(g), &th, 1).unwrap();
        for t in [&split.low_high, &split.high_low, &split.high_high] {
            assert_eq!(lp_norm(t, f64::INFINITY).unwrap(), 0.0);
        }
    }

    #[test]
    fn constant_velocity_commutes() {
        let g = GridSpec::new(64).unwrap();
        let th = ScalarField::from_fn(g, |x, y| (5.0 * x + y).sin() + (3.0 * y).cos());
        let u = VectorField::constant(g, 0.7, -1.3);
        for q in 0..=3 {
            let c = commutator(&u, &th, q, q).unwrap();
            assert!(lp_norm(&c, f64::INFINITY).unwrap() < 1e-12);
        }
    }

    #[test]
    fn empty_block_gives_zero_commutator() {
        let g = GridSpec::new(64).unwrap();
        let th = ScalarField::from_fn(g, |x, _| x.cos());
        let u = riesz_perp(&ScalarField::from_fn(g, |x, y| (x + y).sin()));
        let c = commutator(&u, &th, 3, 3).unwrap();
        assert!(lp_norm(&c, f64::INFINITY).unwrap() < 1e-14);
    }
}
