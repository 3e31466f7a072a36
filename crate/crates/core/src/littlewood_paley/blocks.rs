use rayon::prelude::*;

use super::profile::{lambda, DyadicProfile};
use crate::error::{Result, SqgError};
use crate::spectral::{lp_norm, GridSpec, ScalarField, VectorField};

pub(crate) fn check_shell(grid: &GridSpec, q: i32) -> Result<()> {
    if q < -1 || q > grid.q_max() {
        return Err(SqgError::ShellRange {
            index: q,
            min: -1,
            max: grid.q_max(),
        });
    }
    Ok(())
}

/// θ_q = Δ_q θ, multiplier φ(2^{-q}|k|) (χ(|k|) for q = −1).
pub fn project_block(theta: &ScalarField, q: i32) -> Result<ScalarField> {
    check_shell(theta.grid(), q)?;
    Ok(project_block_with(&DyadicProfile::default(), theta, q))
}

pub(crate) fn project_block_with(
    profile: &DyadicProfile,
    theta: &ScalarField,
    q: i32,
) -> ScalarField {
    theta.apply_radial(|r| profile.block_multiplier(q, r))
}

/// θ_{≤Q} = Σ_{q=−1}^{Q} θ_q.
pub fn low_pass(theta: &ScalarField, big_q: i32) -> Result<ScalarField> {
    check_shell(theta.grid(), big_q)?;
    let profile = DyadicProfile::default();
    Ok(theta.apply_radial(|r| profile.low_pass_multiplier(big_q, r)))
}

/// θ_{>Q} = θ − θ_{≤Q}.
pub fn high_pass(theta: &ScalarField, big_q: i32) -> Result<ScalarField> {
    check_shell(theta.grid(), big_q)?;
    let profile = DyadicProfile::default();
    Ok(theta.apply_radial(|r| 1.0 - profile.low_pass_multiplier(big_q, r)))
}

/// Low pass that is zero for Q < −1, as needed by paraproduct sums.
pub(crate) fn low_pass_or_zero(theta: &ScalarField, big_q: i32) -> ScalarField {
    if big_q < -1 {
        ScalarField::zeros(*theta.grid())
    } else {
        let profile = DyadicProfile::default();
        theta.apply_radial(|r| profile.low_pass_multiplier(big_q.min(theta.grid().q_max()), r))
    }
}

pub(crate) fn block_or_zero(theta: &ScalarField, q: i32) -> ScalarField {
    if q < -1 || q > theta.grid().q_max() {
        ScalarField::zeros(*theta.grid())
    } else {
        project_block_with(&DyadicProfile::default(), theta, q)
    }
}

pub fn project_block_vec(u: &VectorField, q: i32) -> Result<VectorField> {
    Ok(VectorField {
        u1: project_block(&u.u1, q)?,
        u2: project_block(&u.u2, q)?,
    })
}

pub fn low_pass_vec(u: &VectorField, big_q: i32) -> Result<VectorField> {
    Ok(VectorField {
        u1: low_pass(&u.u1, big_q)?,
        u2: low_pass(&u.u2, big_q)?,
    })
}

/// All blocks θ_{−1}, …, θ_{q_max} of one field.
#[derive(Debug, Clone)]
pub struct BlockSet {
    blocks: Vec<ScalarField>,
    q_max: i32,
}

impl BlockSet {
    pub fn new(theta: &ScalarField) -> Self {
        Self::with_profile(theta, &DyadicProfile::default())
    }

    pub fn with_profile(theta: &ScalarField, profile: &DyadicProfile) -> Self {
        let q_max = theta.grid().q_max();
        let blocks = (-1..=q_max)
            .into_par_iter()
            .map(|q| project_block_with(profile, theta, q))
            .collect();
        BlockSet { blocks, q_max }
    }

    pub fn q_max(&self) -> i32 {
        self.q_max
    }

    /// Shell indices −1..=q_max.
    pub fn shells(&self) -> impl Iterator<Item = i32> {
        -1..=self.q_max
    }

    pub fn block(&self, q: i32) -> &ScalarField {
        &self.blocks[(q + 1) as usize]
    }

    pub fn blocks(&self) -> &[ScalarField] {
        &self.blocks
    }

    /// ‖θ_q‖_p for every shell, indexed from q = −1.
    pub fn norms(&self, p: f64) -> Result<Vec<f64>> {
        self.blocks.iter().map(|b| lp_norm(b, p)).collect()
    }

    pub fn reconstruct(&self) -> ScalarField {
        let mut acc = self.blocks[0].clone();
        for b in &self.blocks[1..] {
            acc = acc.add(b).expect("blocks share a grid");
        }
        acc
    }
}

/// Weighted dyadic frequency λ_q for slot `i` of a block vector (slot 0 is q = −1).
#[inline]
pub(crate) fn lambda_at_slot(i: usize) -> f64 {
    lambda(i as i32 - 1)
}
