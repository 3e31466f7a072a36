//! Computable forms of the block inequalities used in the regularity argument:
//! Bernstein's ratio, the nonlinear dissipation ratio, and the transport
//! integral that vanishes for divergence-free velocities.
//!
//! Nonlinear integrands are evaluated on a zero-padded grid large enough that
//! uniform quadrature is exact for the trigonometric polynomials involved.

use super::blocks::{check_shell, low_pass_or_zero, project_block};
use super::profile::lambda;
use crate::error::Result;
use crate::spectral::{
    fractional_laplacian, lp_norm, lp_norm_values, partial, ScalarField, VectorField,
};

/// Largest |k₁| or |k₂| carried by a nonzero coefficient.
pub fn max_component_frequency(f: &ScalarField) -> usize {
    let g = f.grid();
    f.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .map(|(idx, _)| {
            let (k1, k2) = g.wavevector(idx);
            k1.unsigned_abs().max(k2.unsigned_abs()) as usize
        })
        .max()
        .unwrap_or(0)
}

/// Smallest power-of-two grid, at least `n`, on which a product with the given
/// total component frequency integrates exactly.
pub fn alias_free_size(n: usize, total_frequency: usize) -> usize {
    (total_frequency + 1).next_power_of_two().max(n).max(16)
}

/// ‖θ_q‖_∞ / (λ_q ‖θ_q‖₂); bounded uniformly in q in two dimensions.
pub fn bernstein_ratio(block: &ScalarField, q: i32) -> Result<f64> {
    let linf = lp_norm(block, f64::INFINITY)?;
    let l2 = lp_norm(block, 2.0)?;
    Ok(if l2 == 0.0 {
        0.0
    } else {
        linf / (lambda(q) * l2)
    })
}

fn abs_pow(v: f64, e: f64) -> f64 {
    if e.fract() == 0.0 {
        v.abs().powi(e as i32)
    } else {
        v.abs().powf(e)
    }
}

/// l∫θ_q Λ^αθ_q |θ_q|^{l−2} dx / (λ_q^α ‖θ_q‖_l^l) for the block θ_q of `theta`.
pub fn dissipation_ratio(theta: &ScalarField, q: i32, alpha: f64, l: f64) -> Result<f64> {
    check_shell(theta.grid(), q)?;
    let block = project_block(theta, q)?;
    let m = alias_free_size(
        theta.grid().n(),
        (l.ceil() as usize) * max_component_frequency(&block),
    );
    let fine = block.resample(m)?;
    let lam = fractional_laplacian(&fine, alpha)?;
    let area = fine.grid().cell_area();
    let num: f64 = fine
        .values()
        .iter()
        .zip(lam.values())
        .map(|(t, lt)| t * lt * abs_pow(*t, l - 2.0))
        .sum::<f64>()
        * area
        * l;
    let norm_l = lp_norm_values(fine.grid(), fine.values(), l)?;
    let den = lambda(q).powf(alpha) * norm_l.powf(l);
    Ok(if den == 0.0 { 0.0 } else { num / den })
}

/// The transport integral ∫ u_{≤q−2}·∇θ_q θ_q|θ_q|^{l−2} dx together with its
/// scale ‖u‖_∞ ‖∇θ_q‖_l ‖θ_q‖_l^{l−1}.
#[derive(Debug, Clone, Copy)]
pub struct TransportIntegral {
    pub value: f64,
    pub scale: f64,
}

pub fn low_mode_transport_integral(
    u: &VectorField,
    theta: &ScalarField,
    q: i32,
    l: f64,
) -> Result<TransportIntegral> {
    u.grid().same_as(theta.grid())?;
    check_shell(theta.grid(), q)?;
    let low = u.map(|c| low_pass_or_zero(c, q - 2));
    let block = project_block(theta, q)?;
    let freq = max_component_frequency(&low.u1).max(max_component_frequency(&low.u2))
        + (l.ceil() as usize) * max_component_frequency(&block);
    let m = alias_free_size(theta.grid().n(), freq);

    let fu1 = low.u1.resample(m)?;
    let fu2 = low.u2.resample(m)?;
    let fb = block.resample(m)?;
    let dx = partial(&fb, 0);
    let dy = partial(&fb, 1);
    let area = fb.grid().cell_area();
    let value: f64 = (0..fb.grid().len())
        .map(|i| {
            let t = fb.values()[i];
            (fu1.values()[i] * dx.values()[i] + fu2.values()[i] * dy.values()[i])
                * t
                * abs_pow(t, l - 2.0)
        })
        .sum::<f64>()
        * area;

    let grad_mag: Vec<f64> = dx
        .values()
        .iter()
        .zip(dy.values())
        .map(|(a, b)| a.hypot(*b))
        .collect();
    let u_inf = lp_norm(&u.u1, f64::INFINITY)?.max(lp_norm(&u.u2, f64::INFINITY)?);
    let grad_l = lp_norm_values(fb.grid(), &grad_mag, l)?;
    let theta_l = lp_norm_values(fb.grid(), fb.values(), l)?;
    Ok(TransportIntegral {
        value,
        scale: u_inf * grad_l * theta_l.powf(l - 1.0),
    })
}
