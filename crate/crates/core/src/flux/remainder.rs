use std::f64::consts::PI;

use crate::error::{Result, SqgError};
use crate::littlewood_paley::{check_shell, high_pass, lambda, low_pass, DyadicProfile};
use crate::spectral::{dealiased_product, ScalarField, VectorField};

/// r_Q(u, θ) through the filter identity
/// r_Q = (uθ)_{≤Q} + u_{>Q}θ_{>Q} − u_{≤Q}θ_{≤Q}, with dealiased products.
pub fn rq_remainder(u: &VectorField, theta: &ScalarField, big_q: i32) -> Result<VectorField> {
    u.grid().same_as(theta.grid())?;
    check_shell(theta.grid(), big_q)?;
    let th_lo = low_pass(theta, big_q)?;
    let th_hi = high_pass(theta, big_q)?;
    let component = |c: &ScalarField| -> Result<ScalarField> {
        let full = low_pass(&dealiased_product(c, theta)?, big_q)?;
        let hi = dealiased_product(&high_pass(c, big_q)?, &th_hi)?;
        let lo = dealiased_product(&low_pass(c, big_q)?, &th_lo)?;
        full.add(&hi)?.sub(&lo)
    };
    Ok(VectorField {
        u1: component(&u.u1)?,
        u2: component(&u.u2)?,
    })
}

/// Largest grid on which the O(N⁴) quadrature is allowed.
pub const DIRECT_MAX_N: usize = 64;

/// r_Q by direct quadrature of ∫ h_Q(y)(u(x−y)−u(x))(θ(x−y)−θ(x)) dy, with
/// the periodized kernel H(y) = (2π)^{−2} Σ_k χ(|k|/λ_{Q+1}) e^{ik·y} built
/// by explicit summation. Exact when u, θ and the kernel together stay below
/// the grid Nyquist frequency.
pub fn rq_remainder_direct(
    u: &VectorField,
    theta: &ScalarField,
    big_q: i32,
) -> Result<VectorField> {
    u.grid().same_as(theta.grid())?;
    let g = *theta.grid();
    check_shell(&g, big_q)?;
    if g.n() > DIRECT_MAX_N {
        return Err(SqgError::OutOfRange(format!(
            "direct quadrature limited to N ≤ {DIRECT_MAX_N}, got {}",
            g.n()
        )));
    }
    let n = g.n();
    let profile = DyadicProfile::default();
    let scale = lambda(big_q + 1);
    let kmax = scale.ceil() as i64;
    let mut modes = Vec::new();
    for k2 in -kmax..=kmax {
        for k1 in -kmax..=kmax {
            let w = profile.chi(((k1 * k1 + k2 * k2) as f64).sqrt() / scale);
            if w != 0.0 {
                modes.push((k1 as f64, k2 as f64, w));
            }
        }
    }
    let kernel: Vec<f64> = (0..g.len())
        .map(|j| {
            let (y1, y2) = g.point(j);
            modes
                .iter()
                .map(|(k1, k2, w)| w * (k1 * y1 + k2 * y2).cos())
                .sum::<f64>()
                / (4.0 * PI * PI)
        })
        .collect();
    let area = g.cell_area();
    let th = theta.values();
    let mut out = [vec![0.0; g.len()], vec![0.0; g.len()]];
    for (comp, uc) in [&u.u1, &u.u2].into_iter().enumerate() {
        let uv = uc.values();
        for xi in 0..g.len() {
            let (i1, i2) = (xi % n, xi / n);
            let mut acc = 0.0;
            for (yj, h) in kernel.iter().enumerate() {
                let (j1, j2) = (yj % n, yj / n);
                let s = (i1 + n - j1) % n + ((i2 + n - j2) % n) * n;
                acc += h * (uv[s] - uv[xi]) * (th[s] - th[xi]);
            }
            out[comp][xi] = acc * area;
        }
    }
    let [r1, r2] = out;
    Ok(VectorField {
        u1: ScalarField::from_values(g, r1)?,
        u2: ScalarField::from_values(g, r2)?,
    })
}
