use num_complex::Complex64;

use super::field::{ScalarField, VectorField};
use super::grid::GridSpec;
use crate::error::{Result, SqgError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Λ^α θ, the multiplier |k|^α; the mean mode maps to zero.
pub fn fractional_laplacian(theta: &ScalarField, alpha: f64) -> Result<ScalarField> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(SqgError::OutOfRange(format!(
            "fractional power must lie in (0, 2], got {alpha}"
        )));
    }
    Ok(theta.apply_radial(|k| if k == 0.0 { 0.0 } else { k.powf(alpha) }))
}

/// u = R^⊥θ = Λ^{-1}(−∂₂θ, ∂₁θ), i.e. û(k) = i(−k₂, k₁)/|k| · θ̂(k).
pub fn riesz_perp(theta: &ScalarField) -> VectorField {
    let g = *theta.grid();
    let mut c1 = vec![ZERO; g.len()];
    let mut c2 = vec![ZERO; g.len()];
    for (idx, &c) in theta.coeffs().iter().enumerate() {
        let (k1, k2) = g.wavevector(idx);
        if (k1, k2) == (0, 0) || c == ZERO {
            continue;
        }
        let inv = 1.0 / ((k1 * k1 + k2 * k2) as f64).sqrt();
        let ic = Complex64::new(-c.im, c.re);
        c1[idx] = ic * (-(k2 as f64) * inv);
        c2[idx] = ic * (k1 as f64 * inv);
    }
    VectorField {
        u1: ScalarField::from_coeffs(g, c1).expect("grid sized"),
        u2: ScalarField::from_coeffs(g, c2).expect("grid sized"),
    }
}

/// Spectral derivative ∂_{x₁} (axis 0) or ∂_{x₂} (axis 1).
pub fn partial(theta: &ScalarField, axis: usize) -> ScalarField {
    let g = *theta.grid();
    let coeffs = theta
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            let (k1, k2) = g.wavevector(idx);
            // The Nyquist mode has no real derivative.
            let k = if axis == 0 { k1 } else { k2 };
            if k == -(g.n() as i64) / 2 {
                ZERO
            } else {
                Complex64::new(-c.im, c.re) * k as f64
            }
        })
        .collect();
    ScalarField::from_coeffs(g, coeffs).expect("grid sized")
}

pub fn gradient(theta: &ScalarField) -> VectorField {
    VectorField {
        u1: partial(theta, 0),
        u2: partial(theta, 1),
    }
}

/// Pointwise product truncated to the dealiased disc. For band-limited inputs
/// this equals the exact product restricted to |k| ≤ k_cut.
pub fn dealiased_product(a: &ScalarField, b: &ScalarField) -> Result<ScalarField> {
    a.grid().same_as(b.grid())?;
    let g = *a.grid();
    let values: Vec<f64> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x * y)
        .collect();
    Ok(band_limit(g, values))
}

pub(crate) fn band_limit(g: GridSpec, values: Vec<f64>) -> ScalarField {
    let mut coeffs = super::field::to_spectral(&g, &values);
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let (k1, k2) = g.wavevector(idx);
        if !g.in_band(k1, k2) {
            *c = ZERO;
        }
    }
    ScalarField::from_coeffs(g, coeffs).expect("grid sized")
}

/// Dealiased u·∇θ.
pub fn advect(u: &VectorField, theta: &ScalarField) -> Result<ScalarField> {
    u.grid().same_as(theta.grid())?;
    let g = *theta.grid();
    let dx = partial(theta, 0);
    let dy = partial(theta, 1);
    let values: Vec<f64> = (0..g.len())
        .map(|i| u.u1.values()[i] * dx.values()[i] + u.u2.values()[i] * dy.values()[i])
        .collect();
    Ok(band_limit(g, values))
}

/// Dealiased ∇·(uθ). Equal to `advect` for divergence-free u, with an exactly
/// zero mean mode.
pub fn flux_divergence(u: &VectorField, theta: &ScalarField) -> Result<Vec<Complex64>> {
    u.grid().same_as(theta.grid())?;
    let g = *theta.grid();
    let f1: Vec<f64> =
        u.u1.values()
            .iter()
            .zip(theta.values())
            .map(|(a, b)| a * b)
            .collect();
    let f2: Vec<f64> =
        u.u2.values()
            .iter()
            .zip(theta.values())
            .map(|(a, b)| a * b)
            .collect();
    let c1 = super::field::to_spectral(&g, &f1);
    let c2 = super::field::to_spectral(&g, &f2);
    Ok((0..g.len())
        .map(|idx| {
            let (k1, k2) = g.wavevector(idx);
            if !g.in_band(k1, k2) {
                return ZERO;
            }
            let s = c1[idx] * k1 as f64 + c2[idx] * k2 as f64;
            Complex64::new(-s.im, s.re)
        })
        .collect())
}

/// ‖θ‖_p on the torus by uniform quadrature, normalized so ‖1‖_p = (2π)^{2/p}.
/// `p = f64::INFINITY` gives the grid maximum of |θ|.
pub fn lp_norm(theta: &ScalarField, p: f64) -> Result<f64> {
    lp_norm_values(theta.grid(), theta.values(), p)
}

pub(crate) fn lp_norm_values(g: &GridSpec, values: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(SqgError::OutOfRange(format!(
            "p must lie in [1, ∞], got {p}"
        )));
    }
    if p.is_infinite() {
        return Ok(values.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let area = g.cell_area();
    let s: f64 = if p == 2.0 {
        values.iter().map(|v| v * v).sum()
    } else if p.fract() == 0.0 && p <= 16.0 {
        let e = p as i32;
        values.iter().map(|v| v.abs().powi(e)).sum()
    } else {
        values.iter().map(|v| v.abs().powf(p)).sum()
    };
    Ok((s * area).powf(1.0 / p))
}

/// Σ_k w(k)|θ̂(k)|² normalized so that w ≡ 1 gives ‖θ‖₂².
pub fn weighted_energy(theta: &ScalarField, w: impl Fn(f64) -> f64) -> f64 {
    let g = theta.grid();
    let s: f64 = theta
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let (k1, k2) = g.wavevector(idx);
            let n2 = c.norm_sqr();
            if n2 == 0.0 {
                0.0
            } else {
                w(((k1 * k1 + k2 * k2) as f64).sqrt()) * n2
            }
        })
        .sum();
    s * g.cell_area() / g.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> GridSpec {
        GridSpec::new(n).unwrap()
    }

    fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn fractional_laplacian_eigenfunctions() {
        let g = grid(32);
        let th = ScalarField::from_fn(g, |x, _| (2.0 * x).cos());
        let out = fractional_laplacian(&th, 1.0).unwrap();
        assert!(max_diff(&out, &th.scale(2.0)) < 1e-12);

        let th = ScalarField::from_fn(g, |x, y| (3.0 * x + 4.0 * y).cos());
        let out = fractional_laplacian(&th, 0.5).unwrap();
        assert!(max_diff(&out, &th.scale(5f64.sqrt())) < 1e-12);

        let c = ScalarField::constant(g, 3.0);
        let out = fractional_laplacian(&c, 0.7).unwrap();
        assert!(out.values().iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn fractional_laplacian_rejects_bad_power() {
        let th = ScalarField::zeros(grid(16));
        assert!(fractional_laplacian(&th, 0.0).is_err());
        assert!(fractional_laplacian(&th, 2.5).is_err());
        assert!(fractional_laplacian(&th, 2.0).is_ok());
    }

    #[test]
    fn riesz_of_cos_y() {
        let g = grid(32);
        let th = ScalarField::from_fn(g, |_, y| y.cos());
        let u = riesz_perp(&th);
        let expect = ScalarField::from_fn(g, |_, y| y.sin());
        assert!(max_diff(&u.u1, &expect) < 1e-13);
        assert!(u.u2.values().iter().all(|v| v.abs() < 1e-13));
        let u = riesz_perp(&ScalarField::constant(g, 1.0));
        assert!(u.u1.values().iter().chain(u.u2.values()).all(|v| *v == 0.0));
    }

    #[test]
    fn advect_examples() {
        let g = grid(32);
        let th = ScalarField::from_fn(g, |x, _| x.cos());
        let u = VectorField::constant(g, 1.0, 0.0);
        let out = advect(&u, &th).unwrap();
        let expect = ScalarField::from_fn(g, |x, _| -x.sin());
        assert!(max_diff(&out, &expect) < 1e-13);

        let zero = advect(&VectorField::zeros(g), &th).unwrap();
        assert!(zero.values().iter().all(|v| v.abs() < 1e-15));
        let flat = advect(&u, &ScalarField::constant(g, 2.0)).unwrap();
        assert!(flat.values().iter().all(|v| v.abs() < 1e-13));
    }

    #[test]
    fn advect_rejects_grid_mismatch() {
        let u = VectorField::zeros(grid(16));
        let th = ScalarField::zeros(grid(32));
        assert!(matches!(
            advect(&u, &th),
            Err(SqgError::GridMismatch { .. })
        ));
    }

    #[test]
    fn lp_norm_examples() {
        let g = grid(64);
        let one = ScalarField::constant(g, 1.0);
        assert!((lp_norm(&one, 2.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((lp_norm(&one, 3.0).unwrap() - (2.0 * PI).powf(2.0 / 3.0)).abs() < 1e-12);
        let c = ScalarField::from_fn(g, |x, _| x.cos());
        assert!((lp_norm(&c, 2.0).unwrap() - 2.0 * PI * 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(lp_norm(&c, f64::INFINITY).unwrap(), 1.0);
        assert!(lp_norm(&c, 0.5).is_err());
    }
}
