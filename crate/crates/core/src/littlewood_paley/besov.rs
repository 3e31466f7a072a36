use super::blocks::BlockSet;
use super::profile::lambda;
use crate::error::{Result, SqgError};
use crate::spectral::ScalarField;

/// Number of top shells whose maximum stands in for the c(ℕ) limit.
pub const TAIL_SHELLS: usize = 3;

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v < 1.0 {
        return Err(SqgError::OutOfRange(format!(
            "{name} must lie in [1, ∞], got {v}"
        )));
    }
    Ok(())
}

/// Inhomogeneous Besov norm ‖θ_{−1}‖_p + ‖(λ_q^s‖θ_q‖_p)_{q=0..q_max}‖_{ℓ^r}.
pub fn besov_norm(theta: &ScalarField, s: f64, p: f64, r: f64) -> Result<f64> {
    check_exponent("p", p)?;
    check_exponent("r", r)?;
    let blocks = BlockSet::new(theta);
    besov_from_norms(&blocks.norms(p)?, s, r)
}

/// Besov norm from precomputed block norms (slot 0 holds q = −1).
pub fn besov_from_norms(block_norms: &[f64], s: f64, r: f64) -> Result<f64> {
    check_exponent("r", r)?;
    let low = block_norms[0];
    let weighted = block_norms[1..]
        .iter()
        .enumerate()
        .map(|(q, n)| lambda(q as i32).powf(s) * n);
    let tail = if r.is_infinite() {
        weighted.fold(0.0, f64::max)
    } else {
        weighted.map(|w| w.powf(r)).sum::<f64>().powf(1.0 / r)
    };
    Ok(low + tail)
}

/// {λ_q^{1/2}‖θ_q‖₂} for q = 0..=q_max.
pub fn c_natural_tail(theta: &ScalarField) -> Vec<f64> {
    let blocks = BlockSet::new(theta);
    tail_sequence(&blocks.norms(2.0).expect("p = 2 is valid"))
}

pub fn tail_sequence(l2_norms: &[f64]) -> Vec<f64> {
    l2_norms[1..]
        .iter()
        .enumerate()
        .map(|(q, n)| lambda(q as i32).sqrt() * n)
        .collect()
}

/// Maximum of the sequence over its last three entries.
pub fn tail_surrogate(seq: &[f64]) -> f64 {
    seq.iter()
        .rev()
        .take(TAIL_SHELLS)
        .fold(0.0, |m, v| m.max(*v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;

    #[test]
    fn zero_field() {
        let g = GridSpec::new(32).unwrap();
        let z = ScalarField::zeros(g);
        assert_eq!(
            besov_norm(&z, 1.0, f64::INFINITY, f64::INFINITY).unwrap(),
            0.0
        );
        assert!(c_natural_tail(&z).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn rejects_bad_exponents() {
        let g = GridSpec::new(16).unwrap();
        let z = ScalarField::zeros(g);
        assert!(besov_norm(&z, 1.0, 0.5, 2.0).is_err());
        assert!(besov_norm(&z, 1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn band_limited_tail_vanishes_above_top_shell() {
        let g = GridSpec::new(128).unwrap();
        // |k| ≤ 5 ⇒ shells up to q* = 2 (φ_2 is supported on [3, 8]).
        let th = ScalarField::from_fn(g, |x, y| (5.0 * x).sin() + (3.0 * x + 4.0 * y).cos());
        let t = c_natural_tail(&th);
        for (q, v) in t.iter().enumerate() {
            if q > 3 {
                assert!(*v < 1e-12, "q={q} v={v}");
            }
        }
        assert!(t[2] > 0.1);
    }

    #[test]
    fn finite_r_sum() {
        let norms = [1.0, 2.0, 3.0];
        // 1 + (|2|² + |2·3|²)^{1/2} at s = 1.
        let v = besov_from_norms(&norms, 1.0, 2.0).unwrap();
        assert!((v - (1.0 + 40f64.sqrt())).abs() < 1e-14);
    }
}
