use crate::error::{Result, SqgError};

const MAX_L: u32 = 64;

/// Smallest even l ≥ 4 for which some s satisfies s − 2/l > 1 − α and
/// 1 − s − α/l > 0, paired with the midpoint s = 1 − (α/l + α − 2/l)/2.
pub fn admissible_parameters(alpha: f64) -> Result<(f64, u32)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(SqgError::OutOfRange(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    for l in (4..=MAX_L).step_by(2) {
        let lf = l as f64;
        let lo = alpha / lf;
        let hi = alpha - 2.0 / lf;
        if lo < hi {
            return Ok((1.0 - 0.5 * (lo + hi), l));
        }
    }
    Err(SqgError::OutOfRange(format!(
        "no even l ≤ {MAX_L} is admissible for alpha = {alpha}"
    )))
}

/// Both strict inequalities for a candidate pair.
pub fn is_admissible(alpha: f64, s: f64, l: u32) -> bool {
    let lf = l as f64;
    s - 2.0 / lf > 1.0 - alpha && 1.0 - s - alpha / lf > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Scan a fine s-grid for every even l and keep the first l with a hit.
    fn oracle(alpha: f64) -> u32 {
        (4..=64)
            .step_by(2)
            .find(|&l| (1..10_000).any(|i| is_admissible(alpha, i as f64 / 10_000.0, l)))
            .unwrap()
    }

    #[test]
    fn minimal_even_l() {
        let (s, l) = admissible_parameters(0.5).unwrap();
        assert_eq!(l, 6);
        assert!((s - 0.875).abs() < 1e-15);
        assert!(is_admissible(0.5, s, l));
        assert_eq!(admissible_parameters(0.1).unwrap().1, 22);
        assert_eq!(admissible_parameters(0.999).unwrap().1, 4);
        for a in [0.1, 0.25, 0.3, 0.5, 0.75, 0.9] {
            let (s, l) = admissible_parameters(a).unwrap();
            assert_eq!(l, oracle(a), "alpha {a}");
            assert!(is_admissible(a, s, l));
        }
    }

    #[test]
    fn range() {
        assert!(admissible_parameters(0.0).is_err());
        assert!(admissible_parameters(1.0).is_err());
        assert!(admissible_parameters(0.01).is_err());
    }
}
