use crate::error::{Result, SqgError};

/// Radial cutoff pair (χ, φ) of the dyadic decomposition.
///
/// χ(r) = 1 on [0, 3/4], 0 on [1, ∞), and inside the transition band it is
/// the C^∞ step ψ(x) = f(x)/(f(x)+f(1−x)), f(x) = e^{−1/x}, evaluated at
/// x = (1 − r)/width. φ(r) = χ(r/2) − χ(r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicProfile {
    width: f64,
}

impl Default for DyadicProfile {
    fn default() -> Self {
        DyadicProfile { width: 0.25 }
    }
}

/// Build a profile whose transition occupies [1 − width, 1] ⊆ [3/4, 1].
pub fn make_profile(transition_width: f64) -> Result<DyadicProfile> {
    if !(transition_width > 0.0 && transition_width <= 0.25) {
        return Err(SqgError::OutOfRange(format!(
            "transition width must lie in (0, 1/4], got {transition_width}"
        )));
    }
    Ok(DyadicProfile {
        width: transition_width,
    })
}

#[inline]
fn bump(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// ψ(x) = f(x)/(f(x)+f(1−x)); 0 for x ≤ 0, 1 for x ≥ 1.
#[inline]
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = bump(x);
        a / (a + bump(1.0 - x))
    }
}

impl DyadicProfile {
    pub fn transition_width(&self) -> f64 {
        self.width
    }

    #[inline]
    pub fn chi(&self, r: f64) -> f64 {
        let inner = 1.0 - self.width;
        if r <= inner {
            1.0
        } else if r >= 1.0 {
            0.0
        } else {
            smooth_step((1.0 - r) / self.width)
        }
    }

    #[inline]
    pub fn phi(&self, r: f64) -> f64 {
        self.chi(0.5 * r) - self.chi(r)
    }

    /// Multiplier of block q at |k| = r: χ(r) for q = −1, φ(r/2^q) otherwise.
    #[inline]
    pub fn block_multiplier(&self, q: i32, r: f64) -> f64 {
        if q < 0 {
            self.chi(r)
        } else {
            self.phi(r / lambda(q))
        }
    }

    /// Multiplier of u_{≤Q} = Σ_{q=−1}^{Q} u_q, which telescopes to χ(r/2^{Q+1}).
    #[inline]
    pub fn low_pass_multiplier(&self, big_q: i32, r: f64) -> f64 {
        self.chi(r / lambda(big_q + 1))
    }
}

/// λ_q = 2^q, including λ_{−1} = 1/2.
#[inline]
pub fn lambda(q: i32) -> f64 {
    2f64.powi(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_regions() {
        let p = DyadicProfile::default();
        assert_eq!(p.chi(0.5), 1.0);
        assert_eq!(p.chi(0.75), 1.0);
        assert_eq!(p.chi(1.0), 0.0);
        assert_eq!(p.chi(1.5), 0.0);
        assert_eq!(p.phi(0.0), 0.0);
        assert_eq!(p.phi(1.5), 1.0);
    }

    #[test]
    fn monotone_and_smooth_step_symmetry() {
        let p = DyadicProfile::default();
        let mut prev = 1.0;
        for i in 0..=1000 {
            let r = 0.7 + 0.35 * i as f64 / 1000.0;
            let c = p.chi(r);
            assert!(c <= prev + 1e-15);
            prev = c;
        }
        for i in 1..100 {
            let x = i as f64 / 100.0;
            assert!((smooth_step(x) + smooth_step(1.0 - x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn partition_of_unity_at_sample_radius() {
        let p = DyadicProfile::default();
        let r = 37.3;
        let s: f64 = p.chi(r) + (0..=10).map(|q| p.phi(r / lambda(q))).sum::<f64>();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn narrower_profiles_allowed() {
        assert!(make_profile(0.1).is_ok());
        assert!(make_profile(0.3).is_err());
        assert!(make_profile(0.0).is_err());
        let p = make_profile(0.1).unwrap();
        assert_eq!(p.chi(0.85), 1.0);
        assert!(p.chi(0.95) > 0.0 && p.chi(0.95) < 1.0);
    }
}
