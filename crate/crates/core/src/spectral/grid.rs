use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SqgError};

pub const DEFAULT_DEALIAS_FRACTION: f64 = 2.0 / 3.0;

/// Uniform N×N grid on the periodic square [0, 2π)².
///
/// Wavenumbers are integers in [−N/2, N/2). A coefficient is inside the
/// dealiased band when |k| ≤ k_cut with k_cut = ⌊fraction·N/2⌋.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    dealias_fraction: f64,
}

impl GridSpec {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_dealias(n, DEFAULT_DEALIAS_FRACTION)
    }

    pub fn with_dealias(n: usize, dealias_fraction: f64) -> Result<Self> {
        if !n.is_power_of_two() || n < 16 {
            return Err(SqgError::InvalidGrid(format!(
                "N must be a power of two and at least 16, got {n}"
            )));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(SqgError::InvalidGrid(format!(
                "dealias fraction must lie in (0, 1], got {dealias_fraction}"
            )));
        }
        let grid = GridSpec {
            n,
            dealias_fraction,
        };
        if grid.k_cut() < 4 {
            return Err(SqgError::InvalidGrid(format!(
                "dealias cutoff {} below 4 for N={n}",
                grid.k_cut()
            )));
        }
        Ok(grid)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    /// Domain period, always 2π.
    pub fn period(&self) -> f64 {
        2.0 * PI
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Area element of the uniform quadrature rule.
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    pub fn k_cut(&self) -> usize {
        (self.dealias_fraction * (self.n / 2) as f64).floor() as usize
    }

    /// Largest Littlewood–Paley shell index whose lower edge lies inside the band.
    pub fn q_max(&self) -> i32 {
        (self.k_cut() as f64).log2().floor() as i32
    }

    /// Signed wavenumber of FFT index `i`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// FFT index of a signed wavenumber.
    #[inline]
    pub fn index_of(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Wavevector (k₁, k₂) of the flat coefficient index. Row-major storage:
    /// `idx = j·N + i` with `i` along x₁.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> (i64, i64) {
        (self.wavenumber(idx % self.n), self.wavenumber(idx / self.n))
    }

    #[inline]
    pub fn flat_index(&self, k1: i64, k2: i64) -> usize {
        self.index_of(k2) * self.n + self.index_of(k1)
    }

    #[inline]
    pub fn in_band(&self, k1: i64, k2: i64) -> bool {
        let kc = self.k_cut() as i64;
        k1 * k1 + k2 * k2 <= kc * kc
    }

    /// Physical coordinates of grid point `idx`.
    #[inline]
    pub fn point(&self, idx: usize) -> (f64, f64) {
        let h = self.spacing();
        ((idx % self.n) as f64 * h, (idx / self.n) as f64 * h)
    }

    /// |k| for every coefficient slot.
    pub fn wavenumber_magnitudes(&self) -> Vec<f64> {
        (0..self.len())
            .map(|idx| {
                let (k1, k2) = self.wavevector(idx);
                ((k1 * k1 + k2 * k2) as f64).sqrt()
            })
            .collect()
    }

    pub fn same_as(&self, other: &GridSpec) -> Result<()> {
        if self.n != other.n || self.dealias_fraction != other.dealias_fraction {
            return Err(SqgError::GridMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(GridSpec::new(100).is_err());
        assert!(GridSpec::new(8).is_err());
        assert!(GridSpec::new(16).is_ok());
    }

    #[test]
    fn cutoff_and_shells() {
        let g = GridSpec::new(128).unwrap();
        assert_eq!(g.k_cut(), 42);
        assert_eq!(g.q_max(), 5);
        let g = GridSpec::new(256).unwrap();
        assert_eq!(g.k_cut(), 85);
        assert_eq!(g.q_max(), 6);
        let g = GridSpec::new(16).unwrap();
        assert_eq!(g.k_cut(), 5);
        assert_eq!(g.q_max(), 2);
    }

    #[test]
    fn telescoped_low_pass_covers_band() {
        // The partial sums up to q_max equal χ(2^{-(q_max+1)}|k|), flat for
        // |k| ≤ 1.5·2^{q_max}. This must contain the whole dealiased disc.
        for n in [16, 32, 64, 128, 256, 512, 1024, 4096] {
            let g = GridSpec::new(n).unwrap();
            assert!(1.5 * 2f64.powi(g.q_max()) >= g.k_cut() as f64, "N={n}");
        }
    }

    #[test]
    fn index_round_trip() {
        let g = GridSpec::new(32).unwrap();
        for idx in 0..g.len() {
            let (k1, k2) = g.wavevector(idx);
            assert_eq!(g.flat_index(k1, k2), idx);
        }
    }
}
