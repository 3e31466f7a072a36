use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::InitialCondition;
use crate::error::{Result, SqgError};
use crate::spectral::{GridSpec, ScalarField};

/// Build θ₀ on `grid`. The result is real and supported in the dealiased disc.
/// Random spectra are drawn in a grid-independent order, so the same seed
/// gives the same trigonometric polynomial on every admissible grid.
pub fn make_initial(ic: &InitialCondition, grid: GridSpec) -> Result<ScalarField> {
    let n2 = grid.len() as f64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    match ic {
        InitialCondition::SingleMode { k1, k2, amplitude } => {
            if !grid.in_band(*k1, *k2) || k1.abs() >= grid.n() as i64 / 2 {
                return Err(SqgError::OutOfRange(format!(
                    "mode ({k1}, {k2}) outside the dealiased band |k| ≤ {}",
                    grid.k_cut()
                )));
            }
            if (*k1, *k2) == (0, 0) {
                coeffs[0] = Complex64::new(amplitude * n2, 0.0);
            } else {
                let c = Complex64::new(0.5 * amplitude * n2, 0.0);
                coeffs[grid.flat_index(*k1, *k2)] = c;
                coeffs[grid.flat_index(-k1, -k2)] = c;
            }
        }
        InitialCondition::RandomSpectrum {
            beta,
            k_min,
            k_max,
            amplitude,
            seed,
        } => {
            if !(*k_min > 0.0 && k_max >= k_min) {
                return Err(SqgError::OutOfRange(format!(
                    "random spectrum needs 0 < k_min ≤ k_max, got [{k_min}, {k_max}]"
                )));
            }
            if *k_max > grid.k_cut() as f64 {
                return Err(SqgError::OutOfRange(format!(
                    "k_max = {k_max} outside the dealiased band |k| ≤ {}",
                    grid.k_cut()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let kk = k_max.floor() as i64;
            let mut mean_square = 0.0;
            for k2 in 0..=kk {
                for k1 in -kk..=kk {
                    if k2 == 0 && k1 <= 0 {
                        continue;
                    }
                    let mag = ((k1 * k1 + k2 * k2) as f64).sqrt();
                    if mag < *k_min || mag > *k_max {
                        continue;
                    }
                    let phase = rng.gen::<f64>() * 2.0 * PI;
                    let a = mag.powf(-beta / 2.0);
                    mean_square += 0.5 * a * a;
                    let c = Complex64::from_polar(0.5 * a * n2, phase);
                    coeffs[grid.flat_index(k1, k2)] = c;
                    coeffs[grid.flat_index(-k1, -k2)] = c.conj();
                }
            }
            if mean_square == 0.0 {
                return Err(SqgError::OutOfRange(format!(
                    "no integer wavevector with {k_min} ≤ |k| ≤ {k_max}"
                )));
            }
            let s = amplitude / mean_square.sqrt();
            coeffs.iter_mut().for_each(|c| *c *= s);
        }
        InitialCondition::GaussianBlobs { blobs } => {
            for b in blobs {
                if !(b.width > 0.0) {
                    return Err(SqgError::OutOfRange(format!(
                        "blob width must be positive, got {}",
                        b.width
                    )));
                }
            }
            for (idx, c) in coeffs.iter_mut().enumerate() {
                let (k1, k2) = grid.wavevector(idx);
                if !grid.in_band(k1, k2) {
                    continue;
                }
                let ksq = (k1 * k1 + k2 * k2) as f64;
                for b in blobs {
                    let w2 = b.width * b.width;
                    let mag = b.amplitude * w2 / (2.0 * PI) * (-0.5 * w2 * ksq).exp();
                    let phase = -(k1 as f64 * b.x + k2 as f64 * b.y);
                    *c += Complex64::from_polar(mag * n2, phase);
                }
            }
        }
    }
    ScalarField::from_coeffs(grid, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::config::Blob;

    #[test]
    fn single_mode_is_cosine() {
        let g = GridSpec::new(32).unwrap();
        let ic = InitialCondition::SingleMode {
            k1: 3,
            k2: 0,
            amplitude: 1.0,
        };
        let th = make_initial(&ic, g).unwrap();
        let expect = ScalarField::from_fn(g, |x, _| (3.0 * x).cos());
        for (a, b) in th.values().iter().zip(expect.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn out_of_band_mode_rejected() {
        let g = GridSpec::new(32).unwrap();
        let ic = InitialCondition::SingleMode {
            k1: 11,
            k2: 0,
            amplitude: 1.0,
        };
        assert!(make_initial(&ic, g).is_err());
    }

    #[test]
    fn random_spectrum_deterministic_and_grid_independent() {
        let ic = InitialCondition::RandomSpectrum {
            beta: 2.0,
            k_min: 1.0,
            k_max: 6.0,
            amplitude: 0.8,
            seed: 7,
        };
        let g = GridSpec::new(64).unwrap();
        let a = make_initial(&ic, g).unwrap();
        let b = make_initial(&ic, g).unwrap();
        assert_eq!(a.values(), b.values());
        let rms = (a.values().iter().map(|v| v * v).sum::<f64>() / g.len() as f64).sqrt();
        assert!((rms - 0.8).abs() < 1e-12);
        let fine = make_initial(&ic, GridSpec::new(128).unwrap()).unwrap();
        let coarse = fine.resample(64).unwrap();
        for (x, y) in coarse.values().iter().zip(a.values()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(a.is_dealiased());
        assert!(a.mean().abs() < 1e-15);
    }

    #[test]
    fn gaussian_blob_matches_periodic_sum() {
        let g = GridSpec::new(64).unwrap();
        let w = 8.0 * g.spacing();
        let blob = Blob {
            x: 2.0,
            y: 4.5,
            width: w,
            amplitude: 1.3,
        };
        let th = make_initial(&InitialCondition::GaussianBlobs { blobs: vec![blob] }, g).unwrap();
        let exact = ScalarField::from_fn(g, |x, y| {
            let mut s = 0.0;
            for m1 in -2..=2 {
                for m2 in -2..=2 {
                    let dx = x - blob.x + 2.0 * PI * m1 as f64;
                    let dy = y - blob.y + 2.0 * PI * m2 as f64;
                    s += (-(dx * dx + dy * dy) / (2.0 * w * w)).exp();
                }
            }
            blob.amplitude * s
        });
        let err = th
            .values()
            .iter()
            .zip(exact.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-6, "{err}");
    }
}
