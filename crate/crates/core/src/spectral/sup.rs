//! Sup norm of the trigonometric interpolant. The grid maximum can miss a
//! peak lying between nodes by O(h²|∇²θ|); Newton steps on the interpolant
//! from the tallest local grid extrema recover it to round-off.

use num_complex::Complex64;

use super::field::ScalarField;

const CANDIDATES: usize = 8;
const NEWTON_STEPS: usize = 12;

struct Interpolant {
    /// (k₁ + K, k₂ + K, k₁, k₂, ĉ/N²) for every nonzero coefficient.
    modes: Vec<(usize, usize, f64, f64, Complex64)>,
    kmax: i64,
}

impl Interpolant {
    fn new(theta: &ScalarField) -> Self {
        let g = theta.grid();
        let scale = 1.0 / g.len() as f64;
        let mut kmax = 0;
        let raw: Vec<(i64, i64, Complex64)> = theta
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(idx, c)| {
                let (k1, k2) = g.wavevector(idx);
                kmax = kmax.max(k1.abs()).max(k2.abs());
                (k1, k2, c * scale)
            })
            .collect();
        let modes = raw
            .into_iter()
            .map(|(k1, k2, c)| {
                (
                    (k1 + kmax) as usize,
                    (k2 + kmax) as usize,
                    k1 as f64,
                    k2 as f64,
                    c,
                )
            })
            .collect();
        Interpolant { modes, kmax }
    }

    /// Upper bound on ‖∇²θ‖ from the coefficient moduli.
    fn curvature_bound(&self) -> f64 {
        self.modes
            .iter()
            .map(|&(_, _, k1, k2, c)| c.norm() * (k1 * k1 + k2 * k2))
            .sum()
    }

    fn phases(&self, x: f64) -> Vec<Complex64> {
        (-self.kmax..=self.kmax)
            .map(|k| Complex64::cis(k as f64 * x))
            .collect()
    }

    /// Value, gradient and Hessian (xx, xy, yy) at (x, y).
    fn jet(&self, x: f64, y: f64) -> (f64, [f64; 2], [f64; 3]) {
        let (ex, ey) = (self.phases(x), self.phases(y));
        let (mut v, mut g, mut h) = (0.0, [0.0; 2], [0.0; 3]);
        for &(i1, i2, k1, k2, c) in &self.modes {
            let z = c * ex[i1] * ey[i2];
            // d/dx of Re(z) = Re(i k1 z) = −k1 Im z
            v += z.re;
            g[0] -= k1 * z.im;
            g[1] -= k2 * z.im;
            h[0] -= k1 * k1 * z.re;
            h[1] -= k1 * k2 * z.re;
            h[2] -= k2 * k2 * z.re;
        }
        (v, g, h)
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        let (ex, ey) = (self.phases(x), self.phases(y));
        self.modes
            .iter()
            .map(|&(i1, i2, _, _, c)| (c * ex[i1] * ey[i2]).re)
            .sum()
    }

    /// Climb s·θ from (x, y) with damped Newton steps no longer than `h`.
    fn climb(&self, mut x: f64, mut y: f64, s: f64, h: f64) -> f64 {
        let mut best = s * self.value(x, y);
        for _ in 0..NEWTON_STEPS {
            let (_, g, hs) = self.jet(x, y);
            let (gx, gy) = (s * g[0], s * g[1]);
            let (a, b, c) = (s * hs[0], s * hs[1], s * hs[2]);
            // Levenberg shift so the model is concave along flat directions.
            let top = 0.5 * (a + c) + (0.25 * (a - c) * (a - c) + b * b).sqrt();
            let mu = top.max(0.0) + 1e-6 * (a.abs() + c.abs()) + f64::MIN_POSITIVE;
            let (a, c) = (a - mu, c - mu);
            let det = a * c - b * b;
            let mut dx = -(c * gx - b * gy) / det;
            let mut dy = -(a * gy - b * gx) / det;
            if !(dx.is_finite() && dy.is_finite()) {
                break;
            }
            let len = dx.hypot(dy);
            if len > h {
                dx *= h / len;
                dy *= h / len;
            }
            let mut moved = false;
            for _ in 0..4 {
                let v = s * self.value(x + dx, y + dy);
                if v > best {
                    best = v;
                    x += dx;
                    y += dy;
                    moved = true;
                    break;
                }
                dx *= 0.5;
                dy *= 0.5;
            }
            if !moved || dx.hypot(dy) < 1e-13 {
                break;
            }
        }
        best
    }
}

/// ‖θ‖_∞ of the band-limited function whose samples are the grid values.
pub fn sup_norm(theta: &ScalarField) -> f64 {
    let g = theta.grid();
    let n = g.n();
    let v = theta.values();
    let grid_max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if grid_max == 0.0 || n < 3 {
        return grid_max;
    }
    let at = |i: usize, j: usize| v[(j % n) * n + (i % n)].abs();
    let mut peaks: Vec<(f64, usize)> = (0..g.len())
        .filter_map(|idx| {
            let (i, j) = (idx % n, idx / n);
            let c = v[idx].abs();
            let is_peak = [
                (n - 1, n - 1),
                (0, n - 1),
                (1, n - 1),
                (n - 1, 0),
                (1, 0),
                (n - 1, 1),
                (0, 1),
                (1, 1),
            ]
            .iter()
            .all(|&(di, dj)| at(i + di, j + dj) <= c);
            is_peak.then_some((c, idx))
        })
        .collect();
    let interp = Interpolant::new(theta);
    let h = g.spacing();
    // A peak of the interpolant lies within h/√2 of a node and has zero
    // gradient there, so it exceeds the node value by at most h²/4·‖∇²θ‖.
    let gain = 0.25 * h * h * interp.curvature_bound();
    peaks.retain(|p| p.0 + gain > grid_max);
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
    peaks.truncate(CANDIDATES);
    peaks
        .iter()
        .map(|&(_, idx)| {
            let (x, y) = g.point(idx);
            interp.climb(x, y, v[idx].signum(), h)
        })
        .fold(grid_max, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;

    #[test]
    fn finds_peak_between_nodes() {
        let g = GridSpec::new(32).unwrap();
        let h = g.spacing();
        // Peak of height 2 at an off-grid point.
        let (x0, y0) = (0.37 * h + 1.0, 0.61 * h + 2.0);
        let th = ScalarField::from_fn(g, |x, y| {
            2.0 * (3.0 * (x - x0)).cos() * (2.0 * (y - y0)).cos()
        });
        let grid_max = th.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(2.0 - grid_max > 1e-3);
        assert!((sup_norm(&th) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn negative_extremum_and_zero() {
        let g = GridSpec::new(16).unwrap();
        let th = ScalarField::from_fn(g, |x, _| -1.5 * (x - 0.1).cos() + 0.25 * (2.0 * x).sin());
        let grid_max = th.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let s = sup_norm(&th);
        assert!(s >= grid_max);
        // Brute-force sup on a fine sampling of the same trigonometric polynomial.
        let fine = (0..200_000)
            .map(|i| {
                let x = i as f64 * 2.0 * std::f64::consts::PI / 200_000.0;
                (-1.5 * (x - 0.1).cos() + 0.25 * (2.0 * x).sin()).abs()
            })
            .fold(0.0f64, f64::max);
        assert!((s - fine).abs() < 1e-8);
        assert_eq!(sup_norm(&ScalarField::zeros(g)), 0.0);
    }
}
