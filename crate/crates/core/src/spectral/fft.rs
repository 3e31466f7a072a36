//! Square 2D complex FFTs with per-size plan caching.
//!
//! Forward transforms are unnormalized (the DC coefficient of a constant
//! field `c` is `c·N²`); inverse transforms divide by `N²`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

pub struct Fft2 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

static PLANS: OnceLock<Mutex<HashMap<usize, Arc<Fft2>>>> = OnceLock::new();

/// Rows handed to one rayon task.
const ROWS_PER_TASK: usize = 16;

impl Fft2 {
    pub fn for_size(n: usize) -> Arc<Fft2> {
        let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut plans = plans.lock().expect("fft plan cache poisoned");
        plans
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                Arc::new(Fft2 {
                    n,
                    forward: planner.plan_fft_forward(n),
                    inverse: planner.plan_fft_inverse(n),
                })
            })
            .clone()
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let scale = 1.0 / (self.n * self.n) as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        assert_eq!(data.len(), n * n);
        rows(plan, data, n);
        let mut t = transpose(data, n);
        rows(plan, &mut t, n);
        transpose_into(&t, data, n);
    }
}

fn rows(plan: &Arc<dyn Fft<f64>>, data: &mut [Complex64], n: usize) {
    data.par_chunks_mut(n * ROWS_PER_TASK).for_each(|chunk| {
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(chunk, &mut scratch);
    });
}

fn transpose(src: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut dst = vec![Complex64::new(0.0, 0.0); n * n];
    transpose_into(src, &mut dst, n);
    dst
}

fn transpose_into(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    const B: usize = 32;
    dst.par_chunks_mut(n * B.min(n))
        .enumerate()
        .for_each(|(band, out)| {
            let r0 = band * B.min(n);
            let rows = out.len() / n;
            for c0 in (0..n).step_by(B) {
                for r in r0..r0 + rows {
                    for c in c0..(c0 + B).min(n) {
                        out[(r - r0) * n + c] = src[c * n + r];
                    }
                }
            }
        });
}
