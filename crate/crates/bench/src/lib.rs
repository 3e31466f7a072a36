//! Fixtures shared by the benchmarks.

use sqg_core::solver::{make_initial, InitialCondition};
use sqg_core::{GridSpec, ScalarField};

/// Smooth random field with a k⁻³ energy spectrum filling half the band.
pub fn random_field(n: usize, seed: u64) -> ScalarField {
    let grid = GridSpec::new(n).expect("benchmark grid");
    let ic = InitialCondition::RandomSpectrum {
        beta: 3.0,
        k_min: 1.0,
        k_max: (grid.k_cut() / 2) as f64,
        amplitude: 1.0,
        seed,
    };
    make_initial(&ic, grid).expect("band-limited spectrum")
}
