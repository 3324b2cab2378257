//! Shared inputs for the benchmarks in `benches/`.

use edgewire::{Complex64, SpinAmplitudes, WireParams};

/// Chain sizes the spectrum benchmarks sweep over.
pub const CHAIN_SIZES: [usize; 3] = [59, 201, 401];

pub fn wire(num_sites: usize) -> WireParams {
    WireParams::new(num_sites, 1.0, 2.0 / 3.0).expect("odd chain with positive hoppings")
}

/// A generic complex spin state, so no branch is trivially zero.
pub fn spin() -> SpinAmplitudes {
    SpinAmplitudes::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).expect("unit norm")
}
