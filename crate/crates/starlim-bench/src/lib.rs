//! Shared fixtures for the benches.

use starlim::algebra::rat;
use starlim::WeightVector;

/// The d = 3 weight vector used throughout the benches.
pub fn bench_weights() -> WeightVector {
    WeightVector::new(vec![rat(1, 2), rat(1, 3), rat(1, 6)]).expect("valid weights")
}
