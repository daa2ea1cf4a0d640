//! Exact moments of the central-limit law of star transpositions.
//!
//! The random variables are the normalized sums `s_n` of the star
//! transpositions `(1,2), (1,3), …, (1,n+1)`, centered by the generic
//! star and scaled by `√n`, with expectations taken in a character of
//! the infinite symmetric group determined by a finite rational weight
//! vector. The crate computes the moments of the limiting law exactly
//! (as big rationals) along four independent routes and cross-checks
//! them bit for bit:
//!
//! * route A: pairings weighted by the inclusion-exclusion function `𝐭`;
//! * route B: a signed double-factorial sum over partitions with blocks
//!   of size at most 2, weighted by the character of `τ_π`;
//! * route C: bicoloured pairings with weight-colouring sums;
//! * route D: trace moments of a matrix model with a traceless Gaussian
//!   diagonal and CCR-twisted off-diagonal entries.
//!
//! Supporting modules cover permutations and set partitions, Wick-style
//! pairing sums, the finite-`n` moment formula, and a verification layer
//! that exercises the combinatorial identities the routes rest on.

pub mod algebra;
pub mod ccr_gue;
pub mod counting;
pub mod finite_scale;
pub mod limit_moments;
pub mod partitions;
pub mod perm;
pub mod verify;

pub use algebra::{
    character, format_rational, parse_rational, to_f64, AlgebraError, Scalar, WeightVector,
};
pub use ccr_gue::{
    ccr_normal_order_oracle, ccr_wick, convolution_check, entry_moment, entry_moment_factored,
    gaussian_wick, gue_moment, gue_moment_naive, matrix_moment, matrix_moment_naive, CcrGueError,
    CovarianceMatrix, EntryMomentSpec, StarLetter, StarWord, MAX_MOMENT_ORDER,
};
pub use finite_scale::{
    a0_spectral, centered_trace, centered_trace_bruteforce, lln_variance, lln_variance_expansion,
    mixed_trace, mixed_trace_with_fresh, s_n_moment, s_n_moment_naive, FiniteScaleError,
    MixedIndex, SnMoment, SpectralAtom, MAX_SN_ORDER,
};
pub use limit_moments::{
    chi_tau_colouring_bruteforce, chi_tau_via_sigma, MomentEngine, MomentError, Route,
    SigmaVariant,
};
pub use partitions::{
    b_pi, enumerate_bicoloured, enumerate_le2, enumerate_pairings, enumerate_partitions, sigma_pi,
    tau_pi, AtMostPairPartition, BicolouredPairPartition, BlockOrder, PairColour, PartitionError,
    SetPartition, ENUM_CAP,
};
pub use perm::{OrbitDecomposition, PermError, Permutation};
pub use verify::{run_default, SuiteOutcome};
