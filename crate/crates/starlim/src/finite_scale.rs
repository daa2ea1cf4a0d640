//! Finite-scale quantities: traces of words in finitely many star
//! transpositions and one "generic" star, moments of the normalized sums
//! `s_n`, and the law-of-large-numbers companion facts.
//!
//! The generic letter [`MixedIndex::A0`] stands for a star transposition
//! whose index is fresh: distinct from every other index in the word.
//! Which fresh indices are chosen does not change the trace, and that
//! invariance is itself exercised by the verification suite. Centering a
//! word means subtracting the generic star from each letter; expanding the
//! product turns a centered trace into the inclusion-exclusion weight of
//! the word's index kernel, which is how the `s_n` moment formula
//! `E[tr s_n^k] = n^(-k/2) Σ_π (n)_|π| 𝐭(π)` arises.

use num::Zero;
use thiserror::Error;

use crate::algebra::{int, pow_i, Scalar, WeightVector};
use crate::limit_moments::{MomentEngine, MomentError};
use crate::partitions::{enumerate_partitions, PartitionError, SetPartition};
use crate::perm::Permutation;

/// Largest `k` accepted by [`s_n_moment`]; the partition sum underneath
/// walks all of `P(k)` with a `2^k` inclusion-exclusion per partition.
pub const MAX_SN_ORDER: usize = 10;

/// Cap on `n^k` for the brute-force `s_n` reference sum.
const NAIVE_SN_CAP: u128 = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FiniteScaleError {
    #[error("star index must be at least 1")]
    BadIndex,
    #[error("expected {expected} fresh indices, got {got}")]
    FreshCount { expected: usize, got: usize },
    #[error("fresh index {0} collides with another index of the word")]
    FreshCollision(usize),
    #[error("n must be at least 1")]
    NTooSmall,
    #[error("moment order {k} exceeds cap {max}")]
    OrderTooLarge { k: usize, max: usize },
    #[error("brute-force sum over {0} tuples exceeds cap {1}")]
    NaiveTooLarge(u128, u128),
    #[error(transparent)]
    Moment(#[from] MomentError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// One letter of a mixed word: a concrete star transposition or the
/// generic one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MixedIndex {
    Finite(usize),
    A0,
}

fn validate_word(word: &[MixedIndex]) -> Result<(), FiniteScaleError> {
    for letter in word {
        if matches!(letter, MixedIndex::Finite(0)) {
            return Err(FiniteScaleError::BadIndex);
        }
    }
    Ok(())
}

/// Trace of the word with every generic letter instantiated at the given
/// fresh indices (in order of occurrence). The fresh indices must be
/// pairwise distinct and avoid every concrete index of the word.
pub fn mixed_trace_with_fresh(
    w: &WeightVector,
    word: &[MixedIndex],
    fresh: &[usize],
) -> Result<Scalar, FiniteScaleError> {
    validate_word(word)?;
    let needed = word.iter().filter(|l| matches!(l, MixedIndex::A0)).count();
    if fresh.len() != needed {
        return Err(FiniteScaleError::FreshCount {
            expected: needed,
            got: fresh.len(),
        });
    }
    let finite: Vec<usize> = word
        .iter()
        .filter_map(|l| match l {
            MixedIndex::Finite(m) => Some(*m),
            MixedIndex::A0 => None,
        })
        .collect();
    for (pos, &f) in fresh.iter().enumerate() {
        if f == 0 {
            return Err(FiniteScaleError::BadIndex);
        }
        if finite.contains(&f) || fresh[..pos].contains(&f) {
            return Err(FiniteScaleError::FreshCollision(f));
        }
    }
    let mut next_fresh = fresh.iter();
    let factors: Vec<Permutation> = word
        .iter()
        .map(|l| {
            let idx = match l {
                MixedIndex::Finite(m) => *m,
                MixedIndex::A0 => *next_fresh.next().expect("counted above"),
            };
            Permutation::star_transposition(idx).expect("validated nonzero")
        })
        .collect();
    Ok(crate::algebra::character(
        w,
        &Permutation::product(factors.iter()),
    ))
}

/// Trace of the word with default fresh indices: the smallest integers
/// above every concrete index, assigned left to right.
pub fn mixed_trace(w: &WeightVector, word: &[MixedIndex]) -> Result<Scalar, FiniteScaleError> {
    validate_word(word)?;
    let max_finite = word
        .iter()
        .filter_map(|l| match l {
            MixedIndex::Finite(m) => Some(*m),
            MixedIndex::A0 => None,
        })
        .max()
        .unwrap_or(0);
    let needed = word.iter().filter(|l| matches!(l, MixedIndex::A0)).count();
    let fresh: Vec<usize> = (max_finite + 1..=max_finite + needed).collect();
    mixed_trace_with_fresh(w, word, &fresh)
}

/// The index kernel of a mixed word: concrete letters share a block iff
/// they share an index; every generic letter is its own block.
fn mixed_kernel(word: &[MixedIndex]) -> Result<SetPartition, FiniteScaleError> {
    validate_word(word)?;
    let labels: Vec<(usize, usize)> = word
        .iter()
        .enumerate()
        .map(|(pos, l)| match l {
            MixedIndex::Finite(m) => (0, *m),
            MixedIndex::A0 => (1, pos),
        })
        .collect();
    Ok(SetPartition::kernel(&labels)?)
}

/// Trace of the centered word `∏ (x_m - a_0)`: equals the
/// inclusion-exclusion weight `𝐭` of the word's index kernel, because
/// freshening the positions of a subset `S` is exactly the meet with
/// `π_S`.
pub fn centered_trace(
    engine: &MomentEngine,
    word: &[MixedIndex],
) -> Result<Scalar, FiniteScaleError> {
    if word.is_empty() {
        // the empty product traces to 1, matching the literal expansion
        return Ok(int(1));
    }
    let pi = mixed_kernel(word)?;
    Ok(engine.t_incl_excl(&pi))
}

/// The same centered trace expanded literally: every subset of positions
/// replaced by generic letters, with alternating signs.
pub fn centered_trace_bruteforce(
    w: &WeightVector,
    word: &[MixedIndex],
) -> Result<Scalar, FiniteScaleError> {
    validate_word(word)?;
    let k = word.len();
    let mut acc = int(0);
    for mask in 0u32..(1u32 << k) {
        let replaced: Vec<MixedIndex> = word
            .iter()
            .enumerate()
            .map(|(pos, &l)| {
                if mask & (1 << pos) != 0 {
                    MixedIndex::A0
                } else {
                    l
                }
            })
            .collect();
        let trace = mixed_trace(w, &replaced)?;
        if mask.count_ones() % 2 == 0 {
            acc += trace;
        } else {
            acc -= trace;
        }
    }
    Ok(acc)
}

/// A moment of `s_n`: a rational for even orders, and a rational multiple
/// of `1/√n` for odd orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SnMoment {
    Exact(Scalar),
    SqrtScaled { coefficient: Scalar },
}

impl SnMoment {
    pub fn exact(&self) -> Option<&Scalar> {
        match self {
            SnMoment::Exact(v) => Some(v),
            SnMoment::SqrtScaled { .. } => None,
        }
    }

    pub fn to_f64(&self, n: usize) -> f64 {
        match self {
            SnMoment::Exact(v) => crate::algebra::to_f64(v),
            SnMoment::SqrtScaled { coefficient } => {
                crate::algebra::to_f64(coefficient) / (n as f64).sqrt()
            }
        }
    }
}

/// Falling factorial `(n)_m = n (n-1) ⋯ (n-m+1)` as a rational; zero when
/// `m > n`.
fn falling_factorial(n: usize, m: usize) -> Scalar {
    let mut acc = int(1);
    for t in 0..m {
        if t >= n {
            return int(0);
        }
        acc *= int((n - t) as i64);
    }
    acc
}

/// Moment of the normalized centered sum
/// `s_n = n^(-1/2) Σ_{i≤n} (γ_i - a_0)`:
/// `E[tr s_n^k] = n^(-k/2) Σ_{π ∈ P(k)} (n)_|π| 𝐭(π)`.
pub fn s_n_moment(
    engine: &MomentEngine,
    n: usize,
    k: usize,
) -> Result<SnMoment, FiniteScaleError> {
    if n == 0 {
        return Err(FiniteScaleError::NTooSmall);
    }
    if k > MAX_SN_ORDER {
        return Err(FiniteScaleError::OrderTooLarge {
            k,
            max: MAX_SN_ORDER,
        });
    }
    if k == 0 {
        return Ok(SnMoment::Exact(int(1)));
    }
    let mut acc = int(0);
    for pi in enumerate_partitions(k)? {
        let t = engine.t_incl_excl(&pi);
        if !t.is_zero() {
            acc += falling_factorial(n, pi.num_blocks()) * t;
        }
    }
    scale_sn(acc, n, k)
}

fn scale_sn(acc: Scalar, n: usize, k: usize) -> Result<SnMoment, FiniteScaleError> {
    if k % 2 == 0 {
        Ok(SnMoment::Exact(acc * pow_i(&int(n as i64), -((k / 2) as i64))))
    } else {
        Ok(SnMoment::SqrtScaled {
            coefficient: acc * pow_i(&int(n as i64), -((k / 2) as i64)),
        })
    }
}

/// The same moment as a literal sum over all `n^k` index tuples of the
/// centered word traces. Exponential; guarded.
pub fn s_n_moment_naive(
    engine: &MomentEngine,
    n: usize,
    k: usize,
) -> Result<SnMoment, FiniteScaleError> {
    if n == 0 {
        return Err(FiniteScaleError::NTooSmall);
    }
    if k == 0 {
        return Ok(SnMoment::Exact(int(1)));
    }
    let total = (n as u128).pow(k as u32);
    if total > NAIVE_SN_CAP {
        return Err(FiniteScaleError::NaiveTooLarge(total, NAIVE_SN_CAP));
    }
    let w = engine.weights();
    let mut acc = int(0);
    let mut tuple = vec![1usize; k];
    'tuples: loop {
        let word: Vec<MixedIndex> = tuple.iter().map(|&i| MixedIndex::Finite(i)).collect();
        acc += centered_trace_bruteforce(w, &word)?;
        let mut pos = 0;
        loop {
            if pos == k {
                break 'tuples;
            }
            tuple[pos] += 1;
            if tuple[pos] <= n {
                break;
            }
            tuple[pos] = 1;
            pos += 1;
        }
    }
    scale_sn(acc, n, k)
}

/// Variance of the plain average `(1/n) Σ_{i≤n} γ_i` around the generic
/// star: `(1 - p_3) / n`, where `p_3` is the third power sum.
pub fn lln_variance(w: &WeightVector, n: usize) -> Result<Scalar, FiniteScaleError> {
    if n == 0 {
        return Err(FiniteScaleError::NTooSmall);
    }
    let p3 = w.power_sum(3).expect("positive order");
    Ok((int(1) - p3) / int(n as i64))
}

/// The same variance expanded into mixed traces term by term:
/// `n^(-2) Σ_{i,j} tr(γ_i γ_j) - n^(-1) Σ_i (tr(γ_i a_0) + tr(a_0 γ_i))
/// + tr(a_0²)`. Quadratic in `n`.
pub fn lln_variance_expansion(w: &WeightVector, n: usize) -> Result<Scalar, FiniteScaleError> {
    if n == 0 {
        return Err(FiniteScaleError::NTooSmall);
    }
    let mut square = int(0);
    for i in 1..=n {
        for j in 1..=n {
            square += mixed_trace(w, &[MixedIndex::Finite(i), MixedIndex::Finite(j)])?;
        }
    }
    let mut cross = int(0);
    for i in 1..=n {
        cross += mixed_trace(w, &[MixedIndex::Finite(i), MixedIndex::A0])?;
        cross += mixed_trace(w, &[MixedIndex::A0, MixedIndex::Finite(i)])?;
    }
    let a0_square = mixed_trace(w, &[MixedIndex::A0, MixedIndex::A0])?;
    let n_scalar = int(n as i64);
    Ok(square / (&n_scalar * &n_scalar) - cross / n_scalar + a0_square)
}

/// One atom of the spectral distribution of the generic star under the
/// weighted trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralAtom {
    pub atom: Scalar,
    pub mass: Scalar,
}

/// The spectral distribution of `a_0`: an atom at every distinct weight
/// `v`, with mass `v` times its multiplicity. Its `k`-th moment is the
/// power sum `p_(k+1)`.
pub fn a0_spectral(w: &WeightVector) -> Vec<SpectralAtom> {
    let mut atoms: Vec<SpectralAtom> = Vec::new();
    for v in w.weights() {
        match atoms.last_mut() {
            Some(last) if last.atom == *v => last.mass += v,
            _ => atoms.push(SpectralAtom {
                atom: v.clone(),
                mass: v.clone(),
            }),
        }
    }
    atoms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use num::Signed;
    use MixedIndex::{Finite, A0};

    fn weights(parts: &[(i64, i64)]) -> WeightVector {
        WeightVector::new(parts.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    fn test_weights() -> Vec<WeightVector> {
        vec![
            weights(&[(1, 2), (1, 2)]),
            weights(&[(2, 3), (1, 3)]),
            weights(&[(1, 2), (1, 3), (1, 6)]),
        ]
    }

    #[test]
    fn generic_words_give_power_sums() {
        for w in test_weights() {
            for k in 1..=5usize {
                let word = vec![A0; k];
                assert_eq!(
                    mixed_trace(&w, &word).unwrap(),
                    w.power_sum(k + 1).unwrap(),
                    "k={k} weights {w}"
                );
            }
        }
    }

    #[test]
    fn small_mixed_traces() {
        let w = weights(&[(1, 2), (1, 3), (1, 6)]);
        let p2 = w.power_sum(2).unwrap();
        let p3 = w.power_sum(3).unwrap();
        assert_eq!(mixed_trace(&w, &[Finite(3)]).unwrap(), p2.clone());
        assert_eq!(mixed_trace(&w, &[A0]).unwrap(), p2);
        assert_eq!(mixed_trace(&w, &[Finite(1), Finite(1)]).unwrap(), int(1));
        assert_eq!(mixed_trace(&w, &[Finite(1), A0]).unwrap(), p3.clone());
        assert_eq!(mixed_trace(&w, &[A0, Finite(5)]).unwrap(), p3.clone());
        assert_eq!(mixed_trace(&w, &[A0, A0]).unwrap(), p3);
        assert!(mixed_trace(&w, &[Finite(0)]).is_err());
    }

    #[test]
    fn fresh_choice_does_not_matter() {
        let w = weights(&[(1, 2), (1, 3), (1, 6)]);
        let word = [Finite(2), A0, Finite(2), A0, Finite(5)];
        let default = mixed_trace(&w, &word).unwrap();
        for fresh in [[6, 7], [7, 6], [1, 9], [100, 3]] {
            assert_eq!(
                mixed_trace_with_fresh(&w, &word, &fresh).unwrap(),
                default,
                "fresh {fresh:?}"
            );
        }
        assert!(matches!(
            mixed_trace_with_fresh(&w, &word, &[2, 9]),
            Err(FiniteScaleError::FreshCollision(2))
        ));
        assert!(matches!(
            mixed_trace_with_fresh(&w, &word, &[8, 8]),
            Err(FiniteScaleError::FreshCollision(8))
        ));
        assert!(matches!(
            mixed_trace_with_fresh(&w, &word, &[8]),
            Err(FiniteScaleError::FreshCount { .. })
        ));
    }

    #[test]
    fn centered_trace_matches_bruteforce_on_all_short_words() {
        let letters = [Finite(1), Finite(2), A0];
        for w in test_weights() {
            let engine = MomentEngine::new(w.clone());
            for len in 1..=4usize {
                let mut stack = vec![Vec::new()];
                for _ in 0..len {
                    stack = stack
                        .into_iter()
                        .flat_map(|word: Vec<MixedIndex>| {
                            letters.iter().map(move |&l| {
                                let mut next = word.clone();
                                next.push(l);
                                next
                            })
                        })
                        .collect();
                }
                for word in stack {
                    assert_eq!(
                        centered_trace(&engine, &word).unwrap(),
                        centered_trace_bruteforce(&w, &word).unwrap(),
                        "word {word:?} weights {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn centered_single_letters_vanish() {
        let engine = MomentEngine::new(weights(&[(1, 2), (1, 2)]));
        assert_eq!(centered_trace(&engine, &[Finite(4)]).unwrap(), int(0));
        assert_eq!(centered_trace(&engine, &[A0]).unwrap(), int(0));
    }

    #[test]
    fn second_sn_moment_is_constant_in_n() {
        for w in test_weights() {
            let engine = MomentEngine::new(w.clone());
            let expect = int(1) - w.power_sum(3).unwrap();
            for n in [1usize, 2, 5, 8, 32] {
                assert_eq!(
                    s_n_moment(&engine, n, 2).unwrap(),
                    SnMoment::Exact(expect.clone()),
                    "n={n} weights {w}"
                );
            }
        }
    }

    #[test]
    fn sn_moments_match_naive_tuple_sums() {
        for w in test_weights() {
            let engine = MomentEngine::new(w.clone());
            for n in 1..=3usize {
                for k in 0..=4usize {
                    assert_eq!(
                        s_n_moment(&engine, n, k).unwrap(),
                        s_n_moment_naive(&engine, n, k).unwrap(),
                        "n={n} k={k} weights {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn first_sn_moment_vanishes() {
        let engine = MomentEngine::new(weights(&[(2, 3), (1, 3)]));
        for n in [1usize, 4, 9] {
            assert_eq!(
                s_n_moment(&engine, n, 1).unwrap(),
                SnMoment::SqrtScaled {
                    coefficient: int(0)
                }
            );
        }
    }

    #[test]
    fn sn_guards() {
        let engine = MomentEngine::new(weights(&[(1, 2), (1, 2)]));
        assert!(matches!(
            s_n_moment(&engine, 0, 2),
            Err(FiniteScaleError::NTooSmall)
        ));
        assert!(matches!(
            s_n_moment(&engine, 4, 11),
            Err(FiniteScaleError::OrderTooLarge { .. })
        ));
        assert!(matches!(
            s_n_moment_naive(&engine, 50, 10),
            Err(FiniteScaleError::NaiveTooLarge(..))
        ));
    }

    #[test]
    fn even_sn_moments_approach_the_limit() {
        let w = weights(&[(1, 2), (1, 3), (1, 6)]);
        let engine = MomentEngine::new(w);
        for k in [4usize, 6] {
            let limit = engine.moment(crate::limit_moments::Route::B, k).unwrap();
            let near = s_n_moment(&engine, 32, k).unwrap();
            let far = s_n_moment(&engine, 8, k).unwrap();
            let gap = |m: &SnMoment| (m.exact().unwrap() - &limit).abs();
            assert!(gap(&near) < gap(&far), "k={k}");
        }
    }

    #[test]
    fn lln_variance_matches_expansion() {
        for w in test_weights() {
            for n in [1usize, 2, 8, 32] {
                assert_eq!(
                    lln_variance(&w, n).unwrap(),
                    lln_variance_expansion(&w, n).unwrap(),
                    "n={n} weights {w}"
                );
            }
        }
    }

    #[test]
    fn spectral_atoms_reproduce_power_sums() {
        for w in [
            weights(&[(1, 2), (1, 3), (1, 6)]),
            weights(&[(1, 2), (1, 4), (1, 4)]),
            WeightVector::uniform(3).unwrap(),
        ] {
            let atoms = a0_spectral(&w);
            let total: Scalar = atoms.iter().map(|a| a.mass.clone()).sum();
            assert_eq!(total, int(1));
            for k in 0..=5usize {
                let moment: Scalar = atoms
                    .iter()
                    .map(|a| &a.mass * pow_i(&a.atom, k as i64))
                    .sum();
                assert_eq!(moment, w.power_sum(k + 1).unwrap(), "k={k} weights {w}");
            }
        }
        assert_eq!(a0_spectral(&WeightVector::uniform(4).unwrap()).len(), 1);
        assert_eq!(a0_spectral(&weights(&[(1, 2), (1, 4), (1, 4)])).len(), 2);
    }
}
