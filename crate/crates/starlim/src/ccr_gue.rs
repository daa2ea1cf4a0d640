//! Wick calculus for the traceless matrix model and its GUE comparison.
//!
//! The model is a `d × d` matrix `M` whose diagonal carries a centered
//! Gaussian family with covariance `c_uu = w_u - w_u²`, `c_uv = -w_u w_v`
//! (rows sum to zero, hence "traceless"), and whose off-diagonal entries
//! `a_uv` satisfy canonical commutation relations twisted by the weights:
//! in the state, `a_uv` and its adjoint `a_vu` pair with weights `w_v`
//! (annihilator first) and `w_u` (creator first). All moments reduce to
//! pairing sums:
//!
//! * [`gaussian_wick`]: real Gaussian families, plain covariance pairing.
//! * [`ccr_wick`]: a single CCR pair, pairings weighted by letter order.
//! * [`entry_moment`]: products of matrix entries, bicoloured pairings
//!   (blue = CCR-type pair across a transposed index pair, red = diagonal
//!   Gaussian pair), with signs carried by the red pairs.
//! * [`matrix_moment`]: normalized trace moments of `M^k` in the weighted
//!   state, i.e. the moment sequence the exact limit routes must match.
//! * [`gue_moment`]: moments of a plain normalized GUE matrix, and
//!   [`convolution_check`], which splits GUE moments into the model's
//!   moments convolved with an independent Gaussian of variance `1/d²`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{int, pow_i, rat, Scalar, WeightVector};
use crate::counting::{binomial, pairing_count};
use crate::partitions::{
    enumerate_bicoloured, enumerate_pairings, sigma_pi, AtMostPairPartition, PairColour,
    PartitionError,
};
use crate::perm::{PermError, Permutation};

/// Largest trace-moment order the exponential-cost routines accept.
pub const MAX_MOMENT_ORDER: usize = 12;

/// Cap on tuple counts for the brute-force reference summations.
const NAIVE_TUPLE_CAP: u128 = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CcrGueError {
    #[error("index tuples have different lengths: {0} vs {1}")]
    MismatchedLengths(usize, usize),
    #[error("matrix index {idx} outside 1..={d}")]
    IndexOutOfRange { idx: usize, d: usize },
    #[error("covariance matrix must be square, symmetric and of size >= 1")]
    BadCovariance,
    #[error("moment order {k} exceeds cap {max}")]
    OrderTooLarge { k: usize, max: usize },
    #[error("matrix dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("brute-force sum over {0} tuples exceeds cap {1}")]
    NaiveTooLarge(u128, u128),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A symmetric rational covariance matrix, indexed 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovarianceMatrix {
    entries: Vec<Vec<Scalar>>,
}

impl CovarianceMatrix {
    pub fn new(entries: Vec<Vec<Scalar>>) -> Result<Self, CcrGueError> {
        let d = entries.len();
        if d == 0 || entries.iter().any(|row| row.len() != d) {
            return Err(CcrGueError::BadCovariance);
        }
        for (a, row) in entries.iter().enumerate() {
            for b in a + 1..d {
                if row[b] != entries[b][a] {
                    return Err(CcrGueError::BadCovariance);
                }
            }
        }
        Ok(CovarianceMatrix { entries })
    }

    /// Covariance of the diagonal Gaussian family of the traceless model:
    /// `c_uu = w_u - w_u²`, `c_uv = -w_u w_v`. Every row sums to zero.
    pub fn diagonal_gaussian(w: &WeightVector) -> Self {
        let d = w.d();
        let entries = (1..=d)
            .map(|a| {
                (1..=d)
                    .map(|b| {
                        if a == b {
                            w.weight(a) - w.weight(a) * w.weight(a)
                        } else {
                            -(w.weight(a) * w.weight(b))
                        }
                    })
                    .collect()
            })
            .collect();
        CovarianceMatrix { entries }
    }

    pub fn d(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, a: usize, b: usize) -> &Scalar {
        &self.entries[a - 1][b - 1]
    }
}

/// Moment of a centered Gaussian family: sum over pairings of `idx`
/// positions, each pair `{p < q}` contributing `cov[idx(p), idx(q)]`.
/// Odd length gives zero, empty gives one.
pub fn gaussian_wick(cov: &CovarianceMatrix, idx: &[usize]) -> Result<Scalar, CcrGueError> {
    for &a in idx {
        if a == 0 || a > cov.d() {
            return Err(CcrGueError::IndexOutOfRange { idx: a, d: cov.d() });
        }
    }
    let m = idx.len();
    if m == 0 {
        return Ok(int(1));
    }
    if m % 2 == 1 {
        return Ok(int(0));
    }
    let mut acc = int(0);
    for rho in enumerate_pairings(m)? {
        let mut term = int(1);
        for pair in rho.blocks() {
            let (p, q) = (pair[0], pair[1]);
            term *= cov.get(idx[p - 1], idx[q - 1]);
        }
        acc += term;
    }
    Ok(acc)
}

/// Letters of a word in one CCR pair: `Plain` is the annihilator-type
/// letter, `Star` its adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StarLetter {
    Plain,
    Star,
}

pub type StarWord = Vec<StarLetter>;

fn pair_weight(
    earlier: StarLetter,
    later: StarLetter,
    omega_plain_star: &Scalar,
    omega_star_plain: &Scalar,
) -> Option<Scalar> {
    match (earlier, later) {
        (StarLetter::Plain, StarLetter::Star) => Some(omega_plain_star.clone()),
        (StarLetter::Star, StarLetter::Plain) => Some(omega_star_plain.clone()),
        _ => None,
    }
}

/// State value of a CCR word as a pairing sum: pair `{p < q}` weighs
/// `omega_plain_star` when the word reads `Plain … Star` across it and
/// `omega_star_plain` for `Star … Plain`; same-letter pairs kill the term.
pub fn ccr_wick(
    omega_plain_star: &Scalar,
    omega_star_plain: &Scalar,
    word: &[StarLetter],
) -> Result<Scalar, CcrGueError> {
    let m = word.len();
    if m == 0 {
        return Ok(int(1));
    }
    if m % 2 == 1 {
        return Ok(int(0));
    }
    let mut acc = int(0);
    for rho in enumerate_pairings(m)? {
        let mut term = int(1);
        let mut alive = true;
        for pair in rho.blocks() {
            let (p, q) = (pair[0], pair[1]);
            match pair_weight(word[p - 1], word[q - 1], omega_plain_star, omega_star_plain) {
                Some(wgt) => term *= wgt,
                None => {
                    alive = false;
                    break;
                }
            }
        }
        if alive {
            acc += term;
        }
    }
    Ok(acc)
}

/// Independent evaluation of the same state value by normal ordering.
///
/// Uses only two facts: swapping an adjacent `Star, Plain` to
/// `Plain, Star` costs `(omega_star_plain - omega_plain_star)` times the
/// word with both letters removed, and a normal-ordered word
/// `Plain^p Star^q` has value `δ_{pq} · p! · omega_plain_star^p`.
pub fn ccr_normal_order_oracle(
    omega_plain_star: &Scalar,
    omega_star_plain: &Scalar,
    word: &[StarLetter],
) -> Scalar {
    // normal-ordered: no Star strictly before a Plain
    let anti = word
        .windows(2)
        .position(|pair| pair[0] == StarLetter::Star && pair[1] == StarLetter::Plain);
    match anti {
        None => {
            let p = word.iter().filter(|&&l| l == StarLetter::Plain).count();
            let q = word.len() - p;
            if p != q {
                return int(0);
            }
            let mut acc = int(1);
            for f in 1..=p {
                acc *= int(f as i64);
            }
            acc * pow_i(omega_plain_star, p as i64)
        }
        Some(j) => {
            let mut swapped = word.to_vec();
            swapped.swap(j, j + 1);
            let mut dropped = word.to_vec();
            dropped.drain(j..j + 2);
            ccr_normal_order_oracle(omega_plain_star, omega_star_plain, &swapped)
                + (omega_star_plain - omega_plain_star)
                    * ccr_normal_order_oracle(omega_plain_star, omega_star_plain, &dropped)
        }
    }
}

/// Row and column index tuples of an entry product
/// `a_{i(1) j(1)} ⋯ a_{i(k) j(k)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntryMomentSpec {
    i: Vec<usize>,
    j: Vec<usize>,
}

impl EntryMomentSpec {
    pub fn new(i: Vec<usize>, j: Vec<usize>) -> Result<Self, CcrGueError> {
        if i.len() != j.len() {
            return Err(CcrGueError::MismatchedLengths(i.len(), j.len()));
        }
        Ok(EntryMomentSpec { i, j })
    }

    /// The trace word of `M^k` for a given row tuple: `j = i ∘ η_k`.
    pub fn trace_word(i: Vec<usize>) -> Self {
        let k = i.len();
        let j = (0..k).map(|p| i[(p + 1) % k]).collect();
        EntryMomentSpec { i, j }
    }

    pub fn len(&self) -> usize {
        self.i.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i.is_empty()
    }

    pub fn rows(&self) -> &[usize] {
        &self.i
    }

    pub fn cols(&self) -> &[usize] {
        &self.j
    }

    fn validate(&self, d: usize) -> Result<(), CcrGueError> {
        for &a in self.i.iter().chain(self.j.iter()) {
            if a == 0 || a > d {
                return Err(CcrGueError::IndexOutOfRange { idx: a, d });
            }
        }
        Ok(())
    }
}

/// State value of the entry product described by `spec`: a sum over
/// bicoloured pairings where a blue pair `{p < q}` needs
/// `i(p) = j(q), i(q) = j(p)` and contributes `w_{i(q)}`, and a red pair
/// needs `i(p) = j(p), i(q) = j(q)` and contributes `-w_{i(p)} w_{i(q)}`.
pub fn entry_moment(w: &WeightVector, spec: &EntryMomentSpec) -> Result<Scalar, CcrGueError> {
    spec.validate(w.d())?;
    let k = spec.len();
    if k == 0 {
        return Ok(int(1));
    }
    if k % 2 == 1 {
        return Ok(int(0));
    }
    let (i, j) = (spec.rows(), spec.cols());
    let mut acc = int(0);
    for rho in enumerate_bicoloured(k)? {
        let mut term = int(1);
        let mut alive = true;
        for &(p, q, colour) in rho.pairs() {
            let (ip, iq) = (i[p - 1], i[q - 1]);
            let (jp, jq) = (j[p - 1], j[q - 1]);
            match colour {
                PairColour::Blue => {
                    if ip == jq && iq == jp {
                        term *= w.weight(iq);
                    } else {
                        alive = false;
                        break;
                    }
                }
                PairColour::Red => {
                    if ip == jp && iq == jq {
                        term *= -(w.weight(ip) * w.weight(iq));
                    } else {
                        alive = false;
                        break;
                    }
                }
            }
        }
        if alive {
            acc += term;
        }
    }
    Ok(acc)
}

/// The same value computed through the independence structure of the
/// model: diagonal positions feed one Gaussian Wick sum, each unordered
/// index pair `{u < v}` feeds one CCR Wick sum
/// (`omega_plain_star = w_v`, `omega_star_plain = w_u`), and positions
/// whose index pairs differ in any other way make the whole product zero
/// unless they can all be swallowed by those classes.
pub fn entry_moment_factored(
    w: &WeightVector,
    spec: &EntryMomentSpec,
) -> Result<Scalar, CcrGueError> {
    spec.validate(w.d())?;
    let mut diagonal_idx = Vec::new();
    let mut classes: std::collections::BTreeMap<(usize, usize), StarWord> =
        std::collections::BTreeMap::new();
    for p in 0..spec.len() {
        let (a, b) = (spec.rows()[p], spec.cols()[p]);
        if a == b {
            diagonal_idx.push(a);
        } else {
            let key = (a.min(b), a.max(b));
            let letter = if a < b {
                StarLetter::Plain
            } else {
                StarLetter::Star
            };
            classes.entry(key).or_default().push(letter);
        }
    }
    let mut acc = gaussian_wick(&CovarianceMatrix::diagonal_gaussian(w), &diagonal_idx)?;
    for ((u, v), word) in classes {
        acc *= ccr_wick(w.weight(v), w.weight(u), &word)?;
    }
    Ok(acc)
}

/// Index tuples that can support a nonzero bicoloured pairing term for a
/// trace word: for each bicoloured pairing, the pair constraints force the
/// row tuple to be constant on the orbits of `η_k · σ_blue`, so the union
/// of those constant tuples covers every nonzero term.
fn trace_candidates(d: usize, k: usize) -> Result<BTreeSet<Vec<usize>>, CcrGueError> {
    let eta = Permutation::forward_cycle(k);
    let mut candidates = BTreeSet::new();
    for rho in enumerate_bicoloured(k)? {
        let orbits_owned = eta.compose(&rho.sigma_blue()).orbits(k)?;
        let orbits = orbits_owned.orbits();
        let mut colours = vec![1usize; orbits.len()];
        'assignments: loop {
            let mut tuple = vec![0usize; k];
            for (oi, orbit) in orbits.iter().enumerate() {
                for &m in orbit {
                    tuple[m - 1] = colours[oi];
                }
            }
            candidates.insert(tuple);
            let mut pos = 0;
            loop {
                if pos == colours.len() {
                    break 'assignments;
                }
                colours[pos] += 1;
                if colours[pos] <= d {
                    break;
                }
                colours[pos] = 1;
                pos += 1;
            }
        }
    }
    Ok(candidates)
}

/// Normalized trace moment of `M^k` in the weighted state:
/// sum over row tuples `i` of `w_{i(1)} ·` [`entry_moment`] of the trace
/// word, restricted to the candidate tuples that can carry a nonzero term.
pub fn matrix_moment(w: &WeightVector, k: usize) -> Result<Scalar, CcrGueError> {
    if k == 0 {
        return Ok(int(1));
    }
    if k > MAX_MOMENT_ORDER {
        return Err(CcrGueError::OrderTooLarge {
            k,
            max: MAX_MOMENT_ORDER,
        });
    }
    if k % 2 == 1 {
        return Ok(int(0));
    }
    let mut acc = int(0);
    for tuple in trace_candidates(w.d(), k)? {
        let first = tuple[0];
        let spec = EntryMomentSpec::trace_word(tuple);
        acc += w.weight(first) * entry_moment(w, &spec)?;
    }
    Ok(acc)
}

/// Same moment by unpruned summation over all `d^k` row tuples.
pub fn matrix_moment_naive(w: &WeightVector, k: usize) -> Result<Scalar, CcrGueError> {
    if k == 0 {
        return Ok(int(1));
    }
    if k > MAX_MOMENT_ORDER {
        return Err(CcrGueError::OrderTooLarge {
            k,
            max: MAX_MOMENT_ORDER,
        });
    }
    let d = w.d();
    let total = (d as u128).pow(k as u32);
    if total > NAIVE_TUPLE_CAP {
        return Err(CcrGueError::NaiveTooLarge(total, NAIVE_TUPLE_CAP));
    }
    let mut acc = int(0);
    let mut tuple = vec![1usize; k];
    'tuples: loop {
        let spec = EntryMomentSpec::trace_word(tuple.clone());
        acc += w.weight(tuple[0]) * entry_moment(w, &spec)?;
        let mut pos = 0;
        loop {
            if pos == k {
                break 'tuples;
            }
            tuple[pos] += 1;
            if tuple[pos] <= d {
                break;
            }
            tuple[pos] = 1;
            pos += 1;
        }
    }
    Ok(acc)
}

/// Moment of a normalized `d × d` GUE matrix (entry covariance
/// `E[g_ab g_cd] = δ_ad δ_bc / d`, normalized trace): sum over pairings of
/// `d^(orbits(η_k·σ_ρ) - k/2 - 1)`.
pub fn gue_moment(d: usize, k: usize) -> Result<Scalar, CcrGueError> {
    if d == 0 {
        return Err(CcrGueError::DimensionTooSmall(0));
    }
    if k == 0 {
        return Ok(int(1));
    }
    if k > MAX_MOMENT_ORDER {
        return Err(CcrGueError::OrderTooLarge {
            k,
            max: MAX_MOMENT_ORDER,
        });
    }
    if k % 2 == 1 {
        return Ok(int(0));
    }
    let eta = Permutation::forward_cycle(k);
    let mut acc = int(0);
    for rho in enumerate_pairings(k)? {
        let pairing = AtMostPairPartition::try_from(rho).expect("pairing blocks");
        let orbits = eta.compose(&sigma_pi(&pairing)).orbits(k)?.orbits().len();
        acc += pow_i(&int(d as i64), orbits as i64 - (k / 2 + 1) as i64);
    }
    Ok(acc)
}

/// GUE moment straight from the entry covariance: all `d^k` index tuples,
/// all pairings, explicit delta checks.
pub fn gue_moment_naive(d: usize, k: usize) -> Result<Scalar, CcrGueError> {
    if d == 0 {
        return Err(CcrGueError::DimensionTooSmall(0));
    }
    if k == 0 {
        return Ok(int(1));
    }
    if k % 2 == 1 {
        return Ok(int(0));
    }
    let total = (d as u128).pow(k as u32);
    if total > NAIVE_TUPLE_CAP {
        return Err(CcrGueError::NaiveTooLarge(total, NAIVE_TUPLE_CAP));
    }
    let pairings: Vec<Vec<(usize, usize)>> = enumerate_pairings(k)?
        .map(|rho| rho.blocks().iter().map(|b| (b[0], b[1])).collect())
        .collect();
    let mut matched: u128 = 0;
    let mut tuple = vec![1usize; k];
    'tuples: loop {
        let col = |p: usize| tuple[p % k]; // j(p) = i(η(p)), 1-based p
        for pairing in &pairings {
            if pairing
                .iter()
                .all(|&(p, q)| tuple[p - 1] == col(q) && tuple[q - 1] == col(p))
            {
                matched += 1;
            }
        }
        let mut pos = 0;
        loop {
            if pos == k {
                break 'tuples;
            }
            tuple[pos] += 1;
            if tuple[pos] <= d {
                break;
            }
            tuple[pos] = 1;
            pos += 1;
        }
    }
    let scale = pow_i(&int(d as i64), -((k / 2 + 1) as i64));
    Ok(int(matched as i64) * scale)
}

/// Both sides of the GUE split at uniform weights: the left is
/// [`gue_moment`]`(d, k)`, the right convolves the traceless model's
/// moments with an independent centered Gaussian of variance `1/d²`,
/// `Σ_j C(k, 2j) · (2j-1)!! · d^(-2j) · matrix_moment(uniform(d), k - 2j)`.
pub fn convolution_check(d: usize, k: usize) -> Result<(Scalar, Scalar), CcrGueError> {
    if d < 2 {
        return Err(CcrGueError::DimensionTooSmall(d));
    }
    let lhs = gue_moment(d, k)?;
    let uniform = WeightVector::uniform(d).expect("d >= 2");
    let variance = rat(1, (d * d) as i64);
    let mut rhs = int(0);
    for j in 0..=k / 2 {
        let gaussian_part = int(binomial(k, 2 * j) as i64)
            * int(pairing_count(2 * j) as i64)
            * pow_i(&variance, j as i64);
        rhs += gaussian_part * matrix_moment(&uniform, k - 2 * j)?;
    }
    Ok((lhs, rhs))
}
