//! Set partitions of `{1,…,k}` and the permutations attached to them.
//!
//! Beyond the lattice plumbing (enumeration, meet, kernels, the partitions
//! `π_S`), this module builds the two permutations that drive the moment
//! formulas:
//!
//! * `tau_pi`: order the blocks `V_1, …, V_ℓ` of a partition with blocks of
//!   size at most 2 by decreasing maximum, give every element of `V_i` the
//!   label `i`, and multiply the star-transpositions `γ_label(1) ⋯ γ_label(k)`
//!   left to right. The result moves nothing above `ℓ + 1`.
//! * `sigma_pi`: the involution `∏ (min V, max V)` over the pair blocks.
//!
//! `b_pi` is the companion marker set: the block maxima together with `k+1`.
//! The orbit structure of `η_{k+1}·σ_π` intersected with that set mirrors the
//! orbit structure of `τ_π`; that correspondence is what the verification
//! suites check exhaustively.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::perm::Permutation;

/// Ceiling on ground-set sizes accepted by the enumerators. Everything the
/// routes do is exponential in `k`; this guard turns runaway requests into
/// errors instead of multi-hour loops.
pub const ENUM_CAP: usize = 14;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("ground-set size must be between 1 and {ENUM_CAP}, got {0}")]
    GroundSize(usize),
    #[error("blocks do not partition {{1,…,{0}}}")]
    NotAPartition(usize),
    #[error("expected a partition into blocks of size at most 2")]
    BlockTooLarge,
    #[error("expected a pair partition (all blocks of size 2)")]
    NotAPairing,
    #[error("ground sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("{0} is not a subset of {{1,…,{1}}}")]
    NotASubset(usize, usize),
    #[error("cannot parse partition text: {0}")]
    Parse(String),
}

/// A partition of `{1,…,k}` in canonical form: each block ascending, blocks
/// sorted by their minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn from_blocks(k: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        if k == 0 {
            return Err(PartitionError::GroundSize(0));
        }
        let mut seen = vec![false; k];
        let mut count = 0usize;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(PartitionError::NotAPartition(k));
            }
            block.sort_unstable();
            for &e in block.iter() {
                if e == 0 || e > k || seen[e - 1] {
                    return Err(PartitionError::NotAPartition(k));
                }
                seen[e - 1] = true;
                count += 1;
            }
        }
        if count != k {
            return Err(PartitionError::NotAPartition(k));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(SetPartition { k, blocks })
    }

    /// Internal constructor for callers that already guarantee canonical
    /// disjoint coverage (the enumerators).
    fn from_canonical_blocks(k: usize, blocks: Vec<Vec<usize>>) -> Self {
        debug_assert!(SetPartition::from_blocks(k, blocks.clone()).is_ok());
        SetPartition { k, blocks }
    }

    /// All singletons.
    pub fn discrete(k: usize) -> Result<Self, PartitionError> {
        SetPartition::from_blocks(k, (1..=k).map(|e| vec![e]).collect())
    }

    /// One block `{1,…,k}`.
    pub fn full(k: usize) -> Result<Self, PartitionError> {
        SetPartition::from_blocks(k, vec![(1..=k).collect()])
    }

    /// The kernel of a tuple: positions `p, q` share a block iff
    /// `tuple[p-1] == tuple[q-1]`.
    pub fn kernel<T: Eq + std::hash::Hash>(tuple: &[T]) -> Result<Self, PartitionError> {
        if tuple.is_empty() {
            return Err(PartitionError::GroundSize(0));
        }
        let mut first_seen: HashMap<&T, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (pos, v) in tuple.iter().enumerate() {
            let next = blocks.len();
            let idx = *first_seen.entry(v).or_insert(next);
            if idx == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[idx].push(pos + 1);
        }
        Ok(SetPartition::from_canonical_blocks(tuple.len(), blocks))
    }

    /// The partition with singleton blocks exactly at `s` and one block on
    /// the complement (when non-empty).
    pub fn pi_s(k: usize, s: &BTreeSet<usize>) -> Result<Self, PartitionError> {
        if let Some(&bad) = s.iter().find(|&&e| e == 0 || e > k) {
            return Err(PartitionError::NotASubset(bad, k));
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let rest: Vec<usize> = (1..=k).filter(|e| !s.contains(e)).collect();
        if !rest.is_empty() {
            blocks.push(rest);
        }
        blocks.extend(s.iter().map(|&e| vec![e]));
        SetPartition::from_blocks(k, blocks)
    }

    /// The meet: blocks are the non-empty pairwise intersections, i.e. the
    /// largest partition refining both inputs.
    pub fn meet(&self, other: &SetPartition) -> Result<Self, PartitionError> {
        if self.k != other.k {
            return Err(PartitionError::SizeMismatch(self.k, other.k));
        }
        let left = self.block_index_table();
        let right = other.block_index_table();
        let labels: Vec<(usize, usize)> = (0..self.k).map(|p| (left[p], right[p])).collect();
        SetPartition::kernel(&labels)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn singleton_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.len() == 1).count()
    }

    pub fn has_singleton(&self) -> bool {
        self.blocks.iter().any(|b| b.len() == 1)
    }

    pub fn is_pairing(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    pub fn is_at_most_pair(&self) -> bool {
        self.blocks.iter().all(|b| b.len() <= 2)
    }

    /// For each position (0-based), the index of its block in canonical
    /// order.
    fn block_index_table(&self) -> Vec<usize> {
        let mut table = vec![0usize; self.k];
        for (idx, block) in self.blocks.iter().enumerate() {
            for &e in block {
                table[e - 1] = idx;
            }
        }
        table
    }

    /// A representative tuple with this kernel: position `p` holds the
    /// 1-based canonical index of its block.
    pub fn label_tuple(&self) -> Vec<usize> {
        self.block_index_table().into_iter().map(|i| i + 1).collect()
    }

    /// Whether a pair partition is non-crossing: no pairs `{a,b}`, `{c,d}`
    /// with `a < c < b < d`.
    pub fn is_noncrossing_pairing(&self) -> bool {
        assert!(self.is_pairing(), "non-crossing test is for pairings");
        let pairs: Vec<(usize, usize)> = self.blocks.iter().map(|b| (b[0], b[1])).collect();
        for (i, &(_, b)) in pairs.iter().enumerate() {
            for &(c, d) in &pairs[i + 1..] {
                // canonical order gives a < c for the i-th pair (a, b)
                if c < b && b < d {
                    return false;
                }
            }
        }
        true
    }

    /// Parses the text form `{1,6}{2,5}{3}{4,7}`. The ground size is the
    /// largest element; every smaller positive integer must appear.
    pub fn parse(text: &str) -> Result<Self, PartitionError> {
        let blocks = parse_braced_blocks(text)?;
        let k = blocks.iter().flatten().copied().max().unwrap_or(0);
        SetPartition::from_blocks(k, blocks)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            write!(f, "{{")?;
            for (i, e) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

fn parse_braced_blocks(text: &str) -> Result<Vec<Vec<usize>>, PartitionError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(PartitionError::Parse("empty input".into()));
    }
    let mut blocks = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let Some(stripped) = rest.strip_prefix('{') else {
            return Err(PartitionError::Parse(format!("expected '{{' at {rest:?}")));
        };
        let Some(close) = stripped.find('}') else {
            return Err(PartitionError::Parse("missing '}'".into()));
        };
        let body = &stripped[..close];
        rest = stripped[close + 1..].trim_start();
        let block = body
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| PartitionError::Parse(format!("bad element {tok:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        blocks.push(block);
    }
    Ok(blocks)
}

/// Streams all partitions of `{1,…,k}` in restricted-growth-string order.
pub fn enumerate_partitions(
    k: usize,
) -> Result<impl Iterator<Item = SetPartition>, PartitionError> {
    if k == 0 || k > ENUM_CAP {
        return Err(PartitionError::GroundSize(k));
    }
    Ok(RgsIter {
        k,
        labels: vec![0; k],
        started: false,
        done: false,
    })
}

/// Lexicographic iteration over restricted growth strings
/// (`labels[0] = 0`, `labels[i] ≤ max(labels[..i]) + 1`).
struct RgsIter {
    k: usize,
    labels: Vec<usize>,
    started: bool,
    done: bool,
}

impl RgsIter {
    fn current(&self) -> SetPartition {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (pos, &label) in self.labels.iter().enumerate() {
            if label == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[label].push(pos + 1);
        }
        SetPartition::from_canonical_blocks(self.k, blocks)
    }
}

impl Iterator for RgsIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        let mut idx = self.k;
        loop {
            if idx <= 1 {
                self.done = true;
                return None;
            }
            let i = idx - 1;
            let prefix_max = *self.labels[..i].iter().max().unwrap();
            if self.labels[i] <= prefix_max {
                self.labels[i] += 1;
                self.labels[i + 1..].fill(0);
                return Some(self.current());
            }
            idx -= 1;
        }
    }
}

/// All pairings of an explicit (ascending) element list, in the order that
/// repeatedly pairs the smallest free element with each larger one.
fn pairings_of(elems: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if elems.len() % 2 == 1 {
        return Vec::new();
    }
    if elems.is_empty() {
        return vec![Vec::new()];
    }
    let first = elems[0];
    let mut out = Vec::new();
    for j in 1..elems.len() {
        let partner = elems[j];
        let rest: Vec<usize> = elems[1..]
            .iter()
            .copied()
            .filter(|&x| x != partner)
            .collect();
        for sub in pairings_of(&rest) {
            let mut pairs = Vec::with_capacity(sub.len() + 1);
            pairs.push((first, partner));
            pairs.extend(sub);
            out.push(pairs);
        }
    }
    out
}

/// Streams all pair partitions of `{1,…,k}`; empty for odd `k`.
pub fn enumerate_pairings(k: usize) -> Result<impl Iterator<Item = SetPartition>, PartitionError> {
    if k == 0 || k > ENUM_CAP {
        return Err(PartitionError::GroundSize(k));
    }
    let ground: Vec<usize> = (1..=k).collect();
    Ok(pairings_of(&ground).into_iter().map(move |pairs| {
        SetPartition::from_canonical_blocks(k, pairs.into_iter().map(|(a, b)| vec![a, b]).collect())
    }))
}

/// A partition into blocks of size 1 or 2, with the singleton and pair
/// counts cached. `singleton_count + 2·pair_count = k`, so the singleton
/// count always has the parity of `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtMostPairPartition {
    partition: SetPartition,
    singletons: usize,
    pairs: usize,
}

impl AtMostPairPartition {
    pub fn partition(&self) -> &SetPartition {
        &self.partition
    }

    pub fn into_partition(self) -> SetPartition {
        self.partition
    }

    pub fn k(&self) -> usize {
        self.partition.k()
    }

    pub fn singleton_count(&self) -> usize {
        self.singletons
    }

    pub fn pair_count(&self) -> usize {
        self.pairs
    }

    pub fn parse(text: &str) -> Result<Self, PartitionError> {
        SetPartition::parse(text)?.try_into()
    }
}

impl TryFrom<SetPartition> for AtMostPairPartition {
    type Error = PartitionError;

    fn try_from(partition: SetPartition) -> Result<Self, PartitionError> {
        if !partition.is_at_most_pair() {
            return Err(PartitionError::BlockTooLarge);
        }
        let singletons = partition.singleton_count();
        let pairs = partition.num_blocks() - singletons;
        Ok(AtMostPairPartition {
            partition,
            singletons,
            pairs,
        })
    }
}

impl fmt::Display for AtMostPairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.partition.fmt(f)
    }
}

/// Streams all partitions of `{1,…,k}` into blocks of size at most 2.
///
/// Order: ascending bitmask of the singleton set, then the pairing order of
/// [`enumerate_pairings`] on the complement.
pub fn enumerate_le2(
    k: usize,
) -> Result<impl Iterator<Item = AtMostPairPartition>, PartitionError> {
    if k == 0 || k > ENUM_CAP {
        return Err(PartitionError::GroundSize(k));
    }
    let iter = (0u32..(1u32 << k)).flat_map(move |mask| {
        let singles: Vec<usize> = (1..=k).filter(|e| mask & (1 << (e - 1)) != 0).collect();
        let rest: Vec<usize> = (1..=k).filter(|e| mask & (1 << (e - 1)) == 0).collect();
        let singleton_blocks: Vec<Vec<usize>> = singles.iter().map(|&e| vec![e]).collect();
        pairings_of(&rest).into_iter().map(move |pairs| {
            let mut blocks = singleton_blocks.clone();
            blocks.extend(pairs.into_iter().map(|(a, b)| vec![a, b]));
            blocks.sort_by_key(|b| b[0]);
            let partition = SetPartition::from_canonical_blocks(k, blocks);
            partition.try_into().expect("blocks of size at most 2")
        })
    });
    Ok(iter)
}

/// The block ordering behind `tau_pi`: blocks sorted by decreasing maximum,
/// with `a_i = min V_i`, `b_i = max V_i` and the marker set
/// `B = {b_1, …, b_ℓ, k+1}`.
#[derive(Debug, Clone)]
pub struct BlockOrder {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockOrder {
    pub fn new(pi: &AtMostPairPartition) -> Self {
        let mut blocks = pi.partition().blocks().to_vec();
        blocks.sort_by_key(|b| std::cmp::Reverse(*b.last().unwrap()));
        BlockOrder {
            k: pi.k(),
            blocks,
        }
    }

    /// Number of blocks `ℓ`.
    pub fn ell(&self) -> usize {
        self.blocks.len()
    }

    /// `a_i = min V_i` (1-based block index).
    pub fn a(&self, i: usize) -> usize {
        self.blocks[i - 1][0]
    }

    /// `b_i = max V_i` (1-based block index); strictly decreasing in `i`,
    /// with `b_1 = k`.
    pub fn b(&self, i: usize) -> usize {
        *self.blocks[i - 1].last().unwrap()
    }

    /// The label tuple `r`: position `p` gets the index of its block.
    pub fn label_tuple(&self) -> Vec<usize> {
        let mut labels = vec![0usize; self.k];
        for (idx, block) in self.blocks.iter().enumerate() {
            for &e in block {
                labels[e - 1] = idx + 1;
            }
        }
        labels
    }

    /// `B = {b_ℓ, …, b_1, k+1}`.
    pub fn marker_set(&self) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = (1..=self.ell()).map(|i| self.b(i)).collect();
        set.insert(self.k + 1);
        set
    }
}

/// The star-transposition product attached to a partition with blocks of
/// size at most 2: `γ_r(1) ⋯ γ_r(k)` for the decreasing-maximum block
/// labelling. Fixes every point above `(number of blocks) + 1`.
pub fn tau_pi(pi: &AtMostPairPartition) -> Permutation {
    let order = BlockOrder::new(pi);
    let factors: Vec<Permutation> = order
        .label_tuple()
        .into_iter()
        .map(|r| Permutation::star_transposition(r).expect("labels are >= 1"))
        .collect();
    Permutation::product(factors.iter())
}

/// The involution `∏ (min V, max V)` over the pair blocks.
pub fn sigma_pi(pi: &AtMostPairPartition) -> Permutation {
    let cycles: Vec<Vec<usize>> = pi
        .partition()
        .blocks()
        .iter()
        .filter(|b| b.len() == 2)
        .cloned()
        .collect();
    Permutation::from_cycles(&cycles).expect("pair blocks are disjoint")
}

/// The marker set `B_π`: block maxima together with `k+1`.
pub fn b_pi(pi: &AtMostPairPartition) -> BTreeSet<usize> {
    BlockOrder::new(pi).marker_set()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairColour {
    Blue,
    Red,
}

/// A pair partition with each pair painted blue or red. Canonical storage:
/// pairs as `(lo, hi)`, sorted by `lo`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BicolouredPairPartition {
    k: usize,
    pairs: Vec<(usize, usize, PairColour)>,
}

impl BicolouredPairPartition {
    pub fn new(
        k: usize,
        pairs: Vec<(usize, usize, PairColour)>,
    ) -> Result<Self, PartitionError> {
        let blocks = pairs.iter().map(|&(a, b, _)| vec![a, b]).collect();
        let underlying = SetPartition::from_blocks(k, blocks)?;
        if !underlying.is_pairing() {
            return Err(PartitionError::NotAPairing);
        }
        let mut pairs: Vec<(usize, usize, PairColour)> = pairs
            .into_iter()
            .map(|(a, b, c)| (a.min(b), a.max(b), c))
            .collect();
        pairs.sort_unstable_by_key(|&(lo, _, _)| lo);
        Ok(BicolouredPairPartition { k, pairs })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pairs(&self) -> &[(usize, usize, PairColour)] {
        &self.pairs
    }

    /// The underlying (uncoloured) pair partition.
    pub fn underlying(&self) -> SetPartition {
        SetPartition::from_canonical_blocks(
            self.k,
            self.pairs.iter().map(|&(a, b, _)| vec![a, b]).collect(),
        )
    }

    /// Product of the blue transpositions only.
    pub fn sigma_blue(&self) -> Permutation {
        let cycles: Vec<Vec<usize>> = self
            .pairs
            .iter()
            .filter(|&&(_, _, c)| c == PairColour::Blue)
            .map(|&(a, b, _)| vec![a, b])
            .collect();
        Permutation::from_cycles(&cycles).expect("pairs are disjoint")
    }

    /// Keeps blue pairs, breaks every red pair into two singletons.
    pub fn red_break(&self) -> AtMostPairPartition {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for &(a, b, colour) in &self.pairs {
            match colour {
                PairColour::Blue => blocks.push(vec![a, b]),
                PairColour::Red => {
                    blocks.push(vec![a]);
                    blocks.push(vec![b]);
                }
            }
        }
        blocks.sort_by_key(|b| b[0]);
        SetPartition::from_canonical_blocks(self.k, blocks)
            .try_into()
            .expect("blocks of size at most 2")
    }

    /// Parses `{1,6}b{2,5}r`: each closing brace is followed by a colour
    /// letter.
    pub fn parse(text: &str) -> Result<Self, PartitionError> {
        let s = text.trim();
        let mut pairs = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let Some(stripped) = rest.strip_prefix('{') else {
                return Err(PartitionError::Parse(format!("expected '{{' at {rest:?}")));
            };
            let Some(close) = stripped.find('}') else {
                return Err(PartitionError::Parse("missing '}'".into()));
            };
            let body = &stripped[..close];
            let after = &stripped[close + 1..];
            let colour = match after.chars().next() {
                Some('b') => PairColour::Blue,
                Some('r') => PairColour::Red,
                other => {
                    return Err(PartitionError::Parse(format!(
                        "expected colour letter 'b' or 'r', got {other:?}"
                    )))
                }
            };
            rest = after[1..].trim_start();
            let elems = body
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|_| PartitionError::Parse(format!("bad element {tok:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if elems.len() != 2 {
                return Err(PartitionError::Parse("pairs must have two elements".into()));
            }
            pairs.push((elems[0], elems[1], colour));
        }
        let k = pairs.iter().map(|&(a, b, _)| a.max(b)).max().unwrap_or(0);
        BicolouredPairPartition::new(k, pairs)
    }
}

impl fmt::Display for BicolouredPairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(a, b, colour) in &self.pairs {
            let letter = match colour {
                PairColour::Blue => 'b',
                PairColour::Red => 'r',
            };
            write!(f, "{{{a},{b}}}{letter}")?;
        }
        Ok(())
    }
}

/// Streams all bicoloured pair partitions of `{1,…,k}`; empty for odd `k`.
///
/// Order: pairing order of [`enumerate_pairings`], then ascending colour
/// mask (bit `j` set = `j`-th pair red).
pub fn enumerate_bicoloured(
    k: usize,
) -> Result<impl Iterator<Item = BicolouredPairPartition>, PartitionError> {
    if k == 0 || k > ENUM_CAP {
        return Err(PartitionError::GroundSize(k));
    }
    let ground: Vec<usize> = (1..=k).collect();
    let iter = pairings_of(&ground).into_iter().flat_map(move |pairs| {
        let half = pairs.len();
        (0u32..(1u32 << half)).map(move |mask| {
            let coloured: Vec<(usize, usize, PairColour)> = pairs
                .iter()
                .enumerate()
                .map(|(j, &(a, b))| {
                    let colour = if mask & (1 << j) != 0 {
                        PairColour::Red
                    } else {
                        PairColour::Blue
                    };
                    (a, b, colour)
                })
                .collect();
            BicolouredPairPartition { k, pairs: coloured }
        })
    });
    Ok(iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{bell_numbers, bicoloured_count, involution_numbers, pairing_count};

    #[test]
    fn canonical_form_and_text_round_trip() {
        let p = SetPartition::from_blocks(7, vec![vec![4, 7], vec![6, 1], vec![5, 2], vec![3]])
            .unwrap();
        assert_eq!(p.to_string(), "{1,6}{2,5}{3}{4,7}");
        assert_eq!(SetPartition::parse("{1,6}{2,5}{3}{4,7}").unwrap(), p);
        assert!(SetPartition::parse("{1,3}").is_err()); // 2 missing
        assert!(SetPartition::parse("{1,1}").is_err());
        assert!(SetPartition::parse("").is_err());
    }

    #[test]
    fn enumeration_counts_match_recurrences() {
        let bell = bell_numbers(8);
        let inv = involution_numbers(8);
        for k in 1..=8 {
            assert_eq!(
                enumerate_partitions(k).unwrap().count() as u128,
                bell[k],
                "partitions of size {k}"
            );
            assert_eq!(
                enumerate_pairings(k).unwrap().count() as u128,
                pairing_count(k),
                "pairings of size {k}"
            );
            assert_eq!(
                enumerate_le2(k).unwrap().count() as u128,
                inv[k],
                "size-at-most-2 partitions of {k}"
            );
            assert_eq!(
                enumerate_bicoloured(k).unwrap().count() as u128,
                bicoloured_count(k),
                "bicoloured pairings of {k}"
            );
        }
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(15).is_err());
    }

    #[test]
    fn rgs_order_is_frozen() {
        let got: Vec<String> = enumerate_partitions(3)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(
            got,
            vec!["{1,2,3}", "{1,2}{3}", "{1,3}{2}", "{1}{2,3}", "{1}{2}{3}"]
        );
    }

    #[test]
    fn pairing_order_is_frozen() {
        let got: Vec<String> = enumerate_pairings(4)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(got, vec!["{1,2}{3,4}", "{1,3}{2,4}", "{1,4}{2,3}"]);
    }

    #[test]
    fn enumerations_have_no_duplicates() {
        use std::collections::HashSet;
        for k in 1..=7 {
            let all: Vec<SetPartition> = enumerate_partitions(k).unwrap().collect();
            let set: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(all.len(), set.len());
            assert!(all.iter().all(|p| p.k() == k));
        }
    }

    #[test]
    fn le2_stream_contains_the_worked_partition() {
        let target = AtMostPairPartition::parse("{1,6}{2,5}{3}{4,7}").unwrap();
        assert!(enumerate_le2(7).unwrap().any(|p| p == target));
    }

    #[test]
    fn meet_is_blockwise_intersection() {
        let coarse = SetPartition::parse("{1,2,3}").unwrap();
        let finer = SetPartition::parse("{1,2}{3}").unwrap();
        assert_eq!(coarse.meet(&finer).unwrap(), finer);
        assert_eq!(finer.meet(&finer).unwrap(), finer);
        let discrete = SetPartition::discrete(3).unwrap();
        assert_eq!(coarse.meet(&discrete).unwrap(), discrete);
        assert!(coarse
            .meet(&SetPartition::discrete(4).unwrap())
            .is_err());
    }

    #[test]
    fn pi_s_examples() {
        let empty = BTreeSet::new();
        assert_eq!(
            SetPartition::pi_s(4, &empty).unwrap(),
            SetPartition::full(4).unwrap()
        );
        let all: BTreeSet<usize> = (1..=4).collect();
        assert_eq!(
            SetPartition::pi_s(4, &all).unwrap(),
            SetPartition::discrete(4).unwrap()
        );
        let two: BTreeSet<usize> = [2].into_iter().collect();
        assert_eq!(
            SetPartition::pi_s(4, &two).unwrap(),
            SetPartition::parse("{1,3,4}{2}").unwrap()
        );
        let bad: BTreeSet<usize> = [9].into_iter().collect();
        assert!(SetPartition::pi_s(4, &bad).is_err());
    }

    #[test]
    fn kernels() {
        assert_eq!(
            SetPartition::kernel(&[7, 7, 7]).unwrap(),
            SetPartition::full(3).unwrap()
        );
        assert_eq!(
            SetPartition::kernel(&[1, 2, 1, 3]).unwrap(),
            SetPartition::parse("{1,3}{2}{4}").unwrap()
        );
        assert_eq!(
            SetPartition::kernel(&["x", "x"]).unwrap(),
            SetPartition::full(2).unwrap()
        );
    }

    #[test]
    fn tau_of_the_two_worked_partitions() {
        let fig = AtMostPairPartition::parse("{1,6}{2,5}{3,8}{4,7}").unwrap();
        assert_eq!(tau_pi(&fig), Permutation::parse("(1,5,3)").unwrap());

        let ex = AtMostPairPartition::parse("{1,6}{2,5}{3}{4,7}").unwrap();
        assert_eq!(tau_pi(&ex), Permutation::parse("(1,5,4,2)").unwrap());
    }

    #[test]
    fn block_order_of_the_singleton_example() {
        let ex = AtMostPairPartition::parse("{1,6}{2,5}{3}{4,7}").unwrap();
        let order = BlockOrder::new(&ex);
        assert_eq!(order.ell(), 4);
        // decreasing maxima: {4,7}, {1,6}, {2,5}, {3}
        assert_eq!((order.a(1), order.b(1)), (4, 7));
        assert_eq!((order.a(2), order.b(2)), (1, 6));
        assert_eq!((order.a(3), order.b(3)), (2, 5));
        assert_eq!((order.a(4), order.b(4)), (3, 3));
        assert_eq!(order.label_tuple(), vec![2, 3, 4, 1, 3, 2, 1]);
        let markers: Vec<usize> = order.marker_set().into_iter().collect();
        assert_eq!(markers, vec![3, 5, 6, 7, 8]);
    }

    #[test]
    fn sigma_of_the_worked_partitions() {
        let fig = AtMostPairPartition::parse("{1,6}{2,5}{3,8}{4,7}").unwrap();
        assert_eq!(
            sigma_pi(&fig),
            Permutation::parse("(1,6)(2,5)(3,8)(4,7)").unwrap()
        );
        let ex = AtMostPairPartition::parse("{1,6}{2,5}{3}{4,7}").unwrap();
        assert_eq!(
            sigma_pi(&ex),
            Permutation::parse("(1,6)(2,5)(4,7)").unwrap()
        );
        let singles = AtMostPairPartition::try_from(SetPartition::discrete(5).unwrap()).unwrap();
        assert!(sigma_pi(&singles).is_identity());
    }

    #[test]
    fn eta_sigma_orbits_of_the_eight_point_example() {
        let fig = AtMostPairPartition::parse("{1,6}{2,5}{3,8}{4,7}").unwrap();
        let q = Permutation::forward_cycle(9).compose(&sigma_pi(&fig));
        assert_eq!(q, Permutation::parse("(1,7,5,3,9)(2,6)(4,8)").unwrap());

        let markers = b_pi(&fig);
        assert_eq!(markers.iter().copied().collect::<Vec<_>>(), vec![5, 6, 7, 8, 9]);
        let mut intersect: Vec<usize> = q
            .orbits(9)
            .unwrap()
            .orbits()
            .iter()
            .map(|orbit| orbit.iter().filter(|m| markers.contains(m)).count())
            .collect();
        intersect.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(intersect, vec![3, 1, 1]);
    }

    #[test]
    fn tau_is_identity_on_noncrossing_pairings() {
        for k in [2usize, 4, 6, 8] {
            for rho in enumerate_pairings(k).unwrap() {
                if rho.is_noncrossing_pairing() {
                    let pi = AtMostPairPartition::try_from(rho).unwrap();
                    assert!(tau_pi(&pi).is_identity());
                }
            }
        }
    }

    #[test]
    fn tau_support_and_sigma_involution() {
        for pi in enumerate_le2(6).unwrap() {
            let tau = tau_pi(&pi);
            let ell = pi.partition().num_blocks();
            for m in ell + 2..ell + 6 {
                assert_eq!(tau.apply(m), m);
            }
            let sigma = sigma_pi(&pi);
            assert!(sigma.compose(&sigma).is_identity());
        }
    }

    #[test]
    fn noncrossing_predicate() {
        assert!(SetPartition::parse("{1,2}{3,4}").unwrap().is_noncrossing_pairing());
        assert!(SetPartition::parse("{1,4}{2,3}").unwrap().is_noncrossing_pairing());
        assert!(!SetPartition::parse("{1,3}{2,4}").unwrap().is_noncrossing_pairing());
    }

    #[test]
    fn bicoloured_round_trip_and_maps() {
        let rho = BicolouredPairPartition::parse("{1,6}b{2,5}r{3,4}b").unwrap();
        assert_eq!(rho.to_string(), "{1,6}b{2,5}r{3,4}b");
        assert_eq!(rho.sigma_blue(), Permutation::parse("(1,6)(3,4)").unwrap());
        assert_eq!(rho.red_break().to_string(), "{1,6}{2}{3,4}{5}");
        assert_eq!(rho.underlying(), SetPartition::parse("{1,6}{2,5}{3,4}").unwrap());

        let all_red = BicolouredPairPartition::parse("{1,2}r{3,4}r").unwrap();
        assert!(all_red.sigma_blue().is_identity());
        assert_eq!(
            all_red.red_break().partition(),
            &SetPartition::discrete(4).unwrap()
        );

        let mixed = BicolouredPairPartition::parse("{1,3}b{2,4}r").unwrap();
        assert_eq!(mixed.sigma_blue(), Permutation::parse("(1,3)").unwrap());

        assert!(BicolouredPairPartition::parse("{1,2}x").is_err());
        assert!(BicolouredPairPartition::parse("{1,2,3}b").is_err());
    }

    #[test]
    fn red_break_fibers_have_matching_sizes() {
        // over all bicoloured pairings of k points, the preimage of a fixed
        // partition with s singletons has (s-1)!! elements
        for k in [2usize, 4, 6] {
            let mut fibers: HashMap<AtMostPairPartition, u128> = HashMap::new();
            for rho in enumerate_bicoloured(k).unwrap() {
                *fibers.entry(rho.red_break()).or_insert(0) += 1;
            }
            for pi in enumerate_le2(k).unwrap() {
                let expect = pairing_count(pi.singleton_count());
                assert_eq!(
                    fibers.get(&pi).copied().unwrap_or(0),
                    expect,
                    "k={k} pi={pi}"
                );
            }
        }
    }
}
