//! Exact moments of the limit law, computed along four independent routes.
//!
//! All four express the `k`-th moment through sums over pairing-like
//! structures on `{1,…,k}`, but they share no intermediate formulas:
//!
//! * route A sums the inclusion-exclusion weight [`MomentEngine::t_pairing`]
//!   over all pair partitions;
//! * route B sums signed double factorials times the character of `τ_π`
//!   over all partitions into blocks of size at most 2;
//! * route C sums weight products over bicoloured pairings together with
//!   all index colourings compatible with the pairing's blue involution;
//! * route D takes trace moments of the traceless matrix model in
//!   [`crate::ccr_gue`].
//!
//! Bit-exact agreement of the four rationals is the machine check of the
//! underlying moment identities. The module also carries two alternative
//! orbit-based evaluations of the character of `τ_π` plus a brute-force
//! colouring sum; the verification suites compare all of them.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num::Signed;
use thiserror::Error;

use crate::algebra::{character, int, pow_i, Scalar, WeightVector};
use crate::ccr_gue::{self, CcrGueError};
use crate::counting::pairing_count;
use crate::partitions::{
    enumerate_bicoloured, enumerate_le2, enumerate_pairings, sigma_pi, tau_pi,
    AtMostPairPartition, BlockOrder, PairColour, PartitionError, SetPartition,
};
use crate::perm::{PermError, Permutation};

pub use crate::ccr_gue::MAX_MOMENT_ORDER;

/// Cap on the colouring count `d^K` accepted by the brute-force character
/// evaluation.
const COLOURING_CAP: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MomentError {
    #[error("moment order {k} exceeds cap {max}")]
    OrderTooLarge { k: usize, max: usize },
    #[error("expected a pair partition")]
    NotAPairing,
    #[error("brute-force colouring sum over {0} assignments exceeds cap {1}")]
    ColouringTooLarge(u128, u128),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    CcrGue(#[from] CcrGueError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// The four independent moment computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Route {
    A,
    B,
    C,
    D,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::A, Route::B, Route::C, Route::D];
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Route::A => "A",
            Route::B => "B",
            Route::C => "C",
            Route::D => "D",
        };
        f.write_str(name)
    }
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "A" | "a" => Ok(Route::A),
            "B" | "b" => Ok(Route::B),
            "C" | "c" => Ok(Route::C),
            "D" | "d" => Ok(Route::D),
            other => Err(format!("unknown route {other:?}, expected A, B, C or D")),
        }
    }
}

/// Moment calculator for one weight vector, with memoized partition
/// functions.
#[derive(Debug, Clone)]
pub struct MomentEngine {
    weights: WeightVector,
    u_cache: RefCell<HashMap<SetPartition, Scalar>>,
    t_cache: RefCell<HashMap<SetPartition, Scalar>>,
}

impl MomentEngine {
    pub fn new(weights: WeightVector) -> Self {
        MomentEngine {
            weights,
            u_cache: RefCell::new(HashMap::new()),
            t_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    /// The character of a star-transposition word whose index tuple has
    /// kernel `pi`; the canonical block labelling is used as the
    /// representative tuple.
    pub fn u_function(&self, pi: &SetPartition) -> Scalar {
        if let Some(v) = self.u_cache.borrow().get(pi) {
            return v.clone();
        }
        let factors: Vec<Permutation> = pi
            .label_tuple()
            .into_iter()
            .map(|r| Permutation::star_transposition(r).expect("labels are >= 1"))
            .collect();
        let value = character(&self.weights, &Permutation::product(factors.iter()));
        self.u_cache
            .borrow_mut()
            .insert(pi.clone(), value.clone());
        value
    }

    /// The character of `τ_π`, evaluated on the decreasing-maximum block
    /// labelling. Kept separate from [`Self::u_function`] so that their
    /// agreement stays a checkable statement rather than a shared code
    /// path.
    pub fn chi_tau(&self, pi: &AtMostPairPartition) -> Scalar {
        character(&self.weights, &tau_pi(pi))
    }

    /// Inclusion-exclusion over all subsets of positions:
    /// `Σ_S (-1)^|S| u(pi ∧ π_S)`.
    pub fn t_incl_excl(&self, pi: &SetPartition) -> Scalar {
        if let Some(v) = self.t_cache.borrow().get(pi) {
            return v.clone();
        }
        let k = pi.k();
        let mut acc = int(0);
        for mask in 0u32..(1u32 << k) {
            let s: BTreeSet<usize> = (1..=k).filter(|e| mask & (1 << (e - 1)) != 0).collect();
            let pi_s = SetPartition::pi_s(k, &s).expect("subset of ground set");
            let met = pi.meet(&pi_s).expect("same ground set");
            let u = self.u_function(&met);
            if mask.count_ones() % 2 == 0 {
                acc += u;
            } else {
                acc -= u;
            }
        }
        self.t_cache.borrow_mut().insert(pi.clone(), acc.clone());
        acc
    }

    /// The same weight on a pair partition, by breaking subsets of whole
    /// pairs instead of subsets of positions: breaking any single element
    /// of a pair already splits the pair, so the `2^k` position subsets
    /// collapse onto `2^(k/2)` pair subsets with sign `(-1)^(pairs broken)`.
    pub fn t_pairing(&self, rho: &SetPartition) -> Result<Scalar, MomentError> {
        if !rho.is_pairing() {
            return Err(MomentError::NotAPairing);
        }
        let pairs: Vec<(usize, usize)> = rho.blocks().iter().map(|b| (b[0], b[1])).collect();
        let half = pairs.len();
        let mut acc = int(0);
        for mask in 0u32..(1u32 << half) {
            let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(half + mask.count_ones() as usize);
            for (idx, &(a, b)) in pairs.iter().enumerate() {
                if mask & (1 << idx) != 0 {
                    blocks.push(vec![a]);
                    blocks.push(vec![b]);
                } else {
                    blocks.push(vec![a, b]);
                }
            }
            let broken = SetPartition::from_blocks(rho.k(), blocks).expect("same ground set");
            let u = self.u_function(&broken);
            if mask.count_ones() % 2 == 0 {
                acc += u;
            } else {
                acc -= u;
            }
        }
        Ok(acc)
    }

    fn guard_order(&self, k: usize) -> Result<(), MomentError> {
        if k > MAX_MOMENT_ORDER {
            return Err(MomentError::OrderTooLarge {
                k,
                max: MAX_MOMENT_ORDER,
            });
        }
        Ok(())
    }

    /// The `k`-th moment of the limit law along one route. Order 0 gives 1
    /// and odd orders give 0 on every route.
    pub fn moment(&self, route: Route, k: usize) -> Result<Scalar, MomentError> {
        self.guard_order(k)?;
        if k == 0 {
            return Ok(int(1));
        }
        if k % 2 == 1 {
            return Ok(int(0));
        }
        match route {
            Route::A => self.route_a(k),
            Route::B => self.route_b(k),
            Route::C => self.route_c(k),
            Route::D => Ok(ccr_gue::matrix_moment(&self.weights, k)?),
        }
    }

    fn route_a(&self, k: usize) -> Result<Scalar, MomentError> {
        let mut acc = int(0);
        for rho in enumerate_pairings(k)? {
            acc += self.t_pairing(&rho)?;
        }
        Ok(acc)
    }

    fn route_b(&self, k: usize) -> Result<Scalar, MomentError> {
        let mut acc = int(0);
        for pi in enumerate_le2(k)? {
            let s = pi.singleton_count();
            let coeff = int(pairing_count(s) as i64);
            let term = coeff * self.chi_tau(&pi);
            if (s / 2) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        Ok(acc)
    }

    fn route_c(&self, k: usize) -> Result<Scalar, MomentError> {
        let d = self.weights.d();
        let eta = Permutation::forward_cycle(k);
        let mut acc = int(0);
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
                let mut term = self.weights.weight(tuple[0]).clone();
                for &(p, q, colour) in rho.pairs() {
                    match colour {
                        PairColour::Blue => term *= self.weights.weight(tuple[q - 1]).clone(),
                        PairColour::Red => {
                            term *= -(self.weights.weight(tuple[p - 1])
                                * self.weights.weight(tuple[q - 1]))
                        }
                    }
                }
                acc += term;
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
        Ok(acc)
    }

    /// All four routes at once, in route order.
    pub fn moments_all_routes(&self, k: usize) -> Result<Vec<(Route, Scalar)>, MomentError> {
        Route::ALL
            .iter()
            .map(|&r| self.moment(r, k).map(|m| (r, m)))
            .collect()
    }

    /// Whether `|μ(X^k)| ≤ 2^k (k-1)!!` (route B value; odd orders are 0).
    pub fn moment_bound_holds(&self, k: usize) -> Result<bool, MomentError> {
        let m = self.moment(Route::B, k)?;
        if k % 2 == 1 {
            return Ok(m == int(0));
        }
        let bound = pow_i(&int(2), k as i64) * int(pairing_count(k) as i64);
        Ok(m.abs() <= bound)
    }

    /// The Hankel matrix `[μ(X^(i+j))]` for `0 ≤ i, j < size`.
    pub fn hankel_matrix(&self, size: usize) -> Result<Vec<Vec<Scalar>>, MomentError> {
        let moments: Vec<Scalar> = (0..=2 * (size.saturating_sub(1)))
            .map(|k| self.moment(Route::B, k))
            .collect::<Result<_, _>>()?;
        Ok((0..size)
            .map(|i| (0..size).map(|j| moments[i + j].clone()).collect())
            .collect())
    }

    /// Leading principal minors of the Hankel matrix, sizes `1ⅹ1` up to
    /// `size ⅹ size`. All of them are non-negative for a genuine moment
    /// sequence.
    pub fn hankel_minors(&self, size: usize) -> Result<Vec<Scalar>, MomentError> {
        let h = self.hankel_matrix(size)?;
        Ok((1..=size).map(|t| determinant(&h, t)).collect())
    }
}

/// Exact determinant of the leading `t ⅹ t` block by cofactor expansion.
fn determinant(m: &[Vec<Scalar>], t: usize) -> Scalar {
    fn go(m: &[Vec<Scalar>], rows: &[usize], cols: &[usize]) -> Scalar {
        if rows.len() == 1 {
            return m[rows[0]][cols[0]].clone();
        }
        let mut acc = int(0);
        let sub_rows = &rows[1..];
        for (pos, &c) in cols.iter().enumerate() {
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = go(m, sub_rows, &sub_cols);
            let term = &m[rows[0]][c] * minor;
            if pos % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    if t == 0 {
        return int(1);
    }
    let idx: Vec<usize> = (0..t).collect();
    go(m, &idx, &idx)
}

/// The two orbit-based evaluations of the character of `τ_π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaVariant {
    /// Orbits of `η_(k+1)·σ_π` on `{1,…,k+1}`; each orbit contributes the
    /// power sum of its intersection count with the marker set
    /// `B_π = {block maxima} ∪ {k+1}`.
    Extended,
    /// Orbits of `η_k·σ_π` on `{1,…,k}`; markers are the block maxima
    /// counted with multiplicity plus an extra marker at 1.
    Windowed,
}

/// Evaluates the character of `τ_π` through the orbit structure of a
/// cycle-times-involution product. An orbit holding `m` markers
/// contributes `Σ_c w_c^m`; an orbit with no marker contributes the number
/// of weights.
pub fn chi_tau_via_sigma(
    w: &WeightVector,
    pi: &AtMostPairPartition,
    variant: SigmaVariant,
) -> Result<Scalar, MomentError> {
    let k = pi.k();
    let sigma = sigma_pi(pi);
    let (bound, markers) = sigma_markers(pi, variant);
    let q = Permutation::forward_cycle(bound).compose(&sigma);
    let mut acc = int(1);
    for orbit in q.orbits(bound)?.orbits() {
        let m = orbit
            .iter()
            .map(|e| markers.iter().filter(|&&b| b == *e).count())
            .sum::<usize>();
        acc *= w.power_sum_or_d(m);
    }
    debug_assert!(bound == k || bound == k + 1);
    Ok(acc)
}

/// Marker multiset and domain bound for each variant.
fn sigma_markers(pi: &AtMostPairPartition, variant: SigmaVariant) -> (usize, Vec<usize>) {
    let order = BlockOrder::new(pi);
    let mut markers: Vec<usize> = (1..=order.ell()).map(|i| order.b(i)).collect();
    match variant {
        SigmaVariant::Extended => {
            markers.push(pi.k() + 1);
            (pi.k() + 1, markers)
        }
        SigmaVariant::Windowed => {
            markers.push(1);
            (pi.k(), markers)
        }
    }
}

/// The same value as a literal colouring sum: all maps
/// `i: {1,…,bound} → {1,…,d}` with `i∘η = i∘σ_π`, each contributing the
/// product of `w_i(m)` over the marker multiset. Exponential in `bound`;
/// guarded.
pub fn chi_tau_colouring_bruteforce(
    w: &WeightVector,
    pi: &AtMostPairPartition,
    variant: SigmaVariant,
) -> Result<Scalar, MomentError> {
    let d = w.d();
    let sigma = sigma_pi(pi);
    let (bound, markers) = sigma_markers(pi, variant);
    let total = (d as u128).pow(bound as u32);
    if total > COLOURING_CAP {
        return Err(MomentError::ColouringTooLarge(total, COLOURING_CAP));
    }
    let eta = Permutation::forward_cycle(bound);
    let mut acc = int(0);
    let mut tuple = vec![1usize; bound];
    'tuples: loop {
        let compatible = (1..=bound).all(|m| tuple[eta.apply(m) - 1] == tuple[sigma.apply(m) - 1]);
        if compatible {
            let mut term = int(1);
            for &m in &markers {
                term *= w.weight(tuple[m - 1]);
            }
            acc += term;
        }
        let mut pos = 0;
        loop {
            if pos == bound {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::partitions::enumerate_partitions;

    fn engine(parts: &[(i64, i64)]) -> MomentEngine {
        MomentEngine::new(WeightVector::new(parts.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap())
    }

    fn test_engines() -> Vec<MomentEngine> {
        vec![
            engine(&[(1, 2), (1, 2)]),
            engine(&[(2, 3), (1, 3)]),
            engine(&[(1, 2), (1, 3), (1, 6)]),
            engine(&[(1, 3), (1, 3), (1, 3)]),
        ]
    }

    #[test]
    fn u_on_small_partitions() {
        let e = engine(&[(1, 2), (1, 2)]);
        let p3 = e.weights().power_sum(3).unwrap();
        assert_eq!(e.u_function(&SetPartition::discrete(2).unwrap()), p3);
        assert_eq!(e.u_function(&SetPartition::full(2).unwrap()), int(1));
        // the seven-point worked partition gives a 4-cycle, hence p_4 = 1/8
        let pi = SetPartition::parse("{1,6}{2,5}{3}{4,7}").unwrap();
        assert_eq!(e.u_function(&pi), rat(1, 8));
    }

    #[test]
    fn u_is_independent_of_cache_state() {
        let e = engine(&[(1, 2), (1, 3), (1, 6)]);
        let pi = SetPartition::parse("{1,4}{2}{3,5}").unwrap();
        let first = e.u_function(&pi);
        let second = e.u_function(&pi);
        assert_eq!(first, second);
        let fresh = engine(&[(1, 2), (1, 3), (1, 6)]);
        assert_eq!(fresh.u_function(&pi), first);
    }

    #[test]
    fn chi_tau_agrees_with_u_on_small_blocks() {
        for e in test_engines() {
            for k in 1..=6usize {
                for pi in enumerate_le2(k).unwrap() {
                    assert_eq!(
                        e.chi_tau(&pi),
                        e.u_function(pi.partition()),
                        "weights {} pi {}",
                        e.weights(),
                        pi
                    );
                }
            }
        }
    }

    #[test]
    fn t_of_a_single_pair() {
        for e in test_engines() {
            let p3 = e.weights().power_sum(3).unwrap();
            let pair = SetPartition::full(2).unwrap();
            assert_eq!(e.t_incl_excl(&pair), int(1) - p3.clone());
            assert_eq!(e.t_pairing(&pair).unwrap(), int(1) - p3);
        }
    }

    #[test]
    fn t_pairing_matches_inclusion_exclusion() {
        for e in test_engines() {
            for k in [2usize, 4, 6] {
                for rho in enumerate_pairings(k).unwrap() {
                    assert_eq!(
                        e.t_pairing(&rho).unwrap(),
                        e.t_incl_excl(&rho),
                        "weights {} rho {}",
                        e.weights(),
                        rho
                    );
                }
            }
        }
        assert!(matches!(
            test_engines()[0].t_pairing(&SetPartition::full(3).unwrap()),
            Err(MomentError::NotAPairing)
        ));
    }

    #[test]
    fn moment_guards() {
        let e = engine(&[(1, 2), (1, 2)]);
        for r in Route::ALL {
            assert_eq!(e.moment(r, 0).unwrap(), int(1));
            assert_eq!(e.moment(r, 1).unwrap(), int(0));
            assert_eq!(e.moment(r, 5).unwrap(), int(0));
            assert!(matches!(
                e.moment(r, 13),
                Err(MomentError::OrderTooLarge { .. })
            ));
        }
    }

    #[test]
    fn second_moment_is_one_minus_p3() {
        for e in test_engines() {
            let expect = int(1) - e.weights().power_sum(3).unwrap();
            for r in Route::ALL {
                assert_eq!(e.moment(r, 2).unwrap(), expect, "route {r} weights {}", e.weights());
            }
        }
    }

    #[test]
    fn routes_agree_up_to_order_six() {
        for e in test_engines() {
            for k in [2usize, 4, 6] {
                let a = e.moment(Route::A, k).unwrap();
                for r in [Route::B, Route::C, Route::D] {
                    assert_eq!(e.moment(r, k).unwrap(), a, "route {r} k={k} weights {}", e.weights());
                }
            }
        }
    }

    #[test]
    fn fourth_moment_uniform_closed_form() {
        // 2 - 5/d² + 3/d⁴ at uniform weights
        for d in [2usize, 3, 4] {
            let e = MomentEngine::new(WeightVector::uniform(d).unwrap());
            let d2 = int((d * d) as i64);
            let expect = int(2) - rat(5, 1) / &d2 + rat(3, 1) / (&d2 * &d2);
            assert_eq!(e.moment(Route::B, 4).unwrap(), expect, "d={d}");
        }
    }

    #[test]
    fn chi_tau_variants_agree_with_direct_character() {
        for e in test_engines() {
            for k in 1..=6usize {
                for pi in enumerate_le2(k).unwrap() {
                    let direct = e.chi_tau(&pi);
                    for variant in [SigmaVariant::Extended, SigmaVariant::Windowed] {
                        assert_eq!(
                            chi_tau_via_sigma(e.weights(), &pi, variant).unwrap(),
                            direct,
                            "variant {variant:?} pi {pi} weights {}",
                            e.weights()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn chi_tau_variants_match_brute_colouring_sums() {
        for e in test_engines() {
            for k in 1..=4usize {
                for pi in enumerate_le2(k).unwrap() {
                    for variant in [SigmaVariant::Extended, SigmaVariant::Windowed] {
                        assert_eq!(
                            chi_tau_via_sigma(e.weights(), &pi, variant).unwrap(),
                            chi_tau_colouring_bruteforce(e.weights(), &pi, variant).unwrap(),
                            "variant {variant:?} pi {pi} weights {}",
                            e.weights()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn singleton_partitions_have_vanishing_t() {
        let e = engine(&[(1, 2), (1, 3), (1, 6)]);
        for k in 1..=5usize {
            for pi in enumerate_partitions(k).unwrap() {
                if pi.has_singleton() {
                    assert_eq!(e.t_incl_excl(&pi), int(0), "pi {pi}");
                }
            }
        }
    }

    #[test]
    fn hankel_minors_nonnegative() {
        for e in test_engines() {
            for minor in e.hankel_minors(4).unwrap() {
                assert!(minor >= int(0), "minor {minor} weights {}", e.weights());
            }
        }
    }

    #[test]
    fn determinant_small_cases() {
        let m = vec![
            vec![int(1), int(2)],
            vec![int(3), int(4)],
        ];
        assert_eq!(determinant(&m, 1), int(1));
        assert_eq!(determinant(&m, 2), int(-2));
        let m3 = vec![
            vec![int(2), int(0), int(1)],
            vec![int(0), int(3), int(0)],
            vec![int(1), int(0), int(2)],
        ];
        assert_eq!(determinant(&m3, 3), int(9));
    }

    #[test]
    fn moment_bounds_hold() {
        for e in test_engines() {
            for k in 0..=8usize {
                assert!(e.moment_bound_holds(k).unwrap(), "k={k} weights {}", e.weights());
            }
        }
    }
}
