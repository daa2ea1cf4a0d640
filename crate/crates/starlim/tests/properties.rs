//! Property tests of the public surface: group laws, lattice laws,
//! representative independence of the partition functions, parity of the
//! moments and cross-route agreement at random weights.

use std::collections::BTreeSet;

use proptest::prelude::*;
use starlim::algebra::{character, int, rat};
use starlim::{
    a0_spectral, b_pi, enumerate_pairings, mixed_trace_with_fresh, s_n_moment, sigma_pi, tau_pi,
    AtMostPairPartition, MixedIndex, MomentEngine, Permutation, Route, Scalar, SetPartition,
    WeightVector,
};

fn weights_strategy() -> impl Strategy<Value = WeightVector> {
    proptest::collection::vec(1i64..=12, 2..=4).prop_map(|nums| {
        let total: i64 = nums.iter().sum();
        WeightVector::new(nums.into_iter().map(|a| rat(a, total)).collect())
            .expect("positive parts of a unit sum")
    })
}

/// Words over the star indices; their products range over reachable
/// permutations, their kernels over partitions.
fn star_word_strategy() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(1usize..=6, 1..=7)
}

fn partition_strategy() -> impl Strategy<Value = SetPartition> {
    star_word_strategy().prop_map(|tuple| SetPartition::kernel(&tuple).expect("non-empty"))
}

fn pairing_strategy() -> impl Strategy<Value = SetPartition> {
    prop_oneof![Just(2usize), Just(4), Just(6), Just(8)].prop_flat_map(|k| {
        let all: Vec<SetPartition> = enumerate_pairings(k).expect("within cap").collect();
        let count = all.len();
        (Just(all), 0..count).prop_map(|(all, i)| all[i].clone())
    })
}

fn le2_strategy() -> impl Strategy<Value = AtMostPairPartition> {
    prop_oneof![Just(3usize), Just(5), Just(6), Just(8)].prop_flat_map(|k| {
        let all: Vec<AtMostPairPartition> =
            starlim::enumerate_le2(k).expect("within cap").collect();
        let count = all.len();
        (Just(all), 0..count).prop_map(|(all, i)| all[i].clone())
    })
}

fn star_product(word: &[usize]) -> Permutation {
    let factors: Vec<Permutation> = word
        .iter()
        .map(|&i| Permutation::star_transposition(i).expect("positive index"))
        .collect();
    Permutation::product(factors.iter())
}

proptest! {
    #[test]
    fn composition_is_associative_and_pointwise(
        a in star_word_strategy(),
        b in star_word_strategy(),
        c in star_word_strategy(),
        m in 1usize..=12,
    ) {
        let (p, q, r) = (star_product(&a), star_product(&b), star_product(&c));
        prop_assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
        prop_assert_eq!(p.compose(&q).apply(m), p.apply(q.apply(m)));
    }

    #[test]
    fn inverse_cancels(a in star_word_strategy()) {
        let p = star_product(&a);
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert!(p.inverse().compose(&p).is_identity());
    }

    #[test]
    fn orbits_partition_the_ground_set(a in star_word_strategy(), bound in 8usize..=14) {
        let p = star_product(&a);
        let d = p.orbits(bound).expect("bound covers the support");
        let mut seen: Vec<usize> = d.orbits().iter().flatten().copied().collect();
        seen.sort_unstable();
        let expect: Vec<usize> = (1..=bound).collect();
        prop_assert_eq!(seen, expect);
    }

    #[test]
    fn kernel_of_label_tuple_roundtrips(pi in partition_strategy()) {
        let labels = pi.label_tuple();
        prop_assert_eq!(SetPartition::kernel(&labels).expect("non-empty"), pi);
    }

    #[test]
    fn meet_refines_both_arguments(
        (a, b) in (1usize..=7).prop_flat_map(|k| (
            proptest::collection::vec(1usize..=6, k),
            proptest::collection::vec(1usize..=6, k),
        )),
    ) {
        let pi = SetPartition::kernel(&a).expect("non-empty");
        let rho = SetPartition::kernel(&b).expect("non-empty");
        let m = pi.meet(&rho).expect("same ground set");
        prop_assert_eq!(m.meet(&pi).expect("same ground set"), m.clone());
        prop_assert_eq!(m.meet(&rho).expect("same ground set"), m.clone());
        prop_assert_eq!(pi.meet(&rho).expect("same"), rho.meet(&pi).expect("same"));
        prop_assert_eq!(pi.meet(&pi).expect("same"), pi);
    }

    #[test]
    fn pi_s_has_singletons_exactly_at_s(k in 2usize..=9, seed in proptest::collection::vec(any::<bool>(), 9)) {
        let s: BTreeSet<usize> = (1..=k).filter(|&e| seed[e - 1]).collect();
        let pi = SetPartition::pi_s(k, &s).expect("subset of the ground set");
        for &e in &s {
            prop_assert!(pi.blocks().contains(&vec![e]));
        }
        let rest: Vec<usize> = (1..=k).filter(|e| !s.contains(e)).collect();
        if !rest.is_empty() {
            prop_assert!(pi.blocks().contains(&rest));
        }
        prop_assert_eq!(pi.num_blocks(), s.len() + usize::from(!rest.is_empty()));
    }

    #[test]
    fn tau_sigma_and_markers_have_the_documented_shape(pi in le2_strategy()) {
        let k = pi.k();
        let ell = pi.partition().num_blocks();
        let tau = tau_pi(&pi);
        for m in (ell + 2)..=(k + 3) {
            prop_assert_eq!(tau.apply(m), m);
        }
        let sigma = sigma_pi(&pi);
        prop_assert!(sigma.compose(&sigma).is_identity());
        let markers = b_pi(&pi);
        prop_assert!(markers.contains(&(k + 1)));
        let maxima: BTreeSet<usize> = pi
            .partition()
            .blocks()
            .iter()
            .map(|b| *b.last().expect("non-empty block"))
            .collect();
        let expect: BTreeSet<usize> = maxima.into_iter().chain([k + 1]).collect();
        prop_assert_eq!(markers, expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn u_is_representative_independent(w in weights_strategy(), tuple in star_word_strategy()) {
        let engine = MomentEngine::new(w.clone());
        let pi = SetPartition::kernel(&tuple).expect("non-empty");
        let literal = character(&w, &star_product(&tuple));
        prop_assert_eq!(engine.u_function(&pi), literal);
    }

    #[test]
    fn t_vanishes_with_a_singleton(w in weights_strategy(), pi in partition_strategy()) {
        prop_assume!(pi.has_singleton());
        let engine = MomentEngine::new(w);
        prop_assert_eq!(engine.t_incl_excl(&pi), int(0));
    }

    #[test]
    fn pairing_collapse_matches_inclusion_exclusion(
        w in weights_strategy(),
        rho in pairing_strategy(),
    ) {
        let engine = MomentEngine::new(w);
        let fast = engine.t_pairing(&rho).expect("input is a pairing");
        prop_assert_eq!(fast, engine.t_incl_excl(&rho));
    }

    #[test]
    fn odd_moments_vanish(w in weights_strategy(), j in 0usize..=3) {
        let engine = MomentEngine::new(w);
        let k = 2 * j + 1;
        prop_assert_eq!(engine.moment(Route::B, k).expect("within caps"), int(0));
    }

    #[test]
    fn routes_agree_at_random_weights(w in weights_strategy(), k in 0usize..=6) {
        let engine = MomentEngine::new(w);
        let values = engine.moments_all_routes(k).expect("within caps");
        for (route, value) in &values {
            prop_assert_eq!(
                value,
                &values[0].1,
                "route {} strays at k = {}",
                route,
                k
            );
        }
    }

    #[test]
    fn second_moment_of_s_n_is_exact(w in weights_strategy(), n in 1usize..=100_000) {
        let engine = MomentEngine::new(w.clone());
        let m = s_n_moment(&engine, n, 2).expect("within caps");
        let expect = int(1) - w.power_sum(3).expect("valid order");
        prop_assert_eq!(m.exact(), Some(&expect));
    }

    #[test]
    fn mixed_trace_ignores_the_fresh_choice(
        w in weights_strategy(),
        word in proptest::collection::vec(
            prop_oneof![
                Just(MixedIndex::A0),
                (1usize..=4).prop_map(MixedIndex::Finite),
            ],
            0..=6,
        ),
        extra in 0usize..=5,
    ) {
        let generic = word.iter().filter(|l| matches!(l, MixedIndex::A0)).count();
        let low: Vec<usize> = (0..generic).map(|t| 7 + t).collect();
        let high: Vec<usize> = (0..generic).map(|t| 20 + extra + 2 * t).collect();
        let base = mixed_trace_with_fresh(&w, &word, &low).expect("fresh above the word");
        let other = mixed_trace_with_fresh(&w, &word, &high).expect("fresh above the word");
        prop_assert_eq!(base, other);
    }

    #[test]
    fn spectral_atoms_carry_unit_mass_and_power_sums(w in weights_strategy(), k in 0usize..=4) {
        let atoms = a0_spectral(&w);
        let total: Scalar = atoms.iter().map(|a| a.mass.clone()).sum();
        prop_assert_eq!(total, int(1));
        let moment: Scalar = atoms
            .iter()
            .map(|a| {
                let mut acc = a.mass.clone();
                for _ in 0..k {
                    acc *= a.atom.clone();
                }
                acc
            })
            .sum();
        prop_assert_eq!(moment, w.power_sum(k + 1).expect("valid order"));
    }
}
