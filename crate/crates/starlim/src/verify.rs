//! Verification suites: each one checks a combinatorial identity the
//! moment routes rest on, over an exhaustive or seeded-random family of
//! inputs, and reports a [`SuiteOutcome`] instead of panicking.
//!
//! The orbit-correspondence suite accepts the permutation builder as an
//! argument so that a deliberately corrupted builder can serve as a
//! negative control: the suite must fail when fed anything other than the
//! genuine construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{int, Scalar, WeightVector};
use crate::ccr_gue::{
    ccr_normal_order_oracle, ccr_wick, convolution_check, entry_moment, entry_moment_factored,
    EntryMomentSpec, StarLetter, StarWord,
};
use crate::finite_scale::{mixed_trace, mixed_trace_with_fresh, MixedIndex};
use crate::limit_moments::{chi_tau_via_sigma, MomentEngine, SigmaVariant, MAX_MOMENT_ORDER};
use crate::partitions::{
    b_pi, enumerate_le2, enumerate_pairings, enumerate_partitions, sigma_pi, tau_pi,
    AtMostPairPartition, ENUM_CAP,
};
use crate::perm::Permutation;

/// Result of one verification suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl SuiteOutcome {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        SuiteOutcome {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// `𝐭(π) = 0` whenever `π` has a singleton block, exhaustively over all
/// partitions of up to `k_max` points.
pub fn singleton_vanishing(engine: &MomentEngine, k_max: usize) -> SuiteOutcome {
    let k_max = k_max.min(ENUM_CAP);
    let mut checked = 0usize;
    for k in 1..=k_max {
        for pi in enumerate_partitions(k).expect("k within cap") {
            if !pi.has_singleton() {
                continue;
            }
            checked += 1;
            let t = engine.t_incl_excl(&pi);
            if t != int(0) {
                return SuiteOutcome::new(
                    "singleton_vanishing",
                    false,
                    format!("t({pi}) = {t}, expected 0"),
                );
            }
        }
    }
    SuiteOutcome::new(
        "singleton_vanishing",
        true,
        format!("{checked} singleton partitions up to {k_max} points"),
    )
}

/// Orbit correspondence with an injectable permutation builder; see
/// [`orbit_correspondence`].
pub fn orbit_correspondence_with(
    k_max: usize,
    builder: &dyn Fn(&AtMostPairPartition) -> Permutation,
) -> SuiteOutcome {
    let k_max = k_max.min(ENUM_CAP - 1);
    let mut checked = 0usize;
    for k in 1..=k_max {
        for pi in enumerate_le2(k).expect("k within cap") {
            checked += 1;
            let ell = pi.partition().num_blocks();
            let markers = b_pi(&pi);
            let q = Permutation::forward_cycle(k + 1).compose(&sigma_pi(&pi));
            // scan a couple of points beyond k+1 to see the "contained in
            // {1,…,k+1} iff meets the marker set" dichotomy on both sides
            let decomposition = q.orbits(k + 3).expect("support within k+3");
            let mut intersections: Vec<usize> = Vec::new();
            for orbit in decomposition.orbits() {
                let contained = orbit.iter().all(|&m| m <= k + 1);
                let hits = orbit.iter().filter(|m| markers.contains(m)).count();
                if contained != (hits > 0) {
                    return SuiteOutcome::new(
                        "orbit_correspondence",
                        false,
                        format!(
                            "pi {pi}: orbit {orbit:?} breaks the containment/marker \
                             dichotomy for {markers:?}"
                        ),
                    );
                }
                if contained {
                    intersections.push(hits);
                }
            }
            intersections.sort_unstable_by(|a, b| b.cmp(a));

            let t = builder(&pi);
            let bound = (ell + 1).max(t.support_bound());
            let mut sizes: Vec<usize> = t
                .orbits(bound)
                .expect("bound covers support")
                .orbits()
                .iter()
                .filter(|orbit| orbit[0] <= ell + 1 || orbit.len() > 1)
                .map(|orbit| orbit.len())
                .collect();
            sizes.sort_unstable_by(|a, b| b.cmp(a));

            if sizes != intersections {
                return SuiteOutcome::new(
                    "orbit_correspondence",
                    false,
                    format!(
                        "pi {pi}: cycle-involution marker counts {intersections:?} \
                         but orbit sizes {sizes:?}"
                    ),
                );
            }
        }
    }
    SuiteOutcome::new(
        "orbit_correspondence",
        true,
        format!("{checked} partitions up to {k_max} points"),
    )
}

/// For every partition into blocks of size at most 2, the orbit sizes of
/// `τ_π` on `{1,…,ℓ+1}` match, as a multiset, the marker intersection
/// counts of the orbits of `η_(k+1)·σ_π`, and every such orbit meets the
/// marker set.
pub fn orbit_correspondence(k_max: usize) -> SuiteOutcome {
    orbit_correspondence_with(k_max, &tau_pi)
}

/// Non-crossing pairings give `τ_π = id` and a character of 1.
pub fn noncrossing_identity(engine: &MomentEngine, k_max: usize) -> SuiteOutcome {
    let k_max = k_max.min(ENUM_CAP);
    let mut checked = 0usize;
    for k in (2..=k_max).step_by(2) {
        for rho in enumerate_pairings(k).expect("k within cap") {
            if !rho.is_noncrossing_pairing() {
                continue;
            }
            checked += 1;
            let pi = AtMostPairPartition::try_from(rho.clone()).expect("pairing");
            let tau = tau_pi(&pi);
            if !tau.is_identity() {
                return SuiteOutcome::new(
                    "noncrossing_identity",
                    false,
                    format!("tau of non-crossing {rho} is {tau}, expected identity"),
                );
            }
            let chi = engine.chi_tau(&pi);
            if chi != int(1) {
                return SuiteOutcome::new(
                    "noncrossing_identity",
                    false,
                    format!("character of tau for {rho} is {chi}, expected 1"),
                );
            }
        }
    }
    SuiteOutcome::new(
        "noncrossing_identity",
        true,
        format!("{checked} non-crossing pairings up to {k_max} points"),
    )
}

/// Pairing-sum CCR values equal the normal-ordering recursion on every
/// word of length at most `len_max`, for each parameter pair.
pub fn ccr_wick_oracle(params: &[(Scalar, Scalar)], len_max: usize) -> SuiteOutcome {
    let len_max = len_max.min(ENUM_CAP);
    let mut checked = 0usize;
    for (ops, osp) in params {
        for len in 0..=len_max {
            for mask in 0u32..(1u32 << len) {
                let word: StarWord = (0..len)
                    .map(|b| {
                        if mask & (1 << b) != 0 {
                            StarLetter::Star
                        } else {
                            StarLetter::Plain
                        }
                    })
                    .collect();
                checked += 1;
                let wick = ccr_wick(ops, osp, &word).expect("length within cap");
                let oracle = ccr_normal_order_oracle(ops, osp, &word);
                if wick != oracle {
                    return SuiteOutcome::new(
                        "ccr_wick_oracle",
                        false,
                        format!("word {word:?}: pairing sum {wick}, normal ordering {oracle}"),
                    );
                }
            }
        }
    }
    SuiteOutcome::new(
        "ccr_wick_oracle",
        true,
        format!("{checked} words across {} parameter pairs", params.len()),
    )
}

/// All four routes produce the same rational for every even order up to
/// `k_max`.
pub fn route_agreement(engine: &MomentEngine, k_max: usize) -> SuiteOutcome {
    let k_max = k_max.min(MAX_MOMENT_ORDER);
    let mut report = Vec::new();
    for k in (2..=k_max).step_by(2) {
        let values = match engine.moments_all_routes(k) {
            Ok(v) => v,
            Err(e) => {
                return SuiteOutcome::new("route_agreement", false, format!("order {k}: {e}"))
            }
        };
        let (_, reference) = &values[0];
        for (route, value) in &values {
            if value != reference {
                return SuiteOutcome::new(
                    "route_agreement",
                    false,
                    format!(
                        "order {k}: route {route} gives {value}, route A gives {reference}"
                    ),
                );
            }
        }
        report.push(format!("k={k}: {reference}"));
    }
    SuiteOutcome::new("route_agreement", true, report.join(", "))
}

/// `|μ(X^k)| ≤ 2^k (k-1)!!` for every order up to `k_max`.
pub fn moment_bound(engine: &MomentEngine, k_max: usize) -> SuiteOutcome {
    let k_max = k_max.min(MAX_MOMENT_ORDER);
    for k in 0..=k_max {
        match engine.moment_bound_holds(k) {
            Ok(true) => {}
            Ok(false) => {
                return SuiteOutcome::new(
                    "moment_bound",
                    false,
                    format!("order {k} violates the double-factorial bound"),
                )
            }
            Err(e) => return SuiteOutcome::new("moment_bound", false, format!("order {k}: {e}")),
        }
    }
    SuiteOutcome::new(
        "moment_bound",
        true,
        format!("orders 0..={k_max} within 2^k (k-1)!!"),
    )
}

/// Leading principal minors of the moment Hankel matrix are non-negative.
pub fn hankel_positivity(engine: &MomentEngine, size: usize) -> SuiteOutcome {
    match engine.hankel_minors(size) {
        Ok(minors) => {
            for (t, minor) in minors.iter().enumerate() {
                if minor < &int(0) {
                    return SuiteOutcome::new(
                        "hankel_positivity",
                        false,
                        format!("{}x{} minor is {minor}", t + 1, t + 1),
                    );
                }
            }
            SuiteOutcome::new(
                "hankel_positivity",
                true,
                format!(
                    "minors {}",
                    minors
                        .iter()
                        .map(|m| m.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            )
        }
        Err(e) => SuiteOutcome::new("hankel_positivity", false, e.to_string()),
    }
}

/// GUE moments split as the uniform-weight model's moments convolved with
/// an independent Gaussian of variance `1/d²`.
pub fn convolution(d_list: &[usize], k_max: usize) -> SuiteOutcome {
    let k_max = k_max.min(MAX_MOMENT_ORDER);
    let mut checked = 0usize;
    for &d in d_list {
        for k in (0..=k_max).step_by(2) {
            checked += 1;
            match convolution_check(d, k) {
                Ok((lhs, rhs)) => {
                    if lhs != rhs {
                        return SuiteOutcome::new(
                            "convolution",
                            false,
                            format!("d={d} k={k}: GUE {lhs} vs convolution {rhs}"),
                        );
                    }
                }
                Err(e) => {
                    return SuiteOutcome::new("convolution", false, format!("d={d} k={k}: {e}"))
                }
            }
        }
    }
    SuiteOutcome::new(
        "convolution",
        true,
        format!("{checked} (d, k) pairs agree"),
    )
}

/// Mixed traces do not depend on which fresh indices instantiate the
/// generic letters: seeded-random words against shifted and shuffled
/// fresh choices.
pub fn fresh_choice_invariance(w: &WeightVector, seed: u64, trials: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let len = rng.gen_range(1..=6usize);
        let word: Vec<MixedIndex> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    MixedIndex::A0
                } else {
                    MixedIndex::Finite(rng.gen_range(1..=4usize))
                }
            })
            .collect();
        let needed = word.iter().filter(|l| matches!(l, MixedIndex::A0)).count();
        let default = match mixed_trace(w, &word) {
            Ok(v) => v,
            Err(e) => {
                return SuiteOutcome::new(
                    "fresh_choice_invariance",
                    false,
                    format!("trial {trial}: {e}"),
                )
            }
        };
        // fresh picks far above the finite range, in a random order
        let offset = rng.gen_range(10..40usize);
        let stride = rng.gen_range(1..=3usize);
        let mut fresh: Vec<usize> = (0..needed).map(|t| offset + t * stride).collect();
        for i in (1..fresh.len()).rev() {
            let j = rng.gen_range(0..=i);
            fresh.swap(i, j);
        }
        match mixed_trace_with_fresh(w, &word, &fresh) {
            Ok(v) if v == default => {}
            Ok(v) => {
                return SuiteOutcome::new(
                    "fresh_choice_invariance",
                    false,
                    format!("trial {trial}: word {word:?} fresh {fresh:?}: {v} vs {default}"),
                )
            }
            Err(e) => {
                return SuiteOutcome::new(
                    "fresh_choice_invariance",
                    false,
                    format!("trial {trial}: {e}"),
                )
            }
        }
    }
    SuiteOutcome::new(
        "fresh_choice_invariance",
        true,
        format!("{trials} random words, seed {seed}"),
    )
}

/// Direct bicoloured-pairing entry moments match the factorization through
/// diagonal Gaussian and per-class CCR blocks, on seeded-random words.
pub fn entry_factorization(w: &WeightVector, seed: u64, trials: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = w.d();
    for trial in 0..trials {
        let k = 2 * rng.gen_range(0..=4usize);
        let i: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=d)).collect();
        let j: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=d)).collect();
        let spec = EntryMomentSpec::new(i, j).expect("equal lengths");
        let direct = entry_moment(w, &spec);
        let factored = entry_moment_factored(w, &spec);
        match (direct, factored) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(a), Ok(b)) => {
                return SuiteOutcome::new(
                    "entry_factorization",
                    false,
                    format!("trial {trial}: {spec:?}: direct {a}, factored {b}"),
                )
            }
            (Err(e), _) | (_, Err(e)) => {
                return SuiteOutcome::new(
                    "entry_factorization",
                    false,
                    format!("trial {trial}: {e}"),
                )
            }
        }
    }
    SuiteOutcome::new(
        "entry_factorization",
        true,
        format!("{trials} random entry words, seed {seed}"),
    )
}

/// Both orbit-based character evaluations agree with the direct character
/// of `τ_π` on every partition into blocks of size at most 2.
pub fn chi_tau_variants(engine: &MomentEngine, k_max: usize) -> SuiteOutcome {
    let k_max = k_max.min(ENUM_CAP - 1);
    let mut checked = 0usize;
    for k in 1..=k_max {
        for pi in enumerate_le2(k).expect("k within cap") {
            checked += 1;
            let direct = engine.chi_tau(&pi);
            for variant in [SigmaVariant::Extended, SigmaVariant::Windowed] {
                match chi_tau_via_sigma(engine.weights(), &pi, variant) {
                    Ok(v) if v == direct => {}
                    Ok(v) => {
                        return SuiteOutcome::new(
                            "chi_tau_variants",
                            false,
                            format!("pi {pi} variant {variant:?}: {v} vs direct {direct}"),
                        )
                    }
                    Err(e) => {
                        return SuiteOutcome::new(
                            "chi_tau_variants",
                            false,
                            format!("pi {pi}: {e}"),
                        )
                    }
                }
            }
        }
    }
    SuiteOutcome::new(
        "chi_tau_variants",
        true,
        format!("{checked} partitions, two variants each"),
    )
}

/// Runs every suite at moderate sizes for one weight vector.
pub fn run_default(weights: &WeightVector) -> Vec<SuiteOutcome> {
    let engine = MomentEngine::new(weights.clone());
    let ccr_params = [
        (crate::algebra::rat(1, 3), crate::algebra::rat(1, 2)),
        (crate::algebra::rat(2, 5), crate::algebra::rat(1, 5)),
    ];
    vec![
        singleton_vanishing(&engine, 6),
        orbit_correspondence(7),
        noncrossing_identity(&engine, 8),
        chi_tau_variants(&engine, 6),
        ccr_wick_oracle(&ccr_params, 8),
        route_agreement(&engine, 6),
        moment_bound(&engine, 8),
        hankel_positivity(&engine, 4),
        convolution(&[2, 3], 6),
        fresh_choice_invariance(weights, 0x5eed, 60),
        entry_factorization(weights, 0x5eed, 60),
    ]
}
