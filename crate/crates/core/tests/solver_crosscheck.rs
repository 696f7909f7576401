use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use threeperm_core::solver::exhaustive_min_disc_part;
use threeperm_core::{
    build_family, decide_disc_at_most, exhaustive_min_disc, heuristic_coloring, prefix_system_discrepancy,
    theorem_bound, Decision, DecideConfig, ElementOrder, PermutationTriple, Strategy, Variant,
};

fn canon(k: u32) -> PermutationTriple {
    build_family(k, &Variant::canonical(k)).unwrap().into_triple()
}

fn random_triple(n: usize, seed: u64) -> PermutationTriple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms = [0, 1, 2].map(|_| {
        let mut p: Vec<u32> = (1..=n as u32).collect();
        p.shuffle(&mut rng);
        p
    });
    PermutationTriple::from_one_line(perms).unwrap()
}

/// Decide must flip from infeasible to feasible exactly at the exact value.
fn agree(t: &PermutationTriple, cfg: &DecideConfig) {
    let exact = exhaustive_min_disc(t).unwrap();
    assert_eq!(prefix_system_discrepancy(t, &exact.witness).unwrap().value, exact.value);
    for thr in 1..=exact.value + 1 {
        let r = decide_disc_at_most(t, thr, cfg).unwrap();
        match r.decision {
            Decision::Feasible(c) => {
                assert!(thr >= exact.value, "feasible at {thr} below exact {}", exact.value);
                assert!(prefix_system_discrepancy(t, &c).unwrap().value <= thr);
            }
            Decision::Infeasible => assert!(thr < exact.value),
            Decision::Indeterminate => panic!("unbounded search reported indeterminate"),
        }
    }
}

#[test]
fn canonical_families_up_to_27() {
    for k in 0..=2 {
        agree(&canon(k), &DecideConfig::default());
    }
}

#[test]
fn canonical_depth_three() {
    let t = canon(3);
    let merged = (0..16u64)
        .map(|p| exhaustive_min_disc_part(&t, p, 4).unwrap())
        .reduce(|a, b| a.merge(b))
        .unwrap();
    assert_eq!(merged.checked, 1 << 26);
    assert!(merged.value >= theorem_bound(3));
    for thr in 1..=merged.value + 1 {
        let d = decide_disc_at_most(&t, thr, &DecideConfig::default()).unwrap();
        assert_eq!(matches!(d.decision, Decision::Feasible(_)), thr >= merged.value);
    }
}

#[test]
fn random_instances_agree() {
    for seed in 0..20u64 {
        let n = 5 + (seed as usize % 16);
        let t = random_triple(n, seed);
        agree(&t, &DecideConfig::default());
        agree(
            &t,
            &DecideConfig {
                order: ElementOrder::FirstPermutation,
                ..Default::default()
            },
        );
    }
}

#[test]
fn exact_value_invariant_under_relabeling() {
    for seed in 100..105u64 {
        let t = random_triple(14, seed);
        let v = exhaustive_min_disc(&t).unwrap().value;
        for order in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            assert_eq!(exhaustive_min_disc(t.reordered(order)).unwrap().value, v);
        }
    }
}

#[test]
fn greedy_never_beats_the_lower_bound() {
    for k in 0..=8 {
        let t = canon(k);
        let c = heuristic_coloring(&t, Strategy::GreedyBalance, 0);
        assert!(prefix_system_discrepancy(&t, &c).unwrap().value >= theorem_bound(k));
    }
}

#[test]
fn decide_is_monotone_on_variants() {
    for v in Variant::all(2) {
        let t = build_family(2, &v).unwrap().into_triple();
        let mut was_feasible = false;
        for thr in 1..=5 {
            let f = matches!(
                decide_disc_at_most(&t, thr, &DecideConfig::default()).unwrap().decision,
                Decision::Feasible(_)
            );
            assert!(!was_feasible || f);
            was_feasible = f;
        }
    }
}
