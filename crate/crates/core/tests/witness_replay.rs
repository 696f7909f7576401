use proptest::prelude::*;
use threeperm_core::witness::guarantee;
use threeperm_core::{
    build_family, disc_quadruple, prefix_profile, theorem_bound, Coloring, PermutationFamily, Side, Sign,
    Variant, WitnessBuilder,
};

const COMBOS: [(Side, Sign); 4] = [
    (Side::L, Sign::Plus),
    (Side::L, Sign::Minus),
    (Side::R, Sign::Plus),
    (Side::R, Sign::Minus),
];

fn canon(k: u32) -> PermutationFamily {
    build_family(k, &Variant::canonical(k)).unwrap()
}

/// Checks soundness, guarantee and the sandwich against the exact functional.
fn check_all(f: &PermutationFamily, builder: &WitnessBuilder, c: &Coloring) -> Result<(), String> {
    let p = prefix_profile(f, c).unwrap();
    let q = disc_quadruple(f, c).unwrap();
    for (side, sign) in COMBOS {
        let (w, replay) = builder.build_checked(c, side, sign).unwrap();
        if !replay.holds() {
            return Err(format!("replay {replay:?} for {side}{sign}"));
        }
        let values: Vec<i32> = (0..3)
            .map(|i| match side {
                Side::L => p.prefix(i, w.cuts[i] as usize),
                Side::R => p.suffix(i, w.cuts[i] as usize),
            })
            .collect();
        if values != w.per_perm_values || values.iter().sum::<i32>() != w.achieved {
            return Err(format!("unsound {w:?} vs {values:?}"));
        }
        if w.guarantee != guarantee(f.k(), c.total(), sign) || !w.meets_guarantee() {
            return Err(format!("guarantee missed {w:?}"));
        }
        let exact = match (side, sign) {
            (Side::L, Sign::Plus) => q.l_plus.value,
            (Side::L, Sign::Minus) => q.l_minus.value,
            (Side::R, Sign::Plus) => q.r_plus.value,
            (Side::R, Sign::Minus) => q.r_minus.value,
        };
        let sandwiched = match sign {
            Sign::Plus => w.achieved <= exact,
            Sign::Minus => w.achieved >= exact,
        };
        if !sandwiched {
            return Err(format!("{w:?} beats exact {exact}"));
        }
    }
    let bad = builder.bad_prefix(c).unwrap();
    if bad.value.unsigned_abs() < theorem_bound(f.k()) || p.prefix(bad.perm - 1, bad.len as usize) != bad.value {
        return Err(format!("bad prefix {bad:?}"));
    }
    Ok(())
}

#[test]
fn full_enumeration_depth_one_and_two() {
    for k in 1..=2 {
        let f = canon(k);
        let b = WitnessBuilder::new(&f);
        for mask in 0u64..1 << f.n() {
            check_all(&f, &b, &Coloring::from_mask(f.n(), mask)).unwrap();
        }
    }
}

#[test]
fn case_ii_colorings_take_the_corollary_branch() {
    // a = 9 on block A, b = c = -1 on B and C: case (ii) at the top level
    let f = canon(3);
    let b = WitnessBuilder::new(&f);
    let mut v = vec![1i8; 27];
    for e in [9, 10, 11, 12, 13, 18, 19, 20, 21, 22] {
        v[e] = -1;
    }
    let c = Coloring::new(v).unwrap();
    let cls = threeperm_core::classify_blocks(&f, &c).unwrap();
    assert_eq!((cls.a, cls.b, cls.c), (9, -1, -1));
    assert_eq!(cls.case, Some(threeperm_core::Case::II));
    let (_, replay) = b.build_checked(&c, Side::L, Sign::Plus).unwrap();
    assert!(replay.case_ii_steps >= 1);
    check_all(&f, &b, &c).unwrap();
}

#[test]
fn tied_blocks() {
    let f = canon(2);
    let b = WitnessBuilder::new(&f);
    // (1, 1, -1) and (1, -1, 1): ties between blocks
    for v in [[1, 1, -1, 1, -1, 1, -1, -1, 1], [1, -1, 1, -1, -1, 1, 1, -1, 1]] {
        check_all(&f, &b, &Coloring::new(v.to_vec()).unwrap()).unwrap();
    }
}

#[test]
fn variants_meet_guarantees_on_samples() {
    for k in 1..=5 {
        for v in Variant::all(k) {
            let f = build_family(k, &v).unwrap();
            let b = WitnessBuilder::new(&f);
            for s in 0..200 {
                check_all(&f, &b, &Coloring::random(f.n(), 99, s)).unwrap();
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_colorings_up_to_depth_six(k in 1u32..=6, seed in any::<u64>()) {
        let f = canon(k);
        let b = WitnessBuilder::new(&f);
        let c = Coloring::random(f.n(), seed, 0);
        prop_assert_eq!(check_all(&f, &b, &c), Ok(()));
    }

    #[test]
    fn biased_colorings(k in 2u32..=5, seed in any::<u64>(), bias in 0u32..4) {
        // skewed colorings reach large |χ([n])| and case (ii) more often
        let f = canon(k);
        let b = WitnessBuilder::new(&f);
        let r = Coloring::random(f.n(), seed, 1);
        let s = Coloring::random(f.n(), seed, 2);
        let v: Vec<i8> = r.values().iter().zip(s.values()).map(|(&x, &y)| if bias % 2 == 0 { x.max(y) } else { x.min(y) }).collect();
        prop_assert_eq!(check_all(&f, &b, &Coloring::new(v).unwrap()), Ok(()));
    }
}
