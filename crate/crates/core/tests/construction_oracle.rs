use threeperm_core::{
    build_family, build_family_tensor, construction::build_family_tensor_variant, induced_subfamily,
    BlockLabel, PermutationFamily, Variant,
};

fn canon(k: u32) -> PermutationFamily {
    build_family(k, &Variant::canonical(k)).unwrap()
}

/// Dense Kronecker power of a 3×3 matrix, row-major.
fn kron_power(m: &[[u8; 3]; 3], k: u32) -> Vec<Vec<u8>> {
    let mut acc = vec![vec![1u8]];
    for _ in 0..k {
        let size = acc.len();
        let mut next = vec![vec![0u8; size * 3]; size * 3];
        for (r1, row) in m.iter().enumerate() {
            for (c1, &x) in row.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for r2 in 0..size {
                    for c2 in 0..size {
                        next[r1 * size + r2][c1 * size + c2] = acc[r2][c2];
                    }
                }
            }
        }
        acc = next;
    }
    acc
}

#[test]
fn dense_matrix_product_small_depths() {
    let mats = threeperm_core::Direction::R.matrices();
    for k in 0..=4 {
        let f = canon(k);
        let n = f.n();
        for (i, m) in mats.iter().enumerate() {
            let dense = kron_power(m, k);
            let v: Vec<u32> = (1..=n as u32).collect();
            let product: Vec<u32> = dense
                .iter()
                .map(|row| row.iter().zip(&v).map(|(&a, &b)| a as u32 * b).sum())
                .collect();
            assert_eq!(product, f.triple().one_line(i), "k={k} perm={}", i + 1);
        }
    }
}

#[test]
fn recursive_equals_tensor_up_to_depth_8() {
    for k in 0..=8 {
        let rec = canon(k);
        let ten = build_family_tensor(k).unwrap();
        assert_eq!(rec, ten, "k={k}");
        assert_eq!(rec.triple().one_line(0), (1..=rec.n() as u32).collect::<Vec<_>>());
    }
}

#[test]
fn every_variant_is_a_bijection_and_matches_tensor_form() {
    for k in 0..=6 {
        for v in Variant::all(k) {
            let f = build_family(k, &v).unwrap();
            for i in 0..3 {
                let mut seen = f.triple().one_line(i);
                seen.sort_unstable();
                assert_eq!(seen, (1..=f.n() as u32).collect::<Vec<_>>());
            }
            assert_eq!(f, build_family_tensor_variant(&v).unwrap(), "variant {v}");
        }
    }
    // depth 8 only for a handful of words
    for word in ["RRRRRRRR", "LLLLLLLL", "RLRLRLRL", "LLRRLRRL"] {
        let v: Variant = word.parse().unwrap();
        assert_eq!(build_family(8, &v).unwrap(), build_family_tensor_variant(&v).unwrap());
    }
}

#[test]
fn self_similarity_on_every_block() {
    for k in 1..=6 {
        let f = canon(k);
        let below = canon(k - 1);
        for block in BlockLabel::ALL {
            assert_eq!(induced_subfamily(&f, block).unwrap(), below, "k={k} block {block}");
        }
    }
    for v in Variant::all(4) {
        let f = build_family(4, &v).unwrap();
        let below = build_family(3, &v.tail()).unwrap();
        for block in BlockLabel::ALL {
            assert_eq!(induced_subfamily(&f, block).unwrap(), below);
        }
    }
}

#[test]
fn golden_n27_table() {
    let f = canon(3);
    assert_eq!(
        f.triple().one_line(1),
        vec![
            27, 25, 26, 21, 19, 20, 24, 22, 23, 9, 7, 8, 3, 1, 2, 6, 4, 5, 18, 16, 17, 12, 10, 11, 15, 13,
            14
        ]
    );
    assert_eq!(
        f.triple().one_line(2),
        vec![
            14, 15, 13, 17, 18, 16, 11, 12, 10, 23, 24, 22, 26, 27, 25, 20, 21, 19, 5, 6, 4, 8, 9, 7, 2, 3, 1
        ]
    );
}
