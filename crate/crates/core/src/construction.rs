//! Recursive three-permutation families on `[3^k]`.
//!
//! At every level the ground set is split into three consecutive thirds
//! `A`, `B`, `C` and each permutation lists them in a fixed cyclic order:
//!
//! ```text
//!            R (canonical)   L (mirror)
//! perm 1:    A B C           A B C
//! perm 2:    C A B           B C A
//! perm 3:    B C A           C A B
//! ```
//!
//! Inside every position block, permutation `i` recursively applies its own
//! pattern one level down. A [`Variant`] picks `R` or `L` per level, top
//! level first; the all-`R` word is the canonical family.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;
use core::str::FromStr;

use crate::{pow3, Error, Result};

/// Largest depth the builders accept (`3^15` elements).
pub const MAX_DEPTH: u32 = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    R,
    L,
}

impl Direction {
    /// For permutation `i`, position block `j` holds element block `(j + shift[i]) % 3`.
    pub(crate) fn shifts(self) -> [usize; 3] {
        match self {
            Direction::R => [0, 2, 1],
            Direction::L => [0, 1, 2],
        }
    }

    /// The three 3×3 permutation matrices acting on one base-3 digit.
    pub fn matrices(self) -> [[[u8; 3]; 3]; 3] {
        const M1: [[u8; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        const M2: [[u8; 3]; 3] = [[0, 0, 1], [1, 0, 0], [0, 1, 0]];
        const M3: [[u8; 3]; 3] = [[0, 1, 0], [0, 0, 1], [1, 0, 0]];
        match self {
            Direction::R => [M1, M2, M3],
            Direction::L => [M1, M3, M2],
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Direction::R => 'R',
            Direction::L => 'L',
        }
    }
}

/// Shift direction per recursion level, outermost level first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Variant(Vec<Direction>);

impl Variant {
    pub fn new(directions: Vec<Direction>) -> Self {
        Variant(directions)
    }

    /// The all-`R` word of length `k`.
    pub fn canonical(k: u32) -> Self {
        Variant(vec![Direction::R; k as usize])
    }

    /// All `2^k` words, starting from the canonical one. Bit `k-1-h` of the
    /// index selects `L` at level `h`.
    pub fn all(k: u32) -> impl Iterator<Item = Variant> {
        let k = k as usize;
        (0u64..1u64 << k).map(move |idx| {
            Variant(
                (0..k)
                    .map(|h| {
                        if idx >> (k - 1 - h) & 1 == 1 {
                            Direction::L
                        } else {
                            Direction::R
                        }
                    })
                    .collect(),
            )
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.0.iter().all(|&d| d == Direction::R)
    }

    pub fn directions(&self) -> &[Direction] {
        &self.0
    }

    /// The word with its outermost level removed.
    pub fn tail(&self) -> Variant {
        Variant(self.0.get(1..).unwrap_or_default().to_vec())
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{}", d.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'R' => Ok(Direction::R),
                'L' => Ok(Direction::L),
                _ => Err(Error::InvalidDirection(c)),
            })
            .collect::<Result<Vec<_>>>()
            .map(Variant)
    }
}

/// One of the three consecutive thirds of the ground set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockLabel {
    A,
    B,
    C,
}

impl BlockLabel {
    pub const ALL: [BlockLabel; 3] = [BlockLabel::A, BlockLabel::B, BlockLabel::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> BlockLabel {
        Self::ALL[i]
    }

    /// Elements (1-based) covered by this third of `[1..n]`.
    pub fn range(self, n: usize) -> RangeInclusive<u32> {
        let m = (n / 3) as u32;
        let lo = self.index() as u32 * m;
        lo + 1..=lo + m
    }
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockLabel::A => "A",
            BlockLabel::B => "B",
            BlockLabel::C => "C",
        })
    }
}

/// Three permutations of `[1..n]` with their inverses.
///
/// Storage is 0-based; every accessor speaks 1-based elements and positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationTriple {
    n: usize,
    order: [Vec<u32>; 3],
    pos: [Vec<u32>; 3],
}

impl PermutationTriple {
    /// Builds a triple from one-line notation (1-based values).
    pub fn from_one_line(perms: [Vec<u32>; 3]) -> Result<Self> {
        let n = perms[0].len();
        if perms.iter().any(|p| p.len() != n) {
            return Err(Error::RaggedPermutations);
        }
        let mut order: [Vec<u32>; 3] = Default::default();
        for (i, p) in perms.into_iter().enumerate() {
            let mut zero = Vec::with_capacity(n);
            for v in p {
                if v == 0 || v as usize > n {
                    return Err(Error::NotAPermutation {
                        perm: i + 1,
                        n,
                        reason: "value out of range",
                    });
                }
                zero.push(v - 1);
            }
            order[i] = zero;
        }
        Self::from_zero_based(order).map_err(|e| match e {
            Error::NotAPermutation { perm, n, .. } => Error::NotAPermutation {
                perm,
                n,
                reason: "repeated value",
            },
            other => other,
        })
    }

    pub(crate) fn from_zero_based(order: [Vec<u32>; 3]) -> Result<Self> {
        let n = order[0].len();
        let mut pos: [Vec<u32>; 3] = Default::default();
        for (i, o) in order.iter().enumerate() {
            let mut inv = vec![u32::MAX; n];
            for (p, &e) in o.iter().enumerate() {
                let slot = inv.get_mut(e as usize).ok_or(Error::NotAPermutation {
                    perm: i + 1,
                    n,
                    reason: "value out of range",
                })?;
                if *slot != u32::MAX {
                    return Err(Error::NotAPermutation {
                        perm: i + 1,
                        n,
                        reason: "repeated value",
                    });
                }
                *slot = p as u32;
            }
            pos[i] = inv;
        }
        Ok(PermutationTriple { n, order, pos })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Permutation `i` (0, 1 or 2) in one-line notation.
    pub fn one_line(&self, i: usize) -> Vec<u32> {
        self.order[i].iter().map(|&e| e + 1).collect()
    }

    pub fn one_lines(&self) -> [Vec<u32>; 3] {
        [self.one_line(0), self.one_line(1), self.one_line(2)]
    }

    /// Element at 1-based `position` of permutation `i`.
    pub fn element_at(&self, i: usize, position: usize) -> u32 {
        self.order[i][position - 1] + 1
    }

    /// 1-based position of 1-based `element` in permutation `i`.
    pub fn position_of(&self, i: usize, element: u32) -> usize {
        self.pos[i][element as usize - 1] as usize + 1
    }

    #[inline]
    pub(crate) fn order0(&self, i: usize) -> &[u32] {
        &self.order[i]
    }

    #[inline]
    pub(crate) fn pos0(&self, i: usize) -> &[u32] {
        &self.pos[i]
    }

    /// The same three permutations listed in a different order.
    pub fn reordered(&self, perm_order: [usize; 3]) -> Self {
        PermutationTriple {
            n: self.n,
            order: perm_order.map(|i| self.order[i].clone()),
            pos: perm_order.map(|i| self.pos[i].clone()),
        }
    }

    /// Restriction to the elements `lo..lo+len` (0-based), relabeled to `0..len`.
    fn restrict(&self, lo: u32, len: u32) -> Self {
        let order = [0, 1, 2].map(|i| {
            self.order[i]
                .iter()
                .filter(|&&e| e >= lo && e < lo + len)
                .map(|&e| e - lo)
                .collect::<Vec<u32>>()
        });
        PermutationTriple::from_zero_based(order).expect("restriction of a permutation")
    }
}

/// A constructed family: depth, shift word and the permutations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationFamily {
    k: u32,
    variant: Variant,
    triple: PermutationTriple,
}

impl PermutationFamily {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.triple.n
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn triple(&self) -> &PermutationTriple {
        &self.triple
    }

    pub fn into_triple(self) -> PermutationTriple {
        self.triple
    }

    /// Recognizes `triple` as a constructed family, recovering its shift word.
    ///
    /// The first entry of permutation 2 carries the per-level shift in its
    /// base-3 digits (`2` for `R`, `1` for `L`); the candidate is then rebuilt
    /// and compared in full.
    pub fn recognize(triple: &PermutationTriple) -> Result<Self> {
        let n = triple.n;
        let mut k = 0u32;
        while pow3(k).is_some_and(|p| p < n) {
            k += 1;
        }
        if pow3(k) != Some(n) || k > MAX_DEPTH {
            return Err(Error::NotAFamily { k });
        }
        let mut first = triple.order[1][0] as usize;
        let mut dirs = vec![Direction::R; k as usize];
        for h in (0..k as usize).rev() {
            dirs[h] = match first % 3 {
                2 => Direction::R,
                1 => Direction::L,
                _ => return Err(Error::NotAFamily { k }),
            };
            first /= 3;
        }
        let candidate = build_family(k, &Variant(dirs))?;
        if candidate.triple == *triple {
            Ok(candidate)
        } else {
            Err(Error::NotAFamily { k })
        }
    }
}

impl AsRef<PermutationTriple> for PermutationFamily {
    fn as_ref(&self) -> &PermutationTriple {
        &self.triple
    }
}

fn check_depth(k: u32) -> Result<usize> {
    if k > MAX_DEPTH {
        return Err(Error::DepthTooLarge(k));
    }
    pow3(k).ok_or(Error::DepthTooLarge(k))
}

/// Builds the family by iterating the three-block permute step `k` times.
pub fn build_family(k: u32, variant: &Variant) -> Result<PermutationFamily> {
    if variant.len() != k as usize {
        return Err(Error::VariantLength {
            expected: k as usize,
            found: variant.len(),
        });
    }
    check_depth(k)?;
    let mut cur: [Vec<u32>; 3] = [vec![0], vec![0], vec![0]];
    let mut m = 1u32;
    // innermost level first
    for dir in variant.directions().iter().rev() {
        let shifts = dir.shifts();
        for (i, sub) in cur.iter_mut().enumerate() {
            let mut next = Vec::with_capacity(3 * m as usize);
            for j in 0..3 {
                let block = ((j + shifts[i]) % 3) as u32;
                next.extend(sub.iter().map(|&e| block * m + e));
            }
            *sub = next;
        }
        m *= 3;
    }
    Ok(PermutationFamily {
        k,
        variant: variant.clone(),
        triple: PermutationTriple::from_zero_based(cur)?,
    })
}

/// Builds the canonical family as the `k`-fold tensor power of the 3×3
/// permutation matrices applied to `(1, 2, …, 3^k)`.
pub fn build_family_tensor(k: u32) -> Result<PermutationFamily> {
    build_family_tensor_variant(&Variant::canonical(k))
}

/// Tensor-power construction for an arbitrary shift word.
///
/// Row `p` of `M^{⊗k}` has its single one in the column whose base-3 digits
/// are the per-digit images of `p`'s digits, so each entry is computed from
/// the digits of its position alone.
pub fn build_family_tensor_variant(variant: &Variant) -> Result<PermutationFamily> {
    let k = variant.len() as u32;
    let n = check_depth(k)?;
    let mats: Vec<[[[u8; 3]; 3]; 3]> = variant.directions().iter().map(|d| d.matrices()).collect();
    let route = |m: &[[u8; 3]; 3], digit: usize| -> u32 {
        m[digit].iter().position(|&x| x == 1).expect("permutation matrix row") as u32
    };
    let order = [0, 1, 2].map(|i| {
        (0..n)
            .map(|p| {
                let mut rest = p;
                let mut elem = 0u32;
                let mut scale = 1u32;
                // least significant digit belongs to the innermost level
                for mat in mats.iter().rev() {
                    elem += route(&mat[i], rest % 3) * scale;
                    rest /= 3;
                    scale *= 3;
                }
                elem
            })
            .collect::<Vec<u32>>()
    });
    Ok(PermutationFamily {
        k,
        variant: variant.clone(),
        triple: PermutationTriple::from_zero_based(order)?,
    })
}

/// Restricts every permutation to one third of the ground set, keeping
/// order, and relabels it onto `[1..3^{k-1}]`.
pub fn induced_subfamily(f: &PermutationFamily, block: BlockLabel) -> Result<PermutationFamily> {
    if f.k == 0 {
        return Err(Error::NoSublevel);
    }
    let m = (f.n() / 3) as u32;
    Ok(PermutationFamily {
        k: f.k - 1,
        variant: f.variant.tail(),
        triple: f.triple.restrict(block.index() as u32 * m, m),
    })
}

/// Space-separated one-line notation, one permutation per line.
pub fn to_text(triple: &PermutationTriple) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for i in 0..3 {
        for (j, e) in triple.order[i].iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", e + 1);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon(k: u32) -> PermutationFamily {
        build_family(k, &Variant::canonical(k)).unwrap()
    }

    #[test]
    fn depth_one_matches_matrices() {
        let f = canon(1);
        assert_eq!(f.triple().one_lines(), [vec![1, 2, 3], vec![3, 1, 2], vec![2, 3, 1]]);
        let t = build_family_tensor(1).unwrap();
        assert_eq!(t, f);
    }

    #[test]
    fn depth_zero_is_trivial() {
        let f = build_family(0, &"".parse().unwrap()).unwrap();
        assert_eq!(f.triple().one_lines(), [vec![1], vec![1], vec![1]]);
        assert_eq!(f.n(), 1);
    }

    #[test]
    fn n9_table() {
        let f = canon(2);
        assert_eq!(f.triple().one_line(0), (1..=9).collect::<Vec<_>>());
        assert_eq!(f.triple().one_line(1), vec![9, 7, 8, 3, 1, 2, 6, 4, 5]);
        assert_eq!(f.triple().one_line(2), vec![5, 6, 4, 8, 9, 7, 2, 3, 1]);
        assert_eq!(build_family_tensor(2).unwrap().triple().one_line(1), vec![9, 7, 8, 3, 1, 2, 6, 4, 5]);
    }

    #[test]
    fn n27_second_row_prefix() {
        let f = canon(3);
        assert_eq!(&f.triple().one_line(1)[..9], &[27, 25, 26, 21, 19, 20, 24, 22, 23]);
    }

    #[test]
    fn variant_length_checked() {
        let err = build_family(2, &"R".parse().unwrap()).unwrap_err();
        assert_eq!(err, Error::VariantLength { expected: 2, found: 1 });
        assert!("RX".parse::<Variant>().is_err());
    }

    #[test]
    fn left_shift_mirrors_rows() {
        let f = build_family(1, &"L".parse().unwrap()).unwrap();
        assert_eq!(f.triple().one_lines(), [vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]);
    }

    #[test]
    fn induced_subfamily_of_block_a() {
        let f = canon(2);
        let sub = induced_subfamily(&f, BlockLabel::A).unwrap();
        assert_eq!(sub.triple().one_line(1), vec![3, 1, 2]);
        assert_eq!(sub, canon(1));
        let trivial = induced_subfamily(&canon(1), BlockLabel::A).unwrap();
        assert_eq!(trivial, canon(0));
        assert_eq!(induced_subfamily(&canon(0), BlockLabel::A), Err(Error::NoSublevel));
    }

    #[test]
    fn inverse_maps() {
        let f = canon(3);
        let t = f.triple();
        for i in 0..3 {
            for e in 1..=27u32 {
                assert_eq!(t.element_at(i, t.position_of(i, e)), e);
            }
        }
    }

    #[test]
    fn recognize_round_trip() {
        for v in Variant::all(3) {
            let f = build_family(3, &v).unwrap();
            assert_eq!(PermutationFamily::recognize(f.triple()).unwrap(), f);
        }
        let bad = PermutationTriple::from_one_line([vec![1, 2, 3], vec![1, 3, 2], vec![2, 3, 1]]).unwrap();
        assert!(PermutationFamily::recognize(&bad).is_err());
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(PermutationTriple::from_one_line([vec![1, 1], vec![1, 2], vec![2, 1]]).is_err());
        assert!(PermutationTriple::from_one_line([vec![1, 3], vec![1, 2], vec![2, 1]]).is_err());
        assert_eq!(
            PermutationTriple::from_one_line([vec![1, 2], vec![1], vec![2, 1]]),
            Err(Error::RaggedPermutations)
        );
    }

    #[test]
    fn all_variants_enumerated_in_order() {
        let words: Vec<String> = Variant::all(2).map(|v| alloc::format!("{v}")).collect();
        assert_eq!(words, ["RR", "RL", "LR", "LL"]);
    }

    #[test]
    fn text_rendering() {
        assert_eq!(to_text(canon(1).triple()), "1 2 3\n3 1 2\n2 3 1\n");
    }
}
