//! Colorings and the exact discrepancy functionals over a permutation triple.
//!
//! For a coloring `χ` and permutation `i`, `P_i(x)` is the signed sum of the
//! first `x` entries, `x ∈ [0, n]`. The suffix starting at position
//! `y ∈ [1, n+1]` has value `P_i(n) - P_i(y-1)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};

use crate::construction::PermutationTriple;
use crate::{Error, Result};

impl AsRef<PermutationTriple> for PermutationTriple {
    fn as_ref(&self) -> &PermutationTriple {
        self
    }
}

/// A ±1 assignment indexed by element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    values: Vec<i8>,
    total: i32,
}

impl Coloring {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(at) = values.iter().position(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidColor {
                element: at + 1,
                value: values[at] as i64,
            });
        }
        let total = values.iter().map(|&v| v as i32).sum();
        Ok(Coloring { values, total })
    }

    pub fn all_ones(n: usize) -> Self {
        Coloring {
            values: vec![1; n],
            total: n as i32,
        }
    }

    /// Bit `e - 1` of `mask` set means element `e` is colored `-1`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64, "mask colorings cover at most 64 elements");
        let values: Vec<i8> = (0..n).map(|e| if mask >> e & 1 == 1 { -1 } else { 1 }).collect();
        let total = values.iter().map(|&v| v as i32).sum();
        Coloring { values, total }
    }

    /// Uniform random coloring drawn from stream `stream` of the ChaCha8
    /// generator seeded with `seed`. Distinct streams are independent, so
    /// sample `j` of a sweep can be generated without generating `0..j`.
    pub fn random(n: usize, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut values = Vec::with_capacity(n);
        let mut word = 0u64;
        for e in 0..n {
            if e % 64 == 0 {
                word = rng.next_u64();
            }
            values.push(if word >> (e % 64) & 1 == 1 { -1 } else { 1 });
        }
        let total = values.iter().map(|&v| v as i32).sum();
        Coloring { values, total }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Color of 1-based `element`.
    pub fn get(&self, element: u32) -> i8 {
        self.values[element as usize - 1]
    }

    /// `χ([n])`.
    pub fn total(&self) -> i32 {
        self.total
    }

    /// `|χ([n])|`.
    pub fn delta(&self) -> i32 {
        self.total.abs()
    }

    pub fn negated(&self) -> Self {
        Coloring {
            values: self.values.iter().map(|&v| -v).collect(),
            total: -self.total,
        }
    }

    pub fn flip(&mut self, element: u32) {
        let v = &mut self.values[element as usize - 1];
        *v = -*v;
        self.total += 2 * *v as i32;
    }

    /// `+`/`-` string in element order.
    pub fn to_sign_string(&self) -> String {
        self.values.iter().map(|&v| if v > 0 { '+' } else { '-' }).collect()
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.values.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Running signed sums along each permutation, `P_i(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixProfile {
    sums: [Vec<i32>; 3],
}

impl PrefixProfile {
    /// `P_i(0..=n)` for permutation `i` (0, 1 or 2).
    pub fn sums(&self, i: usize) -> &[i32] {
        &self.sums[i]
    }

    pub fn n(&self) -> usize {
        self.sums[0].len() - 1
    }

    pub fn total(&self) -> i32 {
        self.sums[0][self.n()]
    }

    /// Value of the prefix of length `x` of permutation `i`.
    pub fn prefix(&self, i: usize, x: usize) -> i32 {
        self.sums[i][x]
    }

    /// Value of the suffix of permutation `i` starting at 1-based position `y`.
    pub fn suffix(&self, i: usize, y: usize) -> i32 {
        self.total() - self.sums[i][y - 1]
    }
}

pub fn prefix_profile(f: impl AsRef<PermutationTriple>, c: &Coloring) -> Result<PrefixProfile> {
    let t = f.as_ref();
    c.check_len(t.n())?;
    let sums = [0, 1, 2].map(|i| {
        let mut s = Vec::with_capacity(t.n() + 1);
        let mut acc = 0i32;
        s.push(0);
        for &e in t.order0(i) {
            acc += c.values[e as usize] as i32;
            s.push(acc);
        }
        s
    });
    Ok(PrefixProfile { sums })
}

/// An extreme value of a functional with the per-permutation cuts reaching it.
///
/// Prefix functionals report prefix lengths in `[0, n]`; suffix functionals
/// report suffix start positions in `[1, n+1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Extremum {
    pub value: i32,
    pub cuts: [u32; 3],
}

/// The four prefix/suffix max/min functionals of a coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiscQuadruple {
    pub l_plus: Extremum,
    pub l_minus: Extremum,
    pub r_plus: Extremum,
    pub r_minus: Extremum,
}

impl DiscQuadruple {
    pub fn from_profile(p: &PrefixProfile) -> Self {
        let total = p.total();
        let mut q = DiscQuadruple {
            l_plus: Extremum { value: 0, cuts: [0; 3] },
            l_minus: Extremum { value: 0, cuts: [0; 3] },
            r_plus: Extremum { value: 0, cuts: [0; 3] },
            r_minus: Extremum { value: 0, cuts: [0; 3] },
        };
        for i in 0..3 {
            let s = p.sums(i);
            // first occurrence wins on ties
            let (mut hi, mut hi_at, mut lo, mut lo_at) = (s[0], 0, s[0], 0);
            for (x, &v) in s.iter().enumerate().skip(1) {
                if v > hi {
                    hi = v;
                    hi_at = x;
                }
                if v < lo {
                    lo = v;
                    lo_at = x;
                }
            }
            q.l_plus.value += hi;
            q.l_plus.cuts[i] = hi_at as u32;
            q.l_minus.value += lo;
            q.l_minus.cuts[i] = lo_at as u32;
            q.r_plus.value += total - lo;
            q.r_plus.cuts[i] = lo_at as u32 + 1;
            q.r_minus.value += total - hi;
            q.r_minus.cuts[i] = hi_at as u32 + 1;
        }
        q
    }

    /// Values as `[l_plus, l_minus, r_plus, r_minus]`.
    pub fn values(&self) -> [i32; 4] {
        [
            self.l_plus.value,
            self.l_minus.value,
            self.r_plus.value,
            self.r_minus.value,
        ]
    }
}

pub fn disc_quadruple(f: impl AsRef<PermutationTriple>, c: &Coloring) -> Result<DiscQuadruple> {
    Ok(DiscQuadruple::from_profile(&prefix_profile(f, c)?))
}

/// Discrepancy of one coloring on the prefix set system, with a witnessing set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrefixDisc {
    pub value: u32,
    /// 1-based permutation index.
    pub perm: usize,
    /// Prefix length, in `[1, n]`.
    pub len: usize,
}

impl PrefixDisc {
    pub fn from_profile(p: &PrefixProfile) -> Self {
        let mut best = PrefixDisc {
            value: 0,
            perm: 1,
            len: 1,
        };
        for i in 0..3 {
            for (x, &v) in p.sums(i).iter().enumerate().skip(1) {
                if v.unsigned_abs() > best.value {
                    best = PrefixDisc {
                        value: v.unsigned_abs(),
                        perm: i + 1,
                        len: x,
                    };
                }
            }
        }
        best
    }
}

/// `max_{i, x ∈ [1, n]} |P_i(x)|`.
pub fn prefix_system_discrepancy(f: impl AsRef<PermutationTriple>, c: &Coloring) -> Result<PrefixDisc> {
    Ok(PrefixDisc::from_profile(&prefix_profile(f, c)?))
}

/// Discrepancy of one coloring on the system of all intervals of the three
/// permutations: `max_i (max_x P_i(x) - min_x P_i(x))`.
pub fn interval_system_discrepancy(f: impl AsRef<PermutationTriple>, c: &Coloring) -> Result<u32> {
    let p = prefix_profile(f, c)?;
    Ok((0..3)
        .map(|i| {
            let s = p.sums(i);
            let hi = s.iter().max().copied().unwrap_or(0);
            let lo = s.iter().min().copied().unwrap_or(0);
            (hi - lo) as u32
        })
        .max()
        .unwrap_or(0))
}

/// A prefix profile kept current under single-element flips.
///
/// Flipping element `e` shifts `P_i(x)` by `±2` for every `x` at or past
/// `e`'s position in permutation `i`, so a flip costs `O(n)` and never
/// rescans the coloring.
#[derive(Debug, Clone)]
pub struct IncrementalProfile<'a> {
    triple: &'a PermutationTriple,
    colors: Vec<i8>,
    // three rows of n + 1 sums, row stride n + 1
    sums: Vec<i32>,
    total: i32,
}

impl<'a> IncrementalProfile<'a> {
    pub fn new(triple: &'a PermutationTriple, c: &Coloring) -> Result<Self> {
        let p = prefix_profile(triple, c)?;
        let mut sums = Vec::with_capacity(3 * (triple.n() + 1));
        for i in 0..3 {
            sums.extend_from_slice(p.sums(i));
        }
        Ok(IncrementalProfile {
            triple,
            colors: c.values.clone(),
            sums,
            total: c.total,
        })
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn total(&self) -> i32 {
        self.total
    }

    /// Current colors in element order.
    pub fn colors(&self) -> &[i8] {
        &self.colors
    }

    /// Flips 1-based `element`.
    pub fn flip(&mut self, element: u32) {
        self.flip0(element as usize - 1);
    }

    #[inline]
    pub(crate) fn flip0(&mut self, e: usize) {
        let n = self.colors.len();
        let v = &mut self.colors[e];
        *v = -*v;
        let delta = 2 * *v as i32;
        self.total += delta;
        for i in 0..3 {
            let start = i * (n + 1) + self.triple.pos0(i)[e] as usize + 1;
            let end = (i + 1) * (n + 1);
            for s in &mut self.sums[start..end] {
                *s += delta;
            }
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[i32] {
        let n = self.colors.len();
        &self.sums[i * (n + 1)..(i + 1) * (n + 1)]
    }

    /// `[l_plus, l_minus, r_plus, r_minus]` without argmax bookkeeping.
    #[inline]
    pub fn quadruple_values(&self) -> [i32; 4] {
        let mut hi_sum = 0;
        let mut lo_sum = 0;
        for i in 0..3 {
            let row = self.row(i);
            let (mut hi, mut lo) = (0i32, 0i32);
            for &v in row {
                hi = hi.max(v);
                lo = lo.min(v);
            }
            hi_sum += hi;
            lo_sum += lo;
        }
        [hi_sum, lo_sum, 3 * self.total - lo_sum, 3 * self.total - hi_sum]
    }

    /// `max_{i, x ≥ 1} |P_i(x)|`.
    #[inline]
    pub fn prefix_disc_value(&self) -> u32 {
        let mut m = 0u32;
        for i in 0..3 {
            for &v in &self.row(i)[1..] {
                m = m.max(v.unsigned_abs());
            }
        }
        m
    }

    pub fn coloring(&self) -> Coloring {
        Coloring {
            values: self.colors.clone(),
            total: self.total,
        }
    }

    pub fn profile(&self) -> PrefixProfile {
        PrefixProfile {
            sums: [0, 1, 2].map(|i| self.row(i).to_vec()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_family, Variant};
    use proptest::prelude::*;

    fn fam(k: u32) -> PermutationTriple {
        build_family(k, &Variant::canonical(k)).unwrap().into_triple()
    }

    fn pmp() -> Coloring {
        Coloring::new(vec![1, -1, 1]).unwrap()
    }

    #[test]
    fn profile_along_second_permutation() {
        let p = prefix_profile(fam(1), &pmp()).unwrap();
        assert_eq!(p.sums(1), &[0, 1, 2, 1]);
    }

    #[test]
    fn all_ones_profile_is_linear() {
        let p = prefix_profile(fam(2), &Coloring::all_ones(9)).unwrap();
        for i in 0..3 {
            assert_eq!(p.sums(i), &(0..=9).collect::<Vec<i32>>()[..]);
        }
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            prefix_profile(fam(1), &Coloring::all_ones(4)),
            Err(Error::LengthMismatch { expected: 3, found: 4 })
        );
        assert!(Coloring::new(vec![1, 0, 1]).is_err());
    }

    #[test]
    fn quadruple_base_examples() {
        let q = disc_quadruple(fam(1), &pmp()).unwrap();
        assert_eq!(q.l_plus.value, 4);
        assert_eq!(q.l_plus.cuts, [1, 2, 3]);
        assert_eq!(q.r_minus.value, -1);
        assert_eq!(q.l_plus.value + q.r_minus.value, 3 * pmp().total());
        let ones = disc_quadruple(fam(1), &Coloring::all_ones(3)).unwrap();
        assert_eq!(ones.l_plus.value, 9);
        assert_eq!(ones.r_plus.value, 9);
        assert_eq!(ones.r_plus.cuts, [1, 1, 1]);
        assert_eq!(ones.r_minus.cuts, [4, 4, 4]);
    }

    #[test]
    fn prefix_and_interval_base_examples() {
        let d = prefix_system_discrepancy(fam(1), &pmp()).unwrap();
        assert_eq!(d, PrefixDisc { value: 2, perm: 2, len: 2 });
        assert_eq!(interval_system_discrepancy(fam(1), &pmp()).unwrap(), 2);
        assert_eq!(prefix_system_discrepancy(fam(2), &Coloring::all_ones(9)).unwrap().value, 9);
        assert_eq!(interval_system_discrepancy(fam(2), &Coloring::all_ones(9)).unwrap(), 9);
    }

    #[test]
    fn flip_tracks_total() {
        let mut c = Coloring::all_ones(3);
        c.flip(2);
        assert_eq!(c, pmp());
        assert_eq!(c.total(), 1);
        assert_eq!(c.to_sign_string(), "+-+");
    }

    #[test]
    fn random_is_seeded() {
        assert_eq!(Coloring::random(100, 7, 3), Coloring::random(100, 7, 3));
        assert_ne!(Coloring::random(100, 7, 3), Coloring::random(100, 7, 4));
    }

    proptest! {
        #[test]
        fn incremental_matches_recompute(k in 0u32..4, seed in any::<u64>(), flips in proptest::collection::vec(any::<u32>(), 1..40)) {
            let t = fam(k);
            let n = t.n() as u32;
            let mut c = Coloring::random(t.n(), seed, 0);
            let mut inc = IncrementalProfile::new(&t, &c).unwrap();
            for f in flips {
                let e = f % n + 1;
                c.flip(e);
                inc.flip(e);
                let p = prefix_profile(&t, &c).unwrap();
                prop_assert_eq!(inc.profile(), p.clone());
                prop_assert_eq!(inc.quadruple_values(), DiscQuadruple::from_profile(&p).values());
                prop_assert_eq!(inc.prefix_disc_value(), PrefixDisc::from_profile(&p).value);
            }
        }

        #[test]
        fn profile_steps_and_identities(k in 0u32..6, seed in any::<u64>()) {
            let t = fam(k);
            let c = Coloring::random(t.n(), seed, 1);
            let p = prefix_profile(&t, &c).unwrap();
            for i in 0..3 {
                prop_assert_eq!(p.sums(i)[t.n()], c.total());
                for w in p.sums(i).windows(2) {
                    prop_assert_eq!((w[1] - w[0]).abs(), 1);
                }
            }
            let q = DiscQuadruple::from_profile(&p);
            prop_assert!(q.l_plus.value >= 0 && q.l_minus.value <= 0);
            prop_assert!(q.r_plus.value >= 0 && q.r_minus.value <= 0);
            prop_assert_eq!(q.r_minus.value + q.l_plus.value, 3 * c.total());
            prop_assert_eq!(q.r_plus.value + q.l_minus.value, 3 * c.total());
            let neg = disc_quadruple(&t, &c.negated()).unwrap();
            prop_assert_eq!(neg.l_plus.value, -q.l_minus.value);
            prop_assert_eq!(neg.r_plus.value, -q.r_minus.value);
            let pd = PrefixDisc::from_profile(&p);
            prop_assert_eq!(pd.value, prefix_system_discrepancy(&t, &c.negated()).unwrap().value);
            prop_assert!(interval_system_discrepancy(&t, &c).unwrap() >= pd.value);
            prop_assert_eq!(p.prefix(pd.perm - 1, pd.len).unsigned_abs(), pd.value);
        }
    }
}
