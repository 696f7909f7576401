//! Exact prefix discrepancy of a permutation triple.
//!
//! [`exhaustive_min_disc`] enumerates every coloring with `χ(1) = +1` in
//! reflected binary Gray code order, so consecutive colorings differ in one
//! element and the prefix profile is updated in place. The coloring space can
//! be split into `2^bits` parts by fixing the colors of elements `2..=bits+1`,
//! which lets callers run parts on separate workers and merge the results.
//!
//! [`decide_disc_at_most`] is a complete backtracking search: elements are
//! colored one at a time and a branch is cut as soon as some permutation can
//! no longer keep every prefix sum inside `[-t, t]`. For each permutation the
//! set of reachable prefix sums, given the already-fixed entries, is a
//! same-parity integer interval that is walked forward position by position;
//! an empty interval proves no completion exists.

use alloc::vec;
use alloc::vec::Vec;

use crate::construction::PermutationTriple;
use crate::metrics::{Coloring, IncrementalProfile};
use crate::{Error, Result};

/// Largest ground set [`exhaustive_min_disc`] accepts.
pub const EXHAUSTIVE_MAX_N: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub value: u32,
    pub witness: Coloring,
    /// Colorings evaluated.
    pub checked: u64,
}

impl ExactResult {
    /// Keeps the smaller value; on ties keeps `self`.
    pub fn merge(self, other: ExactResult) -> ExactResult {
        let checked = self.checked + other.checked;
        let mut best = if other.value < self.value { other } else { self };
        best.checked = checked;
        best
    }
}

/// Visits `start` and then every coloring reachable by flipping elements of
/// `free` (0-based), one flip per step in Gray code order. Stops early when
/// `visit` returns `false`. Returns the number of colorings visited.
pub fn gray_sweep(
    triple: &PermutationTriple,
    start: &Coloring,
    free: &[usize],
    mut visit: impl FnMut(&IncrementalProfile<'_>) -> bool,
) -> Result<u64> {
    assert!(free.len() < 64, "gray sweep over at most 63 free elements");
    let mut prof = IncrementalProfile::new(triple, start)?;
    if !visit(&prof) {
        return Ok(1);
    }
    let count = 1u64 << free.len();
    for step in 1..count {
        prof.flip0(free[step.trailing_zeros() as usize]);
        if !visit(&prof) {
            return Ok(step + 1);
        }
    }
    Ok(count)
}

/// Number of leading-sign bits usable to split the exhaustive search.
pub fn max_partition_bits(n: usize) -> u32 {
    n.saturating_sub(1) as u32
}

pub fn exhaustive_min_disc(f: impl AsRef<PermutationTriple>) -> Result<ExactResult> {
    exhaustive_min_disc_part(f, 0, 0)
}

/// One part of the exhaustive search. Element 1 is `+1`; bit `j` of `part`
/// set colors element `j + 2` with `-1`, for `j < part_bits`.
pub fn exhaustive_min_disc_part(f: impl AsRef<PermutationTriple>, part: u64, part_bits: u32) -> Result<ExactResult> {
    let t = f.as_ref();
    let n = t.n();
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::TooLargeForExhaustive {
            n,
            cap: EXHAUSTIVE_MAX_N,
        });
    }
    assert!(part_bits <= max_partition_bits(n) && part < 1 << part_bits);
    let fixed = 1 + part_bits as usize;
    let mask = part << 1;
    let start = Coloring::from_mask(n, mask);
    let free: Vec<usize> = (fixed..n).collect();
    let mut best_value = u32::MAX;
    let mut best: Option<Coloring> = None;
    let checked = gray_sweep(t, &start, &free, |p| {
        let v = p.prefix_disc_value();
        if v < best_value {
            best_value = v;
            best = Some(p.coloring());
        }
        // every nonempty odd prefix has |value| ≥ 1
        best_value > 1
    })?;
    Ok(ExactResult {
        value: best_value,
        witness: best.expect("at least one coloring visited"),
        checked,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ElementOrder {
    /// `1, 2, …, n`.
    #[default]
    GroundSet,
    /// The order of permutation 1.
    FirstPermutation,
    /// Explicit 1-based element order.
    Custom(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DecideConfig {
    pub order: ElementOrder,
    /// Maximum number of search nodes (color assignments); `None` is unbounded.
    pub node_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// A coloring with discrepancy at most `t`.
    Feasible(Coloring),
    /// The search completed without finding one: discrepancy exceeds `t`.
    Infeasible,
    /// The budget ran out first; nothing is claimed.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecideResult {
    pub threshold: u32,
    pub decision: Decision,
    pub nodes: u64,
}

pub fn decide_disc_at_most(f: impl AsRef<PermutationTriple>, t: u32, cfg: &DecideConfig) -> Result<DecideResult> {
    decide_disc_at_most_with(f, t, cfg, |_| false)
}

/// Like [`decide_disc_at_most`], polling `interrupt(nodes)` every few
/// thousand nodes; returning `true` ends the search as indeterminate.
pub fn decide_disc_at_most_with(
    f: impl AsRef<PermutationTriple>,
    t: u32,
    cfg: &DecideConfig,
    mut interrupt: impl FnMut(u64) -> bool,
) -> Result<DecideResult> {
    let tr = f.as_ref();
    if t == 0 {
        return Err(Error::ZeroThreshold);
    }
    let n = tr.n();
    let order: Vec<usize> = match &cfg.order {
        ElementOrder::GroundSet => (0..n).collect(),
        ElementOrder::FirstPermutation => tr.order0(0).iter().map(|&e| e as usize).collect(),
        ElementOrder::Custom(o) => {
            let mut seen = vec![false; n];
            for &e in o {
                let slot = (e as usize).checked_sub(1).and_then(|i| seen.get_mut(i));
                match slot {
                    Some(s) if !*s => *s = true,
                    _ => return Err(Error::BadElementOrder),
                }
            }
            if o.len() != n {
                return Err(Error::BadElementOrder);
            }
            o.iter().map(|&e| e as usize - 1).collect()
        }
    };
    let t = t as i32;
    let done = |decision, nodes| {
        Ok(DecideResult {
            threshold: t as u32,
            decision,
            nodes,
        })
    };
    if n == 0 {
        return done(Decision::Feasible(Coloring::new(Vec::new())?), 0);
    }

    let mut by_pos: [Vec<i8>; 3] = [vec![0; n], vec![0; n], vec![0; n]];
    let mut colors = vec![0i8; n];
    // sign currently tried at each depth, 0 when none
    let mut tried = vec![0i8; n];
    let mut depth = 0usize;
    let mut nodes = 0u64;
    loop {
        if depth == n {
            let c = Coloring::new(colors).expect("complete assignment");
            return done(Decision::Feasible(c), nodes);
        }
        let e = order[depth];
        let next = match tried[depth] {
            0 => 1,
            // negation symmetry: the first element stays +1
            1 if depth > 0 => -1,
            _ => {
                tried[depth] = 0;
                colors[e] = 0;
                for (i, row) in by_pos.iter_mut().enumerate() {
                    row[tr.pos0(i)[e] as usize] = 0;
                }
                if depth == 0 {
                    return done(Decision::Infeasible, nodes);
                }
                depth -= 1;
                continue;
            }
        };
        tried[depth] = next;
        colors[e] = next;
        for (i, row) in by_pos.iter_mut().enumerate() {
            row[tr.pos0(i)[e] as usize] = next;
        }
        nodes += 1;
        if cfg.node_budget.is_some_and(|b| nodes > b) || (nodes & 0xfff == 0 && interrupt(nodes)) {
            return done(Decision::Indeterminate, nodes);
        }
        if by_pos.iter().all(|row| band_reachable(row, t)) {
            depth += 1;
        }
    }
}

/// Whether the ±1 walk with the given fixed steps (0 = free) can stay in
/// `[-t, t]` at every position.
fn band_reachable(steps: &[i8], t: i32) -> bool {
    let (mut lo, mut hi) = (0i32, 0i32);
    for (x, &s) in steps.iter().enumerate() {
        if s == 0 {
            lo -= 1;
            hi += 1;
        } else {
            lo += s as i32;
            hi += s as i32;
        }
        // band ends with the parity of x + 1
        let odd = (x as i32 + 1) & 1;
        let band = if (t & 1) == odd { t } else { t - 1 };
        lo = lo.max(-band);
        hi = hi.min(band);
        if lo > hi {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Independent uniform signs.
    Random,
    /// Elements in ground-set order, each given the sign that minimizes the
    /// largest absolute partial prefix sum so far; ties go to `+1`.
    GreedyBalance,
}

pub fn heuristic_coloring(f: impl AsRef<PermutationTriple>, strategy: Strategy, seed: u64) -> Coloring {
    let t = f.as_ref();
    let n = t.n();
    match strategy {
        Strategy::Random => Coloring::random(n, seed, 0),
        Strategy::GreedyBalance => {
            let mut partial: [Vec<i32>; 3] = [vec![0; n + 1], vec![0; n + 1], vec![0; n + 1]];
            let mut values = Vec::with_capacity(n);
            for e in 0..n {
                let score = |s: i32| -> i32 {
                    let mut worst = 0;
                    for (i, row) in partial.iter().enumerate() {
                        let p = t.pos0(i)[e] as usize + 1;
                        for &v in &row[1..p] {
                            worst = worst.max(v.abs());
                        }
                        for &v in &row[p..] {
                            worst = worst.max((v + s).abs());
                        }
                    }
                    worst
                };
                let s = if score(-1) < score(1) { -1 } else { 1 };
                for (i, row) in partial.iter_mut().enumerate() {
                    let p = t.pos0(i)[e] as usize + 1;
                    for v in &mut row[p..] {
                        *v += s;
                    }
                }
                values.push(s as i8);
            }
            Coloring::new(values).expect("±1 entries")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_family, Variant};
    use crate::metrics::prefix_system_discrepancy;
    use crate::theorem_bound;

    fn fam(k: u32) -> PermutationTriple {
        build_family(k, &Variant::canonical(k)).unwrap().into_triple()
    }

    /// Plain enumeration of all 2^n colorings with a recomputed profile.
    fn brute_min(t: &PermutationTriple) -> u32 {
        (0u64..1 << t.n())
            .map(|m| prefix_system_discrepancy(t, &Coloring::from_mask(t.n(), m)).unwrap().value)
            .min()
            .unwrap()
    }

    #[test]
    fn exhaustive_depth_one() {
        let r = exhaustive_min_disc(fam(1)).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.checked, 4);
        assert_eq!(prefix_system_discrepancy(fam(1), &r.witness).unwrap().value, 2);
    }

    #[test]
    fn exhaustive_matches_brute_force_depth_two() {
        let t = fam(2);
        let r = exhaustive_min_disc(&t).unwrap();
        assert_eq!(r.value, brute_min(&t));
        assert!(r.value >= theorem_bound(2));
        assert_eq!(prefix_system_discrepancy(&t, &r.witness).unwrap().value, r.value);
    }

    #[test]
    fn partitions_merge_to_the_same_answer() {
        let t = fam(2);
        let whole = exhaustive_min_disc(&t).unwrap();
        let merged = (0..8u64)
            .map(|p| exhaustive_min_disc_part(&t, p, 3).unwrap())
            .reduce(ExactResult::merge)
            .unwrap();
        assert_eq!(merged.value, whole.value);
        assert_eq!(merged.checked, 256);
    }

    #[test]
    fn exhaustive_refuses_large_inputs() {
        assert_eq!(
            exhaustive_min_disc(fam(4)).unwrap_err(),
            Error::TooLargeForExhaustive { n: 81, cap: 30 }
        );
    }

    #[test]
    fn decide_depth_one() {
        let cfg = DecideConfig::default();
        assert_eq!(decide_disc_at_most(fam(1), 1, &cfg).unwrap().decision, Decision::Infeasible);
        match decide_disc_at_most(fam(1), 2, &cfg).unwrap().decision {
            Decision::Feasible(c) => assert!(prefix_system_discrepancy(fam(1), &c).unwrap().value <= 2),
            other => panic!("expected feasible, got {other:?}"),
        }
        assert_eq!(decide_disc_at_most(fam(1), 0, &cfg), Err(Error::ZeroThreshold));
    }

    #[test]
    fn decide_depth_three_t1_infeasible() {
        let r = decide_disc_at_most(fam(3), 1, &DecideConfig::default()).unwrap();
        assert_eq!(r.decision, Decision::Infeasible);
    }

    #[test]
    fn decide_budget_is_indeterminate() {
        let cfg = DecideConfig {
            node_budget: Some(10),
            ..Default::default()
        };
        let r = decide_disc_at_most(fam(4), 2, &cfg).unwrap();
        assert_eq!(r.decision, Decision::Indeterminate);
    }

    #[test]
    fn decide_custom_order_checked() {
        let cfg = DecideConfig {
            order: ElementOrder::Custom(vec![1, 1, 2]),
            ..Default::default()
        };
        assert_eq!(decide_disc_at_most(fam(1), 2, &cfg), Err(Error::BadElementOrder));
        let cfg = DecideConfig {
            order: ElementOrder::Custom(vec![3, 1, 2]),
            ..Default::default()
        };
        assert!(matches!(
            decide_disc_at_most(fam(1), 2, &cfg).unwrap().decision,
            Decision::Feasible(_)
        ));
    }

    #[test]
    fn band_walk() {
        assert!(band_reachable(&[1, -1, 1], 1));
        assert!(!band_reachable(&[1, 1, 0], 1));
        assert!(band_reachable(&[0, 0, 0, 0], 1));
        assert!(band_reachable(&[0, 1, 1], 1));
        assert!(!band_reachable(&[0, 1, 1, 1], 1));
    }

    #[test]
    fn greedy_depth_one() {
        let c = heuristic_coloring(fam(1), Strategy::GreedyBalance, 0);
        assert_eq!(c.values(), &[1, -1, 1]);
        assert!(prefix_system_discrepancy(fam(1), &c).unwrap().value <= 2);
    }

    #[test]
    fn random_heuristic_is_seeded() {
        let t = fam(3);
        assert_eq!(
            heuristic_coloring(&t, Strategy::Random, 11),
            heuristic_coloring(&t, Strategy::Random, 11)
        );
    }
}
