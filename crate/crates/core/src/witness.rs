//! Explicit cut triples certifying the inductive lower bounds.
//!
//! For a coloring `χ` of `[3^k]` with `Δ = |χ([3^k])|`, the builder returns
//! three cuts (one per permutation) whose summed prefix (side `L`) or suffix
//! (side `R`) values meet
//!
//! * `≥ k + Δ + 2` for sign `+` when `χ([3^k]) ≥ 1`, and `≥ k - 2Δ + 2` when
//!   `χ([3^k]) ≤ -1`;
//! * the negated bounds for sign `-`.
//!
//! The cuts are assembled level by level. At each level the three block sums
//! are sorted into `a ≥ b ≥ c`; depending on the block arrangement and on the
//! signs of `a, b, c`, one block is taken as the "diagonal" and the witness
//! for its induced coloring one level down is extended by the full blocks
//! that precede it (side `L`) or follow it (side `R`) in each permutation.
//! A total `≤ -1` is handled through the complement identity
//! `disc_L+(χ) = 3χ([n]) - disc_R-(χ)` and the negation `disc_R-(χ) = -disc_R+(-χ)`.
//! Depth `≤ 1` is solved by trying every cut triple.

use alloc::vec::Vec;
use core::fmt;

use crate::construction::{induced_subfamily, BlockLabel, PermutationFamily, PermutationTriple};
use crate::metrics::Coloring;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Prefixes.
    L,
    /// Suffixes.
    R,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(total: i32) -> Sign {
        if total >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Arrangement of the sorted block values across the three permutations.
///
/// `I`: rows are the cyclic shifts of `(a, b, c)`; `II`: the cyclic shifts
/// of `(a, c, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Configuration {
    I,
    II,
}

impl Configuration {
    fn mirrored(self) -> Configuration {
        match self {
            Configuration::I => Configuration::II,
            Configuration::II => Configuration::I,
        }
    }
}

/// Sign pattern of the sorted block values when their sum is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// `a ≥ b ≥ 1`.
    I,
    /// `a ≥ 1` and `c ≤ b ≤ -1`.
    II,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockClassification {
    pub a: i32,
    pub b: i32,
    pub c: i32,
    /// Blocks holding `a`, `b` and `c`, in that order.
    pub blocks: [BlockLabel; 3],
    pub configuration: Configuration,
    /// Only defined when `a + b + c ≥ 1`.
    pub case: Option<Case>,
}

impl BlockClassification {
    /// Classifies block sums given as `(χ(A), χ(B), χ(C))`. Equal sums keep
    /// block order `A < B < C`.
    pub fn from_sums(sums: [i32; 3]) -> Self {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&x, &y| sums[y].cmp(&sums[x]).then(x.cmp(&y)));
        let (a, b, c) = (sums[idx[0]], sums[idx[1]], sums[idx[2]]);
        // even assignments of (a, b, c) to (A, B, C) keep the cyclic pattern
        let configuration = if matches!(idx, [0, 1, 2] | [1, 2, 0] | [2, 0, 1]) {
            Configuration::I
        } else {
            Configuration::II
        };
        let case = (a + b + c >= 1).then_some(if b >= 1 { Case::I } else { Case::II });
        BlockClassification {
            a,
            b,
            c,
            blocks: idx.map(BlockLabel::from_index),
            configuration,
            case,
        }
    }
}

pub fn classify_blocks(f: &PermutationFamily, c: &Coloring) -> Result<BlockClassification> {
    if f.k() == 0 {
        return Err(Error::NoSublevel);
    }
    if c.len() != f.n() {
        return Err(Error::LengthMismatch {
            expected: f.n(),
            found: c.len(),
        });
    }
    Ok(BlockClassification::from_sums(block_sums(c.values(), 1)))
}

fn block_sums(chi: &[i8], flip: i32) -> [i32; 3] {
    let m = chi.len() / 3;
    [0, 1, 2].map(|d| flip * chi[d * m..(d + 1) * m].iter().map(|&v| v as i32).sum::<i32>())
}

/// Bound a `(side, sign)` witness must reach at depth `k` for total `total`.
/// The side does not enter.
pub fn guarantee(k: u32, total: i32, sign: Sign) -> i32 {
    let k = k as i32;
    let delta = total.abs();
    match (sign, total >= 1) {
        (Sign::Plus, true) => k + delta + 2,
        (Sign::Plus, false) => k - 2 * delta + 2,
        (Sign::Minus, false) => -k - delta - 2,
        (Sign::Minus, true) => -k + 2 * delta - 2,
    }
}

/// Three cuts and the value they certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WitnessTriple {
    pub side: Side,
    pub sign: Sign,
    /// Prefix lengths in `[0, n]` for `L`, suffix starts in `[1, n+1]` for `R`.
    pub cuts: [u32; 3],
    /// Prefix or suffix value at each cut.
    pub per_perm_values: [i32; 3],
    pub achieved: i32,
    pub guarantee: i32,
}

impl WitnessTriple {
    pub fn meets_guarantee(&self) -> bool {
        match self.sign {
            Sign::Plus => self.achieved >= self.guarantee,
            Sign::Minus => self.achieved <= self.guarantee,
        }
    }
}

/// A step of the level-by-level argument that did not go through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReplayFailure {
    /// Depth of the level where the step failed.
    pub depth: u32,
    pub what: &'static str,
}

/// Outcome of replaying the inductive argument alongside a witness build.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Replay {
    /// Inductive steps taken (levels of depth ≥ 2 visited).
    pub steps: u32,
    /// Case-(ii) steps, where the diagonal block has negative value.
    pub case_ii_steps: u32,
    pub first_failure: Option<ReplayFailure>,
}

impl Replay {
    fn check(&mut self, ok: bool, depth: u32, what: &'static str) {
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(ReplayFailure { depth, what });
        }
    }

    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

struct Level {
    depth: u32,
    /// `layout[i][j]`: element block in position block `j` of permutation `i`.
    layout: [[usize; 3]; 3],
    /// Kept for depth ≤ 1, solved by enumeration.
    base: Option<PermutationTriple>,
}

struct Partial {
    cuts: [u32; 3],
    values: [i32; 3],
}

impl Partial {
    fn sum(&self) -> i32 {
        self.values.iter().sum()
    }
}

/// Reusable witness construction for one family.
///
/// The sub-family chain is computed once; every level below the top is the
/// family induced on block `A`, which the construction makes identical to
/// the ones induced on `B` and `C`.
pub struct WitnessBuilder {
    k: u32,
    canonical: bool,
    levels: Vec<Level>,
}

impl WitnessBuilder {
    pub fn new(family: &PermutationFamily) -> Self {
        let mut levels = Vec::with_capacity(family.k() as usize + 1);
        let mut cur = family.clone();
        loop {
            let depth = cur.k();
            let n = cur.n();
            let mut layout = [[0usize; 3]; 3];
            if depth >= 1 {
                let m = n / 3;
                for (i, row) in layout.iter_mut().enumerate() {
                    for (j, slot) in row.iter_mut().enumerate() {
                        *slot = (cur.triple().element_at(i, j * m + 1) as usize - 1) / m;
                    }
                }
            }
            let base = (depth <= 1).then(|| cur.triple().clone());
            levels.push(Level { depth, layout, base });
            if depth <= 1 {
                break;
            }
            cur = induced_subfamily(&cur, BlockLabel::A).expect("depth ≥ 2");
        }
        WitnessBuilder {
            k: family.k(),
            canonical: family.variant().is_canonical(),
            levels,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Builds the witness.
    ///
    /// # Panics
    ///
    /// On the canonical family, if the witness misses its guarantee or any
    /// step of the inductive argument fails. Either would be a bug here.
    /// Shift variants return such outcomes instead; see [`Self::build_checked`].
    pub fn build(&self, c: &Coloring, side: Side, sign: Sign) -> Result<WitnessTriple> {
        let (w, replay) = self.build_checked(c, side, sign)?;
        if self.canonical {
            if let Some(fail) = replay.first_failure {
                panic!(
                    "inductive step failed at depth {}: {} (coloring {})",
                    fail.depth,
                    fail.what,
                    c.to_sign_string()
                );
            }
            assert!(
                w.meets_guarantee(),
                "witness {w:?} misses its guarantee for coloring {}",
                c.to_sign_string()
            );
        }
        Ok(w)
    }

    /// Builds the witness and reports the replay without panicking.
    pub fn build_checked(&self, c: &Coloring, side: Side, sign: Sign) -> Result<(WitnessTriple, Replay)> {
        let n = 3usize.pow(self.k);
        if c.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: c.len(),
            });
        }
        let mut replay = Replay::default();
        let flip = match sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        };
        let mut part = self.plus(0, c.values(), flip, side, &mut replay);
        if sign == Sign::Minus {
            part.values = part.values.map(|v| -v);
        }
        let achieved = part.sum();
        Ok((
            WitnessTriple {
                side,
                sign,
                cuts: part.cuts,
                per_perm_values: part.values,
                achieved,
                guarantee: guarantee(self.k, c.total(), sign),
            },
            replay,
        ))
    }

    /// Cuts for the `+` functional on `side` of the coloring `flip · chi`.
    fn plus(&self, t: usize, chi: &[i8], flip: i32, side: Side, replay: &mut Replay) -> Partial {
        let level = &self.levels[t];
        if let Some(base) = &level.base {
            return exhaustive_plus(base, chi, flip, side);
        }
        let total: i32 = flip * chi.iter().map(|&v| v as i32).sum::<i32>();
        if total <= -1 {
            // disc_side+(χ) = 3χ([n]) + disc_opposite+(-χ), cut y = x + 1
            let other = self.plus(t, chi, -flip, side.opposite(), replay);
            let shift: i32 = match side {
                Side::L => -1,
                Side::R => 1,
            };
            return Partial {
                cuts: other.cuts.map(|y| (y as i32 + shift) as u32),
                values: other.values.map(|v| total + v),
            };
        }
        self.lemma_step(t, chi, flip, side, total, replay)
    }

    fn lemma_step(&self, t: usize, chi: &[i8], flip: i32, side: Side, total: i32, replay: &mut Replay) -> Partial {
        let level = &self.levels[t];
        let depth = level.depth as i32;
        let m = chi.len() / 3;
        let sums = block_sums(chi, flip);
        let cls = BlockClassification::from_sums(sums);
        let (a, b, c) = (cls.a, cls.b, cls.c);
        let case = cls.case.expect("total ≥ 1");
        // suffixes see the arrangement reversed, which swaps I and II
        let config = match side {
            Side::L => cls.configuration,
            Side::R => cls.configuration.mirrored(),
        };
        let (diag, gain_formula) = match (case, config) {
            (Case::I, Configuration::I) => (1, 2 * a + c),
            (Case::I, Configuration::II) => (0, 2 * b + c),
            (Case::II, Configuration::I) => (1, 2 * a + c),
            (Case::II, Configuration::II) => (2, 2 * a + b),
        };
        replay.steps += 1;
        if case == Case::II {
            replay.case_ii_steps += 1;
            let (pair, other) = match config {
                Configuration::I => (a + b, c),
                Configuration::II => (a + c, b),
            };
            replay.check(pair >= 1 - other && 1 - other >= 2, level.depth, "case (ii) sum chain");
        }
        let block = cls.blocks[diag].index();
        let sub = self.plus(t + 1, &chi[block * m..(block + 1) * m], flip, side, replay);
        let sub_total = sums[block];
        let sub_bound = if sub_total >= 1 {
            depth - 1 + sub_total + 2
        } else {
            depth - 1 - 2 * sub_total.abs() + 2
        };
        replay.check(sub.sum() >= sub_bound, level.depth, "diagonal block below its bound");

        let mut out = Partial {
            cuts: [0; 3],
            values: [0; 3],
        };
        let mut gain = 0;
        for i in 0..3 {
            let row = level.layout[i];
            let j = row.iter().position(|&d| d == block).expect("block in every row");
            let outside: i32 = match side {
                Side::L => row[..j].iter().map(|&d| sums[d]).sum(),
                Side::R => row[j + 1..].iter().map(|&d| sums[d]).sum(),
            };
            gain += outside;
            out.cuts[i] = (j * m) as u32 + sub.cuts[i];
            out.values[i] = outside + sub.values[i];
        }
        replay.check(gain == gain_formula, level.depth, "triangle sum differs from block formula");
        replay.check(
            out.sum() >= depth + total + 2,
            level.depth,
            "level value below k + Δ + 2",
        );
        out
    }
}

/// Lexicographically first maximizing triple over all `(n+1)^3` cuts.
fn exhaustive_plus(t: &PermutationTriple, chi: &[i8], flip: i32, side: Side) -> Partial {
    let n = t.n();
    let value = |i: usize, cut: usize| -> i32 {
        let order = t.order0(i);
        let range = match side {
            Side::L => &order[..cut],
            Side::R => &order[cut - 1..],
        };
        flip * range.iter().map(|&e| chi[e as usize] as i32).sum::<i32>()
    };
    let cuts: Vec<usize> = match side {
        Side::L => (0..=n).collect(),
        Side::R => (1..=n + 1).collect(),
    };
    let mut best: Option<Partial> = None;
    for &x in &cuts {
        for &y in &cuts {
            for &z in &cuts {
                let cand = Partial {
                    cuts: [x as u32, y as u32, z as u32],
                    values: [value(0, x), value(1, y), value(2, z)],
                };
                if best.as_ref().is_none_or(|b| cand.sum() > b.sum()) {
                    best = Some(cand);
                }
            }
        }
    }
    best.expect("at least one cut triple")
}

pub fn build_witness(f: &PermutationFamily, c: &Coloring, side: Side, sign: Sign) -> Result<WitnessTriple> {
    WitnessBuilder::new(f).build(c, side, sign)
}

/// A single prefix whose value is large.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BadPrefix {
    /// 1-based permutation index.
    pub perm: usize,
    pub len: u32,
    pub value: i32,
}

impl WitnessBuilder {
    /// The prefix of largest absolute value among the cuts of the prefix
    /// witness whose sign matches `χ([n])`. Its absolute value is at least
    /// `⌈k/3⌉ + 1`.
    pub fn bad_prefix(&self, c: &Coloring) -> Result<BadPrefix> {
        let w = self.build(c, Side::L, Sign::of(c.total()))?;
        let mut best = 0;
        for i in 1..3 {
            if w.per_perm_values[i].abs() > w.per_perm_values[best].abs() {
                best = i;
            }
        }
        Ok(BadPrefix {
            perm: best + 1,
            len: w.cuts[best],
            value: w.per_perm_values[best],
        })
    }
}

pub fn extract_bad_prefix(f: &PermutationFamily, c: &Coloring) -> Result<BadPrefix> {
    WitnessBuilder::new(f).bad_prefix(c)
}
