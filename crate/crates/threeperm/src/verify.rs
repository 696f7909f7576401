//! Verification sweeps over colorings of the constructed families.
//!
//! Exhaustive sweeps enumerate colorings with element 1 colored `+1`: every
//! checked statement is closed under negating the coloring, so this covers
//! all `2^n` colorings with half the work. The space is split into a fixed
//! number of parts by the colors of elements `2..`, each part is walked in
//! Gray code order with an incrementally updated profile, and part tallies
//! are merged in part order. Sample sweeps draw coloring `j` from stream `j`
//! of a seeded generator, so any range of samples can be produced
//! independently.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use threeperm_core::solver::gray_sweep;
use threeperm_core::{
    build_family, prefix_profile, theorem_bound, witness::guarantee, Coloring, DiscQuadruple, ElementOrder,
    PermutationFamily, PrefixProfile, Side, Sign, Variant, WitnessBuilder,
};

use crate::solve::{exact_parallel, pool, solve_decide, Budget};
use crate::{CliError, SCHEMA_VERSION};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Colorings recomputed from scratch during an exhaustive sweep.
pub const SPOT_CHECKS: u64 = 10_000;
/// Largest ground set swept exhaustively.
pub const EXHAUSTIVE_MAX_N: usize = 27;

const EXHAUSTIVE_PART_BITS: u32 = 6;
const SAMPLE_CHUNK: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    Theorem1,
    Lemma2,
    Corollary3,
    Identity,
    Variants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Exhaustive,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TheoremMethod {
    Oracle,
    Decide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Violation,
    Inconclusive,
    /// A violation of a statement that is only conjectured (shift variants).
    Finding,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Violation | Status::Finding => 1,
            Status::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationRecord {
    pub coloring: String,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariantOutcome {
    pub variant: String,
    pub theorem: Status,
    pub theorem_method: TheoremMethod,
    /// Exact minimum (oracle) or the refuted threshold plus one (decide).
    pub theorem_value: Option<u32>,
    pub lemma2: Status,
    pub lemma2_mode: SweepMode,
    pub lemma2_checked: u64,
    pub lemma2_violations: u64,
    pub millis: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub claim: Claim,
    pub k: u32,
    pub variant: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<SweepMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<TheoremMethod>,
    /// Symmetry used to shrink an exhaustive sweep.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<&'static str>,
    pub checked: u64,
    pub violations: u64,
    pub first_violation: Option<ViolationRecord>,
    pub spot_checks: u64,
    pub witness_checks: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    /// Set for shift variants, whose bounds are conjectured rather than proved.
    pub conjecture_level: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub per_variant: Vec<VariantOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    fn new(claim: Claim, f: &PermutationFamily) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            claim,
            k: f.k(),
            variant: f.variant().to_string(),
            status: Status::Pass,
            mode: None,
            method: None,
            reduction: None,
            checked: 0,
            violations: 0,
            first_violation: None,
            spot_checks: 0,
            witness_checks: 0,
            bound: None,
            value: None,
            nodes: None,
            conjecture_level: !f.variant().is_canonical(),
            per_variant: Vec::new(),
            seed: None,
            samples: None,
            wall_time_ms: 0,
        }
    }

    fn settle(&mut self) {
        if self.violations > 0 {
            self.status = if self.conjecture_level {
                Status::Finding
            } else {
                Status::Violation
            };
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Violation => "VIOLATION",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Finding => "FINDING (conjecture-level)",
        };
        let how = match (self.mode, self.method) {
            (Some(m), _) => format!("{m:?}").to_lowercase(),
            (None, Some(m)) => format!("{m:?}").to_lowercase(),
            _ => "per-variant".to_owned(),
        };
        let claim = serde_json::to_value(self.claim).expect("enum");
        let mut s = format!(
            "{} k={} variant={} {}: {} ({} checked, {} violations",
            claim.as_str().unwrap_or("?"),
            self.k,
            if self.variant.is_empty() { "-" } else { &self.variant },
            how,
            status,
            self.checked,
            self.violations
        );
        if let (Some(b), Some(v)) = (self.bound, self.value) {
            s += &format!(", bound {b}, value {v}");
        }
        if self.spot_checks > 0 {
            s += &format!(", {} spot checks", self.spot_checks);
        }
        if self.witness_checks > 0 {
            s += &format!(", {} witness checks", self.witness_checks);
        }
        s + &format!(") in {} ms", self.wall_time_ms)
    }
}

/// Sweep parameters shared by the `lemma2`, `corollary3` and `identity` checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub mode: SweepMode,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    /// Also build and check witnesses for every coloring. `None` means on for
    /// sample sweeps and for exhaustive sweeps with `n ≤ 9`.
    pub witnesses: Option<bool>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            mode: SweepMode::Exhaustive,
            samples: 10_000,
            seed: DEFAULT_SEED,
            workers: 1,
            witnesses: None,
        }
    }
}

#[derive(Debug, Default)]
struct Tally {
    checked: u64,
    violations: u64,
    first: Option<(String, String)>,
    spot_checks: u64,
    witness_checks: u64,
}

impl Tally {
    fn violation(&mut self, c: &Coloring, details: String) {
        self.violations += 1;
        let s = c.to_sign_string();
        if self.first.as_ref().is_none_or(|(old, _)| s < *old) {
            self.first = Some((s, details));
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.violations += other.violations;
        self.spot_checks += other.spot_checks;
        self.witness_checks += other.witness_checks;
        if let Some((s, d)) = other.first {
            if self.first.as_ref().is_none_or(|(old, _)| s < *old) {
                self.first = Some((s, d));
            }
        }
        self
    }

    fn into_report(self, r: &mut VerificationReport) {
        r.checked = self.checked;
        r.violations = self.violations;
        r.spot_checks = self.spot_checks;
        r.witness_checks = self.witness_checks;
        r.first_violation = self.first.map(|(coloring, details)| ViolationRecord { coloring, details });
        r.settle();
    }
}

/// The statement checked on the exact functional values
/// `[l_plus, l_minus, r_plus, r_minus]` of one coloring.
fn check_values(claim: Claim, k: u32, total: i32, v: [i32; 4]) -> Option<String> {
    let [lp, lm, rp, rm] = v;
    let k = k as i32;
    let delta = total.abs();
    if delta == 0 {
        return Some("coloring total is zero".into());
    }
    let identities = || {
        if rm + lp != 3 * total {
            Some(format!("r_minus + l_plus = {} != 3·total = {}", rm + lp, 3 * total))
        } else if rp + lm != 3 * total {
            Some(format!("r_plus + l_minus = {} != 3·total = {}", rp + lm, 3 * total))
        } else {
            None
        }
    };
    match claim {
        Claim::Lemma2 => {
            if total >= 1 {
                let g = k + delta + 2;
                (lp < g || rp < g).then(|| format!("l_plus={lp}, r_plus={rp} below k+Δ+2={g}"))
            } else {
                let g = -k - delta - 2;
                (lm > g || rm > g).then(|| format!("l_minus={lm}, r_minus={rm} above -k-Δ-2={g}"))
            }
        }
        Claim::Corollary3 => {
            let bounds = if total <= -1 {
                let g = k - 2 * delta + 2;
                (lp < g || rp < g).then(|| format!("l_plus={lp}, r_plus={rp} below k-2Δ+2={g}"))
            } else {
                let g = -k + 2 * delta - 2;
                (lm > g || rm > g).then(|| format!("l_minus={lm}, r_minus={rm} above -k+2Δ-2={g}"))
            };
            bounds.or_else(identities)
        }
        Claim::Identity => identities(),
        Claim::Theorem1 | Claim::Variants => None,
    }
}

/// `[l_plus, l_minus, r_plus, r_minus]` by scanning every permutation
/// forward for prefixes and backward for suffixes. Shares no code with the
/// profile-based computation, which derives suffixes from prefixes.
fn direct_values(orders: &[Vec<u32>; 3], colors: &[i8]) -> [i32; 4] {
    let mut out = [0i32; 4];
    for order in orders {
        let (mut s, mut hi, mut lo) = (0i32, 0i32, 0i32);
        for &e in order {
            s += colors[e as usize - 1] as i32;
            hi = hi.max(s);
            lo = lo.min(s);
        }
        out[0] += hi;
        out[1] += lo;
        let (mut s, mut hi, mut lo) = (0i32, 0i32, 0i32);
        for &e in order.iter().rev() {
            s += colors[e as usize - 1] as i32;
            hi = hi.max(s);
            lo = lo.min(s);
        }
        out[2] += hi;
        out[3] += lo;
    }
    out
}

const COMBOS: [(Side, Sign); 4] = [
    (Side::L, Sign::Plus),
    (Side::L, Sign::Minus),
    (Side::R, Sign::Plus),
    (Side::R, Sign::Minus),
];

/// Witness checks for one coloring: soundness against the profile, the
/// guarantee, the sandwich against the exact value, the replayed steps, and
/// the single large prefix.
fn check_witnesses(
    builder: &WitnessBuilder,
    c: &Coloring,
    p: &PrefixProfile,
    exact: [i32; 4],
) -> Option<String> {
    let k = builder.k();
    for (idx, (side, sign)) in COMBOS.into_iter().enumerate() {
        let (w, replay) = match builder.build_checked(c, side, sign) {
            Ok(x) => x,
            Err(e) => return Some(e.to_string()),
        };
        if let Some(fail) = replay.first_failure {
            return Some(format!("({side},{sign}) step failed at depth {}: {}", fail.depth, fail.what));
        }
        let recomputed: i32 = (0..3)
            .map(|i| match side {
                Side::L => p.prefix(i, w.cuts[i] as usize),
                Side::R => p.suffix(i, w.cuts[i] as usize),
            })
            .sum();
        if recomputed != w.achieved {
            return Some(format!("({side},{sign}) cuts {:?} evaluate to {recomputed}, witness says {}", w.cuts, w.achieved));
        }
        if w.guarantee != guarantee(k, c.total(), sign) || !w.meets_guarantee() {
            return Some(format!("({side},{sign}) achieved {} misses guarantee {}", w.achieved, w.guarantee));
        }
        // COMBOS follows the [l_plus, l_minus, r_plus, r_minus] order
        let ok = match sign {
            Sign::Plus => w.achieved <= exact[idx],
            Sign::Minus => w.achieved >= exact[idx],
        };
        if !ok {
            return Some(format!("({side},{sign}) achieved {} beyond exact {}", w.achieved, exact[idx]));
        }
    }
    let bad = match builder.bad_prefix(c) {
        Ok(b) => b,
        Err(e) => return Some(e.to_string()),
    };
    if p.prefix(bad.perm - 1, bad.len as usize) != bad.value || bad.value.unsigned_abs() < theorem_bound(k) {
        return Some(format!("bad prefix {bad:?} below {}", theorem_bound(k)));
    }
    None
}

fn exhaustive_sweep(claim: Claim, f: &PermutationFamily, cfg: &SweepConfig, witnesses: bool) -> Result<Tally, CliError> {
    let n = f.n();
    if n > EXHAUSTIVE_MAX_N {
        return Err(CliError::Usage(format!(
            "exhaustive sweeps need n ≤ {EXHAUSTIVE_MAX_N}, got n = {n}; use --mode sample"
        )));
    }
    if n % 2 == 0 {
        return Err(threeperm_core::Error::EvenGroundSet(n).into());
    }
    let bits = EXHAUSTIVE_PART_BITS.min(n as u32 - 1);
    let per_part = 1u64 << (n as u32 - 1 - bits);
    let total = 1u64 << (n - 1);
    let stride = (total / SPOT_CHECKS).max(1);
    let free: Vec<usize> = (1 + bits as usize..n).collect();
    let builder = witnesses.then(|| WitnessBuilder::new(f));
    let k = f.k();
    let orders = f.triple().one_lines();
    // the profile derives suffixes from prefixes, which makes the identities
    // hold by construction; scan suffixes directly when they are the claim
    let direct = matches!(claim, Claim::Corollary3 | Claim::Identity);
    let run_part = |part: u64| -> Result<Tally, CliError> {
        let mut tally = Tally::default();
        let start = Coloring::from_mask(n, part << 1);
        let mut local = 0u64;
        gray_sweep(f.triple(), &start, &free, |prof| {
            let values = if direct {
                direct_values(&orders, prof.colors())
            } else {
                prof.quadruple_values()
            };
            let index = part * per_part + local;
            local += 1;
            tally.checked += 1;
            let spot = index % stride == 0;
            let mut failure = check_values(claim, k, prof.total(), values);
            if spot || builder.is_some() {
                let c = prof.coloring();
                let p = prefix_profile(f, &c).expect("length matches");
                if spot {
                    tally.spot_checks += 1;
                    let fast = prof.quadruple_values();
                    let scanned = direct_values(&orders, c.values());
                    let slow = DiscQuadruple::from_profile(&p).values();
                    if fast != slow || scanned != slow {
                        failure.get_or_insert(format!(
                            "incremental {fast:?}, scanned {scanned:?}, recomputed {slow:?} disagree"
                        ));
                    }
                }
                if let Some(b) = &builder {
                    tally.witness_checks += 1;
                    if let Some(msg) = check_witnesses(b, &c, &p, values) {
                        failure.get_or_insert(msg);
                    }
                }
                if let Some(msg) = failure {
                    tally.violation(&c, msg);
                }
            } else if let Some(msg) = failure {
                tally.violation(&prof.coloring(), msg);
            }
            true
        })?;
        Ok(tally)
    };
    let tallies: Vec<Tally> = pool(cfg.workers).install(|| {
        (0..1u64 << bits).into_par_iter().map(run_part).collect::<Result<_, _>>()
    })?;
    Ok(tallies.into_iter().fold(Tally::default(), Tally::merge))
}

fn sample_sweep(claim: Claim, f: &PermutationFamily, cfg: &SweepConfig, witnesses: bool) -> Result<Tally, CliError> {
    let n = f.n();
    if n % 2 == 0 {
        return Err(threeperm_core::Error::EvenGroundSet(n).into());
    }
    let builder = witnesses.then(|| WitnessBuilder::new(f));
    let k = f.k();
    let orders = f.triple().one_lines();
    let chunks = cfg.samples.div_ceil(SAMPLE_CHUNK);
    let run_chunk = |chunk: u64| -> Tally {
        let mut tally = Tally::default();
        let end = ((chunk + 1) * SAMPLE_CHUNK).min(cfg.samples);
        for j in chunk * SAMPLE_CHUNK..end {
            let c = Coloring::random(n, cfg.seed, j);
            let p = prefix_profile(f, &c).expect("length matches");
            let values = direct_values(&orders, c.values());
            tally.checked += 1;
            let mut failure = check_values(claim, k, c.total(), values);
            let slow = DiscQuadruple::from_profile(&p).values();
            if slow != values {
                failure.get_or_insert(format!("scanned {values:?} != profile {slow:?}"));
            }
            if let Some(b) = &builder {
                tally.witness_checks += 1;
                if let Some(msg) = check_witnesses(b, &c, &p, values) {
                    failure.get_or_insert(msg);
                }
            }
            if let Some(msg) = failure {
                tally.violation(&c, msg);
            }
        }
        tally
    };
    let tallies: Vec<Tally> = pool(cfg.workers).install(|| (0..chunks).into_par_iter().map(run_chunk).collect());
    Ok(tallies.into_iter().fold(Tally::default(), Tally::merge))
}

fn sweep(claim: Claim, f: &PermutationFamily, cfg: &SweepConfig) -> Result<VerificationReport, CliError> {
    let start = Instant::now();
    let mut report = VerificationReport::new(claim, f);
    report.mode = Some(cfg.mode);
    let tally = match cfg.mode {
        SweepMode::Exhaustive => {
            report.reduction = Some("negation");
            let w = cfg.witnesses.unwrap_or(f.n() <= 9);
            exhaustive_sweep(claim, f, cfg, w)?
        }
        SweepMode::Sample => {
            report.seed = Some(cfg.seed);
            report.samples = Some(cfg.samples);
            let w = cfg.witnesses.unwrap_or(true);
            sample_sweep(claim, f, cfg, w)?
        }
    };
    tally.into_report(&mut report);
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Checks the matching-sign bounds `k + Δ + 2` / `-k - Δ - 2` on every
/// coloring of the sweep.
pub fn verify_lemma2(f: &PermutationFamily, cfg: &SweepConfig) -> Result<VerificationReport, CliError> {
    sweep(Claim::Lemma2, f, cfg)
}

/// Checks the mismatched-sign bounds `k - 2Δ + 2` / `-k + 2Δ - 2` and the two
/// complement identities.
pub fn verify_corollary(f: &PermutationFamily, cfg: &SweepConfig) -> Result<VerificationReport, CliError> {
    sweep(Claim::Corollary3, f, cfg)
}

/// Checks `r_minus + l_plus = r_plus + l_minus = 3χ([n])` only.
pub fn verify_identity(f: &PermutationFamily, cfg: &SweepConfig) -> Result<VerificationReport, CliError> {
    sweep(Claim::Identity, f, cfg)
}

/// Certifies `disc ≥ ⌈k/3 + 1⌉` by exact minimization (`Oracle`) or by
/// refuting discrepancy `⌈k/3 + 1⌉ - 1` with complete search (`Decide`).
/// At `k = 0` the threshold would be 0, so the oracle is used.
pub fn verify_theorem(
    f: &PermutationFamily,
    method: TheoremMethod,
    budget: Budget,
    workers: usize,
) -> Result<VerificationReport, CliError> {
    let start = Instant::now();
    let bound = theorem_bound(f.k());
    let method = if bound <= 1 { TheoremMethod::Oracle } else { method };
    let mut report = VerificationReport::new(Claim::Theorem1, f);
    report.method = Some(method);
    report.bound = Some(bound);
    match method {
        TheoremMethod::Oracle => {
            let r = exact_parallel(f.triple(), workers)?;
            report.checked = r.checked;
            report.value = Some(r.value);
            if r.value < bound {
                report.violations = 1;
                report.first_violation = Some(ViolationRecord {
                    coloring: r.witness.to_sign_string(),
                    details: format!("discrepancy {} below bound {bound}", r.value),
                });
            }
            report.reduction = Some("negation");
        }
        TheoremMethod::Decide => {
            let out = solve_decide(f.triple(), bound - 1, ElementOrder::GroundSet, budget)?;
            report.nodes = Some(out.nodes);
            report.checked = 1;
            match out.feasible {
                Some(false) => report.value = Some(bound),
                Some(true) => {
                    report.violations = 1;
                    let c = out.witness.expect("feasible outcome carries a coloring");
                    report.first_violation = Some(ViolationRecord {
                        coloring: c.to_sign_string(),
                        details: format!("coloring with discrepancy ≤ {}", bound - 1),
                    });
                }
                None => report.status = Status::Inconclusive,
            }
        }
    }
    report.settle();
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Runs the `theorem1` check and the `lemma2` sweep on all `2^k` shift variants.
///
/// The theorem is checked by the oracle for `k ≤ 2` and by decide mode
/// above. `lemma` sets the `lemma2` sweep; its mode defaults to exhaustive for
/// `k ≤ 2` and sampling above.
pub fn verify_variants(
    k: u32,
    lemma: Option<SweepConfig>,
    budget: Budget,
    workers: usize,
) -> Result<VerificationReport, CliError> {
    let start = Instant::now();
    let canonical = build_family(k, &Variant::canonical(k))?;
    let mut report = VerificationReport::new(Claim::Variants, &canonical);
    report.variant = String::new();
    report.conjecture_level = true;
    report.bound = Some(theorem_bound(k));
    let lemma = lemma.unwrap_or_else(|| SweepConfig {
        mode: if k <= 2 { SweepMode::Exhaustive } else { SweepMode::Sample },
        workers,
        ..SweepConfig::default()
    });
    let method = if k <= 2 { TheoremMethod::Oracle } else { TheoremMethod::Decide };
    let mut inconclusive = false;
    for v in Variant::all(k) {
        let vstart = Instant::now();
        let f = build_family(k, &v)?;
        let th = verify_theorem(&f, method, budget, workers)?;
        let lm = verify_lemma2(&f, &lemma)?;
        report.checked += 1;
        if !th.passed() || !lm.passed() {
            if th.status == Status::Inconclusive {
                inconclusive = true;
            } else {
                report.violations += 1;
                if report.first_violation.is_none() {
                    report.first_violation = th.first_violation.clone().or(lm.first_violation.clone()).map(|mut r| {
                        r.details = format!("variant {v}: {}", r.details);
                        r
                    });
                }
            }
        }
        report.per_variant.push(VariantOutcome {
            variant: v.to_string(),
            theorem: th.status,
            theorem_method: th.method.unwrap_or(method),
            theorem_value: th.value,
            lemma2: lm.status,
            lemma2_mode: lemma.mode,
            lemma2_checked: lm.checked,
            lemma2_violations: lm.violations,
            millis: vstart.elapsed().as_millis() as u64,
        });
    }
    report.settle();
    if report.status == Status::Pass && inconclusive {
        report.status = Status::Inconclusive;
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
