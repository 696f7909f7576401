//! Timed, optionally parallel drivers around the core solvers.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use threeperm_core::solver::{decide_disc_at_most_with, exhaustive_min_disc_part, max_partition_bits, ExactResult};
use threeperm_core::{Coloring, Decision, DecideConfig, ElementOrder, PermutationTriple};

use crate::CliError;

/// Leading-sign bits used to split exhaustive searches. Fixed so results do
/// not depend on the worker count.
pub const PARTITION_BITS: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Exact,
    Decide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Budget {
    pub nodes: Option<u64>,
    pub time: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub mode: SolveMode,
    /// Exact mode: the minimum discrepancy. Decide mode: the threshold.
    pub value: u32,
    /// Decide mode only; `None` when the search was cut short.
    pub feasible: Option<bool>,
    pub witness: Option<Coloring>,
    pub nodes: u64,
    pub wall_time: Duration,
}

impl SolveOutcome {
    pub fn is_indeterminate(&self) -> bool {
        self.mode == SolveMode::Decide && self.feasible.is_none()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::json!({
            "schema_version": crate::SCHEMA_VERSION,
            "mode": self.mode,
            "witness": self.witness.as_ref().map(Coloring::to_sign_string),
            "nodes": self.nodes,
            "millis": self.wall_time.as_millis() as u64,
        });
        let map = obj.as_object_mut().expect("object");
        match self.mode {
            SolveMode::Exact => {
                map.insert("value".into(), self.value.into());
            }
            SolveMode::Decide => {
                map.insert("t".into(), self.value.into());
                map.insert("feasible".into(), self.feasible.into());
                map.insert("indeterminate".into(), self.is_indeterminate().into());
            }
        }
        obj
    }
}

pub(crate) fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
}

/// Exhaustive minimum over all colorings, split into `2^PARTITION_BITS`
/// parts (fewer for tiny ground sets) and merged in part order.
pub fn exact_parallel(triple: &PermutationTriple, workers: usize) -> Result<ExactResult, CliError> {
    let bits = PARTITION_BITS.min(max_partition_bits(triple.n()));
    let parts: Vec<ExactResult> = pool(workers).install(|| {
        (0..1u64 << bits)
            .into_par_iter()
            .map(|p| exhaustive_min_disc_part(triple, p, bits))
            .collect::<Result<_, _>>()
    })?;
    Ok(parts.into_iter().reduce(ExactResult::merge).expect("at least one part"))
}

pub fn solve_exact(triple: &PermutationTriple, workers: usize) -> Result<SolveOutcome, CliError> {
    let start = Instant::now();
    let r = exact_parallel(triple, workers)?;
    Ok(SolveOutcome {
        mode: SolveMode::Exact,
        value: r.value,
        feasible: None,
        witness: Some(r.witness),
        nodes: r.checked,
        wall_time: start.elapsed(),
    })
}

pub fn solve_decide(
    triple: &PermutationTriple,
    t: u32,
    order: ElementOrder,
    budget: Budget,
) -> Result<SolveOutcome, CliError> {
    let start = Instant::now();
    let cfg = DecideConfig {
        order,
        node_budget: budget.nodes,
    };
    let r = decide_disc_at_most_with(triple, t, &cfg, |_| budget.time.is_some_and(|lim| start.elapsed() > lim))?;
    let (feasible, witness) = match r.decision {
        Decision::Feasible(c) => (Some(true), Some(c)),
        Decision::Infeasible => (Some(false), None),
        Decision::Indeterminate => (None, None),
    };
    Ok(SolveOutcome {
        mode: SolveMode::Decide,
        value: t,
        feasible,
        witness,
        nodes: r.nodes,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use threeperm_core::{build_family, Variant};

    #[test]
    fn worker_count_does_not_change_the_answer() {
        let t = build_family(2, &Variant::canonical(2)).unwrap().into_triple();
        let one = exact_parallel(&t, 1).unwrap();
        let four = exact_parallel(&t, 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.checked, 256);
    }

    #[test]
    fn decide_json_shape() {
        let t = build_family(1, &Variant::canonical(1)).unwrap().into_triple();
        let out = solve_decide(&t, 1, ElementOrder::GroundSet, Budget::default()).unwrap();
        let j = out.to_json();
        assert_eq!(j["mode"], "decide");
        assert_eq!(j["t"], 1);
        assert_eq!(j["feasible"], false);
        assert_eq!(j["indeterminate"], false);
    }
}
