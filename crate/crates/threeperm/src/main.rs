use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use threeperm_core::{
    build_family, disc_quadruple, interval_system_discrepancy, prefix_system_discrepancy, Coloring, ElementOrder,
    Extremum, PermutationFamily, PermutationTriple, Side, Sign, Variant, WitnessBuilder,
};

use threeperm::format::{family_to_json, family_to_text, read_coloring_arg, read_family_file};
use threeperm::report::{emit, write_output, OutputFormat};
use threeperm::solve::{solve_decide, solve_exact, Budget};
use threeperm::verify::{
    verify_corollary, verify_identity, verify_lemma2, verify_theorem, verify_variants, SweepConfig, SweepMode,
    TheoremMethod, DEFAULT_SEED,
};
use threeperm::{CliError, SCHEMA_VERSION};

/// Three permutations with large prefix discrepancy: construction, metrics,
/// witnesses, exact solvers and verification sweeps.
#[derive(Parser)]
#[command(name = "threeperm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the depth-k family.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = GenFormat::Text)]
        format: GenFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prefix/suffix functionals and discrepancies of one coloring.
    Metrics {
        #[command(flatten)]
        family: FamilyArgs,
        /// `+`/`-` string, `±1` integers, or a file holding either.
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimum discrepancy, or a complete search at threshold t.
    Solve {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Threshold for decide mode.
        #[arg(long)]
        t: Option<u32>,
        #[arg(long, value_enum, default_value_t = OrderArg::Ground)]
        order: OrderArg,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cuts certifying the functional bounds for one coloring.
    Witness {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        coloring: String,
        /// Restrict to one side; both when omitted.
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        /// Restrict to one sign; both when omitted.
        #[arg(long, value_enum)]
        sign: Option<SignArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a claim and report pass, violation or inconclusive.
    Verify {
        #[command(subcommand)]
        claim: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Prefix discrepancy of the depth-k family is at least ⌈k/3 + 1⌉.
    Theorem {
        #[command(flatten)]
        family: DepthArgs,
        #[arg(long, value_enum, default_value_t = TheoremMethod::Oracle)]
        method: TheoremMethod,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Matching-sign functional bounds.
    Lemma2(SweepArgs),
    /// Mismatched-sign bounds and the complement identities.
    Corollary(SweepArgs),
    /// Complement identities only.
    Identity(SweepArgs),
    /// Theorem and matching-sign bounds on every shift variant.
    Variants {
        #[arg(long)]
        k: u32,
        /// `lemma2` sweep mode; exhaustive for k ≤ 2 and sample above by default.
        #[arg(long, value_enum)]
        mode: Option<SweepMode>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// Depth; the ground set has 3^k elements.
    #[arg(long, conflicts_with = "family")]
    k: Option<u32>,
    /// Shift-direction word over {R, L}, top level first. All-R by default.
    #[arg(long, requires = "k")]
    variant: Option<String>,
    /// Permutation file (text or JSON) instead of a generated family.
    #[arg(long)]
    family: Option<PathBuf>,
}

#[derive(Args)]
struct DepthArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    variant: Option<String>,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    family: DepthArgs,
    #[arg(long, value_enum, default_value_t = SweepMode::Exhaustive)]
    mode: SweepMode,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Build and check witnesses for each coloring (default: sample mode, or n ≤ 9).
    #[arg(long)]
    witnesses: Option<bool>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BudgetArgs {
    /// Stop decide searches after this many nodes.
    #[arg(long)]
    node_budget: Option<u64>,
    /// Stop decide searches after this many seconds.
    #[arg(long)]
    time_budget: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget, CliError> {
        let time = match self.time_budget {
            Some(s) if !(s.is_finite() && s >= 0.0) => {
                return Err(CliError::Usage(format!("--time-budget must be a non-negative number, got {s}")))
            }
            s => s.map(Duration::from_secs_f64),
        };
        Ok(Budget {
            nodes: self.node_budget,
            time,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Decide,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    /// Elements 1, 2, …, n.
    Ground,
    /// The order of permutation 1.
    First,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    L,
    R,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

fn parse_variant(k: u32, word: Option<&str>) -> Result<Variant, CliError> {
    match word {
        None => Ok(Variant::canonical(k)),
        Some(w) => Ok(w.parse::<Variant>()?),
    }
}

fn depth_family(a: &DepthArgs) -> Result<PermutationFamily, CliError> {
    let v = parse_variant(a.k, a.variant.as_deref())?;
    Ok(build_family(a.k, &v)?)
}

enum Loaded {
    Family(PermutationFamily),
    File(PermutationTriple),
}

impl Loaded {
    fn triple(&self) -> &PermutationTriple {
        match self {
            Loaded::Family(f) => f.triple(),
            Loaded::File(t) => t,
        }
    }

    /// Families read from files are accepted when they are some depth-k
    /// variant.
    fn family(self) -> Result<PermutationFamily, CliError> {
        match self {
            Loaded::Family(f) => Ok(f),
            Loaded::File(t) => Ok(PermutationFamily::recognize(&t)?),
        }
    }
}

fn load(a: &FamilyArgs) -> Result<Loaded, CliError> {
    match (&a.family, a.k) {
        (Some(path), _) => Ok(Loaded::File(read_family_file(&path.display().to_string())?)),
        (None, Some(k)) => {
            let v = parse_variant(k, a.variant.as_deref())?;
            Ok(Loaded::Family(build_family(k, &v)?))
        }
        (None, None) => Err(CliError::Usage("give --k or --family".into())),
    }
}

fn coloring_for(triple: &PermutationTriple, arg: &str) -> Result<Coloring, CliError> {
    let c = read_coloring_arg(arg)?;
    if c.len() != triple.n() {
        return Err(threeperm_core::Error::LengthMismatch {
            expected: triple.n(),
            found: c.len(),
        }
        .into());
    }
    Ok(c)
}

fn extremum(e: Extremum) -> serde_json::Value {
    json!({ "value": e.value, "cuts": e.cuts })
}

fn print_json(v: &serde_json::Value, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    write_output(s.as_bytes(), out)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Gen { family, format, out } => {
            let loaded = load(&family)?;
            let text = match format {
                GenFormat::Text => family_to_text(loaded.triple()),
                GenFormat::Json => family_to_json(&loaded.family()?) + "\n",
            };
            write_output(text.as_bytes(), out.as_deref())?;
            Ok(0)
        }
        Command::Metrics { family, coloring, out } => {
            let loaded = load(&family)?;
            let t = loaded.triple();
            let c = coloring_for(t, &coloring)?;
            let q = disc_quadruple(t, &c)?;
            let pd = prefix_system_discrepancy(t, &c)?;
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "n": t.n(),
                "total": c.total(),
                "l_plus": extremum(q.l_plus),
                "l_minus": extremum(q.l_minus),
                "r_plus": extremum(q.r_plus),
                "r_minus": extremum(q.r_minus),
                "prefix_disc": { "value": pd.value, "perm": pd.perm, "len": pd.len },
                "interval_disc": interval_system_discrepancy(t, &c)?,
            });
            print_json(&v, out.as_deref())?;
            Ok(0)
        }
        Command::Solve {
            family,
            mode,
            t,
            order,
            budget,
            workers,
            out,
        } => {
            let loaded = load(&family)?;
            let triple = loaded.triple();
            let outcome = match mode {
                ModeArg::Exact => {
                    if t.is_some() {
                        return Err(CliError::Usage("--t applies to --mode decide".into()));
                    }
                    solve_exact(triple, workers)?
                }
                ModeArg::Decide => {
                    let t = t.ok_or_else(|| CliError::Usage("--mode decide needs --t".into()))?;
                    let order = match order {
                        OrderArg::Ground => ElementOrder::GroundSet,
                        OrderArg::First => ElementOrder::FirstPermutation,
                    };
                    solve_decide(triple, t, order, budget.budget()?)?
                }
            };
            print_json(&outcome.to_json(), out.as_deref())?;
            Ok(if outcome.is_indeterminate() { 3 } else { 0 })
        }
        Command::Witness {
            family,
            coloring,
            side,
            sign,
            out,
        } => {
            let f = load(&family)?.family()?;
            let c = coloring_for(f.triple(), &coloring)?;
            let builder = WitnessBuilder::new(&f);
            let sides = match side {
                Some(SideArg::L) => vec![Side::L],
                Some(SideArg::R) => vec![Side::R],
                None => vec![Side::L, Side::R],
            };
            let signs = match sign {
                Some(SignArg::Plus) => vec![Sign::Plus],
                Some(SignArg::Minus) => vec![Sign::Minus],
                None => vec![Sign::Plus, Sign::Minus],
            };
            let mut witnesses = Vec::new();
            let mut all_hold = true;
            for &sd in &sides {
                for &sg in &signs {
                    let (w, replay) = builder.build_checked(&c, sd, sg)?;
                    all_hold &= replay.holds() && w.meets_guarantee();
                    witnesses.push(json!({
                        "side": sd.to_string(),
                        "sign": sg.to_string(),
                        "cuts": w.cuts,
                        "per_perm_values": w.per_perm_values,
                        "achieved": w.achieved,
                        "guarantee": w.guarantee,
                        "meets_guarantee": w.meets_guarantee(),
                        "steps": replay.steps,
                        "case_ii_steps": replay.case_ii_steps,
                        "failure": replay.first_failure.map(|e| json!({ "depth": e.depth, "what": e.what })),
                    }));
                }
            }
            let bad = builder.bad_prefix(&c)?;
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "k": f.k(),
                "variant": f.variant().to_string(),
                "total": c.total(),
                "witnesses": witnesses,
                "bad_prefix": { "perm": bad.perm, "len": bad.len, "value": bad.value },
            });
            print_json(&v, out.as_deref())?;
            Ok(if all_hold { 0 } else { 1 })
        }
        Command::Verify { claim } => verify(claim),
    }
}

fn verify(claim: VerifyCommand) -> Result<i32, CliError> {
    let (report, common) = match claim {
        VerifyCommand::Theorem {
            family,
            method,
            budget,
            common,
        } => {
            let f = depth_family(&family)?;
            (verify_theorem(&f, method, budget.budget()?, common.workers)?, common)
        }
        VerifyCommand::Lemma2(a) => sweep(a, verify_lemma2)?,
        VerifyCommand::Corollary(a) => sweep(a, verify_corollary)?,
        VerifyCommand::Identity(a) => sweep(a, verify_identity)?,
        VerifyCommand::Variants {
            k,
            mode,
            samples,
            seed,
            budget,
            common,
        } => {
            let lemma = mode.map(|mode| SweepConfig {
                mode,
                samples,
                seed,
                workers: common.workers,
                witnesses: None,
            });
            (verify_variants(k, lemma, budget.budget()?, common.workers)?, common)
        }
    };
    emit(&report, common.format, common.out.as_deref())?;
    Ok(report.status.exit_code())
}

type SweepFn = fn(&PermutationFamily, &SweepConfig) -> Result<threeperm::verify::VerificationReport, CliError>;

fn sweep(a: SweepArgs, f: SweepFn) -> Result<(threeperm::verify::VerificationReport, CommonArgs), CliError> {
    let fam = depth_family(&a.family)?;
    let cfg = SweepConfig {
        mode: a.mode,
        samples: a.samples,
        seed: a.seed,
        workers: a.common.workers,
        witnesses: a.witnesses,
    };
    Ok((f(&fam, &cfg)?, a.common))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
