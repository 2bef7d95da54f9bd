//! `rescheck`: decide, kernelize, generate and cross-check resiliency
//! instances.
//!
//! Exit codes: 0 SAT (or success), 1 UNSAT (or a failed check), 2 usage or
//! input error, 3 budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use resilience::generators::{self, GeneratedInstance};
use resilience::io::{self, VerdictFields};
use resilience::kernel::{kernelize, solve_kernelized};
use resilience::sweep::{run_sweep, Fault, FindingKind, SweepConfig};
use resilience::{solve, verify_witness, Answer, Budgets, Error, Instance, Strategy, TeamBound};

#[derive(Parser, Debug)]
#[command(
    name = "rescheck",
    version,
    about = "Exact resiliency checking for access-control policies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide res(P, s, d, t) for an instance file and print a verdict document.
    Solve(SolveArgs),
    /// Reduce an s = 0, t = inf instance to at most d·|P| users.
    Kernelize(KernelizeArgs),
    /// Write an instance file from a reduction or at random.
    Generate(GenerateArgs),
    /// Cross-check every solver against the brute-force oracle.
    Sweep(SweepArgs),
    /// Check a verdict document against an instance.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct BudgetArgs {
    /// Largest d·p accepted by the team DP.
    #[arg(long, value_name = "BITS", default_value_t = Budgets::default().dp_bits)]
    dp_bits: u32,
    /// Largest 2^p accepted by the class-based routes.
    #[arg(long, value_name = "N", default_value_t = Budgets::default().max_classes)]
    max_classes: u64,
    /// Largest user count accepted by the brute-force oracle.
    #[arg(long, value_name = "N", default_value_t = Budgets::default().oracle_users)]
    oracle_users: usize,
    /// Largest number of configurations the ILP route may enumerate.
    #[arg(long, value_name = "N", default_value_t = Budgets::default().max_configurations)]
    max_configurations: u64,
    /// Largest number of class deletion vectors the reduced search may visit.
    #[arg(long, value_name = "N", default_value_t = Budgets::default().max_deletion_vectors)]
    max_deletion_vectors: u64,
}

impl From<BudgetArgs> for Budgets {
    fn from(b: BudgetArgs) -> Self {
        Budgets {
            dp_bits: b.dp_bits,
            max_classes: b.max_classes,
            oracle_users: b.oracle_users,
            max_configurations: b.max_configurations,
            max_deletion_vectors: b.max_deletion_vectors,
        }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Instance file.
    path: PathBuf,
    /// auto, oracle, dp, ilp, setcover, branch, reduced or fastpath.
    #[arg(long, short, default_value = "auto")]
    algorithm: Strategy,
    /// Include the witness (teams or blocker) in the verdict.
    #[arg(long)]
    witness: bool,
    /// Include node and state counts in the verdict; timing goes to stderr.
    #[arg(long)]
    stats: bool,
    /// Solve the kernel instead and lift its witness (s = 0, t = inf only).
    #[arg(long)]
    kernelize: bool,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[arg(long, hide = true)]
    inject_fault: Option<Fault>,
}

#[derive(Args, Debug)]
struct KernelizeArgs {
    /// Instance file.
    path: PathBuf,
    /// Where to write the kernel instance (default: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Where to write the reduction trace.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    HittingSet,
    #[value(name = "3dm")]
    ThreeDm,
    Domatic,
    SetCover,
    Random,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    family: Family,
    /// Elements (hitting-set, per axis for 3dm, universe for set-cover),
    /// vertices (domatic) or users (random).
    #[arg(long)]
    n: Option<usize>,
    /// Sets (hitting-set, set-cover), hyperedges (3dm) or resources (random).
    #[arg(long)]
    m: Option<usize>,
    /// Source-problem bound: hitting set size, matching size, number of
    /// dominating sets, or number of covering sets.
    #[arg(long)]
    k: Option<usize>,
    /// Set size for hitting-set.
    #[arg(long)]
    delta: Option<usize>,
    /// Edge or membership probability (domatic, set-cover, random).
    #[arg(long)]
    density: Option<f64>,
    /// Blocker budget for random.
    #[arg(long, default_value_t = 0)]
    s: usize,
    /// Number of teams for random.
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Team size bound for random: an integer or "inf".
    #[arg(long, default_value = "inf", value_parser = parse_team_bound)]
    t: TeamBound,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (default: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    max_p: usize,
    #[arg(long, default_value_t = 2)]
    max_s: usize,
    #[arg(long, default_value_t = 2)]
    max_d: usize,
    /// Largest finite t; inf is always included.
    #[arg(long, default_value_t = 3)]
    max_t: usize,
    /// Number of random instances (0 for the exhaustive grid only).
    #[arg(long, default_value_t = 1000)]
    seeds: u64,
    /// Largest grid accepted.
    #[arg(long, value_name = "N", default_value_t = 10_000_000)]
    max_grid: u64,
    /// Where to write the reproducer of the first finding.
    #[arg(long, default_value = "sweep-reproducer.json")]
    reproducer: PathBuf,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[arg(long, hide = true)]
    inject_fault: Option<Fault>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Instance file.
    instance: PathBuf,
    /// Verdict document, as written by `solve --witness`.
    verdict: PathBuf,
    #[command(flatten)]
    budgets: BudgetArgs,
}

fn parse_team_bound(s: &str) -> Result<TeamBound, String> {
    if s == "inf" {
        return Ok(TeamBound::Unbounded);
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer or \"inf\", got {s:?}")),
        Ok(t) => Ok(TeamBound::Finite(t)),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> anyhow::Result<Instance> {
    let text = read(path)?;
    io::parse_instance(&text).with_context(|| format!("{}", path.display()))
}

fn answer_code(answer: Answer) -> ExitCode {
    match answer {
        Answer::Sat => ExitCode::SUCCESS,
        Answer::Unsat => ExitCode::from(1),
    }
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<ExitCode> {
    let inst = load(&args.path)?;
    let budgets = Budgets::from(args.budgets);
    let start = Instant::now();
    let mut verdict = if args.kernelize {
        solve_kernelized(&inst, args.algorithm, &budgets)?
    } else {
        solve(&inst.normalize()?, args.algorithm, &budgets)?
    };
    let elapsed = start.elapsed();
    if let Some(fault) = args.inject_fault {
        fault.apply(args.algorithm.name(), &mut verdict);
    }
    let fields = VerdictFields {
        witness: args.witness,
        stats: args.stats,
    };
    print!("{}", io::emit_verdict_with(&inst, &verdict, fields));
    if args.stats {
        eprintln!("elapsed: {elapsed:?}");
    }
    Ok(answer_code(verdict.answer))
}

fn cmd_kernelize(args: KernelizeArgs) -> anyhow::Result<ExitCode> {
    let inst = load(&args.path)?;
    let kernel = kernelize(&inst)?;
    eprintln!("before: {} users, |P| = {}", inst.n(), inst.p());
    eprintln!(
        "after:  {} users, |P| = {}",
        kernel.instance.n(),
        kernel.instance.p()
    );
    if kernel.trace.policy_emptied {
        eprintln!(
            "P was emptied: the instance is satisfied by {} empty teams",
            inst.policy().d
        );
    }
    write_or_print(args.out.as_deref(), &io::emit_instance(&kernel.instance))?;
    if let Some(path) = &args.trace {
        write_or_print(Some(path), &io::emit_trace(&kernel.trace))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(args: GenerateArgs) -> anyhow::Result<ExitCode> {
    let seed = args.seed;
    let g: GeneratedInstance = match args.family {
        Family::HittingSet => generators::random_hitting_set(
            seed,
            args.n.unwrap_or(4),
            args.delta.unwrap_or(2),
            args.m.unwrap_or(3),
            args.k.unwrap_or(1),
        )?,
        Family::ThreeDm => generators::random_3dm(
            seed,
            args.n.unwrap_or(1),
            args.m.unwrap_or(1),
            args.k.unwrap_or(1),
        )?,
        Family::Domatic => generators::random_domatic(
            seed,
            args.n.unwrap_or(5),
            args.density.unwrap_or(0.5),
            args.k.unwrap_or(2),
        )?,
        Family::SetCover => generators::random_set_cover(
            seed,
            args.n.unwrap_or(6),
            args.m.unwrap_or(5),
            args.density.unwrap_or(0.4),
            args.k.unwrap_or(2),
        )?,
        Family::Random => {
            if args.d == 0 {
                bail!("--d must be at least 1");
            }
            generators::random_instance(
                seed,
                args.n.unwrap_or(6),
                args.m.unwrap_or(3),
                args.density.unwrap_or(0.5),
                args.s,
                args.d,
                args.t,
            )?
        }
    };
    write_or_print(args.out.as_deref(), &io::emit_generated(&g))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<ExitCode> {
    let cfg = SweepConfig {
        max_n: args.max_n,
        max_p: args.max_p,
        max_s: args.max_s,
        max_d: args.max_d,
        max_t: args.max_t,
        seeds: args.seeds,
        budgets: args.budgets.into(),
        fault: args.inject_fault,
        ..SweepConfig::default()
    };
    if cfg.max_d == 0 || cfg.max_t == 0 {
        bail!("--max-d and --max-t must be at least 1");
    }
    let size = cfg.grid_size().unwrap_or(u64::MAX);
    if size > args.max_grid {
        return Err(Error::BudgetExceeded {
            what: "sweep grid",
            needed: size,
            limit: args.max_grid,
        }
        .into());
    }
    let report = run_sweep(&cfg);
    print!("{}", report.summary());
    let Some(first) = report.findings.first() else {
        return Ok(ExitCode::SUCCESS);
    };
    for f in report.findings.iter().take(20) {
        println!("{} [{}]: {}", f.kind, f.algorithm, f.detail);
    }
    fs::write(&args.reproducer, first.reproducer())
        .with_context(|| format!("cannot write {}", args.reproducer.display()))?;
    let how = match first.algorithm.as_str() {
        "kernel" => "--kernelize".to_string(),
        alg => format!("--algorithm {alg}"),
    };
    println!(
        "reproducer: {} (compare `rescheck solve {0} --algorithm oracle` with `rescheck solve {0} {how}`)",
        args.reproducer.display()
    );
    if first.kind != FindingKind::Disagreement {
        println!(
            "first finding is a {}, not an answer disagreement",
            first.kind
        );
    }
    Ok(ExitCode::from(1))
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let inst = load(&args.instance)?;
    let norm = inst.normalize()?;
    let text = read(&args.verdict)?;
    let verdict =
        io::parse_verdict(&norm, &text).with_context(|| format!("{}", args.verdict.display()))?;
    let ok = if verdict.witness.is_some() {
        verify_witness(&norm, &verdict)
    } else {
        solve(&norm, Strategy::Auto, &args.budgets.into())?.answer == verdict.answer
    };
    if ok {
        println!("valid: {}", verdict.answer);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("invalid: the {} verdict does not check out", verdict.answer);
        Ok(ExitCode::from(1))
    }
}

fn is_budget(e: &anyhow::Error) -> bool {
    e.chain()
        .any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_budget))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Kernelize(a) => cmd_kernelize(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(if is_budget(&e) { 3 } else { 2 })
    })
}
