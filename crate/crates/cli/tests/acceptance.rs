//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use resilience::generators::{self, random_instance, GeneratedInstance};
use resilience::kernel::{kernelize, replay, solve_kernelized};
use resilience::oracle::Oracle;
use resilience::s0::dp_solve;
use resilience::sweep::{dp_state_bound, run_sweep, FindingKind, SweepConfig, SweepReport};
use resilience::{verify_witness, Answer, Budgets, Error, Instance, Strategy, TeamBound};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn params(i: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + i)
}

fn oracle_answer(inst: &Instance) -> (Answer, bool) {
    let norm = inst
        .normalize()
        .expect("generated instances have P nonempty");
    let v = Oracle::unbounded()
        .solve_rcp(&norm)
        .expect("oracle is exact and unbudgeted");
    let ok = v.witness.is_none() || verify_witness(&norm, &v);
    (v.answer, ok)
}

/// Oracle equivalence on the exhaustive grid and 1000 random instances.
fn criterion1(report: &SweepReport, elapsed: Duration) -> Outcome {
    let disagreements = report.count(FindingKind::Disagreement);
    let errors = report.count(FindingKind::SolverError);
    Outcome::new(
        disagreements == 0 && errors == 0 && report.random_instances == 1000 && elapsed < Duration::from_secs(600),
        format!(
            "{} grid + {} random instances, {} solver runs, {disagreements} disagreements, {errors} errors, {:.1}s",
            report.grid_instances,
            report.random_instances,
            report.solver_runs,
            elapsed.as_secs_f64()
        ),
    )
}

/// Reduction soundness, plus the number of oracle witnesses checked.
fn criterion2() -> (Outcome, u64, u64) {
    let mut families: Vec<(&str, Vec<GeneratedInstance>)> = Vec::new();
    families.push((
        "hitting-set",
        (0..200)
            .map(|i| {
                let mut r = params(i);
                let delta = 2 + (i % 2) as usize;
                let n = r.gen_range(delta..=6);
                let m = r.gen_range(1..=4);
                let k = r.gen_range(0..=3);
                generators::random_hitting_set(i, n, delta, m, k).unwrap()
            })
            .collect(),
    ));
    families.push((
        "3dm",
        (0..200)
            .map(|i| {
                let mut r = params(1000 + i);
                let n = r.gen_range(1..=3);
                let m = r.gen_range(1..=5);
                let k = r.gen_range(1..=3);
                generators::random_3dm(i, n, m, k).unwrap()
            })
            .collect(),
    ));
    families.push((
        "domatic",
        (0..100)
            .map(|i| {
                let mut r = params(2000 + i);
                let n = r.gen_range(1..=6);
                let density = r.gen_range(0.2..0.9);
                let k = r.gen_range(1..=3);
                generators::random_domatic(i, n, density, k).unwrap()
            })
            .collect(),
    ));
    families.push((
        "set-cover",
        (0..100)
            .map(|i| {
                let mut r = params(3000 + i);
                let universe = r.gen_range(1..=6);
                let m = r.gen_range(1..=6);
                let density = r.gen_range(0.2..0.7);
                let k = r.gen_range(1..=3);
                generators::random_set_cover(i, universe, m, density, k).unwrap()
            })
            .collect(),
    ));

    let mut pass = true;
    let mut parts = Vec::new();
    let (mut witnesses, mut bad_witnesses) = (0, 0);
    for (name, instances) in &families {
        let mut agree = 0;
        let mut sat = 0;
        for g in instances {
            let (answer, witness_ok) = oracle_answer(&g.instance);
            witnesses += 1;
            if !witness_ok {
                bad_witnesses += 1;
            }
            if Some(answer) == g.expected.answer() {
                agree += 1;
            }
            if answer == Answer::Sat {
                sat += 1;
            }
        }
        pass &= agree == instances.len();
        parts.push(format!("{name} {agree}/{} ({sat} SAT)", instances.len()));
    }
    (
        Outcome::new(pass, parts.join(", ")),
        witnesses,
        bad_witnesses,
    )
}

/// Kernel size bound, answer preservation and speed; returns the lifted
/// witness tallies too.
fn criterion3() -> (Outcome, u64, u64) {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let (mut shrunk, mut emptied) = (0, 0);
    let (mut witnesses, mut bad_witnesses) = (0, 0);
    for i in 0..500u64 {
        let mut r = params(4000 + i);
        let n = r.gen_range(1..=50);
        let p = r.gen_range(1..=4);
        let d = r.gen_range(1..=3);
        let density = r.gen_range(0.05..0.6);
        let inst = random_instance(i, n, p, density, 0, d, TeamBound::Unbounded)
            .unwrap()
            .instance;

        let start = Instant::now();
        let kernel = kernelize(&inst).unwrap();
        slowest = slowest.max(start.elapsed());

        let k = &kernel.instance;
        if k.n() > d * k.p() {
            failures.push(format!("seed {i}: {} users > d|P| = {}", k.n(), d * k.p()));
        }
        if replay(&inst, &kernel.trace).as_ref() != Ok(k) {
            failures.push(format!("seed {i}: trace replay differs"));
        }
        let before = oracle_answer(&inst).0;
        let after = match k.normalize() {
            Ok(norm) => Oracle::unbounded().solve_s0(&norm).unwrap().answer,
            Err(Error::EmptyPolicy) => Answer::Sat,
            Err(e) => panic!("{e}"),
        };
        if before != after {
            failures.push(format!(
                "seed {i}: oracle {before} on the input, {after} on the kernel"
            ));
        }
        shrunk += usize::from(k.n() < inst.n());
        emptied += usize::from(kernel.trace.policy_emptied);

        let v = solve_kernelized(&inst, Strategy::Auto, &Budgets::default()).unwrap();
        witnesses += 1;
        if v.answer != before || !verify_witness(&inst, &v) {
            bad_witnesses += 1;
            failures.push(format!("seed {i}: lifted verdict fails"));
        }
    }
    let slow_ok = slowest < Duration::from_secs(1);
    let detail = format!(
        "500 instances, {shrunk} reduced, {emptied} with P emptied, slowest kernelization {:.2}ms, {} failures{}",
        slowest.as_secs_f64() * 1e3,
        failures.len(),
        failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
    );
    (
        Outcome::new(failures.is_empty() && slow_ok, detail),
        witnesses,
        bad_witnesses,
    )
}

/// Largest DP state count over a fixed family of instances at `(d, p, t)`.
fn max_states(n: usize, d: usize, p: usize, t: usize, density: f64) -> (u64, bool) {
    let mut worst = 0;
    let mut within = true;
    for seed in 0..30 {
        let inst = random_instance(seed, n, p, density, 0, d, TeamBound::Finite(t))
            .unwrap()
            .instance
            .normalize()
            .unwrap();
        let v = dp_solve(&inst, &Budgets::default()).unwrap();
        within &= v.stats.states <= dp_state_bound(n, p, d, t);
        worst = worst.max(v.stats.states);
    }
    (worst, within)
}

/// `(d, p)` before and after doubling, and the finite `t`.
type Doubling = ((usize, usize), (usize, usize), usize);

/// DP state bound and the growth ratio when `dp` doubles at fixed `n`.
fn criterion4(report: &SweepReport) -> Outcome {
    let n = 12;
    let pairs: [Doubling; 9] = [
        ((1, 2), (1, 4), 1),
        ((1, 2), (2, 2), 1),
        ((2, 1), (2, 2), 1),
        ((2, 1), (4, 1), 1),
        ((1, 2), (1, 4), 2),
        ((1, 2), (2, 2), 2),
        ((1, 3), (1, 6), 2),
        ((1, 3), (2, 3), 2),
        ((2, 2), (2, 4), 2),
    ];
    let mut within = report.count(FindingKind::DpStateBound) == 0;
    let mut worst_slack = 0.0f64;
    let mut violations = Vec::new();
    for ((d, p), (d2, p2), t) in pairs {
        for density in [0.2, 0.35, 0.5, 0.8] {
            let (a, ok_a) = max_states(n, d, p, t, density);
            let (b, ok_b) = max_states(n, d2, p2, t, density);
            within &= ok_a && ok_b;
            // 2^{Δ(dp)}·(t+1)^{Δd}; equal to 4·(t+1)^{Δd} when dp goes 2 → 4.
            let bound =
                2f64.powi((d2 * p2 - d * p) as i32) * ((t + 1) as f64).powi(d2 as i32 - d as i32);
            let ratio = b as f64 / a.max(1) as f64;
            worst_slack = worst_slack.max(ratio / bound);
            if ratio > bound {
                violations.push(format!(
                    "({d},{p})→({d2},{p2}) t={t} density {density}: {ratio:.2} > {bound}"
                ));
            }
        }
    }
    Outcome::new(
        within && violations.is_empty(),
        format!(
            "{} sweep dp runs and 1080 scaling runs within n·2^(dp)·(t+1)^d: {within}; largest growth ratio is {:.0}% of its bound{}",
            report.dp_runs,
            worst_slack * 100.0,
            violations.first().map(|v| format!("; violation {v}")).unwrap_or_default()
        ),
    )
}

fn criterion5(report: &SweepReport) -> Outcome {
    let bad = report.count(FindingKind::BranchNodeBound);
    Outcome::new(
        bad == 0 && report.branch_runs > 0,
        format!("{} branching runs, {bad} above Σ(dt)^i", report.branch_runs),
    )
}

fn criterion6(report: &SweepReport) -> Outcome {
    let bad = report.count(FindingKind::BlockerClaim);
    Outcome::new(
        bad == 0 && report.minimal_blockers > 0,
        format!(
            "{} minimal blockers, {bad} counterexamples",
            report.minimal_blockers
        ),
    )
}

fn criterion7(report: &SweepReport, extra: u64, extra_bad: u64) -> Outcome {
    let bad = report.count(FindingKind::InvalidWitness) + report.count(FindingKind::MissingWitness);
    let total = report.witnesses_checked + extra;
    Outcome::new(
        bad == 0 && extra_bad == 0,
        format!("{total} witnesses checked (incl. {extra} from reductions and kernels), {} invalid or missing", bad as u64 + extra_bad),
    )
}

fn rescheck(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rescheck"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("rescheck runs")
}

/// Byte-identical `generate` and `solve` output across repeated runs.
fn criterion8() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 6] = [
        &[
            "generate", "random", "--seed", "42", "--n", "6", "--m", "3", "--s", "1", "--d", "2",
            "--t", "2",
        ],
        &[
            "generate",
            "random",
            "--seed",
            "7",
            "--n",
            "12",
            "--m",
            "4",
            "--density",
            "0.6",
        ],
        &[
            "generate",
            "hitting-set",
            "--seed",
            "3",
            "--n",
            "5",
            "--delta",
            "3",
            "--m",
            "3",
            "--k",
            "1",
        ],
        &[
            "generate", "3dm", "--seed", "9", "--n", "3", "--m", "4", "--k", "2",
        ],
        &["generate", "domatic", "--seed", "5", "--n", "6", "--k", "2"],
        &[
            "generate",
            "set-cover",
            "--seed",
            "11",
            "--n",
            "6",
            "--m",
            "5",
            "--k",
            "2",
        ],
    ];
    let mut mismatches = Vec::new();
    let mut solved = 0;
    for (i, args) in runs.iter().enumerate() {
        let files = [format!("a{i}.json"), format!("b{i}.json")];
        for f in &files {
            let mut full = args.to_vec();
            full.extend(["--out", f]);
            let out = rescheck(&full, dir.path());
            assert!(
                out.status.success(),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
        let a = std::fs::read(dir.path().join(&files[0])).unwrap();
        let b = std::fs::read(dir.path().join(&files[1])).unwrap();
        if a != b {
            mismatches.push(format!("generate {}", args[1]));
        }
        for alg in ["auto", "oracle", "branch", "reduced"] {
            let solve = [
                "solve",
                files[0].as_str(),
                "--algorithm",
                alg,
                "--witness",
                "--stats",
            ];
            let first = rescheck(&solve, dir.path());
            let second = rescheck(&solve, dir.path());
            if first.stdout != second.stdout || first.status.code() != second.status.code() {
                mismatches.push(format!("solve {} --algorithm {alg}", args[1]));
            }
            solved += 1;
        }
    }
    Outcome::new(
        mismatches.is_empty(),
        format!(
            "{} generate pairs and {solved} solve pairs compared, {} differ{}",
            runs.len(),
            mismatches.len(),
            mismatches
                .first()
                .map(|m| format!(" (first: {m})"))
                .unwrap_or_default()
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let report = run_sweep(&SweepConfig::default());
    let sweep_time = start.elapsed();

    let (c2, red_w, red_bad) = criterion2();
    let (c3, ker_w, ker_bad) = criterion3();
    let outcomes = [
        ("oracle equivalence sweep", criterion1(&report, sweep_time)),
        ("reduction soundness", c2),
        ("kernel guarantee", c3),
        ("dp state scaling", criterion4(&report)),
        ("branching node bound", criterion5(&report)),
        ("minimal blocker class claim", criterion6(&report)),
        (
            "witness integrity",
            criterion7(&report, red_w + ker_w, red_bad + ker_bad),
        ),
        ("determinism", criterion8()),
    ];
    let mut all = true;
    for (i, (name, o)) in outcomes.iter().enumerate() {
        all &= o.pass;
        println!(
            "criterion {} {}: {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if !report.is_clean() {
        println!("sweep findings:\n{}", report.summary());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
