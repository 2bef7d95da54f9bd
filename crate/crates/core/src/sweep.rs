//! Cross-checks of every solver against the brute-force oracle.
//!
//! The exhaustive grid enumerates every relation with `n ≤ max_n` users
//! over `m = p ≤ max_p` resources, for every `s ≤ max_s`, `d ≤ max_d` and
//! `t ∈ {1, …, max_t, ∞}`. The random part adds `seeds` instances drawn by
//! [`random_point`]. On each instance every applicable route is run and
//! checked for
//!
//! * the oracle's answer,
//! * a valid witness whenever one is emitted (UNSAT must carry one),
//! * `n·2^{dp}·(t+1)^d` DP states on direct DP runs,
//! * `Σ_{i≤s} (dt)^i` nodes on branching runs,
//! * `|U_C \ S| < d` for every class `U_C` meeting a minimal blocker `S`.
//!
//! Grid points may run in parallel; findings are reported in enumeration
//! order regardless.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::bits::ResourceSet;
use crate::error::{Error, Result};
use crate::general::{solve, Strategy};
use crate::generators::{random_instance, Expected};
use crate::io::{InstanceFile, ProvenanceBlock};
use crate::kernel::solve_kernelized;
use crate::oracle::Oracle;
use crate::policy::{
    verify_witness, Answer, BlockerSet, Budgets, Instance, Policy, TeamBound, Verdict,
};

/// A deliberate bug for exercising the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Every `dp` verdict has its answer flipped and its witness dropped.
    FlipDp,
}

impl Fault {
    pub fn apply(self, algorithm: &str, v: &mut Verdict) {
        match self {
            Fault::FlipDp if algorithm == "dp" => {
                v.answer = Answer::from_bool(!v.answer.is_sat());
                v.witness = None;
            }
            Fault::FlipDp => {}
        }
    }
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flip-dp" => Ok(Fault::FlipDp),
            _ => Err(Error::Parse(format!("unknown fault {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub max_n: usize,
    pub max_p: usize,
    pub max_s: usize,
    pub max_d: usize,
    /// Largest finite `t`; `∞` is always included.
    pub max_t: usize,
    /// Number of random instances.
    pub seeds: u64,
    pub random_max_n: usize,
    pub random_max_p: usize,
    pub budgets: Budgets,
    pub fault: Option<Fault>,
}

impl SweepConfig {
    /// Number of grid instances, or `None` on overflow.
    pub fn grid_size(&self) -> Option<u64> {
        let mut relations = 0u64;
        for p in 1..=self.max_p {
            let kinds = 1u64.checked_shl(p as u32)?;
            for n in 0..=self.max_n {
                relations = relations.checked_add(kinds.checked_pow(n as u32)?)?;
            }
        }
        let params = (self.max_s as u64 + 1)
            .checked_mul(self.max_d as u64)?
            .checked_mul(self.max_t as u64 + 1)?;
        relations.checked_mul(params)
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_n: 5,
            max_p: 3,
            max_s: 2,
            max_d: 2,
            max_t: 3,
            seeds: 1000,
            random_max_n: 10,
            random_max_p: 4,
            budgets: Budgets::default(),
            fault: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingKind {
    Disagreement,
    MissingWitness,
    InvalidWitness,
    SolverError,
    DpStateBound,
    BranchNodeBound,
    BlockerClaim,
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FindingKind::Disagreement => "disagreement",
            FindingKind::MissingWitness => "missing witness",
            FindingKind::InvalidWitness => "invalid witness",
            FindingKind::SolverError => "solver error",
            FindingKind::DpStateBound => "dp state bound",
            FindingKind::BranchNodeBound => "branch node bound",
            FindingKind::BlockerClaim => "minimal blocker class claim",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Finding {
    pub kind: FindingKind,
    /// The route under test, as accepted by `rescheck solve --algorithm`
    /// (`kernel` is `rescheck solve --kernelize`).
    pub algorithm: String,
    pub detail: String,
    /// The oracle's answer.
    pub expected: Answer,
    pub instance: Instance,
}

impl Finding {
    /// An instance file that reproduces the finding, with the oracle's
    /// answer as the expected one.
    pub fn reproducer(&self) -> String {
        let provenance = ProvenanceBlock {
            family: "sweep-reproducer".into(),
            expected: match self.expected {
                Answer::Sat => Expected::Sat,
                Answer::Unsat => Expected::Unsat,
            },
            seed: None,
            params: [
                ("algorithm".to_string(), json!(self.algorithm)),
                ("reference".to_string(), json!("oracle")),
                ("kind".to_string(), json!(self.kind.to_string())),
                ("detail".to_string(), json!(self.detail)),
            ]
            .into_iter()
            .collect(),
        };
        let mut text = serde_json::to_string_pretty(&InstanceFile::from_instance(
            &self.instance,
            Some(provenance),
        ))
        .expect("in-memory documents always serialize");
        text.push('\n');
        text
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepReport {
    pub grid_instances: u64,
    pub random_instances: u64,
    pub solver_runs: u64,
    pub witnesses_checked: u64,
    pub dp_runs: u64,
    pub branch_runs: u64,
    pub minimal_blockers: u64,
    pub findings: Vec<Finding>,
}

impl SweepReport {
    fn absorb(&mut self, other: SweepReport) {
        self.grid_instances += other.grid_instances;
        self.random_instances += other.random_instances;
        self.solver_runs += other.solver_runs;
        self.witnesses_checked += other.witnesses_checked;
        self.dp_runs += other.dp_runs;
        self.branch_runs += other.branch_runs;
        self.minimal_blockers += other.minimal_blockers;
        self.findings.extend(other.findings);
    }

    pub fn count(&self, kind: FindingKind) -> usize {
        self.findings.iter().filter(|f| f.kind == kind).count()
    }

    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "instances: {} grid + {} random\nsolver runs: {}\nwitnesses checked: {}\ndp runs checked against the state bound: {}\nbranch runs checked against the node bound: {}\nminimal blockers checked: {}\n",
            self.grid_instances,
            self.random_instances,
            self.solver_runs,
            self.witnesses_checked,
            self.dp_runs,
            self.branch_runs,
            self.minimal_blockers
        );
        let kinds: BTreeSet<FindingKind> = self.findings.iter().map(|f| f.kind).collect();
        if kinds.is_empty() {
            out.push_str("findings: none\n");
        }
        for kind in kinds {
            out.push_str(&format!("{kind}: {}\n", self.count(kind)));
        }
        out
    }
}

/// `Σ_{i=0}^{s} (dt)^i`, saturating.
pub fn branch_node_bound(s: usize, d: usize, t: usize) -> u64 {
    let base = (d * t) as u64;
    let mut term = 1u64;
    let mut total = 0u64;
    for _ in 0..=s {
        total = total.saturating_add(term);
        term = term.saturating_mul(base);
    }
    total
}

/// `n · 2^{dp} · (t+1)^d`, saturating.
pub fn dp_state_bound(n: usize, p: usize, d: usize, t: usize) -> u64 {
    let pow2 = 1u64.checked_shl((d * p) as u32).unwrap_or(u64::MAX);
    (n as u64)
        .saturating_mul(pow2)
        .saturating_mul(((t + 1) as u64).saturating_pow(d as u32))
}

/// Classes `U_C` with `U_C ∩ S ≠ ∅` and `|U_C \ S| ≥ d`; empty for a
/// minimal blocker.
pub fn claim_violations(inst: &Instance, blocker: &BlockerSet) -> Vec<ResourceSet> {
    let d = inst.policy().d;
    inst.class_partition()
        .iter()
        .filter(|(_, users)| {
            let inside = users.iter().filter(|u| blocker.users.contains(u)).count();
            inside > 0 && users.len() - inside >= d
        })
        .map(|(c, _)| c)
        .collect()
}

/// Every grid point's `(p, n, code)` where `code` lists the users'
/// neighborhoods in base `2^p`.
fn grid_relations(cfg: &SweepConfig) -> Vec<(usize, usize, u64)> {
    let mut out = Vec::new();
    for p in 1..=cfg.max_p {
        let kinds = 1u64 << p;
        for n in 0..=cfg.max_n {
            let count = kinds.checked_pow(n as u32).expect("grid too large");
            out.extend((0..count).map(|code| (p, n, code)));
        }
    }
    out
}

fn decode(p: usize, n: usize, mut code: u64) -> Vec<ResourceSet> {
    let kinds = 1u64 << p;
    (0..n)
        .map(|_| {
            let set = ResourceSet::from_bits(code % kinds);
            code /= kinds;
            set
        })
        .collect()
}

fn team_bounds(max_t: usize) -> Vec<TeamBound> {
    (1..=max_t)
        .map(TeamBound::Finite)
        .chain([TeamBound::Unbounded])
        .collect()
}

/// The `i`-th random instance: `n ≤ random_max_n`, `p ≤ random_max_p`,
/// `s ≤ max_s`, `d ≤ max_d + 1`, `t ∈ {1, …, p, ∞}`, density in
/// `[0.3, 0.9)`, all drawn from a ChaCha8 stream seeded with `i`.
pub fn random_point(cfg: &SweepConfig, i: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(i);
    let n = rng.gen_range(1..=cfg.random_max_n as u32) as usize;
    let p = rng.gen_range(1..=cfg.random_max_p as u32) as usize;
    let s = rng.gen_range(0..=cfg.max_s as u32) as usize;
    let d = rng.gen_range(1..=cfg.max_d as u32 + 1) as usize;
    let t = match rng.gen_range(0..=p as u32) {
        0 => TeamBound::Unbounded,
        t => TeamBound::Finite(t as usize),
    };
    let density = 0.3 + 0.6 * rng.gen::<f64>();
    random_instance(i, n, p, density, s, d, t)
        .expect("parameters are in range")
        .instance
}

/// Runs the grid and the random instances. Panics if the grid size
/// overflows `u64`; see [`SweepConfig::grid_size`].
pub fn run_sweep(cfg: &SweepConfig) -> SweepReport {
    let relations = grid_relations(cfg);
    let bounds = team_bounds(cfg.max_t);
    let grid: Vec<SweepReport> = relations
        .par_iter()
        .map(|&(p, n, code)| {
            let auth = decode(p, n, code);
            let mut report = SweepReport::default();
            for s in 0..=cfg.max_s {
                for d in 1..=cfg.max_d {
                    for &t in &bounds {
                        let policy = Policy {
                            resources: ResourceSet::full(p),
                            s,
                            d,
                            t,
                        };
                        let inst = Instance::new(p, auth.clone(), policy)
                            .expect("grid instances are valid");
                        report.grid_instances += 1;
                        check_instance(&inst, cfg, &mut report);
                    }
                }
            }
            report
        })
        .collect();
    let random: Vec<SweepReport> = (0..cfg.seeds)
        .into_par_iter()
        .map(|i| {
            let mut report = SweepReport {
                random_instances: 1,
                ..SweepReport::default()
            };
            check_instance(&random_point(cfg, i), cfg, &mut report);
            report
        })
        .collect();
    let mut total = SweepReport::default();
    for r in grid.into_iter().chain(random) {
        total.absorb(r);
    }
    total
}

/// Runs every applicable route on one instance; `inst` need not be
/// normalized.
pub fn check_instance(inst: &Instance, cfg: &SweepConfig, report: &mut SweepReport) {
    let norm = inst.normalize().expect("sweep instances have P nonempty");
    let oracle = match Oracle::unbounded().solve_rcp(&norm) {
        Ok(v) => v,
        Err(e) => {
            report.findings.push(Finding {
                kind: FindingKind::SolverError,
                algorithm: "oracle".into(),
                detail: e.to_string(),
                expected: Answer::Unsat,
                instance: inst.clone(),
            });
            return;
        }
    };
    let expected = oracle.answer;
    let policy = *norm.policy();
    let (n, p, t) = (norm.n(), norm.p(), norm.team_limit());
    let finding = |kind, algorithm: &str, detail: String| Finding {
        kind,
        algorithm: algorithm.into(),
        detail,
        expected,
        instance: inst.clone(),
    };

    let mut runs: Vec<(&str, Result<Verdict>)> = vec![("oracle", Ok(oracle.clone()))];
    for strategy in [
        Strategy::Dp,
        Strategy::Ilp,
        Strategy::SetCover,
        Strategy::Branch,
        Strategy::Reduced,
        Strategy::Fastpath,
        Strategy::Auto,
    ] {
        let applicable = match strategy {
            Strategy::SetCover => policy.s == 0 && policy.d == 1,
            Strategy::Fastpath => policy.d == 1 && policy.t.is_unbounded_for(p),
            _ => true,
        };
        if applicable {
            let mut result = solve(&norm, strategy, &cfg.budgets);
            if let (Some(fault), Ok(v)) = (cfg.fault, result.as_mut()) {
                fault.apply(strategy.name(), v);
            }
            runs.push((strategy.name(), result));
        }
    }
    if policy.s == 0 && inst.policy().t.is_unbounded_for(inst.p()) {
        runs.push((
            "kernel",
            solve_kernelized(inst, Strategy::Auto, &cfg.budgets),
        ));
    }

    let mut blockers: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (algorithm, result) in runs {
        report.solver_runs += 1;
        let v = match result {
            Ok(v) => v,
            Err(e) => {
                report
                    .findings
                    .push(finding(FindingKind::SolverError, algorithm, e.to_string()));
                continue;
            }
        };
        if v.answer != expected {
            report.findings.push(finding(
                FindingKind::Disagreement,
                algorithm,
                format!("{algorithm} says {}, oracle says {expected}", v.answer),
            ));
            continue;
        }
        match &v.witness {
            Some(_) => {
                report.witnesses_checked += 1;
                // Kernel witnesses refer to the original user indices, which
                // normalization keeps.
                if !verify_witness(&norm, &v) {
                    report.findings.push(finding(
                        FindingKind::InvalidWitness,
                        algorithm,
                        format!("{:?}", v.witness),
                    ));
                }
            }
            None if v.answer == Answer::Unsat => {
                report.findings.push(finding(
                    FindingKind::MissingWitness,
                    algorithm,
                    "UNSAT without a blocker".into(),
                ));
            }
            None => {}
        }
        if let Some(b) = v.blocker() {
            blockers.insert(b.users.clone());
        }
        if v.stats.algorithm == "dp" {
            report.dp_runs += 1;
            let bound = dp_state_bound(n, p, policy.d, t);
            if v.stats.states > bound {
                report.findings.push(finding(
                    FindingKind::DpStateBound,
                    algorithm,
                    format!("{} states > {bound}", v.stats.states),
                ));
            }
        }
        if v.stats.algorithm.starts_with("branch/") {
            report.branch_runs += 1;
            let bound = branch_node_bound(policy.s, policy.d, t);
            if v.stats.nodes > bound {
                report.findings.push(finding(
                    FindingKind::BranchNodeBound,
                    algorithm,
                    format!("{} nodes > {bound}", v.stats.nodes),
                ));
            }
        }
    }

    let oracle_ref = Oracle::unbounded();
    let mut minimal: BTreeSet<Vec<usize>> = BTreeSet::new();
    for b in blockers {
        match oracle_ref.shrink_blocker(&norm, &BlockerSet::new(b)) {
            Ok(m) => {
                minimal.insert(m.users);
            }
            Err(e) => {
                report
                    .findings
                    .push(finding(FindingKind::SolverError, "oracle", e.to_string()))
            }
        }
    }
    for m in minimal {
        report.minimal_blockers += 1;
        let bad = claim_violations(&norm, &BlockerSet::new(m.clone()));
        if !bad.is_empty() {
            report.findings.push(finding(
                FindingKind::BlockerClaim,
                "oracle",
                format!("blocker {m:?} leaves at least d users in classes {bad:?}"),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig {
            max_n: 3,
            max_p: 2,
            max_s: 1,
            max_d: 2,
            max_t: 2,
            seeds: 30,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn small_sweep_is_clean() {
        let report = run_sweep(&small());
        assert!(
            report.is_clean(),
            "{}\n{:?}",
            report.summary(),
            report.findings.first()
        );
        assert!(report.grid_instances > 0 && report.random_instances == 30);
        assert!(report.minimal_blockers > 0);
    }

    #[test]
    fn injected_fault_is_caught() {
        let cfg = SweepConfig {
            fault: Some(Fault::FlipDp),
            seeds: 0,
            ..small()
        };
        let report = run_sweep(&cfg);
        assert!(report.count(FindingKind::Disagreement) > 0);
        let f = &report.findings[0];
        assert_eq!(f.algorithm, "dp");
        let file = crate::io::parse_instance_file(&f.reproducer()).unwrap();
        assert_eq!(file.to_instance().unwrap(), f.instance);
    }

    #[test]
    fn bounds() {
        assert_eq!(branch_node_bound(0, 3, 3), 1);
        assert_eq!(branch_node_bound(2, 2, 3), 1 + 6 + 36);
        assert_eq!(dp_state_bound(5, 3, 2, 2), 5 * 64 * 9);
        assert_eq!(dp_state_bound(1, 64, 2, 2), u64::MAX);
        let cfg = SweepConfig::default();
        // 1 + 2 + 4 + … + 8^5 relations, times 3·2·4 policies.
        assert_eq!(cfg.grid_size(), Some(38_877 * 24));
        let small = SweepConfig {
            seeds: 0,
            ..small()
        };
        assert_eq!(small.grid_size(), Some(run_sweep(&small).grid_instances));
    }

    #[test]
    fn claim_check() {
        let inst = Instance::from_lists(1, &[&[0], &[0], &[0]], 1, 2, TeamBound::Finite(1))
            .unwrap()
            .normalize()
            .unwrap();
        assert_eq!(
            claim_violations(&inst, &BlockerSet::new(vec![0, 1])),
            vec![]
        );
        assert_eq!(
            claim_violations(&inst, &BlockerSet::new(vec![0])),
            vec![ResourceSet::singleton(0)]
        );
    }
}
