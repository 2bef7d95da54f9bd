//! User kernel for `s = 0, t = ∞`.
//!
//! Rule 1 deletes users with `N(u) ∩ P = ∅`. Rule 2 takes `X ⊆ P`,
//! `Y ⊆ U` with `N(Y) ∩ P ⊆ X` and a `d`-expansion of `X` into `Y`, and
//! deletes `X` from `P` (and `R`) and `Y` from `U`. Rule 1 then Rule 2 are
//! repeated while `|U| ≥ d·|P|`, leaving at most `d·p` users. If `P` runs
//! empty the instance is satisfied by `d` empty teams; the last Rule 1 pass
//! then removes every remaining user and the loop stops.
//!
//! Every step is recorded by external id in a [`KernelTrace`], from which
//! the kernel can be rebuilt ([`replay`]) and teams of the kernel can be
//! turned back into teams of the original instance ([`lift_teams`]).

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bits::ResourceSet;
use crate::error::{Error, Result};
use crate::general::{solve, Strategy};
use crate::policy::{Answer, BlockerSet, Budgets, Instance, Stats, TeamSet, UserId, Verdict};

/// A `d`-expansion of `X` into `Y` together with the closure `N(Y) ⊆ X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionWitness {
    pub x: ResourceSet,
    /// Ascending.
    pub y: Vec<UserId>,
    /// `(resource, user)` pairs, grouped by resource in ascending order.
    pub m: Vec<(usize, UserId)>,
}

impl ExpansionWitness {
    /// Checks the witness against `inst` for multiplicity `d`.
    pub fn check(&self, inst: &Instance, d: usize) -> Result<()> {
        let p = inst.policy().resources;
        if self.x.is_empty() {
            return Err(Error::InvalidWitness("X is empty".into()));
        }
        if !self.x.is_subset(p) {
            return Err(Error::InvalidWitness("X is not contained in P".into()));
        }
        let y: HashSet<UserId> = self.y.iter().copied().collect();
        if y.len() != self.y.len() || self.y.iter().any(|&u| u >= inst.n()) {
            return Err(Error::InvalidWitness(
                "Y has repeated or unknown users".into(),
            ));
        }
        if !(inst.neighborhood(&self.y) & p).is_subset(self.x) {
            return Err(Error::InvalidWitness("N(Y) is not contained in X".into()));
        }
        let mut per_resource: BTreeMap<usize, usize> = BTreeMap::new();
        let mut endpoints = HashSet::new();
        for &(r, u) in &self.m {
            if !self.x.contains(r) || !y.contains(&u) || !inst.user_resources(u).contains(r) {
                return Err(Error::InvalidWitness(format!(
                    "pair ({r}, {u}) is not an edge of X × Y"
                )));
            }
            if !endpoints.insert(u) {
                return Err(Error::InvalidWitness(format!("user {u} is matched twice")));
            }
            *per_resource.entry(r).or_default() += 1;
        }
        if self.x.iter().any(|r| per_resource.get(&r) != Some(&d)) {
            return Err(Error::InvalidWitness(format!(
                "some resource of X is not matched exactly {d} times"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum KernelStep {
    Rule1 {
        users: Vec<String>,
    },
    Rule2 {
        resources: Vec<String>,
        users: Vec<String>,
        /// `(resource, user)` expansion pairs.
        matching: Vec<(String, String)>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelTrace {
    pub steps: Vec<KernelStep>,
    /// Set when Rule 2 deleted the last resource of `P`.
    pub policy_emptied: bool,
}

impl KernelTrace {
    fn extend(&mut self, other: KernelTrace) {
        self.steps.extend(other.steps);
        self.policy_emptied |= other.policy_emptied;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub instance: Instance,
    pub trace: KernelTrace,
}

fn check_preconditions(inst: &Instance) -> Result<()> {
    let policy = inst.policy();
    if policy.s > 0 {
        return Err(Error::Precondition(
            "the kernel applies to s = 0 only".into(),
        ));
    }
    if !policy.t.is_unbounded_for(inst.p()) {
        return Err(Error::Precondition(format!(
            "the kernel needs t >= |P| (got t = {}, |P| = {}); with a binding team size no kernel with \
             polynomially many users in p + t exists unless coNP ⊆ NP/poly, so none is attempted",
            policy.t,
            inst.p()
        )));
    }
    Ok(())
}

/// Rule 1: deletes every user with `N(u) ∩ P = ∅`.
pub fn rule1_strip(inst: &Instance) -> Result<(Instance, KernelTrace)> {
    check_preconditions(inst)?;
    Ok(strip(inst))
}

fn strip(inst: &Instance) -> (Instance, KernelTrace) {
    let p = inst.policy().resources;
    let (keep, gone): (Vec<UserId>, Vec<UserId>) =
        (0..inst.n()).partition(|&u| inst.user_resources(u).intersects(p));
    let mut trace = KernelTrace::default();
    if gone.is_empty() {
        return (inst.clone(), trace);
    }
    trace.steps.push(KernelStep::Rule1 {
        users: gone
            .iter()
            .map(|&u| inst.user_label(u).to_string())
            .collect(),
    });
    (inst.restrict(&keep), trace)
}

/// Finds a `d`-expansion with `N(Y) ∩ P ⊆ X` among users with a nonempty
/// `N(u) ∩ P`, or `None` when there are fewer than `d·|P|` of them.
///
/// Resources are matched to users with capacity `d` each (a maximum flow
/// source → resource (cap `d`) → user (cap 1) → sink). If some user stays
/// unmatched, `X` and `Y` are the resources and users reachable from the
/// unmatched users along alternating paths: out of a user along a
/// non-matching edge, out of a resource along its matching edges. Every
/// reached resource is saturated (otherwise the flow would augment), and the
/// closure holds by construction. If every user is matched, `X = P`.
pub fn find_d_expansion(inst: &Instance, d: usize) -> Option<ExpansionWitness> {
    let p = inst.policy().resources;
    let users: Vec<UserId> = (0..inst.n())
        .filter(|&u| inst.user_resources(u).intersects(p))
        .collect();
    if d == 0 || p.is_empty() || users.len() < d * p.len() {
        return None;
    }
    let mut adj: Vec<Vec<UserId>> = vec![Vec::new(); inst.m()];
    for &u in &users {
        for r in (inst.user_resources(u) & p).iter() {
            adj[r].push(u);
        }
    }
    let mut owner: Vec<Option<usize>> = vec![None; inst.n()];
    for r in p.iter() {
        for _ in 0..d {
            let mut visited = vec![false; inst.n()];
            if !augment(r, &adj, &mut owner, &mut visited) {
                break;
            }
        }
    }

    let unmatched: Vec<UserId> = users
        .iter()
        .copied()
        .filter(|&u| owner[u].is_none())
        .collect();
    let (x, y) = if unmatched.is_empty() {
        (p, users.clone())
    } else {
        let mut x = ResourceSet::EMPTY;
        let mut reached = vec![false; inst.n()];
        let mut stack = unmatched;
        for &u in &stack {
            reached[u] = true;
        }
        while let Some(u) = stack.pop() {
            for r in (inst.user_resources(u) & p).iter() {
                if owner[u] == Some(r) || x.contains(r) {
                    continue;
                }
                x.insert(r);
                for &v in &adj[r] {
                    if owner[v] == Some(r) && !reached[v] {
                        reached[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        (x, (0..inst.n()).filter(|&u| reached[u]).collect())
    };
    let mut m: Vec<(usize, UserId)> = y
        .iter()
        .filter_map(|&u| owner[u].filter(|&r| x.contains(r)).map(|r| (r, u)))
        .collect();
    m.sort_unstable();
    let w = ExpansionWitness { x, y, m };
    w.check(inst, d).ok()?;
    Some(w)
}

fn augment(
    r: usize,
    adj: &[Vec<UserId>],
    owner: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &u in &adj[r] {
        if visited[u] {
            continue;
        }
        visited[u] = true;
        if owner[u].is_none_or(|q| augment(q, adj, owner, visited)) {
            owner[u] = Some(r);
            return true;
        }
    }
    false
}

/// Rule 2: deletes `X` from `P` and `R`, and `Y` from `U`.
pub fn rule2_apply(inst: &Instance, w: &ExpansionWitness) -> Result<(Instance, KernelTrace)> {
    check_preconditions(inst)?;
    w.check(inst, inst.policy().d)?;
    Ok(apply_rule2(inst, w))
}

fn apply_rule2(inst: &Instance, w: &ExpansionWitness) -> (Instance, KernelTrace) {
    let step = KernelStep::Rule2 {
        resources: w
            .x
            .iter()
            .map(|r| inst.resource_label(r).to_string())
            .collect(),
        users: w
            .y
            .iter()
            .map(|&u| inst.user_label(u).to_string())
            .collect(),
        matching: w
            .m
            .iter()
            .map(|&(r, u)| {
                (
                    inst.resource_label(r).to_string(),
                    inst.user_label(u).to_string(),
                )
            })
            .collect(),
    };
    let reduced = inst.restrict(&inst.complement(&w.y)).drop_resources(w.x);
    let trace = KernelTrace {
        policy_emptied: reduced.policy().resources.is_empty(),
        steps: vec![step],
    };
    (reduced, trace)
}

/// Reduces an `s = 0, t ≥ |P|` instance to at most `d·|P|` users.
///
/// The team bound is kept as given; it still dominates the smaller `P`.
pub fn kernelize(inst: &Instance) -> Result<Kernel> {
    check_preconditions(inst)?;
    let d = inst.policy().d;
    let (mut current, mut trace) = strip(inst);
    while !current.policy().resources.is_empty() && current.n() >= d * current.p() {
        let w = find_d_expansion(&current, d).ok_or_else(|| {
            Error::Internal("no d-expansion although |U| >= d|P| after Rule 1".into())
        })?;
        let (next, step) = apply_rule2(&current, &w);
        trace.extend(step);
        current = next;
        // With P empty, Rule 1 clears every user, so |U| ≤ d·|P| holds.
        let (next, step) = strip(&current);
        trace.extend(step);
        current = next;
    }
    Ok(Kernel {
        instance: current,
        trace,
    })
}

/// Rebuilds the kernel from the original instance and a trace.
pub fn replay(original: &Instance, trace: &KernelTrace) -> Result<Instance> {
    let mut current = original.clone();
    for step in &trace.steps {
        let (users, resources) = match step {
            KernelStep::Rule1 { users } => (users, &Vec::new()),
            KernelStep::Rule2 {
                users, resources, ..
            } => (users, resources),
        };
        let removed = users
            .iter()
            .map(|l| current.user_index(l).ok_or_else(|| unknown("user", l)))
            .collect::<Result<Vec<_>>>()?;
        let mut drop = ResourceSet::EMPTY;
        for l in resources {
            let r = current
                .resource_labels()
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| unknown("resource", l))?;
            drop.insert(r);
        }
        current = current
            .restrict(&current.complement(&removed))
            .drop_resources(drop);
    }
    Ok(current)
}

fn unknown(kind: &str, label: &str) -> Error {
    Error::InvalidWitness(format!("trace names unknown {kind} {label:?}"))
}

/// Turns teams of `kernel` (indices into it) into teams of `original`:
/// team `i` gains the `i`-th matched user of every resource deleted by
/// Rule 2.
pub fn lift_teams(
    original: &Instance,
    kernel: &Instance,
    trace: &KernelTrace,
    teams: &TeamSet,
) -> Result<TeamSet> {
    let index: HashMap<&str, UserId> = original
        .user_labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let lookup = |l: &str| index.get(l).copied().ok_or_else(|| unknown("user", l));
    let mut lifted: Vec<Vec<UserId>> = teams
        .teams
        .iter()
        .map(|t| t.iter().map(|&u| lookup(kernel.user_label(u))).collect())
        .collect::<Result<_>>()?;
    for step in &trace.steps {
        if let KernelStep::Rule2 { matching, .. } = step {
            let mut next_team: HashMap<&str, usize> = HashMap::new();
            for (r, u) in matching {
                let slot = next_team.entry(r.as_str()).or_default();
                let team = lifted.get_mut(*slot).ok_or_else(|| {
                    Error::InvalidWitness(format!("resource {r:?} is matched too often"))
                })?;
                team.push(lookup(u)?);
                *slot += 1;
            }
        }
    }
    Ok(TeamSet::new(lifted))
}

/// Decides an `s = 0, t ≥ |P|` instance by solving its kernel and lifting
/// the witness back. UNSAT verdicts carry the empty blocker.
pub fn solve_kernelized(inst: &Instance, strategy: Strategy, budgets: &Budgets) -> Result<Verdict> {
    let kernel = kernelize(inst)?;
    let (teams, mut stats) = if kernel.trace.policy_emptied {
        (
            TeamSet::new(vec![Vec::new(); inst.policy().d]),
            Stats::default(),
        )
    } else {
        let v = solve(&kernel.instance.normalize()?, strategy, budgets)?;
        match v.teams() {
            Some(teams) => (teams.clone(), v.stats),
            None if v.answer == Answer::Unsat => {
                let stats = Stats {
                    algorithm: format!("kernel/{}", v.stats.algorithm),
                    ..v.stats
                };
                return Ok(Verdict::unsat(BlockerSet::default(), stats));
            }
            None => {
                return Err(Error::Internal(
                    "s = 0 solver returned SAT without teams".into(),
                ))
            }
        }
    };
    stats.algorithm = if stats.algorithm.is_empty() {
        "kernel".into()
    } else {
        format!("kernel/{}", stats.algorithm)
    };
    let teams = lift_teams(inst, &kernel.instance, &kernel.trace, &teams)?;
    Ok(Verdict::sat(Some(teams), stats))
}
