//! Authorization policies, resiliency queries and their witnesses.
//!
//! An [`Instance`] bundles a relation `UR ⊆ U × R` (stored as one
//! [`ResourceSet`] per user) with a resiliency query `res(P, s, d, t)`.
//! Users and resources are dense indices; their external string ids ride
//! along as labels so that restrictions and normalizations keep track of
//! who is who.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::time::Duration;

use crate::bits::{ResourceSet, MAX_RESOURCES};
use crate::error::{Error, Result};

pub type UserId = usize;

/// Upper bound `t` on team size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TeamBound {
    Finite(usize),
    Unbounded,
}

impl TeamBound {
    /// The effective bound once `|P| = p` is known: `min(t, p)`.
    pub fn limit(self, p: usize) -> usize {
        match self {
            TeamBound::Finite(t) => t.min(p),
            TeamBound::Unbounded => p,
        }
    }

    /// True if the bound never binds for a policy with `p` resources.
    pub fn is_unbounded_for(self, p: usize) -> bool {
        match self {
            TeamBound::Finite(t) => t >= p,
            TeamBound::Unbounded => true,
        }
    }
}

impl fmt::Display for TeamBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TeamBound::Finite(t) => write!(f, "{t}"),
            TeamBound::Unbounded => f.write_str("inf"),
        }
    }
}

/// The resiliency query `res(P, s, d, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Policy {
    pub resources: ResourceSet,
    pub s: usize,
    pub d: usize,
    pub t: TeamBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    users: Vec<String>,
    resources: Vec<String>,
    auth: Vec<ResourceSet>,
    policy: Policy,
}

impl Instance {
    /// Builds an instance with generated labels `u1..un` and `r1..rm`.
    pub fn new(m: usize, auth: Vec<ResourceSet>, policy: Policy) -> Result<Self> {
        let users = (1..=auth.len()).map(|i| format!("u{i}")).collect();
        let resources = (1..=m).map(|i| format!("r{i}")).collect();
        Self::with_labels(users, resources, auth, policy)
    }

    pub fn with_labels(
        users: Vec<String>,
        resources: Vec<String>,
        auth: Vec<ResourceSet>,
        policy: Policy,
    ) -> Result<Self> {
        let inst = Instance {
            users,
            resources,
            auth,
            policy,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Test and example helper: users given as lists of resource indices,
    /// `P = R`.
    pub fn from_lists(
        m: usize,
        lists: &[&[usize]],
        s: usize,
        d: usize,
        t: TeamBound,
    ) -> Result<Self> {
        if m > MAX_RESOURCES {
            return Err(Error::InvalidInstance(format!(
                "{m} resources exceed the limit of {MAX_RESOURCES}"
            )));
        }
        let auth = lists
            .iter()
            .map(|l| ResourceSet::from_indices(l.iter().copied()))
            .collect();
        let policy = Policy {
            resources: ResourceSet::full(m),
            s,
            d,
            t,
        };
        Self::new(m, auth, policy)
    }

    fn validate(&self) -> Result<()> {
        let m = self.resources.len();
        if m > MAX_RESOURCES {
            return Err(Error::InvalidInstance(format!(
                "{m} resources exceed the limit of {MAX_RESOURCES}"
            )));
        }
        if self.users.len() != self.auth.len() {
            return Err(Error::InvalidInstance(
                "user labels and relation disagree in length".into(),
            ));
        }
        let universe = ResourceSet::full(m);
        for (u, set) in self.auth.iter().enumerate() {
            if !set.is_subset(universe) {
                return Err(Error::InvalidInstance(format!(
                    "user {} references a resource index >= {m}",
                    self.users[u]
                )));
            }
        }
        if !self.policy.resources.is_subset(universe) {
            return Err(Error::InvalidInstance(format!(
                "P references a resource index >= {m}"
            )));
        }
        if self.policy.d == 0 {
            return Err(Error::InvalidInstance("d must be at least 1".into()));
        }
        if self.policy.t == TeamBound::Finite(0) {
            return Err(Error::InvalidInstance("t must be at least 1".into()));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = self.users.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(Error::InvalidInstance(format!("duplicate user id {dup:?}")));
        }
        seen.clear();
        if let Some(dup) = self.resources.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(Error::InvalidInstance(format!(
                "duplicate resource id {dup:?}"
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.auth.len()
    }

    pub fn m(&self) -> usize {
        self.resources.len()
    }

    /// `p = |P|`.
    pub fn p(&self) -> usize {
        self.policy.resources.len()
    }

    pub fn policy(&self) -> &Policy {
        &self.policy
    }

    pub fn auth(&self) -> &[ResourceSet] {
        &self.auth
    }

    /// `N(u)` over the whole resource set.
    pub fn user_resources(&self, u: UserId) -> ResourceSet {
        self.auth[u]
    }

    pub fn user_label(&self, u: UserId) -> &str {
        &self.users[u]
    }

    pub fn user_labels(&self) -> &[String] {
        &self.users
    }

    pub fn resource_label(&self, r: usize) -> &str {
        &self.resources[r]
    }

    pub fn resource_labels(&self) -> &[String] {
        &self.resources
    }

    pub fn user_index(&self, label: &str) -> Option<UserId> {
        self.users.iter().position(|u| u == label)
    }

    /// The effective team-size bound `min(t, p)`.
    pub fn team_limit(&self) -> usize {
        self.policy.t.limit(self.p())
    }

    /// `N(V) = ⋃_{u ∈ V} N(u)`.
    pub fn neighborhood(&self, users: &[UserId]) -> ResourceSet {
        users
            .iter()
            .fold(ResourceSet::EMPTY, |acc, &u| acc | self.auth[u])
    }

    pub fn covers(&self, users: &[UserId]) -> bool {
        self.policy.resources.is_subset(self.neighborhood(users))
    }

    pub fn with_policy(&self, policy: Policy) -> Result<Self> {
        let inst = Instance {
            policy,
            ..self.clone()
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_s(&self, s: usize) -> Self {
        let mut inst = self.clone();
        inst.policy.s = s;
        inst
    }

    pub fn with_d(&self, d: usize) -> Result<Self> {
        self.with_policy(Policy { d, ..self.policy })
    }

    pub fn with_t(&self, t: TeamBound) -> Result<Self> {
        self.with_policy(Policy { t, ..self.policy })
    }

    /// `UR|_{U'}`. New user `i` is `keep[i]` of `self` after sorting and
    /// deduplicating `keep`; labels are carried over.
    pub fn restrict(&self, keep: &[UserId]) -> Self {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        Instance {
            users: keep.iter().map(|&u| self.users[u].clone()).collect(),
            resources: self.resources.clone(),
            auth: keep.iter().map(|&u| self.auth[u]).collect(),
            policy: self.policy,
        }
    }

    /// Users of `self` not in `removed`, ascending.
    pub fn complement(&self, removed: &[UserId]) -> Vec<UserId> {
        let removed: HashSet<UserId> = removed.iter().copied().collect();
        (0..self.n()).filter(|u| !removed.contains(u)).collect()
    }

    /// Removes the resources in `drop` from `R` and `P` and re-indexes the
    /// survivors. User indices are unchanged.
    pub fn drop_resources(&self, drop: ResourceSet) -> Self {
        let keep = ResourceSet::full(self.m()) - drop;
        Instance {
            users: self.users.clone(),
            resources: keep.iter().map(|r| self.resources[r].clone()).collect(),
            auth: self.auth.iter().map(|a| a.compress(keep)).collect(),
            policy: Policy {
                resources: self.policy.resources.compress(keep),
                ..self.policy
            },
        }
    }

    /// Clamps `t` to `|P|` and drops every resource outside `P`, so that
    /// afterwards `P = R` and `t ≤ p`.
    pub fn normalize(&self) -> Result<Self> {
        if self.policy.resources.is_empty() {
            return Err(Error::EmptyPolicy);
        }
        let mut inst = self.drop_resources(!self.policy.resources & ResourceSet::full(self.m()));
        inst.policy.t = TeamBound::Finite(self.team_limit());
        Ok(inst)
    }

    pub fn is_normalized(&self) -> bool {
        self.m() >= 1
            && self.policy.resources == ResourceSet::full(self.m())
            && matches!(self.policy.t, TeamBound::Finite(t) if t <= self.m())
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized)
        }
    }

    /// Groups users by `N(u) ∩ P`.
    pub fn class_partition(&self) -> ClassPartition {
        let mut classes: BTreeMap<ResourceSet, Vec<UserId>> = BTreeMap::new();
        for (u, &set) in self.auth.iter().enumerate() {
            classes
                .entry(set & self.policy.resources)
                .or_default()
                .push(u);
        }
        ClassPartition { classes }
    }
}

/// Users grouped into neighborhood classes `U_C`, keyed in bitset order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClassPartition {
    classes: BTreeMap<ResourceSet, Vec<UserId>>,
}

impl ClassPartition {
    pub fn class(&self, c: ResourceSet) -> &[UserId] {
        self.classes.get(&c).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn class_size(&self, c: ResourceSet) -> usize {
        self.class(c).len()
    }

    /// Nonempty classes in bitset order.
    pub fn iter(&self) -> impl Iterator<Item = (ResourceSet, &[UserId])> {
        self.classes.iter().map(|(&c, us)| (c, us.as_slice()))
    }

    /// Number of nonempty classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn total_users(&self) -> usize {
        self.classes.values().map(Vec::len).sum()
    }
}

/// `d` pairwise-disjoint teams; the witness of a satisfiable `s = 0` query.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TeamSet {
    pub teams: Vec<Vec<UserId>>,
}

impl TeamSet {
    pub fn new(mut teams: Vec<Vec<UserId>>) -> Self {
        for team in &mut teams {
            team.sort_unstable();
        }
        TeamSet { teams }
    }

    /// `𝒰(V)`, ascending.
    pub fn members(&self) -> Vec<UserId> {
        let mut all: Vec<UserId> = self.teams.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    pub fn map_users(&self, f: impl Fn(UserId) -> UserId) -> Self {
        TeamSet::new(
            self.teams
                .iter()
                .map(|t| t.iter().map(|&u| f(u)).collect())
                .collect(),
        )
    }
}

/// A user set whose removal leaves no set of teams.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BlockerSet {
    pub users: Vec<UserId>,
}

impl BlockerSet {
    pub fn new(mut users: Vec<UserId>) -> Self {
        users.sort_unstable();
        users.dedup();
        BlockerSet { users }
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Sat,
    Unsat,
}

impl Answer {
    pub fn from_bool(sat: bool) -> Self {
        if sat {
            Answer::Sat
        } else {
            Answer::Unsat
        }
    }

    pub fn is_sat(self) -> bool {
        self == Answer::Sat
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Sat => "SAT",
            Answer::Unsat => "UNSAT",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Teams(TeamSet),
    Blocker(BlockerSet),
}

/// Solver bookkeeping. `nodes` counts search nodes (branching calls,
/// deletion vectors, oracle subsets); `states` counts DP states.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub algorithm: String,
    pub nodes: u64,
    pub states: u64,
    pub elapsed: Duration,
}

impl Stats {
    pub fn named(algorithm: impl Into<String>) -> Self {
        Stats {
            algorithm: algorithm.into(),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub witness: Option<Witness>,
    pub stats: Stats,
}

impl Verdict {
    pub fn sat(teams: Option<TeamSet>, stats: Stats) -> Self {
        Verdict {
            answer: Answer::Sat,
            witness: teams.map(Witness::Teams),
            stats,
        }
    }

    pub fn unsat(blocker: BlockerSet, stats: Stats) -> Self {
        Verdict {
            answer: Answer::Unsat,
            witness: Some(Witness::Blocker(blocker)),
            stats,
        }
    }

    pub fn teams(&self) -> Option<&TeamSet> {
        match &self.witness {
            Some(Witness::Teams(t)) => Some(t),
            _ => None,
        }
    }

    pub fn blocker(&self) -> Option<&BlockerSet> {
        match &self.witness {
            Some(Witness::Blocker(b)) => Some(b),
            _ => None,
        }
    }
}

/// Resource limits for the exponential procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    /// Maximum `d·p` accepted by the team DP.
    pub dp_bits: u32,
    /// Maximum `2^p` accepted by class-based algorithms.
    pub max_classes: u64,
    /// Maximum user count accepted by the brute-force oracle.
    pub oracle_users: usize,
    /// Maximum number of configurations the ILP route may enumerate.
    pub max_configurations: u64,
    /// Maximum number of class deletion vectors the reduced search may visit.
    pub max_deletion_vectors: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            dp_bits: 24,
            max_classes: 4096,
            oracle_users: 20,
            max_configurations: 1 << 20,
            max_deletion_vectors: 1 << 24,
        }
    }
}

/// Checks a verdict's witness against `inst`.
///
/// Team witnesses are checked directly against the team conditions. A
/// blocker witness is accepted when it has at most `s` users and an exact
/// `s = 0` decision on `UR|_{U \ S}` says UNSAT.
pub fn verify_witness(inst: &Instance, verdict: &Verdict) -> bool {
    let norm = if inst.is_normalized() {
        inst.clone()
    } else {
        match inst.normalize() {
            Ok(n) => n,
            Err(_) => return false,
        }
    };
    match (verdict.answer, &verdict.witness) {
        (Answer::Sat, Some(Witness::Teams(teams))) => is_team_set(&norm, teams),
        (Answer::Unsat, Some(Witness::Blocker(blocker))) => is_blocker(&norm, blocker),
        _ => false,
    }
}

/// Conditions (size, coverage, disjointness, count) of a set of teams.
pub fn is_team_set(inst: &Instance, teams: &TeamSet) -> bool {
    if teams.teams.len() != inst.policy().d {
        return false;
    }
    let t = inst.team_limit();
    let mut used = HashSet::new();
    teams.teams.iter().all(|team| {
        team.len() <= t && team.iter().all(|&u| u < inst.n() && used.insert(u)) && inst.covers(team)
    })
}

/// `inst` must be normalized.
fn is_blocker(inst: &Instance, blocker: &BlockerSet) -> bool {
    if blocker.len() > inst.policy().s || blocker.users.iter().any(|&u| u >= inst.n()) {
        return false;
    }
    let rest = inst.restrict(&inst.complement(&blocker.users));
    match has_teams(&rest) {
        Ok(found) => !found,
        Err(_) => false,
    }
}

/// Exact `s = 0` decision used by witness checking: the oracle for small
/// user counts, the configuration ILP otherwise.
fn has_teams(inst: &Instance) -> Result<bool> {
    let budgets = Budgets::default();
    if inst.n() <= budgets.oracle_users {
        return Ok(crate::oracle::Oracle::default()
            .solve_s0(inst)?
            .answer
            .is_sat());
    }
    match crate::s0::ilp_solve(inst, &budgets) {
        Ok(v) => Ok(v.answer.is_sat()),
        Err(e) if e.is_budget() => Ok(crate::oracle::Oracle::unbounded()
            .solve_s0(inst)?
            .answer
            .is_sat()),
        Err(e) => Err(e),
    }
}
