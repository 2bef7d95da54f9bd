//! Brute-force reference solvers.
//!
//! These are the ground truth every other algorithm is checked against.
//! They follow the problem definition directly: team search assigns users
//! to teams one by one, and the full query enumerates every candidate
//! blocker in increasing size.

use std::collections::HashSet;
use std::time::Instant;

use itertools::Itertools;

use crate::bits::ResourceSet;
use crate::error::{Error, Result};
use crate::policy::{Answer, BlockerSet, Instance, Stats, TeamSet, UserId, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    /// `None` disables the user-count guard.
    pub max_users: Option<usize>,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            max_users: Some(20),
        }
    }
}

impl Oracle {
    pub fn with_limit(max_users: usize) -> Self {
        Oracle {
            max_users: Some(max_users),
        }
    }

    pub fn unbounded() -> Self {
        Oracle { max_users: None }
    }

    fn guard(&self, inst: &Instance) -> Result<()> {
        inst.require_normalized()?;
        match self.max_users {
            Some(limit) if inst.n() > limit => Err(Error::BudgetExceeded {
                what: "oracle user",
                needed: inst.n() as u64,
                limit: limit as u64,
            }),
            _ => Ok(()),
        }
    }

    /// Decides `res(P, 0, d, t)`, ignoring `s`. SAT carries a set of teams
    /// ordered by smallest member; UNSAT carries the empty blocker.
    pub fn solve_s0(&self, inst: &Instance) -> Result<Verdict> {
        self.guard(inst)?;
        let start = Instant::now();
        let mut search = TeamSearch::new(inst);
        let found = search.run();
        let stats = Stats {
            algorithm: "oracle".into(),
            nodes: search.nodes,
            states: 0,
            elapsed: start.elapsed(),
        };
        Ok(match found {
            Some(teams) => Verdict::sat(Some(TeamSet::new(teams)), stats),
            None => Verdict::unsat(BlockerSet::default(), stats),
        })
    }

    /// Decides `res(P, s, d, t)` by trying every user set of size at most
    /// `s`, smallest first and lexicographically within a size. The first
    /// blocker met is returned, so it has minimum cardinality.
    pub fn solve_rcp(&self, inst: &Instance) -> Result<Verdict> {
        self.guard(inst)?;
        let start = Instant::now();
        let mut stats = Stats::named("oracle");
        let n = inst.n();
        let mut s0_teams = None;
        for k in 0..=inst.policy().s.min(n) {
            for removed in (0..n).combinations(k) {
                stats.nodes += 1;
                let rest = inst.restrict(&inst.complement(&removed));
                let v = self.solve_s0(&rest)?;
                if v.answer == Answer::Unsat {
                    stats.elapsed = start.elapsed();
                    return Ok(Verdict::unsat(BlockerSet::new(removed), stats));
                }
                if k == 0 {
                    s0_teams = v.teams().cloned();
                }
            }
        }
        stats.elapsed = start.elapsed();
        let witness = if inst.policy().s == 0 { s0_teams } else { None };
        Ok(Verdict::sat(witness, stats))
    }

    /// True if removing `removed` leaves no set of teams.
    pub fn blocks(&self, inst: &Instance, removed: &[UserId]) -> Result<bool> {
        let rest = inst.restrict(&inst.complement(removed));
        Ok(self.solve_s0(&rest)?.answer == Answer::Unsat)
    }

    /// Drops members of a blocker one at a time while it still blocks,
    /// until no single member can go.
    pub fn shrink_blocker(&self, inst: &Instance, blocker: &BlockerSet) -> Result<BlockerSet> {
        let mut current = blocker.users.clone();
        loop {
            let mut changed = false;
            let mut i = 0;
            while i < current.len() {
                let mut candidate = current.clone();
                candidate.remove(i);
                if self.blocks(inst, &candidate)? {
                    current = candidate;
                    changed = true;
                } else {
                    i += 1;
                }
            }
            if !changed {
                return Ok(BlockerSet::new(current));
            }
        }
    }

    /// An inclusion-minimal blocker of size at most `s`, if any exists.
    pub fn find_minimal_blocker(&self, inst: &Instance) -> Result<Option<BlockerSet>> {
        let v = self.solve_rcp(inst)?;
        match v.blocker() {
            Some(b) => Ok(Some(self.shrink_blocker(inst, b)?)),
            None => Ok(None),
        }
    }
}

pub fn solve_s0_bruteforce(inst: &Instance) -> Result<Verdict> {
    Oracle::default().solve_s0(inst)
}

pub fn solve_rcp_bruteforce(inst: &Instance) -> Result<Verdict> {
    Oracle::default().solve_rcp(inst)
}

pub fn find_minimal_blocker(inst: &Instance) -> Result<Option<BlockerSet>> {
    Oracle::default().find_minimal_blocker(inst)
}

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Slot {
    covered: ResourceSet,
    size: usize,
}

/// Exhaustive assignment of users (in index order) to teams.
///
/// Teams are opened in order, so each team's first member is its smallest
/// and the result is sorted by smallest member. A user only joins a team it
/// adds a resource to. Dead ends are remembered by `(user, sorted slots)`.
struct TeamSearch<'a> {
    inst: &'a Instance,
    target: ResourceSet,
    limit: usize,
    /// `suffix_count[i][r]` = number of users `>= i` authorized for `r`.
    suffix_count: Vec<Vec<u32>>,
    slots: Vec<Slot>,
    members: Vec<Vec<UserId>>,
    failed: HashSet<(usize, Vec<Slot>)>,
    nodes: u64,
}

impl<'a> TeamSearch<'a> {
    fn new(inst: &'a Instance) -> Self {
        let n = inst.n();
        let m = inst.m();
        let mut suffix_count = vec![vec![0u32; m]; n + 1];
        for i in (0..n).rev() {
            suffix_count[i] = suffix_count[i + 1].clone();
            for r in inst.user_resources(i).iter() {
                suffix_count[i][r] += 1;
            }
        }
        let d = inst.policy().d;
        TeamSearch {
            inst,
            target: inst.policy().resources,
            limit: inst.team_limit(),
            suffix_count,
            slots: vec![Slot::default(); d],
            members: vec![Vec::new(); d],
            failed: HashSet::new(),
            nodes: 0,
        }
    }

    fn run(&mut self) -> Option<Vec<Vec<UserId>>> {
        if self.search(0) {
            Some(self.members.clone())
        } else {
            None
        }
    }

    fn feasible(&self, i: usize) -> bool {
        for r in self.target.iter() {
            let lacking = self.slots.iter().filter(|s| !s.covered.contains(r)).count() as u32;
            if lacking > self.suffix_count[i][r] {
                return false;
            }
        }
        true
    }

    fn search(&mut self, i: usize) -> bool {
        self.nodes += 1;
        if self.slots.iter().all(|s| self.target.is_subset(s.covered)) {
            return true;
        }
        if i == self.inst.n() || !self.feasible(i) {
            return false;
        }
        let key = {
            let mut k = self.slots.clone();
            k.sort_unstable();
            (i, k)
        };
        if self.failed.contains(&key) {
            return false;
        }
        let gain_of = self.inst.user_resources(i) & self.target;
        let mut opened_empty = false;
        for j in 0..self.slots.len() {
            let slot = self.slots[j];
            if self.target.is_subset(slot.covered) || slot.size >= self.limit {
                continue;
            }
            if slot.size == 0 {
                // Only the first empty team may be opened.
                if opened_empty {
                    continue;
                }
                opened_empty = true;
            }
            let gain = gain_of - slot.covered;
            if gain.is_empty() {
                continue;
            }
            let next = Slot {
                covered: slot.covered | gain,
                size: slot.size + 1,
            };
            if next.size == self.limit && !self.target.is_subset(next.covered) {
                continue;
            }
            self.slots[j] = next;
            self.members[j].push(i);
            if self.search(i + 1) {
                return true;
            }
            self.members[j].pop();
            self.slots[j] = slot;
        }
        if self.search(i + 1) {
            return true;
        }
        self.failed.insert(key);
        false
    }
}
