//! Blocker search by branching on team members.
//!
//! Any blocker must meet every set of teams, so once one set of teams `V`
//! is known, some member of `𝒰(V)` belongs to the blocker. Branching on
//! those at most `dt` users, `s` levels deep, visits at most
//! `Σ_{i≤s} (dt)^i` nodes.

use std::collections::HashSet;
use std::time::Instant;

use super::S0Solver;
use crate::error::{Error, Result};
use crate::policy::{BlockerSet, Budgets, Instance, Stats, TeamSet, UserId, Verdict};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchOptions {
    /// Skip removed-sets already explored through another branch order.
    pub dedup: bool,
}

pub fn branch_solve(inst: &Instance, s0: S0Solver, budgets: &Budgets) -> Result<Verdict> {
    branch_solve_with(inst, s0, BranchOptions::default(), budgets)
}

pub fn branch_solve_with(
    inst: &Instance,
    s0: S0Solver,
    options: BranchOptions,
    budgets: &Budgets,
) -> Result<Verdict> {
    inst.require_normalized()?;
    let start = Instant::now();
    let mut search = Branch {
        inst,
        s0,
        budgets,
        nodes: 0,
        seen: options.dedup.then(HashSet::new),
        root_teams: None,
    };
    let mut removed = Vec::new();
    let found = search.search(&mut removed, inst.policy().s)?;
    let stats = Stats {
        algorithm: format!("branch/{}", s0.name()),
        nodes: search.nodes,
        states: 0,
        elapsed: start.elapsed(),
    };
    Ok(match found {
        Some(blocker) => Verdict::unsat(BlockerSet::new(blocker), stats),
        None => {
            let witness = if inst.policy().s == 0 {
                search.root_teams
            } else {
                None
            };
            Verdict::sat(witness, stats)
        }
    })
}

struct Branch<'a> {
    inst: &'a Instance,
    s0: S0Solver,
    budgets: &'a Budgets,
    nodes: u64,
    seen: Option<HashSet<Vec<UserId>>>,
    root_teams: Option<TeamSet>,
}

impl Branch<'_> {
    fn search(&mut self, removed: &mut Vec<UserId>, left: usize) -> Result<Option<Vec<UserId>>> {
        if let Some(seen) = &mut self.seen {
            let mut key = removed.clone();
            key.sort_unstable();
            if !seen.insert(key) {
                return Ok(None);
            }
        }
        self.nodes += 1;
        let keep = self.inst.complement(removed);
        let verdict = self.s0.solve(&self.inst.restrict(&keep), self.budgets)?;
        if !verdict.answer.is_sat() {
            return Ok(Some(removed.clone()));
        }
        let teams = verdict
            .teams()
            .ok_or_else(|| Error::Internal("s = 0 solver returned SAT without teams".into()))?
            .map_users(|u| keep[u]);
        if removed.is_empty() {
            self.root_teams = Some(teams.clone());
        }
        if left == 0 {
            return Ok(None);
        }
        for u in teams.members() {
            removed.push(u);
            if let Some(blocker) = self.search(removed, left - 1)? {
                return Ok(Some(blocker));
            }
            removed.pop();
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::solve_rcp_bruteforce;
    use crate::policy::{verify_witness, Answer, TeamBound};

    fn inst(m: usize, lists: &[&[usize]], s: usize, d: usize, t: usize) -> Instance {
        Instance::from_lists(m, lists, s, d, TeamBound::Finite(t))
            .unwrap()
            .normalize()
            .unwrap()
    }

    #[test]
    fn examples() {
        let b = Budgets::default();
        let i = inst(1, &[&[0], &[0]], 1, 1, 1);
        assert_eq!(
            branch_solve(&i, S0Solver::Dp, &b).unwrap().answer,
            Answer::Sat
        );

        let i = inst(1, &[&[0]], 1, 1, 1);
        let v = branch_solve(&i, S0Solver::Dp, &b).unwrap();
        assert_eq!(v.answer, Answer::Unsat);
        assert_eq!(v.blocker().unwrap().users, vec![0]);

        let i = inst(2, &[&[0], &[0], &[1]], 1, 1, 2);
        let v = branch_solve(&i, S0Solver::Dp, &b).unwrap();
        assert_eq!(v.answer, Answer::Unsat);
        assert_eq!(v.blocker().unwrap().users, vec![2]);
        assert_eq!(v.answer, solve_rcp_bruteforce(&i).unwrap().answer);
        assert!(verify_witness(&i, &v));
    }

    #[test]
    fn dedup_does_not_change_answers() {
        let b = Budgets::default();
        let i = inst(2, &[&[0, 1], &[0, 1], &[0], &[1], &[0, 1]], 2, 2, 2);
        let plain = branch_solve(&i, S0Solver::Dp, &b).unwrap();
        let dedup = branch_solve_with(&i, S0Solver::Dp, BranchOptions { dedup: true }, &b).unwrap();
        assert_eq!(plain.answer, dedup.answer);
        assert!(dedup.stats.nodes <= plain.stats.nodes);
        assert_eq!(plain.answer, solve_rcp_bruteforce(&i).unwrap().answer);
    }

    #[test]
    fn node_bound() {
        let b = Budgets::default();
        let i = inst(
            2,
            &[&[0, 1], &[0, 1], &[0, 1], &[0], &[1], &[0, 1]],
            2,
            2,
            2,
        );
        let v = branch_solve(&i, S0Solver::Ilp, &b).unwrap();
        let dt = 4u64;
        assert!(v.stats.nodes <= 1 + dt + dt * dt);
    }
}
