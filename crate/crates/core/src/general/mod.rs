//! Exact algorithms for the full query (`s ≥ 0`) and the strategy
//! dispatcher.

pub mod branch;
pub mod fastpath;
pub mod reduced;

use std::fmt;
use std::str::FromStr;

pub use branch::{branch_solve, branch_solve_with, BranchOptions};
pub use fastpath::fastpath_d1_tinf;
pub use reduced::{reduced_solve, zeta, ClassDeletionVector};

use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::policy::{Budgets, Instance, Verdict};
use crate::s0;

/// Inner `s = 0` decision procedure used by the blocker searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum S0Solver {
    Oracle,
    Dp,
    Ilp,
}

impl S0Solver {
    pub fn name(self) -> &'static str {
        match self {
            S0Solver::Oracle => "oracle",
            S0Solver::Dp => "dp",
            S0Solver::Ilp => "ilp",
        }
    }

    pub fn solve(self, inst: &Instance, budgets: &Budgets) -> Result<Verdict> {
        match self {
            S0Solver::Oracle => Oracle::with_limit(budgets.oracle_users).solve_s0(inst),
            S0Solver::Dp => s0::dp_solve(inst, budgets),
            S0Solver::Ilp => s0::ilp_solve(inst, budgets),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Auto,
    Oracle,
    Dp,
    Ilp,
    SetCover,
    Branch,
    Reduced,
    Fastpath,
}

impl Strategy {
    pub const ALL: [Strategy; 8] = [
        Strategy::Auto,
        Strategy::Oracle,
        Strategy::Dp,
        Strategy::Ilp,
        Strategy::SetCover,
        Strategy::Branch,
        Strategy::Reduced,
        Strategy::Fastpath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::Oracle => "oracle",
            Strategy::Dp => "dp",
            Strategy::Ilp => "ilp",
            Strategy::SetCover => "setcover",
            Strategy::Branch => "branch",
            Strategy::Reduced => "reduced",
            Strategy::Fastpath => "fastpath",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown algorithm {s:?}")))
    }
}

fn dp_fits(inst: &Instance, budgets: &Budgets) -> bool {
    (inst.policy().d * inst.p()) as u64 <= budgets.dp_bits as u64
}

fn classes_fit(inst: &Instance, budgets: &Budgets) -> bool {
    1u64.checked_shl(inst.p() as u32)
        .is_some_and(|c| c <= budgets.max_classes)
}

/// Decides `res(P, s, d, t)` on a normalized instance.
///
/// The `s = 0` procedures (`dp`, `ilp`, `setcover`) run directly when
/// `s = 0` and as the inner solver of the branching search otherwise.
/// `auto` takes the fast path for `d = 1, t ≥ p`, then the DP-backed routes
/// while `d·p` fits the DP budget, then the class-based routes while `2^p`
/// fits, and finally the oracle. The chosen route is recorded in
/// `stats.algorithm`.
pub fn solve(inst: &Instance, strategy: Strategy, budgets: &Budgets) -> Result<Verdict> {
    inst.require_normalized()?;
    let s = inst.policy().s;
    let mut verdict = match strategy {
        Strategy::Oracle => Oracle::with_limit(budgets.oracle_users).solve_rcp(inst)?,
        Strategy::Dp if s == 0 => s0::dp_solve(inst, budgets)?,
        Strategy::Ilp if s == 0 => s0::ilp_solve(inst, budgets)?,
        Strategy::SetCover if s == 0 => s0::setcover_d1(inst, budgets)?,
        Strategy::Dp => branch_solve(inst, S0Solver::Dp, budgets)?,
        Strategy::Ilp => branch_solve(inst, S0Solver::Ilp, budgets)?,
        Strategy::SetCover => {
            return Err(Error::Precondition(
                "the set cover route decides s = 0 only".into(),
            ));
        }
        Strategy::Branch => {
            let inner = if dp_fits(inst, budgets) {
                S0Solver::Dp
            } else {
                S0Solver::Ilp
            };
            branch_solve(inst, inner, budgets)?
        }
        Strategy::Reduced => reduced_solve(inst, S0Solver::Ilp, budgets)?,
        Strategy::Fastpath => fastpath_d1_tinf(inst)?,
        Strategy::Auto => {
            let mut v = auto(inst, budgets)?;
            v.stats.algorithm = format!("auto:{}", v.stats.algorithm);
            v
        }
    };
    if strategy != Strategy::Auto && verdict.stats.algorithm.is_empty() {
        verdict.stats.algorithm = strategy.name().into();
    }
    Ok(verdict)
}

fn auto(inst: &Instance, budgets: &Budgets) -> Result<Verdict> {
    let policy = inst.policy();
    if policy.d == 1 && policy.t.is_unbounded_for(inst.p()) {
        return fastpath_d1_tinf(inst);
    }
    if policy.s == 0 {
        if dp_fits(inst, budgets) {
            return s0::dp_solve(inst, budgets);
        }
        if classes_fit(inst, budgets) {
            return s0::ilp_solve(inst, budgets);
        }
    } else {
        if dp_fits(inst, budgets) {
            return branch_solve(inst, S0Solver::Dp, budgets);
        }
        if classes_fit(inst, budgets) {
            return reduced_solve(inst, S0Solver::Ilp, budgets);
        }
    }
    Oracle::with_limit(budgets.oracle_users).solve_rcp(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::solve_rcp_bruteforce;
    use crate::policy::TeamBound;

    fn inst(m: usize, lists: &[&[usize]], s: usize, d: usize, t: TeamBound) -> Instance {
        Instance::from_lists(m, lists, s, d, t)
            .unwrap()
            .normalize()
            .unwrap()
    }

    #[test]
    fn auto_routes() {
        let b = Budgets::default();
        let i = inst(2, &[&[0], &[1]], 1, 1, TeamBound::Unbounded);
        assert_eq!(
            solve(&i, Strategy::Auto, &b).unwrap().stats.algorithm,
            "auto:fastpath"
        );
        let i = inst(2, &[&[0], &[1]], 0, 2, TeamBound::Finite(1));
        assert_eq!(
            solve(&i, Strategy::Auto, &b).unwrap().stats.algorithm,
            "auto:dp"
        );
        let i = inst(2, &[&[0], &[1]], 1, 2, TeamBound::Finite(1));
        assert_eq!(
            solve(&i, Strategy::Auto, &b).unwrap().stats.algorithm,
            "auto:branch/dp"
        );
        let tight = Budgets { dp_bits: 1, ..b };
        assert_eq!(
            solve(&i, Strategy::Auto, &tight).unwrap().stats.algorithm,
            "auto:reduced/ilp"
        );
        let tighter = Budgets {
            dp_bits: 1,
            max_classes: 2,
            ..b
        };
        assert_eq!(
            solve(&i, Strategy::Auto, &tighter).unwrap().stats.algorithm,
            "auto:oracle"
        );
    }

    #[test]
    fn every_strategy_matches_oracle() {
        let b = Budgets::default();
        let i = inst(2, &[&[0], &[0], &[1], &[0, 1]], 1, 1, TeamBound::Finite(2));
        let truth = solve_rcp_bruteforce(&i).unwrap().answer;
        for st in Strategy::ALL {
            if st == Strategy::SetCover {
                continue;
            }
            assert_eq!(solve(&i, st, &b).unwrap().answer, truth, "{st}");
        }
    }

    #[test]
    fn strategy_names_round_trip() {
        for st in Strategy::ALL {
            assert_eq!(st.name().parse::<Strategy>().unwrap(), st);
        }
        assert!("simplex".parse::<Strategy>().is_err());
    }
}
