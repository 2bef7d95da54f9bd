//! Blocker search over class deletion counts.
//!
//! Users with equal neighborhoods are interchangeable, and a minimal blocker
//! that touches class `U_C` leaves fewer than `d` of its users. So it
//! suffices to keep `d_C = min{|U_C|, d}` representatives per class
//! (the reduced user set `U^r`, at most `d·2^p` users) and to enumerate only
//! how many representatives of each class are deleted. Deleting `k_C > 0`
//! representatives stands for deleting them plus every non-representative,
//! which costs `ζ(C) = k_C + |U_C| − d_C`.

use std::collections::BTreeMap;
use std::time::Instant;

use super::S0Solver;
use crate::bits::ResourceSet;
use crate::error::{Error, Result};
use crate::policy::{BlockerSet, Budgets, ClassPartition, Instance, Stats, UserId, Verdict};

/// Number of representatives `k_C` deleted from each class.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClassDeletionVector {
    pub d: usize,
    pub k: BTreeMap<ResourceSet, usize>,
}

impl ClassDeletionVector {
    pub fn get(&self, class: ResourceSet) -> usize {
        self.k.get(&class).copied().unwrap_or(0)
    }

    /// `Σ_C ζ(C)`, the size of the expanded blocker.
    pub fn cost(&self, cp: &ClassPartition) -> usize {
        self.k.keys().map(|&c| zeta(cp, self, c)).sum()
    }
}

/// `ζ(C) = k_C + |U_C| − d_C` if `k_C > 0`, else 0.
pub fn zeta(cp: &ClassPartition, v: &ClassDeletionVector, class: ResourceSet) -> usize {
    zeta_value(cp.class_size(class), v.d, v.get(class))
}

fn zeta_value(class_size: usize, d: usize, k: usize) -> usize {
    if k == 0 {
        0
    } else {
        k + class_size - class_size.min(d)
    }
}

struct ClassInfo {
    users: Vec<UserId>,
    reps: usize,
    max_k: usize,
}

pub fn reduced_solve(inst: &Instance, s0: S0Solver, budgets: &Budgets) -> Result<Verdict> {
    inst.require_normalized()?;
    let classes_needed = 1u64.checked_shl(inst.p() as u32).unwrap_or(u64::MAX);
    if classes_needed > budgets.max_classes {
        return Err(Error::BudgetExceeded {
            what: "neighborhood class",
            needed: classes_needed,
            limit: budgets.max_classes,
        });
    }
    let start = Instant::now();
    let (s, d) = (inst.policy().s, inst.policy().d);
    let cp = inst.class_partition();
    let classes: Vec<ClassInfo> = cp
        .iter()
        .filter(|(c, _)| !c.is_empty())
        .map(|(_, users)| {
            let reps = users.len().min(d);
            ClassInfo {
                users: users.to_vec(),
                reps,
                max_k: s.min(d).min(reps),
            }
        })
        .collect();
    let mut reduced: Vec<UserId> = classes
        .iter()
        .flat_map(|c| c.users[..c.reps].iter().copied())
        .collect();
    reduced.sort_unstable();

    let mut search = Search {
        inst,
        s0,
        budgets,
        classes: &classes,
        reduced: &reduced,
        s,
        d,
        k: vec![0; classes.len()],
        vectors: 0,
        root_teams: None,
    };
    let found = search.enumerate(0, 0)?;
    let stats = Stats {
        algorithm: format!("reduced/{}", s0.name()),
        nodes: search.vectors,
        states: reduced.len() as u64,
        elapsed: start.elapsed(),
    };
    Ok(match found {
        Some(k) => {
            let mut blocker = Vec::new();
            for (info, &kc) in classes.iter().zip(&k) {
                if kc > 0 {
                    blocker.extend_from_slice(&info.users[..kc]);
                    blocker.extend_from_slice(&info.users[info.reps..]);
                }
            }
            Verdict::unsat(BlockerSet::new(blocker), stats)
        }
        None => {
            let witness = if s == 0 { search.root_teams } else { None };
            Verdict::sat(witness, stats)
        }
    })
}

struct Search<'a> {
    inst: &'a Instance,
    s0: S0Solver,
    budgets: &'a Budgets,
    classes: &'a [ClassInfo],
    reduced: &'a [UserId],
    s: usize,
    d: usize,
    k: Vec<usize>,
    vectors: u64,
    root_teams: Option<crate::policy::TeamSet>,
}

impl Search<'_> {
    /// Assigns `k` for classes `idx..` in ascending order; returns the
    /// first vector whose chosen representatives block `UR|_{U^r}`.
    fn enumerate(&mut self, idx: usize, cost: usize) -> Result<Option<Vec<usize>>> {
        if idx == self.classes.len() {
            return if self.blocks()? {
                Ok(Some(self.k.clone()))
            } else {
                Ok(None)
            };
        }
        let info = &self.classes[idx];
        for kc in 0..=info.max_k {
            let next = cost + zeta_value(info.users.len(), self.d, kc);
            if next > self.s {
                break;
            }
            self.k[idx] = kc;
            if let Some(found) = self.enumerate(idx + 1, next)? {
                return Ok(Some(found));
            }
        }
        self.k[idx] = 0;
        Ok(None)
    }

    fn blocks(&mut self) -> Result<bool> {
        self.vectors += 1;
        if self.vectors > self.budgets.max_deletion_vectors {
            return Err(Error::BudgetExceeded {
                what: "class deletion vector",
                needed: self.vectors,
                limit: self.budgets.max_deletion_vectors,
            });
        }
        let mut removed = Vec::new();
        for (info, &kc) in self.classes.iter().zip(&self.k) {
            removed.extend_from_slice(&info.users[..kc]);
        }
        let keep: Vec<UserId> = self
            .reduced
            .iter()
            .copied()
            .filter(|u| !removed.contains(u))
            .collect();
        let verdict = self.s0.solve(&self.inst.restrict(&keep), self.budgets)?;
        if verdict.answer.is_sat() && removed.is_empty() {
            self.root_teams = verdict.teams().map(|t| t.map_users(|u| keep[u]));
        }
        Ok(!verdict.answer.is_sat())
    }
}
