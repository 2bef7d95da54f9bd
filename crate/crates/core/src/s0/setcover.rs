//! `d = 1`, `s = 0`: the query is Set Cover with budget `t`.

use std::time::Instant;

use crate::bits::ResourceSet;
use crate::error::{Error, Result};
use crate::policy::{BlockerSet, Budgets, Instance, Stats, TeamSet, UserId, Verdict};

const UNREACHED: u8 = u8::MAX;

/// Minimum number of users covering each subset of `P`, computed over
/// subset masks in increasing order. SAT iff the minimum for `P` is at
/// most `t`; the witness follows the recorded predecessors back from `P`.
pub fn setcover_d1(inst: &Instance, budgets: &Budgets) -> Result<Verdict> {
    inst.require_normalized()?;
    let policy = inst.policy();
    if policy.d != 1 || policy.s != 0 {
        return Err(Error::Precondition(format!(
            "set cover route needs d = 1 and s = 0, got d = {} and s = {}",
            policy.d, policy.s
        )));
    }
    let p = inst.p();
    if p as u64 > budgets.dp_bits as u64 {
        return Err(Error::BudgetExceeded {
            what: "subset table bit",
            needed: p as u64,
            limit: budgets.dp_bits as u64,
        });
    }
    let start = Instant::now();

    // One representative (lowest index) per distinct nonempty neighborhood.
    let reps: Vec<(ResourceSet, UserId)> = inst
        .class_partition()
        .iter()
        .filter(|(c, _)| !c.is_empty())
        .map(|(c, users)| (c, users[0]))
        .collect();

    let size = 1usize << p;
    let mut best = vec![UNREACHED; size];
    let mut via: Vec<(u32, u32)> = vec![(0, 0); size];
    best[0] = 0;
    for mask in 0..size {
        if best[mask] == UNREACHED {
            continue;
        }
        let next_cost = best[mask].saturating_add(1);
        for &(class, user) in &reps {
            let next = mask | class.bits() as usize;
            if next != mask && next_cost < best[next] {
                best[next] = next_cost;
                via[next] = (mask as u32, user as u32);
            }
        }
    }

    let full = size - 1;
    let stats = Stats {
        algorithm: "setcover".into(),
        nodes: 0,
        states: size as u64,
        elapsed: start.elapsed(),
    };
    if best[full] != UNREACHED && best[full] as usize <= inst.team_limit() {
        let mut team = Vec::new();
        let mut mask = full;
        while mask != 0 {
            let (prev, user) = via[mask];
            team.push(user as UserId);
            mask = prev as usize;
        }
        Ok(Verdict::sat(Some(TeamSet::new(vec![team])), stats))
    } else {
        Ok(Verdict::unsat(BlockerSet::default(), stats))
    }
}
