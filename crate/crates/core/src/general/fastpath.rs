//! `d = 1` with no binding size bound.
//!
//! A single team may be as large as it likes, so the remaining users form a
//! team iff together they still cover `P`. Removing `S` breaks that iff
//! `S` contains every user authorized for some resource. The instance is
//! therefore resilient iff every resource of `P` has at least `s + 1`
//! authorized users, and the users of a least-covered resource form a
//! blocker of minimum size.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::policy::{BlockerSet, Instance, Stats, TeamSet, UserId, Verdict};

pub fn fastpath_d1_tinf(inst: &Instance) -> Result<Verdict> {
    inst.require_normalized()?;
    let policy = inst.policy();
    if policy.d != 1 || !policy.t.is_unbounded_for(inst.p()) {
        return Err(Error::Precondition(format!(
            "fast path needs d = 1 and t >= |P|, got d = {} and t = {}",
            policy.d, policy.t
        )));
    }
    let start = Instant::now();
    let mut coverage: Vec<Vec<UserId>> = vec![Vec::new(); inst.m()];
    for u in 0..inst.n() {
        for r in (inst.user_resources(u) & policy.resources).iter() {
            coverage[r].push(u);
        }
    }
    let weakest = policy
        .resources
        .iter()
        .min_by_key(|&r| (coverage[r].len(), r))
        .expect("normalized instances have a nonempty P");
    let mut stats = Stats::named("fastpath");
    stats.nodes = inst.n() as u64;
    stats.elapsed = start.elapsed();
    if coverage[weakest].len() <= policy.s {
        return Ok(Verdict::unsat(
            BlockerSet::new(coverage[weakest].clone()),
            stats,
        ));
    }
    let witness = (policy.s == 0).then(|| {
        let mut team: Vec<UserId> = policy.resources.iter().map(|r| coverage[r][0]).collect();
        team.sort_unstable();
        team.dedup();
        TeamSet::new(vec![team])
    });
    Ok(Verdict::sat(witness, stats))
}
