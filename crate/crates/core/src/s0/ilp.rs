//! Configuration integer program.
//!
//! A configuration is a set of at most `t` distinct neighborhoods whose
//! union is `P`: an abstract staffing pattern for one team. Choosing how
//! many teams use each configuration, subject to
//!
//! * `Σ_c x_c = d`, and
//! * `Σ_{c ∋ N} x_c ≤ |U_N|` for every neighborhood class `N`,
//!
//! is feasible exactly when a set of teams exists. The number of variables
//! depends on `p` and `t` only. Feasibility is decided by a depth-first
//! search over configurations rather than a general ILP algorithm.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use crate::bits::ResourceSet;
use crate::error::{Error, Result};
use crate::policy::{
    BlockerSet, Budgets, ClassPartition, Instance, Stats, TeamSet, UserId, Verdict,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    /// Distinct nonempty parts, ascending in bitset order.
    pub parts: Vec<ResourceSet>,
}

impl Configuration {
    pub fn new(mut parts: Vec<ResourceSet>) -> Self {
        parts.sort_unstable();
        parts.dedup();
        Configuration { parts }
    }

    pub fn union(&self) -> ResourceSet {
        self.parts.iter().fold(ResourceSet::EMPTY, |a, &b| a | b)
    }

    pub fn involves(&self, class: ResourceSet) -> bool {
        self.parts.contains(&class)
    }

    /// True if no part can be dropped without losing coverage.
    pub fn is_minimal(&self) -> bool {
        (0..self.parts.len()).all(|i| {
            let others = self
                .parts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(ResourceSet::EMPTY, |a, (_, &b)| a | b);
            !self.parts[i].is_subset(others)
        })
    }
}

/// Nonzero `x_c` values, in the order the configurations were searched.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConfigCountVector {
    pub counts: Vec<(Configuration, usize)>,
}

impl ConfigCountVector {
    pub fn total(&self) -> usize {
        self.counts.iter().map(|(_, x)| x).sum()
    }

    pub fn count_of(&self, c: &Configuration) -> usize {
        self.counts
            .iter()
            .find(|(k, _)| k == c)
            .map_or(0, |(_, x)| *x)
    }
}

/// Every configuration whose parts are nonempty neighborhood classes that
/// actually occur in `inst`, ordered by part count and then
/// lexicographically in bitset order.
pub fn enumerate_configurations(inst: &Instance, budgets: &Budgets) -> Result<Vec<Configuration>> {
    inst.require_normalized()?;
    check_class_budget(inst, budgets)?;
    let target = inst.policy().resources;
    let available: Vec<ResourceSet> = inst
        .class_partition()
        .iter()
        .map(|(c, _)| c)
        .filter(|c| !c.is_empty())
        .collect();
    // suffix[i] = union of available[i..].
    let mut suffix = vec![ResourceSet::EMPTY; available.len() + 1];
    for i in (0..available.len()).rev() {
        suffix[i] = suffix[i + 1] | available[i];
    }

    let mut out = Vec::new();
    let mut chosen = Vec::new();
    for size in 1..=inst.team_limit().min(available.len()) {
        collect(
            &available,
            &suffix,
            target,
            size,
            0,
            ResourceSet::EMPTY,
            &mut chosen,
            &mut out,
            budgets,
        )?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn collect(
    available: &[ResourceSet],
    suffix: &[ResourceSet],
    target: ResourceSet,
    size: usize,
    from: usize,
    covered: ResourceSet,
    chosen: &mut Vec<ResourceSet>,
    out: &mut Vec<Configuration>,
    budgets: &Budgets,
) -> Result<()> {
    if chosen.len() == size {
        if target.is_subset(covered) {
            if out.len() as u64 >= budgets.max_configurations {
                return Err(Error::BudgetExceeded {
                    what: "configuration",
                    needed: out.len() as u64 + 1,
                    limit: budgets.max_configurations,
                });
            }
            out.push(Configuration {
                parts: chosen.clone(),
            });
        }
        return Ok(());
    }
    let need = size - chosen.len();
    for i in from..available.len() {
        if available.len() - i < need || !target.is_subset(covered | suffix[i]) {
            break;
        }
        chosen.push(available[i]);
        collect(
            available,
            suffix,
            target,
            size,
            i + 1,
            covered | available[i],
            chosen,
            out,
            budgets,
        )?;
        chosen.pop();
    }
    Ok(())
}

fn check_class_budget(inst: &Instance, budgets: &Budgets) -> Result<()> {
    let classes = 1u64.checked_shl(inst.p() as u32).unwrap_or(u64::MAX);
    if classes > budgets.max_classes {
        return Err(Error::BudgetExceeded {
            what: "neighborhood class",
            needed: classes,
            limit: budgets.max_classes,
        });
    }
    Ok(())
}

/// Finds `x` with `Σ x_c = d` and per-class usage within `capacities`, or
/// `None`. Configurations are tried in the given order, each with its
/// largest admissible count first.
pub fn ilp_feasible(
    configs: &[Configuration],
    capacities: &BTreeMap<ResourceSet, usize>,
    d: usize,
) -> Option<ConfigCountVector> {
    ilp_search(configs, capacities, d).0
}

fn ilp_search(
    configs: &[Configuration],
    capacities: &BTreeMap<ResourceSet, usize>,
    d: usize,
) -> (Option<ConfigCountVector>, u64) {
    // Every part gets an entry so the memo key has a fixed shape.
    let mut caps = capacities.clone();
    for part in configs.iter().flat_map(|c| &c.parts) {
        caps.entry(*part).or_insert(0);
    }
    let mut search = FeasibilitySearch {
        configs,
        caps,
        counts: vec![0; configs.len()],
        failed: HashSet::new(),
        nodes: 0,
    };
    let found = search.run(0, d);
    let vector = found.then(|| ConfigCountVector {
        counts: configs
            .iter()
            .zip(&search.counts)
            .filter(|(_, &x)| x > 0)
            .map(|(c, &x)| (c.clone(), x))
            .collect(),
    });
    (vector, search.nodes)
}

struct FeasibilitySearch<'a> {
    configs: &'a [Configuration],
    caps: BTreeMap<ResourceSet, usize>,
    counts: Vec<usize>,
    failed: HashSet<(usize, usize, Vec<usize>)>,
    nodes: u64,
}

impl FeasibilitySearch<'_> {
    fn cap(&self, class: ResourceSet) -> usize {
        self.caps.get(&class).copied().unwrap_or(0)
    }

    fn run(&mut self, idx: usize, remaining: usize) -> bool {
        self.nodes += 1;
        if remaining == 0 {
            return true;
        }
        if idx == self.configs.len() {
            return false;
        }
        // Each remaining team needs its own user for every resource.
        let target = self.configs[0].union();
        for r in target.iter() {
            let supply: usize = self
                .caps
                .iter()
                .filter(|(c, _)| c.contains(r))
                .map(|(_, &k)| k)
                .sum();
            if supply < remaining {
                return false;
            }
        }
        let key = (
            idx,
            remaining,
            self.caps.values().copied().collect::<Vec<_>>(),
        );
        if self.failed.contains(&key) {
            return false;
        }
        let config = &self.configs[idx];
        let max = config
            .parts
            .iter()
            .map(|&part| self.cap(part))
            .min()
            .unwrap_or(0)
            .min(remaining);
        for x in (0..=max).rev() {
            for &part in &config.parts {
                *self.caps.get_mut(&part).expect("every part has an entry") -= x;
            }
            self.counts[idx] = x;
            if self.run(idx + 1, remaining - x) {
                return true;
            }
            for &part in &config.parts {
                *self.caps.get_mut(&part).expect("every part has an entry") += x;
            }
            self.counts[idx] = 0;
        }
        self.failed.insert(key);
        false
    }
}

/// Staffs every configuration occurrence with the lowest-index unused
/// member of each part's class.
pub fn reconstruct_teams(inst: &Instance, x: &ConfigCountVector) -> Result<TeamSet> {
    reconstruct_from_classes(&inst.class_partition(), x)
}

fn reconstruct_from_classes(classes: &ClassPartition, x: &ConfigCountVector) -> Result<TeamSet> {
    let mut cursor: BTreeMap<ResourceSet, usize> = BTreeMap::new();
    let mut teams = Vec::with_capacity(x.total());
    for (config, count) in &x.counts {
        for _ in 0..*count {
            let mut team: Vec<UserId> = Vec::with_capacity(config.parts.len());
            for &part in &config.parts {
                let next = cursor.entry(part).or_insert(0);
                let user = classes.class(part).get(*next).copied().ok_or_else(|| {
                    Error::Internal(format!(
                        "class {part:?} exhausted while staffing configurations"
                    ))
                })?;
                *next += 1;
                team.push(user);
            }
            teams.push(team);
        }
    }
    Ok(TeamSet::new(teams))
}

/// Decides `res(P, 0, d, t)` (any `s` is treated as 0) through the
/// configuration program.
///
/// Only inclusion-minimal configurations enter the search: a team using a
/// non-minimal one can drop a part, so feasibility is unchanged.
pub fn ilp_solve(inst: &Instance, budgets: &Budgets) -> Result<Verdict> {
    let start = Instant::now();
    let configs: Vec<Configuration> = enumerate_configurations(inst, budgets)?
        .into_iter()
        .filter(Configuration::is_minimal)
        .collect();
    let classes = inst.class_partition();
    let capacities: BTreeMap<ResourceSet, usize> = classes
        .iter()
        .filter(|(c, _)| !c.is_empty())
        .map(|(c, users)| (c, users.len()))
        .collect();
    let (found, nodes) = ilp_search(&configs, &capacities, inst.policy().d);
    let stats = Stats {
        algorithm: "ilp".into(),
        nodes,
        states: configs.len() as u64,
        elapsed: start.elapsed(),
    };
    match found {
        Some(x) => {
            let teams = reconstruct_from_classes(&classes, &x)?;
            Ok(Verdict::sat(
                Some(teams),
                Stats {
                    elapsed: start.elapsed(),
                    ..stats
                },
            ))
        }
        None => Ok(Verdict::unsat(BlockerSet::default(), stats)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::{verify_witness, Answer, TeamBound};

    fn rs(ix: &[usize]) -> ResourceSet {
        ResourceSet::from_indices(ix.iter().copied())
    }

    fn inst(m: usize, lists: &[&[usize]], d: usize, t: usize) -> Instance {
        Instance::from_lists(m, lists, 0, d, TeamBound::Finite(t))
            .unwrap()
            .normalize()
            .unwrap()
    }

    fn cfg(parts: &[&[usize]]) -> Configuration {
        Configuration::new(parts.iter().map(|p| rs(p)).collect())
    }

    /// Independent enumeration: every subset family of the available
    /// classes, filtered by size and union, then sorted.
    fn brute_configurations(
        available: &[ResourceSet],
        target: ResourceSet,
        t: usize,
    ) -> Vec<Configuration> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << available.len()) {
            let parts: Vec<ResourceSet> = (0..available.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| available[i])
                .collect();
            let union = parts.iter().fold(ResourceSet::EMPTY, |a, &b| a | b);
            if parts.len() <= t && union == target {
                out.push(Configuration::new(parts));
            }
        }
        out.sort_by(|a, b| {
            a.parts
                .len()
                .cmp(&b.parts.len())
                .then_with(|| a.parts.cmp(&b.parts))
        });
        out
    }

    #[test]
    fn enumerate_examples() {
        let b = Budgets::default();
        let i = inst(1, &[&[0]], 1, 1);
        assert_eq!(
            enumerate_configurations(&i, &b).unwrap(),
            vec![cfg(&[&[0]])]
        );

        let i = inst(2, &[&[0], &[1], &[0, 1]], 1, 2);
        let got = enumerate_configurations(&i, &b).unwrap();
        let expected = vec![
            cfg(&[&[0, 1]]),
            cfg(&[&[0], &[1]]),
            cfg(&[&[0], &[0, 1]]),
            cfg(&[&[1], &[0, 1]]),
        ];
        assert_eq!(got, expected);
        assert_eq!(
            got,
            brute_configurations(&[rs(&[0]), rs(&[1]), rs(&[0, 1])], rs(&[0, 1]), 2)
        );

        let i = inst(2, &[&[0], &[1]], 1, 1);
        assert!(enumerate_configurations(&i, &b).unwrap().is_empty());
    }

    #[test]
    fn enumerate_matches_brute_force_on_denser_classes() {
        let lists: Vec<Vec<usize>> = (1u64..8)
            .map(|mask| ResourceSet::from_bits(mask).iter().collect())
            .collect();
        let refs: Vec<&[usize]> = lists.iter().map(Vec::as_slice).collect();
        let i = inst(3, &refs, 1, 3);
        let available: Vec<ResourceSet> = (1u64..8).map(ResourceSet::from_bits).collect();
        assert_eq!(
            enumerate_configurations(&i, &Budgets::default()).unwrap(),
            brute_configurations(&available, ResourceSet::full(3), 3)
        );
    }

    #[test]
    fn feasible_examples() {
        let one = vec![cfg(&[&[0]])];
        let caps = BTreeMap::from([(rs(&[0]), 2)]);
        let x = ilp_feasible(&one, &caps, 2).unwrap();
        assert_eq!(x.count_of(&one[0]), 2);

        let caps = BTreeMap::from([(rs(&[0]), 1)]);
        assert_eq!(ilp_feasible(&one, &caps, 2), None);

        let configs = vec![
            cfg(&[&[0, 1]]),
            cfg(&[&[0], &[1]]),
            cfg(&[&[0], &[0, 1]]),
            cfg(&[&[1], &[0, 1]]),
        ];
        let caps = BTreeMap::from([(rs(&[0, 1]), 1), (rs(&[0]), 1), (rs(&[1]), 1)]);
        let x = ilp_feasible(&configs, &caps, 2).unwrap();
        assert_eq!(x.count_of(&configs[0]), 1);
        assert_eq!(x.count_of(&configs[1]), 1);
        assert_eq!(x.total(), 2);
    }

    #[test]
    fn feasible_agrees_with_exhaustive_count_vectors() {
        let configs = vec![
            cfg(&[&[0, 1]]),
            cfg(&[&[0], &[1]]),
            cfg(&[&[0], &[0, 1]]),
            cfg(&[&[1], &[0, 1]]),
        ];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let caps = BTreeMap::from([(rs(&[0, 1]), a), (rs(&[0]), b), (rs(&[1]), c)]);
                    for d in 1..4 {
                        let mut exists = false;
                        for x in itertools::iproduct!(0..=d, 0..=d, 0..=d, 0..=d) {
                            let xs = [x.0, x.1, x.2, x.3];
                            if xs.iter().sum::<usize>() != d {
                                continue;
                            }
                            let ok = caps.iter().all(|(&class, &cap)| {
                                configs
                                    .iter()
                                    .zip(xs)
                                    .filter(|(cf, _)| cf.involves(class))
                                    .map(|(_, v)| v)
                                    .sum::<usize>()
                                    <= cap
                            });
                            exists |= ok;
                        }
                        assert_eq!(
                            ilp_feasible(&configs, &caps, d).is_some(),
                            exists,
                            "caps {caps:?} d {d}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn reconstruct_examples() {
        let i = inst(2, &[&[0, 1]], 1, 2);
        let x = ConfigCountVector {
            counts: vec![(cfg(&[&[0, 1]]), 1)],
        };
        assert_eq!(reconstruct_teams(&i, &x).unwrap().teams, vec![vec![0]]);

        let i = inst(2, &[&[0, 1], &[0], &[1]], 2, 2);
        let x = ConfigCountVector {
            counts: vec![(cfg(&[&[0, 1]]), 1), (cfg(&[&[0], &[1]]), 1)],
        };
        let teams = reconstruct_teams(&i, &x).unwrap();
        assert_eq!(teams.teams, vec![vec![0], vec![1, 2]]);
        assert!(verify_witness(
            &i,
            &Verdict::sat(Some(teams), Stats::default())
        ));

        let x = ConfigCountVector {
            counts: vec![(cfg(&[&[0, 1]]), 2)],
        };
        assert!(matches!(reconstruct_teams(&i, &x), Err(Error::Internal(_))));
    }

    #[test]
    fn solve_examples() {
        let b = Budgets::default();
        assert_eq!(
            ilp_solve(&inst(2, &[&[0], &[1]], 1, 2), &b).unwrap().answer,
            Answer::Sat
        );
        assert_eq!(
            ilp_solve(&inst(2, &[&[0], &[1]], 1, 1), &b).unwrap().answer,
            Answer::Unsat
        );
        let i = inst(2, &[&[0, 1], &[0], &[1]], 2, 2);
        let v = ilp_solve(&i, &b).unwrap();
        assert_eq!(v.answer, Answer::Sat);
        assert!(verify_witness(&i, &v));
    }

    #[test]
    fn minimality() {
        assert!(cfg(&[&[0], &[1]]).is_minimal());
        assert!(!cfg(&[&[0], &[0, 1]]).is_minimal());
        assert!(cfg(&[&[0, 1]]).is_minimal());
    }

    #[test]
    fn class_budget() {
        let b = Budgets {
            max_classes: 2,
            ..Budgets::default()
        };
        assert!(ilp_solve(&inst(2, &[&[0, 1]], 1, 1), &b)
            .unwrap_err()
            .is_budget());
    }
}
