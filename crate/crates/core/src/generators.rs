//! Instance generators.
//!
//! Four families come from hardness reductions and carry the answer of the
//! source problem, computed by the small brute-force solvers at the bottom
//! of this module (which never touch the resiliency solvers):
//!
//! * δ-Hitting Set → `res(R, k, 1, δ+1)`, UNSAT iff a hitting set of size
//!   `≤ k` exists;
//! * 3-Dimensional Matching → `res(R, 0, k, 4)`, SAT iff `k` pairwise
//!   disjoint hyperedges exist;
//! * Domatic Partition → closed neighborhoods with `t = ∞`, SAT iff `k`
//!   disjoint dominating sets exist;
//! * Set Cover → `res(U, 0, 1, k)`, SAT iff `k` sets cover the universe.
//!
//! [`random_instance`] draws each pair `(u, r)` independently from a
//! ChaCha8 stream seeded with [`ChaCha8Rng::seed_from_u64`]; every draw is
//! a whole `u64`, so the output depends on the seed alone and not on the
//! platform.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bits::{ResourceSet, MAX_RESOURCES};
use crate::error::{Error, Result};
use crate::policy::{Answer, Instance, Policy, TeamBound};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Sat,
    Unsat,
    Unknown,
}

impl Expected {
    pub fn answer(self) -> Option<Answer> {
        match self {
            Expected::Sat => Some(Answer::Sat),
            Expected::Unsat => Some(Answer::Unsat),
            Expected::Unknown => None,
        }
    }

    fn from_sat(sat: bool) -> Self {
        if sat {
            Expected::Sat
        } else {
            Expected::Unsat
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub family: String,
    /// Family parameters and the source-problem data, in key order.
    pub params: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedInstance {
    pub instance: Instance,
    pub expected: Expected,
    pub provenance: Provenance,
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn check_resources(m: usize) -> Result<()> {
    if m > MAX_RESOURCES {
        return Err(Error::BudgetExceeded {
            what: "resource",
            needed: m as u64,
            limit: MAX_RESOURCES as u64,
        });
    }
    Ok(())
}

/// Builds an instance from explicit labels and per-user resource indices,
/// with `P = R`.
fn build(
    users: Vec<String>,
    resources: Vec<String>,
    auth: Vec<Vec<usize>>,
    s: usize,
    d: usize,
    t: TeamBound,
) -> Result<Instance> {
    check_resources(resources.len())?;
    let policy = Policy {
        resources: ResourceSet::full(resources.len()),
        s,
        d,
        t,
    };
    let auth = auth.into_iter().map(ResourceSet::from_indices).collect();
    Instance::with_labels(users, resources, auth, policy)
}

/// δ-Hitting Set over elements `0..n` with the given `δ`-sets.
///
/// Users are `U^V` (one per element) then `U^S` (one per set). Resources
/// are `R^V` (one `r^V_Q` per `(δ−1)`-subset `Q` of `U^V`, in
/// lexicographic order), then `P^j = {p^j_1, …, p^j_δ}` for every set `j`,
/// then `r*`. Each set keeps its input order, which fixes `S_j[x]`.
pub fn from_hitting_set(n: usize, sets: &[Vec<usize>], k: usize) -> Result<GeneratedInstance> {
    let delta = sets.first().map_or(2, Vec::len);
    if delta < 2 {
        return Err(Error::Precondition("hitting set needs δ >= 2".into()));
    }
    for set in sets {
        if set.len() != delta || !set.iter().all_unique() || set.iter().any(|&v| v >= n) {
            return Err(Error::Precondition(format!(
                "every set must hold {delta} distinct elements below {n}"
            )));
        }
    }
    let subsets: Vec<Vec<usize>> = (0..n).combinations(delta - 1).collect();
    check_resources(subsets.len() + sets.len() * delta + 1)?;

    let mut resources: Vec<String> = subsets
        .iter()
        .map(|q| format!("rV{{{}}}", q.iter().map(|i| i + 1).join(",")))
        .collect();
    let rs_base = resources.len();
    for j in 0..sets.len() {
        for x in 0..delta {
            resources.push(format!("p{}_{}", j + 1, x + 1));
        }
    }
    let r_star = resources.len();
    resources.push("r*".into());

    let mut users = Vec::new();
    let mut auth = Vec::new();
    for i in 0..n {
        users.push(format!("uV{}", i + 1));
        let mut set: Vec<usize> = subsets
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.contains(&i))
            .map(|(qi, _)| qi)
            .collect();
        for (j, s) in sets.iter().enumerate() {
            for (x, &v) in s.iter().enumerate() {
                if v == i {
                    set.push(rs_base + j * delta + x);
                }
            }
        }
        auth.push(set);
    }
    for j in 0..sets.len() {
        users.push(format!("uS{}", j + 1));
        let mut set = vec![r_star];
        set.extend(
            (0..sets.len())
                .filter(|&h| h != j)
                .flat_map(|h| (0..delta).map(move |x| rs_base + h * delta + x)),
        );
        auth.push(set);
    }
    let instance = build(users, resources, auth, k, 1, TeamBound::Finite(delta + 1))?;
    let hit = min_hitting_set(n, sets).is_some_and(|c| c.len() <= k);
    Ok(GeneratedInstance {
        instance,
        expected: Expected::from_sat(!hit),
        provenance: Provenance {
            family: "hitting-set".into(),
            params: params(&[
                ("n", json!(n)),
                ("delta", json!(delta)),
                ("k", json!(k)),
                ("sets", json!(sets)),
            ]),
            seed: None,
        },
    })
}

/// 3-Dimensional Matching on `X = Y = Z = 0..n` with hyperedges `(x, y, z)`.
///
/// Resources are `r^X_1..m`, `r^Y_1..m`, `r^Z_1..m`, `r_X`, `r_Y`, `r_Z`,
/// `r_*`; users are `U_X`, `U_Y`, `U_Z` (`n` each) and `U_*` (one per
/// hyperedge).
pub fn from_3dm(n: usize, edges: &[(usize, usize, usize)], k: usize) -> Result<GeneratedInstance> {
    if k == 0 {
        return Err(Error::Precondition(
            "3DM needs k >= 1 (it becomes d)".into(),
        ));
    }
    if edges.iter().any(|&(x, y, z)| x >= n || y >= n || z >= n) {
        return Err(Error::Precondition(format!(
            "hyperedge element out of range 0..{n}"
        )));
    }
    let m = edges.len();
    check_resources(3 * m + 4)?;
    let axes = ["X", "Y", "Z"];
    let mut resources = Vec::new();
    for axis in axes {
        resources.extend((1..=m).map(|j| format!("r{axis}{j}")));
    }
    resources.extend(["rX", "rY", "rZ", "r*"].map(String::from));
    let per_edge = |axis: usize, j: usize| axis * m + j;
    let axis_res = |axis: usize| 3 * m + axis;
    let star = 3 * m + 3;

    let mut users = Vec::new();
    let mut auth = Vec::new();
    for (axis, name) in axes.iter().enumerate() {
        for i in 0..n {
            users.push(format!("u{name}{}", i + 1));
            let mut set = vec![axis_res(axis)];
            for (j, e) in edges.iter().enumerate() {
                let coord = [e.0, e.1, e.2][axis];
                if coord == i {
                    set.push(per_edge(axis, j));
                }
            }
            auth.push(set);
        }
    }
    for j in 0..m {
        users.push(format!("u*{}", j + 1));
        let mut set = vec![star];
        set.extend((0..3).flat_map(|axis| {
            (0..m)
                .filter(move |&h| h != j)
                .map(move |h| per_edge(axis, h))
        }));
        auth.push(set);
    }
    let instance = build(users, resources, auth, 0, k, TeamBound::Finite(4))?;
    Ok(GeneratedInstance {
        instance,
        expected: Expected::from_sat(has_3d_matching(edges, k)),
        provenance: Provenance {
            family: "3dm".into(),
            params: params(&[("n", json!(n)), ("k", json!(k)), ("edges", json!(edges))]),
            seed: None,
        },
    })
}

/// Domatic Partition on a simple graph with vertices `0..n`.
pub fn from_domatic(n: usize, edges: &[(usize, usize)], k: usize) -> Result<GeneratedInstance> {
    if k == 0 {
        return Err(Error::Precondition("domatic partition needs k >= 1".into()));
    }
    if edges.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
        return Err(Error::Precondition(
            "edges must join two distinct vertices below n".into(),
        ));
    }
    let closed = closed_neighborhoods(n, edges);
    let users = (1..=n).map(|v| format!("v{v}")).collect();
    let resources = (1..=n).map(|v| format!("n{v}")).collect();
    let auth = closed.iter().map(|s| s.iter().collect()).collect();
    let instance = build(users, resources, auth, 0, k, TeamBound::Unbounded)?;
    Ok(GeneratedInstance {
        instance,
        expected: Expected::from_sat(has_domatic_partition(&closed, k)),
        provenance: Provenance {
            family: "domatic".into(),
            params: params(&[("n", json!(n)), ("k", json!(k)), ("edges", json!(edges))]),
            seed: None,
        },
    })
}

/// Set Cover of `0..universe` by `sets` with at most `k` sets.
pub fn from_set_cover(universe: usize, sets: &[Vec<usize>], k: usize) -> Result<GeneratedInstance> {
    if k == 0 {
        return Err(Error::Precondition(
            "set cover needs k >= 1 (it becomes t)".into(),
        ));
    }
    if sets.iter().flatten().any(|&e| e >= universe) {
        return Err(Error::Precondition(format!(
            "set element out of range 0..{universe}"
        )));
    }
    let users = (1..=sets.len()).map(|j| format!("S{j}")).collect();
    let resources = (1..=universe).map(|e| format!("e{e}")).collect();
    let instance = build(users, resources, sets.to_vec(), 0, 1, TeamBound::Finite(k))?;
    let masks: Vec<ResourceSet> = sets
        .iter()
        .map(|s| ResourceSet::from_indices(s.iter().copied()))
        .collect();
    let sat = min_set_cover(universe, &masks).is_some_and(|c| c <= k);
    Ok(GeneratedInstance {
        instance,
        expected: Expected::from_sat(sat),
        provenance: Provenance {
            family: "set-cover".into(),
            params: params(&[
                ("universe", json!(universe)),
                ("k", json!(k)),
                ("sets", json!(sets)),
            ]),
            seed: None,
        },
    })
}

/// Uniform random relation: each `(u, r)` is present with probability
/// `density`, users in order, resources in order within a user. `P = R`.
pub fn random_instance(
    seed: u64,
    n: usize,
    m: usize,
    density: f64,
    s: usize,
    d: usize,
    t: TeamBound,
) -> Result<GeneratedInstance> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Precondition(format!(
            "density {density} is outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let auth = (0..n)
        .map(|_| (0..m).filter(|_| unit(&mut rng) < density).collect())
        .collect();
    let users = (1..=n).map(|i| format!("u{i}")).collect();
    let resources = (1..=m).map(|i| format!("r{i}")).collect();
    let instance = build(users, resources, auth, s, d, t)?;
    Ok(GeneratedInstance {
        instance,
        expected: Expected::Unknown,
        provenance: Provenance {
            family: "random".into(),
            params: params(&[
                ("n", json!(n)),
                ("m", json!(m)),
                ("density", json!(density)),
                ("s", json!(s)),
                ("d", json!(d)),
                ("t", json!(t.to_string())),
            ]),
            seed: Some(seed),
        },
    })
}

/// A uniform float in `[0, 1)` from the top 53 bits of one `u64`.
fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `0..n` drawn through `u32`, so the stream is the same
/// on every pointer width.
fn below(rng: &mut impl Rng, n: usize) -> usize {
    rng.gen_range(0..n as u32) as usize
}

/// `k` distinct values from `0..n` in draw order.
fn distinct(rng: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + below(rng, n - i);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

/// Seeded δ-Hitting Set instance: `m` random δ-sets over `n ≥ δ` elements.
pub fn random_hitting_set(
    seed: u64,
    n: usize,
    delta: usize,
    m: usize,
    k: usize,
) -> Result<GeneratedInstance> {
    if n < delta {
        return Err(Error::Precondition(format!(
            "need n >= δ (n = {n}, δ = {delta})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<Vec<usize>> = (0..m).map(|_| distinct(&mut rng, n, delta)).collect();
    let mut g = from_hitting_set(n, &sets, k)?;
    g.provenance.seed = Some(seed);
    Ok(g)
}

/// Seeded 3DM instance with `m` uniform hyperedges over `n` elements per
/// axis.
pub fn random_3dm(seed: u64, n: usize, m: usize, k: usize) -> Result<GeneratedInstance> {
    if n == 0 && m > 0 {
        return Err(Error::Precondition("hyperedges need n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize, usize)> = (0..m)
        .map(|_| (below(&mut rng, n), below(&mut rng, n), below(&mut rng, n)))
        .collect();
    let mut g = from_3dm(n, &edges, k)?;
    g.provenance.seed = Some(seed);
    Ok(g)
}

/// Seeded domatic instance on `G(n, density)`.
pub fn random_domatic(seed: u64, n: usize, density: f64, k: usize) -> Result<GeneratedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = (0..n)
        .tuple_combinations()
        .filter(|_| unit(&mut rng) < density)
        .collect();
    let mut g = from_domatic(n, &edges, k)?;
    g.provenance.seed = Some(seed);
    Ok(g)
}

/// Seeded set cover instance: `m` sets, each element present with
/// probability `density`.
pub fn random_set_cover(
    seed: u64,
    universe: usize,
    m: usize,
    density: f64,
    k: usize,
) -> Result<GeneratedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<Vec<usize>> = (0..m)
        .map(|_| (0..universe).filter(|_| unit(&mut rng) < density).collect())
        .collect();
    let mut g = from_set_cover(universe, &sets, k)?;
    g.provenance.seed = Some(seed);
    Ok(g)
}

/// Smallest hitting set, lexicographically first among the smallest, or
/// `None` if some set is empty.
pub fn min_hitting_set(n: usize, sets: &[Vec<usize>]) -> Option<Vec<usize>> {
    (0..=n).find_map(|size| {
        (0..n)
            .combinations(size)
            .find(|c| sets.iter().all(|s| s.iter().any(|v| c.contains(v))))
    })
}

/// True if `k` pairwise disjoint hyperedges exist.
pub fn has_3d_matching(edges: &[(usize, usize, usize)], k: usize) -> bool {
    edges.iter().combinations(k).any(|chosen| {
        chosen.iter().map(|e| e.0).all_unique()
            && chosen.iter().map(|e| e.1).all_unique()
            && chosen.iter().map(|e| e.2).all_unique()
    })
}

pub fn closed_neighborhoods(n: usize, edges: &[(usize, usize)]) -> Vec<ResourceSet> {
    let mut closed: Vec<ResourceSet> = (0..n).map(ResourceSet::singleton).collect();
    for &(a, b) in edges {
        closed[a].insert(b);
        closed[b].insert(a);
    }
    closed
}

/// True if the vertices split into `k` dominating sets; tries every
/// colouring of the vertices with `k` colours.
pub fn has_domatic_partition(closed: &[ResourceSet], k: usize) -> bool {
    let n = closed.len();
    if k > n {
        return n == 0;
    }
    let all = ResourceSet::full(n);
    (0..n)
        .map(|_| 0..k)
        .multi_cartesian_product()
        .any(|colour| {
            let mut dominated = vec![ResourceSet::EMPTY; k];
            for (v, &c) in colour.iter().enumerate() {
                dominated[c] |= closed[v];
            }
            dominated.iter().all(|&dom| dom == all)
        })
}

/// Size of a smallest cover of `0..universe`, or `None` if none exists.
pub fn min_set_cover(universe: usize, sets: &[ResourceSet]) -> Option<usize> {
    let all = ResourceSet::full(universe);
    (0..=sets.len()).find(|&size| {
        sets.iter()
            .combinations(size)
            .any(|c| c.into_iter().fold(ResourceSet::EMPTY, |a, &b| a | b) == all)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;

    fn oracle(g: &GeneratedInstance) -> Answer {
        let inst = g.instance.normalize().unwrap();
        Oracle::unbounded().solve_rcp(&inst).unwrap().answer
    }

    #[test]
    fn hitting_set_examples() {
        let g = from_hitting_set(2, &[vec![0, 1]], 1).unwrap();
        assert_eq!(g.instance.n(), 3);
        assert_eq!(g.instance.m(), 5);
        assert_eq!(g.instance.policy().t, TeamBound::Finite(3));
        assert_eq!(g.instance.policy().s, 1);
        assert_eq!(g.expected, Expected::Unsat);
        assert_eq!(oracle(&g), Answer::Unsat);

        let g = from_hitting_set(2, &[vec![0, 1]], 0).unwrap();
        assert_eq!(g.expected, Expected::Sat);
        assert_eq!(oracle(&g), Answer::Sat);

        // Triangle: every hitting set needs two vertices.
        let g = from_hitting_set(3, &[vec![0, 1, 2]], 0).unwrap();
        assert_eq!(g.expected, Expected::Sat);
        let tri = [vec![0, 1], vec![1, 2], vec![0, 2]];
        let g = from_hitting_set(3, &tri, 1).unwrap();
        assert_eq!(g.expected, Expected::Sat);
        assert_eq!(oracle(&g), Answer::Sat);
        let g = from_hitting_set(3, &tri, 2).unwrap();
        assert_eq!(g.expected, Expected::Unsat);
        assert_eq!(oracle(&g), Answer::Unsat);
    }

    #[test]
    fn three_dm_examples() {
        let g = from_3dm(1, &[(0, 0, 0)], 1).unwrap();
        assert_eq!(g.expected, Expected::Sat);
        let v = Oracle::unbounded()
            .solve_rcp(&g.instance.normalize().unwrap())
            .unwrap();
        assert_eq!(v.answer, Answer::Sat);
        let team: Vec<&str> = v.teams().unwrap().teams[0]
            .iter()
            .map(|&u| g.instance.user_label(u))
            .collect();
        assert_eq!(team, ["uX1", "uY1", "uZ1", "u*1"]);

        let g = from_3dm(2, &[(0, 0, 0), (0, 1, 1)], 2).unwrap();
        assert_eq!(g.expected, Expected::Unsat);
        assert_eq!(oracle(&g), Answer::Unsat);

        assert!(from_3dm(1, &[(0, 0, 0)], 0).is_err());
        let g = from_3dm(2, &[(0, 0, 0), (1, 1, 1)], 2).unwrap();
        assert_eq!(
            (g.instance.policy().s, g.instance.policy().t),
            (0, TeamBound::Finite(4))
        );
    }

    #[test]
    fn domatic_examples() {
        let k3 = [(0, 1), (1, 2), (0, 2)];
        let g = from_domatic(3, &k3, 3).unwrap();
        assert_eq!(g.expected, Expected::Sat);
        assert_eq!(oracle(&g), Answer::Sat);

        // A leaf's closed neighborhood has two vertices, so two dominating
        // sets at most.
        let p3 = [(0, 1), (1, 2)];
        let g = from_domatic(3, &p3, 2).unwrap();
        assert_eq!(g.expected, Expected::Sat);
        assert_eq!(oracle(&g), Answer::Sat);
        let g = from_domatic(3, &p3, 3).unwrap();
        assert_eq!(g.expected, Expected::Unsat);
        assert_eq!(oracle(&g), Answer::Unsat);

        let g = from_domatic(4, &[(0, 1)], 1).unwrap();
        assert_eq!(g.expected, Expected::Sat);
    }

    #[test]
    fn set_cover_examples() {
        let sets = [vec![0], vec![1]];
        assert_eq!(from_set_cover(2, &sets, 2).unwrap().expected, Expected::Sat);
        assert_eq!(
            from_set_cover(2, &sets, 1).unwrap().expected,
            Expected::Unsat
        );

        let g = random_set_cover(3, 6, 5, 0.4, 1).unwrap();
        let masks: Vec<ResourceSet> = g.instance.auth().to_vec();
        if let Some(min) = min_set_cover(6, &masks) {
            let sets: Vec<Vec<usize>> = masks.iter().map(|m| m.iter().collect()).collect();
            let g = from_set_cover(6, &sets, min).unwrap();
            assert_eq!((g.expected, oracle(&g)), (Expected::Sat, Answer::Sat));
            if min > 1 {
                let g = from_set_cover(6, &sets, min - 1).unwrap();
                assert_eq!((g.expected, oracle(&g)), (Expected::Unsat, Answer::Unsat));
            }
        }
    }

    #[test]
    fn random_instance_examples() {
        let g = random_instance(1, 4, 3, 1.0, 1, 2, TeamBound::Finite(1)).unwrap();
        assert!(g.instance.auth().iter().all(|&a| a == ResourceSet::full(3)));
        assert_eq!(oracle(&g), Answer::Sat);

        let g = random_instance(1, 4, 3, 0.0, 0, 1, TeamBound::Unbounded).unwrap();
        assert!(g.instance.auth().iter().all(|a| a.is_empty()));
        assert_eq!(oracle(&g), Answer::Unsat);

        let a = random_instance(42, 6, 3, 0.5, 0, 1, TeamBound::Unbounded).unwrap();
        let b = random_instance(42, 6, 3, 0.5, 0, 1, TeamBound::Unbounded).unwrap();
        assert_eq!(a, b);
        assert!(random_instance(1, 1, 1, 1.5, 0, 1, TeamBound::Unbounded).is_err());
    }

    #[test]
    fn seeded_families_are_sound() {
        for seed in 0..20 {
            let g = random_hitting_set(seed, 4, 2, 3, (seed % 3) as usize).unwrap();
            assert_eq!(g.expected.answer(), Some(oracle(&g)), "{:?}", g.provenance);
            let g = random_3dm(seed, 2, 3, 1 + (seed % 2) as usize).unwrap();
            assert_eq!(g.expected.answer(), Some(oracle(&g)), "{:?}", g.provenance);
            let g = random_domatic(seed, 5, 0.5, 1 + (seed % 3) as usize).unwrap();
            assert_eq!(g.expected.answer(), Some(oracle(&g)), "{:?}", g.provenance);
        }
    }

    #[test]
    fn brute_forcers() {
        assert_eq!(min_hitting_set(3, &[vec![0, 1], vec![1, 2]]), Some(vec![1]));
        assert_eq!(min_hitting_set(2, &[]), Some(vec![]));
        assert!(has_3d_matching(&[(0, 0, 0), (1, 1, 1)], 2));
        assert!(!has_3d_matching(&[(0, 0, 0), (1, 0, 1)], 2));
        let path = closed_neighborhoods(3, &[(0, 1), (1, 2)]);
        assert!(has_domatic_partition(&path, 2));
        assert!(!has_domatic_partition(&path, 3));
        let isolated = closed_neighborhoods(2, &[]);
        assert!(!has_domatic_partition(&isolated, 2));
        let sets = [
            ResourceSet::from_indices([0, 1]),
            ResourceSet::from_indices([2]),
        ];
        assert_eq!(min_set_cover(3, &sets), Some(2));
        assert_eq!(min_set_cover(4, &sets), None);
    }
}
