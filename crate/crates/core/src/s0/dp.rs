//! Team dynamic program over `d`-tuples of outstanding demands.
//!
//! A state holds, for every team `j`, the resources `S_j ⊆ P` it still has
//! to cover and the number of users already placed in it. Processing user
//! `u_i` either skips it or hands it to one team whose demand it shrinks.
//! The table is explored layer by layer from `(n; P, …, P; 0, …, 0)` down to
//! layer 0, and the query is satisfiable iff some reachable state has every
//! demand empty. The per-team counter keeps each team within `t` users.

use std::collections::HashSet;
use std::time::Instant;

use crate::bits::ResourceSet;
use crate::error::{Error, Result};
use crate::policy::{BlockerSet, Budgets, Instance, Stats, TeamSet, UserId, Verdict};

/// Bit layout of a packed state key.
#[derive(Clone, Copy, Debug)]
struct Layout {
    d: usize,
    p: usize,
    count_bits: usize,
}

impl Layout {
    fn width(&self) -> usize {
        self.p + self.count_bits
    }

    fn total_bits(&self) -> usize {
        self.d * self.width()
    }

    fn demand(&self, key: u64, j: usize) -> u64 {
        (key >> (j * self.width())) & ((1u64 << self.p) - 1)
    }

    fn count(&self, key: u64, j: usize) -> usize {
        ((key >> (j * self.width() + self.p)) & ((1u64 << self.count_bits) - 1)) as usize
    }

    /// The key restricted to team `j`.
    fn block(&self, key: u64, j: usize) -> u64 {
        let w = self.width();
        (key >> (j * w)) & mask(w)
    }

    fn with_block(&self, key: u64, j: usize, demand: u64, count: usize) -> u64 {
        let w = self.width();
        let cleared = key & !(mask(w) << (j * w));
        cleared | ((demand | (count as u64) << self.p) << (j * w))
    }

    fn demands_empty(&self, key: u64) -> bool {
        (0..self.d).all(|j| self.demand(key, j) == 0)
    }
}

fn mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

#[derive(Clone, Copy)]
struct Node {
    key: u64,
    /// Index of the parent in the layer above.
    parent: u32,
    /// Team that received this layer's user, if any.
    team: Option<u8>,
}

/// Per-layer duplicate filter: a dense bitmap when keys fit in 24 bits,
/// a hash set otherwise.
enum Seen {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

impl Seen {
    fn new(total_bits: usize) -> Self {
        if total_bits <= 24 {
            Seen::Dense(vec![0; (1usize << total_bits).div_ceil(64)])
        } else {
            Seen::Sparse(HashSet::new())
        }
    }

    fn insert(&mut self, key: u64) -> bool {
        match self {
            Seen::Dense(words) => {
                let (w, b) = ((key >> 6) as usize, key & 63);
                let fresh = words[w] >> b & 1 == 0;
                words[w] |= 1 << b;
                fresh
            }
            Seen::Sparse(set) => set.insert(key),
        }
    }

    fn clear(&mut self, keys: impl Iterator<Item = u64>) {
        match self {
            Seen::Dense(words) => keys.for_each(|k| words[(k >> 6) as usize] = 0),
            Seen::Sparse(set) => set.clear(),
        }
    }
}

/// Decides `res(P, 0, d, t)` (any `s` is treated as 0).
///
/// `stats.states` counts distinct states in layers `n..1`, which is at most
/// `n · 2^{dp} · (t+1)^d`.
pub fn dp_solve(inst: &Instance, budgets: &Budgets) -> Result<Verdict> {
    inst.require_normalized()?;
    let start = Instant::now();
    let (n, p, d, t) = (inst.n(), inst.p(), inst.policy().d, inst.team_limit());
    if (d * p) as u64 > budgets.dp_bits as u64 {
        return Err(Error::BudgetExceeded {
            what: "dp state bit",
            needed: (d * p) as u64,
            limit: budgets.dp_bits as u64,
        });
    }
    let layout = Layout {
        d,
        p,
        count_bits: (usize::BITS - t.leading_zeros()) as usize,
    };
    if layout.total_bits() > 64 || d > u8::MAX as usize {
        return Err(Error::BudgetExceeded {
            what: "dp key bit",
            needed: layout.total_bits() as u64,
            limit: 64,
        });
    }

    let full = ResourceSet::full(p).bits();
    let root = (0..d).fold(0u64, |k, j| layout.with_block(k, j, full, 0));
    // layers[k] holds the states of DP layer n - k.
    let mut layers: Vec<Vec<Node>> = vec![vec![Node {
        key: root,
        parent: u32::MAX,
        team: None,
    }]];
    let mut seen = Seen::new(layout.total_bits());
    let mut stats = Stats::named("dp");

    for i in (1..=n).rev() {
        let user = i - 1;
        let gain_set = inst.user_resources(user).bits();
        let current = layers.last().expect("at least the root layer");
        stats.states += current.len() as u64;
        let mut next: Vec<Node> = Vec::new();
        let mut goal = None;

        'states: for (idx, node) in current.iter().enumerate() {
            let parent = idx as u32;
            if seen.insert(node.key) {
                next.push(Node {
                    key: node.key,
                    parent,
                    team: None,
                });
            }
            for j in 0..d {
                let demand = layout.demand(node.key, j);
                let count = layout.count(node.key, j);
                if demand == 0 || count >= t || demand & gain_set == 0 {
                    continue;
                }
                // Teams with identical blocks are interchangeable.
                if (0..j).any(|q| layout.block(node.key, q) == layout.block(node.key, j)) {
                    continue;
                }
                let rest = demand & !gain_set;
                if rest != 0 && count + 1 >= t {
                    continue;
                }
                let child = layout.with_block(node.key, j, rest, count + 1);
                if layout.demands_empty(child) {
                    goal = Some(Node {
                        key: child,
                        parent,
                        team: Some(j as u8),
                    });
                    break 'states;
                }
                if seen.insert(child) {
                    next.push(Node {
                        key: child,
                        parent,
                        team: Some(j as u8),
                    });
                }
            }
        }
        seen.clear(next.iter().map(|nd| nd.key));

        if let Some(goal) = goal {
            let teams = backtrack(&layers, goal, n, d);
            stats.elapsed = start.elapsed();
            return Ok(Verdict::sat(Some(teams), stats));
        }
        if next.is_empty() {
            break;
        }
        layers.push(next);
    }

    stats.elapsed = start.elapsed();
    Ok(Verdict::unsat(BlockerSet::default(), stats))
}

/// Walks parent links from `goal` (which lives one layer below the last
/// stored layer) back to the root, collecting team assignments.
fn backtrack(layers: &[Vec<Node>], goal: Node, n: usize, d: usize) -> TeamSet {
    let mut teams: Vec<Vec<UserId>> = vec![Vec::new(); d];
    let mut node = goal;
    // `goal` sits in DP layer n - layers.len(); its action concerns that user.
    let mut layer = layers.len();
    loop {
        let user = n - layer;
        if let Some(j) = node.team {
            teams[j as usize].push(user);
        }
        if node.parent == u32::MAX {
            break;
        }
        node = layers[layer - 1][node.parent as usize];
        layer -= 1;
    }
    TeamSet::new(teams)
}
