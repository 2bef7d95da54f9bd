//! Exact decision procedures for access-control resiliency.
//!
//! An authorization policy `UR ⊆ U × R` satisfies the resiliency policy
//! `res(P, s, d, t)` if, after removing any `s` users, there are still `d`
//! pairwise disjoint teams of at most `t` users, each of which is
//! collectively authorized for every resource in `P`.
//!
//! The crate provides
//!
//! * [`policy`]: instances, witnesses and witness checking,
//! * [`oracle`]: brute-force reference solvers,
//! * [`s0`]: the `s = 0` solvers (team DP, configuration ILP, set cover),
//! * [`general`]: blocker branching, the class-count search, the
//!   `d = 1, t = ∞` fast path and a strategy dispatcher,
//! * [`kernel`]: user reduction to at most `d·p` users for `s = 0, t = ∞`,
//! * [`generators`]: instances built from Hitting Set, 3-Dimensional
//!   Matching, Domatic Partition and Set Cover, plus seeded random ones,
//! * [`io`]: the JSON instance and verdict formats,
//! * [`sweep`]: exhaustive and random cross-checks of every solver against
//!   the oracle.

pub mod bits;
pub mod error;
pub mod general;
pub mod generators;
pub mod io;
pub mod kernel;
pub mod oracle;
pub mod policy;
pub mod s0;
pub mod sweep;

pub use bits::ResourceSet;
pub use error::{Error, Result};
pub use general::{solve, S0Solver, Strategy};
pub use policy::{
    verify_witness, Answer, BlockerSet, Budgets, ClassPartition, Instance, Policy, Stats,
    TeamBound, TeamSet, UserId, Verdict, Witness,
};
