//! Exact algorithms for the `s = 0` case: does a set of teams exist?

pub mod dp;
pub mod ilp;
pub mod setcover;

pub use dp::dp_solve;
pub use ilp::{
    enumerate_configurations, ilp_feasible, ilp_solve, reconstruct_teams, ConfigCountVector,
    Configuration,
};
pub use setcover::setcover_d1;
