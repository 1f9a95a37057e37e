//! Exact solver for collecting weighted timed requests on a line with `k` robots.
//!
//! Requests become points in the α–β plane, robots become node-disjoint
//! dominance chains, and the optimum is a minimum-cost flow computed by
//! successive shortest paths over an implicit residual network.

pub mod geometry;
pub mod instance_io;
pub mod oracles;
pub mod rangemin;
pub mod residual;
pub mod solver;
pub mod uncross;
pub mod validate;

pub use geometry::{GridPoint, PointId, PointSet, Segment, Xy, Q};
pub use instance_io::{Instance, NormalizedInstance, Request, Schedule};
pub use residual::{Node, RelaxState, ResidualNetwork, SubNetworkView};
pub use solver::{solve, Solution, SolverConfig};
pub use uncross::PathCollection;
