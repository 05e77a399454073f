//! Distributed primal decomposition for constraint-coupled mixed-integer
//! linear programs.
//!
//! A network of agents cooperatively solves
//!
//! ```text
//!   min  sum_i  c_i' x_i
//!   s.t. sum_i  A_i x_i <= b          (coupling)
//!        x_i in X_i                   (local mixed-integer polyhedra)
//! ```
//!
//! by negotiating per-agent allocations of the shared resource over a
//! communication graph. The coupling constraint is tightened so that the
//! mixed-integer points recovered from the negotiated allocations are
//! feasible for the original problem, and a-posteriori suboptimality
//! bounds can be evaluated from the run data.
//!
//! Crate layout:
//! - [`problem`]: instance data model, validation, JSON I/O, random generator
//! - [`lp`]: dense two-phase primal simplex with dual extraction
//! - [`milp`]: branch-and-bound, brute-force oracle, pricing, lex-min recovery
//! - [`hull`]: enumeration of the extreme points of conv(X_i)
//! - [`restriction`]: row lower bounds, minimal-violation points, tightening amounts
//! - [`agent`]: per-node subproblem solve, allocation update, recovery
//! - [`network`]: graphs, the synchronous round engine, consensus primitives
//! - [`analysis`]: centralized references, Slater certificates, suboptimality bounds

pub mod agent;
pub mod analysis;
pub mod hull;
pub mod lp;
pub mod milp;
pub mod network;
pub mod problem;
pub mod restriction;
pub mod seeds;
