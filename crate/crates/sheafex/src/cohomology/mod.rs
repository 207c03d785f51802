//! Cochains, coboundaries, cohomology orders and exact coboundary and
//! cosystolic expansion of sheaves on graphs.

mod bounds;
mod cochain;
mod compiled;
mod cycle_solver;
mod expansion;

pub use bounds::{regular_graph_bound, remark42_convert, theorem_bound, theorem_bound_for, BoundInputs, Remark42Claim, TheoremBound};
pub use cochain::{coboundary, normalize, support_norm, Cochain};
pub use cycle_solver::solve_cycle_cocycle;
pub use expansion::{
    cb0, cohomology_spaces, cosystolic_check, dist_to_b0, Cb0Result, CohomologySummary, CosystolicReport, Expansion,
    z0_cochains, DEFAULT_CB0_BUDGET,
};

#[cfg(test)]
mod tests;
