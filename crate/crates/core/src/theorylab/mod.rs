//! Executable versions of the objects used in the finite-time argument:
//! the two-state bounding chain and its hitting time, the coupling that
//! keeps the true increments below it, the lattice of reachable penalty
//! vectors under rational frequencies, and an irreducibility smoke test.

mod banded;
mod bounding;
mod coupling;
mod hitting;
mod irreducibility;
mod lattice;

pub use bounding::{simulate_bounding_chain, BoundingSummary, Increment, TwoStateChain};
pub use coupling::{
    coupled_pair_step, estimate_conditional_law, find_threshold, run_coupling, ConditionalLaw, CoupledState,
    CouplingProbabilities, CouplingReport,
};
pub use hitting::{
    commensurate_levels, expected_hitting_time, monte_carlo_hitting_time, sample_hitting_time, HittingEstimate,
};
pub use irreducibility::{irreducibility_smoke_test, IrreducibilityReport, PathRealization};
pub use lattice::{lattice_path, verify_path, zero_return_path, LatticePoint, RationalFrequencies};
