//! Applications built on the simulator: integral files, lattice models,
//! gate counting and the experiment drivers behind the CLI.

pub mod fcidump;
pub mod gate_count;
pub mod hubbard;
pub mod kqd;
pub mod trotter_error;

pub use fcidump::{hartree_fock_energy, parse_fcidump, write_fcidump, Fcidump};
pub use gate_count::{count_two_qubit_gates, CircuitPlan, Mask, PlanOp};
pub use hubbard::{build_hubbard, filling_sector, parse_filling, HubbardSpec};
pub use kqd::{
    krylov_diagonalize, lowest_generalized_eigenvalue, KrylovConfig, KrylovEstimate, KrylovEvolution,
    DEFAULT_OVERLAP_THRESHOLD,
};
pub use trotter_error::{log_log_slope, trotter_error_experiment, trotter_gate_count, TrotterErrorRecord};
