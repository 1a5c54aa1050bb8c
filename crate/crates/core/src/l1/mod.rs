//! Basis pursuit, a brute-force sparse oracle and restricted isometry estimates.

mod map;
mod oracle;
mod rip;
mod solver;

pub use map::{adjoint_mismatch, DenseMatrix, LinearMap};
pub use oracle::{
    brute_force_bp, ORACLE_FEASIBILITY, ORACLE_MAX_COLS, ORACLE_MAX_ROWS, ORACLE_MAX_SPARSITY,
};
pub use rip::{
    rip_constant, rip_constant_sampled, weighted_matrix, RipEstimate, RipKind, RIP_MAX_COLS,
    RIP_MAX_SPARSITY,
};
pub use solver::{basis_pursuit, l1_norm, SolverOptions, SolverReport};
