//! Partitioned Dirichlet-Neumann coupling of two heat equations.
//!
//! The left subdomain `[-1, 0]` is discretized with cell-centred finite
//! volumes, the right subdomain `[0, 1]` with linear finite elements, and
//! both are advanced with implicit Euler. The crate provides
//!
//! * the subdomain block matrices and the monolithic one-step system
//!   ([`discretization_1d`]),
//! * the Dirichlet-Neumann fixed-point iteration, a monolithic reference
//!   solve and convergence-rate estimators ([`dn_solver`]),
//! * the closed-form spectral radius of the interface iteration together
//!   with Schur-complement oracles, the semidiscrete estimator and the
//!   asymptotic limits ([`rate_theory`]),
//! * a two-dimensional version of the model problem on structured grids
//!   with arbitrary aspect ratio ([`model_2d`]),
//! * sweep/table drivers producing CSV output ([`experiments`]).

pub mod discretization_1d;
pub mod dn_solver;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod materials;
pub mod model_2d;
mod partitioned;
pub mod rate_theory;

pub use discretization_1d::{
    assemble, build_fem_blocks, build_fvm_blocks, CoupledSystem, GridSpec1D, SubdomainBlocks,
    SubdomainKind,
};
pub use dn_solver::{
    dn_time_step, monolithic_step, observed_rate, reference_rate, DNConfig, InterfaceInit,
    IterationTrace, StateVector,
};
pub use error::{Error, Result};
pub use linalg::{solve_tridiagonal, TridiagonalMatrix};
pub use materials::Material;
pub use rate_theory::{RateInputs, RateReport};
