//! Hamiltonian-style analysis of L2-normalized embedding spaces.
//!
//! Embeddings live on the unit sphere, so every state `b` can be written as a
//! perturbation `-a + Δ` of the maximally dissimilar partner of another state
//! `a`, or as the image `b = H a` of a transition operator. This crate
//! implements both views:
//!
//! - [`embedding`]: unit vectors and cosine similarity
//! - [`perturbation`]: norm-preserving perturbations and their closed-form similarities
//! - [`transitions`]: Householder transition operators and direct/indirect paths
//! - [`spectral`]: the shifted Hamiltonian `H′` and its rank-1 eigenbasis
//! - [`dynamics`]: phase evolution of eigenbasis coefficients and the zero-point analogue
//! - [`symmetry`]: parity and plane-rotation operators
//! - [`io`], [`config`], [`report`]: file format, run settings and command reports

pub mod config;
pub mod dynamics;
pub mod embedding;
pub mod error;
pub mod io;
pub mod linalg;
pub mod perturbation;
pub mod report;
pub mod spectral;
pub mod symmetry;
pub mod synthetic;
pub mod transitions;

pub use config::RunConfig;
pub use dynamics::{evolve, expectation, schrodinger_residual, trajectory, zero_point, QuantumState, ZeroPointResult};
pub use embedding::{
    cosine_similarity, maximally_dissimilar, transform_similarity, EmbeddingVector, SimilarityScore,
    TransformedSimilarity,
};
pub use error::{Error, ErrorKind, Result};
pub use io::{load_embeddings, EmbeddingFile};
pub use linalg::Matrix;
pub use perturbation::{
    chain_perturbations, constraint_residual, general_similarity, similarity_from_delta, smallest_perturbation,
    solve_two_dim, PerturbationProfile, PerturbationResult,
};
pub use spectral::{
    build_rank_one, diagonalize, first_perturbation_matrix, h_prime_from_h, project_state,
    second_perturbation_matrix, RankOneHamiltonian, SpectralDecomposition,
};
pub use symmetry::{
    apply_parity, apply_rotation, expectation_shift, verify_swap_decomposition, ParityOperator, RotationOperator,
    SymmetryOperator,
};
pub use transitions::{
    apply, change_of_basis, compose_indirect, hamiltonian_constraint, householder_transition, quadratic_similarity,
    run_indirect_experiment, symmetrize, OperatorKind, TransitionOperator, TransitionReport,
};
