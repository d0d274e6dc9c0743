//! Numerical laboratory for matrix-valued stochastic flows and their
//! spectral limits.
//!
//! The crate simulates generalized Wishart-type matrix flows and the
//! interacting particle systems their eigenvalues satisfy, builds empirical
//! spectral measures, and verifies the closed-form limit transforms
//! (semicircle, Marchenko-Pastur and its beta variant) through residual
//! functionals, distributional distances and principal-value checks.
//!
//! Modules:
//!
//! - [`catalog`]: coefficient models and the name-keyed family registry;
//! - [`rng`]: deterministic splittable Gaussian streams;
//! - [`matrix`]: matrix-valued sampling, the flow stepper and the Jacobi
//!   eigensolver;
//! - [`particles`]: the adaptive particle integrator and the
//!   unit-diffusion coordinate change;
//! - [`measures`]: empirical spectral measures and distribution distances;
//! - [`laws`]: closed-form limit laws, residual functionals and the
//!   discrete Hilbert transform;
//! - [`io`]: CSV writers for the numeric types.

pub mod catalog;
pub mod io;
pub mod laws;
pub mod matrix;
pub mod measures;
pub mod particles;
pub mod rng;

pub use catalog::{
    make_beta_laguerre, make_dyson, make_wishart, normalize_model, CoefficientModel,
    LimitCoefficients, ModelKind, ModelParams, ModelRegistry,
};
pub use laws::{
    beta_mp_stieltjes, density_equation_residual, hilbert_transform, invert_to_density,
    law_from_name, limit_equation_residual, mp_stieltjes, pde_residual, self_similar_residual,
    semicircle_stieltjes, LawFamily, LimitLaw, ResidualReport,
};
pub use matrix::{
    eigendecompose, sample_symmetric_brownian, sample_wishart, step_matrix_sde,
    SpectralDecomposition, SymmetricMatrixState,
};
pub use measures::{two_sample_ks, EmpiricalMeasure};
pub use particles::{
    drift, simulate, step_em, LampertiMap, ParticleState, ParticleStatus, ParticleTrajectory,
    SimMode,
};
pub use rng::GaussianStream;
