//! Solver for a neural field posed on dendritic cables.
//!
//! The state is a voltage `V(x, ξ, t)` where `x` runs along a 1D periodic
//! somatic layer and `ξ` along passive dendritic fibres attached to it.
//! Voltage diffuses and leaks along the fibres only, while somatic output is
//! fed back through a nonlocal coupling
//!
//! ```text
//! ∂t V = (−γ + ν ∂ξξ) V + ∫ w(|x−y|) δε(ξ−ξ0) δε(η) S(V(y,η,t)) dy dη + G
//! ```
//!
//! on the cylinder `(−Lx, Lx] × [−Lξ, Lξ]` with periodic conditions in `x`
//! and Neumann conditions in `ξ`.
//!
//! Time stepping is first-order IMEX: the stiff cable operator is treated
//! with backward Euler, the nonlocal term explicitly. Because diffusion acts
//! only along `ξ`, each step reduces to `n_x` tridiagonal solves with a
//! factorization computed once, and the nonlocal term is a circular
//! convolution in `x` evaluated with FFTs in `O(n_x n_ξ + n_x log n_x)`
//! operations per step.
//!
//! Module map:
//! - [`grid`]: somato-dendritic grid and trapezium quadrature weights.
//! - [`model`]: firing rates, somatic kernels, dendritic contact profiles.
//! - [`linop`]: dendritic Laplacian, the implicit matrix `A`, tridiagonal LU.
//! - [`nonlocal`]: the coupling term, via direct quadrature (reference), FFT,
//!   or a compact-support fast path.
//! - [`stepper`]: the IMEX loop in matrix form and in a flat vector reference
//!   form, with operation counters.
//! - [`analysis`]: travelling-front speed (implicit equation + level-set
//!   measurement) and static Turing onset (dispersion relation).

pub mod analysis;
pub mod error;
pub mod grid;
pub mod linop;
pub mod matrix;
pub mod model;
pub mod nonlocal;
pub mod stepper;

pub use error::{Error, Result};
pub use grid::{Grid, QuadratureWeights};
pub use matrix::Mat;
pub use model::{DendriticDelta, FiringRate, PhysicalParams, SomaticKernel};
pub use nonlocal::NonlocalPlan;
pub use stepper::{
    Evaluator, FieldState, ForcingSpec, InitialCondition, RunRecord, SimSetup, StepCounters,
};
