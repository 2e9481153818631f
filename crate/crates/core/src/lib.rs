//! Multilevel sparse-grid kernel collocation on the unit hypercube.
//!
//! The solver approximates linear elliptic (`Δu = f`) and parabolic
//! (`u_t − Δu = f`, time treated as an extra coordinate) problems with
//! anisotropic tensor-product multiquadric or Gaussian kernels.
//!
//! The pieces stack bottom-up:
//!
//! * [`grid`] builds anisotropic uniform grids, the combination-technique
//!   decomposition of a sparse grid and Halton test sets.
//! * [`basis`] evaluates the 1-D kernels, their derivatives and the tensor
//!   products, and applies the PDE operator to a single basis term.
//! * [`collocation`] assembles and solves one Kansa system per subgrid, backed
//!   by the dense LU in [`linalg`].
//! * [`sik`] combines subgrid solutions into a single-level sparse solution.
//! * [`musik`] runs the multilevel residual-correction loop.
//! * [`extrapolation`] accelerates consecutive multilevel iterates.
//! * [`problems`] holds the benchmark PDEs and a manufactured-solution helper.
//! * [`harness`] runs whole experiments and writes convergence tables.

pub mod basis;
pub mod collocation;
pub mod error;
pub mod extrapolation;
pub mod grid;
pub mod harness;
pub mod linalg;
pub mod musik;
pub mod problems;
pub mod sik;

pub use basis::{BasisFamily, BasisKind, ShapeVector};
pub use collocation::{OperatorKind, SubgridSolution};
pub use error::{Error, Result};
pub use grid::{CombinationTerm, MultiIndex, NodeClass, UniformGrid};
pub use harness::{ErrorMetric, ExperimentConfig, LevelReport};
pub use musik::MusikSolution;
pub use problems::PdeProblem;
pub use sik::SikSolution;

/// Largest supported dimension (space plus time).
pub const MAX_DIM: usize = 4;
