//! Numerical core for cooperative control-and-noise quantum metrology.
//!
//! The crate simulates one- and two-spin probes whose dynamics follow a
//! time-independent Lindblad master equation, and evaluates how much
//! information the final state carries about the longitudinal field `B_z`
//! through the quantum Fisher information (QFI).
//!
//! Layout:
//!
//! * [`linalg`]: dense complex matrices, Pauli operators, a cyclic Jacobi
//!   eigensolver for Hermitian matrices and a Padé matrix exponential.
//! * [`lindblad`]: master-equation models, Liouvillian superoperators and
//!   propagation (matrix exponential, with an RK4 cross-check).
//! * [`qfi`]: pure-state, qubit closed-form and spectral SLD QFI, plus
//!   finite-difference differentiation of parameter-to-state pipelines.
//! * [`scenarios`]: the physical setups (standard and cooperative schemes)
//!   together with their analytic reference formulas.
//! * [`sweep`]: parameter sweeps, region detection and QFI maximization.
//!
//! Conventions: `ħ = 1`, `σ_z|0⟩ = +|0⟩`, and density matrices are
//! vectorized by stacking columns.

pub mod error;
pub mod lindblad;
pub mod linalg;
pub mod qfi;
pub mod scenarios;
pub mod sweep;

pub use error::{Error, Result};
pub use lindblad::{DensityMatrix, LindbladChannel, LindbladModel};
pub use linalg::{ComplexMatrix, HermitianEigensystem, StateVector};
pub use num_complex::Complex64;
pub use qfi::{QfiMethod, QfiResult};
pub use scenarios::{ScenarioKind, ScenarioSpec, TradeoffPoint};
pub use sweep::{RegionResult, SweepAxis, SweepGrid, SweepPoint};
