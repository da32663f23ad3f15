//! Two-qubit dynamics under a shared (global) thermal bath.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: small dense complex matrices, a cyclic Jacobi Hermitian
//!   eigensolver and PSD square roots.
//! - [`params`]: bath, geometry and memory inputs together with the derived
//!   quantities (Planck occupation, collective decay ratio `a`, coherent
//!   coupling, damping-basis spectrum, memory factor).
//! - [`lindblad`]: the full 4x4 local/global Lindblad generator, a fixed-step
//!   RK4 integrator and the reduced four-component X-state equations.
//! - [`xstate`]: the symmetric X-state family, its exact closed-form
//!   propagator and the literal published solution formulas.
//! - [`measures`]: l1 coherence, concurrence and quantum Fisher information,
//!   both as general matrix functions and as Werner-state closed forms.
//! - [`harness`]: configuration, CSV output, figure data, parameter sweeps
//!   and the validation/audit report used by the `collective-decay` binary.
//!
//! Basis ordering everywhere is `|00>, |01>, |10>, |11>` with
//! `sigma^- = |0><1|` acting on each factor.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod linalg;
pub mod lindblad;
pub mod measures;
pub mod params;
pub mod xstate;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use lindblad::{DensityMatrix, GeneratorSpec, Mode, Trajectory};
pub use measures::{FisherObservable, MeasureTriple};
pub use params::{BathSpec, GeometrySpec, MemorySpec};
pub use xstate::{SymXState, WernerParam};
