//! Finite-volume solver for the one-dimensional Lagrangian gas dynamics
//! equations and their linearization, with sponge-layer absorbing boundaries.

// `!(x > 0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod diagnostics;
pub mod equations;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod linalg;
pub mod riemann;
pub mod scalar;
pub mod simulation;
pub mod sponge;
pub mod timestepping;

pub use equations::{EquationSystem, SystemKind};
pub use error::{Error, Result};
pub use grid::{FieldGrid, Grid1D};
pub use linalg::{ConservedState, Mat3};
pub use scalar::Real;

pub type State = ConservedState<f64>;
pub type Equations = EquationSystem<f64>;
pub type Field = FieldGrid<f64>;
