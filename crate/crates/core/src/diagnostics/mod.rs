//! Error measures, reference runs, reflection coefficients and entropy.

pub mod entropy;
pub mod metrics;
pub mod quadrature;
pub mod reference;
pub mod reflection;

pub use metrics::{error_abc, error_num, Trajectory};
pub use reference::{reference_solution, PistonProblem, Reference};
pub use reflection::{reflection_theory, ReflectionExperiment, ReflectionRecord};
