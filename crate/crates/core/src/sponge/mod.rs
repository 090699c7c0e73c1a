//! Sponge-layer absorbing boundary conditions.

pub mod config;
pub mod method;
pub mod operators;
pub mod profile;
pub mod relax;

pub use config::SpongeConfig;
pub use method::AbcMethod;
pub use profile::{gamma_a, gamma_b, phi, ProfileKind};
