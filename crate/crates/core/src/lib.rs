//! Multi-time wave functions for `N` massless Dirac particles in one spatial
//! dimension, interacting only through boundary conditions where two
//! particles meet.
//!
//! The solution is known in closed form: every component is a phase times
//! the initial data evaluated at the sorted characteristic values. The crate
//! evaluates it, checks it against an independent tracing engine, integrates
//! the conserved current over space-like hypersurfaces, applies Lorentz
//! boosts and studies the effective single-time picture.

pub mod analysis;
pub mod error;
pub mod field;
pub mod geometry;
pub mod initial;
pub mod lorentz;
pub mod model;
pub mod phases;
pub mod sampling;
pub mod solver;
pub mod trace;

pub use error::{Error, Result};
pub use field::SpinorField;
pub use geometry::{Hypersurface, IntegralOptions};
pub use initial::InitialData;
pub use lorentz::Boost;
pub use model::{classify, Classification, Configuration, Event, ModelParams, SpinIndex};
pub use phases::{phase, sort_permutation, Permutation};
pub use solver::WaveFunction;

pub use num_complex::Complex64;
