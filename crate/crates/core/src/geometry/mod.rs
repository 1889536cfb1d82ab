//! Currents, hypersurfaces and probability integrals.

pub mod current;
pub mod hypersurface;
pub mod integral;
pub mod quadrature;

pub use current::{current, CurrentTensor};
pub use hypersurface::{Hypersurface, TanhKink};
pub use integral::{
    boundary_flux_check, continuity_residual, norm_distance, surface_integral, FluxReport, IntegralOptions,
    SurfaceIntegral,
};
pub use quadrature::{integrate_ordered, integrate_partition, partition, AdaptiveOptions, QuadratureResult};
