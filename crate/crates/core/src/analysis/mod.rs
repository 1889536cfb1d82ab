//! Single-time picture, entanglement and the minimum-distance domain.

pub mod alpha;
pub mod delta;
pub mod entangle;
pub mod single_time;

pub use alpha::{
    alpha_bc_uniqueness_note, alpha_contradiction_demo, alpha_points, AlphaContradiction, AlphaInstance,
    AlphaPoints, AlphaProfile, AlphaSolution,
};
pub use delta::{delta_bc_check, DeltaReport, DeltaSample};
pub use entangle::{heaviside_component, schmidt_rank, GridSpec, SchmidtReport};
pub use single_time::{chi, chi_uv, uv_from_z, z_from_uv, SingleTimeState};
