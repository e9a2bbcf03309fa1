//! Lifting machinery: the PL lift of a tropical hypersurface, the trimming
//! of pairs of pants over cone ends, local models over vertices, edges and
//! top-dimensional cells, and assembly of the sampled smooth lift.

use alloc::string::String;

pub mod glue;
pub mod inner;
pub mod mesh;
pub mod models;
pub mod pl;
pub mod scene;
pub mod trim;

pub use mesh::{assemble_lift, AssembleOptions, LiftMesh, MeshPoint, ModelId};
pub use models::{choose_trimming, GluedModels, TrimmingConfig, TrimmingParameters, TrimmingReport};
pub use scene::Scene;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LiftError {
    /// The complex is not a smooth tropical hypersurface.
    NonSmooth,
    /// Root finding for a boundary-surface crossing found no bracket.
    TransversalityFailed,
    /// The trimming search could not satisfy a condition; carries its name.
    SearchFailed(String),
    ParamsNotAccepted,
    OverlapMismatch,
    UnsupportedView,
}

impl core::fmt::Display for LiftError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LiftError::NonSmooth => f.write_str("tropical hypersurface is not smooth"),
            LiftError::TransversalityFailed => {
                f.write_str("no transverse boundary crossing found; trimming radius too small")
            }
            LiftError::SearchFailed(cond) => {
                f.write_str("trimming search failed at condition: ")?;
                f.write_str(cond)
            }
            LiftError::ParamsNotAccepted => f.write_str("trimming parameters were not accepted"),
            LiftError::OverlapMismatch => f.write_str("local models disagree on an overlap"),
            LiftError::UnsupportedView => f.write_str("unsupported export view/format combination"),
        }
    }
}
