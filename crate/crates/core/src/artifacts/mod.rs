//! Artifact simulation, the canonical relation of the X-ray transform, and
//! scoring of where the simulated streaks land.

mod canonical;
mod score;
mod simulate;

pub use canonical::{canonical_forward, canonical_inverse, conormal_lift, PhaseSpacePoint2D, PhaseSpacePointL};
pub use score::{localization_score, random_baseline, tube_area_fraction, ArtifactScore, BOUNDARY_POLYGON};
pub use simulate::{metal_artifact, simulate, singular_support_map, Simulation};
