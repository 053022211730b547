//! Boundary curves, their flat points and their dual curves in line space.

mod bitangent;
mod curve;
mod dual;
mod flat;
mod lines;
mod vec2;

pub use bitangent::{find_bitangents, tangency_points, Bitangent};
pub use curve::{GraphCurve, Harmonic, ParamCurve, PlaneCurve, MIN_SPEED};
pub use dual::{dual_curve, dual_point, CuspReport, DualCurve, DualSample, LineCoord};
pub use flat::{estimate_flat_order, find_flat_points, FlatKind, FlatPoint, MAX_FLAT_ORDER, ZERO_CURVATURE_RATIO};
pub use lines::{predicted_lines, validate_assumptions, AssumptionReport, LineKind, LineSet, PredictedLine};
pub use vec2::Vec2;
