use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{PlaneCurve, Vec2, MIN_SPEED};

/// A covector `ξ` at a point `x` of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpacePoint2D {
    pub x: Vec2,
    pub xi: Vec2,
}

/// A covector `σ ds + η dφ` at the line `(s, φ)`.
///
/// The representative is kept with `φ ∈ [0, π)`; the quotient identifies
/// `(s, φ, σ, η)` with `(-s, φ + π, -σ, η)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpacePointL {
    pub s: f64,
    pub phi: f64,
    pub sigma: f64,
    pub eta: f64,
}

impl PhaseSpacePointL {
    /// Moves an arbitrary representative into the chart `φ ∈ [0, π)`.
    pub fn normalized(s: f64, phi: f64, sigma: f64, eta: f64) -> Self {
        let k = (phi / PI).floor();
        let mut q = Self { s, phi: phi - k * PI, sigma, eta };
        if (k as i64).rem_euclid(2) == 1 {
            q.s = -q.s;
            q.sigma = -q.sigma;
        }
        // rounding can land exactly on π
        if q.phi >= PI {
            q.phi -= PI;
            q.s = -q.s;
            q.sigma = -q.sigma;
        }
        q
    }
}

/// `(x, ξ) ↦ (x·ξ/|ξ|, arg ξ, |ξ|, -x·ξ^⊥)` with `ξ^⊥ = (-ξ₂, ξ₁)`.
pub fn canonical_forward(p: PhaseSpacePoint2D) -> Result<PhaseSpacePointL> {
    let r = p.xi.norm();
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::ZeroCovector);
    }
    let s = p.x.dot(p.xi) / r;
    let phi = p.xi.y.atan2(p.xi.x);
    let eta = -p.x.dot(p.xi.perp());
    Ok(PhaseSpacePointL::normalized(s, phi, r, eta))
}

/// `(s, φ, σ, η) ↦ (sθ - (η/σ)θ^⊥, σθ)`. Independent of the representative.
pub fn canonical_inverse(q: PhaseSpacePointL) -> Result<PhaseSpacePoint2D> {
    if q.sigma == 0.0 || !q.sigma.is_finite() {
        return Err(Error::ZeroSigma);
    }
    let theta = Vec2::from_angle(q.phi);
    let x = theta * q.s - theta.perp() * (q.eta / q.sigma);
    Ok(PhaseSpacePoint2D { x, xi: theta * q.sigma })
}

/// The conormal covector `σν(t)` at `γ(t)`, with `ν = (ẋ₂, -ẋ₁)/|γ̇|`.
pub fn conormal_lift<C: PlaneCurve + ?Sized>(curve: &C, t: f64, sigma: f64) -> Result<PhaseSpacePoint2D> {
    let v = curve.derivative(t, 1);
    let speed = v.norm();
    if speed < MIN_SPEED {
        return Err(Error::DegenerateVelocity { t, speed });
    }
    Ok(PhaseSpacePoint2D { x: curve.point(t), xi: Vec2::new(v.y, -v.x) * (sigma / speed) })
}
