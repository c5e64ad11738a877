//! The unit ball, its augmentation to the sphere `S^D`, and the exact
//! geodesic (great-circle) flow on the sphere.
//!
//! A point `θ` of the D-dimensional unit ball is lifted to
//! `θ̃ = (θ, ±√(1 − ‖θ‖²))` on `S^D ⊂ R^{D+1}`. The boundary of the ball is
//! the equator, so a trajectory that crosses the equator maps back to a path
//! that bounces off the boundary in the ball.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Slack allowed on `‖θ‖₂ ≤ 1` when constructing a [`BallPoint`].
pub const BALL_SLACK: f64 = 1e-12;

/// Tolerance on `|‖θ̃‖₂ − 1|` for a [`SpherePoint`].
pub const SPHERE_TOL: f64 = 1e-10;

/// Below this speed the geodesic flow is the identity.
const MIN_SPEED: f64 = 1e-14;

/// A point in the closed unit ball `‖θ‖₂ ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint(DVector<f64>);

impl BallPoint {
    pub fn new(theta: DVector<f64>) -> Result<Self> {
        let norm = theta.norm();
        if !norm.is_finite() || norm > 1.0 + BALL_SLACK {
            return Err(Error::OutsideBall { norm });
        }
        Ok(BallPoint(theta))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }
}

/// A point `θ̃ = (θ, θ_{D+1})` on the unit sphere in `R^{D+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint(DVector<f64>);

impl SpherePoint {
    /// Wraps `v`, which must already have unit norm within [`SPHERE_TOL`].
    pub fn new(v: DVector<f64>) -> Result<Self> {
        let norm = v.norm();
        if v.len() < 2 || (norm - 1.0).abs() > SPHERE_TOL {
            return Err(Error::InvalidDomain(format!(
                "sphere point must have unit norm and length >= 2 (norm {norm}, len {})",
                v.len()
            )));
        }
        Ok(SpherePoint(v))
    }

    /// Projects a nonzero vector radially onto the sphere.
    pub fn normalized(v: DVector<f64>) -> Self {
        let norm = v.norm();
        SpherePoint(v / norm)
    }

    /// The north pole `(0, …, 0, 1)`, the image of the ball's center.
    pub fn pole(dim: usize) -> Self {
        let mut v = DVector::zeros(dim + 1);
        v[dim] = 1.0;
        SpherePoint(v)
    }

    /// Dimension `D` of the sphere; the embedding has `D + 1` coordinates.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The auxiliary coordinate `θ_{D+1}`.
    pub fn last(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub(crate) fn from_raw(v: DVector<f64>) -> Self {
        SpherePoint(v)
    }
}

/// A velocity in the tangent space `{ṽ : θ̃ᵀṽ = 0}` of some [`SpherePoint`].
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector(DVector<f64>);

impl TangentVector {
    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Kinetic energy `½‖ṽ‖²`.
    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.0.norm_squared()
    }

    pub(crate) fn from_raw(v: DVector<f64>) -> Self {
        TangentVector(v)
    }

    pub fn negate(&mut self) {
        self.0.neg_mut();
    }
}

/// Which hemisphere a ball point is lifted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Hemisphere {
    #[default]
    Upper,
    Lower,
}

pub fn ball_to_sphere(theta: &BallPoint, hemisphere: Hemisphere) -> SpherePoint {
    let d = theta.dim();
    let height = (1.0 - theta.0.norm_squared()).max(0.0).sqrt();
    let mut v = DVector::zeros(d + 1);
    v.rows_mut(0, d).copy_from(&theta.0);
    v[d] = match hemisphere {
        Hemisphere::Upper => height,
        Hemisphere::Lower => -height,
    };
    // The norm is 1 up to rounding; fold the rounding back in.
    SpherePoint::normalized(v)
}

pub fn sphere_to_ball(theta_tilde: &SpherePoint) -> BallPoint {
    let d = theta_tilde.dim();
    let mut theta = theta_tilde.0.rows(0, d).into_owned();
    let norm = theta.norm();
    if norm > 1.0 {
        theta /= norm;
    }
    BallPoint(theta)
}

/// Applies `I − θ̃θ̃ᵀ` to `w`.
pub fn tangent_project(theta_tilde: &SpherePoint, w: &DVector<f64>) -> TangentVector {
    let normal = &theta_tilde.0;
    let along = normal.dot(w);
    TangentVector(w - normal * along)
}

/// Draws `ṽ ~ N(0, I − θ̃θ̃ᵀ)` by projecting a standard normal draw.
pub fn sample_tangent_velocity<R: Rng + ?Sized>(
    theta_tilde: &SpherePoint,
    rng: &mut R,
) -> TangentVector {
    let w = DVector::from_fn(theta_tilde.0.len(), |_, _| rng.sample(StandardNormal));
    tangent_project(theta_tilde, &w)
}

/// Follows the great circle through `θ̃` with initial velocity `ṽ` for time `t`.
pub fn geodesic_flow(
    theta_tilde: &SpherePoint,
    v_tilde: &TangentVector,
    t: f64,
) -> (SpherePoint, TangentVector) {
    let mut x = theta_tilde.0.clone();
    let mut v = v_tilde.0.clone();
    geodesic_step(&mut x, &mut v, t);
    (SpherePoint(x), TangentVector(v))
}

/// [`geodesic_flow`] on raw coordinates, in place.
pub(crate) fn geodesic_step(x: &mut DVector<f64>, v: &mut DVector<f64>, t: f64) {
    let speed = v.norm();
    if speed < MIN_SPEED {
        return;
    }
    let (sin, cos) = (speed * t).sin_cos();
    for i in 0..x.len() {
        let (xi, vi) = (x[i], v[i]);
        x[i] = xi * cos + vi * (sin / speed);
        v[i] = xi * (-speed * sin) + vi * cos;
    }
}
