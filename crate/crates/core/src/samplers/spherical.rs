//! Spherical HMC: split Lagrangian dynamics on `S^D` where the kinetic part
//! is the exact great-circle flow and the potential part is a velocity kick
//! projected onto the tangent space.

use nalgebra::DVector;
use rand::Rng;

use super::{metropolis, ChainState, SamplerConfig, StatePoint, StepInfo};
use crate::constraints::ConstraintDomain;
use crate::error::{Error, Result};
use crate::geometry::{geodesic_step, sample_tangent_velocity, SpherePoint, TangentVector};
use crate::models::TargetModel;

/// End point of an integrated trajectory.
#[derive(Debug, Clone)]
pub struct SphericalTrajectory {
    pub position: SpherePoint,
    pub velocity: TangentVector,
    pub potential: f64,
}

/// Scratch buffers reused across leapfrog steps.
struct Workspace {
    theta: DVector<f64>,
    beta: DVector<f64>,
    grad: DVector<f64>,
}

impl Workspace {
    fn new(dim: usize) -> Self {
        Workspace {
            theta: DVector::zeros(dim),
            beta: DVector::zeros(dim),
            grad: DVector::zeros(dim),
        }
    }

    /// `U` at the sphere point `x`, leaving `∇_θ (U∘from_ball)` in `self.grad`.
    /// `None` if either is not finite.
    fn evaluate(
        &mut self,
        model: &dyn TargetModel,
        domain: &ConstraintDomain,
        x: &DVector<f64>,
    ) -> Option<f64> {
        let d = self.theta.len();
        self.theta.copy_from(&x.rows(0, d));
        let norm = self.theta.norm();
        if norm > 1.0 {
            self.theta /= norm;
        }
        let stats = domain.from_ball_into(&self.theta, &mut self.beta);
        let (u, grad_beta) = model.potential_and_gradient(&self.beta);
        if !u.is_finite() {
            return None;
        }
        domain.chain_gradient_into(&self.theta, &stats, &grad_beta, &mut self.grad);
        self.grad.iter().all(|g| g.is_finite()).then_some(u)
    }
}

/// `ṽ ← ṽ − h (I − θ̃θ̃ᵀ)[∇U; 0]`.
fn kick(x: &DVector<f64>, v: &mut DVector<f64>, grad_theta: &DVector<f64>, h: f64) {
    let d = grad_theta.len();
    let along = x.rows(0, d).dot(grad_theta);
    for i in 0..d {
        v[i] -= h * (grad_theta[i] - x[i] * along);
    }
    v[d] += h * x[d] * along;
}

/// Integrates `steps` split steps of size `step_size` from `(x, v)`.
/// Returns `None` if the potential or its gradient stops being finite.
pub fn spherical_leapfrog(
    model: &dyn TargetModel,
    domain: &ConstraintDomain,
    x: &SpherePoint,
    v: &TangentVector,
    step_size: f64,
    steps: usize,
) -> Option<SphericalTrajectory> {
    let half = 0.5 * step_size;
    let mut ws = Workspace::new(domain.dim());
    let mut x = x.as_vector().clone();
    let mut v = v.as_vector().clone();
    let mut u = ws.evaluate(model, domain, &x)?;
    for _ in 0..steps {
        kick(&x, &mut v, &ws.grad, half);
        geodesic_step(&mut x, &mut v, step_size);
        // Fold rounding back onto the sphere and its tangent space.
        x /= x.norm();
        let along = x.dot(&v);
        v.axpy(-along, &x, 1.0);
        u = ws.evaluate(model, domain, &x)?;
        kick(&x, &mut v, &ws.grad, half);
    }
    Some(SphericalTrajectory {
        position: SpherePoint::from_raw(x),
        velocity: TangentVector::from_raw(v),
        potential: u,
    })
}

/// One Spherical HMC transition.
pub fn spherical_hmc_step<R: Rng + ?Sized>(
    state: &ChainState,
    model: &dyn TargetModel,
    domain: &ConstraintDomain,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<(ChainState, StepInfo)> {
    let StatePoint::Sphere(x) = &state.point else {
        return Err(Error::InvalidModel(
            "spherical HMC needs a sphere state".into(),
        ));
    };
    let v = sample_tangent_velocity(x, rng);
    let h_current = state.potential + v.kinetic_energy();
    let steps = cfg.draw_steps(rng);

    let proposal = spherical_leapfrog(model, domain, x, &v, cfg.step_size(), steps);
    let delta_h = proposal.as_ref().map_or(f64::INFINITY, |p| {
        p.potential + p.velocity.kinetic_energy() - h_current
    });
    let accepted = metropolis(delta_h, rng);

    let next = match proposal {
        Some(p) if accepted => ChainState {
            weight: domain.jacobian_weight(&p.position),
            point: StatePoint::Sphere(p.position),
            potential: p.potential,
        },
        _ => ChainState {
            weight: domain.jacobian_weight(x),
            ..state.clone()
        },
    };
    Ok((
        next,
        StepInfo {
            accepted,
            delta_h,
            ..StepInfo::default()
        },
    ))
}
