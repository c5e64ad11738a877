//! Wall HMC: leapfrog in the original coordinates, with the position update
//! reflected off the domain boundary as if it were an infinite energy wall.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{metropolis, ChainState, SamplerConfig, StatePoint, StepInfo};
use crate::constraints::{ConstraintDomain, Shape};
use crate::error::{Error, Result};
use crate::models::TargetModel;

/// A step needing more reflections than this is rejected.
pub const MAX_REFLECTIONS: usize = 1_000_000;

pub(super) fn check_supported(domain: &ConstraintDomain) -> Result<()> {
    match domain.shape() {
        Shape::HyperRectangle { .. } => Ok(()),
        Shape::QNormBall { q, .. } if *q == 1.0 => Ok(()),
        _ => Err(Error::UnsupportedDomain {
            sampler: "wall HMC",
            domain: domain.describe(),
        }),
    }
}

/// Moves `beta` along `v` for time `duration`, reflecting off the boundary.
/// Returns the number of reflections, or `None` past [`MAX_REFLECTIONS`].
pub fn reflect_in_domain(
    domain: &ConstraintDomain,
    beta: &mut DVector<f64>,
    v: &mut DVector<f64>,
    duration: f64,
) -> Option<usize> {
    match domain.shape() {
        Shape::HyperRectangle { lower, upper } => {
            let mut bounces = 0;
            for i in 0..beta.len() {
                let (l, u) = (lower[i], upper[i]);
                let mut x = beta[i] + duration * v[i];
                loop {
                    if x > u {
                        x = 2.0 * u - x;
                    } else if x < l {
                        x = 2.0 * l - x;
                    } else {
                        break;
                    }
                    v[i] = -v[i];
                    bounces += 1;
                    if bounces > MAX_REFLECTIONS {
                        return None;
                    }
                }
                beta[i] = x;
            }
            Some(bounces)
        }
        Shape::QNormBall { q, .. } if *q == 1.0 => reflect_in_diamond(domain, beta, v, duration),
        _ => None,
    }
}

fn reflect_in_diamond(
    domain: &ConstraintDomain,
    beta: &mut DVector<f64>,
    v: &mut DVector<f64>,
    duration: f64,
) -> Option<usize> {
    let mut remaining = duration;
    let mut bounces = 0;
    loop {
        let end = &*beta + &*v * remaining;
        if domain.violation(&end) <= 0.0 {
            *beta = end;
            return Some(bounces);
        }
        // ‖β + s v‖₁ is convex in s, so the exit time is the unique root.
        let (mut lo, mut hi) = (0.0, remaining);
        while hi - lo > 1e-15 * remaining.max(1e-300) {
            let mid = 0.5 * (lo + hi);
            if domain.violation(&(&*beta + &*v * mid)) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let hit = &*beta + &*v * lo;
        // Face normal sgn(β); coordinates sitting at zero take the side the velocity heads to.
        let mut normal = DVector::from_fn(hit.len(), |i, _| {
            if hit[i].abs() > 1e-14 {
                hit[i].signum()
            } else if v[i] != 0.0 {
                v[i].signum()
            } else {
                0.0
            }
        });
        normal.normalize_mut();
        let along = v.dot(&normal);
        if along > 0.0 {
            v.axpy(-2.0 * along, &normal, 1.0);
        }
        *beta = hit;
        remaining -= lo;
        bounces += 1;
        if bounces > MAX_REFLECTIONS {
            return None;
        }
    }
}

/// One Wall HMC transition.
pub fn wall_hmc_step<R: Rng + ?Sized>(
    state: &ChainState,
    model: &dyn TargetModel,
    domain: &ConstraintDomain,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<(ChainState, StepInfo)> {
    let StatePoint::Original(start) = &state.point else {
        return Err(Error::InvalidModel(
            "wall HMC needs a state in original coordinates".into(),
        ));
    };
    check_supported(domain)?;
    let mut v = DVector::from_fn(start.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
    let h_current = state.potential + 0.5 * v.norm_squared();
    let steps = cfg.draw_steps(rng);
    let eps = cfg.step_size();

    let mut beta = start.clone();
    let mut bounces = 0;
    let mut grad = model.gradient(&beta);
    let mut u = state.potential;
    let mut valid = true;
    for _ in 0..steps {
        v.axpy(-0.5 * eps, &grad, 1.0);
        match reflect_in_domain(domain, &mut beta, &mut v, eps) {
            Some(b) => bounces += b,
            None => {
                valid = false;
                break;
            }
        }
        (u, grad) = model.potential_and_gradient(&beta);
        if !u.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            valid = false;
            break;
        }
        v.axpy(-0.5 * eps, &grad, 1.0);
    }

    let delta_h = if valid {
        u + 0.5 * v.norm_squared() - h_current
    } else {
        f64::INFINITY
    };
    let accepted = metropolis(delta_h, rng);
    let next = if accepted {
        ChainState {
            point: StatePoint::Original(beta),
            potential: u,
            weight: 1.0,
        }
    } else {
        state.clone()
    };
    Ok((
        next,
        StepInfo {
            accepted,
            delta_h,
            bounces,
            outside_domain: false,
        },
    ))
}
