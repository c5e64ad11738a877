use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{metropolis, ChainState, SamplerConfig, StatePoint, StepInfo};
use crate::constraints::ConstraintDomain;
use crate::error::{Error, Result};
use crate::models::TargetModel;

/// One random-walk Metropolis transition with an isotropic Gaussian proposal.
/// Proposals outside the domain are rejected without evaluating the model.
pub fn rwm_step<R: Rng + ?Sized>(
    state: &ChainState,
    model: &dyn TargetModel,
    domain: &ConstraintDomain,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<(ChainState, StepInfo)> {
    let StatePoint::Original(current) = &state.point else {
        return Err(Error::InvalidModel(
            "random-walk Metropolis needs a state in original coordinates".into(),
        ));
    };
    let proposal = DVector::from_fn(current.len(), |i, _| {
        current[i] + cfg.proposal_scale * rng.sample::<f64, _>(StandardNormal)
    });
    if !domain.contains(&proposal, 0.0) {
        return Ok((
            state.clone(),
            StepInfo {
                accepted: false,
                delta_h: f64::INFINITY,
                bounces: 0,
                outside_domain: true,
            },
        ));
    }
    let u = model.potential(&proposal);
    let delta_h = u - state.potential;
    let accepted = metropolis(delta_h, rng);
    let next = if accepted {
        ChainState {
            point: StatePoint::Original(proposal),
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
            ..StepInfo::default()
        },
    ))
}
