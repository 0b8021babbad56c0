//! Event-triggered acceleration of the comprehensive-learning update.
//!
//! Any particle-dimension whose distance to its exemplar component is within
//! the threshold has its acceleration coefficient zeroed for that iteration,
//! which skips the two multiplications of the guidance term. The inertia
//! multiplication always executes. [`OpCounter`] tracks executed versus
//! skippable multiplications so the saving can be reported as a ratio.

use crate::clpso::{assign_exemplar, inertia_weight, learning_probability, ClpsoParams, ExemplarTable};
use crate::error::{Error, Result};
use crate::objectives::ObjectiveFunction;
use crate::rng::RngStream;
use crate::swarm::{refresh_global_best, SwarmConfig, SwarmState};
use serde::{Deserialize, Serialize};

/// Threshold and active coefficient of the trigger rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriggerPolicy {
    /// Distance at or below which a dimension's coefficient is zeroed.
    pub gamma: f64,
    /// Coefficient applied when the trigger does not fire.
    pub base_coefficient: f64,
}

impl TriggerPolicy {
    pub fn new(gamma: f64, base_coefficient: f64) -> Result<Self> {
        let policy = Self {
            gamma,
            base_coefficient,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) {
            return Err(Error::InvalidConfiguration(format!(
                "gamma ({}) must be non-negative",
                self.gamma
            )));
        }
        if !(self.base_coefficient > 0.0) {
            return Err(Error::InvalidConfiguration(format!(
                "base coefficient ({}) must be positive",
                self.base_coefficient
            )));
        }
        Ok(())
    }
}

/// Cumulative multiplication counts under the three-multiplications-per-
/// component cost model: one inertia multiplication always executes, the two
/// guidance multiplications are skippable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounter {
    /// Inertia multiplications executed.
    pub always_mults: u64,
    /// Guidance multiplications actually executed.
    pub gated_mults: u64,
    /// Guidance multiplications an ungated run would have executed.
    pub total_possible_gated: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counter for a rule that executes the full budget every iteration.
    pub fn ungated(iterations: usize, num_particles: usize, dimension: usize) -> Self {
        let per_iter = (num_particles * dimension) as u64;
        let base = iterations as u64 * per_iter;
        Self {
            always_mults: base,
            gated_mults: 2 * base,
            total_possible_gated: 2 * base,
        }
    }

    /// Multiplications actually executed so far.
    pub fn executed(&self) -> u64 {
        self.always_mults + self.gated_mults
    }
}

/// Coefficient for one particle-dimension: zero when the component already
/// sits within `gamma` of its exemplar, the base coefficient otherwise.
pub fn triggered_coefficient(
    exemplar_component: f64,
    position_component: f64,
    policy: &TriggerPolicy,
) -> Result<f64> {
    if !exemplar_component.is_finite() || !position_component.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "trigger inputs must be finite, got ({exemplar_component}, {position_component})"
        )));
    }
    Ok(trigger(exemplar_component, position_component, policy))
}

#[inline]
fn trigger(exemplar: f64, position: f64, policy: &TriggerPolicy) -> f64 {
    if (exemplar - position).abs() <= policy.gamma {
        0.0
    } else {
        policy.base_coefficient
    }
}

/// One accelerated comprehensive-learning update.
///
/// Identical to [`crate::clpso::clpso_step`] except the coefficient of each
/// particle-dimension comes from the trigger rule. A gated dimension skips the
/// two guidance multiplications and leaves `gated_mults` untouched; an active
/// one adds 2. `always_mults` gains 1 and `total_possible_gated` 2 per
/// component regardless, and the unit draw for each component is consumed
/// whether or not the trigger fires, so the draw sequence matches the ungated
/// update exactly.
#[allow(clippy::too_many_arguments)]
pub fn aclpso_step(
    state: &mut SwarmState,
    exemplars: &mut ExemplarTable,
    f: &ObjectiveFunction,
    config: &SwarmConfig,
    params: &ClpsoParams,
    policy: &TriggerPolicy,
    counter: &mut OpCounter,
    rng: &mut RngStream,
) -> Result<()> {
    let (n, d) = (state.num_particles(), state.dimension());
    let w = inertia_weight(state.iteration, config.max_iterations, params);
    let mut improved = vec![false; n];
    for k in 0..n {
        for j in 0..d {
            let r = rng.next_unit();
            let x = state.positions[k][j];
            let ex = exemplars.exemplar_positions[k][j];
            counter.always_mults += 1;
            counter.total_possible_gated += 2;
            let coeff = trigger(ex, x, policy);
            let v = if coeff == 0.0 {
                w * state.velocities[k][j]
            } else {
                counter.gated_mults += 2;
                w * state.velocities[k][j] + coeff * r * (ex - x)
            };
            let v = v.clamp(-config.v_max, config.v_max);
            state.velocities[k][j] = v;
            state.positions[k][j] = (x + v).clamp(config.x_min, config.x_max);
        }
        let fit = f.value(&state.positions[k]);
        if fit < state.personal_best_values[k] {
            state.personal_best_values[k] = fit;
            state.personal_best_positions[k].copy_from_slice(&state.positions[k]);
            improved[k] = true;
        }
    }
    refresh_global_best(state);
    for k in 0..n {
        if improved[k] {
            exemplars.stagnation_count[k] = 0;
        } else {
            exemplars.stagnation_count[k] += 1;
        }
        if exemplars.stagnation_count[k] >= params.refresh_gap {
            assign_exemplar(exemplars, k, state, learning_probability(k, n), rng)?;
        }
    }
    state.iteration += 1;
    Ok(())
}

/// Executed multiplications relative to the ungated budget, in `[1/3, 1]`.
pub fn computation_ratio(counter: &OpCounter) -> Result<f64> {
    if counter.always_mults == 0 {
        return Err(Error::UndefinedRatio);
    }
    Ok((counter.always_mults + counter.gated_mults) as f64
        / (counter.always_mults + counter.total_possible_gated) as f64)
}
