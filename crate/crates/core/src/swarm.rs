//! Per-run swarm state, bounds enforcement, and the baseline update step.

use crate::error::{Error, Result};
use crate::objectives::ObjectiveFunction;
use crate::rng::RngStream;
use serde::{Deserialize, Serialize};

/// Sizing, bounds, and seed for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmConfig {
    pub num_particles: usize,
    pub dimension: usize,
    pub max_iterations: usize,
    /// Velocity clamp magnitude; components stay in `[-v_max, v_max]`.
    pub v_max: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub seed: u64,
}

impl SwarmConfig {
    /// Builds a config with the default velocity clamp of 0.2 times the
    /// position range.
    pub fn new(
        num_particles: usize,
        dimension: usize,
        max_iterations: usize,
        x_min: f64,
        x_max: f64,
        seed: u64,
    ) -> Result<Self> {
        let config = Self {
            num_particles,
            dimension,
            max_iterations,
            v_max: 0.2 * (x_max - x_min),
            x_min,
            x_max,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    /// Same as [`SwarmConfig::new`] with bounds taken from the function's
    /// search domain.
    pub fn for_function(
        f: &ObjectiveFunction,
        num_particles: usize,
        max_iterations: usize,
        seed: u64,
    ) -> Result<Self> {
        Self::new(
            num_particles,
            f.dimension(),
            max_iterations,
            f.lower_bound(),
            f.upper_bound(),
            seed,
        )
    }

    pub fn with_v_max(mut self, v_max: f64) -> Result<Self> {
        self.v_max = v_max;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_particles < 2 {
            return Err(Error::InvalidConfiguration(
                "at least 2 particles required".into(),
            ));
        }
        if self.dimension == 0 {
            return Err(Error::InvalidConfiguration(
                "dimension must be positive".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfiguration(
                "max_iterations must be positive".into(),
            ));
        }
        if !(self.x_min < self.x_max) {
            return Err(Error::InvalidConfiguration(format!(
                "x_min ({}) must be below x_max ({})",
                self.x_min, self.x_max
            )));
        }
        if !(self.v_max > 0.0) {
            return Err(Error::InvalidConfiguration(format!(
                "v_max ({}) must be positive",
                self.v_max
            )));
        }
        Ok(())
    }
}

/// Positions, velocities, and best-so-far bookkeeping for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    pub positions: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
    pub personal_best_positions: Vec<Vec<f64>>,
    pub personal_best_values: Vec<f64>,
    pub global_best_position: Vec<f64>,
    pub global_best_value: f64,
    pub iteration: usize,
}

impl SwarmState {
    pub fn num_particles(&self) -> usize {
        self.positions.len()
    }

    pub fn dimension(&self) -> usize {
        self.global_best_position.len()
    }
}

/// Clamps `value` into `[lo, hi]`.
pub fn clamp(value: f64, lo: f64, hi: f64) -> Result<f64> {
    if lo > hi {
        return Err(Error::InvalidArgument(format!(
            "clamp bounds inverted: lo {lo} > hi {hi}"
        )));
    }
    Ok(value.clamp(lo, hi))
}

/// Draws the initial swarm.
///
/// Draw order is fixed: every position component first (particle-major,
/// dimension-minor), then every velocity component in the same order, so a
/// seeded stream replays exactly. Consumes `2 * N * D` draws.
pub fn initialize(
    config: &SwarmConfig,
    f: &ObjectiveFunction,
    rng: &mut RngStream,
) -> Result<SwarmState> {
    config.validate()?;
    if config.dimension != f.dimension() {
        return Err(Error::InvalidArgument(format!(
            "config dimension {} does not match {} dimension {}",
            config.dimension,
            f.name(),
            f.dimension()
        )));
    }
    let (n, d) = (config.num_particles, config.dimension);
    let positions: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.uniform(config.x_min, config.x_max)).collect())
        .collect();
    let velocities: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.uniform(-config.v_max, config.v_max)).collect())
        .collect();
    let personal_best_values: Vec<f64> = positions.iter().map(|x| f.value(x)).collect();
    let mut state = SwarmState {
        personal_best_positions: positions.clone(),
        positions,
        velocities,
        personal_best_values,
        global_best_position: vec![0.0; d],
        global_best_value: f64::INFINITY,
        iteration: 0,
    };
    refresh_global_best(&mut state);
    Ok(state)
}

/// One baseline update: each velocity gains a pull toward the particle's own
/// best and a pull toward the swarm best, with fresh unit draws `r1`, `r2` per
/// particle-dimension (in that order, particle-major). Velocities and
/// positions are clamped, bests refreshed, the iteration count incremented.
/// Consumes exactly `2 * N * D` draws.
pub fn pso_step(
    state: &mut SwarmState,
    f: &ObjectiveFunction,
    config: &SwarmConfig,
    c1: f64,
    c2: f64,
    rng: &mut RngStream,
) {
    let (n, d) = (state.num_particles(), state.dimension());
    // All particles see the swarm best from before this step.
    let global = state.global_best_position.clone();
    for k in 0..n {
        for j in 0..d {
            let r1 = rng.next_unit();
            let r2 = rng.next_unit();
            let x = state.positions[k][j];
            let v = state.velocities[k][j]
                + c1 * r1 * (state.personal_best_positions[k][j] - x)
                + c2 * r2 * (global[j] - x);
            let v = v.clamp(-config.v_max, config.v_max);
            state.velocities[k][j] = v;
            state.positions[k][j] = (x + v).clamp(config.x_min, config.x_max);
        }
        let fit = f.value(&state.positions[k]);
        if fit < state.personal_best_values[k] {
            state.personal_best_values[k] = fit;
            state.personal_best_positions[k].copy_from_slice(&state.positions[k]);
        }
    }
    refresh_global_best(state);
    state.iteration += 1;
}

/// Sets the swarm best to the minimum personal best, lowest index winning ties.
pub(crate) fn refresh_global_best(state: &mut SwarmState) {
    let mut best = 0;
    for k in 1..state.num_particles() {
        if state.personal_best_values[k] < state.personal_best_values[best] {
            best = k;
        }
    }
    state.global_best_value = state.personal_best_values[best];
    state
        .global_best_position
        .copy_from_slice(&state.personal_best_positions[best]);
}
