//! Comprehensive-learning update: every particle follows a per-dimension
//! exemplar assembled from neighbor personal bests, rebuilt when the particle
//! stops improving.

use crate::error::{Error, Result};
use crate::objectives::ObjectiveFunction;
use crate::rng::RngStream;
use crate::swarm::{refresh_global_best, SwarmConfig, SwarmState};
use serde::{Deserialize, Serialize};

/// Coefficients of the comprehensive-learning update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClpsoParams {
    /// Acceleration coefficient on the exemplar pull.
    pub c: f64,
    /// Inertia weight at the first iteration.
    pub w_start: f64,
    /// Inertia weight at the last iteration.
    pub w_end: f64,
    /// Consecutive non-improving iterations before a particle's exemplar is
    /// reassigned.
    pub refresh_gap: u32,
}

impl Default for ClpsoParams {
    fn default() -> Self {
        Self {
            c: 1.49445,
            w_start: 0.9,
            w_end: 0.4,
            refresh_gap: 7,
        }
    }
}

impl ClpsoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) {
            return Err(Error::InvalidConfiguration(format!(
                "acceleration coefficient ({}) must be positive",
                self.c
            )));
        }
        if !(0.0 < self.w_end && self.w_end <= self.w_start && self.w_start < 1.5) {
            return Err(Error::InvalidConfiguration(format!(
                "inertia weights must satisfy 0 < w_end <= w_start < 1.5, got {} .. {}",
                self.w_start, self.w_end
            )));
        }
        if self.refresh_gap == 0 {
            return Err(Error::InvalidConfiguration(
                "refresh_gap must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Per-particle exemplar vectors, the particle each component was copied
/// from, and stagnation counts driving refresh.
#[derive(Debug, Clone, PartialEq)]
pub struct ExemplarTable {
    pub exemplar_positions: Vec<Vec<f64>>,
    pub source_particle: Vec<Vec<usize>>,
    pub stagnation_count: Vec<u32>,
}

impl ExemplarTable {
    /// Assigns a fresh exemplar to every particle, in particle order.
    pub fn assign_all(state: &SwarmState, rng: &mut RngStream) -> Result<Self> {
        let n = state.num_particles();
        let d = state.dimension();
        let mut table = Self {
            exemplar_positions: vec![vec![0.0; d]; n],
            source_particle: vec![vec![0; d]; n],
            stagnation_count: vec![0; n],
        };
        for k in 0..n {
            assign_exemplar(&mut table, k, state, learning_probability(k, n), rng)?;
        }
        Ok(table)
    }
}

/// Inertia weight at `iteration`, interpolated linearly from `w_start` (first
/// iteration) to `w_end` (last). A single-iteration run uses `w_start`.
pub fn inertia_weight(iteration: usize, max_iterations: usize, params: &ClpsoParams) -> f64 {
    if max_iterations <= 1 {
        return params.w_start;
    }
    params.w_start
        + (params.w_end - params.w_start) * iteration as f64 / (max_iterations - 1) as f64
}

/// Probability that a given exemplar dimension of `particle` (0-based) is
/// learned from a neighbor rather than the particle's own best. Rises
/// exponentially from 0.05 for the first particle to 0.5 for the last.
pub fn learning_probability(particle: usize, num_particles: usize) -> f64 {
    debug_assert!(num_particles >= 2 && particle < num_particles);
    let t = particle as f64 / (num_particles - 1) as f64;
    0.05 + 0.45 * ((10.0 * t).exp() - 1.0) / (10.0_f64.exp() - 1.0)
}

/// Rebuilds the exemplar row of `particle` and resets its stagnation count.
///
/// Per dimension: with probability `learning_prob` two distinct neighbors
/// (≠ `particle`) are drawn, one draw each with a re-draw while they coincide,
/// and the one with the lower personal-best value donates its component;
/// otherwise the particle's own best component is kept. If every dimension
/// kept the particle's own component, one random dimension is reassigned to a
/// random other particle so the exemplar never degenerates to the particle
/// itself.
pub fn assign_exemplar(
    table: &mut ExemplarTable,
    particle: usize,
    state: &SwarmState,
    learning_prob: f64,
    rng: &mut RngStream,
) -> Result<()> {
    let n = state.num_particles();
    let d = state.dimension();
    if n < 3 {
        return Err(Error::InvalidConfiguration(
            "exemplar assignment needs at least 3 particles".into(),
        ));
    }
    let mut learned_any = false;
    for j in 0..d {
        if rng.next_unit() < learning_prob {
            let a = rng.index_excluding(n, particle);
            let mut b = rng.index_excluding(n, particle);
            while b == a {
                b = rng.index_excluding(n, particle);
            }
            let winner = if state.personal_best_values[b] < state.personal_best_values[a] {
                b
            } else {
                a
            };
            table.exemplar_positions[particle][j] = state.personal_best_positions[winner][j];
            table.source_particle[particle][j] = winner;
            learned_any = true;
        } else {
            table.exemplar_positions[particle][j] = state.personal_best_positions[particle][j];
            table.source_particle[particle][j] = particle;
        }
    }
    if !learned_any {
        let j = rng.index(d);
        let src = rng.index_excluding(n, particle);
        table.exemplar_positions[particle][j] = state.personal_best_positions[src][j];
        table.source_particle[particle][j] = src;
    }
    table.stagnation_count[particle] = 0;
    Ok(())
}

/// One comprehensive-learning update.
///
/// Per particle-dimension, with one fresh unit draw `r` each (particle-major,
/// dimension-minor): `v <- w(i)*v + c*r*(exemplar - x)`, clamped, then the
/// position advances by `v` and is clamped. Bests are refreshed, stagnation
/// counts advance (reset on improvement), and any particle at the refresh gap
/// gets a new exemplar. The velocity phase consumes exactly `N * D` draws;
/// refreshes consume more afterward.
pub fn clpso_step(
    state: &mut SwarmState,
    exemplars: &mut ExemplarTable,
    f: &ObjectiveFunction,
    config: &SwarmConfig,
    params: &ClpsoParams,
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
            let v = w * state.velocities[k][j] + params.c * r * (ex - x);
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
