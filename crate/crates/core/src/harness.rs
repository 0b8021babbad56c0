//! Multi-run experiment batteries with seeded, order-independent execution
//! and the aggregate statistics of the cost/accuracy comparison: mean final
//! fitness, mean computation ratio, effective iterations, and the ungated
//! algorithm's mean fitness at that effective iteration count.

use crate::aclpso::{aclpso_step, computation_ratio, OpCounter, TriggerPolicy};
use crate::clpso::{clpso_step, ClpsoParams, ExemplarTable};
use crate::error::{Error, Result};
use crate::objectives::ObjectiveFunction;
use crate::rng::{derive_run_seed, RngStream};
use crate::swarm::{initialize, pso_step, SwarmConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Which update rule a battery runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Pso,
    Clpso,
    Aclpso,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pso => "pso",
            Algorithm::Clpso => "clpso",
            Algorithm::Aclpso => "aclpso",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Complete description of one battery: function, algorithm, swarm sizing,
/// and seeding. Identical specs produce identical results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub function_name: String,
    pub algorithm: Algorithm,
    /// Trigger threshold; read only when `algorithm` is [`Algorithm::Aclpso`].
    pub gamma: f64,
    pub swarm: SwarmConfig,
    pub clpso_params: ClpsoParams,
    pub num_runs: usize,
    pub master_seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.swarm.validate()?;
        self.clpso_params.validate()?;
        self.objective()?;
        if self.num_runs == 0 {
            return Err(Error::InvalidConfiguration(
                "num_runs must be at least 1".into(),
            ));
        }
        match self.algorithm {
            Algorithm::Aclpso => {
                TriggerPolicy::new(self.gamma, self.clpso_params.c)?;
                if self.swarm.num_particles < 3 {
                    return Err(Error::InvalidConfiguration(
                        "exemplar-based algorithms need at least 3 particles".into(),
                    ));
                }
            }
            Algorithm::Clpso => {
                if self.swarm.num_particles < 3 {
                    return Err(Error::InvalidConfiguration(
                        "exemplar-based algorithms need at least 3 particles".into(),
                    ));
                }
            }
            Algorithm::Pso => {}
        }
        Ok(())
    }

    /// Resolves the function named by the spec at the configured dimension.
    pub fn objective(&self) -> Result<ObjectiveFunction> {
        let f = ObjectiveFunction::by_name(&self.function_name, self.swarm.dimension)?;
        if f.dimension() != self.swarm.dimension {
            return Err(Error::InvalidConfiguration(
                "function dimension does not match swarm dimension".into(),
            ));
        }
        Ok(f)
    }
}

/// One run's trace and counters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_index: usize,
    pub seed: u64,
    /// Best-so-far fitness after each iteration (all particles updated).
    pub best_fitness_trace: Vec<f64>,
    /// Cumulative executed multiplications after each iteration.
    pub mult_trace: Vec<u64>,
    pub final_best: f64,
    pub counter: OpCounter,
}

/// Aggregate statistics over one battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub mean_final: f64,
    /// Sample standard deviation of the final bests, for diagnostics.
    pub std_dev_final: f64,
    pub computation_ratio_mean: f64,
    /// `round(computation_ratio_mean * max_iterations)`, half away from zero.
    pub effective_iterations: usize,
    /// Mean fitness of a paired ungated battery at `effective_iterations`;
    /// populated by [`compare_pair`].
    pub effective_mean: Option<f64>,
    pub num_runs: usize,
}

/// How a battery schedules its runs. Results are identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Runs the battery with runs scheduled across threads.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    run_experiment_with(spec, Execution::Parallel)
}

/// Runs the battery with explicit scheduling. Run `r` is seeded from
/// `(master_seed, r)` and owns its state, so scheduling cannot affect results.
pub fn run_experiment_with(spec: &ExperimentSpec, execution: Execution) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let f = spec.objective()?;
    match execution {
        Execution::Serial => (0..spec.num_runs)
            .map(|r| run_single(spec, &f, r))
            .collect(),
        Execution::Parallel => (0..spec.num_runs)
            .into_par_iter()
            .map(|r| run_single(spec, &f, r))
            .collect(),
    }
}

fn run_single(spec: &ExperimentSpec, f: &ObjectiveFunction, run_index: usize) -> Result<RunRecord> {
    let seed = derive_run_seed(spec.master_seed, run_index as u64);
    let mut config = spec.swarm.clone();
    config.seed = seed;
    let mut rng = RngStream::from_seed(seed);
    let mut state = initialize(&config, f, &mut rng)?;
    let iterations = config.max_iterations;
    let (n, d) = (config.num_particles, config.dimension);
    let mut trace = Vec::with_capacity(iterations);
    let mut mults = Vec::with_capacity(iterations);

    let counter = match spec.algorithm {
        Algorithm::Pso => {
            // The baseline reuses the guidance coefficient for both pulls.
            let c = spec.clpso_params.c;
            for i in 0..iterations {
                pso_step(&mut state, f, &config, c, c, &mut rng);
                trace.push(state.global_best_value);
                mults.push(ungated_mults(i + 1, n, d));
            }
            OpCounter::ungated(iterations, n, d)
        }
        Algorithm::Clpso => {
            let mut exemplars = ExemplarTable::assign_all(&state, &mut rng)?;
            for i in 0..iterations {
                clpso_step(
                    &mut state,
                    &mut exemplars,
                    f,
                    &config,
                    &spec.clpso_params,
                    &mut rng,
                )?;
                trace.push(state.global_best_value);
                mults.push(ungated_mults(i + 1, n, d));
            }
            OpCounter::ungated(iterations, n, d)
        }
        Algorithm::Aclpso => {
            let mut exemplars = ExemplarTable::assign_all(&state, &mut rng)?;
            let policy = TriggerPolicy::new(spec.gamma, spec.clpso_params.c)?;
            let mut counter = OpCounter::new();
            for _ in 0..iterations {
                aclpso_step(
                    &mut state,
                    &mut exemplars,
                    f,
                    &config,
                    &spec.clpso_params,
                    &policy,
                    &mut counter,
                    &mut rng,
                )?;
                trace.push(state.global_best_value);
                mults.push(counter.executed());
            }
            counter
        }
    };

    Ok(RunRecord {
        run_index,
        seed,
        final_best: *trace.last().expect("at least one iteration"),
        best_fitness_trace: trace,
        mult_trace: mults,
        counter,
    })
}

fn ungated_mults(iterations: usize, n: usize, d: usize) -> u64 {
    3 * iterations as u64 * (n * d) as u64
}

/// Aggregates a battery into means and the effective iteration count.
pub fn summarize(records: &[RunRecord], max_iterations: usize) -> Result<BatchSummary> {
    if records.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot summarize an empty battery".into(),
        ));
    }
    let len = records[0].best_fitness_trace.len();
    if records.iter().any(|r| r.best_fitness_trace.len() != len) {
        return Err(Error::InvalidArgument(
            "all traces in a battery must have equal length".into(),
        ));
    }
    let n = records.len() as f64;
    let mean_final = records.iter().map(|r| r.final_best).sum::<f64>() / n;
    let std_dev_final = if records.len() > 1 {
        (records
            .iter()
            .map(|r| (r.final_best - mean_final).powi(2))
            .sum::<f64>()
            / (n - 1.0))
            .sqrt()
    } else {
        0.0
    };
    let ratio_mean = records
        .iter()
        .map(|r| computation_ratio(&r.counter))
        .sum::<Result<f64>>()?
        / n;
    Ok(BatchSummary {
        mean_final,
        std_dev_final,
        computation_ratio_mean: ratio_mean,
        effective_iterations: (ratio_mean * max_iterations as f64).round() as usize,
        effective_mean: None,
        num_runs: records.len(),
    })
}

/// Mean over runs of the best fitness after `effective_iterations` iterations
/// (1-based).
pub fn effective_mean(records: &[RunRecord], effective_iterations: usize) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot average an empty battery".into(),
        ));
    }
    let len = records[0].best_fitness_trace.len();
    if effective_iterations == 0 || effective_iterations > len {
        return Err(Error::InvalidArgument(format!(
            "effective iteration {effective_iterations} outside trace length {len}"
        )));
    }
    Ok(records
        .iter()
        .map(|r| r.best_fitness_trace[effective_iterations - 1])
        .sum::<f64>()
        / records.len() as f64)
}

/// One comparison row: a gated battery against its ungated twin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub function_name: String,
    pub gamma: f64,
    pub num_runs: usize,
    pub master_seed: u64,
    pub clpso: BatchSummary,
    /// `effective_mean` holds the ungated battery's mean fitness at this
    /// battery's effective iteration count.
    pub aclpso: BatchSummary,
}

impl ComparisonRow {
    pub fn pct_computations(&self) -> f64 {
        self.aclpso.computation_ratio_mean * 100.0
    }

    pub fn effective_iterations(&self) -> usize {
        self.aclpso.effective_iterations
    }

    pub fn clpso_effective_mean(&self) -> f64 {
        self.aclpso
            .effective_mean
            .expect("populated by compare_pair")
    }
}

/// Both batteries of a comparison plus the assembled row.
#[derive(Debug, Clone)]
pub struct PairOutcome {
    pub row: ComparisonRow,
    pub clpso_records: Vec<RunRecord>,
    pub aclpso_records: Vec<RunRecord>,
}

/// Runs a gated battery and its ungated twin and assembles one comparison
/// row. The specs must agree on everything except algorithm and gamma.
pub fn compare_pair(
    aclpso_spec: &ExperimentSpec,
    clpso_spec: &ExperimentSpec,
) -> Result<ComparisonRow> {
    Ok(compare_pair_full(aclpso_spec, clpso_spec)?.row)
}

/// As [`compare_pair`], also returning the per-run records for trace output.
pub fn compare_pair_full(
    aclpso_spec: &ExperimentSpec,
    clpso_spec: &ExperimentSpec,
) -> Result<PairOutcome> {
    if aclpso_spec.algorithm != Algorithm::Aclpso {
        return Err(Error::InvalidConfiguration(
            "first spec of a pair must run the triggered algorithm".into(),
        ));
    }
    if clpso_spec.algorithm != Algorithm::Clpso {
        return Err(Error::InvalidConfiguration(
            "second spec of a pair must run the ungated algorithm".into(),
        ));
    }
    let comparable = aclpso_spec.function_name == clpso_spec.function_name
        && aclpso_spec.swarm == clpso_spec.swarm
        && aclpso_spec.clpso_params == clpso_spec.clpso_params
        && aclpso_spec.num_runs == clpso_spec.num_runs
        && aclpso_spec.master_seed == clpso_spec.master_seed;
    if !comparable {
        return Err(Error::InvalidConfiguration(
            "paired specs differ beyond algorithm and gamma".into(),
        ));
    }
    let clpso_records = run_experiment(clpso_spec)?;
    let aclpso_records = run_experiment(aclpso_spec)?;
    let row = assemble_row(aclpso_spec, &clpso_records, &aclpso_records)?;
    Ok(PairOutcome {
        row,
        clpso_records,
        aclpso_records,
    })
}

fn assemble_row(
    aclpso_spec: &ExperimentSpec,
    clpso_records: &[RunRecord],
    aclpso_records: &[RunRecord],
) -> Result<ComparisonRow> {
    let max_iterations = aclpso_spec.swarm.max_iterations;
    let clpso_summary = summarize(clpso_records, max_iterations)?;
    let mut aclpso_summary = summarize(aclpso_records, max_iterations)?;
    aclpso_summary.effective_mean = Some(effective_mean(
        clpso_records,
        aclpso_summary.effective_iterations,
    )?);
    Ok(ComparisonRow {
        function_name: aclpso_spec.function_name.clone(),
        gamma: aclpso_spec.gamma,
        num_runs: aclpso_spec.num_runs,
        master_seed: aclpso_spec.master_seed,
        clpso: clpso_summary,
        aclpso: aclpso_summary,
    })
}

/// The two thresholds of the standard comparison table.
pub const SUITE_GAMMAS: [f64; 2] = [1e-1, 1e-3];

/// Sizing for the full comparison table over the five-function suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub num_particles: usize,
    pub dimension: usize,
    pub max_iterations: usize,
    pub num_runs: usize,
    pub master_seed: u64,
    pub clpso_params: ClpsoParams,
}

/// Outcome of one suite cell, keyed by function and gamma.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub rows: Vec<ComparisonRow>,
    /// Pair records in row order, for optional trace output.
    pub pairs: Vec<PairOutcome>,
}

/// Builds the spec of one suite battery.
pub fn suite_spec(
    config: &SuiteConfig,
    function: &ObjectiveFunction,
    algorithm: Algorithm,
    gamma: f64,
) -> Result<ExperimentSpec> {
    Ok(ExperimentSpec {
        function_name: function.name().to_string(),
        algorithm,
        gamma,
        swarm: SwarmConfig::for_function(
            function,
            config.num_particles,
            config.max_iterations,
            config.master_seed,
        )?,
        clpso_params: config.clpso_params.clone(),
        num_runs: config.num_runs,
        master_seed: config.master_seed,
    })
}

/// Runs the whole table: for each suite function, one ungated battery and one
/// gated battery per threshold, rows ordered function-major with the larger
/// threshold first. The ungated battery is shared between the two rows of a
/// function; its spec is identical for both, so sharing cannot change results.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut rows = Vec::new();
    let mut pairs = Vec::new();
    for kind in crate::objectives::Kind::ALL {
        let function = ObjectiveFunction::new(kind, config.dimension)?;
        let clpso = suite_spec(config, &function, Algorithm::Clpso, 0.0)?;
        let clpso_records = run_experiment(&clpso)?;
        for gamma in SUITE_GAMMAS {
            let aclpso = suite_spec(config, &function, Algorithm::Aclpso, gamma)?;
            let aclpso_records = run_experiment(&aclpso)?;
            let row = assemble_row(&aclpso, &clpso_records, &aclpso_records)?;
            rows.push(row.clone());
            pairs.push(PairOutcome {
                row,
                clpso_records: clpso_records.clone(),
                aclpso_records,
            });
        }
    }
    Ok(SuiteOutcome { rows, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec(algorithm: Algorithm, gamma: f64) -> ExperimentSpec {
        ExperimentSpec {
            function_name: "sphere".into(),
            algorithm,
            gamma,
            swarm: SwarmConfig::new(8, 4, 60, -100.0, 100.0, 0).unwrap(),
            clpso_params: ClpsoParams::default(),
            num_runs: 4,
            master_seed: 1234,
        }
    }

    #[test]
    fn single_run_single_iteration_shape() {
        let mut spec = small_spec(Algorithm::Clpso, 0.0);
        spec.swarm.max_iterations = 1;
        spec.num_runs = 1;
        let records = run_experiment(&spec).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].best_fitness_trace.len(), 1);
        assert_eq!(records[0].final_best, records[0].best_fitness_trace[0]);
    }

    #[test]
    fn identical_specs_identical_records() {
        let spec = small_spec(Algorithm::Aclpso, 0.05);
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn serial_and_parallel_agree() {
        let spec = small_spec(Algorithm::Aclpso, 0.05);
        let serial = run_experiment_with(&spec, Execution::Serial).unwrap();
        let parallel = run_experiment_with(&spec, Execution::Parallel).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn unknown_function_rejected() {
        let mut spec = small_spec(Algorithm::Clpso, 0.0);
        spec.function_name = "nosuch".into();
        assert!(matches!(
            run_experiment(&spec),
            Err(Error::InvalidConfiguration(_))
        ));
    }

    #[test]
    fn traces_are_non_increasing_and_mults_increasing() {
        let spec = small_spec(Algorithm::Aclpso, 0.1);
        for record in run_experiment(&spec).unwrap() {
            for w in record.best_fitness_trace.windows(2) {
                assert!(w[1] <= w[0]);
            }
            for w in record.mult_trace.windows(2) {
                assert!(w[1] > w[0]);
            }
        }
    }

    #[test]
    fn summarize_singleton() {
        let rec = RunRecord {
            run_index: 0,
            seed: 1,
            best_fitness_trace: vec![9.0, 5.0],
            mult_trace: vec![3, 6],
            final_best: 5.0,
            counter: OpCounter::ungated(2, 1, 1),
        };
        let s = summarize(&[rec], 2).unwrap();
        assert_eq!(s.mean_final, 5.0);
        assert_eq!(s.std_dev_final, 0.0);
        assert_eq!(s.computation_ratio_mean, 1.0);
        assert_eq!(s.effective_iterations, 2);
        assert_eq!(s.effective_mean, None);
    }

    #[test]
    fn summarize_ungated_pair_has_unit_ratio() {
        let spec = small_spec(Algorithm::Clpso, 0.0);
        let records = run_experiment(&spec).unwrap();
        let s = summarize(&records, spec.swarm.max_iterations).unwrap();
        assert_eq!(s.computation_ratio_mean, 1.0);
        assert_eq!(s.effective_iterations, spec.swarm.max_iterations);
    }

    #[test]
    fn summarize_mixed_ratios() {
        // Counters chosen so the per-run ratios are exactly 0.40 and 0.47.
        let mk = |always, gated, total| RunRecord {
            run_index: 0,
            seed: 0,
            best_fitness_trace: vec![1.0],
            mult_trace: vec![always + gated],
            final_best: 1.0,
            counter: OpCounter {
                always_mults: always,
                gated_mults: gated,
                total_possible_gated: total,
            },
        };
        let records = vec![mk(20, 4, 40), mk(100, 41, 200)];
        let s = summarize(&records, 5000).unwrap();
        assert!((s.computation_ratio_mean - 0.435).abs() <= 1e-12);
        assert_eq!(s.effective_iterations, 2175);
    }

    #[test]
    fn summarize_rejects_bad_input() {
        assert!(summarize(&[], 10).is_err());
        let a = RunRecord {
            run_index: 0,
            seed: 0,
            best_fitness_trace: vec![1.0],
            mult_trace: vec![3],
            final_best: 1.0,
            counter: OpCounter::ungated(1, 1, 1),
        };
        let mut b = a.clone();
        b.best_fitness_trace = vec![1.0, 0.5];
        assert!(summarize(&[a, b], 2).is_err());
    }

    #[test]
    fn effective_mean_indexing() {
        let rec = |trace: Vec<f64>| RunRecord {
            run_index: 0,
            seed: 0,
            final_best: *trace.last().unwrap(),
            mult_trace: vec![0; trace.len()],
            best_fitness_trace: trace,
            counter: OpCounter::ungated(1, 1, 1),
        };
        let records = vec![rec(vec![8.0, 4.0, 2.0]), rec(vec![6.0, 4.0, 4.0])];
        assert_eq!(effective_mean(&records, 1).unwrap(), 7.0);
        assert_eq!(effective_mean(&records, 3).unwrap(), 3.0);
        assert!(effective_mean(&records, 0).is_err());
        assert!(effective_mean(&records, 4).is_err());
    }

    #[test]
    fn compare_pair_zero_gamma_columns_match() {
        let aclpso = small_spec(Algorithm::Aclpso, 0.0);
        let clpso = small_spec(Algorithm::Clpso, 0.0);
        let outcome = compare_pair_full(&aclpso, &clpso).unwrap();
        let row = &outcome.row;
        assert_eq!(row.clpso.mean_final, row.aclpso.mean_final);
        for (a, c) in outcome
            .aclpso_records
            .iter()
            .zip(outcome.clpso_records.iter())
        {
            assert_eq!(a.best_fitness_trace, c.best_fitness_trace);
        }
    }

    #[test]
    fn compare_pair_rejects_mismatched_specs() {
        let aclpso = small_spec(Algorithm::Aclpso, 0.1);
        let mut clpso = small_spec(Algorithm::Clpso, 0.0);
        clpso.num_runs = 7;
        assert!(compare_pair(&aclpso, &clpso).is_err());
        let swapped = compare_pair(&small_spec(Algorithm::Clpso, 0.0), &small_spec(Algorithm::Clpso, 0.0));
        assert!(swapped.is_err());
    }

    #[test]
    fn run_seeds_follow_master_seed_derivation() {
        let spec = small_spec(Algorithm::Clpso, 0.0);
        let records = run_experiment(&spec).unwrap();
        for (r, record) in records.iter().enumerate() {
            assert_eq!(record.seed, derive_run_seed(spec.master_seed, r as u64));
            assert_eq!(record.run_index, r);
        }
    }
}
