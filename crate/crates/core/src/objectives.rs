//! The five standard benchmark functions with their search domains and known
//! global optima. All are minimization problems with optimum value 0.

use crate::error::{Error, Result};
use std::f64::consts::{E, PI};

/// Which benchmark formula an [`ObjectiveFunction`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Sphere,
    Rosenbrock,
    Rastrigin,
    Griewank,
    Ackley,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::Sphere,
        Kind::Rosenbrock,
        Kind::Rastrigin,
        Kind::Griewank,
        Kind::Ackley,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Sphere => "sphere",
            Kind::Rosenbrock => "rosenbrock",
            Kind::Rastrigin => "rastrigin",
            Kind::Griewank => "griewank",
            Kind::Ackley => "ackley",
        }
    }

    /// Conventional symmetric search domain for this function.
    fn domain(self) -> (f64, f64) {
        match self {
            Kind::Sphere => (-100.0, 100.0),
            Kind::Rosenbrock => (-2.048, 2.048),
            Kind::Rastrigin => (-5.12, 5.12),
            Kind::Griewank => (-600.0, 600.0),
            Kind::Ackley => (-32.768, 32.768),
        }
    }
}

/// A named D-dimensional fitness map with box bounds and a known optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectiveFunction {
    kind: Kind,
    dimension: usize,
}

impl ObjectiveFunction {
    pub fn new(kind: Kind, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidConfiguration(
                "objective dimension must be positive".into(),
            ));
        }
        Ok(Self { kind, dimension })
    }

    /// Looks a function up by its case-insensitive name.
    pub fn by_name(name: &str, dimension: usize) -> Result<Self> {
        Kind::ALL
            .iter()
            .find(|k| k.name().eq_ignore_ascii_case(name))
            .copied()
            .map(|kind| Self::new(kind, dimension))
            .unwrap_or_else(|| {
                Err(Error::InvalidConfiguration(format!(
                    "unknown function '{name}' (expected one of sphere, rosenbrock, rastrigin, griewank, ackley)"
                )))
            })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn lower_bound(&self) -> f64 {
        self.kind.domain().0
    }

    pub fn upper_bound(&self) -> f64 {
        self.kind.domain().1
    }

    /// Position of the global minimum: all-ones for Rosenbrock, the origin for
    /// the rest.
    pub fn optimum_position(&self) -> Vec<f64> {
        let v = match self.kind {
            Kind::Rosenbrock => 1.0,
            _ => 0.0,
        };
        vec![v; self.dimension]
    }

    /// Value at the global minimum (0 for every suite function).
    pub fn optimum_value(&self) -> f64 {
        0.0
    }

    /// Evaluates the function at `x`.
    ///
    /// Errors on a dimension mismatch or a non-finite component; otherwise
    /// pure and deterministic.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::InvalidArgument(format!(
                "{} expects {} dimensions, got {}",
                self.name(),
                self.dimension,
                x.len()
            )));
        }
        if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite input component {bad}"
            )));
        }
        Ok(self.value(x))
    }

    /// Evaluation without argument checks; callers guarantee `x` is finite and
    /// has the right length.
    pub(crate) fn value(&self, x: &[f64]) -> f64 {
        match self.kind {
            Kind::Sphere => x.iter().map(|v| v * v).sum(),
            Kind::Rosenbrock => x
                .windows(2)
                .map(|w| {
                    let (a, b) = (w[0], w[1]);
                    100.0 * (a * a - b) * (a * a - b) + (a - 1.0) * (a - 1.0)
                })
                .sum(),
            Kind::Rastrigin => x
                .iter()
                .map(|&v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            Kind::Griewank => {
                let sum: f64 = x.iter().map(|v| v * v / 4000.0).sum();
                let prod: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum - prod + 1.0
            }
            Kind::Ackley => {
                let d = self.dimension as f64;
                let mean_sq: f64 = x.iter().map(|v| v * v).sum::<f64>() / d;
                let mean_cos: f64 = x.iter().map(|&v| (2.0 * PI * v).cos()).sum::<f64>() / d;
                -20.0 * (-0.2 * mean_sq.sqrt()).exp() - mean_cos.exp() + 20.0 + E
            }
        }
    }
}

/// The five benchmark functions at D = 30, in suite order.
pub fn standard_suite() -> Vec<ObjectiveFunction> {
    Kind::ALL
        .iter()
        .map(|&kind| ObjectiveFunction { kind, dimension: 30 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(kind: Kind, dim: usize) -> ObjectiveFunction {
        ObjectiveFunction::new(kind, dim).unwrap()
    }

    #[test]
    fn sphere_values() {
        assert_eq!(f(Kind::Sphere, 30).evaluate(&[0.0; 30]).unwrap(), 0.0);
        assert_eq!(f(Kind::Sphere, 3).evaluate(&[1.0, 2.0, 3.0]).unwrap(), 14.0);
    }

    #[test]
    fn rosenbrock_zero_at_ones() {
        assert_eq!(f(Kind::Rosenbrock, 30).evaluate(&[1.0; 30]).unwrap(), 0.0);
    }

    #[test]
    fn rastrigin_values() {
        assert_eq!(f(Kind::Rastrigin, 30).evaluate(&[0.0; 30]).unwrap(), 0.0);
        // Independent transcription of the formula gives exactly 40.5 here.
        let v = f(Kind::Rastrigin, 2).evaluate(&[0.5, -0.5]).unwrap();
        assert!((v - 40.5).abs() <= 1e-12 * 40.5, "got {v}");
    }

    #[test]
    fn griewank_zero_at_origin() {
        assert_eq!(f(Kind::Griewank, 30).evaluate(&[0.0; 30]).unwrap(), 0.0);
    }

    #[test]
    fn ackley_zero_at_origin() {
        let v = f(Kind::Ackley, 30).evaluate(&[0.0; 30]).unwrap();
        assert!(v.abs() <= 1e-12, "got {v}");
    }

    #[test]
    fn suite_shape_and_optima() {
        let suite = standard_suite();
        assert_eq!(suite.len(), 5);
        let names: Vec<_> = suite.iter().map(|f| f.name()).collect();
        assert_eq!(
            names,
            ["sphere", "rosenbrock", "rastrigin", "griewank", "ackley"]
        );
        for fun in &suite {
            assert_eq!(fun.dimension(), 30);
            assert_eq!(fun.optimum_value(), 0.0);
            assert!(fun.lower_bound() < fun.upper_bound());
            let opt = fun.optimum_position();
            assert!(opt
                .iter()
                .all(|&v| v >= fun.lower_bound() && v <= fun.upper_bound()));
            let at_opt = fun.evaluate(&opt).unwrap();
            assert!(at_opt.abs() <= 1e-12, "{} at optimum: {at_opt}", fun.name());
        }
        assert_eq!(suite[1].optimum_position(), vec![1.0; 30]);
        assert_eq!(suite[0].optimum_position(), vec![0.0; 30]);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let err = f(Kind::Sphere, 3).evaluate(&[0.0; 4]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn non_finite_rejected() {
        let err = f(Kind::Sphere, 2).evaluate(&[1.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
        let err = f(Kind::Ackley, 2)
            .evaluate(&[f64::INFINITY, 0.0])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn by_name_is_case_insensitive() {
        assert_eq!(
            ObjectiveFunction::by_name("Ackley", 10).unwrap().kind(),
            Kind::Ackley
        );
        assert_eq!(
            ObjectiveFunction::by_name("GRIEWANK", 10).unwrap().kind(),
            Kind::Griewank
        );
        assert!(ObjectiveFunction::by_name("nosuch", 10).is_err());
    }

    #[test]
    fn evaluation_is_deterministic() {
        let fun = f(Kind::Ackley, 5);
        let x = [0.3, -1.7, 2.2, 9.9, -31.0];
        assert_eq!(
            fun.evaluate(&x).unwrap().to_bits(),
            fun.evaluate(&x).unwrap().to_bits()
        );
    }
}
