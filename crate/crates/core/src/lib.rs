//! Exact KM-fuzzy metrics, metric nests, and crisp and fuzzy betweenness
//! relations on finite point sets.

pub mod distribution;
pub mod error;
pub mod fuzzy_metric;
pub mod fuzzy_relation;
pub mod grade;
pub mod io;
pub mod metric;
pub mod nest;
pub mod oracle;
pub mod rational;
pub mod relation;
pub mod report;

pub use distribution::{Distribution, Family, Generator, Level, ScaledDistribution, StepDistribution};
pub use fuzzy_metric::FuzzyMetricSpace;
pub use grade::{Grade, TNormKind};
pub use metric::FiniteMetric;
pub use rational::Rational;
pub use report::{CheckResult, Status, ValidationReport};
