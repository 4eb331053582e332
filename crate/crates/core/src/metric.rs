//! Classical metrics on finite labelled point sets.

use std::collections::HashSet;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::distribution::RationalText;
use crate::error::MetricError;
use crate::rational::{format_rational, Rational};
use crate::report::{CheckResult, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetric {
    points: Vec<String>,
    dist: Vec<Vec<Rational>>,
}

/// First failed metric axiom of a square matrix, in scan order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricViolation {
    NonzeroDiagonal(usize),
    NonPositive(usize, usize),
    Asymmetric(usize, usize),
    /// `d(i, k) > d(i, j) + d(j, k)`.
    Triangle(usize, usize, usize),
}

#[allow(clippy::needless_range_loop)]
pub fn first_metric_violation(dist: &[Vec<Rational>]) -> Option<MetricViolation> {
    let n = dist.len();
    for i in 0..n {
        if !dist[i][i].is_zero() {
            return Some(MetricViolation::NonzeroDiagonal(i));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && !dist[i][j].is_positive() {
                return Some(MetricViolation::NonPositive(i, j));
            }
            if dist[i][j] != dist[j][i] {
                return Some(MetricViolation::Asymmetric(i, j));
            }
        }
    }
    first_triangle_violation(dist).map(|(i, j, k)| MetricViolation::Triangle(i, j, k))
}

pub(crate) fn first_triangle_violation(dist: &[Vec<Rational>]) -> Option<(usize, usize, usize)> {
    let n = dist.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if dist[i][k] > &dist[i][j] + &dist[j][k] {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

pub(crate) fn check_unique_labels(points: &[String]) -> Option<String> {
    let mut seen = HashSet::new();
    points.iter().find(|p| !seen.insert(p.as_str())).cloned()
}

/// Row-by-row metric axioms of a labelled matrix, with witnesses.
pub fn validate_matrix(points: &[String], dist: &[Vec<Rational>]) -> ValidationReport {
    let mut report = ValidationReport::new("metric");
    let n = points.len();
    if dist.len() != n || dist.iter().any(|row| row.len() != n) {
        report.push(CheckResult::fail("shape", format!("expected a {n} x {n} matrix")));
        return report;
    }
    let describe = |i: usize, j: usize| format!("d({}, {}) = {}", points[i], points[j], format_rational(&dist[i][j]));
    let pairs = || (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    report.push(CheckResult::from_witness(
        "zero diagonal",
        (0..n).find(|&i| !dist[i][i].is_zero()).map(|i| describe(i, i)),
    ));
    report.push(CheckResult::from_witness(
        "positive",
        pairs().find(|&(i, j)| i != j && !dist[i][j].is_positive()).map(|(i, j)| describe(i, j)),
    ));
    report.push(CheckResult::from_witness(
        "symmetric",
        pairs()
            .find(|&(i, j)| dist[i][j] != dist[j][i])
            .map(|(i, j)| format!("{} but {}", describe(i, j), describe(j, i))),
    ));
    report.push(CheckResult::from_witness(
        "triangle",
        first_triangle_violation(dist).map(|(i, j, k)| {
            format!("{} > {} + {}", describe(i, k), format_rational(&dist[i][j]), format_rational(&dist[j][k]))
        }),
    ));
    report
}

impl FiniteMetric {
    pub fn new(points: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        let n = points.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(MetricError::ShapeMismatch(n));
        }
        if let Some(dup) = check_unique_labels(&points) {
            return Err(MetricError::DuplicateLabel(dup));
        }
        let name = |i: usize| points[i].clone();
        match first_metric_violation(&dist) {
            None => Ok(FiniteMetric { points, dist }),
            Some(MetricViolation::NonzeroDiagonal(i)) => Err(MetricError::NonzeroDiagonal(name(i))),
            Some(MetricViolation::NonPositive(i, j)) => Err(MetricError::NonPositive(name(i), name(j))),
            Some(MetricViolation::Asymmetric(i, j)) => Err(MetricError::Asymmetric(name(i), name(j))),
            Some(MetricViolation::Triangle(i, j, k)) => Err(MetricError::Triangle(name(i), name(j), name(k))),
        }
    }

    /// Taxicab distance between rational points of the plane.
    pub fn taxicab(points: Vec<String>, coords: &[(Rational, Rational)]) -> Result<Self, MetricError> {
        let dist = coords
            .iter()
            .map(|(x1, y1)| coords.iter().map(|(x2, y2)| (x1 - x2).abs() + (y1 - y2).abs()).collect())
            .collect();
        FiniteMetric::new(points, dist)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    /// Positive rescaling `c · d`.
    pub fn scaled(&self, factor: &Rational) -> FiniteMetric {
        assert!(factor.is_positive());
        FiniteMetric {
            points: self.points.clone(),
            dist: self.dist.iter().map(|row| row.iter().map(|d| d * factor).collect()).collect(),
        }
    }

    pub fn describe(&self, i: usize, j: usize) -> String {
        format!("d({}, {}) = {}", self.points[i], self.points[j], format_rational(&self.dist[i][j]))
    }
}

#[derive(Serialize, Deserialize)]
pub struct MetricFile {
    pub points: Vec<String>,
    pub dist: Vec<Vec<RationalText>>,
}

impl Serialize for FiniteMetric {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MetricFile {
            points: self.points.clone(),
            dist: self.dist.iter().map(|row| row.iter().cloned().map(RationalText).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMetric {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = MetricFile::deserialize(d)?;
        let dist = file.dist.into_iter().map(|row| row.into_iter().map(|r| r.0).collect()).collect();
        FiniteMetric::new(file.points, dist).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn accepts_valid_metric() {
        let m = FiniteMetric::new(labels(3), mat(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]])).unwrap();
        assert_eq!(m.dist(0, 2), &int(2));
    }

    #[test]
    fn reports_each_axiom() {
        assert!(matches!(
            FiniteMetric::new(labels(3), mat(&[&[0, 1, 5], &[1, 0, 1], &[5, 1, 0]])),
            Err(MetricError::Triangle(..))
        ));
        assert!(matches!(FiniteMetric::new(labels(2), mat(&[&[0, 1], &[2, 0]])), Err(MetricError::Asymmetric(..))));
        assert!(matches!(FiniteMetric::new(labels(2), mat(&[&[0, 0], &[0, 0]])), Err(MetricError::NonPositive(..))));
        assert!(matches!(
            FiniteMetric::new(labels(2), mat(&[&[1, 1], &[1, 0]])),
            Err(MetricError::NonzeroDiagonal(..))
        ));
        assert!(matches!(FiniteMetric::new(labels(2), mat(&[&[0, 1]])), Err(MetricError::ShapeMismatch(2))));
    }

    #[test]
    fn taxicab_on_a_line() {
        let pts = [(int(0), int(0)), (int(1), int(0)), (int(2), int(0))];
        let m = FiniteMetric::taxicab(labels(3), &pts).unwrap();
        assert_eq!(m.matrix(), mat(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]).as_slice());
    }
}
