//! Nests of metrics `{d_a}` indexed by a level `a ∈ (0, 1)` and their
//! correspondence with step KM-fuzzy metric spaces.
//!
//! Each unordered pair stores level breakpoints `0 < a_1 < … < a_m < 1`
//! and distances `w_0, …, w_m`, with `d_a = w_j` on `[a_j, a_{j+1})`
//! (the first piece is `(0, a_1)`). Holding the value on the right makes
//! `d_a = inf_{b > a} d_b` structural.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::distribution::{Distribution, Level, RationalText};
use crate::error::{NestError, SpaceError};
use crate::fuzzy_metric::FuzzyMetricSpace;
use crate::grade::{Grade, TNormKind};
use crate::metric::{
    check_unique_labels, first_metric_violation, first_triangle_violation, FiniteMetric, MetricViolation,
};
use crate::rational::{format_rational, Rational};
use crate::report::{CheckResult, ValidationReport};

/// Level data of one pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairLevels {
    cuts: Vec<Grade>,
    dists: Vec<Rational>,
}

impl PairLevels {
    /// Validates shapes and merges neighbouring pieces with equal distance.
    /// Monotonicity is left to [`validate_nest`].
    fn new(cuts: Vec<Grade>, dists: Vec<Rational>) -> Result<Self, PairIssue> {
        if dists.len() != cuts.len() + 1 {
            return Err(PairIssue::Shape);
        }
        if cuts.iter().any(|c| c.is_zero() || c.is_one()) || cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PairIssue::Levels);
        }
        if dists.iter().any(Signed::is_negative) {
            return Err(PairIssue::Negative);
        }
        let mut out_cuts = Vec::with_capacity(cuts.len());
        let mut out_dists = vec![dists[0].clone()];
        for (c, w) in cuts.into_iter().zip(dists.into_iter().skip(1)) {
            if *out_dists.last().unwrap() != w {
                out_cuts.push(c);
                out_dists.push(w);
            }
        }
        Ok(PairLevels { cuts: out_cuts, dists: out_dists })
    }

    pub fn constant(w: Rational) -> Self {
        PairLevels { cuts: Vec::new(), dists: vec![w] }
    }

    pub fn cuts(&self) -> &[Grade] {
        &self.cuts
    }

    pub fn dists(&self) -> &[Rational] {
        &self.dists
    }

    /// `d_a` for this pair.
    pub fn at(&self, a: &Grade) -> &Rational {
        &self.dists[self.cuts.partition_point(|c| c <= a)]
    }

    fn is_monotone(&self) -> bool {
        self.dists.windows(2).all(|w| w[0] <= w[1])
    }
}

enum PairIssue {
    Shape,
    Levels,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricNest {
    points: Vec<String>,
    /// Keyed by `(i, j)` with `i < j`.
    pairs: BTreeMap<(usize, usize), PairLevels>,
}

/// A maximal level interval `[lo, hi)` on which every pair is constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPiece {
    pub lo: Grade,
    pub hi: Grade,
}

impl LevelPiece {
    /// A level strictly inside the piece.
    pub fn representative(&self) -> Grade {
        self.lo.midpoint(&self.hi)
    }

    pub fn describe(&self) -> String {
        if self.lo.is_zero() {
            format!("a ∈ (0, {})", self.hi)
        } else {
            format!("a ∈ [{}, {})", self.lo, self.hi)
        }
    }
}

impl MetricNest {
    /// Builds a nest from `(i, j, cuts, dists)` rows, one per unordered pair.
    pub fn new(points: Vec<String>, rows: Vec<(usize, usize, Vec<Grade>, Vec<Rational>)>) -> Result<Self, NestError> {
        if let Some(dup) = check_unique_labels(&points) {
            return Err(NestError::DuplicateLabel(dup));
        }
        let n = points.len();
        let name = |i: usize| points[i].clone();
        let mut pairs = BTreeMap::new();
        for (i, j, cuts, dists) in rows {
            if i >= n || j >= n || i == j {
                return Err(NestError::BadPairKey(format!("{i}|{j}")));
            }
            let key = (i.min(j), i.max(j));
            let levels = PairLevels::new(cuts, dists).map_err(|e| match e {
                PairIssue::Shape => NestError::Shape(name(key.0), name(key.1)),
                PairIssue::Levels => NestError::Levels(name(key.0), name(key.1)),
                PairIssue::Negative => NestError::Negative(name(key.0), name(key.1)),
            })?;
            if pairs.insert(key, levels).is_some() {
                return Err(NestError::DuplicatePair(name(key.0), name(key.1)));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if !pairs.contains_key(&(i, j)) {
                    return Err(NestError::MissingPair(name(i), name(j)));
                }
            }
        }
        Ok(MetricNest { points, pairs })
    }

    /// The constant nest `d_a = d` for every `a`.
    pub fn constant(d: &FiniteMetric) -> Self {
        let n = d.len();
        let pairs = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), PairLevels::constant(d.dist(i, j).clone())))
            .collect();
        MetricNest { points: d.points().to_vec(), pairs }
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

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairLevels> {
        self.pairs.get(&(i.min(j), i.max(j)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &PairLevels)> {
        self.pairs.iter().map(|(&(i, j), p)| (i, j, p))
    }

    /// `d_a(i, j)`.
    pub fn distance_at(&self, i: usize, j: usize, a: &Grade) -> Rational {
        match self.pair(i, j) {
            Some(p) => p.at(a).clone(),
            None => Rational::zero(),
        }
    }

    /// The distance matrix of `d_a`.
    pub fn slice(&self, a: &Grade) -> Vec<Vec<Rational>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| self.distance_at(i, j, a)).collect()).collect()
    }

    /// Union of all level breakpoints, sorted.
    pub fn all_cuts(&self) -> Vec<Grade> {
        let mut cuts: Vec<Grade> = self.pairs.values().flat_map(|p| p.cuts.iter().cloned()).collect();
        cuts.sort();
        cuts.dedup();
        cuts
    }

    /// The level pieces on which every slice is constant, bottom to top.
    pub fn pieces(&self) -> Vec<LevelPiece> {
        let mut bounds = vec![Grade::zero()];
        bounds.extend(self.all_cuts());
        bounds.push(Grade::one());
        bounds.windows(2).map(|w| LevelPiece { lo: w[0].clone(), hi: w[1].clone() }).collect()
    }

    /// Probe levels: every breakpoint plus one level inside each piece.
    pub fn probe_levels(&self) -> Vec<Grade> {
        let mut probes: Vec<Grade> = self.all_cuts();
        probes.extend(self.pieces().iter().map(LevelPiece::representative));
        probes.sort();
        probes
    }

    fn describe_pair(&self, i: usize, j: usize) -> String {
        format!("({}, {})", self.points[i], self.points[j])
    }
}

/// Checks monotonicity of every pair and the metric axioms on every
/// distinct slice, reporting the first witness of each kind.
pub fn validate_nest(nest: &MetricNest) -> ValidationReport {
    let mut report = ValidationReport::new(format!("nest of metrics on {} points", nest.len()));
    let monotone = nest.pairs().find(|(_, _, p)| !p.is_monotone()).map(|(i, j, p)| {
        let k = p.dists.windows(2).position(|w| w[0] > w[1]).unwrap();
        format!(
            "pair {}: d_a drops from {} to {} at a = {}",
            nest.describe_pair(i, j),
            format_rational(&p.dists[k]),
            format_rational(&p.dists[k + 1]),
            p.cuts[k]
        )
    });
    report.push(CheckResult::from_witness("monotone", monotone));

    let mut positive = None;
    let mut triangle = None;
    for piece in nest.pieces() {
        let slice = nest.slice(&piece.representative());
        let name = |i: usize| nest.points[i].as_str();
        if positive.is_none() {
            if let Some(MetricViolation::NonPositive(i, j)) = first_metric_violation(&slice) {
                positive =
                    Some(format!("slice {}: d({}, {}) = 0 for distinct points", piece.describe(), name(i), name(j)));
            }
        }
        if triangle.is_none() {
            if let Some((i, j, k)) = first_triangle_violation(&slice) {
                triangle = Some(format!(
                    "slice {}: triple ({}, {}, {}): d({}, {}) = {} > d({}, {}) + d({}, {}) = {}",
                    piece.describe(),
                    name(i),
                    name(j),
                    name(k),
                    name(i),
                    name(k),
                    format_rational(&slice[i][k]),
                    name(i),
                    name(j),
                    name(j),
                    name(k),
                    format_rational(&(&slice[i][j] + &slice[j][k])),
                ));
            }
        }
    }
    report.push(CheckResult::from_witness("positive", positive));
    report.push(CheckResult::from_witness("triangle", triangle));
    report
}

/// `d_a(x, y) = sup { t | M(x, y, t) <= a }` materialized per pair.
pub fn nest_from_fuzzy_metric(space: &FuzzyMetricSpace) -> Result<MetricNest, NestError> {
    let n = space.len();
    let mut pairs = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let step = match space.entry(i, j) {
                Distribution::Step(s) => s,
                Distribution::Scaled(_) => return Err(NestError::UnsupportedVariant),
                Distribution::PointOne => {
                    pairs.insert((i, j), PairLevels::constant(Rational::zero()));
                    continue;
                }
            };
            if !step.terminal().is_one() {
                return Err(NestError::InfiniteLevel(space.points()[i].clone(), space.points()[j].clone()));
            }
            let cuts: Vec<Grade> = step.interior_values().cloned().collect();
            let dists = std::iter::once(Grade::zero())
                .chain(cuts.iter().cloned())
                .map(|a| match step.level(&a) {
                    Level::Finite(w) => w,
                    _ => unreachable!("terminal value 1 keeps levels below 1 finite"),
                })
                .collect();
            let levels =
                PairLevels::new(cuts, dists).unwrap_or_else(|_| unreachable!("interior values are valid cuts"));
            pairs.insert((i, j), levels);
        }
    }
    Ok(MetricNest { points: space.points().to_vec(), pairs })
}

/// `M(x, y, t) = sup { a | d_a(x, y) < t }`, a step function with
/// breakpoints at the distances and values at the level indices.
pub fn fuzzy_metric_from_nest(nest: &MetricNest) -> Result<FuzzyMetricSpace, SpaceError> {
    let n = nest.len();
    let mut entries = vec![vec![Distribution::PointOne; n]; n];
    for (i, j, p) in nest.pairs() {
        let mut values = vec![Grade::zero()];
        values.extend(p.cuts.iter().cloned());
        values.push(Grade::one());
        let entry = Distribution::step(p.dists.clone(), values)?;
        entries[i][j] = entry.clone();
        entries[j][i] = entry;
    }
    FuzzyMetricSpace::from_entries(nest.points.clone(), entries, TNormKind::Minimum)
}

/// Space → nest → space; `Ok(None)` when the result equals the input.
pub fn roundtrip_space(space: &FuzzyMetricSpace) -> Result<Option<String>, String> {
    let nest = nest_from_fuzzy_metric(space).map_err(|e| e.to_string())?;
    let back = fuzzy_metric_from_nest(&nest).map_err(|e| e.to_string())?;
    let n = space.len();
    for i in 0..n {
        for j in 0..n {
            if space.entry(i, j) != back.entry(i, j) {
                return Ok(Some(format!(
                    "pair ({}, {}): {} became {}",
                    space.points()[i],
                    space.points()[j],
                    space.entry(i, j),
                    back.entry(i, j)
                )));
            }
        }
    }
    Ok(None)
}

/// Nest → space → nest; `Ok(None)` when the result equals the input.
pub fn roundtrip_nest(nest: &MetricNest) -> Result<Option<String>, String> {
    let space = fuzzy_metric_from_nest(nest).map_err(|e| e.to_string())?;
    let back = nest_from_fuzzy_metric(&space).map_err(|e| e.to_string())?;
    for (i, j, p) in nest.pairs() {
        let q = back.pair(i, j).expect("same point set");
        if p != q {
            return Ok(Some(format!(
                "pair {}: {} became {}",
                nest.describe_pair(i, j),
                describe_levels(p),
                describe_levels(q)
            )));
        }
    }
    Ok(None)
}

fn describe_levels(p: &PairLevels) -> String {
    let a: Vec<String> = p.cuts.iter().map(Grade::to_string).collect();
    let w: Vec<String> = p.dists.iter().map(format_rational).collect();
    format!("{{a:({}), w:({})}}", a.join(","), w.join(","))
}

#[derive(Serialize, Deserialize)]
struct PairFile {
    a: Vec<Grade>,
    w: Vec<RationalText>,
}

#[derive(Serialize, Deserialize)]
struct NestFile {
    points: Vec<String>,
    pairs: BTreeMap<String, PairFile>,
}

impl Serialize for MetricNest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs = self
            .pairs()
            .map(|(i, j, p)| {
                (
                    format!("{}|{}", self.points[i], self.points[j]),
                    PairFile { a: p.cuts.clone(), w: p.dists.iter().cloned().map(RationalText).collect() },
                )
            })
            .collect();
        NestFile { points: self.points.clone(), pairs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MetricNest {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let file = NestFile::deserialize(d)?;
        let index = |label: &str| {
            file.points.iter().position(|p| p == label).ok_or_else(|| NestError::UnknownPoint(label.to_string()))
        };
        let mut rows = Vec::with_capacity(file.pairs.len());
        for (key, pair) in &file.pairs {
            let (x, y) = key.split_once('|').ok_or_else(|| D::Error::custom(NestError::BadPairKey(key.clone())))?;
            let (i, j) = (index(x).map_err(D::Error::custom)?, index(y).map_err(D::Error::custom)?);
            if i == j {
                return Err(D::Error::custom(NestError::BadPairKey(key.clone())));
            }
            rows.push((i, j, pair.a.clone(), pair.w.iter().map(|r| r.0.clone()).collect()));
        }
        MetricNest::new(file.points.clone(), rows).map_err(D::Error::custom)
    }
}
