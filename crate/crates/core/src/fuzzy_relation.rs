//! Fuzzy ternary relations, fuzzy betweenness axiom systems, and the two
//! constructions of a fuzzy betweenness relation from a KM-fuzzy metric.

use std::fmt;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::distribution::{godel_residual_inf, supmin_convolve, Distribution, Family};
use crate::error::{DistributionError, RelationError};
use crate::fuzzy_metric::FuzzyMetricSpace;
use crate::grade::{tnorm_apply, Grade, TNormKind};
use crate::nest::{nest_from_fuzzy_metric, MetricNest};
use crate::rational::{int, Rational};
use crate::relation::{
    betweenness_at_level, describe_witness, first_assignment, scheme, space_betweenness_at_level, Scheme,
    TernaryRelation, FIVE_POINT, FOUR_POINT,
};
use crate::report::{CheckResult, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FuzzyTernaryRelation {
    n: usize,
    grades: Vec<Grade>,
}

impl FuzzyTernaryRelation {
    /// `grades` in `x`-major, then `y`, then `z` order.
    pub fn new(n: usize, grades: Vec<Grade>) -> Result<Self, RelationError> {
        if grades.len() != n * n * n {
            return Err(RelationError::TensorShape { got: grades.len(), expected: n * n * n });
        }
        Ok(FuzzyTernaryRelation { n, grades })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Grade) -> Self {
        let mut grades = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    grades.push(f(x, y, z));
                }
            }
        }
        FuzzyTernaryRelation { n, grades }
    }

    pub fn try_from_fn<E>(n: usize, mut f: impl FnMut(usize, usize, usize) -> Result<Grade, E>) -> Result<Self, E> {
        let mut grades = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    grades.push(f(x, y, z)?);
                }
            }
        }
        Ok(FuzzyTernaryRelation { n, grades })
    }

    pub fn ones(n: usize) -> Self {
        FuzzyTernaryRelation { n, grades: vec![Grade::one(); n * n * n] }
    }

    /// Indicator of a crisp relation.
    pub fn from_crisp(t: &TernaryRelation) -> Self {
        Self::from_fn(t.n(), |x, y, z| if t.contains(x, y, z) { Grade::one() } else { Grade::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> &Grade {
        &self.grades[(x * self.n + y) * self.n + z]
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, g: Grade) {
        let n = self.n;
        self.grades[(x * n + y) * n + z] = g;
    }

    pub fn grades(&self) -> &[Grade] {
        &self.grades
    }

    /// Entries with a positive grade.
    pub fn support(&self) -> impl Iterator<Item = ((usize, usize, usize), &Grade)> + '_ {
        let n = self.n;
        self.grades
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_zero())
            .map(move |(k, g)| ((k / (n * n), (k / n) % n, k % n), g))
    }

    /// Largest `|self - other|` and the first triple attaining a nonzero difference.
    pub fn max_discrepancy(&self, other: &FuzzyTernaryRelation) -> Discrepancy {
        let n = self.n;
        let mut max = Rational::zero();
        let mut first = None;
        for (k, (a, b)) in self.grades.iter().zip(&other.grades).enumerate() {
            let diff = (a.value() - b.value()).abs();
            if !diff.is_zero() && first.is_none() {
                first = Some((k / (n * n), (k / n) % n, k % n));
            }
            if diff > max {
                max = diff;
            }
        }
        (max, first)
    }
}

impl fmt::Display for FuzzyTernaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((x, y, z), g) in self.support() {
            writeln!(f, "({x},{y},{z}) {g}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomSystem {
    /// FB1–FB4.
    Star,
    /// SFB1–SFB4.
    StrongStar,
    /// FBR1–FBR5.
    Fbr,
}

impl AxiomSystem {
    pub const ALL: [AxiomSystem; 3] = [AxiomSystem::Star, AxiomSystem::StrongStar, AxiomSystem::Fbr];

    pub fn prefix(self) -> &'static str {
        match self {
            AxiomSystem::Star => "FB",
            AxiomSystem::StrongStar => "SFB",
            AxiomSystem::Fbr => "FBR",
        }
    }
}

fn lhs_rhs(lhs: &Grade, rhs: &Grade) -> String {
    format!("lhs = {lhs} > rhs = {rhs}")
}

/// Exhaustive check of one axiom system under `kind`.
pub fn check_fuzzy_axioms(b: &FuzzyTernaryRelation, system: AxiomSystem, kind: TNormKind) -> ValidationReport {
    let n = b.n;
    let p = system.prefix();
    let mut report = ValidationReport::new(format!("{p} axioms under {kind} on {n} points"));

    let symmetry = first_assignment(n, 3, |v| b.get(v[0], v[1], v[2]) != b.get(v[2], v[1], v[0])).map(|v| {
        format!(
            "{}: B(x,y,z) = {} but B(z,y,x) = {}",
            describe_witness("x,y,z", &v),
            b.get(v[0], v[1], v[2]),
            b.get(v[2], v[1], v[0])
        )
    });
    report.push(CheckResult::from_witness(format!("{p}1"), symmetry));

    let reflexive = first_assignment(n, 2, |v| !b.get(v[0], v[1], v[1]).is_one())
        .map(|v| format!("{}: B(x,y,y) = {} < 1", describe_witness("x,y", &v), b.get(v[0], v[1], v[1])));
    report.push(CheckResult::from_witness(format!("{p}2"), reflexive));

    let antisym = first_assignment(n, 3, |v| {
        let (l, r) = (b.get(v[0], v[1], v[2]), b.get(v[0], v[2], v[1]));
        v[1] != v[2]
            && match system {
                AxiomSystem::Star => l.is_one() && r.is_one(),
                _ => !tnorm_apply(kind, l, r).is_zero(),
            }
    })
    .map(|v| {
        let (l, r) = (b.get(v[0], v[1], v[2]), b.get(v[0], v[2], v[1]));
        format!("{}: B(x,y,z) = {l}, B(x,z,y) = {r} with y != z", describe_witness("x,y,z", &v))
    });
    report.push(CheckResult::from_witness(format!("{p}3"), antisym));

    let end_point = transitivity(b, kind, |v| (v[0], v[1], v[3]));
    report.push(CheckResult::from_witness(format!("{p}4"), end_point));
    if system == AxiomSystem::Fbr {
        let middle = transitivity(b, kind, |v| (v[1], v[2], v[3]));
        report.push(CheckResult::from_witness("FBR5", middle));
    }
    report
}

/// `B(o,x,y) * B(o,y,z) <= B(target)` over `(o, x, y, z)`.
fn transitivity(
    b: &FuzzyTernaryRelation,
    kind: TNormKind,
    target: impl Fn(&[usize]) -> (usize, usize, usize),
) -> Option<String> {
    let lhs = |v: &[usize]| tnorm_apply(kind, b.get(v[0], v[1], v[2]), b.get(v[0], v[2], v[3]));
    first_assignment(b.n, 4, |v| {
        let (p, q, r) = target(v);
        lhs(v) > *b.get(p, q, r)
    })
    .map(|v| {
        let (p, q, r) = target(&v);
        format!("{}: {}", describe_witness("o,x,y,z", &v), lhs_rhs(&lhs(&v), b.get(p, q, r)))
    })
}

/// `B(x,y,z) = inf_t (M(x,z,t) → sup_{s+r=t} M(x,y,s) ∧ M(y,z,r))` with the
/// Gödel implication.
pub fn bm_from_fuzzy_metric(space: &FuzzyMetricSpace) -> Result<FuzzyTernaryRelation, DistributionError> {
    let n = space.len();
    FuzzyTernaryRelation::try_from_fn(n, |x, y, z| {
        let conv = supmin_convolve(space.entry(x, y), space.entry(y, z))?;
        godel_residual_inf(space.entry(x, z), &conv)
    })
}

/// The same formula with the split fixed at `s = r = t/2`, i.e.
/// `inf_t (M(x,z,t) → M(x,y,t/2) ∧ M(y,z,t/2))`. This variant is not a
/// fuzzy betweenness relation; it is kept as a negative control.
pub fn bm_nonsplit(space: &FuzzyMetricSpace) -> Result<FuzzyTernaryRelation, DistributionError> {
    let two = int(2);
    FuzzyTernaryRelation::try_from_fn(space.len(), |x, y, z| {
        let meet = space.entry(x, y).dilate(&two).meet(&space.entry(y, z).dilate(&two))?;
        godel_residual_inf(space.entry(x, z), &meet)
    })
}

/// `B(x,y,z) = sup { a | d_a(x,z) = d_a(x,y) + d_a(y,z) }`, read off the
/// topmost level piece on which the equality holds.
pub fn bd_from_nest(nest: &MetricNest) -> FuzzyTernaryRelation {
    let pieces = nest.pieces();
    let rels: Vec<TernaryRelation> = pieces.iter().map(|p| betweenness_at_level(nest, &p.representative())).collect();
    FuzzyTernaryRelation::from_fn(nest.len(), |x, y, z| {
        match pieces.iter().zip(&rels).rev().find(|(_, r)| r.contains(x, y, z)) {
            Some((p, _)) => p.hi.clone(),
            None => Grade::zero(),
        }
    })
}

/// `bd_from_nest` for any space. Scaled spaces have level-independent
/// betweenness (each slice is a positive multiple of the scale metric),
/// so their grades are 0 or 1.
pub fn bd_from_space(space: &FuzzyMetricSpace) -> Result<FuzzyTernaryRelation, String> {
    match space.family() {
        Family::Scaled(_) => {
            let rel = space_betweenness_at_level(space, &Grade::frac(1, 2));
            Ok(FuzzyTernaryRelation::from_crisp(&rel))
        }
        _ => Ok(bd_from_nest(&nest_from_fuzzy_metric(space).map_err(|e| e.to_string())?)),
    }
}

/// `{ (x, y, z) | B(x, y, z) >= a }`.
pub fn level_cut(b: &FuzzyTernaryRelation, a: &Grade) -> TernaryRelation {
    TernaryRelation::from_fn(b.n, |x, y, z| b.get(x, y, z) >= a)
}

/// `a <= B(x,y,z) ⟺ ∀ b < a, (x,y,z) ∈ B_{d_b}` at every probe level:
/// breakpoints, piece midpoints, and 1.
pub fn check_cut_characterization(nest: &MetricNest) -> CheckResult {
    let bd = bd_from_nest(nest);
    let pieces = nest.pieces();
    let rels: Vec<TernaryRelation> = pieces.iter().map(|p| betweenness_at_level(nest, &p.representative())).collect();
    let mut probes = nest.probe_levels();
    probes.push(Grade::one());
    for a in probes {
        let lhs = level_cut(&bd, &a);
        let rhs = pieces
            .iter()
            .zip(&rels)
            .filter(|(p, _)| p.lo < a)
            .fold(TernaryRelation::full(nest.len()), |acc, (_, r)| acc.intersection(r));
        if lhs != rhs {
            let (x, y, z) = lhs.first_not_in(&rhs).or_else(|| rhs.first_not_in(&lhs)).unwrap();
            return CheckResult::fail(
                "cut",
                format!(
                    "at a = {a}: ({x}, {y}, {z}) has grade {} but equality below a is {}",
                    bd.get(x, y, z),
                    rhs.contains(x, y, z)
                ),
            );
        }
    }
    CheckResult::pass("cut")
}

/// For strictly increasing distributions (the scaled families):
/// `a <= B(x,y,z) ⟺ (x,y,z) ∈ B_{d_a}` for `a` in `(0, 1)`.
pub fn check_strict_characterization(space: &FuzzyMetricSpace) -> Result<CheckResult, String> {
    if !matches!(space.family(), Family::Scaled(_)) {
        return Err("the strict characterization applies to scaled spaces only".into());
    }
    let b = bm_from_fuzzy_metric(space).map_err(|e| e.to_string())?;
    for k in 1..8 {
        let a = Grade::frac(k, 8);
        let lhs = level_cut(&b, &a);
        let rhs = space_betweenness_at_level(space, &a);
        if let Some((x, y, z)) = lhs.first_not_in(&rhs).or_else(|| rhs.first_not_in(&lhs)) {
            return Ok(CheckResult::fail("strict-cut", format!("at a = {a}: triple ({x}, {y}, {z}) differs")));
        }
    }
    Ok(CheckResult::pass("strict-cut"))
}

/// Largest entry-wise difference and the first triple attaining it.
pub type Discrepancy = (Rational, Option<(usize, usize, usize)>);

/// Entry-wise comparison of the implication and nest constructions.
pub fn check_equality(space: &FuzzyMetricSpace) -> Result<Discrepancy, String> {
    let bm = bm_from_fuzzy_metric(space).map_err(|e| e.to_string())?;
    let bd = bd_from_space(space)?;
    Ok(bm.max_discrepancy(&bd))
}

/// Graded version of a transitivity scheme: `B(h1) * B(h2) <= max B(c_i)`.
pub fn check_fuzzy_scheme(b: &FuzzyTernaryRelation, s: &Scheme, kind: TNormKind) -> Option<String> {
    let at = |v: &[usize], t: &[usize; 3]| b.get(v[t[0]], v[t[1]], v[t[2]]);
    let lhs = |v: &[usize]| tnorm_apply(kind, at(v, &s.hyps[0]), at(v, &s.hyps[1]));
    let rhs = |v: &[usize]| s.concl.iter().map(|c| at(v, c)).max().unwrap().clone();
    first_assignment(b.n, s.arity(), |v| lhs(v) > rhs(v))
        .map(|v| format!("{}: {}", describe_witness(s.vars, &v), lhs_rhs(&lhs(&v), &rhs(&v))))
}

/// `FP{k}` for `k` in `1..=8`.
pub fn check_fp(b: &FuzzyTernaryRelation, k: usize, kind: TNormKind) -> Option<String> {
    check_fuzzy_scheme(b, &FOUR_POINT[k - 1], kind)
}

/// `FT{i}` for `i` in `1..=6`.
pub fn check_ft(b: &FuzzyTernaryRelation, i: usize, kind: TNormKind) -> Option<String> {
    check_fuzzy_scheme(b, &FIVE_POINT[i - 1], kind)
}

/// Runs one named fuzzy property: `FB`, `SFB`, `FBR` (whole systems),
/// single axioms such as `FBR3`, or `FP1`–`FP8`, `FT1`–`FT6`.
pub fn check_fuzzy_named(b: &FuzzyTernaryRelation, name: &str, kind: TNormKind) -> Option<Vec<CheckResult>> {
    let upper = name.to_ascii_uppercase();
    if let Some(rest) = upper.strip_prefix('F').filter(|r| r.starts_with('P') || r.starts_with('T')) {
        let s = scheme(rest)?;
        let fname = format!("F{}", s.name);
        return Some(vec![CheckResult::from_witness(fname, check_fuzzy_scheme(b, s, kind))]);
    }
    for system in [AxiomSystem::StrongStar, AxiomSystem::Fbr, AxiomSystem::Star] {
        let prefix = system.prefix();
        if let Some(rest) = upper.strip_prefix(prefix) {
            if rest.chars().all(|c| c.is_ascii_digit()) {
                let report = check_fuzzy_axioms(b, system, kind);
                return if rest.is_empty() {
                    Some(report.checks)
                } else {
                    report.checks.into_iter().find(|c| c.name == upper).map(|c| vec![c])
                };
            }
        }
    }
    None
}

#[derive(Serialize, Deserialize)]
struct FuzzyFile {
    n: usize,
    grades: Vec<Vec<Vec<Grade>>>,
}

impl Serialize for FuzzyTernaryRelation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = self.n;
        let grades =
            (0..n).map(|x| (0..n).map(|y| (0..n).map(|z| self.get(x, y, z).clone()).collect()).collect()).collect();
        FuzzyFile { n, grades }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FuzzyTernaryRelation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = FuzzyFile::deserialize(d)?;
        let n = file.n;
        let shape_ok =
            file.grades.len() == n && file.grades.iter().all(|m| m.len() == n && m.iter().all(|r| r.len() == n));
        if !shape_ok {
            let got = file.grades.iter().flatten().map(Vec::len).sum();
            return Err(serde::de::Error::custom(RelationError::TensorShape { got, expected: n * n * n }));
        }
        let grades = file.grades.into_iter().flatten().flatten().collect();
        FuzzyTernaryRelation::new(n, grades).map_err(serde::de::Error::custom)
    }
}

/// `B(x, y, z)` as a distribution-level statement: for every `t`,
/// `a ∧ M(x,z,t) <= (M(x,y,·) ⊛ M(y,z,·))(t)`. Used by tests of the
/// implication construction.
pub fn implication_bound_holds(xz: &Distribution, conv: &Distribution, a: &Grade) -> bool {
    match (xz.as_step(), conv.as_step()) {
        (Some(f), Some(g)) => {
            let mut grid: Vec<Rational> = f.breakpoints().iter().chain(g.breakpoints()).cloned().collect();
            grid.sort();
            grid.dedup();
            let tail = grid.last().cloned().unwrap_or_else(Rational::zero) + int(1);
            grid.push(tail);
            grid.iter().all(|t| f.eval(t).meet(a) <= g.eval(t))
        }
        _ => false,
    }
}
