//! Finite KM-fuzzy metric spaces and their axiom checker.
//!
//! A space is a labelled point set with a symmetric matrix of
//! [`Distribution`]s and a t-norm. Left-continuity and `M(x, y, 0) = 0`
//! hold for every distribution by construction; the remaining axioms are
//! decided exactly by [`validate`] / [`validate_entries`].

use serde::{Deserialize, Serialize};

use crate::distribution::{pointwise_le, supmin_convolve, Distribution, Family, Generator};
use crate::error::{DistributionError, SpaceError};
use crate::grade::{tnorm_apply, Grade, TNormKind};
use crate::metric::{check_unique_labels, FiniteMetric};
use crate::rational::{format_rational, int};
use crate::report::{CheckResult, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyMetricSpace {
    points: Vec<String>,
    entries: Vec<Vec<Distribution>>,
    tnorm: TNormKind,
}

impl FuzzyMetricSpace {
    /// Builds a space after enforcing the structural invariants. FM4 is not
    /// checked here; call [`FuzzyMetricSpace::validate`].
    pub fn from_entries(
        points: Vec<String>,
        entries: Vec<Vec<Distribution>>,
        tnorm: TNormKind,
    ) -> Result<Self, SpaceError> {
        let n = points.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(SpaceError::ShapeMismatch(n));
        }
        if let Some(dup) = check_unique_labels(&points) {
            return Err(SpaceError::DuplicateLabel(dup));
        }
        if let Some(v) = structural_violation(&entries) {
            let name = |i: usize| points[i].clone();
            return Err(match v {
                Structural::Diagonal(i) => SpaceError::DiagonalNotOne(name(i)),
                Structural::OffDiagonalOne(i, j) => SpaceError::OffDiagonalOne(name(i), name(j)),
                Structural::Asymmetric(i, j) => SpaceError::AsymmetricEntries(name(i), name(j)),
                Structural::Mixed(a, b) => {
                    SpaceError::Distribution(DistributionError::MixedVariant(a.name(), b.name()))
                }
            });
        }
        Ok(FuzzyMetricSpace { points, entries, tnorm })
    }

    /// `M_d(x, y, t) = t / (t + d(x, y))`, under the minimum t-norm.
    pub fn standard_from_metric(d: &FiniteMetric) -> Self {
        Self::scaled_from_metric(d, Generator::Standard, TNormKind::Minimum)
    }

    /// `M(x, y, t) = exp(-d(x, y) / t)`, under the product t-norm.
    pub fn exponential_from_metric(d: &FiniteMetric) -> Self {
        Self::scaled_from_metric(d, Generator::Exponential, TNormKind::Product)
    }

    fn scaled_from_metric(d: &FiniteMetric, generator: Generator, tnorm: TNormKind) -> Self {
        let n = d.len();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Distribution::PointOne
                        } else {
                            let s = d.dist(i, j).clone();
                            match generator {
                                Generator::Standard => Distribution::standard(s),
                                Generator::Exponential => Distribution::exponential(s),
                            }
                            .expect("metric distances are positive off the diagonal")
                        }
                    })
                    .collect()
            })
            .collect();
        FuzzyMetricSpace { points: d.points().to_vec(), entries, tnorm }
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

    pub fn entry(&self, i: usize, j: usize) -> &Distribution {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Distribution>] {
        &self.entries
    }

    pub fn tnorm(&self) -> TNormKind {
        self.tnorm
    }

    pub fn with_tnorm(&self, tnorm: TNormKind) -> Self {
        FuzzyMetricSpace { tnorm, ..self.clone() }
    }

    /// Family shared by the off-diagonal entries; `PointOne` for a single point.
    pub fn family(&self) -> Family {
        off_diagonal(&self.entries).next().map(|(_, _, d)| d.family()).unwrap_or(Family::PointOne)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_entries(&self.points, &self.entries, self.tnorm)
    }
}

pub fn validate(space: &FuzzyMetricSpace) -> ValidationReport {
    space.validate()
}

fn off_diagonal(entries: &[Vec<Distribution>]) -> impl Iterator<Item = (usize, usize, &Distribution)> {
    entries
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(move |(j, _)| *j != i).map(move |(j, d)| (i, j, d)))
}

enum Structural {
    Diagonal(usize),
    OffDiagonalOne(usize, usize),
    Asymmetric(usize, usize),
    Mixed(Family, Family),
}

fn structural_violation(entries: &[Vec<Distribution>]) -> Option<Structural> {
    if let Some(i) = (0..entries.len()).find(|&i| !entries[i][i].is_point_one()) {
        return Some(Structural::Diagonal(i));
    }
    if let Some((i, j, _)) = off_diagonal(entries).find(|(_, _, d)| d.is_point_one()) {
        return Some(Structural::OffDiagonalOne(i, j));
    }
    if let Some((i, j, _)) = off_diagonal(entries).find(|&(i, j, d)| *d != entries[j][i]) {
        return Some(Structural::Asymmetric(i, j));
    }
    mixed_families(entries).map(|(a, b)| Structural::Mixed(a, b))
}

fn mixed_families(entries: &[Vec<Distribution>]) -> Option<(Family, Family)> {
    let mut fams = off_diagonal(entries).map(|(_, _, d)| d.family());
    let first = fams.next()?;
    fams.find(|f| *f != first).map(|f| (first, f))
}

/// Checks FM1–FM6 on a raw entry matrix, reporting the offending pair or
/// triple for each failure. Structural axioms are checked first; FM4 is
/// only attempted when the matrix is square and single-family.
pub fn validate_entries(points: &[String], entries: &[Vec<Distribution>], tnorm: TNormKind) -> ValidationReport {
    let mut report = ValidationReport::new(format!("KM-fuzzy metric space on {} points under {tnorm}", points.len()));
    let n = points.len();
    if n == 0 || entries.len() != n || entries.iter().any(|r| r.len() != n) {
        report.push(CheckResult::fail("shape", format!("entry matrix is not {n} x {n}")));
        return report;
    }
    let name = |i: usize| points[i].as_str();

    report.push(CheckResult::pass_with("FM1", "M(x, y, 0) = 0 holds for every distribution"));

    let fm2 = match structural_violation(entries) {
        Some(Structural::Diagonal(i)) => Some(format!("M({0}, {0}, ·) is not 1 for all t > 0", name(i))),
        Some(Structural::OffDiagonalOne(i, j)) => {
            Some(format!("M({}, {}, t) = 1 for all t > 0 but the points differ", name(i), name(j)))
        }
        _ => None,
    };
    report.push(CheckResult::from_witness("FM2", fm2));

    let fm3 = off_diagonal(entries).find(|&(i, j, d)| *d != entries[j][i]).map(|(i, j, d)| {
        format!("M({a}, {b}, ·) = {d} but M({b}, {a}, ·) = {}", entries[j][i], a = name(i), b = name(j))
    });
    report.push(CheckResult::from_witness("FM3", fm3));

    match mixed_families(entries) {
        Some((a, b)) => {
            report.push(CheckResult::fail("FM4", format!("entries mix the {} and {} families", a.name(), b.name())))
        }
        None => report.push(check_fm4(points, entries, tnorm)),
    }

    report.push(CheckResult::pass_with("FM5", "left-continuity holds for every distribution"));

    let fm6 = off_diagonal(entries).find_map(|(i, j, d)| match d {
        Distribution::Step(s) if !s.terminal().is_one() => {
            Some(format!("M({}, {}, t) tends to {} < 1", name(i), name(j), s.terminal()))
        }
        _ => None,
    });
    report.push(CheckResult::from_witness("FM6", fm6));
    report
}

fn check_fm4(points: &[String], entries: &[Vec<Distribution>], tnorm: TNormKind) -> CheckResult {
    let n = points.len();
    let name = |i: usize| points[i].as_str();
    let mut unknown: Option<String> = None;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (xy, yz, xz) = (&entries[x][y], &entries[y][z], &entries[x][z]);
                let verdict = match tnorm {
                    TNormKind::Minimum => fm4_minimum(xy, yz, xz),
                    _ => fm4_general(tnorm, xy, yz, xz),
                };
                match verdict {
                    Fm4::Holds => {}
                    Fm4::Fails(why) => {
                        return CheckResult::fail(
                            "FM4",
                            format!("triple ({}, {}, {}): {why}", name(x), name(y), name(z)),
                        )
                    }
                    Fm4::Undecided(why) => {
                        unknown.get_or_insert_with(|| format!("triple ({}, {}, {}): {why}", name(x), name(y), name(z)));
                    }
                }
            }
        }
    }
    match unknown {
        Some(why) => CheckResult::unknown("FM4", why),
        None => CheckResult::pass("FM4"),
    }
}

enum Fm4 {
    Holds,
    Fails(String),
    Undecided(String),
}

/// `(M_xy ⊛ M_yz) <= M_xz`, with a level witness when it fails.
fn fm4_minimum(xy: &Distribution, yz: &Distribution, xz: &Distribution) -> Fm4 {
    let conv = match supmin_convolve(xy, yz) {
        Ok(c) => c,
        Err(e) => return Fm4::Fails(e.to_string()),
    };
    match pointwise_le(&conv, xz) {
        Ok(true) => Fm4::Holds,
        Ok(false) => Fm4::Fails(level_witness(xy, yz, xz)),
        Err(e) => Fm4::Fails(e.to_string()),
    }
}

/// Finds a level `a` with `level(xz, a) > level(xy, a) + level(yz, a)`.
fn level_witness(xy: &Distribution, yz: &Distribution, xz: &Distribution) -> String {
    let mut cuts = vec![Grade::zero(), Grade::frac(1, 2)];
    for d in [xy, yz, xz] {
        if let Distribution::Step(s) = d {
            cuts.extend(s.values().iter().filter(|v| !v.is_one()).cloned());
        }
    }
    cuts.sort();
    cuts.dedup();
    // Levels are constant on [cut_j, cut_{j+1}); report the midpoint of a violating piece.
    let mut probes: Vec<Grade> = cuts.windows(2).map(|w| w[0].midpoint(&w[1])).collect();
    probes.push(cuts.last().unwrap().midpoint(&Grade::one()));
    for a in probes {
        let lhs = xz.level_unchecked(&a);
        let rhs = xy.level_unchecked(&a).checked_add(&yz.level_unchecked(&a));
        if let Some(rhs) = rhs {
            if lhs.partial_cmp(&rhs) == Some(std::cmp::Ordering::Greater) {
                return format!("at level a = {a}, d_a(x, z) = {lhs} > d_a(x, y) + d_a(y, z) = {rhs}");
            }
        }
    }
    "sup-min convolution of the legs exceeds M(x, z, ·)".to_string()
}

/// FM4 for a t-norm below the minimum.
fn fm4_general(tnorm: TNormKind, xy: &Distribution, yz: &Distribution, xz: &Distribution) -> Fm4 {
    match (xy, yz, xz) {
        (Distribution::Scaled(_), _, _) | (_, Distribution::Scaled(_), _) | (_, _, Distribution::Scaled(_)) => {
            fm4_scaled(tnorm, xy, yz, xz)
        }
        _ => fm4_rectangles(tnorm, xy, yz, xz),
    }
}

/// Step spaces: on each rectangle of constant leg values `(v, w)` the
/// smallest value of `M_xz(s + r)` is its right limit at the lower corner.
fn fm4_rectangles(tnorm: TNormKind, xy: &Distribution, yz: &Distribution, xz: &Distribution) -> Fm4 {
    let (f, g, h) = match (xy.as_step(), yz.as_step(), xz.as_step()) {
        (Some(f), Some(g), Some(h)) => (f, g, h),
        _ => return Fm4::Fails("mixed distribution families".into()),
    };
    for (lo_p, _, v) in f.pieces() {
        for (lo_q, _, w) in g.pieces() {
            let lhs = tnorm_apply(tnorm, v, w);
            let corner = &lo_p + &lo_q;
            let rhs = h.right_limit(&corner);
            if lhs > rhs {
                return Fm4::Fails(format!(
                    "for s just above {} and r just above {}: M(x,y,s) {tnorm} M(y,z,r) = {lhs} > M(x,z,s+r) = {rhs}",
                    format_rational(&lo_p),
                    format_rational(&lo_q),
                ));
            }
        }
    }
    Fm4::Holds
}

/// Closed-form families under a t-norm other than the minimum.
///
/// The minimum dominates every t-norm, so the scale triangle inequality is
/// sufficient. When it fails, the behaviour as `t -> ∞` is governed by
/// `(√d1 + √d2)^2` versus `d3`; for the exponential family under the
/// product this comparison is exact for every `t`.
fn fm4_scaled(tnorm: TNormKind, xy: &Distribution, yz: &Distribution, xz: &Distribution) -> Fm4 {
    match fm4_minimum(xy, yz, xz) {
        Fm4::Holds => return Fm4::Holds,
        Fm4::Fails(why) if why.contains("families") => return Fm4::Fails(why),
        _ => {}
    }
    let scale = |d: &Distribution| match d {
        Distribution::Scaled(s) => Some(s.scale().clone()),
        _ => None,
    };
    let (Some(d1), Some(d2), Some(d3)) = (scale(xy), scale(yz), scale(xz)) else {
        // x = z with x != y: the right-hand side is identically 1.
        return Fm4::Holds;
    };
    let excess = &d3 - &d1 - &d2;
    // (√d1 + √d2)^2 >= d3  ⟺  4·d1·d2 >= (d3 - d1 - d2)^2 when d3 > d1 + d2.
    let sqrt_bound_holds = int(4) * &d1 * &d2 >= &excess * &excess;
    let exp_prod =
        matches!(xy, Distribution::Scaled(s) if s.generator() == Generator::Exponential) && tnorm == TNormKind::Product;
    let detail =
        format!("d(x,z) = {} exceeds d(x,y) + d(y,z) = {}", format_rational(&d3), format_rational(&(&d1 + &d2)));
    if !sqrt_bound_holds {
        Fm4::Fails(format!("{detail}; the inequality fails for large t"))
    } else if exp_prod {
        Fm4::Holds
    } else {
        Fm4::Undecided(format!("{detail}; no exact decision procedure for this family under {tnorm}"))
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceFile {
    points: Vec<String>,
    #[serde(default)]
    tnorm: TNormKind,
    entries: Vec<Vec<Option<Distribution>>>,
}

/// Raw space file contents, before structural validation.
#[derive(Debug, Clone)]
pub struct RawSpace {
    pub points: Vec<String>,
    pub entries: Vec<Vec<Distribution>>,
    pub tnorm: TNormKind,
}

impl RawSpace {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let file: SpaceFile = serde_json::from_str(text)?;
        let mut entries = Vec::with_capacity(file.entries.len());
        for (i, row) in file.entries.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, e) in row.into_iter().enumerate() {
                match e {
                    Some(d) => out.push(d),
                    None if i == j => out.push(Distribution::PointOne),
                    None => {
                        return Err(serde::de::Error::custom(format!("entry ({i}, {j}) is missing")));
                    }
                }
            }
            entries.push(out);
        }
        Ok(RawSpace { points: file.points, entries, tnorm: file.tnorm })
    }

    pub fn validate(&self) -> ValidationReport {
        validate_entries(&self.points, &self.entries, self.tnorm)
    }

    pub fn into_space(self) -> Result<FuzzyMetricSpace, SpaceError> {
        FuzzyMetricSpace::from_entries(self.points, self.entries, self.tnorm)
    }
}

impl Serialize for FuzzyMetricSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpaceFile {
            points: self.points.clone(),
            tnorm: self.tnorm,
            entries: self.entries.iter().map(|r| r.iter().cloned().map(Some).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FuzzyMetricSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        let raw = RawSpace::from_json(&value.to_string()).map_err(serde::de::Error::custom)?;
        raw.into_space().map_err(serde::de::Error::custom)
    }
}

/// `true` when every level slice satisfies the triangle inequality, i.e.
/// FM4 under the minimum restated through level distances.
pub fn per_level_triangle(space: &FuzzyMetricSpace, a: &Grade) -> bool {
    let n = space.len();
    (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).all(|z| {
                let lhs = space.entry(x, z).level_unchecked(a);
                let rhs = space.entry(x, y).level_unchecked(a).checked_add(&space.entry(y, z).level_unchecked(a));
                matches!(rhs.and_then(|r| lhs.partial_cmp(&r)), Some(o) if o != std::cmp::Ordering::Greater)
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    pub(crate) fn step(t: &[i64], v: &[(i64, i64)]) -> Distribution {
        Distribution::step(t.iter().map(|&x| int(x)).collect(), v.iter().map(|&(n, d)| Grade::frac(n, d)).collect())
            .unwrap()
    }

    fn three_point(xz: Distribution) -> (Vec<String>, Vec<Vec<Distribution>>) {
        let leg = step(&[1, 2], &[(0, 1), (1, 2), (1, 1)]);
        let one = Distribution::PointOne;
        let entries = vec![
            vec![one.clone(), leg.clone(), xz.clone()],
            vec![leg.clone(), one.clone(), leg.clone()],
            vec![xz, leg, one],
        ];
        (labels(&["x", "y", "z"]), entries)
    }

    #[test]
    fn worked_space_passes_under_minimum() {
        let (p, e) = three_point(step(&[2], &[(0, 1), (1, 1)]));
        let space = FuzzyMetricSpace::from_entries(p, e, TNormKind::Minimum).unwrap();
        let report = space.validate();
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn stretched_side_fails_fm4_with_witness() {
        let (p, e) = three_point(step(&[5], &[(0, 1), (1, 1)]));
        let space = FuzzyMetricSpace::from_entries(p, e, TNormKind::Minimum).unwrap();
        let report = space.validate();
        let fm4 = report.get("FM4").unwrap();
        assert!(!fm4.passed());
        let detail = fm4.detail.as_deref().unwrap();
        assert!(detail.starts_with("triple (x, y, z)"), "{detail}");
        assert!(detail.contains("= 5 > "), "{detail}");
        // The rectangle enumeration reaches the same verdict under the minimum.
        assert!(matches!(
            fm4_rectangles(TNormKind::Minimum, space.entry(0, 1), space.entry(1, 2), space.entry(0, 2)),
            Fm4::Fails(_)
        ));
    }

    #[test]
    fn standard_space_passes_under_every_tnorm() {
        let m = FiniteMetric::new(labels(&["x", "y"]), vec![vec![int(0), int(3)], vec![int(3), int(0)]]).unwrap();
        let space = FuzzyMetricSpace::standard_from_metric(&m);
        assert_eq!(space.entry(0, 1), &Distribution::standard(int(3)).unwrap());
        assert_eq!(space.entry(0, 1).eval(&int(3)).unwrap(), Grade::frac(1, 2));
        for k in TNormKind::ALL {
            assert!(space.with_tnorm(k).validate().all_pass());
        }
    }

    #[test]
    fn equal_distances_give_equal_entries() {
        let m = FiniteMetric::new(
            labels(&["a", "b", "c"]),
            vec![vec![int(0), int(2), int(2)], vec![int(2), int(0), int(2)], vec![int(2), int(2), int(0)]],
        )
        .unwrap();
        let space = FuzzyMetricSpace::standard_from_metric(&m);
        assert_eq!(space.entry(0, 1), space.entry(1, 2));
        assert_eq!(space.entry(0, 2), space.entry(2, 1));
    }

    #[test]
    fn exponential_space_passes_under_product() {
        let m = FiniteMetric::new(
            labels(&["a", "b", "c"]),
            vec![vec![int(0), int(1), int(2)], vec![int(1), int(0), int(1)], vec![int(2), int(1), int(0)]],
        )
        .unwrap();
        let space = FuzzyMetricSpace::exponential_from_metric(&m);
        assert_eq!(space.tnorm(), TNormKind::Product);
        assert!(space.validate().all_pass());
        let e = space.entry(0, 1);
        assert!((e.approx(1.0) - (-1.0f64).exp()).abs() < 1e-15);
        // Level comparisons reduce to scale comparisons.
        let a = Grade::frac(1, 3);
        assert!(space.entry(0, 1).level(&a).unwrap() < space.entry(0, 2).level(&a).unwrap());
    }

    #[test]
    fn exponential_product_beyond_the_triangle() {
        // d3 = 3 > 1 + 1 but (√1 + √1)^2 = 4 >= 3: FM4 holds under the product.
        let e = |d: i64| Distribution::exponential(int(d)).unwrap();
        let one = Distribution::PointOne;
        let entries = vec![vec![one.clone(), e(1), e(3)], vec![e(1), one.clone(), e(1)], vec![e(3), e(1), one.clone()]];
        let names = labels(&["a", "b", "c"]);
        let prod = validate_entries(&names, &entries, TNormKind::Product);
        assert!(prod.all_pass(), "{prod}");
        let min = validate_entries(&names, &entries, TNormKind::Minimum);
        assert!(!min.get("FM4").unwrap().passed());
        // d3 = 5 > 4 fails for large t.
        let bad = vec![vec![one.clone(), e(1), e(5)], vec![e(1), one.clone(), e(1)], vec![e(5), e(1), one]];
        assert!(!validate_entries(&names, &bad, TNormKind::Product).get("FM4").unwrap().passed());
    }

    #[test]
    fn rectangles_under_product() {
        let (p, e) = three_point(step(&[2], &[(0, 1), (1, 1)]));
        let report = validate_entries(&p, &e, TNormKind::Product);
        assert!(report.all_pass(), "{report}");
        let (p, e) = three_point(step(&[5], &[(0, 1), (1, 1)]));
        let report = validate_entries(&p, &e, TNormKind::Lukasiewicz);
        assert!(!report.get("FM4").unwrap().passed());
    }

    #[test]
    fn constructor_errors() {
        let (p, mut e) = three_point(step(&[2], &[(0, 1), (1, 1)]));
        e[1][0] = step(&[3], &[(0, 1), (1, 1)]);
        assert!(matches!(
            FuzzyMetricSpace::from_entries(p.clone(), e.clone(), TNormKind::Minimum),
            Err(SpaceError::AsymmetricEntries(..))
        ));
        let report = validate_entries(&p, &e, TNormKind::Minimum);
        assert!(report.get("FM3").unwrap().detail.as_deref().unwrap().contains("M(x, y, ·)"));

        let (p, mut e) = three_point(step(&[2], &[(0, 1), (1, 1)]));
        e[0][0] = step(&[1], &[(0, 1), (1, 1)]);
        assert!(matches!(
            FuzzyMetricSpace::from_entries(p, e, TNormKind::Minimum),
            Err(SpaceError::DiagonalNotOne(..))
        ));

        let (p, mut e) = three_point(step(&[2], &[(0, 1), (1, 1)]));
        e[0][2] = Distribution::standard(int(2)).unwrap();
        e[2][0] = Distribution::standard(int(2)).unwrap();
        assert!(matches!(
            FuzzyMetricSpace::from_entries(p, e, TNormKind::Minimum),
            Err(SpaceError::Distribution(DistributionError::MixedVariant(..)))
        ));

        let (p, e) = three_point(step(&[2], &[(0, 1), (1, 1)]));
        assert!(matches!(
            FuzzyMetricSpace::from_entries(p[..2].to_vec(), e, TNormKind::Minimum),
            Err(SpaceError::ShapeMismatch(2))
        ));
    }

    #[test]
    fn fm6_flags_unreached_limit() {
        let (p, e) = three_point(step(&[2], &[(0, 1), (1, 2)]));
        let report = validate_entries(&p, &e, TNormKind::Minimum);
        assert!(!report.get("FM6").unwrap().passed());
    }

    #[test]
    fn json_with_omitted_diagonal() {
        let text = r#"{"points":["x","y"],"tnorm":"min","entries":[[null,{"t":["1"],"v":["0","1"]}],[{"t":["1"],"v":["0","1"]},null]]}"#;
        let space: FuzzyMetricSpace = serde_json::from_str(text).unwrap();
        assert_eq!(space.entry(0, 0), &Distribution::PointOne);
        let back: FuzzyMetricSpace = serde_json::from_str(&serde_json::to_string(&space).unwrap()).unwrap();
        assert_eq!(back, space);
        let _ = ratio(1, 2);
    }

    #[test]
    fn fm4_matches_per_level_triangle() {
        for xz in [step(&[2], &[(0, 1), (1, 1)]), step(&[5], &[(0, 1), (1, 1)]), step(&[3], &[(0, 1), (1, 1)])] {
            let (p, e) = three_point(xz);
            let space = FuzzyMetricSpace::from_entries(p, e, TNormKind::Minimum).unwrap();
            let levels_ok = [Grade::frac(1, 4), Grade::frac(3, 4)].iter().all(|a| per_level_triangle(&space, a));
            assert_eq!(space.validate().all_pass(), levels_ok);
        }
    }
}
