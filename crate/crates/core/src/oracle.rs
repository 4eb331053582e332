//! Brute-force approximators over finite grids and seeded generators of
//! random instances.
//!
//! The grid functions only ever evaluate distributions pointwise; they do
//! not use level arithmetic. On grids that contain every breakpoint, every
//! pairwise breakpoint sum and the midpoints between them they agree
//! exactly with the closed-form engine.

use num::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::{Distribution, Level, StepDistribution};
use crate::error::OracleError;
use crate::fuzzy_metric::FuzzyMetricSpace;
use crate::fuzzy_relation::{
    bm_from_fuzzy_metric, check_equality, check_fuzzy_axioms, AxiomSystem, FuzzyTernaryRelation,
};
use crate::grade::{Grade, TNormKind};
use crate::metric::FiniteMetric;
use crate::nest::{fuzzy_metric_from_nest, roundtrip_nest, roundtrip_space, MetricNest};
use crate::rational::{format_rational, int, midpoint, ratio, Rational};
use crate::relation::{betweenness_at_level, check_betweenness, check_betweenness_nest};
use crate::report::{CheckResult, ValidationReport};

/// Evaluation points for `t` and for the level index `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub t_grid: Vec<Rational>,
    pub a_grid: Vec<Grade>,
}

fn breakpoints(f: &Distribution) -> Vec<Rational> {
    f.as_step().map(|s| s.breakpoints().to_vec()).unwrap_or_default()
}

fn sorted(mut v: Vec<Rational>) -> Vec<Rational> {
    v.sort();
    v.dedup();
    v
}

/// Adds the midpoint of every consecutive pair and one point past the end.
fn with_midpoints(points: Vec<Rational>) -> Vec<Rational> {
    let points = sorted(points);
    let mut out = points.clone();
    out.extend(points.windows(2).map(|w| midpoint(&w[0], &w[1])));
    if let Some(last) = points.last() {
        out.push(last + int(1));
    }
    sorted(out)
}

impl GridSpec {
    pub fn new(t_grid: Vec<Rational>, a_grid: Vec<Grade>) -> Self {
        let mut a_grid = a_grid;
        a_grid.sort();
        a_grid.dedup();
        GridSpec { t_grid: sorted(t_grid), a_grid }
    }

    /// A grid adequate for level, convolution and residual queries on the
    /// given distributions: 0, all breakpoints, all pairwise breakpoint
    /// sums, midpoints, and a point past the end; levels at step 1/64 plus
    /// every value of the inputs.
    pub fn covering(dists: &[&Distribution]) -> Self {
        let bps: Vec<Rational> = sorted(dists.iter().flat_map(|d| breakpoints(d)).collect());
        let mut t = vec![Rational::zero()];
        t.extend(bps.iter().cloned());
        for (i, a) in bps.iter().enumerate() {
            for b in &bps[i..] {
                t.push(a + b);
            }
        }
        let mut a: Vec<Grade> = (1..64).map(|k| Grade::frac(k, 64)).collect();
        for d in dists {
            if let Some(s) = d.as_step() {
                a.extend(s.values().iter().filter(|v| !v.is_zero() && !v.is_one()).cloned());
            }
        }
        GridSpec::new(with_midpoints(t), a)
    }

    /// The points needed to tabulate `xy ⊛ yz` against `xz`: breakpoints of
    /// `xz`, sums of a breakpoint (or 0) of `xy` with one of `yz`,
    /// midpoints, and a point past the end.
    pub fn for_implication(xy: &Distribution, yz: &Distribution, xz: &Distribution) -> Self {
        let with_zero = |d: &Distribution| {
            let mut v = breakpoints(d);
            v.push(Rational::zero());
            v
        };
        let (a, b) = (with_zero(xy), with_zero(yz));
        let mut t = with_zero(xz);
        t.extend(a.iter().flat_map(|p| b.iter().map(move |q| p + q)));
        GridSpec::new(with_midpoints(t), Vec::new())
    }

    /// Checks that every breakpoint of `f` is a grid point and that every
    /// open piece between them, and the tail past the last, holds one.
    pub fn require(&self, f: &Distribution) -> Result<(), OracleError> {
        let bps = breakpoints(f);
        for p in &bps {
            if self.t_grid.binary_search(p).is_err() {
                return Err(OracleError::GridTooCoarse(format_rational(p)));
            }
        }
        let mut ends = vec![Rational::zero()];
        ends.extend(bps.iter().cloned());
        for w in ends.windows(2) {
            if !self.t_grid.iter().any(|t| *t > w[0] && *t < w[1]) {
                return Err(OracleError::GridTooCoarse(format!(
                    "no point in ({}, {})",
                    format_rational(&w[0]),
                    format_rational(&w[1])
                )));
            }
        }
        let last = ends.last().unwrap();
        if !self.t_grid.iter().any(|t| t > last) {
            return Err(OracleError::GridTooCoarse(format!("no point beyond {}", format_rational(last))));
        }
        Ok(())
    }
}

/// `max { t ∈ grid ∪ {0} | F(t) <= a }`, infinite if the largest grid point qualifies.
pub fn grid_level(f: &Distribution, a: &Grade, grid: &GridSpec) -> Result<Level, OracleError> {
    grid.require(f)?;
    let mut best = Rational::zero();
    for t in &grid.t_grid {
        if f.eval(t)? <= *a {
            best = t.clone();
        }
    }
    if Some(&best) == grid.t_grid.last() && !best.is_zero() {
        return Ok(Level::Infinite);
    }
    Ok(Level::Finite(best))
}

/// Values of `sup_{s + r = t} min(F(s), G(r))` at each grid point.
///
/// For fixed `t` the integrand is piecewise constant in `s` with jumps at
/// breakpoints of `F` and at `t` minus breakpoints of `G`; every piece is
/// sampled at its endpoints and midpoint.
pub fn grid_convolve(
    f: &Distribution,
    g: &Distribution,
    grid: &GridSpec,
) -> Result<Vec<(Rational, Grade)>, OracleError> {
    grid.require(f)?;
    grid.require(g)?;
    let (bf, bg) = (breakpoints(f), breakpoints(g));
    let mut out = Vec::with_capacity(grid.t_grid.len());
    for t in &grid.t_grid {
        let mut splits = vec![Rational::zero(), t.clone()];
        splits.extend(bf.iter().filter(|b| *b <= t).cloned());
        splits.extend(bg.iter().filter(|c| *c <= t).map(|c| t - c));
        let splits = sorted(splits);
        let mut probes = splits.clone();
        probes.extend(splits.windows(2).map(|w| midpoint(&w[0], &w[1])));
        let mut best = Grade::zero();
        for s in &probes {
            let r = t - s;
            if s.is_negative() || r.is_negative() {
                continue;
            }
            let v = f.eval(s)?.meet(&g.eval(&r)?);
            if v > best {
                best = v;
            }
        }
        out.push((t.clone(), best));
    }
    Ok(out)
}

/// `min_{t ∈ grid, t > 0} (F(t) → G(t))` with the Gödel implication.
pub fn grid_residual(f: &Distribution, g: &Distribution, grid: &GridSpec) -> Result<Grade, OracleError> {
    grid.require(f)?;
    grid.require(g)?;
    let mut best = Grade::one();
    for t in grid.t_grid.iter().filter(|t| t.is_positive()) {
        let (x, y) = (f.eval(t)?, g.eval(t)?);
        if x > y && y < best {
            best = y;
        }
    }
    Ok(best)
}

/// The implication construction evaluated entirely on grids: for each
/// triple the convolution is tabulated by [`grid_convolve`] and the
/// residual infimum is taken over the same grid.
pub fn grid_bm(space: &FuzzyMetricSpace) -> Result<FuzzyTernaryRelation, OracleError> {
    FuzzyTernaryRelation::try_from_fn(space.len(), |x, y, z| {
        let (xy, yz, xz) = (space.entry(x, y), space.entry(y, z), space.entry(x, z));
        let grid = GridSpec::for_implication(xy, yz, xz);
        let conv = grid_convolve(xy, yz, &grid)?;
        let mut best = Grade::one();
        for (t, h) in conv.iter().filter(|(t, _)| t.is_positive()) {
            let m = xz.eval(t)?;
            if m > *h && *h < best {
                best = h.clone();
            }
        }
        Ok(best)
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// `n` distinct points on the half-integer lattice of a small square.
fn random_points(r: &mut ChaCha8Rng, n: usize) -> Vec<(i64, i64)> {
    let side = (2 * ((n as f64).sqrt().ceil() as i64 + 2)).max(6);
    let mut cells: Vec<(i64, i64)> = (0..side).flat_map(|x| (0..side).map(move |y| (x, y))).collect();
    cells.shuffle(r);
    cells.truncate(n);
    cells
}

fn taxicab_matrix(points: &[(i64, i64)], wx: i64, wy: i64) -> Vec<Vec<Rational>> {
    points
        .iter()
        .map(|&(x1, y1)| points.iter().map(|&(x2, y2)| ratio(wx * (x1 - x2).abs() + wy * (y1 - y2).abs(), 2)).collect())
        .collect()
}

/// Taxicab metric on `n` distinct random rational points of the plane.
pub fn gen_random_metric(n: usize, seed: u64) -> FiniteMetric {
    let mut r = rng(seed);
    let points = random_points(&mut r, n);
    let dist = taxicab_matrix(&points, 1, 1);
    FiniteMetric::new(labels(n), dist).expect("taxicab distances on distinct points form a metric")
}

/// A nest with up to `m` level breakpoints: a base taxicab metric plus,
/// from each random level upward, a further weighted taxicab metric on
/// perturbed copies of the points. Every slice is a sum of metrics, and
/// betweenness in a sum is the intersection of the summands' betweenness,
/// so the slices only lose betweenness as the level rises.
pub fn gen_random_nest(n: usize, m: usize, seed: u64) -> MetricNest {
    let mut r = rng(seed);
    let base = random_points(&mut r, n);
    let mut levels: Vec<i64> = (1..64).collect();
    levels.shuffle(&mut r);
    let mut levels: Vec<i64> = levels.into_iter().take(m).collect();
    levels.sort();

    let mut slices = vec![taxicab_matrix(&base, 1, 1)];
    for _ in 0..m {
        let moved: Vec<(i64, i64)> = base
            .iter()
            .map(|&(x, y)| if r.gen_bool(0.3) { (x + r.gen_range(-2..=2), y + r.gen_range(-2..=2)) } else { (x, y) })
            .collect();
        let (wx, wy) = loop {
            let w = (r.gen_range(0..=2), r.gen_range(0..=2));
            if w != (0, 0) {
                break w;
            }
        };
        let layer = taxicab_matrix(&moved, wx, wy);
        let prev = slices.last().unwrap();
        let next = (0..n).map(|i| (0..n).map(|j| &prev[i][j] + &layer[i][j]).collect()).collect();
        slices.push(next);
    }
    let cuts: Vec<Grade> = levels.iter().map(|&k| Grade::frac(k, 64)).collect();
    let rows = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, cuts.clone(), slices.iter().map(|s| s[i][j].clone()).collect()))
        .collect();
    MetricNest::new(labels(n), rows).expect("generated nests are well formed")
}

/// A step space with at most `k` breakpoints per entry, obtained from a
/// random stacked nest.
pub fn gen_random_step_space(n: usize, k: usize, seed: u64) -> FuzzyMetricSpace {
    let nest = gen_random_nest(n, k.saturating_sub(1), seed);
    fuzzy_metric_from_nest(&nest).expect("stacked nests are monotone with positive slices")
}

/// A random step distribution with at most `max_pieces` pieces;
/// breakpoints are multiples of 1/4 and values multiples of 1/8.
pub fn random_step(r: &mut ChaCha8Rng, max_pieces: usize) -> Distribution {
    let pieces = r.gen_range(1..=max_pieces.max(1));
    let mut ts: Vec<i64> = (1..=24).collect();
    ts.shuffle(r);
    let mut ts: Vec<i64> = ts.into_iter().take(pieces - 1).collect();
    ts.sort();
    let mut vs: Vec<i64> = (0..pieces).map(|_| r.gen_range(0..=8)).collect();
    vs.sort();
    if r.gen_bool(0.7) {
        *vs.last_mut().unwrap() = 8;
    }
    if r.gen_bool(0.5) {
        vs[0] = 0;
    }
    Distribution::step(
        ts.into_iter().map(|t| ratio(t, 4)).collect(),
        vs.into_iter().map(|v| Grade::frac(v, 8)).collect(),
    )
    .expect("sorted inputs form a step distribution")
}

/// Two independent random step distributions for seed `seed`.
pub fn gen_random_distribution_pair(seed: u64) -> (Distribution, Distribution) {
    let mut r = rng(seed);
    (random_step(&mut r, 6), random_step(&mut r, 6))
}

/// Unwraps a step distribution, for tests and generators.
pub fn step_of(d: &Distribution) -> Option<StepDistribution> {
    d.as_step()
}

fn first_failure(r: &ValidationReport) -> Option<String> {
    r.failures().next().map(|c| format!("{} {}", c.name, c.detail.as_deref().unwrap_or("")))
}

/// Runs the structural checks on `count` generated instances starting at
/// `seed`: round trips, agreement of both constructions, crisp axioms at
/// every probe level, the FBR axioms under the minimum, and the nest of
/// betweenness relations.
pub fn harness(seed: u64, count: u64, n: usize, k: usize) -> ValidationReport {
    let mut report = ValidationReport::new(format!("harness: seeds {seed}..{}, n = {n}, k = {k}", seed + count));
    let mut first: [Option<String>; 6] = Default::default();
    let names =
        ["roundtrip space", "roundtrip nest", "equality", "B1-B5 per level", "FBR under min", "nest of relations"];
    let mut note = |slot: usize, s: u64, msg: String| {
        if first[slot].is_none() {
            first[slot] = Some(format!("seed {s}: {msg}"));
        }
    };
    for s in seed..seed + count {
        let space = gen_random_step_space(n, k, s);
        let nest = gen_random_nest(n, k.saturating_sub(1), s);
        match roundtrip_space(&space) {
            Ok(None) => {}
            Ok(Some(diff)) | Err(diff) => note(0, s, diff),
        }
        match roundtrip_nest(&nest) {
            Ok(None) => {}
            Ok(Some(diff)) | Err(diff) => note(1, s, diff),
        }
        match check_equality(&space) {
            Ok((d, None)) if d.is_zero() => {}
            Ok((d, w)) => note(2, s, format!("discrepancy {} at {w:?}", format_rational(&d))),
            Err(e) => note(2, s, e),
        }
        for a in nest.probe_levels() {
            if let Some(c) = first_failure(&check_betweenness(&betweenness_at_level(&nest, &a))) {
                note(3, s, format!("a = {a}: {c}"));
            }
        }
        match bm_from_fuzzy_metric(&space) {
            Ok(b) => {
                if let Some(c) = first_failure(&check_fuzzy_axioms(&b, AxiomSystem::Fbr, TNormKind::Minimum)) {
                    note(4, s, c);
                }
            }
            Err(e) => note(4, s, e.to_string()),
        }
        if let Some(c) = first_failure(&check_betweenness_nest(&nest)) {
            note(5, s, c);
        }
    }
    for (name, w) in names.iter().zip(first) {
        report.push(CheckResult::from_witness(*name, w));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{godel_residual_inf, supmin_convolve};
    use crate::nest::validate_nest;
    use crate::relation::metric_betweenness;

    #[test]
    fn small_harness_passes() {
        let r = harness(0, 5, 4, 3);
        assert!(r.all_pass(), "{r}");
    }

    fn worked() -> Distribution {
        Distribution::step(vec![int(1), int(2)], vec![Grade::zero(), Grade::frac(1, 2), Grade::one()]).unwrap()
    }

    #[test]
    fn worked_level_convolve_residual() {
        let f = worked();
        let grid = GridSpec::covering(&[&f, &f]);
        assert_eq!(grid_level(&f, &Grade::frac(1, 4), &grid).unwrap(), Level::Finite(int(1)));
        assert_eq!(grid_level(&f, &Grade::frac(1, 4), &grid).unwrap(), f.level(&Grade::frac(1, 4)).unwrap());
        let expected =
            Distribution::step(vec![int(2), int(4)], vec![Grade::zero(), Grade::frac(1, 2), Grade::one()]).unwrap();
        for (t, h) in grid_convolve(&f, &f, &grid).unwrap() {
            assert_eq!(h, expected.eval(&t).unwrap(), "t = {t}");
        }
        let xz = Distribution::step(vec![int(2)], vec![Grade::zero(), Grade::one()]).unwrap();
        let grid = GridSpec::covering(&[&f, &f, &xz]);
        assert_eq!(grid_residual(&xz, &expected, &grid).unwrap(), Grade::frac(1, 2));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let f = worked();
        let grid = GridSpec::new(vec![int(1)], vec![Grade::frac(1, 2)]);
        assert!(matches!(grid_level(&f, &Grade::frac(1, 4), &grid), Err(OracleError::GridTooCoarse(_))));
    }

    #[test]
    fn random_pairs_agree_with_engine() {
        for seed in 0..40 {
            let (f, g) = gen_random_distribution_pair(seed);
            let grid = GridSpec::covering(&[&f, &g]);
            for a in &grid.a_grid {
                assert_eq!(grid_level(&f, a, &grid).unwrap(), f.level(a).unwrap(), "seed {seed}, a = {a}");
            }
            let conv = supmin_convolve(&f, &g).unwrap();
            for (t, h) in grid_convolve(&f, &g, &grid).unwrap() {
                assert_eq!(h, conv.eval(&t).unwrap(), "seed {seed}, t = {t}");
            }
            assert_eq!(grid_residual(&f, &g, &grid).unwrap(), godel_residual_inf(&f, &g).unwrap());
        }
    }

    #[test]
    fn taxicab_on_a_line() {
        let d = FiniteMetric::taxicab(labels(3), &[(int(0), int(0)), (int(1), int(0)), (int(2), int(0))]).unwrap();
        assert_eq!(d.dist(0, 2), &int(2));
        assert!(metric_betweenness(&d).contains(0, 1, 2));
    }

    #[test]
    fn generators_are_valid_and_deterministic() {
        assert_eq!(gen_random_metric(2, 1).len(), 2);
        for seed in 0..20 {
            let nest = gen_random_nest(5, 3, seed);
            assert!(validate_nest(&nest).all_pass());
            let space = gen_random_step_space(5, 4, seed);
            assert!(space.validate().all_pass());
            assert!(space.entries().iter().flatten().all(|e| e.as_step().unwrap().breakpoints().len() <= 4));
            assert_eq!(space, gen_random_step_space(5, 4, seed));
        }
    }

    #[test]
    fn grid_bm_matches_engine() {
        for seed in 0..5 {
            let space = gen_random_step_space(3, 3, seed);
            assert_eq!(grid_bm(&space).unwrap(), bm_from_fuzzy_metric(&space).unwrap(), "seed {seed}");
        }
    }
}
