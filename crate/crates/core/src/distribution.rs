//! Distance distributions `F: [0, ∞) -> [0, 1]` and their exact algebra.
//!
//! A distribution is nondecreasing and left-continuous with `F(0) = 0`.
//! Three shapes are supported:
//!
//! * [`StepDistribution`]: finitely many jumps, value `v_i` on `(t_{i-1}, t_i]`;
//! * [`ScaledDistribution`]: a closed-form generator composed with `t / d`;
//! * [`Distribution::PointOne`]: the diagonal, `1` for every `t > 0`.
//!
//! The workhorse identity is level addition: for the sup-min convolution
//! `H = F ⊛ G`, `level(H, a) = level(F, a) + level(G, a)` for every
//! `a ∈ [0, 1)`, where `level(F, a) = sup { t | F(t) <= a }`. Convolution
//! is computed by evaluating the right-hand side on the finitely many
//! intervals where it is constant and inverting back.

use std::cmp::Ordering;
use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::DistributionError;
use crate::grade::Grade;
use crate::rational::{format_rational, serde_rational, to_f64, Rational};

/// A level distance `sup { t | F(t) <= a }`.
///
/// `LogScaled(d)` stands for the irrational `d / ln(1/a)` produced by the
/// exponential family; two such values for the same `a` compare by `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Level {
    Finite(Rational),
    LogScaled(Rational),
    Infinite,
}

impl Level {
    pub fn zero() -> Self {
        Level::Finite(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Level::Finite(r) | Level::LogScaled(r) if r.is_zero())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Level::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Sum of two levels taken at the same `a`; `None` if the shapes cannot mix.
    pub fn checked_add(&self, other: &Level) -> Option<Level> {
        use Level::*;
        match (self, other) {
            (Infinite, _) | (_, Infinite) => Some(Infinite),
            (Finite(x), Finite(y)) => Some(Finite(x + y)),
            (LogScaled(x), LogScaled(y)) => Some(LogScaled(x + y)),
            (Finite(z), l @ LogScaled(_)) | (l @ LogScaled(_), Finite(z)) if z.is_zero() => Some(l.clone()),
            _ => None,
        }
    }
}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use Level::*;
        match (self, other) {
            (Infinite, Infinite) => Some(Ordering::Equal),
            (Infinite, _) => Some(Ordering::Greater),
            (_, Infinite) => Some(Ordering::Less),
            (Finite(x), Finite(y)) | (LogScaled(x), LogScaled(y)) => x.partial_cmp(y),
            (Finite(x), LogScaled(y)) if x.is_zero() => Rational::zero().partial_cmp(y),
            (LogScaled(x), Finite(y)) if y.is_zero() => x.partial_cmp(&Rational::zero()),
            _ => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(r) => f.write_str(&format_rational(r)),
            Level::LogScaled(d) => write!(f, "{}/ln(1/a)", format_rational(d)),
            Level::Infinite => f.write_str("inf"),
        }
    }
}

/// A left-continuous nondecreasing step function in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepDistribution {
    breakpoints: Vec<Rational>,
    values: Vec<Grade>,
}

impl StepDistribution {
    /// Builds `F` with `F(t) = values[i]` on `(breakpoints[i-1], breakpoints[i]]`
    /// and `values[k]` beyond the last breakpoint. The result is canonicalized:
    /// a breakpoint at 0 is dropped and equal neighbouring values are merged.
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Grade>) -> Result<Self, DistributionError> {
        if values.len() != breakpoints.len() + 1 {
            return Err(DistributionError::Shape { breakpoints: breakpoints.len(), values: values.len() });
        }
        if breakpoints.iter().any(Signed::is_negative) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DistributionError::Breakpoints);
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(DistributionError::Values);
        }
        Ok(Self::canonical(breakpoints, values))
    }

    fn canonical(breakpoints: Vec<Rational>, values: Vec<Grade>) -> Self {
        let mut t: Vec<Rational> = Vec::with_capacity(breakpoints.len());
        let mut v: Vec<Grade> = Vec::with_capacity(values.len());
        let mut values = values.into_iter();
        v.push(values.next().expect("at least one value"));
        for (bp, next) in breakpoints.into_iter().zip(values) {
            if bp.is_zero() {
                // The piece (0, 0] is empty.
                *v.last_mut().unwrap() = next;
            } else if *v.last().unwrap() == next {
                continue;
            } else {
                t.push(bp);
                v.push(next);
            }
        }
        StepDistribution { breakpoints: t, values: v }
    }

    pub fn constant(value: Grade) -> Self {
        StepDistribution { breakpoints: Vec::new(), values: vec![value] }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Grade] {
        &self.values
    }

    pub fn terminal(&self) -> &Grade {
        self.values.last().unwrap()
    }

    pub fn eval(&self, t: &Rational) -> Grade {
        if !t.is_positive() {
            return Grade::zero();
        }
        // First breakpoint >= t owns t; past the last one the terminal value holds.
        let idx = self.breakpoints.partition_point(|b| b < t);
        self.values[idx].clone()
    }

    /// `lim_{s -> t+} F(s)`.
    pub fn right_limit(&self, t: &Rational) -> Grade {
        if t.is_negative() {
            return Grade::zero();
        }
        let idx = self.breakpoints.partition_point(|b| b <= t);
        self.values[idx].clone()
    }

    /// `sup { t >= 0 | F(t) <= a }`, infinite when the terminal value is `<= a`.
    pub fn level(&self, a: &Grade) -> Level {
        let below = self.values.partition_point(|v| v <= a);
        match below {
            0 => Level::zero(),
            n if n == self.values.len() => Level::Infinite,
            n => Level::Finite(self.breakpoints[n - 1].clone()),
        }
    }

    /// Inverts a level function back into a distribution.
    ///
    /// `cuts` must start at 0 and be strictly increasing below 1; `levels[j]`
    /// is the level on `[cuts[j], cuts[j+1])` and must be nondecreasing. The
    /// result is `H(t) = sup { a ∈ [0, 1) | L(a) < t }`.
    pub fn from_level_function(cuts: &[Grade], levels: &[Level]) -> Result<Self, DistributionError> {
        if cuts.len() != levels.len() || cuts.is_empty() {
            return Err(DistributionError::Shape { breakpoints: levels.len(), values: cuts.len() });
        }
        if !cuts[0].is_zero() || cuts.windows(2).any(|w| w[0] >= w[1]) || cuts.last().unwrap().is_one() {
            return Err(DistributionError::LevelOutOfRange);
        }
        let mut t: Vec<Rational> = Vec::new();
        let mut v = vec![Grade::zero()];
        for (j, level) in levels.iter().enumerate() {
            let l = match level {
                Level::Finite(l) if !l.is_negative() => l,
                Level::Infinite => break,
                _ => return Err(DistributionError::Breakpoints),
            };
            let next = cuts.get(j + 1).cloned().unwrap_or_else(Grade::one);
            match t.last() {
                Some(last) if last > l => return Err(DistributionError::Values),
                Some(last) if last == l => *v.last_mut().unwrap() = next,
                _ => {
                    t.push(l.clone());
                    v.push(next);
                }
            }
        }
        Ok(Self::canonical(t, v))
    }

    /// The distinct values strictly inside `(0, 1)`, i.e. the level indices
    /// at which `level(F, ·)` can jump.
    pub fn interior_values(&self) -> impl Iterator<Item = &Grade> {
        self.values.iter().filter(|v| !v.is_zero() && !v.is_one())
    }

    /// Pieces `(lo, hi]` with their constant value; the last piece has `hi = None`.
    pub fn pieces(&self) -> impl Iterator<Item = (Rational, Option<&Rational>, &Grade)> {
        let starts = std::iter::once(Rational::zero()).chain(self.breakpoints.iter().cloned());
        let ends = self.breakpoints.iter().map(Some).chain(std::iter::once(None));
        starts.zip(ends).zip(self.values.iter()).map(|((lo, hi), v)| (lo, hi, v))
    }

    /// `t ↦ F(t / factor)`.
    pub fn dilate(&self, factor: &Rational) -> Self {
        StepDistribution {
            breakpoints: self.breakpoints.iter().map(|b| b * factor).collect(),
            values: self.values.clone(),
        }
    }

    /// Pointwise minimum.
    pub fn meet(&self, other: &StepDistribution) -> Self {
        let grid = merged_breakpoints(self, other);
        let values: Vec<Grade> = probe_points(&grid).into_iter().map(|t| self.eval(&t).meet(&other.eval(&t))).collect();
        Self::canonical(grid, values)
    }
}

/// Union of the breakpoints of two step functions, sorted.
fn merged_breakpoints(f: &StepDistribution, g: &StepDistribution) -> Vec<Rational> {
    let mut grid: Vec<Rational> = f.breakpoints.iter().chain(g.breakpoints.iter()).cloned().collect();
    grid.sort();
    grid.dedup();
    grid
}

/// One point per piece of the partition induced by `grid`: each breakpoint
/// (right end of its piece) followed by one point beyond the last.
fn probe_points(grid: &[Rational]) -> Vec<Rational> {
    let tail = grid.last().map(|l| l + Rational::one()).unwrap_or_else(Rational::one);
    grid.iter().cloned().chain(std::iter::once(tail)).collect()
}

impl fmt::Display for StepDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.breakpoints.iter().map(format_rational).collect();
        let v: Vec<String> = self.values.iter().map(Grade::to_string).collect();
        write!(f, "Step{{t:({}), v:({})}}", t.join(","), v.join(","))
    }
}

/// Closed-form generator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `t / (t + d)`.
    #[serde(rename = "standard")]
    Standard,
    /// `exp(-d / t)`.
    #[serde(rename = "exp")]
    Exponential,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaledDistribution {
    generator: Generator,
    scale: Rational,
}

impl ScaledDistribution {
    pub fn new(generator: Generator, scale: Rational) -> Result<Self, DistributionError> {
        if !scale.is_positive() {
            return Err(DistributionError::Scale);
        }
        Ok(ScaledDistribution { generator, scale })
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn eval(&self, t: &Rational) -> Result<Grade, DistributionError> {
        if !t.is_positive() {
            return Ok(Grade::zero());
        }
        match self.generator {
            Generator::Standard => Ok(Grade::new(t / (t + &self.scale)).expect("t/(t+d) lies in [0,1]")),
            Generator::Exponential => Err(DistributionError::Inexact),
        }
    }

    pub fn approx(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let d = to_f64(&self.scale);
        match self.generator {
            Generator::Standard => t / (t + d),
            Generator::Exponential => (-d / t).exp(),
        }
    }

    /// Standard: `a·d / (1 - a)`; Exponential: `d / ln(1/a)`.
    pub fn level(&self, a: &Grade) -> Level {
        if a.is_zero() {
            return Level::zero();
        }
        if a.is_one() {
            return Level::Infinite;
        }
        match self.generator {
            Generator::Standard => Level::Finite(a.value() * &self.scale / (Rational::one() - a.value())),
            Generator::Exponential => Level::LogScaled(self.scale.clone()),
        }
    }
}

impl fmt::Display for ScaledDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.generator {
            Generator::Standard => "Standard",
            Generator::Exponential => "Exponential",
        };
        write!(f, "{name}{{d={}}}", format_rational(&self.scale))
    }
}

/// A distance distribution of one of the supported shapes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Distribution {
    Step(StepDistribution),
    Scaled(ScaledDistribution),
    PointOne,
}

/// Which family a distribution belongs to, for mixing rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Step,
    Scaled(Generator),
    PointOne,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Step => "step",
            Family::Scaled(Generator::Standard) => "standard",
            Family::Scaled(Generator::Exponential) => "exponential",
            Family::PointOne => "point-one",
        }
    }
}

enum Pair<'a> {
    Steps(StepDistribution, StepDistribution),
    Scaled(&'a ScaledDistribution, &'a ScaledDistribution),
    /// Scaled on one side, the point mass on the other; `left_is_one` says which.
    ScaledWithOne {
        scaled: &'a ScaledDistribution,
        left_is_one: bool,
    },
}

impl Distribution {
    /// Step constructor that folds the constant-1 function into `PointOne`.
    pub fn step(breakpoints: Vec<Rational>, values: Vec<Grade>) -> Result<Self, DistributionError> {
        Ok(Self::from_step(StepDistribution::new(breakpoints, values)?))
    }

    pub fn from_step(step: StepDistribution) -> Self {
        if step.breakpoints.is_empty() && step.values[0].is_one() {
            Distribution::PointOne
        } else {
            Distribution::Step(step)
        }
    }

    pub fn standard(scale: Rational) -> Result<Self, DistributionError> {
        Ok(Distribution::Scaled(ScaledDistribution::new(Generator::Standard, scale)?))
    }

    pub fn exponential(scale: Rational) -> Result<Self, DistributionError> {
        Ok(Distribution::Scaled(ScaledDistribution::new(Generator::Exponential, scale)?))
    }

    pub fn family(&self) -> Family {
        match self {
            Distribution::Step(_) => Family::Step,
            Distribution::Scaled(s) => Family::Scaled(s.generator),
            Distribution::PointOne => Family::PointOne,
        }
    }

    pub fn is_point_one(&self) -> bool {
        matches!(self, Distribution::PointOne)
    }

    /// Step view; `PointOne` becomes the constant 1 step.
    pub fn as_step(&self) -> Option<StepDistribution> {
        match self {
            Distribution::Step(s) => Some(s.clone()),
            Distribution::PointOne => Some(StepDistribution::constant(Grade::one())),
            Distribution::Scaled(_) => None,
        }
    }

    fn pair<'a>(&'a self, other: &'a Distribution) -> Result<Pair<'a>, DistributionError> {
        use Distribution::*;
        match (self, other) {
            (Scaled(f), Scaled(g)) if f.generator == g.generator => Ok(Pair::Scaled(f, g)),
            (Scaled(f), PointOne) => Ok(Pair::ScaledWithOne { scaled: f, left_is_one: false }),
            (PointOne, Scaled(g)) => Ok(Pair::ScaledWithOne { scaled: g, left_is_one: true }),
            (Scaled(_), _) | (_, Scaled(_)) => {
                Err(DistributionError::MixedVariant(self.family().name(), other.family().name()))
            }
            _ => Ok(Pair::Steps(self.as_step().unwrap(), other.as_step().unwrap())),
        }
    }

    /// `F(t)`; exact except for the exponential family at `t > 0`.
    pub fn eval(&self, t: &Rational) -> Result<Grade, DistributionError> {
        if t.is_negative() {
            return Err(DistributionError::NegativeTime);
        }
        match self {
            Distribution::Step(s) => Ok(s.eval(t)),
            Distribution::Scaled(s) => s.eval(t),
            Distribution::PointOne => Ok(if t.is_positive() { Grade::one() } else { Grade::zero() }),
        }
    }

    /// Floating-point value for display; not used by any decision procedure.
    pub fn approx(&self, t: f64) -> f64 {
        match self {
            Distribution::Step(_) if t <= 0.0 => 0.0,
            Distribution::Step(s) => {
                let idx = s.breakpoints.partition_point(|b| to_f64(b) < t);
                s.values[idx].to_f64()
            }
            Distribution::Scaled(s) => s.approx(t),
            Distribution::PointOne => f64::from(u8::from(t > 0.0)),
        }
    }

    /// `sup { t | F(t) <= a }` for `0 < a < 1`.
    pub fn level(&self, a: &Grade) -> Result<Level, DistributionError> {
        if a.is_zero() || a.is_one() {
            return Err(DistributionError::LevelOutOfRange);
        }
        Ok(self.level_unchecked(a))
    }

    /// Same as [`Distribution::level`] but defined on all of `[0, 1]`.
    pub fn level_unchecked(&self, a: &Grade) -> Level {
        match self {
            Distribution::Step(s) => s.level(a),
            Distribution::Scaled(s) => s.level(a),
            Distribution::PointOne if a.is_one() => Level::Infinite,
            Distribution::PointOne => Level::zero(),
        }
    }

    /// `t ↦ F(t / factor)` for a positive factor.
    pub fn dilate(&self, factor: &Rational) -> Distribution {
        assert!(factor.is_positive(), "dilation factor must be positive");
        match self {
            Distribution::Step(s) => Distribution::Step(s.dilate(factor)),
            Distribution::Scaled(s) => {
                Distribution::Scaled(ScaledDistribution { generator: s.generator, scale: &s.scale * factor })
            }
            Distribution::PointOne => Distribution::PointOne,
        }
    }

    /// Pointwise minimum within one family.
    pub fn meet(&self, other: &Distribution) -> Result<Distribution, DistributionError> {
        Ok(match self.pair(other)? {
            Pair::Steps(f, g) => Distribution::from_step(f.meet(&g)),
            Pair::Scaled(f, g) => {
                // Larger scale means a smaller function.
                if f.scale >= g.scale {
                    self.clone()
                } else {
                    other.clone()
                }
            }
            Pair::ScaledWithOne { scaled, .. } => Distribution::Scaled(scaled.clone()),
        })
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Step(s) => s.fmt(f),
            Distribution::Scaled(s) => s.fmt(f),
            Distribution::PointOne => f.write_str("PointOne"),
        }
    }
}

pub fn eval(f: &Distribution, t: &Rational) -> Result<Grade, DistributionError> {
    f.eval(t)
}

pub fn level(f: &Distribution, a: &Grade) -> Result<Level, DistributionError> {
    f.level(a)
}

/// `H(t) = sup_{s + r = t} min(F(s), G(r))`.
pub fn supmin_convolve(f: &Distribution, g: &Distribution) -> Result<Distribution, DistributionError> {
    match f.pair(g)? {
        Pair::Scaled(a, b) => {
            Ok(Distribution::Scaled(ScaledDistribution { generator: a.generator, scale: &a.scale + &b.scale }))
        }
        Pair::ScaledWithOne { scaled, .. } => Ok(Distribution::Scaled(scaled.clone())),
        Pair::Steps(a, b) => Ok(Distribution::from_step(convolve_steps(&a, &b))),
    }
}

fn convolve_steps(f: &StepDistribution, g: &StepDistribution) -> StepDistribution {
    // The level sum is constant between consecutive values of either input.
    let mut cuts: Vec<Grade> = std::iter::once(Grade::zero())
        .chain(f.values.iter().cloned())
        .chain(g.values.iter().cloned())
        .filter(|a| !a.is_one())
        .collect();
    cuts.sort();
    cuts.dedup();
    let levels: Vec<Level> =
        cuts.iter().map(|a| f.level(a).checked_add(&g.level(a)).expect("step levels are finite or infinite")).collect();
    StepDistribution::from_level_function(&cuts, &levels).expect("level sums are nondecreasing")
}

/// `F(t) <= G(t)` for every `t >= 0`.
pub fn pointwise_le(f: &Distribution, g: &Distribution) -> Result<bool, DistributionError> {
    Ok(match f.pair(g)? {
        Pair::Steps(a, b) => {
            let grid = merged_breakpoints(&a, &b);
            probe_points(&grid).into_iter().all(|t| a.eval(&t) <= b.eval(&t))
        }
        Pair::Scaled(a, b) => a.scale >= b.scale,
        Pair::ScaledWithOne { left_is_one, .. } => !left_is_one,
    })
}

/// `inf_{t > 0} (F(t) → G(t))` with the Gödel implication.
pub fn godel_residual_inf(f: &Distribution, g: &Distribution) -> Result<Grade, DistributionError> {
    Ok(match f.pair(g)? {
        Pair::Steps(a, b) => {
            let grid = merged_breakpoints(&a, &b);
            probe_points(&grid)
                .into_iter()
                .map(|t| {
                    let (x, y) = (a.eval(&t), b.eval(&t));
                    if x <= y {
                        Grade::one()
                    } else {
                        y
                    }
                })
                .min()
                .unwrap_or_else(Grade::one)
        }
        // F > G everywhere on (0, ∞) and G(t) -> 0 as t -> 0.
        Pair::Scaled(a, b) => {
            if a.scale >= b.scale {
                Grade::one()
            } else {
                Grade::zero()
            }
        }
        Pair::ScaledWithOne { left_is_one, .. } => {
            if left_is_one {
                Grade::zero()
            } else {
                Grade::one()
            }
        }
    })
}

/// Transparent serde wrapper for rationals written as fraction strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalText(#[serde(with = "serde_rational")] pub Rational);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DistributionRepr {
    Step {
        t: Vec<RationalText>,
        v: Vec<Grade>,
    },
    Scaled {
        #[serde(rename = "gen")]
        generator: Generator,
        d: RationalText,
    },
    One {
        one: bool,
    },
}

impl Serialize for Distribution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            Distribution::Step(step) => DistributionRepr::Step {
                t: step.breakpoints.iter().cloned().map(RationalText).collect(),
                v: step.values.clone(),
            },
            Distribution::Scaled(sc) => {
                DistributionRepr::Scaled { generator: sc.generator, d: RationalText(sc.scale.clone()) }
            }
            Distribution::PointOne => DistributionRepr::One { one: true },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Distribution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match DistributionRepr::deserialize(d)? {
            DistributionRepr::Step { t, v } => {
                Distribution::step(t.into_iter().map(|r| r.0).collect(), v).map_err(D::Error::custom)
            }
            DistributionRepr::Scaled { generator, d } => {
                ScaledDistribution::new(generator, d.0).map(Distribution::Scaled).map_err(D::Error::custom)
            }
            DistributionRepr::One { one: true } => Ok(Distribution::PointOne),
            DistributionRepr::One { one: false } => Err(D::Error::custom("\"one\" must be true")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn g(n: i64, d: i64) -> Grade {
        Grade::frac(n, d)
    }

    fn step(t: &[(i64, i64)], v: &[(i64, i64)]) -> Distribution {
        Distribution::step(t.iter().map(|&(n, d)| ratio(n, d)).collect(), v.iter().map(|&(n, d)| g(n, d)).collect())
            .unwrap()
    }

    /// Step{t:(1,2), v:(0,1/2,1)}.
    fn worked() -> Distribution {
        step(&[(1, 1), (2, 1)], &[(0, 1), (1, 2), (1, 1)])
    }

    /// Dense probe grid on [0, hi] with spacing 1/den.
    fn dense(hi: i64, den: i64) -> Vec<Rational> {
        (0..=hi * den).map(|k| ratio(k, den)).collect()
    }

    #[test]
    fn eval_examples() {
        let f = worked();
        assert_eq!(f.eval(&ratio(1, 1)).unwrap(), g(0, 1));
        assert_eq!(f.eval(&ratio(3, 2)).unwrap(), g(1, 2));
        assert_eq!(Distribution::standard(ratio(3, 1)).unwrap().eval(&ratio(3, 1)).unwrap(), g(1, 2));
        for d in [f.clone(), Distribution::standard(ratio(3, 1)).unwrap(), Distribution::PointOne] {
            assert_eq!(d.eval(&Rational::zero()).unwrap(), Grade::zero());
        }
        assert_eq!(Distribution::exponential(ratio(1, 1)).unwrap().eval(&ratio(1, 1)), Err(DistributionError::Inexact));
        assert!((Distribution::exponential(ratio(1, 1)).unwrap().approx(1.0) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn eval_at_jump_is_left_limit() {
        let f = worked();
        // sup of F over s < 1 on a dense grid approaching 1 from the left.
        let left_sup = dense(1, 1000).iter().filter(|s| **s < ratio(1, 1)).map(|s| f.eval(s).unwrap()).max().unwrap();
        assert_eq!(left_sup, f.eval(&ratio(1, 1)).unwrap());
    }

    #[test]
    fn canonical_form_merges_pieces() {
        let f =
            Distribution::step(vec![ratio(1, 1), ratio(2, 1), ratio(3, 1)], vec![g(0, 1), g(0, 1), g(1, 2), g(1, 2)])
                .unwrap();
        assert_eq!(f, step(&[(2, 1)], &[(0, 1), (1, 2)]));
        let z = Distribution::step(vec![Rational::zero(), ratio(1, 1)], vec![g(1, 3), g(1, 2), g(1, 1)]).unwrap();
        assert_eq!(z, step(&[(1, 1)], &[(1, 2), (1, 1)]));
        assert_eq!(Distribution::step(vec![], vec![Grade::one()]).unwrap(), Distribution::PointOne);
        assert!(Distribution::step(vec![ratio(2, 1), ratio(1, 1)], vec![g(0, 1), g(0, 1), g(1, 1)]).is_err());
        assert!(Distribution::step(vec![ratio(1, 1)], vec![g(1, 2), g(1, 3)]).is_err());
        assert!(Distribution::step(vec![ratio(1, 1)], vec![g(1, 2)]).is_err());
    }

    #[test]
    fn level_examples() {
        let f = worked();
        assert_eq!(f.level(&g(1, 4)).unwrap(), Level::Finite(ratio(1, 1)));
        assert_eq!(f.level(&g(1, 2)).unwrap(), Level::Finite(ratio(2, 1)));
        assert_eq!(Distribution::standard(ratio(3, 1)).unwrap().level(&g(2, 3)).unwrap(), Level::Finite(ratio(6, 1)));
        assert_eq!(Distribution::PointOne.level(&g(1, 3)).unwrap(), Level::zero());
        assert_eq!(step(&[(1, 1)], &[(0, 1), (1, 2)]).level(&g(3, 4)).unwrap(), Level::Infinite);
        assert_eq!(
            Distribution::exponential(ratio(5, 1)).unwrap().level(&g(1, 2)).unwrap(),
            Level::LogScaled(ratio(5, 1))
        );
        assert!(f.level(&Grade::zero()).is_err());
    }

    #[test]
    fn level_matches_dense_grid_sup() {
        let f = worked();
        let grid = dense(4, 64);
        for a in [g(1, 4), g(1, 2)] {
            let sup = grid.iter().filter(|t| f.eval(t).unwrap() <= a).max().unwrap().clone();
            assert_eq!(f.level(&a).unwrap(), Level::Finite(sup));
        }
        let std3 = Distribution::standard(ratio(3, 1)).unwrap();
        let sup = dense(20, 100).into_iter().filter(|t| std3.eval(t).unwrap() <= g(2, 3)).max().unwrap();
        assert_eq!(sup, ratio(6, 1));
    }

    #[test]
    fn convolution_examples() {
        let f = worked();
        assert_eq!(supmin_convolve(&f, &f).unwrap(), step(&[(2, 1), (4, 1)], &[(0, 1), (1, 2), (1, 1)]));
        let s1 = Distribution::standard(ratio(1, 1)).unwrap();
        let s2 = Distribution::standard(ratio(2, 1)).unwrap();
        assert_eq!(supmin_convolve(&s1, &s2).unwrap(), Distribution::standard(ratio(3, 1)).unwrap());
        assert_eq!(supmin_convolve(&f, &Distribution::PointOne).unwrap(), f);
        assert_eq!(supmin_convolve(&Distribution::PointOne, &s1).unwrap(), s1);
        assert_eq!(supmin_convolve(&Distribution::PointOne, &Distribution::PointOne).unwrap(), Distribution::PointOne);
        assert!(matches!(supmin_convolve(&f, &s1), Err(DistributionError::MixedVariant(..))));
        let e = Distribution::exponential(ratio(1, 1)).unwrap();
        assert!(matches!(supmin_convolve(&e, &s1), Err(DistributionError::MixedVariant(..))));
    }

    #[test]
    fn standard_convolution_against_grid() {
        // H(t) = sup_{s in grid} min(F(s), G(t - s)) on a grid that contains
        // the optimal split s = t/3 for every probed t.
        let s1 = Distribution::standard(ratio(1, 1)).unwrap();
        let s2 = Distribution::standard(ratio(2, 1)).unwrap();
        let s3 = Distribution::standard(ratio(3, 1)).unwrap();
        for t in (1..=12).map(|k| ratio(k, 1)) {
            let best = (0..=300)
                .map(|k| &t * ratio(k, 300))
                .map(|s| s1.eval(&s).unwrap().meet(&s2.eval(&(&t - &s)).unwrap()))
                .max()
                .unwrap();
            assert_eq!(best, s3.eval(&t).unwrap());
        }
    }

    #[test]
    fn pointwise_le_examples() {
        let a = step(&[(1, 1)], &[(0, 1), (1, 1)]);
        let b = step(&[(2, 1)], &[(0, 1), (1, 1)]);
        assert!(!pointwise_le(&a, &b).unwrap());
        assert!(a.eval(&ratio(3, 2)).unwrap() > b.eval(&ratio(3, 2)).unwrap());
        assert!(pointwise_le(&b, &a).unwrap());
        assert!(pointwise_le(&a, &a).unwrap());
        let s2 = Distribution::standard(ratio(2, 1)).unwrap();
        let s1 = Distribution::standard(ratio(1, 1)).unwrap();
        assert!(pointwise_le(&s2, &s1).unwrap());
        assert!(!pointwise_le(&s1, &s2).unwrap());
        assert!(pointwise_le(&s1, &Distribution::PointOne).unwrap());
        assert!(!pointwise_le(&Distribution::PointOne, &s1).unwrap());
        assert!(pointwise_le(&a, &Distribution::PointOne).unwrap());
    }

    #[test]
    fn residual_examples() {
        let f = step(&[(2, 1)], &[(0, 1), (1, 1)]);
        let h = step(&[(2, 1), (4, 1)], &[(0, 1), (1, 2), (1, 1)]);
        assert_eq!(godel_residual_inf(&f, &h).unwrap(), g(1, 2));
        let w = worked();
        let h2 = step(&[(3, 1), (4, 1)], &[(0, 1), (1, 2), (1, 1)]);
        assert_eq!(godel_residual_inf(&w, &h2).unwrap(), Grade::zero());
        assert_eq!(godel_residual_inf(&h, &f).unwrap(), Grade::one());
        // Dense grid agreement for the first example.
        let grid = dense(6, 8);
        let oracle = grid
            .iter()
            .filter(|t| t.is_positive())
            .map(|t| {
                let (x, y) = (f.eval(t).unwrap(), h.eval(t).unwrap());
                if x <= y {
                    Grade::one()
                } else {
                    y
                }
            })
            .min()
            .unwrap();
        assert_eq!(oracle, g(1, 2));
    }

    #[test]
    fn scaled_residuals() {
        let s1 = Distribution::standard(ratio(1, 1)).unwrap();
        let s2 = Distribution::standard(ratio(2, 1)).unwrap();
        assert_eq!(godel_residual_inf(&s2, &s1).unwrap(), Grade::one());
        assert_eq!(godel_residual_inf(&s1, &s2).unwrap(), Grade::zero());
        assert_eq!(godel_residual_inf(&Distribution::PointOne, &s1).unwrap(), Grade::zero());
        assert_eq!(godel_residual_inf(&s1, &Distribution::PointOne).unwrap(), Grade::one());
    }

    #[test]
    fn level_comparisons() {
        assert!(Level::LogScaled(ratio(1, 1)) < Level::LogScaled(ratio(2, 1)));
        assert!(Level::zero() < Level::LogScaled(ratio(2, 1)));
        assert_eq!(Level::Finite(ratio(1, 1)).partial_cmp(&Level::LogScaled(ratio(1, 1))), None);
        assert!(Level::Finite(ratio(5, 1)) < Level::Infinite);
        assert_eq!(
            Level::LogScaled(ratio(1, 1)).checked_add(&Level::LogScaled(ratio(2, 1))),
            Some(Level::LogScaled(ratio(3, 1)))
        );
    }

    #[test]
    fn json_shapes() {
        let f = worked();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"t":["1","2"],"v":["0","1/2","1"]}"#);
        assert_eq!(serde_json::from_str::<Distribution>(&text).unwrap(), f);
        let s = Distribution::standard(ratio(3, 2)).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"gen":"standard","d":"3/2"}"#);
        assert_eq!(serde_json::to_string(&Distribution::PointOne).unwrap(), r#"{"one":true}"#);
        let parsed: Distribution = serde_json::from_str(r#"{"t":[1, "2.5"],"v":["0","0.5",1]}"#).unwrap();
        assert_eq!(parsed, step(&[(1, 1), (5, 2)], &[(0, 1), (1, 2), (1, 1)]));
        assert!(serde_json::from_str::<Distribution>(r#"{"gen":"exp","d":"0"}"#).is_err());
    }

    #[test]
    fn dilate_and_meet() {
        let f = worked();
        assert_eq!(f.dilate(&int(2)), step(&[(2, 1), (4, 1)], &[(0, 1), (1, 2), (1, 1)]));
        let other = step(&[(3, 2)], &[(0, 1), (1, 1)]);
        assert_eq!(f.meet(&other).unwrap(), step(&[(3, 2), (2, 1)], &[(0, 1), (1, 2), (1, 1)]));
    }
}
