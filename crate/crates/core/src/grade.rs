//! Exact membership degrees and the three classical t-norms.

use std::fmt;
use std::str::FromStr;

use num::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GradeError;
use crate::rational::{format_rational, parse_rational, ratio, to_f64, Rational};

/// A rational number in the closed unit interval.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grade(Rational);

impl Grade {
    pub fn new(value: Rational) -> Result<Self, GradeError> {
        if value < Rational::zero() || value > Rational::one() {
            return Err(GradeError::OutOfRange(format_rational(&value)));
        }
        Ok(Grade(value))
    }

    /// `num/den`; panics when the quotient is not in `[0, 1]`.
    pub fn frac(num: i64, den: i64) -> Self {
        Grade::new(ratio(num, den)).expect("grade literal outside [0, 1]")
    }

    pub fn zero() -> Self {
        Grade(Rational::zero())
    }

    pub fn one() -> Self {
        Grade(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_value(self) -> Rational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0)
    }

    pub fn meet(&self, other: &Grade) -> Grade {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn join(&self, other: &Grade) -> Grade {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `1 - self`.
    pub fn complement(&self) -> Grade {
        Grade(Rational::one() - &self.0)
    }

    /// Truncated sum `min(1, a + b)`.
    pub fn bounded_sum(&self, other: &Grade) -> Grade {
        let s = &self.0 + &other.0;
        if s > Rational::one() {
            Grade::one()
        } else {
            Grade(s)
        }
    }

    /// Midpoint of two grades; stays in `[0, 1]`.
    pub fn midpoint(&self, other: &Grade) -> Grade {
        Grade((&self.0 + &other.0) / Rational::from_integer(2.into()))
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for Grade {
    type Err = GradeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Grade::new(parse_rational(s)?)
    }
}

impl TryFrom<Rational> for Grade {
    type Error = GradeError;

    fn try_from(value: Rational) -> Result<Self, Self::Error> {
        Grade::new(value)
    }
}

impl Serialize for Grade {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Grade {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = crate::rational::serde_rational::deserialize(d)?;
        Grade::new(value).map_err(serde::de::Error::custom)
    }
}

/// The t-norms shipped with the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum TNormKind {
    #[default]
    #[serde(rename = "min")]
    Minimum,
    #[serde(rename = "prod")]
    Product,
    #[serde(rename = "luk")]
    Lukasiewicz,
}

impl TNormKind {
    pub const ALL: [TNormKind; 3] = [TNormKind::Minimum, TNormKind::Product, TNormKind::Lukasiewicz];

    pub fn name(self) -> &'static str {
        match self {
            TNormKind::Minimum => "min",
            TNormKind::Product => "prod",
            TNormKind::Lukasiewicz => "luk",
        }
    }

    pub fn apply(self, a: &Grade, b: &Grade) -> Grade {
        tnorm_apply(self, a, b)
    }

    pub fn residuum(self, a: &Grade, b: &Grade) -> Grade {
        residuum(self, a, b)
    }
}

impl fmt::Display for TNormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TNormKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "min" | "minimum" | "godel" => Ok(TNormKind::Minimum),
            "prod" | "product" | "goguen" => Ok(TNormKind::Product),
            "luk" | "lukasiewicz" => Ok(TNormKind::Lukasiewicz),
            other => Err(format!("unknown t-norm {other:?} (expected min, prod or luk)")),
        }
    }
}

pub fn tnorm_apply(kind: TNormKind, a: &Grade, b: &Grade) -> Grade {
    match kind {
        TNormKind::Minimum => a.meet(b),
        TNormKind::Product => Grade(&a.0 * &b.0),
        TNormKind::Lukasiewicz => {
            let s = &a.0 + &b.0 - Rational::one();
            if s > Rational::zero() {
                Grade(s)
            } else {
                Grade::zero()
            }
        }
    }
}

/// Residual implication `a -> b = sup { c | a * c <= b }` in closed form.
pub fn residuum(kind: TNormKind, a: &Grade, b: &Grade) -> Grade {
    if a <= b {
        return Grade::one();
    }
    match kind {
        TNormKind::Minimum => b.clone(),
        TNormKind::Product => Grade(&b.0 / &a.0),
        TNormKind::Lukasiewicz => Grade(Rational::one() - &a.0 + &b.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(step_den: i64) -> Vec<Grade> {
        (0..=step_den).map(|k| Grade::frac(k, step_den)).collect()
    }

    /// sup over a uniform grid of c with a*c <= b.
    fn grid_residuum(kind: TNormKind, a: &Grade, b: &Grade, den: i64) -> Grade {
        grid(den).into_iter().filter(|c| tnorm_apply(kind, a, c) <= *b).max().unwrap()
    }

    #[test]
    fn tnorm_examples() {
        let g = Grade::frac;
        assert_eq!(tnorm_apply(TNormKind::Minimum, &g(3, 10), &g(7, 10)), g(3, 10));
        assert_eq!(tnorm_apply(TNormKind::Product, &g(1, 2), &g(2, 5)), g(1, 5));
        assert_eq!(tnorm_apply(TNormKind::Lukasiewicz, &g(1, 2), &g(2, 5)), Grade::zero());
        for kind in TNormKind::ALL {
            for b in grid(20) {
                assert_eq!(tnorm_apply(kind, &Grade::one(), &b), b);
            }
        }
    }

    #[test]
    fn residuum_examples_against_grid_sup() {
        let g = Grade::frac;
        let (a, b) = (g(7, 10), g(3, 10));
        assert_eq!(residuum(TNormKind::Minimum, &a, &b), g(3, 10));
        assert_eq!(residuum(TNormKind::Lukasiewicz, &a, &b), g(6, 10));
        // The 10^4 grid contains both answers, so the brute-force sup is exact here.
        assert_eq!(grid_residuum(TNormKind::Minimum, &a, &b, 10_000), g(3, 10));
        assert_eq!(grid_residuum(TNormKind::Lukasiewicz, &a, &b, 10_000), g(6, 10));
        // Goguen: 3/7 is off-grid; the grid sup is the largest grid point below it.
        let exact = residuum(TNormKind::Product, &a, &b);
        assert_eq!(exact, g(3, 7));
        let approx = grid_residuum(TNormKind::Product, &a, &b, 10_000);
        assert!(approx <= exact);
        assert!(exact.value() - approx.value() < ratio(1, 10_000));
        for kind in TNormKind::ALL {
            assert_eq!(residuum(kind, &g(1, 5), &g(3, 5)), Grade::one());
        }
    }

    #[test]
    fn tnorm_axioms_on_grid() {
        let pts = grid(20);
        for kind in TNormKind::ALL {
            for a in &pts {
                assert_eq!(tnorm_apply(kind, a, &Grade::zero()), Grade::zero());
                for b in &pts {
                    let ab = tnorm_apply(kind, a, b);
                    assert_eq!(ab, tnorm_apply(kind, b, a));
                    assert!(ab <= a.meet(b));
                    for c in &pts {
                        assert_eq!(tnorm_apply(kind, a, &tnorm_apply(kind, b, c)), tnorm_apply(kind, &ab, c));
                        if a <= b {
                            assert!(tnorm_apply(kind, a, c) <= tnorm_apply(kind, b, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn adjunction_and_residuum_monotonicity_on_grid() {
        let pts = grid(20);
        for kind in TNormKind::ALL {
            for a in &pts {
                for b in &pts {
                    let r = residuum(kind, a, b);
                    for c in &pts {
                        assert_eq!(tnorm_apply(kind, a, c) <= *b, *c <= r, "{kind} {a} {b} {c}");
                        if b <= c {
                            assert!(r <= residuum(kind, a, c));
                        }
                        if a <= c {
                            assert!(residuum(kind, c, b) <= r);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn grade_range_and_text() {
        assert!(Grade::new(ratio(3, 2)).is_err());
        assert!(Grade::new(ratio(-1, 2)).is_err());
        assert_eq!("0.5".parse::<Grade>().unwrap(), Grade::frac(1, 2));
        assert_eq!(Grade::frac(2, 4).to_string(), "1/2");
        assert_eq!(serde_json::to_string(&Grade::frac(3, 6)).unwrap(), "\"1/2\"");
        assert_eq!(serde_json::from_str::<Grade>("\"0.25\"").unwrap(), Grade::frac(1, 4));
        assert_eq!(serde_json::from_str::<Grade>("1").unwrap(), Grade::one());
    }
}
