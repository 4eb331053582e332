use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a rational number: {0:?}")]
pub struct ParseNumberError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradeError {
    #[error("grade {0} lies outside [0, 1]")]
    OutOfRange(String),
    #[error(transparent)]
    Parse(#[from] ParseNumberError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistributionError {
    #[error("breakpoints and values have incompatible lengths ({breakpoints} breakpoints, {values} values)")]
    Shape { breakpoints: usize, values: usize },
    #[error("breakpoints must be nonnegative and strictly increasing")]
    Breakpoints,
    #[error("values must be nondecreasing")]
    Values,
    #[error("scale must be a positive rational")]
    Scale,
    #[error("operation mixes distribution families ({0} with {1})")]
    MixedVariant(&'static str, &'static str),
    #[error("value of the exponential family at t > 0 is irrational")]
    Inexact,
    #[error("time argument must be nonnegative")]
    NegativeTime,
    #[error("level index must lie strictly between 0 and 1")]
    LevelOutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("entry matrix does not match the {0} labelled points")]
    ShapeMismatch(usize),
    #[error("diagonal entry ({0}, {0}) is not the point mass at 0")]
    DiagonalNotOne(String),
    #[error("entry ({0}, {1}) is the point mass at 0 but the points differ")]
    OffDiagonalOne(String, String),
    #[error("entries ({0}, {1}) and ({1}, {0}) differ")]
    AsymmetricEntries(String, String),
    #[error("space needs at least one point")]
    Empty,
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("distance matrix does not match the {0} labelled points")]
    ShapeMismatch(usize),
    #[error("d({0}, {0}) must be 0")]
    NonzeroDiagonal(String),
    #[error("d({0}, {1}) must be positive")]
    NonPositive(String, String),
    #[error("d({0}, {1}) differs from d({1}, {0})")]
    Asymmetric(String, String),
    #[error("triangle inequality fails: d({0}, {2}) > d({0}, {1}) + d({1}, {2})")]
    Triangle(String, String, String),
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NestError {
    #[error("unknown point label {0:?}")]
    UnknownPoint(String),
    #[error("pair key {0:?} is not of the form \"x|y\" with x != y")]
    BadPairKey(String),
    #[error("pair ({0}, {1}) is given twice")]
    DuplicatePair(String, String),
    #[error("pair ({0}, {1}) is missing")]
    MissingPair(String, String),
    #[error("pair ({0}, {1}): level indices must be strictly increasing inside (0, 1)")]
    Levels(String, String),
    #[error("pair ({0}, {1}): expected one more distance than level indices")]
    Shape(String, String),
    #[error("pair ({0}, {1}): distances must be nonnegative")]
    Negative(String, String),
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("nests are only materialized for step-distribution spaces")]
    UnsupportedVariant,
    #[error("entry ({0}, {1}) never reaches 1, so some level distance is infinite")]
    InfiniteLevel(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("relations live on universes of different sizes ({0} and {1})")]
    UniverseMismatch(usize, usize),
    #[error("index {index} is out of range for a universe of size {n}")]
    OutOfRange { index: usize, n: usize },
    #[error("composition index must be 1..=6, got {0}")]
    CompositionIndex(usize),
    #[error("order relation is not {0}")]
    NotPartialOrder(&'static str),
    #[error("lattice tables are not {0}")]
    NotLattice(&'static str),
    #[error("grade tensor has {got} entries, expected {expected}")]
    TensorShape { got: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("grid is missing required point {0}")]
    GridTooCoarse(String),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
}
