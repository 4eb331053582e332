//! Crisp binary and ternary relations on `{0, …, n-1}`, their
//! compositions, four- and five-point transitivity, and betweenness.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distribution::Level;
use crate::error::RelationError;
use crate::fuzzy_metric::FuzzyMetricSpace;
use crate::grade::Grade;
use crate::metric::FiniteMetric;
use crate::nest::MetricNest;
use crate::rational::Rational;
use crate::report::{CheckResult, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    n: usize,
    members: Vec<bool>,
}

impl BinaryRelation {
    pub fn empty(n: usize) -> Self {
        BinaryRelation { n, members: vec![false; n * n] }
    }

    pub fn full(n: usize) -> Self {
        BinaryRelation { n, members: vec![true; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, RelationError> {
        let mut r = Self::empty(n);
        for &(x, y) in pairs {
            check_index(x.max(y), n)?;
            r.insert(x, y);
        }
        Ok(r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.members[x * self.n + y]
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.members[x * self.n + y] = true;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n * n).filter(|&k| self.members[k]).map(move |k| (k / n, k % n))
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TernaryRelation {
    n: usize,
    members: Vec<bool>,
}

impl TernaryRelation {
    pub fn empty(n: usize) -> Self {
        TernaryRelation { n, members: vec![false; n * n * n] }
    }

    pub fn full(n: usize) -> Self {
        TernaryRelation { n, members: vec![true; n * n * n] }
    }

    pub fn from_triples(n: usize, triples: &[(usize, usize, usize)]) -> Result<Self, RelationError> {
        let mut r = Self::empty(n);
        for &(x, y, z) in triples {
            check_index(x.max(y).max(z), n)?;
            r.insert(x, y, z);
        }
        Ok(r)
    }

    /// `{ (x, y, z) | pred(x, y, z) }`.
    pub fn from_fn(n: usize, mut pred: impl FnMut(usize, usize, usize) -> bool) -> Self {
        let mut members = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    members.push(pred(x, y, z));
                }
            }
        }
        TernaryRelation { n, members }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize, z: usize) -> bool {
        self.members[(x * self.n + y) * self.n + z]
    }

    pub fn insert(&mut self, x: usize, y: usize, z: usize) {
        let n = self.n;
        self.members[(x * n + y) * n + z] = true;
    }

    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.n;
        (0..n * n * n).filter(|&k| self.members[k]).map(move |k| (k / (n * n), (k / n) % n, k % n))
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &TernaryRelation) -> bool {
        self.n == other.n && self.members.iter().zip(&other.members).all(|(a, b)| !a || *b)
    }

    /// First triple of `self` missing from `other`.
    pub fn first_not_in(&self, other: &TernaryRelation) -> Option<(usize, usize, usize)> {
        self.triples().find(|&(x, y, z)| !other.contains(x, y, z))
    }

    pub fn union(&self, other: &TernaryRelation) -> TernaryRelation {
        TernaryRelation { n: self.n, members: self.members.iter().zip(&other.members).map(|(a, b)| *a || *b).collect() }
    }

    pub fn intersection(&self, other: &TernaryRelation) -> TernaryRelation {
        TernaryRelation { n: self.n, members: self.members.iter().zip(&other.members).map(|(a, b)| *a && *b).collect() }
    }
}

impl fmt::Display for TernaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.triples().map(|(x, y, z)| format!("({x},{y},{z})")).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

fn check_index(i: usize, n: usize) -> Result<(), RelationError> {
    if i >= n {
        Err(RelationError::OutOfRange { index: i, n })
    } else {
        Ok(())
    }
}

fn same_universe(a: usize, b: usize) -> Result<(), RelationError> {
    if a == b {
        Ok(())
    } else {
        Err(RelationError::UniverseMismatch(a, b))
    }
}

/// Formats a witness tuple with variable names, e.g. `(x, y, s, t) = (0, 3, 1, 2)`.
pub fn describe_witness(vars: &str, values: &[usize]) -> String {
    let names: Vec<&str> = vars.split(',').collect();
    let vals: Vec<String> = values.iter().map(usize::to_string).collect();
    format!("({}) = ({})", names.join(", "), vals.join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basic {
    Reflexive,
    Symmetric,
    Antisymmetric,
    /// At least one permutation of every triple is in the relation.
    Complete,
}

impl Basic {
    pub const ALL: [Basic; 4] = [Basic::Reflexive, Basic::Symmetric, Basic::Antisymmetric, Basic::Complete];

    pub fn name(self) -> &'static str {
        match self {
            Basic::Reflexive => "reflexive",
            Basic::Symmetric => "symmetric",
            Basic::Antisymmetric => "antisymmetric",
            Basic::Complete => "complete",
        }
    }
}

/// `None` if the property holds, otherwise the first violating tuple.
pub fn check_basic(t: &TernaryRelation, which: Basic) -> Option<Vec<usize>> {
    let n = t.n;
    match which {
        Basic::Reflexive => pairs_iter(n).find(|&(x, y)| !t.contains(x, y, y)).map(|(x, y)| vec![x, y]),
        Basic::Symmetric => {
            triples_iter(n).find(|&(x, y, z)| t.contains(x, y, z) != t.contains(z, y, x)).map(|(x, y, z)| vec![x, y, z])
        }
        Basic::Antisymmetric => triples_iter(n)
            .find(|&(x, y, z)| y != z && t.contains(x, y, z) && t.contains(x, z, y))
            .map(|(x, y, z)| vec![x, y, z]),
        Basic::Complete => triples_iter(n)
            .find(|&(a, b, c)| {
                !(t.contains(a, b, c)
                    || t.contains(a, c, b)
                    || t.contains(b, a, c)
                    || t.contains(b, c, a)
                    || t.contains(c, a, b)
                    || t.contains(c, b, a))
            })
            .map(|(a, b, c)| vec![a, b, c]),
    }
}

fn pairs_iter(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)))
}

fn triples_iter(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
}

/// Left, middle and right projections.
pub fn projections(t: &TernaryRelation) -> (BinaryRelation, BinaryRelation, BinaryRelation) {
    let n = t.n;
    let (mut l, mut m, mut r) = (BinaryRelation::empty(n), BinaryRelation::empty(n), BinaryRelation::empty(n));
    for (a, b, c) in t.triples() {
        l.insert(b, c);
        m.insert(a, c);
        r.insert(a, b);
    }
    (l, m, r)
}

/// `T ⋉ R = { (x, y, z) | ∃t, (x, y, t) ∈ T ∧ (t, z) ∈ R }`.
pub fn compose_tb(t: &TernaryRelation, r: &BinaryRelation) -> Result<TernaryRelation, RelationError> {
    same_universe(t.n, r.n)?;
    let n = t.n;
    Ok(TernaryRelation::from_fn(n, |x, y, z| (0..n).any(|m| t.contains(x, y, m) && r.contains(m, z))))
}

/// `R ⋊ T = { (x, y, z) | ∃t, (x, t) ∈ R ∧ (t, y, z) ∈ T }`.
pub fn compose_bt(r: &BinaryRelation, t: &TernaryRelation) -> Result<TernaryRelation, RelationError> {
    same_universe(r.n, t.n)?;
    let n = t.n;
    Ok(TernaryRelation::from_fn(n, |x, y, z| (0..n).any(|m| r.contains(x, m) && t.contains(m, y, z))))
}

/// The six compositions `T ∘_i S` through binary projections.
pub fn compose_i(t: &TernaryRelation, s: &TernaryRelation, i: usize) -> Result<TernaryRelation, RelationError> {
    same_universe(t.n, s.n)?;
    match i {
        1..=3 => {
            let (l, m, r) = projections(s);
            compose_tb(t, [&l, &m, &r][i - 1])
        }
        4..=6 => {
            let (l, m, r) = projections(t);
            compose_bt([&l, &m, &r][i - 4], s)
        }
        _ => Err(RelationError::CompositionIndex(i)),
    }
}

/// A transitivity scheme: two hypotheses imply a disjunction of
/// conclusions. Triples are written as indices into the variable tuple.
#[derive(Debug, Clone, Copy)]
pub struct Scheme {
    pub name: &'static str,
    /// Comma-separated variable names in witness order.
    pub vars: &'static str,
    pub hyps: [[usize; 3]; 2],
    pub concl: &'static [[usize; 3]],
}

impl Scheme {
    pub fn arity(&self) -> usize {
        self.vars.split(',').count()
    }
}

// Four-point variables (x, y, s, t) = (0, 1, 2, 3).
const X: usize = 0;
const Y: usize = 1;
const S: usize = 2;
const T: usize = 3;

pub const FOUR_POINT: [Scheme; 8] = [
    Scheme { name: "P1", vars: "x,y,s,t", hyps: [[X, S, T], [S, T, Y]], concl: &[[X, S, Y]] },
    Scheme { name: "P2", vars: "x,y,s,t", hyps: [[X, S, T], [S, Y, T]], concl: &[[X, S, Y]] },
    Scheme { name: "P3", vars: "x,y,s,t", hyps: [[X, S, T], [S, Y, T]], concl: &[[X, Y, T]] },
    Scheme { name: "P4", vars: "x,y,s,t", hyps: [[S, X, T], [S, Y, T]], concl: &[[S, X, Y], [S, Y, X]] },
    Scheme { name: "P5", vars: "x,y,s,t", hyps: [[S, X, T], [S, Y, T]], concl: &[[S, X, Y], [Y, X, T]] },
    Scheme { name: "P6", vars: "x,y,s,t", hyps: [[X, S, T], [Y, S, T]], concl: &[[X, Y, T], [Y, X, T]] },
    Scheme { name: "P7", vars: "x,y,s,t", hyps: [[X, S, T], [Y, S, T]], concl: &[[X, Y, S], [Y, X, S]] },
    Scheme { name: "P8", vars: "x,y,s,t", hyps: [[X, S, T], [Y, S, T]], concl: &[[X, Y, S], [Y, X, T]] },
];

// Five-point variables (x, y, z, s, t) = (0, 1, 2, 3, 4).
const Z5: usize = 2;
const S5: usize = 3;
const T5: usize = 4;

pub const FIVE_POINT: [Scheme; 6] = [
    Scheme { name: "T1", vars: "x,y,z,s,t", hyps: [[X, Y, T5], [S5, T5, Z5]], concl: &[[X, Y, Z5]] },
    Scheme { name: "T2", vars: "x,y,z,s,t", hyps: [[X, Y, T5], [T5, S5, Z5]], concl: &[[X, Y, Z5]] },
    Scheme { name: "T3", vars: "x,y,z,s,t", hyps: [[X, Y, T5], [T5, Z5, S5]], concl: &[[X, Y, Z5]] },
    Scheme { name: "T4", vars: "x,y,z,s,t", hyps: [[S5, X, T5], [T5, Y, Z5]], concl: &[[X, Y, Z5]] },
    Scheme { name: "T5", vars: "x,y,z,s,t", hyps: [[X, S5, T5], [T5, Y, Z5]], concl: &[[X, Y, Z5]] },
    Scheme { name: "T6", vars: "x,y,z,s,t", hyps: [[X, S5, T5], [S5, Y, Z5]], concl: &[[X, Y, Z5]] },
];

pub fn scheme(name: &str) -> Option<&'static Scheme> {
    FOUR_POINT.iter().chain(FIVE_POINT.iter()).find(|s| s.name.eq_ignore_ascii_case(name))
}

/// Visits every assignment of `arity` variables over `0..n` in lexicographic
/// order and returns the first one for which `bad` holds.
pub(crate) fn first_assignment(n: usize, arity: usize, mut bad: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    if n == 0 {
        return None;
    }
    let mut v = vec![0usize; arity];
    loop {
        if bad(&v) {
            return Some(v);
        }
        let mut k = arity;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            v[k] += 1;
            if v[k] < n {
                break;
            }
            v[k] = 0;
        }
    }
}

/// Exhaustive check of a scheme; the witness lists the variables in the
/// scheme's `vars` order.
pub fn check_scheme(t: &TernaryRelation, scheme: &Scheme) -> Option<Vec<usize>> {
    let has = |v: &[usize], tr: &[usize; 3]| t.contains(v[tr[0]], v[tr[1]], v[tr[2]]);
    first_assignment(t.n, scheme.arity(), |v| {
        has(v, &scheme.hyps[0]) && has(v, &scheme.hyps[1]) && !scheme.concl.iter().any(|c| has(v, c))
    })
}

/// Four-point property `P{k}` for `k` in `1..=8`; witness `(x, y, s, t)`.
pub fn check_fourpoint(t: &TernaryRelation, k: usize) -> Option<Vec<usize>> {
    check_scheme(t, &FOUR_POINT[k - 1])
}

/// Five-point property `T{i}` for `i` in `1..=6`; witness `(x, y, z, s, t)`.
///
/// Runs both the direct implication and the subset test
/// `T ∘_i T ⊆ T`; the two must agree.
pub fn check_fivepoint(t: &TernaryRelation, i: usize) -> Option<Vec<usize>> {
    let direct = check_scheme(t, &FIVE_POINT[i - 1]);
    let composed = compose_i(t, t, i).expect("same universe");
    assert_eq!(direct.is_none(), composed.is_subset(t), "direct and composition forms of T{i} disagree");
    direct
}

/// B1–B5 and the equivalence of B2 with B4 ∧ B5 on this instance.
pub fn check_betweenness(b: &TernaryRelation) -> ValidationReport {
    let n = b.n;
    let mut report = ValidationReport::new(format!("betweenness axioms on {n} points"));
    let fmt3 = |w: Option<(usize, usize, usize)>, vars: &str| w.map(|(a, c, d)| describe_witness(vars, &[a, c, d]));

    let b1 = triples_iter(n).find(|&(x, y, z)| b.contains(x, y, z) != b.contains(z, y, x));
    report.push(CheckResult::from_witness("B1", fmt3(b1, "x,y,z")));

    let b2 = triples_iter(n).find(|&(x, y, z)| (b.contains(x, y, z) && b.contains(x, z, y)) != (y == z));
    let b2_holds = b2.is_none();
    report.push(CheckResult::from_witness("B2", fmt3(b2, "x,y,z")));

    let b3 = first_assignment(n, 4, |v| {
        let (o, x, y, z) = (v[0], v[1], v[2], v[3]);
        b.contains(o, x, y) && b.contains(o, y, z) && !b.contains(o, x, z)
    });
    report.push(CheckResult::from_witness("B3", b3.map(|w| describe_witness("o,x,y,z", &w))));

    let b4 = check_basic(b, Basic::Reflexive);
    let b5 = check_basic(b, Basic::Antisymmetric);
    let b45 = b4.is_none() && b5.is_none();
    report.push(CheckResult::from_witness("B4", b4.map(|w| describe_witness("x,y", &w))));
    report.push(CheckResult::from_witness("B5", b5.map(|w| describe_witness("x,y,z", &w))));

    report.push(CheckResult::from_witness(
        "B2<=>B4&B5",
        (b2_holds != b45).then(|| format!("B2 is {b2_holds} but B4 and B5 together are {b45}")),
    ));
    report
}

/// Runs one named crisp property (`B1`–`B5`, `P1`–`P8`, `T1`–`T6`, or a
/// basic property name).
pub fn check_named(t: &TernaryRelation, name: &str) -> Option<CheckResult> {
    let upper = name.to_ascii_uppercase();
    if let Some(s) = scheme(&upper) {
        let w = if s.arity() == 4 { check_scheme(t, s) } else { check_fivepoint(t, s.name[1..].parse().unwrap()) };
        return Some(CheckResult::from_witness(s.name, w.map(|w| describe_witness(s.vars, &w))));
    }
    if upper.starts_with('B') {
        return check_betweenness(t).checks.into_iter().find(|c| c.name == upper);
    }
    let basic = Basic::ALL.into_iter().find(|b| b.name() == name.to_ascii_lowercase())?;
    let vars = if basic == Basic::Reflexive { "x,y" } else { "x,y,z" };
    Some(CheckResult::from_witness(basic.name(), check_basic(t, basic).map(|w| describe_witness(vars, &w))))
}

/// A partial order on `{0, …, n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetTable {
    order: BinaryRelation,
}

impl PosetTable {
    pub fn new(order: BinaryRelation) -> Result<Self, RelationError> {
        let n = order.n;
        if (0..n).any(|x| !order.contains(x, x)) {
            return Err(RelationError::NotPartialOrder("reflexive"));
        }
        if pairs_iter(n).any(|(x, y)| x != y && order.contains(x, y) && order.contains(y, x)) {
            return Err(RelationError::NotPartialOrder("antisymmetric"));
        }
        if triples_iter(n).any(|(x, y, z)| order.contains(x, y) && order.contains(y, z) && !order.contains(x, z)) {
            return Err(RelationError::NotPartialOrder("transitive"));
        }
        Ok(PosetTable { order })
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let mut order = BinaryRelation::empty(n);
        for (x, y) in pairs_iter(n) {
            if x <= y {
                order.insert(x, y);
            }
        }
        PosetTable { order }
    }

    pub fn n(&self) -> usize {
        self.order.n
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.order.contains(x, y)
    }
}

/// A lattice given by its join and meet tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeTable {
    n: usize,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
}

impl LatticeTable {
    pub fn new(join: Vec<Vec<usize>>, meet: Vec<Vec<usize>>) -> Result<Self, RelationError> {
        let n = join.len();
        for table in [&join, &meet] {
            if table.len() != n || table.iter().any(|r| r.len() != n) {
                return Err(RelationError::TensorShape { got: table.iter().map(Vec::len).sum(), expected: n * n });
            }
            if let Some(&bad) = table.iter().flatten().find(|&&v| v >= n) {
                return Err(RelationError::OutOfRange { index: bad, n });
            }
        }
        let (j, m) = (&join, &meet);
        if pairs_iter(n).any(|(a, b)| j[a][b] != j[b][a] || m[a][b] != m[b][a]) {
            return Err(RelationError::NotLattice("commutative"));
        }
        if triples_iter(n).any(|(a, b, c)| j[j[a][b]][c] != j[a][j[b][c]] || m[m[a][b]][c] != m[a][m[b][c]]) {
            return Err(RelationError::NotLattice("associative"));
        }
        if pairs_iter(n).any(|(a, b)| j[a][m[a][b]] != a || m[a][j[a][b]] != a) {
            return Err(RelationError::NotLattice("absorptive"));
        }
        Ok(LatticeTable { n, join, meet })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }
}

/// `(x = y) ∨ (y = z) ∨ (x <= y <= z) ∨ (z <= y <= x)`.
pub fn order_betweenness(p: &PosetTable) -> TernaryRelation {
    TernaryRelation::from_fn(p.n(), |x, y, z| {
        x == y || y == z || (p.le(x, y) && p.le(y, z)) || (p.le(z, y) && p.le(y, x))
    })
}

/// `(x ∧ y) ∨ (y ∧ z) = y = (x ∨ y) ∧ (y ∨ z)`.
pub fn lattice_betweenness(l: &LatticeTable) -> TernaryRelation {
    TernaryRelation::from_fn(l.n, |x, y, z| {
        l.join(l.meet(x, y), l.meet(y, z)) == y && l.meet(l.join(x, y), l.join(y, z)) == y
    })
}

/// `d(x, z) = d(x, y) + d(y, z)` on a distance matrix.
pub fn betweenness_of_matrix(dist: &[Vec<Rational>]) -> TernaryRelation {
    TernaryRelation::from_fn(dist.len(), |x, y, z| dist[x][z] == &dist[x][y] + &dist[y][z])
}

pub fn metric_betweenness(d: &FiniteMetric) -> TernaryRelation {
    betweenness_of_matrix(d.matrix())
}

/// `d(x, z) >= d(x, y) + d(y, z)`; equal to [`metric_betweenness`] for a metric.
pub fn metric_betweenness_ge(d: &FiniteMetric) -> TernaryRelation {
    let m = d.matrix();
    TernaryRelation::from_fn(d.len(), |x, y, z| m[x][z] >= &m[x][y] + &m[y][z])
}

/// `B_{d_a}` for the slice of a nest at level `a`.
pub fn betweenness_at_level(nest: &MetricNest, a: &Grade) -> TernaryRelation {
    betweenness_of_matrix(&nest.slice(a))
}

/// `B_{d_a}` computed from level distances of a space; exact for every
/// family because same-family level sums share the factor in `a`.
pub fn space_betweenness_at_level(space: &FuzzyMetricSpace, a: &Grade) -> TernaryRelation {
    let n = space.len();
    let levels: Vec<Vec<Level>> =
        (0..n).map(|i| (0..n).map(|j| space.entry(i, j).level_unchecked(a)).collect()).collect();
    TernaryRelation::from_fn(n, |x, y, z| levels[x][y].checked_add(&levels[y][z]).as_ref() == Some(&levels[x][z]))
}

/// Antitone inclusion and the union identity over the nest's probe levels.
pub fn check_betweenness_nest(nest: &MetricNest) -> ValidationReport {
    let mut report = ValidationReport::new(format!("nest of betweenness relations on {} points", nest.len()));
    let probes = nest.probe_levels();
    let rels: Vec<TernaryRelation> = probes.iter().map(|a| betweenness_at_level(nest, a)).collect();

    let mut antitone = None;
    'outer: for (i, lo) in rels.iter().enumerate() {
        for (j, hi) in rels.iter().enumerate().skip(i + 1) {
            if let Some((x, y, z)) = hi.first_not_in(lo) {
                antitone =
                    Some(format!("({x}, {y}, {z}) is between at a = {} but not at a = {}", probes[j], probes[i]));
                break 'outer;
            }
        }
    }
    report.push(CheckResult::from_witness("antitone", antitone));

    let mut union = None;
    for (i, own) in rels.iter().enumerate() {
        let joined = rels[i..].iter().fold(TernaryRelation::empty(nest.len()), |acc, r| acc.union(r));
        if &joined != own {
            let (x, y, z) = joined.first_not_in(own).expect("own relation is part of the union");
            union =
                Some(format!("at a = {}: ({x}, {y}, {z}) lies in the union over b >= a but not in B at a", probes[i]));
            break;
        }
    }
    report.push(CheckResult::from_witness("union", union));
    report
}

#[derive(Serialize, Deserialize)]
struct RelationFile {
    n: usize,
    triples: Vec<[usize; 3]>,
}

impl Serialize for TernaryRelation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RelationFile { n: self.n, triples: self.triples().map(|(x, y, z)| [x, y, z]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TernaryRelation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = RelationFile::deserialize(d)?;
        let triples: Vec<(usize, usize, usize)> = file.triples.iter().map(|t| (t[0], t[1], t[2])).collect();
        TernaryRelation::from_triples(file.n, &triples).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PosetFile {
    n: usize,
    pairs: Vec<[usize; 2]>,
}

impl Serialize for PosetTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PosetFile { n: self.n(), pairs: self.order.pairs().map(|(x, y)| [x, y]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PosetTable {
    /// Reflexive pairs may be omitted from the file.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = PosetFile::deserialize(d)?;
        let pairs: Vec<(usize, usize)> =
            file.pairs.iter().map(|p| (p[0], p[1])).chain((0..file.n).map(|i| (i, i))).collect();
        let order = BinaryRelation::from_pairs(file.n, &pairs).map_err(serde::de::Error::custom)?;
        PosetTable::new(order).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeFile {
    n: usize,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
}

impl Serialize for LatticeTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LatticeFile { n: self.n, join: self.join.clone(), meet: self.meet.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = LatticeFile::deserialize(d)?;
        if file.join.len() != file.n {
            return Err(serde::de::Error::custom(RelationError::TensorShape {
                got: file.join.len(),
                expected: file.n,
            }));
        }
        LatticeTable::new(file.join, file.meet).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn rel(n: usize, triples: &[(usize, usize, usize)]) -> TernaryRelation {
        TernaryRelation::from_triples(n, triples).unwrap()
    }

    /// Direct reading of the six composition definitions.
    fn compose_direct(t: &TernaryRelation, s: &TernaryRelation, i: usize) -> TernaryRelation {
        let n = t.n();
        TernaryRelation::from_fn(n, |x, y, z| {
            pairs_iter(n).any(|(m, k)| match i {
                1 => t.contains(x, y, m) && s.contains(k, m, z),
                2 => t.contains(x, y, m) && s.contains(m, k, z),
                3 => t.contains(x, y, m) && s.contains(m, z, k),
                4 => t.contains(k, x, m) && s.contains(m, y, z),
                5 => t.contains(x, k, m) && s.contains(m, y, z),
                6 => t.contains(x, k, m) && s.contains(k, y, z),
                _ => unreachable!(),
            })
        })
    }

    fn line_metric(n: usize) -> FiniteMetric {
        let dist = (0..n).map(|i| (0..n).map(|j| int((i as i64 - j as i64).abs())).collect()).collect();
        FiniteMetric::new((0..n).map(|i| format!("p{i}")).collect(), dist).unwrap()
    }

    #[test]
    fn basic_properties() {
        let full = TernaryRelation::full(3);
        assert_eq!(check_basic(&full, Basic::Reflexive), None);
        assert_eq!(check_basic(&full, Basic::Symmetric), None);
        assert_eq!(check_basic(&full, Basic::Complete), None);
        // (0, 0, 1) and (0, 1, 0) are both present.
        assert_eq!(check_basic(&full, Basic::Antisymmetric), Some(vec![0, 0, 1]));
        let t = rel(3, &[(0, 1, 2)]);
        assert_eq!(check_basic(&t, Basic::Symmetric), Some(vec![0, 1, 2]));
        let bd = metric_betweenness(&line_metric(3));
        assert_eq!(check_basic(&bd, Basic::Reflexive), None);
        assert_eq!(check_basic(&bd, Basic::Symmetric), None);
    }

    #[test]
    fn projections_by_definition() {
        let (l, m, r) = projections(&rel(3, &[(0, 1, 2)]));
        assert_eq!(l.pairs().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(m.pairs().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(0, 1)]);
        let (l, m, r) = projections(&TernaryRelation::empty(3));
        assert!(l.is_empty() && m.is_empty() && r.is_empty());
        let (l, _, _) = projections(&TernaryRelation::full(3));
        assert_eq!(l, BinaryRelation::full(3));
    }

    #[test]
    fn binary_compositions() {
        let t = rel(3, &[(0, 1, 2)]);
        let r = BinaryRelation::from_pairs(3, &[(2, 0)]).unwrap();
        assert_eq!(compose_tb(&t, &r).unwrap(), rel(3, &[(0, 1, 0)]));
        let id = BinaryRelation::identity(3);
        assert_eq!(compose_tb(&t, &id).unwrap(), t);
        assert_eq!(compose_bt(&id, &t).unwrap(), t);
        assert!(compose_tb(&t, &BinaryRelation::empty(3)).unwrap().is_empty());
        assert!(compose_bt(&BinaryRelation::empty(3), &t).unwrap().is_empty());
        assert!(matches!(compose_tb(&t, &BinaryRelation::empty(4)), Err(RelationError::UniverseMismatch(3, 4))));
    }

    #[test]
    fn six_compositions() {
        let t = rel(5, &[(0, 1, 2)]);
        let s = rel(5, &[(3, 2, 4)]);
        assert_eq!(compose_i(&t, &s, 1).unwrap(), rel(5, &[(0, 1, 4)]));
        for i in 1..=6 {
            assert!(compose_i(&t, &TernaryRelation::empty(5), i).unwrap().is_empty());
            assert_eq!(compose_i(&t, &s, i).unwrap(), compose_direct(&t, &s, i), "i = {i}");
        }
        assert!(matches!(compose_i(&t, &s, 7), Err(RelationError::CompositionIndex(7))));
    }

    #[test]
    fn four_point_examples() {
        let t = rel(4, &[(0, 1, 2), (1, 2, 3)]);
        assert_eq!(check_fourpoint(&t, 1), Some(vec![0, 3, 1, 2]));
        let full = TernaryRelation::full(4);
        for k in 1..=8 {
            assert_eq!(check_fourpoint(&full, k), None);
        }
    }

    #[test]
    fn five_point_examples() {
        for i in 1..=6 {
            assert_eq!(check_fivepoint(&TernaryRelation::empty(4), i), None);
        }
        let t = rel(5, &[(0, 1, 2), (3, 2, 4)]);
        assert_eq!(check_fivepoint(&t, 1), Some(vec![0, 1, 4, 3, 2]));
        let mut closed = t.clone();
        closed.insert(0, 1, 4);
        assert_eq!(check_fivepoint(&closed, 1), None);
    }

    #[test]
    fn betweenness_examples() {
        assert!(check_betweenness(&order_betweenness(&PosetTable::chain(4))).all_pass());
        assert!(check_betweenness(&metric_betweenness(&line_metric(4))).all_pass());
        let full = check_betweenness(&TernaryRelation::full(3));
        assert!(!full.get("B2").unwrap().passed());
        assert!(!full.get("B5").unwrap().passed());
        assert!(full.get("B2<=>B4&B5").unwrap().passed());
    }

    #[test]
    fn constructors() {
        assert!(order_betweenness(&PosetTable::chain(3)).contains(0, 1, 2));
        let d = line_metric(3);
        let bd = metric_betweenness(&d);
        assert!(bd.contains(0, 1, 2) && !bd.contains(0, 2, 1));
        assert_eq!(bd, metric_betweenness_ge(&d));
        // Boolean lattice {⊥, p, q, ⊤} = {0, 1, 2, 3}.
        let join = vec![vec![0, 1, 2, 3], vec![1, 1, 3, 3], vec![2, 3, 2, 3], vec![3, 3, 3, 3]];
        let meet = vec![vec![0, 0, 0, 0], vec![0, 1, 0, 1], vec![0, 0, 2, 2], vec![0, 1, 2, 3]];
        let l = LatticeTable::new(join, meet).unwrap();
        let lb = lattice_betweenness(&l);
        assert!(lb.contains(1, 0, 2));
        assert!(check_betweenness(&lb).all_pass());
    }

    #[test]
    fn table_validation() {
        let bad = BinaryRelation::from_pairs(2, &[(0, 0), (1, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(PosetTable::new(bad), Err(RelationError::NotPartialOrder("antisymmetric")));
        let join = vec![vec![0, 1], vec![0, 1]];
        let meet = vec![vec![0, 0], vec![0, 1]];
        assert_eq!(LatticeTable::new(join, meet), Err(RelationError::NotLattice("commutative")));
    }

    #[test]
    fn json_shapes() {
        let t = rel(4, &[(0, 1, 2)]);
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(text, r#"{"n":4,"triples":[[0,1,2]]}"#);
        assert_eq!(serde_json::from_str::<TernaryRelation>(&text).unwrap(), t);
        assert!(serde_json::from_str::<TernaryRelation>(r#"{"n":2,"triples":[[0,1,2]]}"#).is_err());
        let p: PosetTable = serde_json::from_str(r#"{"n":3,"pairs":[[0,1],[1,2],[0,2]]}"#).unwrap();
        assert_eq!(p, PosetTable::chain(3));
    }

    #[test]
    fn named_checks() {
        let t = rel(4, &[(0, 1, 2), (1, 2, 3)]);
        let p1 = check_named(&t, "p1").unwrap();
        assert!(!p1.passed());
        assert_eq!(p1.detail.as_deref(), Some("(x, y, s, t) = (0, 3, 1, 2)"));
        assert!(check_named(&t, "B1").is_some());
        assert!(check_named(&t, "reflexive").is_some());
        assert!(check_named(&t, "Q9").is_none());
    }
}
