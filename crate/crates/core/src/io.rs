//! Loading JSON documents whose kind is recognised from their keys.

use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::error::LoadError;
use crate::fuzzy_metric::RawSpace;
use crate::fuzzy_relation::FuzzyTernaryRelation;
use crate::metric::{validate_matrix, FiniteMetric, MetricFile};
use crate::nest::MetricNest;
use crate::rational::Rational;
use crate::relation::{LatticeTable, PosetTable, TernaryRelation};
use crate::report::ValidationReport;

/// A metric matrix that has been parsed but not checked.
#[derive(Debug, Clone)]
pub struct RawMetric {
    pub points: Vec<String>,
    pub dist: Vec<Vec<Rational>>,
}

impl RawMetric {
    pub fn validate(&self) -> ValidationReport {
        validate_matrix(&self.points, &self.dist)
    }

    pub fn into_metric(self) -> Result<FiniteMetric, LoadError> {
        FiniteMetric::new(self.points, self.dist).map_err(|e| LoadError::Schema(e.to_string()))
    }
}

#[derive(Debug, Clone)]
pub enum Document {
    Space(RawSpace),
    Nest(MetricNest),
    Metric(RawMetric),
    Relation(TernaryRelation),
    FuzzyRelation(FuzzyTernaryRelation),
    Poset(PosetTable),
    Lattice(LatticeTable),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Space(_) => "space",
            Document::Nest(_) => "nest",
            Document::Metric(_) => "metric",
            Document::Relation(_) => "relation",
            Document::FuzzyRelation(_) => "fuzzy relation",
            Document::Poset(_) => "poset",
            Document::Lattice(_) => "lattice",
        }
    }
}

fn typed<T: DeserializeOwned>(value: Value) -> Result<T, LoadError> {
    serde_json::from_value(value).map_err(|e| LoadError::Parse(e.to_string()))
}

/// Recognises the document kind by its keys:
///
/// | keys | kind |
/// |---|---|
/// | `entries` | space |
/// | `points`, `pairs` | nest |
/// | `points`, `dist` | metric |
/// | `n`, `triples` | relation |
/// | `n`, `grades` | fuzzy relation |
/// | `n`, `pairs` | poset |
/// | `n`, `join`, `meet` | lattice |
pub fn parse_document(text: &str) -> Result<Document, LoadError> {
    let value: Value = serde_json::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))?;
    let Some(obj) = value.as_object() else {
        return Err(LoadError::Schema("expected a JSON object".into()));
    };
    let has = |k: &str| obj.contains_key(k);
    if has("entries") {
        let raw = RawSpace::from_json(text).map_err(|e| LoadError::Parse(e.to_string()))?;
        Ok(Document::Space(raw))
    } else if has("points") && has("pairs") {
        typed(value).map(Document::Nest)
    } else if has("points") && has("dist") {
        let file: MetricFile = typed(value)?;
        Ok(Document::Metric(RawMetric {
            points: file.points,
            dist: file.dist.into_iter().map(|row| row.into_iter().map(|r| r.0).collect()).collect(),
        }))
    } else if has("triples") {
        typed(value).map(Document::Relation)
    } else if has("grades") {
        typed(value).map(Document::FuzzyRelation)
    } else if has("join") {
        typed(value).map(Document::Lattice)
    } else if has("pairs") {
        typed(value).map(Document::Poset)
    } else {
        let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        Err(LoadError::Schema(format!("unrecognised document with keys [{}]", keys.join(", "))))
    }
}

pub fn read_document(path: &std::path::Path) -> Result<Document, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Parse(format!("{}: {e}", path.display())))?;
    parse_document(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_each_kind() {
        let cases = [
            (
                r#"{"points":["x","y"],"entries":[[null,{"t":["1"],"v":["0","1"]}],[{"t":["1"],"v":["0","1"]},null]]}"#,
                "space",
            ),
            (r#"{"points":["x","y"],"pairs":{"x|y":{"a":[],"w":["1"]}}}"#, "nest"),
            (r#"{"points":["x","y"],"dist":[["0","1"],["1","0"]]}"#, "metric"),
            (r#"{"n":2,"triples":[[0,0,1]]}"#, "relation"),
            (r#"{"n":1,"grades":[[["1"]]]}"#, "fuzzy relation"),
            (r#"{"n":2,"pairs":[[0,1]]}"#, "poset"),
            (r#"{"n":1,"join":[[0]],"meet":[[0]]}"#, "lattice"),
        ];
        for (text, kind) in cases {
            assert_eq!(parse_document(text).unwrap().kind(), kind, "{text}");
        }
    }

    #[test]
    fn broken_metric_is_loaded_for_reporting() {
        let doc =
            parse_document(r#"{"points":["x","y","z"],"dist":[["0","1","5"],["1","0","1"],["5","1","0"]]}"#).unwrap();
        let Document::Metric(raw) = doc else { panic!() };
        let report = raw.validate();
        assert!(!report.get("triangle").unwrap().passed());
        assert_eq!(report.get("triangle").unwrap().detail.as_deref(), Some("d(x, z) = 5 > 1 + 1"));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_document("{"), Err(LoadError::Parse(_))));
        assert!(matches!(parse_document("[1]"), Err(LoadError::Schema(_))));
        assert!(matches!(parse_document(r#"{"foo":1}"#), Err(LoadError::Schema(_))));
        assert!(matches!(parse_document(r#"{"n":1,"triples":[[0,0,"a"]]}"#), Err(LoadError::Parse(_))));
    }
}
