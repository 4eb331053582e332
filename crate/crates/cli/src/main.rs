use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use kmfuzzy::fuzzy_relation::{bd_from_space, bm_from_fuzzy_metric, check_fuzzy_named, FuzzyTernaryRelation};
use kmfuzzy::io::{read_document, Document};
use kmfuzzy::nest::{fuzzy_metric_from_nest, nest_from_fuzzy_metric, roundtrip_nest, roundtrip_space, validate_nest};
use kmfuzzy::oracle::harness;
use kmfuzzy::rational::format_rational;
use kmfuzzy::relation::{
    betweenness_at_level, check_betweenness, check_named, lattice_betweenness, metric_betweenness, order_betweenness,
    space_betweenness_at_level, TernaryRelation,
};
use kmfuzzy::{
    fuzzy_relation::{check_fuzzy_axioms, AxiomSystem},
    CheckResult, FuzzyMetricSpace, Grade, TNormKind, ValidationReport,
};

#[derive(Parser)]
#[command(name = "kmfuzzy", version, about = "Exact KM-fuzzy metrics, metric nests and betweenness relations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Implication,
    Nest,
}

#[derive(Subcommand)]
enum Command {
    /// Check a space, nest, metric, relation, fuzzy relation, poset or lattice file.
    Validate {
        #[arg(long)]
        input: PathBuf,
        /// Overrides the t-norm stored in a space file.
        #[arg(long)]
        tnorm: Option<TNormKind>,
    },
    /// Convert a step space to its nest of metrics, or a nest to its space.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also convert back and require exact equality.
        #[arg(long)]
        roundtrip: bool,
    },
    /// Crisp betweenness at a level, or fuzzy betweenness by a chosen method.
    Betweenness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_level)]
        level: Option<Grade>,
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Run both methods and report their largest difference.
        #[arg(long)]
        compare: bool,
    },
    /// Check named properties of a relation, or of the relation built from a space or nest.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// Comma separated, e.g. `B1,P3,T6` or `FBR,FP1,FT2`.
        #[arg(long, value_delimiter = ',')]
        properties: Vec<String>,
        #[arg(long)]
        tnorm: Option<TNormKind>,
        #[arg(long, value_enum, default_value_t = Method::Implication)]
        method: Method,
    },
    /// Generate seeded random instances and run the structural checks on each.
    Harness {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Number of points.
        #[arg(long, default_value_t = 5)]
        size: usize,
        /// Maximum breakpoints per entry.
        #[arg(long, default_value_t = 4)]
        breakpoints: usize,
    },
}

fn parse_level(text: &str) -> Result<Grade, String> {
    let a: Grade = text.parse().map_err(|e| format!("{e}"))?;
    if a.is_zero() || a.is_one() {
        return Err("the level must lie strictly between 0 and 1".into());
    }
    Ok(a)
}

/// Exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Output(cli.format);
    let result = match cli.command {
        Command::Validate { input, tnorm } => validate(&out, &input, tnorm),
        Command::Convert { input, output, roundtrip } => convert(&input, output.as_deref(), roundtrip),
        Command::Betweenness { input, level, method, compare } => betweenness(&out, &input, level, method, compare),
        Command::Check { input, properties, tnorm, method } => check(&out, &input, &properties, tnorm, method),
        Command::Harness { seed, count, size, breakpoints } => {
            if size < 2 || breakpoints < 1 {
                Err(InputError("harness needs --size >= 2 and --breakpoints >= 1".into()))
            } else {
                let report = harness(seed, count, size, breakpoints);
                out.report(&report);
                Ok(report.all_pass())
            }
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

struct Output(Format);

impl Output {
    fn report(&self, r: &ValidationReport) {
        match self.0 {
            Format::Text => print!("{r}"),
            Format::Json => println!("{}", serde_json::to_string_pretty(r).unwrap()),
        }
    }

    fn value(&self, text: String, value: serde_json::Value) {
        match self.0 {
            Format::Text => print!("{text}"),
            Format::Json => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
        }
    }
}

fn validate(out: &Output, input: &Path, tnorm: Option<TNormKind>) -> Outcome {
    let report = match read_document(input)? {
        Document::Space(mut raw) => {
            if let Some(t) = tnorm {
                raw.tnorm = t;
            }
            raw.validate()
        }
        Document::Nest(nest) => validate_nest(&nest),
        Document::Metric(raw) => raw.validate(),
        Document::Relation(t) => check_betweenness(&t),
        Document::FuzzyRelation(b) => check_fuzzy_axioms(&b, AxiomSystem::Fbr, tnorm.unwrap_or_default()),
        Document::Poset(p) => check_betweenness(&order_betweenness(&p)),
        Document::Lattice(l) => check_betweenness(&lattice_betweenness(&l)),
    };
    out.report(&report);
    Ok(report.all_pass())
}

fn write_json(path: Option<&Path>, value: serde_json::Value) -> Result<(), InputError> {
    let text = serde_json::to_string_pretty(&value)? + "\n";
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| InputError(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_space(doc: Document) -> Result<FuzzyMetricSpace, InputError> {
    match doc {
        Document::Space(raw) => Ok(raw.into_space()?),
        Document::Nest(nest) => Ok(fuzzy_metric_from_nest(&nest)?),
        other => Err(InputError(format!("expected a space or nest file, found a {}", other.kind()))),
    }
}

fn convert(input: &Path, output: Option<&Path>, roundtrip: bool) -> Outcome {
    let diff = match read_document(input)? {
        Document::Space(raw) => {
            let space = raw.into_space()?;
            let nest = nest_from_fuzzy_metric(&space)?;
            write_json(output, serde_json::to_value(&nest)?)?;
            if roundtrip {
                roundtrip_space(&space)?
            } else {
                None
            }
        }
        Document::Nest(nest) => {
            let space = fuzzy_metric_from_nest(&nest)?;
            write_json(output, serde_json::to_value(&space)?)?;
            if roundtrip {
                roundtrip_nest(&nest)?
            } else {
                None
            }
        }
        other => return Err(InputError(format!("convert expects a space or nest file, found a {}", other.kind()))),
    };
    if roundtrip {
        let mut report = ValidationReport::new("round trip");
        report.push(CheckResult::from_witness("roundtrip", diff));
        eprint!("{report}");
        return Ok(report.all_pass());
    }
    Ok(true)
}

fn label(points: &[String], (x, y, z): (usize, usize, usize)) -> String {
    format!("({}, {}, {})", points[x], points[y], points[z])
}

fn print_fuzzy(out: &Output, points: &[String], b: &FuzzyTernaryRelation, title: &str) {
    let mut text = format!("{title}\n");
    for (t, g) in b.support() {
        text.push_str(&format!("  B{} = {g}\n", label(points, t)));
    }
    out.value(text, json!({ "points": points, "n": b.n(), "grades": b }));
}

fn fuzzy_by(space: &FuzzyMetricSpace, method: Method) -> Result<FuzzyTernaryRelation, InputError> {
    match method {
        Method::Implication => Ok(bm_from_fuzzy_metric(space)?),
        Method::Nest => Ok(bd_from_space(space)?),
    }
}

fn betweenness(out: &Output, input: &Path, level: Option<Grade>, method: Option<Method>, compare: bool) -> Outcome {
    let doc = read_document(input)?;
    if let Some(a) = level {
        let (points, rel): (Vec<String>, TernaryRelation) = match doc {
            Document::Space(raw) => {
                let space = raw.into_space()?;
                (space.points().to_vec(), space_betweenness_at_level(&space, &a))
            }
            Document::Nest(nest) => (nest.points().to_vec(), betweenness_at_level(&nest, &a)),
            other => return Err(InputError(format!("expected a space or nest file, found a {}", other.kind()))),
        };
        let triples: Vec<String> = rel.triples().map(|t| label(&points, t)).collect();
        let text = format!(
            "betweenness at level {a}: {} triples\n{}",
            triples.len(),
            triples.iter().map(|t| format!("  {t}\n")).collect::<String>()
        );
        let listed: Vec<[usize; 3]> = rel.triples().map(|(x, y, z)| [x, y, z]).collect();
        out.value(text, json!({ "level": a, "points": points, "n": rel.n(), "triples": listed }));
        return Ok(true);
    }
    let space = load_space(doc)?;
    if compare {
        let bm = fuzzy_by(&space, Method::Implication)?;
        let bd = fuzzy_by(&space, Method::Nest)?;
        let (d, at) = bm.max_discrepancy(&bd);
        let place = at.map(|t| format!(" at {}", label(space.points(), t))).unwrap_or_default();
        let text = format!("max discrepancy: {}{place}\n", format_rational(&d));
        out.value(text, json!({ "discrepancy": format_rational(&d), "at": at }));
        return Ok(at.is_none());
    }
    let Some(method) = method else {
        return Err(InputError("betweenness needs --level, --method or --compare".into()));
    };
    let b = fuzzy_by(&space, method)?;
    let title = match method {
        Method::Implication => "fuzzy betweenness by the implication construction",
        Method::Nest => "fuzzy betweenness by the nest construction",
    };
    print_fuzzy(out, space.points(), &b, title);
    Ok(true)
}

const CRISP_DEFAULT: &str = "B1,B2,B3,B4,B5,P1,P2,P3,P4,P5,P6,P7,P8,T1,T2,T3,T4,T5,T6";
const FUZZY_DEFAULT: &str = "FBR,FP1,FP2,FP3,FP4,FP5,FP6,FP7,FP8,FT1,FT2,FT3,FT4,FT5,FT6";

fn is_fuzzy_name(name: &str) -> bool {
    let upper = name.to_ascii_uppercase();
    upper.starts_with('F') || upper.starts_with("SFB")
}

fn check(out: &Output, input: &Path, properties: &[String], tnorm: Option<TNormKind>, method: Method) -> Outcome {
    enum Subject {
        Crisp(TernaryRelation),
        Fuzzy(FuzzyTernaryRelation, TNormKind),
    }
    let subject = match read_document(input)? {
        Document::Relation(t) => Subject::Crisp(t),
        Document::FuzzyRelation(b) => Subject::Fuzzy(b, tnorm.unwrap_or_default()),
        Document::Metric(raw) => Subject::Crisp(metric_betweenness(&raw.into_metric()?)),
        Document::Poset(p) => Subject::Crisp(order_betweenness(&p)),
        Document::Lattice(l) => Subject::Crisp(lattice_betweenness(&l)),
        doc @ (Document::Space(_) | Document::Nest(_)) => {
            let space = load_space(doc)?;
            let kind = tnorm.unwrap_or(space.tnorm());
            Subject::Fuzzy(fuzzy_by(&space, method)?, kind)
        }
    };
    let names: Vec<String> = if properties.is_empty() {
        let default = if matches!(subject, Subject::Crisp(_)) { CRISP_DEFAULT } else { FUZZY_DEFAULT };
        default.split(',').map(String::from).collect()
    } else {
        properties.iter().map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
    };
    let mut report = ValidationReport::new(format!("properties of {}", input.display()));
    for name in &names {
        let rows = match (&subject, is_fuzzy_name(name)) {
            (Subject::Crisp(t), false) => check_named(t, name).map(|c| vec![c]),
            (Subject::Crisp(t), true) => {
                check_fuzzy_named(&FuzzyTernaryRelation::from_crisp(t), name, tnorm.unwrap_or_default())
            }
            (Subject::Fuzzy(b, kind), true) => check_fuzzy_named(b, name, *kind),
            (Subject::Fuzzy(..), false) => {
                return Err(InputError(format!(
                    "{name} is a crisp property; use its fuzzy counterpart on graded input"
                )))
            }
        };
        match rows {
            Some(rows) => rows.into_iter().for_each(|r| report.push(r)),
            None => return Err(InputError(format!("unknown property {name}"))),
        }
    }
    out.report(&report);
    Ok(report.all_pass())
}
