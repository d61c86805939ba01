//! Batch CLI: JSON-driven invocation of the integrator and the
//! finite-field oracle over the bundled example corpus or user files.
//!
//! Exit codes: 0 on success or pass, 1 on verification failure, 2 on
//! input or validation errors (with a diagnostic naming the violated
//! invariant and JSON path).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use motivic::bundled::{self, ContactCase, Example, ExampleData, SchemeExample};
use motivic::counting::{
    count_contact_locus, count_jets, count_points, fibration_fiber_counts, jet_law_report,
    zeta_closed_form, ContactOrders, EnumerationBudget,
};
use motivic::geometry::KEquivalencePair;
use motivic::integrator::{integrate_snc, kequiv_check, transform_check, TransformCase};
use motivic::jets::{contact_measure, ContactDatum};
use motivic::jsonio;
use motivic::ring::CompletedClass;

#[derive(Parser)]
#[command(name = "motivic", version, about = "Motivic integration on jet spaces with a finite-field oracle")]
struct Cli {
    /// Thread count (overrides MOTIVIC_THREADS; default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Human)]
    output: OutputMode,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Human,
    Json,
}

#[derive(Args)]
struct SourceArgs {
    /// Bundled example id (see `motivic examples`)
    #[arg(long, conflicts_with = "input")]
    example: Option<String>,

    /// Path to a JSON input file
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Enumeration budget in states
    #[arg(long, default_value_t = 1_000_000_000)]
    max_states: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate L^{-ord_D} for an SNC model
    Integrate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 10)]
        precision: u32,
    },
    /// Verify the transformation rule on a blow-up transform
    TransformCheck {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 10)]
        precision: u32,
    },
    /// Verify equal integrals for a K-equivalence pair
    KequivCheck {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 10)]
        precision: u32,
    },
    /// Brute-force F_q point count of an affine scheme
    Count {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        prime: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Brute-force count of m-jets of an affine scheme
    CountJets {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        prime: u32,
        #[arg(long)]
        level: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Count a contact locus and compare with the contact measure
    ContactCount {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        prime: u32,
        #[arg(long)]
        level: u32,
        /// Comma-separated exact order per divisor component, e.g. 1,0
        #[arg(long, conflicts_with = "total_order")]
        orders: Option<String>,
        /// Total order of the weighted divisor
        #[arg(long)]
        total_order: Option<u32>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Audit the fibration structure of the blow-up of A^2 at the origin
    FibrationCheck {
        #[arg(long)]
        prime: u32,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Zeta function of a polynomial pure-L class in factored form
    Zeta {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        prime: u32,
    },
    /// List bundled examples, or dump one as canonical JSON
    Examples {
        #[arg(long)]
        id: Option<String>,
    },
}

struct Failure {
    message: String,
}

impl Failure {
    fn new(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
        }
    }
}

macro_rules! failure_from {
    ($($ty:ty),* $(,)?) => {
        $(impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Failure { message: e.to_string() }
            }
        })*
    };
}

failure_from!(
    motivic::ring::RingError,
    motivic::geometry::GeometryError,
    motivic::jets::JetsError,
    motivic::integrator::IntegratorError,
    motivic::counting::OracleError,
    motivic::jsonio::JsonError,
);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("MOTIVIC_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    motivic::counting::configure_thread_pool(threads);
    match run(cli.command, cli.output, threads) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(2)
        }
    }
}

fn emit(mode: OutputMode, report: Value, human: &[String]) {
    match mode {
        OutputMode::Json => println!("{}", jsonio::canonical_string(&report)),
        OutputMode::Human => {
            for line in human {
                println!("{line}");
            }
        }
    }
}

fn load_text(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(format!("cannot read {}: {e}", path.display())))
}

fn find_example(id: &str) -> Result<Example, Failure> {
    bundled::find_example(id)
        .ok_or_else(|| Failure::new(format!("unknown example `{id}` (see `motivic examples`)")))
}

enum Loaded<T> {
    FromExample(String, T),
    FromFile(T),
}

impl<T> Loaded<T> {
    fn value(&self) -> &T {
        match self {
            Loaded::FromExample(_, v) | Loaded::FromFile(v) => v,
        }
    }

    fn example_id(&self) -> Option<&str> {
        match self {
            Loaded::FromExample(id, _) => Some(id),
            Loaded::FromFile(_) => None,
        }
    }
}

fn load_contact_case(source: &SourceArgs) -> Result<Loaded<ContactCase>, Failure> {
    match (&source.example, &source.input) {
        (Some(id), _) => match find_example(id)?.data {
            ExampleData::Integrate(case) => Ok(Loaded::FromExample(id.clone(), case)),
            _ => Err(Failure::new(format!("example `{id}` is not an SNC model"))),
        },
        (None, Some(path)) => {
            let doc = jsonio::parse_document(&load_text(path)?)?;
            // Accept either a bare SNC model or a contact case with
            // divisor polynomials.
            let case = if doc.get("snc").is_some() {
                jsonio::contact_case_from_value(&doc, "$")?
            } else {
                ContactCase {
                    snc: jsonio::snc_from_value(&doc, "$")?,
                    divisor: Vec::new(),
                }
            };
            Ok(Loaded::FromFile(case))
        }
        (None, None) => Err(Failure::new("one of --example or --input is required")),
    }
}

fn load_transform(source: &SourceArgs) -> Result<Loaded<TransformCase>, Failure> {
    match (&source.example, &source.input) {
        (Some(id), _) => match find_example(id)?.data {
            ExampleData::Transform(case) => Ok(Loaded::FromExample(id.clone(), case)),
            _ => Err(Failure::new(format!("example `{id}` is not a transform case"))),
        },
        (None, Some(path)) => {
            let doc = jsonio::parse_document(&load_text(path)?)?;
            Ok(Loaded::FromFile(jsonio::transform_from_value(&doc, "$")?))
        }
        (None, None) => Err(Failure::new("one of --example or --input is required")),
    }
}

fn load_kequiv(source: &SourceArgs) -> Result<Loaded<KEquivalencePair>, Failure> {
    match (&source.example, &source.input) {
        (Some(id), _) => match find_example(id)?.data {
            ExampleData::KEquivalence(pair) => Ok(Loaded::FromExample(id.clone(), pair)),
            _ => Err(Failure::new(format!("example `{id}` is not a K-equivalence pair"))),
        },
        (None, Some(path)) => {
            let doc = jsonio::parse_document(&load_text(path)?)?;
            Ok(Loaded::FromFile(jsonio::kequiv_from_value(&doc, "$")?))
        }
        (None, None) => Err(Failure::new("one of --example or --input is required")),
    }
}

fn load_scheme(source: &SourceArgs) -> Result<Loaded<SchemeExample>, Failure> {
    match (&source.example, &source.input) {
        (Some(id), _) => match find_example(id)?.data {
            ExampleData::Scheme(s) => Ok(Loaded::FromExample(id.clone(), s)),
            _ => Err(Failure::new(format!("example `{id}` is not an affine scheme"))),
        },
        (None, Some(path)) => {
            let doc = jsonio::parse_document(&load_text(path)?)?;
            Ok(Loaded::FromFile(jsonio::scheme_from_value(&doc, "$")?))
        }
        (None, None) => Err(Failure::new("one of --example or --input is required")),
    }
}

fn with_example(mut report: Value, id: Option<&str>) -> Value {
    if let (Some(id), Some(obj)) = (id, report.as_object_mut()) {
        obj.insert("example".to_string(), json!(id));
    }
    report
}

fn run(command: Command, mode: OutputMode, threads: usize) -> Result<bool, Failure> {
    match command {
        Command::Integrate { source, precision } => {
            let loaded = load_contact_case(&source)?;
            let result = integrate_snc(&loaded.value().snc, precision)?;
            let mut report = json!({
                "command": "integrate",
                "passed": true,
                "schema": "1",
            });
            report
                .as_object_mut()
                .expect("object")
                .extend(match jsonio::integral_to_value(&result, precision) {
                    Value::Object(m) => m,
                    _ => Map::new(),
                });
            let human = vec![
                format!("closed form: {}", result.closed),
                format!("series:      {}", result.series),
                format!(
                    "levels:      {} measures computed up to order {}",
                    result.level_measures.len(),
                    result.level_measures.keys().max().copied().unwrap_or(0)
                ),
            ];
            emit(mode, with_example(report, loaded.example_id()), &human);
            Ok(true)
        }

        Command::TransformCheck { source, precision } => {
            let loaded = load_transform(&source)?;
            let report = transform_check(loaded.value(), precision)?;
            let doc = with_example(
                jsonio::verification_to_value(&report, precision, "transform-check"),
                loaded.example_id(),
            );
            let human = vec![
                format!("lhs integral: {}", report.lhs.closed),
                format!("rhs integral: {}", report.rhs.closed),
                format!("discrepancy:  {}", report.discrepancy),
                format!("result:       {}", if report.passed { "PASS" } else { "FAIL" }),
            ];
            emit(mode, doc, &human);
            Ok(report.passed)
        }

        Command::KequivCheck { source, precision } => {
            let loaded = load_kequiv(&source)?;
            let outcome = kequiv_check(loaded.value(), precision)?;
            let mut doc =
                jsonio::verification_to_value(&outcome.report, precision, "kequiv-check");
            if let Some(obj) = doc.as_object_mut() {
                obj.insert(
                    "k_equivalent_data".to_string(),
                    json!(outcome.k_equivalent_data),
                );
                if let Some(common) = &outcome.common_class {
                    obj.insert("common_class".to_string(), jsonio::class_to_value(common));
                    obj.insert("common_class_display".to_string(), json!(common.to_string()));
                }
            }
            let mut human = vec![
                format!("lhs integral: {}", outcome.report.lhs.closed),
                format!("rhs integral: {}", outcome.report.rhs.closed),
                format!(
                    "result:       {}",
                    if outcome.report.passed { "PASS" } else { "FAIL" }
                ),
            ];
            if let Some(common) = &outcome.common_class {
                human.insert(0, format!("common class: {common}"));
            }
            emit(mode, with_example(doc, loaded.example_id()), &human);
            Ok(outcome.report.passed)
        }

        Command::Count {
            source,
            prime,
            budget,
        } => {
            let loaded = load_scheme(&source)?;
            let scheme = loaded.value();
            let budget = EnumerationBudget {
                max_states: budget.max_states,
                threads,
            };
            let count = count_points(&scheme.spec, prime, &budget)?;
            let mut passed = true;
            let mut class_value = None;
            if let Some(class) = &scheme.class {
                let expected = class.realize_count(prime)?;
                class_value = Some(expected.to_string());
                passed = expected == BigRational::from(BigInt::from(count));
            }
            let mut report = json!({
                "command": "count",
                "count": count,
                "passed": passed,
                "prime": prime,
                "schema": "1",
            });
            if let (Some(v), Some(obj)) = (class_value.clone(), report.as_object_mut()) {
                obj.insert("class_value".to_string(), json!(v));
            }
            let mut human = vec![format!("points over F_{prime}: {count}")];
            if let Some(v) = class_value {
                human.push(format!(
                    "class evaluation:  {v} ({})",
                    if passed { "match" } else { "MISMATCH" }
                ));
            }
            emit(mode, with_example(report, loaded.example_id()), &human);
            Ok(passed)
        }

        Command::CountJets {
            source,
            prime,
            level,
            budget,
        } => {
            let loaded = load_scheme(&source)?;
            let scheme = loaded.value();
            let budget = EnumerationBudget {
                max_states: budget.max_states,
                threads,
            };
            let mut report = json!({
                "command": "count-jets",
                "level": level,
                "prime": prime,
                "schema": "1",
            });
            let mut human = Vec::new();
            match scheme.dim {
                Some(dim) => {
                    let law = jet_law_report(&scheme.spec, dim, prime, level, &budget)?;
                    if let Some(obj) = report.as_object_mut() {
                        obj.insert("jets".to_string(), json!(law.jet_count));
                        obj.insert(
                            "smooth_law".to_string(),
                            json!({
                                "matches": law.matches_smooth_law,
                                "points": law.point_count,
                                "prediction": law.smooth_prediction,
                            }),
                        );
                    }
                    human.push(format!(
                        "{level}-jets over F_{prime}: {}",
                        law.jet_count
                    ));
                    human.push(format!(
                        "smooth-space law q^(m*d) * points = {} ({})",
                        law.smooth_prediction,
                        if law.matches_smooth_law {
                            "matches"
                        } else {
                            "does not match; base may be singular"
                        }
                    ));
                }
                None => {
                    let jets = count_jets(&scheme.spec, prime, level, &budget)?;
                    if let Some(obj) = report.as_object_mut() {
                        obj.insert("jets".to_string(), json!(jets));
                    }
                    human.push(format!("{level}-jets over F_{prime}: {jets}"));
                }
            }
            emit(mode, with_example(report, loaded.example_id()), &human);
            Ok(true)
        }

        Command::ContactCount {
            source,
            prime,
            level,
            orders,
            total_order,
            budget,
        } => {
            let loaded = load_contact_case(&source)?;
            let case = loaded.value();
            if case.divisor.is_empty() {
                return Err(Failure::new(
                    "contact counting needs divisor polynomials (bundled examples carry them)",
                ));
            }
            let spec = match (&orders, total_order) {
                (Some(list), None) => {
                    let parsed: Result<Vec<u32>, _> =
                        list.split(',').map(|s| s.trim().parse()).collect();
                    ContactOrders::Exact(parsed.map_err(|_| {
                        Failure::new(format!("--orders `{list}` is not a comma-separated list"))
                    })?)
                }
                (None, Some(e)) => ContactOrders::Total(e),
                (None, None) => {
                    return Err(Failure::new("one of --orders or --total-order is required"))
                }
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            };
            let budget = EnumerationBudget {
                max_states: budget.max_states,
                threads,
            };
            if case.snc.ambient.dim < 1 {
                return Err(Failure::new(
                    "contact counting needs an affine ambient of dimension at least 1",
                ));
            }
            let n_vars = case.snc.ambient.dim as usize;
            let oracle =
                count_contact_locus(n_vars, &case.divisor, prime, level, &spec, &budget)?;

            // Compare with the class-level prediction when it applies.
            let d = case.snc.ambient.dim;
            let measure = match &spec {
                ContactOrders::Exact(prescribed) => {
                    let contact: Vec<(usize, u32)> = prescribed
                        .iter()
                        .enumerate()
                        .filter(|(_, &m)| m > 0)
                        .map(|(j, &m)| (j, m))
                        .collect();
                    Some(contact_measure(&ContactDatum::new(&case.snc, contact))?)
                }
                ContactOrders::Total(e) => {
                    Some(motivic::integrator::level_measure(&case.snc, *e)?)
                }
            };
            let mut passed = true;
            let mut predicted = None;
            if let Some(measure) = measure {
                let scale = BigRational::from(
                    BigInt::from(prime).pow((level as i64 + 1) as u32 * d as u32),
                );
                let value = measure.realize_count(prime)? * scale;
                passed = value == BigRational::from(BigInt::from(oracle.count));
                predicted = Some(value.to_string());
            }
            let mut report = json!({
                "command": "contact-count",
                "count": oracle.count,
                "level": level,
                "passed": passed,
                "prime": prime,
                "saturated": oracle.saturated,
                "schema": "1",
            });
            if let (Some(p), Some(obj)) = (predicted.clone(), report.as_object_mut()) {
                obj.insert("measure_prediction".to_string(), json!(p));
            }
            let mut human = vec![format!(
                "jets with prescribed contact over F_{prime} at level {level}: {}",
                oracle.count
            )];
            if let Some(p) = predicted {
                human.push(format!(
                    "measure prediction * q^((m+1)d) = {p} ({})",
                    if passed { "match" } else { "MISMATCH" }
                ));
            }
            emit(mode, with_example(report, loaded.example_id()), &human);
            Ok(passed)
        }

        Command::FibrationCheck {
            prime,
            level,
            order,
            budget,
        } => {
            let budget = EnumerationBudget {
                max_states: budget.max_states,
                threads,
            };
            let report = fibration_fiber_counts(prime, level, order, &budget)?;
            let doc = json!({
                "command": "fibration-check",
                "expected_fiber": report.expected_fiber,
                "fibers": report.fibers,
                "level": report.level,
                "max_fiber": report.max_fiber,
                "min_fiber": report.min_fiber,
                "order": report.order,
                "passed": report.passed,
                "prime": report.prime,
                "schema": "1",
                "source_jets": report.source_jets,
            });
            let human = vec![
                format!(
                    "{} fibers over F_{prime}, sizes in [{}, {}], expected {}",
                    report.fibers, report.min_fiber, report.max_fiber, report.expected_fiber
                ),
                format!("result: {}", if report.passed { "PASS" } else { "FAIL" }),
            ];
            emit(mode, doc, &human);
            Ok(report.passed)
        }

        Command::Zeta { source, prime } => match source
            .example
            .as_deref()
            .map(find_example)
            .transpose()?
        {
            Some(Example {
                id,
                data: ExampleData::KEquivalence(pair),
                ..
            }) => {
                let left = zeta_closed_form(&pair.left.total_class(), prime)?;
                let right = zeta_closed_form(&pair.right.total_class(), prime)?;
                let identical = left == right;
                let doc = json!({
                    "command": "zeta",
                    "example": id,
                    "identical": identical,
                    "left": left.to_string(),
                    "passed": identical,
                    "prime": prime,
                    "right": right.to_string(),
                    "schema": "1",
                });
                let human = vec![
                    format!("left:  {left}"),
                    format!("right: {right}"),
                    format!("identical: {identical}"),
                ];
                emit(mode, doc, &human);
                Ok(identical)
            }
            _ => {
                let class = load_class_for_zeta(&source)?;
                let zeta = zeta_closed_form(class.value(), prime)?;
                let doc = with_example(
                    json!({
                        "command": "zeta",
                        "factored": zeta.to_string(),
                        "passed": true,
                        "prime": prime,
                        "schema": "1",
                    }),
                    class.example_id(),
                );
                emit(mode, doc, &[format!("{zeta}")]);
                Ok(true)
            }
        },

        Command::Examples { id } => match id {
            Some(id) => {
                let example = find_example(&id)?;
                let payload = example_payload(&example);
                println!("{}", jsonio::canonical_string(&payload));
                Ok(true)
            }
            None => {
                let examples = bundled::all_examples();
                match mode {
                    OutputMode::Json => {
                        let list: Vec<Value> = examples
                            .iter()
                            .map(|e| {
                                json!({
                                    "id": e.id,
                                    "kind": example_kind(e),
                                    "summary": e.summary,
                                })
                            })
                            .collect();
                        let doc = json!({"examples": list, "schema": "1"});
                        println!("{}", jsonio::canonical_string(&doc));
                    }
                    OutputMode::Human => {
                        for e in &examples {
                            println!("{:24} {:10} {}", e.id, example_kind(e), e.summary);
                        }
                    }
                }
                Ok(true)
            }
        },
    }
}

fn load_class_for_zeta(source: &SourceArgs) -> Result<Loaded<CompletedClass>, Failure> {
    match (&source.example, &source.input) {
        (Some(id), _) => match find_example(id)?.data {
            ExampleData::Scheme(s) => match s.class {
                Some(class) => Ok(Loaded::FromExample(id.clone(), class)),
                None => Err(Failure::new(format!("example `{id}` carries no class"))),
            },
            _ => Err(Failure::new(format!("example `{id}` carries no class"))),
        },
        (None, Some(path)) => {
            let doc = jsonio::parse_document(&load_text(path)?)?;
            Ok(Loaded::FromFile(jsonio::class_from_value(&doc, "$")?))
        }
        (None, None) => Err(Failure::new("one of --example or --input is required")),
    }
}

fn example_kind(e: &Example) -> &'static str {
    match e.data {
        ExampleData::Integrate(_) => "integrate",
        ExampleData::Transform(_) => "transform",
        ExampleData::KEquivalence(_) => "kequiv",
        ExampleData::Scheme(_) => "scheme",
    }
}

fn example_payload(e: &Example) -> Value {
    match &e.data {
        ExampleData::Integrate(case) => jsonio::contact_case_to_value(case),
        ExampleData::Transform(case) => jsonio::transform_to_value(case),
        ExampleData::KEquivalence(pair) => jsonio::kequiv_to_value(pair),
        ExampleData::Scheme(s) => jsonio::scheme_to_value(s),
    }
}
