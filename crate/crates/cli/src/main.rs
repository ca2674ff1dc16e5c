use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use orthoset::corpus::{self, Generator, NamedFixture};
use orthoset::hermitian::fuzz::run_fuzz;
use orthoset::hermitian::{
    matrix_to_json, parse_matrix, parse_vector, vector_to_json, Field, Gaussian, HermitianSpace, Line,
    Rational, Scalar,
};
use orthoset::lattice::OrthoLattice;
use orthoset::report::{Check, PropertyReport};
use orthoset::sasaki::{self, FinchLaw, SasakiVerdict};
use orthoset::{Budgets, Error, Orthoset, Subset, Verdict};

const EXIT_VERDICT: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "orthoset", version)]
#[command(about = "Exact checks on finite orthosets, ortholattices, Sasaki maps and Hermitian spaces")]
struct Cli {
    /// Output format [default: text]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// TOML file with `format`, `seed` and a `[budgets]` table
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for every random choice [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report: point-closure, irreducibility, rank, Dacey, Sasaki, transitivity
    Check {
        /// Orthoset JSON file, or `corpus:<name>`
        input: String,
    },
    /// Build the lattice of orthoclosed sets and check it
    Lattice {
        input: String,
        /// Write the Hasse diagram in DOT format
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Sasaki maps to given targets
    Sasaki(SasakiArgs),
    /// Checks and conversions for a lattice file
    Oml {
        /// Lattice JSON file, or `corpus:<name>`
        input: String,
        /// Include the orthoset on L ∖ {0}
        #[arg(long)]
        to_orthoset: bool,
        /// Include the orthoset of atoms
        #[arg(long)]
        atoms: bool,
        /// Compare the covering property with the basic-to-basic property
        #[arg(long)]
        wilce: bool,
    },
    /// Laws of the operators induced by the Sasaki maps
    Finch { input: String },
    /// Sasaki-map formula on a Hermitian space, or a seeded random sweep
    Hermitian(HermitianArgs),
    /// Shipped fixtures
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Args)]
struct SasakiArgs {
    input: String,
    /// Comma-separated labels of the target set
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    set: Option<String>,
    /// Every orthoclosed set
    #[arg(long)]
    all: bool,
    /// Include the map tables
    #[arg(long)]
    witness: bool,
}

#[derive(Args)]
struct HermitianArgs {
    #[arg(long, value_parser = parse_field)]
    field: Field,
    /// Gram matrix: JSON array of rows of scalar strings
    #[arg(long, requires_all = ["subspace", "line"], conflicts_with = "fuzz")]
    gram: Option<PathBuf>,
    /// Spanning vectors of S: JSON array of vectors
    #[arg(long)]
    subspace: Option<PathBuf>,
    /// A vector spanning the line
    #[arg(long)]
    line: Option<PathBuf>,
    /// Number of random instances
    #[arg(long, required_unless_present = "gram")]
    fuzz: Option<u64>,
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Fixture names, kinds and descriptions
    List,
    /// Print a fixture file
    Get { name: String },
    /// Evaluate every expected property of every fixture
    /// Evaluate the built-in fixtures, or only the given fixture files
    RunGolden { fixtures: Vec<PathBuf> },
    /// Print a generated fixture, e.g. `random_orthoset(6,0.4)`
    Generate { generator: String },
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    format: Option<Format>,
    seed: Option<u64>,
    budgets: Budgets,
}

struct Settings {
    format: Format,
    seed: u64,
    budgets: Budgets,
}

enum Failure {
    Input(String),
    Budget(String),
    Verdict(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verdict(_) => EXIT_VERDICT,
            Failure::Input(_) => EXIT_INPUT,
            Failure::Budget(_) => EXIT_BUDGET,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Budget(m) | Failure::Verdict(m) => m,
        }
    }
}

fn fail(context: &str, e: Error) -> Failure {
    let msg = format!("{context}: {e}");
    if e.is_budget() {
        Failure::Budget(msg)
    } else if matches!(e, Error::RouteMismatch { .. }) {
        Failure::Verdict(msg)
    } else {
        Failure::Input(msg)
    }
}

type CliResult<T> = Result<T, Failure>;

/// A report plus the exit status its verdicts call for.
struct Outcome {
    report: Value,
    failed: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome {
            report,
            failed: false,
        }
    }
}

fn settings(cli: &Cli) -> CliResult<Settings> {
    let file = match &cli.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            toml::from_str::<ConfigFile>(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let budgets = file
        .budgets
        .with_env()
        .map_err(|v| Failure::Input(format!("invalid budget override {v}")))?;
    budgets.validate().map_err(Failure::Input)?;
    Ok(Settings {
        format: cli.format.or(file.format).unwrap_or(Format::Text),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        budgets,
    })
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_orthoset(input: &str) -> CliResult<Orthoset> {
    match input.strip_prefix("corpus:") {
        Some(name) => corpus::orthoset(name).map_err(|e| fail(input, e)),
        None => Orthoset::from_json(&read(Path::new(input))?).map_err(|e| fail(input, e)),
    }
}

fn load_lattice(input: &str, budgets: &Budgets) -> CliResult<OrthoLattice> {
    match input.strip_prefix("corpus:") {
        Some(name) => corpus::lattice(name).map_err(|e| fail(input, e)),
        None => OrthoLattice::from_json(&read(Path::new(input))?, budgets.lattice_elements)
            .map_err(|e| fail(input, e)),
    }
}

fn check<C>(v: &Verdict<C>, witness: impl FnOnce(&C) -> Value) -> Check {
    Check {
        holds: v.holds(),
        witness: v.counterexample().map(witness),
    }
}

fn lattice_summary(l: &OrthoLattice) -> Map<String, Value> {
    let label = |i: usize| Value::String(l.label(i).to_string());
    let atoms = l.atoms_and_covering();
    let mut m = Map::new();
    m.insert("name".into(), json!(l.name()));
    m.insert("size".into(), json!(l.len()));
    m.insert("elements".into(), json!(l.labels()));
    m.insert(
        "atoms".into(),
        Value::Array(l.atoms().iter().map(|&a| label(a)).collect()),
    );
    m.insert(
        "orthomodular".into(),
        json!(check(&l.is_orthomodular(), |&(x, y)| json!([label(x), label(y)]))),
    );
    m.insert("atomistic".into(), json!(check(&atoms.atomistic, |&x| label(x))));
    m.insert(
        "covering".into(),
        json!(check(&atoms.covering, |f| json!({
            "element": label(f.element),
            "atom": label(f.atom),
            "join": label(f.join),
            "between": label(f.between),
        }))),
    );
    m
}

fn cmd_check(input: &str, s: &Settings) -> CliResult<Outcome> {
    let x = load_orthoset(input)?;
    let report = PropertyReport::build(&x, &s.budgets).map_err(|e| fail(input, e))?;
    Ok(Outcome::ok(json!(report)))
}

fn cmd_lattice(input: &str, dot: Option<&Path>, s: &Settings) -> CliResult<Outcome> {
    let x = load_orthoset(input)?;
    let (l, _) = OrthoLattice::from_orthoset_with_family(&x, &s.budgets).map_err(|e| fail(input, e))?;
    let mut m = lattice_summary(&l);
    if let Some(path) = dot {
        fs::write(path, l.to_dot()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        m.insert("dot".into(), json!(path.display().to_string()));
    }
    Ok(Outcome::ok(Value::Object(m)))
}

fn parse_target(x: &Orthoset, spec: &str) -> orthoset::Result<Subset> {
    let labels: Vec<&str> = spec.split(',').map(str::trim).filter(|l| !l.is_empty()).collect();
    x.subset_from_labels(&labels)
}

fn cmd_sasaki(args: &SasakiArgs, s: &Settings) -> CliResult<Outcome> {
    let input = args.input.as_str();
    let x = load_orthoset(input)?;
    let targets = match &args.set {
        Some(spec) => vec![parse_target(&x, spec).map_err(|e| fail(input, e))?],
        None => x.orthoclosed_family(&s.budgets).map_err(|e| fail(input, e))?,
    };
    let mut entries = Vec::new();
    let mut all_exist = true;
    for t in targets {
        let shortcut = sasaki::shortcut_construct(&x, t)
            .map_err(|e| fail(input, e))?
            .map(|(clause, _)| clause);
        let verdict = sasaki::find_sasaki_map(&x, t, &s.budgets).map_err(|e| fail(input, e))?;
        let mut entry = Map::new();
        entry.insert("target".into(), json!(x.subset_labels(t)));
        entry.insert("exists".into(), json!(verdict.exists()));
        entry.insert("shortcut".into(), json!(shortcut));
        match &verdict {
            SasakiVerdict::Exists(w) => {
                if args.witness {
                    entry.insert("witness".into(), json!(w.to_doc(&x)));
                }
            }
            SasakiVerdict::Refuted(r) => {
                all_exist = false;
                entry.insert("refutation".into(), r.to_json(&x));
            }
        }
        entries.push(Value::Object(entry));
    }
    let mut report = Map::new();
    report.insert("name".into(), json!(x.name()));
    report.insert("targets".into(), Value::Array(entries));
    if args.all {
        report.insert("sasaki_space".into(), json!(all_exist));
    }
    Ok(Outcome::ok(Value::Object(report)))
}

fn cmd_oml(input: &str, to_orthoset: bool, atoms: bool, wilce: bool, s: &Settings) -> CliResult<Outcome> {
    let l = load_lattice(input, &s.budgets)?;
    let label = |i: usize| Value::String(l.label(i).to_string());
    let mut m = lattice_summary(&l);
    m.insert("boolean".into(), json!(l.is_boolean_distributive()));
    if to_orthoset {
        let lo = l.to_orthoset().map_err(|e| fail(input, e))?;
        m.insert("orthoset".into(), json!(lo.orthoset.to_doc()));
    }
    if atoms {
        let lo = l.atoms_to_orthoset().map_err(|e| fail(input, e))?;
        m.insert("atoms_orthoset".into(), json!(lo.orthoset.to_doc()));
    }
    if wilce {
        let w = l.wilce_check().map_err(|e| fail(input, e))?;
        let facts = l.projection_facts().map_err(|e| fail(input, e))?;
        let tuple = |t: &Vec<usize>| Value::Array(t.iter().map(|&i| label(i)).collect());
        m.insert(
            "wilce".into(),
            json!({
                "covering": check(&w.covering, |f| json!({
                    "element": label(f.element),
                    "atom": label(f.atom),
                    "join": label(f.join),
                    "between": label(f.between),
                })),
                "basic_to_basic": check(&w.basic_to_basic, |f| json!({
                    "projection": label(f.projection),
                    "atom": label(f.atom),
                    "image": label(f.image),
                })),
                "sides_agree": w.sides_agree(),
            }),
        );
        m.insert(
            "projection_facts".into(),
            json!({
                "fixes": check(&facts.fixes, tuple),
                "adjoint_bound": check(&facts.adjoint_bound, tuple),
                "kernel": check(&facts.kernel, tuple),
                "self_adjoint": check(&facts.self_adjoint, tuple),
            }),
        );
    }
    Ok(Outcome::ok(Value::Object(m)))
}

fn cmd_finch(input: &str, s: &Settings) -> CliResult<Outcome> {
    let x = load_orthoset(input)?;
    let r = sasaki::finch_report(&x, &s.budgets).map_err(|e| fail(input, e))?;
    let set = |p: usize| x.format_subset(r.family[p]);
    let laws: Vec<Value> = FinchLaw::ALL
        .iter()
        .map(|&law| {
            let v = r.law(law);
            json!({
                "law": law,
                "holds": v.holds(),
                "witness": v.counterexample().map(|t| t.iter().map(|&p| set(p)).collect::<Vec<_>>()),
            })
        })
        .collect();
    Ok(Outcome::ok(json!({
        "name": x.name(),
        "family": r.family.iter().map(|&a| x.format_subset(a)).collect::<Vec<_>>(),
        "laws": laws,
        "all_hold": r.all_hold(),
    })))
}

fn read_json(path: &Path) -> CliResult<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn hermitian_formula<K: Scalar>(gram: &Path, subspace: &Path, line: &Path) -> CliResult<Outcome> {
    let ctx = |p: &Path| p.display().to_string();
    let g = parse_matrix::<K>(&read_json(gram)?).map_err(|e| fail(&ctx(gram), e))?;
    let h = HermitianSpace::new(g).map_err(|e| fail(&ctx(gram), e))?;
    let vectors = parse_matrix::<K>(&read_json(subspace)?).map_err(|e| fail(&ctx(subspace), e))?;
    let s = h.span(&vectors).map_err(|e| fail(&ctx(subspace), e))?;
    let v = parse_vector::<K>(&read_json(line)?).map_err(|e| fail(&ctx(line), e))?;
    let l = Line::through(v).map_err(|e| fail(&ctx(line), e))?;
    let projection = h
        .project(&s, l.representative())
        .map_err(|e| fail(&ctx(line), e))?;
    let image = h.sasaki_line(&s, &l).map_err(|e| fail(&ctx(line), e))?;
    Ok(Outcome::ok(json!({
        "field": K::FIELD,
        "dim": h.dim(),
        "subspace": matrix_to_json(s.basis()),
        "perp": matrix_to_json(h.perp_subspace(&s).basis()),
        "line": vector_to_json(l.representative()),
        "projection": vector_to_json(&projection),
        "image": vector_to_json(image.representative()),
        "routes_agree": true,
    })))
}

fn cmd_hermitian(args: &HermitianArgs, s: &Settings) -> CliResult<Outcome> {
    if let Some(n) = args.fuzz {
        let report = match args.field {
            Field::Rational => run_fuzz::<Rational>(n, s.seed),
            Field::Gaussian => run_fuzz::<Gaussian>(n, s.seed),
        };
        return Ok(Outcome {
            failed: !report.all_pass(),
            report: json!(report),
        });
    }
    let (Some(g), Some(sub), Some(l)) = (&args.gram, &args.subspace, &args.line) else {
        return Err(Failure::Input(
            "--gram, --subspace and --line are required together".into(),
        ));
    };
    match args.field {
        Field::Rational => hermitian_formula::<Rational>(g, sub, l),
        Field::Gaussian => hermitian_formula::<Gaussian>(g, sub, l),
    }
}

/// `Ok(None)` means the output was printed verbatim.
fn cmd_corpus(action: &CorpusAction, s: &Settings) -> CliResult<Option<Outcome>> {
    match action {
        CorpusAction::List => {
            let mut fixtures = Vec::new();
            for name in corpus::list() {
                let f = corpus::get(name).map_err(|e| fail(name, e))?;
                fixtures.push(json!({"name": name, "kind": f.kind(), "description": f.description}));
            }
            Ok(Some(Outcome::ok(json!({ "fixtures": fixtures }))))
        }
        CorpusAction::Get { name } => {
            let text = corpus::source(name).map_err(|e| fail(name, e))?;
            emit(text);
            Ok(None)
        }
        CorpusAction::RunGolden { fixtures } => {
            let report = if fixtures.is_empty() {
                corpus::run_golden(&s.budgets).map_err(|e| fail("corpus", e))?
            } else {
                let mut results = Vec::new();
                for path in fixtures {
                    let context = path.display().to_string();
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Input(format!("{context}: {e}")))?;
                    let f = NamedFixture::from_json(&text, &s.budgets).map_err(|e| fail(&context, e))?;
                    results.extend(corpus::evaluate(&f, &s.budgets).map_err(|e| fail(&context, e))?);
                }
                corpus::GoldenReport { results }
            };
            let passed = report.results.iter().filter(|r| r.pass).count();
            Ok(Some(Outcome {
                failed: !report.all_pass(),
                report: json!({
                    "claims": report.results.len(),
                    "passed": passed,
                    "failed": report.results.len() - passed,
                    "results": report.results,
                }),
            }))
        }
        CorpusAction::Generate { generator } => {
            let g: Generator = generator.parse().map_err(|e| fail(generator, e))?;
            let f = corpus::generate(&g, s.seed, &s.budgets).map_err(|e| fail(generator, e))?;
            let text = serde_json::to_string_pretty(&f.to_json()).expect("fixtures serialize");
            emit(&format!("{text}\n"));
            Ok(None)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Lattice { .. } => "lattice",
        Command::Sasaki(_) => "sasaki",
        Command::Oml { .. } => "oml",
        Command::Finch { .. } => "finch",
        Command::Hermitian(_) => "hermitian",
        Command::Corpus { .. } => "corpus",
    }
}

fn run(cli: &Cli, s: &Settings) -> CliResult<Option<Outcome>> {
    let out = match &cli.command {
        Command::Check { input } => cmd_check(input, s)?,
        Command::Lattice { input, dot } => cmd_lattice(input, dot.as_deref(), s)?,
        Command::Sasaki(args) => cmd_sasaki(args, s)?,
        Command::Oml {
            input,
            to_orthoset,
            atoms,
            wilce,
        } => cmd_oml(input, *to_orthoset, *atoms, *wilce, s)?,
        Command::Finch { input } => cmd_finch(input, s)?,
        Command::Hermitian(args) => cmd_hermitian(args, s)?,
        Command::Corpus { action } => return cmd_corpus(action, s),
    };
    Ok(Some(out))
}

/// Leaves as `path: value` lines; arrays of scalars stay inline.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, child) in m {
                flatten(&key(k), child, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), child, out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        other => out.push(format!("{prefix}: {other}")),
    }
}

fn render(format: Format, envelope: &Value) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(envelope).expect("reports serialize"),
        Format::Text => {
            let mut lines = Vec::new();
            for key in ["tool", "version", "command", "seed"] {
                lines.push(format!(
                    "# {key}: {}",
                    envelope[key]
                        .as_str()
                        .map_or(envelope[key].to_string(), str::to_string)
                ));
            }
            flatten("", &envelope["report"], &mut lines);
            lines.join("\n")
        }
    }
}

/// A closed pipe on stdout is not an error worth reporting.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = settings(&cli).and_then(|s| Ok((run(&cli, &s)?, s)));
    match result {
        Ok((None, _)) => ExitCode::SUCCESS,
        Ok((Some(out), s)) => {
            let envelope = json!({
                "tool": "orthoset",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command_name(&cli.command),
                "seed": s.seed,
                "budgets": s.budgets,
                "report": out.report,
            });
            emit(&format!("{}\n", render(s.format, &envelope)));
            if out.failed {
                ExitCode::from(EXIT_VERDICT)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
