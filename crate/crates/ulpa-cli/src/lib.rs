//! Batch command-line surface: file formats, expression parsing, reports,
//! and DOT emission over the algebra library.
//!
//! Exit codes: 0 success, 1 parse/validation failure, 2 undefined or
//! unsupported operation, 3 not found within the requested bound.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use ulpa::algebra::{InnerInverseError, Lpa};
use ulpa::chen::{self, ChenModule, IrreduciblePoly};
use ulpa::field::{Field, PrimeField, Rationals};
use ulpa::graph::Ultragraph;
use ulpa::groupoid::{self, st_eq, GroupoidPoint};
use ulpa::skew::{self, LevelStep};
use ulpa::structure;

pub mod document;
pub mod dot;
pub mod expr;
pub mod report;
pub mod text;

use document::UltragraphDocument;

/// A failure carrying its process exit code.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }

    pub fn unsupported(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<ulpa::graph::PathError> for CliError {
    fn from(e: ulpa::graph::PathError) -> Self {
        CliError::parse(e.to_string())
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "ulpa", version, about = "Leavitt path algebras of finite ultragraphs")]
struct Cli {
    /// Coefficient field: `q` (rationals) or `fp:<prime>`.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural report: Condition (K), simplicity, strong grading,
    /// unitality, cycles.
    Analyze {
        file: PathBuf,
        /// Emit the machine-readable JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print the canonical normal form of an element expression.
    Reduce {
        file: PathBuf,
        expr: String,
        /// Re-verify the reduction through the groupoid model.
        #[arg(long)]
        cross_check: bool,
    },
    /// Decide equality of two element expressions.
    Eq {
        file: PathBuf,
        expr1: String,
        expr2: String,
        #[arg(long)]
        cross_check: bool,
    },
    /// Print the product of two element expressions.
    Mul {
        file: PathBuf,
        expr1: String,
        expr2: String,
        #[arg(long)]
        cross_check: bool,
    },
    /// Emit the level-windowed skew-product ultragraph as a document.
    Skew {
        file: PathBuf,
        radius: i64,
        /// Level convention: `decrease` (default) or `increase`.
        #[arg(long, default_value = "decrease")]
        convention: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the graph in DOT format (one arrow per range vertex).
    Dot {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Act by an element on a basis path of the tail-class module.
    ModuleAct {
        file: PathBuf,
        expr: String,
        /// Base path, `prefix|cycle`.
        #[arg(long)]
        base: String,
        /// Twist polynomial over the Laurent ring, e.g. `t^2-t-1`.
        #[arg(long)]
        twist: Option<String>,
    },
    /// Search for an inner inverse of a homogeneous element.
    InnerInverse {
        file: PathBuf,
        expr: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Factor a positive-degree groupoid point into degree-1 points.
    Factor {
        file: PathBuf,
        range_path: String,
        degree: i64,
        source_path: String,
    },
    /// Evaluate the groupoid image of an element at a point.
    GroupoidEval {
        file: PathBuf,
        expr: String,
        range_path: String,
        degree: i64,
        source_path: String,
    },
}

enum FieldChoice {
    Q,
    Fp(u64),
}

fn parse_field(spec: &str) -> Result<FieldChoice, CliError> {
    if spec == "q" {
        return Ok(FieldChoice::Q);
    }
    if let Some(p) = spec.strip_prefix("fp:") {
        let p: u64 = p
            .parse()
            .map_err(|_| CliError::parse(format!("invalid prime in field spec {spec}")))?;
        PrimeField::new(p).map_err(|e| CliError::parse(e.to_string()))?;
        return Ok(FieldChoice::Fp(p));
    }
    Err(CliError::parse(format!(
        "unknown field {spec}; expected q or fp:<prime>"
    )))
}

/// Run the tool on the given arguments (excluding the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut full: Vec<String> = vec!["ulpa".to_string()];
    full.extend(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(&full) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            // Help and version requests are successful output.
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    let result = (|| -> Result<String, CliError> {
        match parse_field(&cli.field)? {
            FieldChoice::Q => dispatch(Rationals, &cli.command),
            FieldChoice::Fp(p) => dispatch(PrimeField::new(p).expect("validated"), &cli.command),
        }
    })();
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome {
            code: e.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message),
        },
    }
}

fn load_graph(path: &PathBuf) -> Result<Ultragraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    UltragraphDocument::parse(&text)?.to_graph()
}

fn make_algebra<F: Field>(field: F, path: &PathBuf) -> Result<Lpa<F>, CliError> {
    let g = load_graph(path)?;
    Lpa::new(g, field).map_err(|e| CliError::parse(e.to_string()))
}

fn emit(out: &Option<PathBuf>, content: String) -> Result<String, CliError> {
    match out {
        None => Ok(content),
        Some(path) => {
            std::fs::write(path, content)
                .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
    }
}

fn dispatch<F: Field>(field: F, command: &Command) -> Result<String, CliError> {
    match command {
        Command::Analyze { file, json } => {
            let g = load_graph(file)?;
            let rep = structure::report(&g);
            if *json {
                let value = report::render_json(&g, &rep);
                Ok(format!("{}\n", serde_json::to_string_pretty(&value).expect("report serializes")))
            } else {
                Ok(report::render_text(&g, &rep))
            }
        }
        Command::Reduce { file, expr: src, cross_check } => {
            let alg = make_algebra(field, file)?;
            let elem = expr::parse_eval(&alg, src)?;
            let nf = alg.normal_form(&elem).into_elem();
            if *cross_check {
                ensure_groupoid_agreement(&alg, &elem, &nf, "reduction")?;
            }
            Ok(format!("{}\n", expr::print(&alg, &nf)))
        }
        Command::Eq { file, expr1, expr2, cross_check } => {
            let alg = make_algebra(field, file)?;
            let a = expr::parse_eval(&alg, expr1)?;
            let b = expr::parse_eval(&alg, expr2)?;
            let equal = alg.eq(&a, &b);
            if *cross_check {
                let ga = groupoid::pi_g(&alg, &a).map_err(|e| CliError::unsupported(e.to_string()))?;
                let gb = groupoid::pi_g(&alg, &b).map_err(|e| CliError::unsupported(e.to_string()))?;
                let gequal = st_eq(&alg, &ga, &gb).map_err(|e| CliError::unsupported(e.to_string()))?;
                if equal != gequal {
                    return Err(CliError::unsupported(format!(
                        "cross-check disagreement: algebra says {equal}, groupoid says {gequal}"
                    )));
                }
            }
            Ok(format!("{equal}\n"))
        }
        Command::Mul { file, expr1, expr2, cross_check } => {
            let alg = make_algebra(field, file)?;
            let a = expr::parse_eval(&alg, expr1)?;
            let b = expr::parse_eval(&alg, expr2)?;
            let prod = alg.mul(&a, &b);
            if *cross_check {
                let ga = groupoid::pi_g(&alg, &a).map_err(|e| CliError::unsupported(e.to_string()))?;
                let gb = groupoid::pi_g(&alg, &b).map_err(|e| CliError::unsupported(e.to_string()))?;
                let conv = groupoid::st_convolve(&alg, &ga, &gb)
                    .map_err(|e| CliError::unsupported(e.to_string()))?;
                let direct = groupoid::pi_g(&alg, &prod).map_err(|e| CliError::unsupported(e.to_string()))?;
                if !st_eq(&alg, &conv, &direct).map_err(|e| CliError::unsupported(e.to_string()))? {
                    return Err(CliError::unsupported(
                        "cross-check disagreement: convolution differs from the product image",
                    ));
                }
            }
            Ok(format!("{}\n", expr::print(&alg, &prod)))
        }
        Command::Skew { file, radius, convention, out } => {
            let g = load_graph(file)?;
            let step = match convention.as_str() {
                "decrease" => LevelStep::Decrease,
                "increase" => LevelStep::Increase,
                other => {
                    return Err(CliError::parse(format!(
                        "unknown convention {other}; expected decrease or increase"
                    )))
                }
            };
            let window =
                skew::build_skew(&g, *radius, step).map_err(|e| CliError::parse(e.to_string()))?;
            if !skew::is_acyclic(&window) {
                return Err(CliError::unsupported("window failed its acyclicity check"));
            }
            let doc = UltragraphDocument::from_graph(window.graph());
            emit(out, doc.canonical_text())
        }
        Command::Dot { file, out } => {
            let g = load_graph(file)?;
            emit(out, dot::render(&g))
        }
        Command::ModuleAct { file, expr: src, base, twist } => {
            let alg = make_algebra(field.clone(), file)?;
            let g = alg.graph().clone();
            let base_path = text::parse_path(&g, base)?;
            let module = match twist {
                None => ChenModule::new(alg.clone(), base_path)
                    .map_err(|e| CliError::unsupported(e.to_string()))?,
                Some(poly_src) => {
                    let coeffs = text::parse_poly(&field, poly_src)?;
                    let poly = IrreduciblePoly::new(&field, coeffs)
                        .map_err(|e| CliError::unsupported(e.to_string()))?;
                    ChenModule::twisted(alg.clone(), base_path, poly)
                        .map_err(|e| CliError::unsupported(e.to_string()))?
                }
            };
            let elem = expr::parse_eval(&alg, src)?;
            let start = module.base_vector();
            let acted = module
                .act_elem(&elem, &start)
                .map_err(|e| CliError::unsupported(e.to_string()))?;
            Ok(format!("{}\n", render_module_vector(&module, &acted)))
        }
        Command::InnerInverse { file, expr: src, depth } => {
            let alg = make_algebra(field, file)?;
            let x = expr::parse_eval(&alg, src)?;
            match alg.inner_inverse(&x, *depth) {
                Ok(y) => Ok(format!("{}\n", expr::print(&alg, &y))),
                Err(e @ InnerInverseError::NotFoundWithinDepth { .. }) => {
                    Err(CliError::not_found(e.to_string()))
                }
                Err(e) => Err(CliError::unsupported(e.to_string())),
            }
        }
        Command::Factor { file, range_path, degree, source_path } => {
            let g = load_graph(file)?;
            groupoid::ensure_sink_free(&g).map_err(|e| CliError::unsupported(e.to_string()))?;
            let q = text::parse_path(&g, range_path)?;
            let p = text::parse_path(&g, source_path)?;
            let pt = GroupoidPoint::new(q, *degree, p)
                .map_err(|e| CliError::unsupported(e.to_string()))?;
            let factors =
                groupoid::factor_positive(&pt).map_err(|e| CliError::unsupported(e.to_string()))?;
            let mut out = String::new();
            for f in factors {
                writeln!(
                    out,
                    "({}; {}; {})",
                    text::print_path(&g, f.range_path()),
                    f.degree(),
                    text::print_path(&g, f.source_path())
                )
                .expect("string write");
            }
            Ok(out)
        }
        Command::GroupoidEval { file, expr: src, range_path, degree, source_path } => {
            let alg = make_algebra(field, file)?;
            let g = alg.graph().clone();
            let elem = expr::parse_eval(&alg, src)?;
            let image = groupoid::pi_g(&alg, &elem).map_err(|e| CliError::unsupported(e.to_string()))?;
            let q = text::parse_path(&g, range_path)?;
            let p = text::parse_path(&g, source_path)?;
            let pt = GroupoidPoint::new(q, *degree, p)
                .map_err(|e| CliError::unsupported(e.to_string()))?;
            let value = groupoid::st_eval(&alg, &image, &pt)
                .map_err(|e| CliError::unsupported(e.to_string()))?;
            Ok(format!("{}\n", alg.field().render(&value)))
        }
    }
}

fn ensure_groupoid_agreement<F: Field>(
    alg: &Lpa<F>,
    original: &ulpa::algebra::LpaElem<F>,
    reduced: &ulpa::algebra::LpaElem<F>,
    what: &str,
) -> Result<(), CliError> {
    let a = groupoid::pi_g(alg, original).map_err(|e| CliError::unsupported(e.to_string()))?;
    let b = groupoid::pi_g(alg, reduced).map_err(|e| CliError::unsupported(e.to_string()))?;
    if st_eq(alg, &a, &b).map_err(|e| CliError::unsupported(e.to_string()))? {
        Ok(())
    } else {
        Err(CliError::unsupported(format!(
            "cross-check disagreement: {what} changed the groupoid image"
        )))
    }
}

fn render_module_vector<F: Field>(
    module: &ChenModule<F>,
    v: &chen::ModuleVector<F>,
) -> String {
    let field = module.algebra().field();
    let g = module.graph();
    if v.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (key, coeff)) in v.terms().enumerate() {
        let (negative, magnitude) = field.render_signed(coeff);
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let path = text::print_path(g, &key.tail().clone().realize());
        let body = if module.twist().is_some() {
            format!("[{}; t^{}]", path, key.residue())
        } else {
            format!("[{path}]")
        };
        if magnitude == "1" {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{magnitude}*{body}"));
        }
    }
    out
}

/// Deterministic-output check helper used by the test suites: run the
/// same invocation twice and insist on byte equality.
pub fn run_stable<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S> + Clone,
    S: Into<String> + Clone,
{
    let first = run(args.clone());
    let second = run(args);
    assert_eq!(first, second, "output must be byte-stable across runs");
    first
}
