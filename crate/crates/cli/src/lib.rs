//! Command-line front end. Every command writes a report to standard
//! output (JSON by default) and a one-line summary to standard error.
//!
//! Exit codes: 0 when every check passes, 1 on a failed or refused check
//! or a malformed input document, 2 on usage errors, 3 on I/O failures.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use tablealg::algebra::{validate, Mode, TableAlgebra};
use tablealg::closed::{closure, enumerate_closed_subsets, quotient, ClosedSubset};
use tablealg::duality::{character_table, dual_algebra, format_gaussian, DualityError, DualityOptions};
use tablealg::io::{
    parse_homomorphism, parse_raw_algebra, parse_relation_matrix, parse_scheme, parse_table_algebra,
    serialize_scheme, serialize_table_algebra, ParseError,
};
use tablealg::iso::SearchOptions;
use tablealg::oracle::brute_force_associativity;
use tablealg::report::{Check, ValidationReport};
use tablealg::scalar::format_rational;
use tablealg::scheme::{adjacency_algebra, validate_scheme, AssociationScheme};
use tablealg::schemewedge::{scheme_wedge, verify_scheme_wedge_algebra, SchemeWedgeProvenance};
use tablealg::suite::{algebra_suite, scheme_suite, SuiteOptions};
use tablealg::wedge::{
    describe_identifications, recognize_wedge, verify_wedge_identities, wedge_conditions, wedge_product,
    wreath_product, WedgeAlgebra,
};

#[derive(Parser, Debug)]
#[command(name = "tablealg", version, about = "Table algebras, association schemes, wedge products and duals")]
pub struct Cli {
    /// Numerical tolerance for character computations.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Seed for the random combination used to separate characters.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest dimension for isomorphism searches.
    #[arg(long, global = true, default_value_t = tablealg::iso::DEFAULT_MAX_DIM)]
    pub max_dim: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Table,
    CAlgebra,
}

#[derive(Args, Debug)]
pub struct AlgebraArg {
    /// Algebra document.
    #[arg(long)]
    pub algebra: PathBuf,
}

#[derive(Args, Debug)]
pub struct OutArg {
    /// Write the resulting document here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the C-algebra (and table algebra) axioms.
    Validate {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Override the mode given in the document.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// List the closed subsets and whether they are normal.
    ClosedSubsets {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, default_value_t = tablealg::closed::DEFAULT_ENUMERATION_BOUND)]
        bound: usize,
    },
    /// Quotient by the closed subset generated by the given labels.
    Quotient {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Comma-separated labels generating N.
        #[arg(long)]
        n: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check that a label map is a table algebra homomorphism.
    HomCheck {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        phi: PathBuf,
    },
    /// Wedge of `left` and `right` relative to `phi: left -> right` onto N.
    Wedge {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Comma-separated labels of `right` generating N.
        #[arg(long)]
        n: String,
        #[arg(long)]
        phi: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Wreath product of `left` by `right`.
    Wreath {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Decompose an algebra as a wedge over closed subsets K <= D.
    Recognize {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Comma-separated labels generating K.
        #[arg(long)]
        k: String,
        /// Comma-separated labels generating D.
        #[arg(long)]
        d: String,
    },
    /// Character table of a commutative algebra.
    Characters {
        #[command(flatten)]
        algebra: AlgebraArg,
    },
    /// Dual algebra of a commutative algebra.
    Dual {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check the association scheme axioms.
    SchemeValidate {
        #[arg(long)]
        scheme: PathBuf,
    },
    /// Adjacency algebra of a scheme.
    SchemeToAlgebra {
        #[arg(long)]
        scheme: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Wedge of copies of a fiber scheme over a base scheme.
    SchemeWedge {
        #[command(flatten)]
        wedge: SchemeWedgeArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Every applicable theorem check on an algebra or a scheme wedge.
    VerifySuite {
        #[arg(long, conflicts_with = "base")]
        algebra: Option<PathBuf>,
        #[arg(long, requires = "d", conflicts_with = "base")]
        k: Option<String>,
        #[arg(long)]
        d: Option<String>,
        #[arg(long, requires_all = ["fiber", "psi", "d"])]
        base: Option<PathBuf>,
        #[arg(long)]
        fiber: Option<PathBuf>,
        #[arg(long)]
        psi: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct SchemeWedgeArgs {
    /// Base scheme (X, G).
    #[arg(long)]
    pub base: PathBuf,
    /// Comma-separated relations of the base forming D.
    #[arg(long)]
    pub d: String,
    /// Fiber scheme (Y1, B1).
    #[arg(long)]
    pub fiber: PathBuf,
    /// JSON list giving the image in X of each fiber point.
    #[arg(long)]
    pub psi: PathBuf,
}

enum Failure {
    Io(String),
    Input(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Outcome {
    report: ValidationReport,
    result: Option<Value>,
}

impl Outcome {
    fn new(report: ValidationReport) -> Self {
        Outcome { report, result: None }
    }

    fn with(report: ValidationReport, result: Value) -> Self {
        Outcome {
            report,
            result: Some(result),
        }
    }
}

/// Parses `args` (program name first) and runs the command against the
/// process streams.
pub fn run_command<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    let name = command_name(&cli.command);
    match execute(&cli) {
        Ok(outcome) => {
            let body = match cli.format {
                Format::Json => {
                    let mut doc = outcome.report.to_json();
                    if let Some(r) = outcome.result {
                        doc["result"] = r;
                    }
                    serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
                }
                Format::Text => {
                    let mut text = outcome.report.to_text();
                    if let Some(r) = outcome.result {
                        text.push_str(&serde_json::to_string_pretty(&r).expect("results serialize"));
                        text.push('\n');
                    }
                    text
                }
            };
            let _ = out.write_all(body.as_bytes());
            let failed = outcome.report.failures().count();
            let verdict = if outcome.report.passed() { "pass" } else { "fail" };
            let _ = writeln!(
                err,
                "{name}: {verdict} ({} checks, {failed} not passed)",
                outcome.report.checks.len()
            );
            if failed > 0 {
                let _ = writeln!(err, "  {}", outcome.report.failure_summary());
            }
            i32::from(!outcome.report.passed())
        }
        Err(Failure::Input(msg)) => {
            let mut report = ValidationReport::new(name);
            report.push(Check::fail("input", msg.clone()));
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report.to_json()).expect("serialize"));
            let _ = writeln!(err, "{name}: invalid input: {msg}");
            1
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "{name}: {msg}");
            3
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::ClosedSubsets { .. } => "closed-subsets",
        Command::Quotient { .. } => "quotient",
        Command::HomCheck { .. } => "hom-check",
        Command::Wedge { .. } => "wedge",
        Command::Wreath { .. } => "wreath",
        Command::Recognize { .. } => "recognize",
        Command::Characters { .. } => "characters",
        Command::Dual { .. } => "dual",
        Command::SchemeValidate { .. } => "scheme-validate",
        Command::SchemeToAlgebra { .. } => "scheme-to-algebra",
        Command::SchemeWedge { .. } => "scheme-wedge",
        Command::VerifySuite { .. } => "verify-suite",
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<TableAlgebra, Failure> {
    Ok(parse_table_algebra(&read(path)?)?)
}

fn load_scheme(path: &Path) -> Result<AssociationScheme, Failure> {
    Ok(parse_scheme(&read(path)?)?)
}

fn split_labels(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// Closed subset generated by comma-separated labels.
fn generated(alg: &TableAlgebra, list: &str) -> Result<ClosedSubset, Failure> {
    let idx = split_labels(list)
        .into_iter()
        .map(|l| alg.index_of(l).ok_or_else(|| Failure::Input(format!("unknown basis label {l:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    closure(alg, &idx).map_err(|e| Failure::Input(e.to_string()))
}

/// Relations of a scheme by label or index.
fn relations(s: &AssociationScheme, list: &str) -> Result<Vec<usize>, Failure> {
    split_labels(list)
        .into_iter()
        .map(|l| {
            s.labels()
                .iter()
                .position(|x| x == l)
                .or_else(|| l.parse::<usize>().ok().filter(|&i| i < s.rank()))
                .ok_or_else(|| Failure::Input(format!("unknown relation {l:?}")))
        })
        .collect()
}

fn labels_of(alg: &TableAlgebra, members: &[usize]) -> Vec<String> {
    members.iter().map(|&b| alg.label(b).to_string()).collect()
}

fn duality_options(cli: &Cli) -> DualityOptions {
    DualityOptions {
        tolerance: cli.tolerance,
        seed: cli.seed,
        ..DualityOptions::default()
    }
}

fn search_options(cli: &Cli) -> SearchOptions {
    SearchOptions { max_dim: cli.max_dim }
}

fn algebra_summary(alg: &TableAlgebra) -> Value {
    json!({
        "basis": alg.labels(),
        "degrees": alg.degrees().iter().map(format_rational).collect::<Vec<_>>(),
        "order": format_rational(&alg.order()),
        "commutative": alg.is_commutative(),
    })
}

fn wedge_outcome(subject: &str, w: &WedgeAlgebra, cli: &Cli, out: &Option<PathBuf>) -> Result<Outcome, Failure> {
    let mut report = ValidationReport::new(subject);
    report.extend(w.algebra.report(Mode::TableAlgebra));
    report.extend(verify_wedge_identities(w, &search_options(cli)));
    if let Some(p) = out {
        write(p, &serialize_table_algebra(&w.algebra))?;
    }
    let mut result = algebra_summary(&w.algebra);
    result["kernel"] = json!(labels_of(&w.lower, w.kernel.members()));
    result["identifications"] = json!(describe_identifications(w));
    Ok(Outcome::with(report, result))
}

fn duality_refusal(subject: &str, e: &DualityError) -> ValidationReport {
    let mut report = ValidationReport::new(subject);
    report.push(match e {
        DualityError::NonCommutative(_) => Check::refused("commutative", e.to_string()),
        DualityError::NotStandard => Check::refused("standard", e.to_string()),
        _ => Check::fail("characters", e.to_string()),
    });
    report
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Validate { algebra, mode } => {
            let (raw, doc_mode) = parse_raw_algebra(&read(&algebra.algebra)?)?;
            let mode = match mode {
                Some(ModeArg::Table) => Mode::TableAlgebra,
                Some(ModeArg::CAlgebra) => Mode::CAlgebra,
                None => doc_mode,
            };
            let mut report = validate(&raw, mode).map_err(|e| Failure::Input(e.to_string()))?;
            let mut oracle = brute_force_associativity(&raw);
            if let Some(c) = oracle.checks.first_mut() {
                c.name = "associativity-oracle".into();
            }
            report.extend(oracle);
            let mode_name = if mode == Mode::TableAlgebra { "table" } else { "c-algebra" };
            Ok(Outcome::with(report, json!({ "mode": mode_name, "dim": raw.labels.len() })))
        }
        Command::ClosedSubsets { algebra, bound } => {
            let alg = load_algebra(&algebra.algebra)?;
            let mut report = ValidationReport::new("closed subsets");
            match enumerate_closed_subsets(&alg, *bound) {
                Ok(subsets) => {
                    report.push(Check::pass("enumeration").with_detail(format!("{} closed subsets", subsets.len())));
                    let list: Vec<Value> = subsets
                        .iter()
                        .map(|s| {
                            json!({
                                "members": labels_of(&alg, s.members()),
                                "order": format_rational(s.order()),
                                "normal": s.is_normal(),
                            })
                        })
                        .collect();
                    Ok(Outcome::with(report, json!({ "closed_subsets": list })))
                }
                Err(e) => {
                    report.push(Check::refused("enumeration", e.to_string()));
                    Ok(Outcome::new(report))
                }
            }
        }
        Command::Quotient { algebra, n, out } => {
            let alg = load_algebra(&algebra.algebra)?;
            let n = generated(&alg, n)?;
            let mut report = ValidationReport::new("quotient");
            match quotient(&alg, &n) {
                Ok(q) => {
                    report.push(Check::pass("quotient").with_detail(format!("o(N) = {}", format_rational(n.order()))));
                    if let Some(p) = &out.out {
                        write(p, &serialize_table_algebra(&q.algebra))?;
                    }
                    let cosets: Vec<Vec<String>> =
                        q.cosets.cells().iter().map(|c| labels_of(&alg, c)).collect();
                    let mut result = algebra_summary(&q.algebra);
                    result["N"] = json!(labels_of(&alg, n.members()));
                    result["double_cosets"] = json!(cosets);
                    Ok(Outcome::with(report, result))
                }
                Err(e) => {
                    report.push(Check::fail("quotient", e.to_string()));
                    Ok(Outcome::new(report))
                }
            }
        }
        Command::HomCheck { source, target, phi } => {
            let s = load_algebra(source)?;
            let t = load_algebra(target)?;
            let text = read(phi)?;
            let mut report = ValidationReport::new("homomorphism");
            match parse_homomorphism(&text, &s, &t) {
                Ok(phi) => {
                    report.push(Check::pass("homomorphism"));
                    let scalars: Vec<String> = (0..s.dim()).map(|b| format_rational(&phi.scalar(b))).collect();
                    let result = json!({
                        "kernel": labels_of(&s, phi.kernel().members()),
                        "image": labels_of(&t, phi.image().members()),
                        "scalars": scalars,
                        "injective": phi.is_injective(),
                        "surjective": phi.is_surjective(),
                    });
                    Ok(Outcome::with(report, result))
                }
                Err(ParseError::Hom(e)) => {
                    report.push(Check::fail("homomorphism", e.to_string()));
                    Ok(Outcome::new(report))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Wedge { left, right, n, phi, out } => {
            let lower = load_algebra(left)?;
            let upper = load_algebra(right)?;
            let phi = parse_homomorphism(&read(phi)?, &lower, &upper)?;
            let n = generated(&upper, n)?;
            match wedge_product(&phi, &n) {
                Ok(w) => wedge_outcome("wedge", &w, cli, &out.out),
                Err(e) => {
                    let mut report = ValidationReport::new("wedge");
                    report.push(Check::fail("wedge", e.to_string()));
                    Ok(Outcome::new(report))
                }
            }
        }
        Command::Wreath { left, right, out } => {
            let lower = load_algebra(left)?;
            let upper = load_algebra(right)?;
            match wreath_product(&lower, &upper) {
                Ok(w) => wedge_outcome("wreath", &w, cli, &out.out),
                Err(e) => {
                    let mut report = ValidationReport::new("wreath");
                    report.push(Check::fail("wreath", e.to_string()));
                    Ok(Outcome::new(report))
                }
            }
        }
        Command::Recognize { algebra, k, d } => {
            let alg = load_algebra(&algebra.algebra)?;
            let k = generated(&alg, k)?;
            let d = generated(&alg, d)?;
            let mut report = wedge_conditions(&alg, &k, &d);
            report.subject = "recognize".into();
            if !report.passed() {
                return Ok(Outcome::new(report));
            }
            match recognize_wedge(&alg, &k, &d) {
                Ok(dec) => {
                    report.push(Check::pass("reconstruction"));
                    let result = json!({
                        "lower": dec.lower.labels(),
                        "upper": dec.upper.algebra.labels(),
                        "K": labels_of(&alg, k.members()),
                        "D": labels_of(&alg, d.members()),
                    });
                    Ok(Outcome::with(report, result))
                }
                Err(e) => {
                    report.push(Check::fail("reconstruction", e.to_string()));
                    Ok(Outcome::new(report))
                }
            }
        }
        Command::Characters { algebra } => {
            let alg = load_algebra(&algebra.algebra)?;
            match character_table(&alg, &duality_options(cli)) {
                Ok(t) => {
                    let report = t.check_invariants();
                    let rows: Vec<Vec<String>> = (0..t.len())
                        .map(|chi| {
                            (0..alg.dim())
                                .map(|b| match t.exact_values() {
                                    Some(ex) => format_gaussian(&ex[chi][b]),
                                    None => format!("{:.12}", t.value(chi, b)),
                                })
                                .collect()
                        })
                        .collect();
                    let zeta: Vec<String> = match t.exact_zeta() {
                        Some(z) => z.iter().map(format_rational).collect(),
                        None => t.zeta().iter().map(|z| format!("{z:.12}")).collect(),
                    };
                    let result = json!({
                        "basis": alg.labels(),
                        "characters": (0..t.len()).map(|c| t.label(c)).collect::<Vec<_>>(),
                        "values": rows,
                        "zeta": zeta,
                        "exact": t.is_exact(),
                        "method": t.method(),
                    });
                    Ok(Outcome::with(report, result))
                }
                Err(e) => Ok(Outcome::new(duality_refusal("characters", &e))),
            }
        }
        Command::Dual { algebra, out } => {
            let alg = load_algebra(&algebra.algebra)?;
            let opts = duality_options(cli);
            let table = match character_table(&alg, &opts) {
                Ok(t) => t,
                Err(e) => return Ok(Outcome::new(duality_refusal("dual", &e))),
            };
            match dual_algebra(&table, &opts) {
                Ok(d) => {
                    let mut report = d.report.clone();
                    report.subject = "dual".into();
                    if let (Some(p), Some(ex)) = (&out.out, &d.exact) {
                        write(p, &serialize_table_algebra(ex))?;
                    }
                    let result = json!({
                        "basis": d.labels(),
                        "table_algebra": d.is_table_algebra,
                        "exact": d.exact.is_some(),
                        "min_constant": d.min_constant,
                    });
                    Ok(Outcome::with(report, result))
                }
                Err(e) => Ok(Outcome::new(duality_refusal("dual", &e))),
            }
        }
        Command::SchemeValidate { scheme } => {
            let (rel, r) = parse_relation_matrix(&read(scheme)?)?;
            let report = validate_scheme(&rel, Some(r)).map_err(|e| Failure::Input(e.to_string()))?;
            let result = if report.passed() {
                let s = AssociationScheme::with_relations(rel, Some(r)).expect("validated");
                Some(json!({ "points": s.points(), "relations": s.labels(), "valencies": s.valencies() }))
            } else {
                None
            };
            Ok(Outcome { report, result })
        }
        Command::SchemeToAlgebra { scheme, out } => {
            let s = load_scheme(scheme)?;
            let alg = adjacency_algebra(&s);
            let mut report = alg.report(Mode::TableAlgebra);
            report.subject = "adjacency algebra".into();
            if let Some(p) = &out.out {
                write(p, &serialize_table_algebra(&alg))?;
            }
            Ok(Outcome::with(report, algebra_summary(&alg)))
        }
        Command::SchemeWedge { wedge, out } => {
            let prov = build_scheme_wedge(wedge)?;
            let v = verify_scheme_wedge_algebra(&prov, &search_options(cli));
            if let Some(p) = &out.out {
                write(p, &serialize_scheme(&prov.scheme))?;
            }
            let result = json!({
                "points": prov.scheme.points(),
                "relations": prov.scheme.labels(),
                "psi": prov.psi,
            });
            Ok(Outcome::with(v.report, result))
        }
        Command::VerifySuite { algebra, k, d, base, fiber, psi } => {
            let opts = SuiteOptions {
                duality: duality_options(cli),
                search: search_options(cli),
            };
            if let (Some(base), Some(fiber), Some(psi), Some(d)) = (base, fiber, psi, d) {
                let prov = build_scheme_wedge(&SchemeWedgeArgs {
                    base: base.clone(),
                    d: d.clone(),
                    fiber: fiber.clone(),
                    psi: psi.clone(),
                })?;
                return Ok(Outcome::new(scheme_suite(&prov, &opts)));
            }
            let Some(path) = algebra else {
                return Err(Failure::Input("verify-suite needs --algebra or --base/--fiber/--psi/--d".into()));
            };
            let alg = load_algebra(path)?;
            let pair = match (k, d) {
                (Some(k), Some(d)) => Some((generated(&alg, k)?, generated(&alg, d)?)),
                (None, None) => None,
                _ => return Err(Failure::Input("--k and --d go together".into())),
            };
            let report = algebra_suite(&alg, pair.as_ref().map(|(k, d)| (k, d)), &opts);
            Ok(Outcome::new(report))
        }
    }
}

fn build_scheme_wedge(args: &SchemeWedgeArgs) -> Result<SchemeWedgeProvenance, Failure> {
    let base = load_scheme(&args.base)?;
    let fiber = load_scheme(&args.fiber)?;
    let d = relations(&base, &args.d)?;
    let psi: Vec<usize> = serde_json::from_str(&read(&args.psi)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.psi.display())))?;
    scheme_wedge(&base, &d, &fiber, &psi)
        .map(|w| w.provenance)
        .map_err(|e| Failure::Input(e.to_string()))
}
