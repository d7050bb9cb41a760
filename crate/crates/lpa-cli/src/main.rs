//! `lpa`: prime-spectrum analysis of Leavitt path algebras from graph data.
//!
//! Exit codes: 0 success, 1 input error, 2 classifier-invariant violation,
//! 3 verification violation.

use lpa_cli::{dot, parse, report};

use std::fmt::Write as _;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use lpa_core::certs::{lattice_example_report, rational_plane_report, ExampleReport, Verdict};
use lpa_core::graph::Graph;
use lpa_core::oracle::{build_spectrum_poset, fuzz_with, standard_checks, FuzzParams};
use lpa_core::spectrum::{classify_prime, ClassificationReport, FieldDesc, SpectrumError};

#[derive(Parser)]
#[command(
    name = "lpa",
    version,
    about = "Prime spectrum classification for Leavitt path algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute and classify the full prime spectrum of a graph
    Analyze {
        /// Graph file (text or structured JSON format)
        path: PathBuf,
        /// Base field: finite:<q> | countable | uncountable
        #[arg(long, default_value = "countable")]
        field: String,
        /// Emit the JSON report instead of text
        #[arg(long)]
        json: bool,
    },
    /// Cross-check the classifiers against the brute-force oracles
    #[command(name = "verify-dm")]
    VerifyDm {
        /// Graph file; omit when fuzzing
        path: Option<PathBuf>,
        /// Check this many seeded random graphs
        #[arg(long)]
        fuzz: Option<u64>,
        /// Base seed (mandatory with --fuzz; no wall-clock seeding)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        #[arg(long, default_value_t = 16)]
        max_edge_specs: usize,
        /// Probability that a generated edge spec is ω
        #[arg(long, default_value_t = 0.2)]
        omega_probability: f64,
        #[arg(long, default_value = "countable")]
        field: String,
        #[arg(long)]
        json: bool,
        /// Test hook: makes every check report a synthetic violation
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Window-check the built-in infinite-graph examples
    Example {
        /// lattice | rational-plane
        name: String,
        /// Window indices, e.g. --windows 4,8,16
        #[arg(long, value_delimiter = ',', required = true)]
        windows: Vec<u32>,
        #[arg(long, default_value = "countable")]
        field: String,
        #[arg(long)]
        json: bool,
    },
    /// Emit DOT for the graph or for the spectrum Hasse diagram
    Dot {
        path: PathBuf,
        /// Emit the multigraph (ω edges labelled ∞)
        #[arg(long)]
        graph: bool,
        /// Emit the Hasse diagram of the prime spectrum with flags
        #[arg(long)]
        spectrum: bool,
        #[arg(long, default_value = "countable")]
        field: String,
    },
}

enum Failure {
    Input(String),
    Invariant(String),
    Violation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Invariant(_) => 2,
            Failure::Violation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Invariant(m) | Failure::Violation(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    let mut out = String::new();
    let result = run(cli, &mut out);
    // buffered output goes out in one write; a closed pipe is not an error
    if let Err(e) = io::Write::write_all(&mut io::stdout(), out.as_bytes()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn parse_field(spec: &str) -> Result<FieldDesc, Failure> {
    match spec {
        "countable" => Ok(FieldDesc::countable("Q")),
        "uncountable" => Ok(FieldDesc::uncountable("R")),
        _ => {
            if let Some(q) = spec.strip_prefix("finite:") {
                let q: u64 = q
                    .parse()
                    .map_err(|_| Failure::Input(format!("bad field size in {spec:?}")))?;
                FieldDesc::finite(q).map_err(|e| Failure::Input(e.to_string()))
            } else {
                Err(Failure::Input(format!(
                    "unknown field {spec:?} (expected finite:<q> | countable | uncountable)"
                )))
            }
        }
    }
}

fn load_graph(path: &PathBuf) -> Result<(Graph, Vec<u8>), Failure> {
    let raw =
        std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(raw.clone())
        .map_err(|_| Failure::Input(format!("{}: not valid UTF-8", path.display())))?;
    let graph = parse::parse_graph(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((graph, raw))
}

fn run(cli: Cli, out: &mut String) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Analyze { path, field, json } => {
            let (graph, raw) = load_graph(&path)?;
            let field = parse_field(&field)?;
            let doc = report::analyze(&graph, &field, &raw).map_err(|e| match e {
                report::AnalyzeError::Classifier(SpectrumError::InvariantViolation(m)) => {
                    Failure::Invariant(m)
                }
                other => Failure::Invariant(other.to_string()),
            })?;
            if json {
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&doc).expect("serializable report")
                );
            } else {
                out.push_str(&report::render_text(&doc, &graph));
            }
            if !doc.oracle.consistent {
                return Err(Failure::Invariant(
                    "oracle comparison found inconsistent classifications".into(),
                ));
            }
            Ok(())
        }
        Cmd::VerifyDm {
            path,
            fuzz,
            seed,
            max_vertices,
            max_edge_specs,
            omega_probability,
            field,
            json,
            inject_fault,
        } => {
            let field = parse_field(&field)?;
            let check = |g: &Graph, f: &FieldDesc| -> Vec<String> {
                if inject_fault {
                    vec!["injected fault (test hook)".into()]
                } else {
                    standard_checks(g, f)
                }
            };
            match (path, fuzz) {
                (Some(path), None) => {
                    let (graph, _) = load_graph(&path)?;
                    let violations = check(&graph, &field);
                    let dm = lpa_core::oracle::verify_dm(&graph, &field)
                        .map_err(|e| Failure::Invariant(e.to_string()))?;
                    if json {
                        let doc = serde_json::json!({
                            "rows": dm.rows,
                            "violations": violations,
                        });
                        let _ = writeln!(
                            out,
                            "{}",
                            serde_json::to_string_pretty(&doc).expect("serializable")
                        );
                    } else {
                        let _ = writeln!(out, "spectrum nodes: {}", dm.rows.len());
                        for row in &dm.rows {
                            let _ = writeln!(
                                out,
                                "  {}  primitive={} strongly={} lc(fast)={} lc(oracle)={} ci={} rational={}",
                                row.prime,
                                row.primitive,
                                row.strongly_primitive,
                                row.locally_closed_fast,
                                row.locally_closed_oracle,
                                row.completely_irreducible,
                                row.rationality,
                            );
                        }
                        if violations.is_empty() {
                            let _ = writeln!(out, "verdict: consistent");
                        } else {
                            for v in &violations {
                                let _ = writeln!(out, "violation: {v}");
                            }
                        }
                    }
                    if violations.is_empty() {
                        Ok(())
                    } else {
                        Err(Failure::Violation(format!(
                            "{} violation(s) found",
                            violations.len()
                        )))
                    }
                }
                (None, Some(count)) => {
                    let seed = seed.ok_or_else(|| {
                        Failure::Input("--fuzz requires an explicit --seed".into())
                    })?;
                    let params = FuzzParams {
                        max_vertices,
                        max_edge_specs,
                        omega_edge_probability: omega_probability,
                        count,
                        seed,
                    };
                    let summary = fuzz_with(&params, &field, check)
                        .map_err(|e| Failure::Input(e.to_string()))?;
                    if json {
                        let _ = writeln!(
                            out,
                            "{}",
                            serde_json::to_string_pretty(&summary).expect("serializable")
                        );
                    } else {
                        let _ = writeln!(
                            out,
                            "fuzz: {} graph(s), seed {}, ≤{} vertices, ≤{} edge specs, ω-probability {}",
                            summary.checked, params.seed, params.max_vertices,
                            params.max_edge_specs, params.omega_edge_probability,
                        );
                        let _ = writeln!(
                            out,
                            "passed: {}  failed: {}",
                            summary.passed, summary.failed
                        );
                        if let Some(s) = summary.first_failing_seed {
                            let _ = writeln!(out, "first failing seed: {s}");
                            for (seed, msgs) in &summary.failures {
                                for m in msgs {
                                    let _ = writeln!(out, "  seed {seed}: {m}");
                                }
                            }
                        }
                    }
                    if summary.clean() {
                        Ok(())
                    } else {
                        Err(Failure::Violation(format!(
                            "{} of {} graphs failed verification",
                            summary.failed, summary.checked
                        )))
                    }
                }
                (Some(_), Some(_)) => Err(Failure::Input(
                    "give either a graph file or --fuzz, not both".into(),
                )),
                (None, None) => Err(Failure::Input(
                    "give a graph file or --fuzz <count> --seed <s>".into(),
                )),
            }
        }
        Cmd::Example {
            name,
            windows,
            field,
            json,
        } => {
            let field = parse_field(&field)?;
            let report: ExampleReport = match name.as_str() {
                "lattice" => {
                    lattice_example_report(&windows).map_err(|e| Failure::Input(e.to_string()))?
                }
                "rational-plane" => rational_plane_report(&windows, &field)
                    .map_err(|e| Failure::Input(e.to_string()))?,
                other => {
                    return Err(Failure::Input(format!(
                        "unknown example {other:?} (expected lattice | rational-plane)"
                    )))
                }
            };
            if json {
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                );
            } else {
                out.push_str(&render_example(&report));
            }
            if report.all_checks_pass() {
                Ok(())
            } else {
                Err(Failure::Invariant("a window obligation was refuted".into()))
            }
        }
        Cmd::Dot {
            path,
            graph,
            spectrum,
            field,
        } => {
            if graph == spectrum {
                return Err(Failure::Input(
                    "choose exactly one of --graph or --spectrum".into(),
                ));
            }
            let (g, _) = load_graph(&path)?;
            if graph {
                out.push_str(&dot::graph_dot(&g));
                return Ok(());
            }
            let field = parse_field(&field)?;
            let poset = build_spectrum_poset(&g).map_err(|e| Failure::Invariant(e.to_string()))?;
            let reports: Vec<ClassificationReport> = poset
                .primes()
                .iter()
                .map(|p| classify_prime(&g, p, &field))
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::Invariant(e.to_string()))?;
            let refs: Vec<&ClassificationReport> = reports.iter().collect();
            out.push_str(&dot::spectrum_dot(&poset, &refs));
            Ok(())
        }
    }
}

fn render_example(report: &ExampleReport) -> String {
    let mut out = String::new();
    let windows: Vec<String> = report.windows.iter().map(|w| w.to_string()).collect();
    out.push_str(&format!(
        "example: {}  windows: {}\n",
        report.example,
        windows.join(",")
    ));
    if let Some(field) = &report.field {
        out.push_str(&format!(
            "field: {} ({:?})\n",
            field.label, field.cardinality
        ));
    }
    for check in &report.checks {
        let verdict = match &check.verdict {
            Verdict::Verified => format!("verified ({} obligations)", check.obligations),
            other => other.to_string(),
        };
        out.push_str(&format!("check: {} — {}\n", check.claim, verdict));
    }
    for c in &report.conclusions {
        out.push_str(&format!(
            "conclusion: {} — {:?}\n  basis: {}\n",
            c.statement, c.status, c.basis
        ));
    }
    out.push_str(&format!("note: {}\n", report.caveat));
    out
}
