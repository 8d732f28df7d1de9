use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use mmkit::bridge::{q2_of, q3_of, section_of_labels};
use mmkit::harness::{self, Bounds, CHECK_NAMES};
use mmkit::io::{self, Document};
use mmkit::{CheckReport, DeltaMatroid, MinorOp, Multimatroid, RibbonGraph};

#[derive(Parser)]
#[command(name = "mmkit", version, about = "Delta-matroids, multimatroids and ribbon graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a delta-matroid, multimatroid or ribbon graph file.
    Validate { file: PathBuf },
    /// Print structural properties as JSON.
    Props { file: PathBuf },
    /// Apply minor operations and print the result.
    Minor {
        file: PathBuf,
        #[arg(long = "delete", num_args = 1..)]
        delete: Vec<String>,
        #[arg(long = "contract", num_args = 1..)]
        contract: Vec<String>,
        #[arg(long = "twist-contract", num_args = 1..)]
        twist_contract: Vec<String>,
        /// Subtransversal `A` for the multimatroid minor `Q|A`.
        #[arg(long = "at", num_args = 1..)]
        at: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The 2-matroid of a delta-matroid.
    Q2 {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The tight 3-matroid of a vf-safe delta-matroid.
    Q3 {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The section of a 2-matroid by a transversal.
    Section {
        file: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        transversal: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The delta-matroid of a ribbon graph.
    RibbonDm {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a harness check by name, or `all`.
    Check {
        name: String,
        /// Use this size for every instance family.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Run a built-in reproduction.
    Example {
        #[arg(value_parser = ["paper-q", "ribbon-counterexample"])]
        name: String,
    },
}

enum Outcome {
    Pass,
    Violation,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(io::parse_document(&text)?)
}

fn read_delta(path: &Path) -> Result<DeltaMatroid> {
    match read(path)? {
        Document::Delta(doc) => Ok(doc.to_delta_matroid()?),
        _ => bail!("{} is not a delta-matroid document", path.display()),
    }
}

fn emit(value: &Value, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn report(r: &CheckReport) -> Result<Outcome> {
    emit(&serde_json::to_value(r)?, None)?;
    Ok(if r.passed() { Outcome::Pass } else { Outcome::Violation })
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Props { file } => {
            let value = match read(&file)? {
                Document::Delta(doc) => delta_props(&doc.to_delta_matroid()?),
                Document::Multimatroid(doc) => mm_props(&doc.to_multimatroid()?),
                Document::Ribbon(doc) => ribbon_props(&RibbonGraph::from_doc(doc)?),
            };
            emit(&value, None)?;
            Ok(Outcome::Pass)
        }
        Command::Minor {
            file,
            delete,
            contract,
            twist_contract,
            at,
            output,
        } => {
            let ops: Vec<(&str, MinorOp)> = delete
                .iter()
                .map(|l| (l.as_str(), MinorOp::Delete))
                .chain(contract.iter().map(|l| (l.as_str(), MinorOp::Contract)))
                .chain(twist_contract.iter().map(|l| (l.as_str(), MinorOp::TwistContract)))
                .collect();
            let value = match read(&file)? {
                Document::Delta(doc) => {
                    if !at.is_empty() {
                        bail!("--at applies to multimatroids");
                    }
                    io::delta_to_value(&doc.to_delta_matroid()?.apply_ops(&ops)?)
                }
                Document::Multimatroid(doc) => {
                    if !ops.is_empty() {
                        bail!("multimatroid minors are taken with --at");
                    }
                    io::mm_to_value(&doc.to_multimatroid()?.minor_of_labels(&at)?)
                }
                Document::Ribbon(doc) => {
                    if !at.is_empty() {
                        bail!("--at applies to multimatroids");
                    }
                    let mut g = RibbonGraph::from_doc(doc)?;
                    for (label, op) in ops {
                        g = match op {
                            MinorOp::Delete => g.delete_edge(label)?,
                            MinorOp::Contract => g.contract_edge(label)?,
                            MinorOp::TwistContract => g.twist_contract(label)?,
                        };
                    }
                    io::ribbon_to_value(&g)
                }
            };
            emit(&value, output.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::Q2 { file, output } => {
            emit(&io::mm_to_value(&q2_of(&read_delta(&file)?)?), output.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::Q3 { file, output } => {
            emit(&io::mm_to_value(&q3_of(&read_delta(&file)?)?), output.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::Section {
            file,
            transversal,
            output,
        } => {
            let q = match read(&file)? {
                Document::Multimatroid(doc) => doc.to_multimatroid()?,
                _ => bail!("{} is not a multimatroid document", file.display()),
            };
            emit(&io::delta_to_value(&section_of_labels(&q, &transversal)?), output.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::RibbonDm { file, output } => {
            let g = match read(&file)? {
                Document::Ribbon(doc) => RibbonGraph::from_doc(doc)?,
                _ => bail!("{} is not a ribbon graph document", file.display()),
            };
            emit(&io::delta_to_value(&g.delta_matroid()), output.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::Check { name, max_n } => {
            let bounds = max_n.map_or_else(Bounds::default, Bounds::uniform);
            if name == "all" {
                let mut reports = Vec::new();
                let mut passed = true;
                for check in CHECK_NAMES {
                    let r = harness::run_check(check, &bounds)?;
                    passed &= r.passed();
                    eprintln!("{}", r.summary());
                    reports.push(serde_json::to_value(&r)?);
                }
                emit(&Value::Array(reports), None)?;
                return Ok(if passed { Outcome::Pass } else { Outcome::Violation });
            }
            report(&harness::run_check(&name, &bounds)?)
        }
        Command::Example { name } => report(&harness::run_check(&name, &Bounds::default())?),
    }
}

fn validate(file: &Path) -> Result<Outcome> {
    let mut r = CheckReport::new("validate");
    match read(file)? {
        Document::Delta(doc) => {
            let system = doc.to_set_system()?;
            let violation = system.exchange_violation();
            r.assert(violation.is_none(), || {
                let v = violation.as_ref().expect("violation present");
                json!({
                    "axiom": "symmetric exchange",
                    "F1": v.f1_labels(),
                    "F2": v.f2_labels(),
                    "x": v.x_label(),
                })
            });
        }
        Document::Multimatroid(doc) => {
            let (partition, bases) = doc.to_parts()?;
            match Multimatroid::from_bases(partition, bases) {
                Ok(q) => r.merge(q.verify_axioms()),
                Err(e) => r.assert(false, || json!({"error": e.to_string()})),
            }
        }
        Document::Ribbon(doc) => {
            let g = RibbonGraph::from_doc(doc)?;
            r.assert(g.delta_matroid().as_set_system().is_delta_matroid(), || {
                json!({"axiom": "symmetric exchange on D(G)"})
            });
        }
    }
    r.check = "validate".into();
    report(&r)
}

fn labels(sets: Vec<Vec<String>>) -> Value {
    json!(sets)
}

fn delta_props(d: &DeltaMatroid) -> Value {
    let q2 = q2_of(d).ok();
    json!({
        "kind": "delta-matroid",
        "elements": d.elements(),
        "feasible_sets": d.feasible().len(),
        "even": d.is_even(),
        "connected": d.is_connected(),
        "vf_safe": d.is_vf_safe().ok(),
        "matroid": d.is_matroid(),
        "tight": q2.as_ref().map(Multimatroid::is_tight),
        "separators": labels(d.separators().into_iter().map(|x| d.labels_of(x).into_iter().map(String::from).collect()).collect()),
    })
}

fn mm_props(q: &Multimatroid) -> Value {
    let p = q.partition();
    json!({
        "kind": "multimatroid",
        "classes": p.classes(),
        "bases": q.num_bases(),
        "nondegenerate": q.is_nondegenerate(),
        "tight": q.is_tight(),
        "connected": q.is_connected(),
        "separators": labels(q.separator_labels()),
        "circuits": labels(q.circuits().iter().map(|c| p.labels_of(c).into_iter().map(String::from).collect()).collect()),
    })
}

fn ribbon_props(g: &RibbonGraph) -> Value {
    let d = g.delta_matroid();
    json!({
        "kind": "ribbon-graph",
        "vertices": g.num_vertices(),
        "edges": g.edge_labels(),
        "orientable": g.is_orientable(),
        "connected": g.is_connected(),
        "two_connected": g.is_2_connected(),
        "delta_matroid": delta_props(&d),
    })
}
