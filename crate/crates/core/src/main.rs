use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hypsurf::assembler::{realize_diagram, Slit};
use hypsurf::blocks::{construct_m, construct_p, BlockSpec};
use hypsurf::diagram::{build_m_central, build_p_central, canonical_form, validate_diagram, Diagram, StratumKind};
use hypsurf::dissect::extract_diagram;
use hypsurf::field::QuadExt;
use hypsurf::flow::{decompose_vertical, default_bound, PieceHint};
use hypsurf::involution::Involution;
use hypsurf::surface::{validate_surface, PolygonNet, SurfaceError};
use hypsurf::svg::{render_diagram, render_surface};
use hypsurf::verifier::verify_theorem;

#[derive(Parser)]
#[command(
    name = "hypsurf",
    version,
    about = "Hyperelliptic translation surfaces and their vertical flow"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    P,
    M,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    PCentral,
    MCentral,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stratum {
    Single,
    Double,
}

#[derive(Subcommand)]
enum Command {
    /// Print the surface JSON of a building block.
    Block {
        #[arg(value_enum, ignore_case = true)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "√2")]
        alpha: String,
        /// Write the involution and block metadata here.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Realize a diagram; prints the surface JSON.
    Assemble {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long, default_value = "√2")]
        alpha: String,
        /// Write the involution, provenance, slits and hints here.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Decompose the vertical flow of a surface into components.
    Classify {
        #[arg(long)]
        surface: PathBuf,
        /// Length bound for separatrices; defaults to 100 times the perimeter.
        #[arg(long)]
        bound: Option<String>,
        /// Metadata written by `block` or `assemble`.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Print a diagram from one of the two standard families.
    Diagram {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: u32,
    },
    /// Realize and check witnesses for every component count in a stratum.
    VerifyTheorem {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_enum)]
        stratum: Stratum,
        #[arg(long, default_value = "√2")]
        alpha: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a surface or diagram JSON file as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        meta: Option<PathBuf>,
    },
}

#[derive(Serialize, Deserialize)]
struct Meta {
    involution: Involution,
    #[serde(default)]
    hints: Vec<PieceHint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spec: Option<BlockSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slits: Option<Vec<Slit>>,
}

enum Failure {
    /// Bad input: exit code 2.
    Usage(String),
    /// A check did not pass: exit code 1.
    Check(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn check(e: impl ToString) -> Failure {
    Failure::Check(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Prints to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn parse_alpha(text: &str) -> Result<QuadExt, Failure> {
    text.parse::<QuadExt>().map_err(|e| usage(format!("alpha: {e}")))
}

/// Malformed JSON is a usage error; a well-formed but inconsistent net is a
/// validation failure.
fn parse_surface(text: &str, path: &Path) -> Result<PolygonNet, Failure> {
    PolygonNet::from_json(text).map_err(|e| match e {
        SurfaceError::Invalid(_) => usage(format!("{}: {e}", path.display())),
        _ => check(format!("{}: {e}", path.display())),
    })
}

fn read_surface(path: &Path) -> Result<PolygonNet, Failure> {
    parse_surface(&read(path)?, path)
}

fn read_meta(path: &Path) -> Result<Meta, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_meta(path: &Path, meta: &Meta) -> Outcome {
    write(path, &serde_json::to_string_pretty(meta).expect("serializable"))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Block { kind, n, alpha, meta } => {
            let alpha = parse_alpha(&alpha)?;
            let block = match kind {
                Kind::P => construct_p(n, alpha.d()),
                Kind::M => construct_m(n, &alpha),
            }
            .map_err(usage)?;
            emit(&block.surface.to_json());
            if let Some(path) = meta {
                write_meta(
                    &path,
                    &Meta {
                        involution: block.involution.clone(),
                        hints: block.spec.hint().into_iter().collect(),
                        spec: Some(block.spec.clone()),
                        provenance: None,
                        slits: None,
                    },
                )?;
            }
            Ok(())
        }
        Command::Assemble { diagram, alpha, meta } => {
            let alpha = parse_alpha(&alpha)?;
            let dg = Diagram::from_json(&read(&diagram)?).map_err(usage)?;
            let a = realize_diagram(&dg, &alpha).map_err(check)?;
            emit(&a.surface.to_json());
            if let Some(path) = meta {
                write_meta(
                    &path,
                    &Meta {
                        involution: a.involution.clone(),
                        hints: a.hints.clone(),
                        spec: None,
                        provenance: Some(a.provenance.clone()),
                        slits: Some(a.slits.clone()),
                    },
                )?;
            }
            Ok(())
        }
        Command::Classify { surface, bound, meta } => {
            let s = read_surface(&surface)?;
            let meta = meta.as_deref().map(read_meta).transpose()?;
            let rep = validate_surface(&s);
            if !rep.is_valid() {
                return Err(check(format!("invalid surface: {:?}", rep.violations)));
            }
            let bound = match bound {
                Some(b) => b.parse::<QuadExt>().map_err(|e| usage(format!("bound: {e}")))?,
                None => default_bound(&s),
            };
            let hints = meta.as_ref().map(|m| m.hints.as_slice()).unwrap_or(&[]);
            let dec = decompose_vertical(&s, &bound, hints).map_err(check)?;
            let mut out = serde_json::to_value(dec.report()).expect("serializable");
            if let Some(m) = &meta {
                if let Ok(dg) = extract_diagram(&s, &m.involution, &dec) {
                    out["diagram"] = serde_json::to_value(&dg).expect("serializable");
                    out["canonical"] = canonical_form(&dg).into();
                }
            }
            emit(&serde_json::to_string_pretty(&out).expect("serializable"));
            Ok(())
        }
        Command::Diagram { family, k, p, m } => {
            let dg = match family {
                Family::PCentral => build_p_central(k, p, m),
                Family::MCentral => build_m_central(k, p, m),
            }
            .map_err(check)?;
            emit(&dg.to_json());
            Ok(())
        }
        Command::VerifyTheorem {
            genus,
            stratum,
            alpha,
            out,
        } => {
            if genus == 0 {
                return Err(usage("genus must be positive"));
            }
            let alpha = parse_alpha(&alpha)?;
            let kind = match stratum {
                Stratum::Single => StratumKind::SingleZero,
                Stratum::Double => StratumKind::DoubleZero,
            };
            let run = verify_theorem(genus, kind, &alpha);
            let evidence = serde_json::to_string_pretty(&run.report).expect("serializable");
            if let Some(dir) = out {
                fs::create_dir_all(&dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
                write(&dir.join("evidence.json"), &evidence)?;
                for w in &run.witnesses {
                    let stem = format!("g{genus}_{kind}_p{}_m{}_{}", w.pair.0, w.pair.1, w.builder.name());
                    write(&dir.join(format!("{stem}.diagram.json")), &w.diagram.to_json())?;
                    write(&dir.join(format!("{stem}.diagram.svg")), &render_diagram(&w.diagram))?;
                    if let Some(a) = &w.assembly {
                        write(&dir.join(format!("{stem}.surface.json")), &a.surface.to_json())?;
                        write(
                            &dir.join(format!("{stem}.surface.svg")),
                            &render_surface(&a.surface, Some(&a.involution)),
                        )?;
                    }
                }
            }
            emit(&evidence);
            if run.report.passed {
                Ok(())
            } else {
                Err(check("theorem evidence failed"))
            }
        }
        Command::Render { input, svg, meta } => {
            let text = read(&input)?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(usage)?;
            let picture = if value.get("vertices").is_some() {
                let dg = Diagram::from_json(&text).map_err(usage)?;
                let rep = validate_diagram(&dg);
                if !rep.is_valid() {
                    return Err(check(format!("invalid diagram: {:?}", rep.violations)));
                }
                render_diagram(&dg)
            } else {
                let s = parse_surface(&text, &input)?;
                let meta = meta.as_deref().map(read_meta).transpose()?;
                render_surface(&s, meta.as_ref().map(|m| &m.involution))
            };
            write(&svg, &picture)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("failed: {msg}");
            ExitCode::from(1)
        }
    }
}
