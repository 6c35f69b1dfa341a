use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cplx1::acomplex::{export_complex, leaf_roofs, ExportFormat};
use cplx1::coxiter::{iterate_chain_from_data, Terminal};
use cplx1::data::{parse_validate, DefiningData, Normal};
use cplx1::linalg::fmt_rat;
use cplx1::registry::{self, Params};
use cplx1::report::analyze;
use cplx1::{Error, Result};

// stdout errors such as a closed pipe are not worth a panic
macro_rules! say {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! say_raw {
    ($($t:tt)*) => {{
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "cplx1", version, about = "Exact analysis of affine varieties with a torus action of complexity one")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a defining-data document
    Validate { file: String },
    /// Full analysis report
    Analyze {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Roof pieces of the anticanonical complex
    Acomplex {
        file: String,
        /// write an OFF mesh to this path
        #[arg(long, conflicts_with = "json")]
        mesh: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Iterated Cox ring chain
    Iterate {
        file: String,
        #[arg(long, default_value_t = 10)]
        max_steps: usize,
        #[arg(long)]
        json: bool,
    },
    /// Classification families
    Registry {
        #[command(subcommand)]
        action: RegistryAction,
    },
    /// Check every registry family and near miss
    VerifyCdv {
        /// bound on every family parameter (default 6, family 9 capped at zeta <= 5)
        #[arg(long)]
        max_param: Option<i64>,
    },
    /// Bounded brute-force search over 4 x 4 matrices
    Search {
        #[arg(long, default_value_t = 1)]
        bound: i64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum RegistryAction {
    List,
    Emit {
        id: String,
        /// parameter assignment NAME=VALUE, repeatable
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, i64)>,
    },
}

fn parse_param(s: &str) -> std::result::Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let v = v.trim().parse().map_err(|_| format!("{v:?} is not an integer"))?;
    Ok((k.trim().to_string(), v))
}

fn read_input(file: &str) -> Result<String> {
    let mut s = String::new();
    let r = if file == "-" { std::io::stdin().read_to_string(&mut s).map(|_| ()) } else { std::fs::read_to_string(file).map(|t| s = t) };
    r.map_err(|e| Error::Malformed(format!("cannot read {file}: {e}")))?;
    Ok(s)
}

fn load(file: &str) -> Result<DefiningData> {
    parse_validate(&read_input(file)?)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Validate { file } => {
            let d = load(&file)?;
            say!("valid: {}", d.exponents);
            let normal = match d.normalize()?.0 {
                Normal::Ring(n) => n.exponents.to_string(),
                Normal::Polynomial(k) => format!("polynomial({k})"),
            };
            say!("normalized: {normal}");
        }
        Command::Analyze { file, json } => {
            let r = analyze(&load(&file)?)?;
            if json {
                say!("{}", r.to_json_string());
            } else {
                say_raw!("{r}");
            }
        }
        Command::Acomplex { file, mesh, json } => {
            let d = load(&file)?;
            if let Some(path) = mesh {
                let off = export_complex(&d, ExportFormat::Off)?;
                std::fs::write(&path, off).map_err(|e| Error::Internal(format!("cannot write {}: {e}", path.display())))?;
                say!("wrote {}", path.display());
            } else if json {
                say!("{}", export_complex(&d, ExportFormat::Json)?);
            } else {
                for roof in leaf_roofs(&d)? {
                    let vs: Vec<String> = roof
                        .vertices()
                        .iter()
                        .map(|v| format!("({})", v.iter().map(fmt_rat).collect::<Vec<_>>().join(",")))
                        .collect();
                    say!("{}: {}", roof.leaf, vs.join(" "));
                }
            }
        }
        Command::Iterate { file, max_steps, json } => {
            let chain = iterate_chain_from_data(&load(&file)?, max_steps)?;
            if json {
                say!("{}", serde_json::to_string_pretty(&chain.to_json()).expect("json values serialize"));
            } else {
                let states: Vec<String> = chain.states.iter().map(|s| s.to_string()).collect();
                say!("{}", states.join(" -> "));
                match chain.terminal {
                    Terminal::Factorial => say!("terminal: factorial"),
                    Terminal::Polynomial(k) => say!("terminal: polynomial({k})"),
                }
            }
        }
        Command::Registry { action: RegistryAction::List } => {
            for e in registry::entries() {
                let params: Vec<String> = e.params.iter().map(|p| format!("{}>={}", p.name, p.min)).collect();
                say!("{:<10} {:<16} [{}] {}", e.id, format!("{:?}", e.kind), params.join(" "), e.cdv_type);
            }
        }
        Command::Registry { action: RegistryAction::Emit { id, params } } => {
            let given: Params = params.into_iter().collect();
            let q = registry::resolve_params(&id, &given)?;
            say!("{}", registry::instantiate(&id, &q)?.to_json_string());
        }
        Command::VerifyCdv { max_param } => {
            let mut ok = true;
            for e in registry::entries() {
                let bound = max_param.unwrap_or(registry::default_bound(e.id));
                let r = registry::verify_family(e.id, bound)?;
                match &r.failure {
                    None => say!("PASS {:<10} {} instances", e.id, r.checked),
                    Some((q, why)) => {
                        ok = false;
                        say!("FAIL {:<10} at {}: {why}", e.id, registry::fmt_params(q));
                    }
                }
            }
            for nm in registry::near_misses() {
                let s = cplx1::acomplex::singularity_type(&nm.data)?;
                if !s.cdv.is_yes() && s.cdv_witnesses.contains(&nm.witness) {
                    say!("PASS near miss {}", nm.label);
                } else {
                    ok = false;
                    say!("FAIL near miss {}", nm.label);
                }
            }
            if !ok {
                return Ok(3);
            }
        }
        Command::Search { bound, json } => {
            let r = registry::search(bound)?;
            if json {
                say!("{}", serde_json::to_string_pretty(&r.to_json()).expect("json values serialize"));
            } else {
                say!("candidates {}, cDV survivors {}, classes {}", r.candidates, r.survivors, r.hits.len());
                for h in &r.hits {
                    let m = if h.matches.is_empty() { "UNMATCHED".to_string() } else { h.matches.join(" ") };
                    say!("{} {} zeta={}: {}", h.fingerprint.exponents, h.fingerprint.class_group, h.fingerprint.zeta, m);
                }
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
