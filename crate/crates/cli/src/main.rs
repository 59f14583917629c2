//! `ffbif`: structure checks, branch prediction and numerical verification
//! for feedforward coupled-cell networks.

mod reproduce;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ffbif_core::dynamics::{verify, ResponsePolynomial, SweepConfig, Thresholds};
use ffbif_core::linear::{classify_criticality, DEFAULT_TOL};
use ffbif_core::predictor::{all_branches_with, BranchCatalog, Direction, PredictError};
use ffbif_core::{exec, report, Execution, Network, SystemParams};

const EXIT_PARSE: u8 = 1;
const EXIT_NOT_FEEDFORWARD: u8 = 2;
const EXIT_WRONG_SCENARIO: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;
const EXIT_VERIFY_FAILED: u8 = 5;

#[derive(Parser)]
#[command(name = "ffbif", version, about = "Steady-state bifurcations of feedforward coupled-cell networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Feedforward test, maximal cells, loop types and topological order.
    Check {
        /// Network file (same as --net).
        file: Option<PathBuf>,
        #[arg(long)]
        net: Option<PathBuf>,
    },
    /// Classify the linearization at the origin.
    Analyze(JetArgs),
    /// List every bifurcating branch with its leading-order asymptotics.
    Predict {
        #[command(flatten)]
        jet: JetArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Exit 4 when any root or coefficient is degenerate.
        #[arg(long)]
        strict: bool,
    },
    /// Refine every predicted branch with Newton and fit power laws.
    Verify {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        response: PathBuf,
        #[command(flatten)]
        out: OutArgs,
        /// Perturb the catalog before checking it.
        #[arg(long)]
        inject_error: bool,
    },
    /// Regenerate the data and plot script for a built-in example.
    Reproduce {
        /// One of fig2, fig3a, fig3b, fig5a, fig5b.
        preset: String,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct JetArgs {
    #[arg(long)]
    net: PathBuf,
    /// 2-jet parameters.
    #[arg(long, conflicts_with = "response")]
    params: Option<PathBuf>,
    /// Full response polynomial; its 2-jet is used.
    #[arg(long)]
    response: Option<PathBuf>,
    /// Genericity tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct OutArgs {
    /// Output directory; created if missing.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
    direction: DirectionArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Pos,
    Neg,
    Both,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Pos => Direction::Positive,
            DirectionArg::Neg => Direction::Negative,
            DirectionArg::Both => Direction::Both,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    if let Ok(v) = std::env::var("FFBIF_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                exec::init_threads(n);
            }
            _ => {
                eprintln!("error: FFBIF_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(EXIT_PARSE);
            }
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_PARSE)
        }
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Check { file, net } => {
            let path = match (file, net) {
                (Some(p), None) | (None, Some(p)) => p,
                (Some(_), Some(_)) => bail!("give the network either positionally or with --net"),
                (None, None) => bail!("a network file is required"),
            };
            cmd_check(&path)
        }
        Command::Analyze(jet) => cmd_analyze(&jet),
        Command::Predict { jet, out, strict } => cmd_predict(&jet, &out, strict),
        Command::Verify {
            net,
            response,
            out,
            inject_error,
        } => cmd_verify(&net, &response, &out, inject_error),
        Command::Reproduce { preset, out } => reproduce::run(&preset, &out),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_network(path: &Path) -> Result<Network> {
    Network::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_response(path: &Path, net: &Network) -> Result<ResponsePolynomial> {
    let poly = ResponsePolynomial::from_json(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    poly.check_arity(net.n_inputs())?;
    Ok(poly)
}

fn load_jet(args: &JetArgs, net: &Network) -> Result<SystemParams> {
    if !(args.tol > 0.0) {
        bail!("--tol must be positive");
    }
    let params = match (&args.params, &args.response) {
        (Some(p), None) => SystemParams::from_json(&read(p)?)
            .with_context(|| format!("parsing {}", p.display()))?,
        (None, Some(r)) => load_response(r, net)?.jet(net.n_inputs())?,
        _ => bail!("exactly one of --params and --response is required"),
    };
    params.check_arity(net)?;
    Ok(params)
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn cmd_check(path: &Path) -> Result<u8> {
    let net = load_network(path)?;
    let lt = net.loop_types();
    println!("cells={} inputs={}", net.cells(), net.n_inputs());
    let Ok(order) = net.partial_order() else {
        println!("feedforward=false");
        return Ok(EXIT_NOT_FEEDFORWARD);
    };
    println!("feedforward=true");
    println!("maximal={}", net.maximal_cells().label());
    println!("loop_types={}", lt.classes.len());
    for (k, class) in lt.classes.iter().enumerate() {
        let cells: ffbif_core::CellSet = class.iter().copied().collect();
        let inputs: Vec<String> = lt.sets[class[0]].iter().map(|i| (i + 1).to_string()).collect();
        println!("  type {}: cells {} fixed by inputs {{{}}}", k + 1, cells.label(), inputs.join(","));
    }
    let topo: Vec<String> = order.topo.iter().map(|p| (p + 1).to_string()).collect();
    println!("topological_order={}", topo.join(","));
    Ok(0)
}

fn cmd_analyze(args: &JetArgs) -> Result<u8> {
    let net = load_network(&args.net)?;
    if !net.is_feedforward() {
        eprintln!("network is not feedforward");
        return Ok(EXIT_NOT_FEEDFORWARD);
    }
    let params = load_jet(args, &net)?;
    let crit = classify_criticality(&net, &params, args.tol);
    let lt = net.loop_types();
    match args.format {
        Format::Json => {
            let classes: Vec<serde_json::Value> = lt
                .classes
                .iter()
                .zip(&crit.class_sums)
                .map(|(c, s)| {
                    serde_json::json!({
                        "cells": c.iter().map(|p| p + 1).collect::<Vec<_>>(),
                        "sum": s,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "scenario": crit.scenario,
                "critical_cells": crit.critical_cells,
                "classes": classes,
                "tolerance": crit.tolerance,
                "maximal": net.maximal_cells(),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Format::Csv => {
            println!("scenario={:?}", crit.scenario);
            println!("critical={}", crit.critical_cells.label());
            println!("maximal={}", net.maximal_cells().label());
            for (class, sum) in lt.classes.iter().zip(&crit.class_sums) {
                let cells: ffbif_core::CellSet = class.iter().copied().collect();
                println!("  class {}: eigenvalue {sum}", cells.label());
            }
        }
    }
    Ok(0)
}

/// Maps prediction errors that stop a whole catalog onto exit codes.
fn catalog_or_exit(net: &Network, params: &SystemParams, tol: f64) -> Result<std::result::Result<BranchCatalog, u8>> {
    match all_branches_with(net, params, tol, Execution::default()) {
        Ok(c) => Ok(Ok(c)),
        Err(e @ PredictError::WrongScenario(_)) => {
            eprintln!("{e}");
            Ok(Err(EXIT_WRONG_SCENARIO))
        }
        Err(PredictError::NotFeedforward) => {
            eprintln!("network is not feedforward");
            Ok(Err(EXIT_NOT_FEEDFORWARD))
        }
        Err(e @ PredictError::Params(_)) => Err(e.into()),
        Err(e) => {
            eprintln!("{e}");
            Ok(Err(EXIT_DEGENERATE))
        }
    }
}

fn cmd_predict(args: &JetArgs, out: &OutArgs, strict: bool) -> Result<u8> {
    let net = load_network(&args.net)?;
    let params = load_jet(args, &net)?;
    let catalog = match catalog_or_exit(&net, &params, args.tol)? {
        Ok(c) => c,
        Err(code) => return Ok(code),
    };
    let filter = out.direction.into();
    let summary = report::catalog_summary(&net, &catalog);
    print!("{summary}");
    if let Some(dir) = &out.out {
        match args.format {
            Format::Csv => write_out(dir, "catalog.csv", &report::catalog_csv(&catalog, filter))?,
            Format::Json => write_out(dir, "catalog.json", &report::catalog_json(&catalog, filter))?,
        }
        write_out(dir, "summary.txt", &summary)?;
    }
    if strict && catalog.has_degeneracy() {
        return Ok(EXIT_DEGENERATE);
    }
    Ok(0)
}

/// Scales every nonzero leading coefficient so no branch can match.
fn inject_error(catalog: &mut BranchCatalog) {
    for b in &mut catalog.branches {
        for c in &mut b.cells {
            c.coeff *= 1.3;
        }
    }
}

fn cmd_verify(net_path: &Path, response: &Path, out: &OutArgs, perturb: bool) -> Result<u8> {
    let net = load_network(net_path)?;
    let poly = load_response(response, &net)?;
    let params = poly.jet(net.n_inputs())?;
    let mut catalog = match catalog_or_exit(&net, &params, DEFAULT_TOL)? {
        Ok(c) => c,
        Err(code) => return Ok(code),
    };
    if perturb {
        inject_error(&mut catalog);
    }
    let cfg = SweepConfig::paper_protocol(vec![0.0; net.cells()]);
    let rep = verify(
        &net,
        &poly,
        &catalog,
        &cfg,
        &Thresholds::default(),
        out.direction.into(),
        Execution::default(),
    )?;
    print!("{}", report::verification_text(&catalog, &rep));
    if let Some(dir) = &out.out {
        write_out(dir, "verify_points.csv", &report::verification_points_csv(&rep))?;
        write_out(dir, "verify_summary.csv", &report::verification_summary_csv(&rep))?;
    }
    let failed = rep.branches.iter().filter(|b| !b.pass).count();
    println!("{} of {} branch sides pass", rep.branches.len() - failed, rep.branches.len());
    Ok(if rep.pass { 0 } else { EXIT_VERIFY_FAILED })
}
