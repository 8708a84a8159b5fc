mod input;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tropical_pencil::compat::{
    construct_configuration, enumerate_types, incompatible_quartet, realize_type, RealizeOptions,
};
use tropical_pencil::json::{
    cell_to_json, config_to_json, curve_to_json, error_to_json, generality_to_json, geometry_to_json, line_to_json,
    plucker_to_json, subdivision_to_json, support_to_json, topology_to_json,
};
use tropical_pencil::oracle::{brute_tropdet, perturbed_pencil, sampled_fixed};
use tropical_pencil::pencil::{fixed_locus, is_fixed, locus_union, CellGeometry};
use tropical_pencil::primitives::{ProjPoint, Rational};
use tropical_pencil::stable::{is_general, minor, plucker_vector, stable_pencil, tropdet, value_matrix};
use tropical_pencil::subdivision::{dual_curve, is_maximal, regular_subdivision, MaximalityMode};
use tropical_pencil::tree::plucker_to_tree;
use tropical_pencil::{Error, Result};

use input::Job;

#[derive(Parser)]
#[command(name = "tpencil", version, about = "Linear pencils of tropical plane curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Job JSON: a file path, `-` for stdin, or an inline object.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Also write a figure (curve and fixed-locus only).
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Cross-check against the brute-force oracle; mismatches fail.
    #[arg(long, global = true)]
    oracle: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Strict)]
    mode: Mode,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Lenient,
}

impl From<Mode> for MaximalityMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => MaximalityMode::Strict,
            Mode::Lenient => MaximalityMode::Lenient,
        }
    }
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Dual curve of `support` with coefficients `coeffs`.
    Curve,
    /// Regular subdivision induced by `coeffs`.
    Subdivision,
    /// Generality verdict for `configuration`, with Plücker vector and line.
    CheckGeneral,
    /// Stable pencil through `configuration`.
    StablePencil,
    /// Fixed locus of the pencil `tree`.
    FixedLocus,
    /// Whether `point` is a fixed point of `tree`.
    IsFixed,
    /// A general configuration whose stable pencil is `tree`.
    ConstructConfig,
    /// All trivalent types on |support| leaves with compatibility flags.
    EnumerateTypes,
    /// A line of type `type_id` (or `tree`) compatible with `support`.
    RealizeType,
    /// Hull-edge quartet check of `tree` against `support`.
    CompatCheck,
}

struct Output {
    json: Value,
    svg: Option<String>,
}

impl From<Value> for Output {
    fn from(json: Value) -> Self {
        Output { json, svg: None }
    }
}

fn mismatch(what: &str) -> Error {
    Error::VerificationFailed(format!("oracle disagrees: {what}"))
}

fn run(cli: &Cli) -> Result<Output> {
    let job = Job::load(cli.input.as_deref())?;
    let a = job.support()?;
    let mode = MaximalityMode::from(cli.mode);
    let out: Output = match cli.command {
        Command::Curve => {
            let g = dual_curve(&a, &job.coeffs(a.len())?)?;
            let mut v = curve_to_json(&g);
            v["maximal"] = json!(is_maximal(&g.subdivision, mode));
            Output { svg: Some(svg::curve(&a, &g)), json: v }
        }
        Command::Subdivision => {
            let s = regular_subdivision(&a, &job.coeffs(a.len())?)?;
            let mut v = subdivision_to_json(&s);
            v["maximal"] = json!(is_maximal(&s, mode));
            v.into()
        }
        Command::CheckGeneral => {
            let config = job.configuration()?;
            let verdict = is_general(&a, &config)?;
            if cli.oracle {
                let m = value_matrix(&a, &config)?;
                for i in 0..a.len() {
                    for j in i + 1..a.len() {
                        let sub = minor(&m, i, j);
                        let (value, count) = brute_tropdet(&sub)?;
                        let fast = tropdet(&sub);
                        if value != fast.value || (count == 1) != fast.unique {
                            return Err(mismatch(&format!("tropical minor ({}, {})", i + 1, j + 1)));
                        }
                    }
                }
            }
            let p = plucker_vector(&a, &config)?;
            let mut v = generality_to_json(&verdict);
            v["line"] = plucker_to_tree(&p).map(|l| line_to_json(&l)).unwrap_or(Value::Null);
            v["plucker"] = plucker_to_json(&p);
            v.into()
        }
        Command::StablePencil => {
            let config = job.configuration()?;
            let line = stable_pencil(&a, &config)?;
            if cli.oracle && perturbed_pencil(&a, &config, &oracle_seeds(cli.seed))? != line {
                return Err(mismatch("stable pencil"));
            }
            line_to_json(&line).into()
        }
        Command::FixedLocus => {
            let line = job.tree()?.into_line()?;
            let cells = fixed_locus(&line, &a)?;
            let pieces = locus_union(&cells);
            if cli.oracle {
                for p in pieces.iter().flat_map(sample_points) {
                    if !sampled_fixed(&line, &a, &p)? {
                        return Err(mismatch("fixed locus"));
                    }
                }
            }
            let config = if job.has("configuration") { job.configuration()? } else { Vec::new() };
            Output {
                svg: Some(svg::locus(&pieces, &config)),
                json: json!({
                    "cells": cells.iter().map(|c| cell_to_json(&line, c)).collect::<Vec<_>>(),
                    "union": pieces.iter().map(geometry_to_json).collect::<Vec<_>>(),
                }),
            }
        }
        Command::IsFixed => {
            let line = job.tree()?.into_line()?;
            let p = job.point()?;
            let fixed = is_fixed(&line, &a, &p)?;
            if cli.oracle && sampled_fixed(&line, &a, &p)? != fixed {
                return Err(mismatch("is-fixed"));
            }
            json!({ "fixed": fixed }).into()
        }
        Command::ConstructConfig => {
            let line = job.tree()?.into_line()?;
            let config = construct_configuration(&line, &a)?;
            if cli.oracle && perturbed_pencil(&a, &config, &oracle_seeds(cli.seed))? != line {
                return Err(mismatch("stable pencil of the constructed configuration"));
            }
            json!({ "support": support_to_json(&a), "configuration": config_to_json(&config) }).into()
        }
        Command::EnumerateTypes => {
            let types = enumerate_types(a.len())?;
            let listed: Vec<Value> = types
                .iter()
                .enumerate()
                .map(|(k, t)| {
                    let q = incompatible_quartet(t, &a);
                    json!({
                        "id": k + 1,
                        "tree": topology_to_json(t),
                        "compatible": q.is_none(),
                        "quartet": q.map(|q| q.map(|i| i + 1)),
                    })
                })
                .collect();
            let compatible = listed.iter().filter(|t| t["compatible"] == json!(true)).count();
            json!({ "total": types.len(), "compatible": compatible, "types": listed }).into()
        }
        Command::RealizeType => {
            let topo = if job.has("tree") {
                job.tree()?.topology().clone()
            } else {
                let id = job.type_id()?;
                let types = enumerate_types(a.len())?;
                if id == 0 || id > types.len() {
                    return Err(Error::InvalidInput(format!("type_id {id} outside 1..={}", types.len())));
                }
                types[id - 1].clone()
            };
            let opts = RealizeOptions { seed: cli.seed, ..RealizeOptions::default() };
            let line = realize_type(&a, &topo, &opts)?;
            if cli.oracle {
                let config = construct_configuration(&line, &a)?;
                if perturbed_pencil(&a, &config, &oracle_seeds(cli.seed))? != line {
                    return Err(mismatch("realized type"));
                }
            }
            json!({ "support": support_to_json(&a), "tree": line_to_json(&line) }).into()
        }
        Command::CompatCheck => {
            let tree = job.tree()?;
            let q = incompatible_quartet(tree.topology(), &a);
            json!({ "compatible": q.is_none(), "quartet": q.map(|q| q.map(|i| i + 1)) }).into()
        }
    };
    Ok(out)
}

fn oracle_seeds(seed: u64) -> Vec<u64> {
    (0..8).map(|k| seed.wrapping_mul(8).wrapping_add(k)).collect()
}

/// Finite sample points of one locus piece for the oracle.
fn sample_points(g: &CellGeometry) -> Vec<ProjPoint> {
    let along = |p: &ProjPoint, d: (i64, i64), t: i64| {
        ProjPoint::chart(
            p.get(0) + Rational::from_integer((d.0 * t).into()),
            p.get(1) + Rational::from_integer((d.1 * t).into()),
        )
    };
    match g {
        CellGeometry::Point(p) => vec![p.clone()],
        CellGeometry::Segment(p, q) => {
            let half = Rational::new(1.into(), 2.into());
            let mid = ProjPoint::chart((p.get(0) + q.get(0)) * &half, (p.get(1) + q.get(1)) * &half);
            vec![p.clone(), mid, q.clone()]
        }
        CellGeometry::Ray { from, direction } => {
            vec![from.clone(), along(from, *direction, 1), along(from, *direction, 5)]
        }
        CellGeometry::Line { through, direction } => {
            vec![along(through, *direction, -3), through.clone(), along(through, *direction, 3)]
        }
    }
}

fn emit(cli: &Cli, value: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let (Some(path), Some(figure)) = (&cli.svg, &out.svg) {
                if let Err(e) = std::fs::write(path, figure) {
                    eprintln!("tpencil: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            if let Err(e) = emit(&cli, &out.json) {
                eprintln!("tpencil: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("tpencil: {e}");
            let _ = emit(&cli, &error_to_json(&e));
            ExitCode::from(if matches!(e, Error::InvalidInput(_)) { 2 } else { 1 })
        }
    }
}
