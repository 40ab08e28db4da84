//! Command-line front end: corner loci, amoeba/coamoeba sampling, spine
//! recovery, degeneration convergence, pants decompositions, localization
//! checks, smoothness tests, moment-map compactification, and phase-limit
//! lifts.
//!
//! Every command prints one machine-readable JSON summary to stdout and is
//! deterministic given its inputs and `--seed`. File outputs go to the
//! paths named by flags. Exit code 0 means the command ran and every
//! requested check passed; 1 means a check failed; 2 means bad input or
//! configuration.

use std::collections::BTreeMap;
use std::f64::consts::E;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use tropic::amoeba::{
    default_probes, hausdorff_to_complex, line_coamoeba_complement, localization_check,
    sample_hypersurface, spine,
};
use tropic::error::{Error, Result};
use tropic::exact::{Q, Z};
use tropic::formats;
use tropic::lattice::{LatticePoint, Polytope};
use tropic::moment::{compactify_gamma, MomentData};
use tropic::pants::{euler_characteristics, lift_phase_cloud, lift_puiseux_cloud, pants_graph};
use tropic::svg;
use tropic::tropical::{corner_locus, TropicalHypersurface};
use tropic::{hull, Error as TropError};

#[derive(Parser)]
#[command(
    name = "trop",
    version,
    about = "Tropical hypersurfaces, amoebas, and their degenerations",
    after_help = "Exit codes: 0 all checks passed, 1 a check failed, 2 bad input."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Corner locus of a tropical polynomial as a weighted cell complex.
    CornerLocus {
        /// Tropical polynomial file (`coeff : e1 … en`, one term per line).
        poly: PathBuf,
        /// Write an SVG rendering (two variables only).
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Viewport as `lo,hi` (all axes) or `lo1,hi1,lo2,hi2,…`.
        #[arg(long = "box", default_value = "-5,5", allow_hyphen_values = true)]
        viewport: String,
    },
    /// Sample the log-image of a complex hypersurface at stretch t.
    Amoeba {
        /// Complex polynomial file (`re im : e1 … en`).
        poly: PathBuf,
        /// Stretch parameter; must exceed 1.
        #[arg(long)]
        t: f64,
        /// Sampling window in log coordinates.
        #[arg(long = "box", default_value = "-5,5", allow_hyphen_values = true)]
        viewport: String,
        /// Number of points to draw.
        #[arg(long, default_value_t = 2000)]
        k: usize,
        /// RNG seed (sampling is deterministic per seed).
        #[arg(long)]
        seed: u64,
        /// Write the sampled cloud as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write an SVG scatter plot (two variables only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Sample the argument-image of a complex hypersurface.
    Coamoeba {
        /// Complex polynomial file (`re im : e1 … en`).
        poly: PathBuf,
        /// Stretch parameter; must exceed 1.
        #[arg(long, default_value_t = E)]
        t: f64,
        /// Sampling window in log coordinates.
        #[arg(long = "box", default_value = "-5,5", allow_hyphen_values = true)]
        viewport: String,
        /// Number of points to draw.
        #[arg(long, default_value_t = 2000)]
        k: usize,
        /// RNG seed.
        #[arg(long)]
        seed: u64,
        /// Write the argument cloud as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write an SVG on the fundamental torus (two variables only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Recover the spine of an amoeba from torus averages.
    Spine {
        /// Complex polynomial file.
        poly: PathBuf,
        /// Monte-Carlo samples per coefficient.
        #[arg(long = "n-samples", default_value_t = 20_000)]
        n_samples: usize,
        /// RNG seed.
        #[arg(long)]
        seed: u64,
        /// Distance of the complement probe points from the origin.
        #[arg(long = "probe-radius", default_value_t = 10.0)]
        probe_radius: f64,
        /// Viewport for the overlay picture.
        #[arg(long = "box", default_value = "-5,5", allow_hyphen_values = true)]
        viewport: String,
        /// Write an SVG of a sampled amoeba with the spine on top.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Hausdorff distances of a coefficient family to its tropical limit.
    Converge {
        /// Family file (`re im @ exponent : e1 … en`).
        family: PathBuf,
        /// Comma-separated stretch ladder, every value > 1.
        #[arg(long)]
        ladder: String,
        /// Comparison window in log coordinates.
        #[arg(long = "box", default_value = "-5,5", allow_hyphen_values = true)]
        viewport: String,
        /// Points per ladder rung.
        #[arg(long, default_value_t = 2000)]
        k: usize,
        /// RNG seed.
        #[arg(long)]
        seed: u64,
        /// Require the final distance to be at most this bound.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Pants decomposition of a smooth tropical hypersurface.
    Pants {
        /// Tropical polynomial file.
        poly: PathBuf,
    },
    /// Check a family's hypersurface against its truncation near a vertex.
    Localize {
        /// Family file (`re im @ exponent : e1 … en`).
        family: PathBuf,
        /// Dual cell as lattice points: `e1,e2;e1,e2;…`.
        #[arg(long, allow_hyphen_values = true)]
        cell: String,
        /// Radius of the comparison ball in log-t coordinates.
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        /// Neighborhood bound that the final rung must meet.
        #[arg(long)]
        epsilon: f64,
        /// Comma-separated stretch ladder, every value > 1.
        #[arg(long)]
        ladder: String,
        /// Sample points per rung.
        #[arg(long, default_value_t = 400)]
        k: usize,
        /// RNG seed.
        #[arg(long)]
        seed: u64,
    },
    /// Test whether the dual subdivision is a unimodular triangulation.
    SmoothCheck {
        /// Tropical polynomial file.
        poly: PathBuf,
    },
    /// Carry a tropical curve into its Newton polytope.
    Moment {
        /// Tropical polynomial file.
        poly: PathBuf,
        /// Sampling window for the bounded part.
        #[arg(long = "box", default_value = "-5,5", allow_hyphen_values = true)]
        viewport: String,
        /// Arclength between consecutive samples.
        #[arg(long, default_value_t = 0.25)]
        step: f64,
    },
    /// Sample phase-space lifts of tropical or series-coefficient data.
    Lift {
        /// Input polynomial file (tropical for `phase`, series for `puiseux`).
        poly: PathBuf,
        /// Which lift to sample.
        #[arg(long, value_parser = ["phase", "puiseux"])]
        kind: String,
        /// Number of points.
        #[arg(long, default_value_t = 500)]
        k: usize,
        /// RNG seed.
        #[arg(long)]
        seed: u64,
        /// Farthest ray parameter for the phase lift.
        #[arg(long, default_value_t = 3.0)]
        cap: f64,
        /// Write the lifted cloud as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    match run(cli.command) {
        Ok((mut summary, passed)) => {
            let obj = summary.as_object_mut().expect("summaries are objects");
            obj.insert("command".into(), json!(name));
            obj.insert("ok".into(), json!(true));
            obj.insert("passed".into(), json!(passed));
            println!("{}", serde_json::to_string(&summary).expect("summaries serialize"));
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let summary = json!({
                "command": name,
                "ok": false,
                "passed": false,
                "error": err.to_string(),
            });
            println!("{}", serde_json::to_string(&summary).expect("summaries serialize"));
            ExitCode::from(2)
        }
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::CornerLocus { .. } => "corner-locus",
        Cmd::Amoeba { .. } => "amoeba",
        Cmd::Coamoeba { .. } => "coamoeba",
        Cmd::Spine { .. } => "spine",
        Cmd::Converge { .. } => "converge",
        Cmd::Pants { .. } => "pants",
        Cmd::Localize { .. } => "localize",
        Cmd::SmoothCheck { .. } => "smooth-check",
        Cmd::Moment { .. } => "moment",
        Cmd::Lift { .. } => "lift",
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

/// `lo,hi` (applied to every axis) or a flat `lo1,hi1,…,lon,hin` list.
fn parse_box(spec: &str, n: usize) -> Result<Vec<(f64, f64)>> {
    let nums = spec
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("unreadable box bound '{tok}'")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let pairs: Vec<(f64, f64)> = if nums.len() == 2 {
        vec![(nums[0], nums[1]); n]
    } else if nums.len() == 2 * n {
        nums.chunks(2).map(|c| (c[0], c[1])).collect()
    } else {
        return Err(Error::invalid(format!(
            "box needs 2 or {} numbers, got {}",
            2 * n,
            nums.len()
        )));
    };
    if pairs.iter().any(|(lo, hi)| !(hi > lo)) {
        return Err(Error::invalid("box bounds must satisfy lo < hi"));
    }
    Ok(pairs)
}

fn parse_ladder(spec: &str) -> Result<Vec<f64>> {
    let ladder = spec
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("unreadable ladder value '{tok}'")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if ladder.is_empty() {
        return Err(Error::invalid("ladder must name at least one stretch value"));
    }
    if ladder.iter().any(|&t| !(t > 1.0)) {
        return Err(Error::invalid("every ladder value must exceed 1"));
    }
    Ok(ladder)
}

/// `e1,e2;e1,e2;…` — one lattice point per semicolon group.
fn parse_cell(spec: &str) -> Result<Vec<LatticePoint>> {
    spec.split(';')
        .map(|group| {
            let coords = group
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::invalid(format!("unreadable cell coordinate '{tok}'")))
                })
                .collect::<Result<Vec<i64>>>()?;
            Ok(LatticePoint::new(coords))
        })
        .collect()
}

fn json_q(x: &Q) -> Value {
    json!(formats::write_rational(x))
}

fn json_qvec(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(json_q).collect())
}

fn json_zvec(xs: &[Z]) -> Result<Value> {
    use num_traits::ToPrimitive;
    xs.iter()
        .map(|x| {
            x.to_i64()
                .map(|v| json!(v))
                .ok_or_else(|| Error::invalid("integer component exceeds i64"))
        })
        .collect::<Result<Vec<Value>>>()
        .map(Value::Array)
}

fn json_lp(p: &LatticePoint) -> Value {
    json!(p.0)
}

fn require_points(k: usize) -> Result<()> {
    if k == 0 {
        return Err(TropError::EmptyCloud);
    }
    Ok(())
}

fn locus_summary(gamma: &TropicalHypersurface) -> Result<Value> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for cell in &gamma.cells {
        *counts.entry(cell.dim.to_string()).or_insert(0) += 1;
    }
    let cells = gamma
        .cells
        .iter()
        .map(|cell| {
            Ok(json!({
                "dim": cell.dim,
                "weight": cell.weight,
                "vertices": Value::Array(cell.vertices.iter().map(|v| json_qvec(v)).collect()),
                "rays": Value::Array(
                    cell.rays.iter().map(|r| json_zvec(r)).collect::<Result<Vec<_>>>()?,
                ),
                "lines": Value::Array(
                    cell.lines.iter().map(|l| json_zvec(l)).collect::<Result<Vec<_>>>()?,
                ),
                "active_terms": Value::Array(cell.active_terms.iter().map(json_lp).collect()),
            }))
        })
        .collect::<Result<Vec<Value>>>()?;
    Ok(json!({
        "n": gamma.ambient_dim,
        "cell_counts": counts,
        "smooth": gamma.is_smooth(),
        "cells": cells,
    }))
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn run(cmd: Cmd) -> Result<(Value, bool)> {
    match cmd {
        Cmd::CornerLocus { poly, svg: svg_path, viewport } => {
            let f = formats::parse_tropical(&read_input(&poly)?)?;
            let gamma = corner_locus(&f)?;
            if let Some(path) = svg_path {
                let bounds = parse_box(&viewport, 2)?;
                write_output(&path, &svg::svg_tropical_curve(&gamma, &bounds)?)?;
            }
            Ok((locus_summary(&gamma)?, true))
        }

        Cmd::Amoeba { poly, t, viewport, k, seed, csv, svg: svg_path } => {
            let f = formats::parse_complex(&read_input(&poly)?)?;
            require_points(k)?;
            let bounds = parse_box(&viewport, f.ambient_dim())?;
            let cloud = sample_hypersurface(&f, t, &bounds, k, seed)?;
            if cloud.is_empty() {
                return Err(TropError::EmptyCloud);
            }
            if let Some(path) = csv {
                // The amoeba is the log-image: export the projection, not
                // the full phase-space sample.
                write_output(&path, &formats::write_cloud_csv(&cloud.log_projection()?))?;
            }
            if let Some(path) = svg_path {
                write_output(&path, &svg::svg_log_cloud(&cloud, None, Some(&bounds))?)?;
            }
            let summary = json!({
                "n": f.ambient_dim(),
                "t": t,
                "seed": seed,
                "requested": k,
                "points": cloud.len(),
            });
            Ok((summary, true))
        }

        Cmd::Coamoeba { poly, t, viewport, k, seed, csv, svg: svg_path } => {
            let f = formats::parse_complex(&read_input(&poly)?)?;
            require_points(k)?;
            let bounds = parse_box(&viewport, f.ambient_dim())?;
            let cloud = sample_hypersurface(&f, t, &bounds, k, seed)?;
            if cloud.is_empty() {
                return Err(TropError::EmptyCloud);
            }
            let args = cloud.arg_projection()?;
            // For a line in two variables, the closed coamoeba misses two
            // open triangles; verify no sample strays into them.
            let line_support = [
                LatticePoint::new(vec![0, 0]),
                LatticePoint::new(vec![0, 1]),
                LatticePoint::new(vec![1, 0]),
            ];
            let is_line = f.ambient_dim() == 2 && f.support() == line_support;
            let mut violations = 0usize;
            let mut triangles: Vec<Vec<(f64, f64)>> = Vec::new();
            if is_line {
                let alphas = [
                    f.coeff(&line_support[2]).expect("term exists").arg(),
                    f.coeff(&line_support[1]).expect("term exists").arg(),
                    f.coeff(&line_support[0]).expect("term exists").arg(),
                ];
                violations = args
                    .points()
                    .iter()
                    .filter(|p| line_coamoeba_complement(&alphas, &[p[0], p[1]]))
                    .count();
                triangles = svg::line_complement_triangles(&alphas);
            }
            if let Some(path) = csv {
                write_output(&path, &formats::write_cloud_csv(&args))?;
            }
            if let Some(path) = svg_path {
                write_output(&path, &svg::svg_arg_cloud(&cloud, &triangles)?)?;
            }
            let summary = json!({
                "n": f.ambient_dim(),
                "t": t,
                "seed": seed,
                "requested": k,
                "points": args.len(),
                "complement_check": {
                    "applicable": is_line,
                    "violations": violations,
                },
            });
            Ok((summary, violations == 0))
        }

        Cmd::Spine { poly, n_samples, seed, probe_radius, viewport, svg: svg_path } => {
            let f = formats::parse_complex(&read_input(&poly)?)?;
            let probes = default_probes(&f, probe_radius)?;
            let result = spine(&f, &probes, n_samples, seed)?;
            let gamma = corner_locus(&result.spine)?;
            if let Some(path) = svg_path {
                let bounds = parse_box(&viewport, f.ambient_dim())?;
                let cloud =
                    sample_hypersurface(&f, E, &bounds, 3000, seed.wrapping_add(1))?;
                write_output(&path, &svg::svg_log_cloud(&cloud, Some(&gamma), Some(&bounds))?)?;
            }
            let coefficients = result
                .coefficients
                .iter()
                .map(|(alpha, (estimate, stderr))| {
                    json!({
                        "exponents": json_lp(alpha),
                        "estimate": estimate,
                        "stderr": stderr,
                        "snapped": json_q(result.spine.coeff(alpha).expect("snapped term exists")),
                    })
                })
                .collect::<Vec<Value>>();
            let summary = json!({
                "coefficients": coefficients,
                "snap_error": result.snap_error,
                "locus": locus_summary(&gamma)?,
            });
            Ok((summary, true))
        }

        Cmd::Converge { family, ladder, viewport, k, seed, epsilon } => {
            let fam = formats::parse_viro(&read_input(&family)?)?;
            let ladder = parse_ladder(&ladder)?;
            require_points(k)?;
            let bounds = parse_box(&viewport, fam.ambient_dim())?;
            let gamma = corner_locus(&fam.tropicalize()?)?;
            let mut table = Vec::new();
            let mut distances = Vec::new();
            for &t in &ladder {
                let cloud = sample_hypersurface(&fam.evaluate_at(t)?, t, &bounds, k, seed)?;
                let d = hausdorff_to_complex(&cloud.log_projection()?, &gamma, &bounds)?;
                table.push(json!({"t": t, "hausdorff": d}));
                distances.push(d);
            }
            let weakly_decreasing = distances.windows(2).all(|w| w[1] <= w[0]);
            let final_distance = *distances.last().expect("ladder is nonempty");
            let passed = epsilon.map_or(true, |eps| final_distance <= eps);
            let summary = json!({
                "table": table,
                "weakly_decreasing": weakly_decreasing,
                "final": final_distance,
                "epsilon": epsilon,
            });
            Ok((summary, passed))
        }

        Cmd::Pants { poly } => {
            let f = formats::parse_tropical(&read_input(&poly)?)?;
            let gamma = corner_locus(&f)?;
            let graph = pants_graph(&gamma)?;
            let euler = euler_characteristics(&graph);
            let nodes: Vec<Value> = graph.nodes.iter().map(|v| json_qvec(v)).collect();
            let edges = graph
                .internal_edges
                .iter()
                .map(|e| {
                    json!({
                        "node_a": e.node_a,
                        "node_b": e.node_b,
                        "dual_primitive": e.dual_primitive,
                        "orientation_reversed": e.orientation_reversed,
                    })
                })
                .collect::<Vec<Value>>();
            let legs = graph
                .legs
                .iter()
                .map(|l| json!({"node": l.node, "direction": l.direction}))
                .collect::<Vec<Value>>();
            let summary = json!({
                "n": graph.ambient_dim,
                "nodes": nodes,
                "internal_edges": edges,
                "legs": legs,
                "counts": {
                    "nodes": graph.nodes.len(),
                    "internal_edges": graph.internal_edges.len(),
                    "legs": graph.legs.len(),
                },
                "chi_open": euler.chi_open,
                "chi_compact": euler.chi_compact,
                "genus": euler.genus,
                "conjectural": euler.conjectural,
            });
            Ok((summary, true))
        }

        Cmd::Localize { family, cell, r, epsilon, ladder, k, seed } => {
            let fam = formats::parse_viro(&read_input(&family)?)?;
            let ladder = parse_ladder(&ladder)?;
            require_points(k)?;
            let points = parse_cell(&cell)?;
            let polytope = Polytope::from_points(&points)?;
            let report = localization_check(&fam, &polytope, r, &ladder, epsilon, k, seed)?;
            let summary = json!({
                "center": report.center,
                "ladder": report.ladder,
                "max_distances": report.max_distances,
                "mean_distances": report.mean_distances,
                "stderrs": report.stderrs,
                "epsilon": report.epsilon,
            });
            Ok((summary, report.passed))
        }

        Cmd::SmoothCheck { poly } => {
            let f = formats::parse_tropical(&read_input(&poly)?)?;
            let gamma = corner_locus(&f)?;
            let smooth = gamma.is_smooth();
            let summary = json!({
                "n": gamma.ambient_dim,
                "smooth": smooth,
            });
            Ok((summary, smooth))
        }

        Cmd::Moment { poly, viewport, step } => {
            let f = formats::parse_tropical(&read_input(&poly)?)?;
            let gamma = corner_locus(&f)?;
            let md = MomentData::for_support(&f.support())?;
            let bounds = parse_box(&viewport, gamma.ambient_dim)?;
            let curve = compactify_gamma(&gamma, &md, &bounds, step)?;
            let rational_vertices: Vec<Vec<Q>> =
                md.polytope.vertices.iter().map(|v| v.to_rational()).collect();
            let facets = hull::facets_full_dim(&rational_vertices)
                .into_iter()
                .map(|facet| {
                    Ok(json!({
                        "normal": json_zvec(&facet.normal)?,
                        "offset": json_q(&facet.offset),
                    }))
                })
                .collect::<Result<Vec<Value>>>()?;
            let landings = curve
                .boundary
                .iter()
                .map(|b| {
                    json!({
                        "direction": b.direction,
                        "raw": b.raw,
                        "snapped": b.snapped,
                        "facet": b.facet,
                    })
                })
                .collect::<Vec<Value>>();
            let summary = json!({
                "n": gamma.ambient_dim,
                "interior_points": curve.points.len(),
                "landings": landings,
                "polytope": {
                    "vertices": Value::Array(
                        md.polytope.vertices.iter().map(json_lp).collect(),
                    ),
                    "facets": facets,
                },
            });
            Ok((summary, true))
        }

        Cmd::Lift { poly, kind, k, seed, cap, csv } => {
            require_points(k)?;
            let text = read_input(&poly)?;
            let (cloud, exact_logs) = match kind.as_str() {
                "phase" => {
                    let trop = formats::parse_tropical(&text)?;
                    lift_phase_cloud(&trop, k, seed, cap)?
                }
                "puiseux" => {
                    let f = formats::parse_puiseux(&text)?;
                    lift_puiseux_cloud(&f, k, seed)?
                }
                other => return Err(Error::invalid(format!("unknown lift kind '{other}'"))),
            };
            if let Some(path) = csv {
                write_output(&path, &formats::write_cloud_csv(&cloud))?;
            }
            let summary = json!({
                "kind": kind,
                "points": cloud.len(),
                "exact_log_points": exact_logs.len(),
                "t": if cloud.meta.t.is_infinite() { json!("inf") } else { json!(cloud.meta.t) },
                "seed": seed,
            });
            Ok((summary, true))
        }
    }
}
