//! Command-line front end for the outitude library.
//!
//! Every subcommand reads the JSON surface/coordinates formats of
//! [`outitude::json`], writes deterministic JSON (keys sorted, trailing
//! newline) to `--output` (default `-`, standard output), and exits with
//! 0 on success, 1 on an input/validation error, 2 on a computational
//! error. `-` also reads standard input wherever a path is expected.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use outitude::canonical::{
    canonicalize, cell_membership, deform_toward_one, extract_cell_decomposition, sample_cell,
    standard_subdivision, CellDecomposition,
};
use outitude::develop::{develop, render_svg, Development};
use outitude::dualize::dual_coords;
use outitude::holonomy::{is_parabolic, peripheral_holonomy};
use outitude::hyperbolic::{cell_center, embed_penner, LambdaLengths};
use outitude::json as jsonio;
use outitude::{ACoords, Backend, EdgeId, Error, Rational, Scalar, Triangulation};

#[derive(Parser)]
#[command(
    name = "outitude",
    version,
    about = "A-coordinates on punctured surfaces: outitudes, flips, cells, holonomy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    /// Exact big-rational arithmetic.
    Rational,
    /// f64 arithmetic with a fixed comparison tolerance.
    Float,
}

impl From<BackendArg> for Backend {
    fn from(arg: BackendArg) -> Backend {
        match arg {
            BackendArg::Rational => Backend::Rational,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(Args)]
struct SurfaceArg {
    /// Surface JSON file (`-` for standard input).
    #[arg(long)]
    surface: String,
}

#[derive(Args)]
struct CoordsArg {
    /// Coordinates JSON file (`-` for standard input).
    #[arg(long)]
    coords: String,
    /// Scalar backend; defaults to the one declared in the coordinates file.
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
}

#[derive(Args)]
struct OutputArg {
    /// Where to write the result (`-` for standard output).
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a surface file describes a consistent triangulation.
    Validate {
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Evaluate the outitude of every edge.
    Outitude {
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        coords: CoordsArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Flip one edge and print the new chart with the transformed coordinates.
    Flip {
        /// Name of the edge to flip.
        #[arg(long)]
        edge: String,
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        coords: CoordsArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Flip negative-outitude edges until all outitudes are nonnegative.
    Canonicalize {
        /// Abort with an error after this many flips.
        #[arg(long, default_value_t = 10_000)]
        max_flips: usize,
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        coords: CoordsArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Locate coordinates relative to a cell: interior, boundary, or outside.
    Membership {
        /// Comma-separated kept-edge names defining the cell.
        #[arg(long)]
        cell: String,
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        coords: CoordsArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Construct coordinates in the interior of a cell.
    SampleCell {
        /// Comma-separated kept-edge names defining the cell.
        #[arg(long)]
        cell: String,
        /// Comma-separated `triangle=value` parameters; omitted triangles get 1.
        #[arg(long)]
        params: Option<String>,
        /// Scalar backend for the sample (default rational).
        #[arg(long, value_enum, default_value = "rational")]
        backend: BackendArg,
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Pull interior coordinates toward the all-ones structure of a cell.
    Deform {
        /// Comma-separated kept-edge names defining the cell.
        #[arg(long)]
        cell: String,
        /// Deformation parameter in (0, 1]; 1 lands on the reference point.
        #[arg(long)]
        t: String,
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        coords: CoordsArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Project to X-coordinates: triple and quadruple ratios.
    Xcoords {
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        coords: CoordsArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Peripheral holonomy matrix around a puncture, with parabolicity verdict.
    Holonomy {
        /// Puncture index (0-based).
        #[arg(long)]
        puncture: usize,
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        coords: CoordsArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Apply the projective-duality involution to coordinates.
    Dual {
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        coords: CoordsArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Embed λ-lengths as coordinates on the decorated-hyperbolic subvariety.
    EmbedPenner {
        /// Comma-separated `edge=value` λ-lengths; omitted edges get 1.
        #[arg(long)]
        lambda: Option<String>,
        /// Scalar backend (the embedding needs square roots; default float).
        #[arg(long, value_enum, default_value = "float")]
        backend: BackendArg,
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// The center of a cell: unit λ-lengths with regular-polygon diagonals.
    Center {
        /// Comma-separated kept-edge names defining the cell.
        #[arg(long)]
        cell: String,
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Develop lifts of the triangulation into the plane; render or dump them.
    Develop {
        /// Name of the base triangle.
        #[arg(long)]
        base: String,
        /// Tree depth to develop to.
        #[arg(long)]
        depth: usize,
        /// Write an SVG rendering to this path (`-` for standard output).
        #[arg(long)]
        svg: Option<String>,
        /// SVG width in pixels.
        #[arg(long, default_value_t = 800)]
        width: u32,
        /// Highlight edges whose outitude is positive.
        #[arg(long)]
        highlight_cell: bool,
        /// Include every lift's flags in the JSON output.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        surface: SurfaceArg,
        #[command(flatten)]
        coords: CoordsArg,
        #[command(flatten)]
        output: OutputArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_validation() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn bad(detail: impl Into<String>) -> Error {
    Error::BadInput {
        detail: detail.into(),
    }
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| bad(format!("cannot read standard input: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {path}: {e}")))
    }
}

fn write_output(path: &str, text: &str) -> Result<(), Error> {
    if path == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| bad(format!("cannot write {path}: {e}")))
    }
}

fn load_surface(arg: &SurfaceArg) -> Result<Triangulation, Error> {
    jsonio::surface_from_json(&jsonio::parse(&read_input(&arg.surface)?)?)
}

/// Read the coordinates file and decide which backend to run under: the
/// `--backend` flag when present, otherwise the file's own declaration.
fn load_coords_value(arg: &CoordsArg) -> Result<(Value, Backend), Error> {
    let value = jsonio::parse(&read_input(&arg.coords)?)?;
    let backend = match arg.backend {
        Some(flag) => flag.into(),
        None => match value.get("backend").and_then(Value::as_str) {
            Some("rational") => Backend::Rational,
            Some("float") => Backend::Float,
            Some(other) => return Err(bad(format!("unknown backend {other:?}"))),
            None => return Err(bad("coordinates file lacks a \"backend\" field")),
        },
    };
    Ok((value, backend))
}

/// Run `$body::<S>(args…)` with `S` chosen by a [`Backend`] value.
macro_rules! with_backend {
    ($backend:expr, $body:ident($($args:expr),* $(,)?)) => {
        match $backend {
            Backend::Rational => $body::<Rational>($($args),*),
            Backend::Float => $body::<f64>($($args),*),
        }
    };
}

/// Comma-separated edge names to ids.
fn parse_edge_list(chart: &Triangulation, text: &str) -> Result<Vec<EdgeId>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|name| !name.is_empty())
        .map(|name| {
            chart.edge_id(name).ok_or_else(|| Error::UnknownEdge {
                edge: name.to_string(),
            })
        })
        .collect()
}

/// Comma-separated `name=value` assignments.
fn parse_assignments<S: Scalar>(text: &str) -> Result<Vec<(String, S)>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|part| !part.is_empty())
        .map(|part| {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected name=value, got {part:?}")))?;
            Ok((name.trim().to_string(), S::parse(value.trim())?))
        })
        .collect()
}

fn scalar_map<S: Scalar>(chart: &Triangulation, values: &[S]) -> Value {
    let mut map = Map::new();
    for (e, v) in values.iter().enumerate() {
        map.insert(chart.edge_name(e).to_string(), v.to_json());
    }
    Value::Object(map)
}

fn edge_names(chart: &Triangulation, edges: &[EdgeId]) -> Value {
    Value::Array(
        edges
            .iter()
            .map(|&e| Value::String(chart.edge_name(e).to_string()))
            .collect(),
    )
}

/// Build the cell named by kept edges, re-fanning polygons as needed, and
/// transport coordinates to the fan chart along the flips this takes.
fn cell_on_fan_chart<S: Scalar>(
    chart: &Triangulation,
    coords: &ACoords<S>,
    cell_arg: &str,
) -> Result<(CellDecomposition, ACoords<S>, Vec<EdgeId>), Error> {
    let kept = parse_edge_list(chart, cell_arg)?;
    let (cell, flips) = standard_subdivision(chart, &kept)?;
    let moved = coords.chart_transition(&flips)?;
    Ok((cell, moved, flips))
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Validate { surface, output } => {
            let chart = load_surface(&surface)?;
            chart.validate()?;
            let doc = json!({
                "edges": chart.edge_count(),
                "genus": chart.genus(),
                "punctures": chart.punctures(),
                "status": "ok",
                "triangles": chart.tri_count(),
            });
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::Outitude {
            surface,
            coords,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let (value, backend) = load_coords_value(&coords)?;
            let doc = with_backend!(backend, outitude_doc(&chart, &value))?;
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::Flip {
            edge,
            surface,
            coords,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let (value, backend) = load_coords_value(&coords)?;
            let doc = with_backend!(backend, flip_doc(&chart, &value, &edge))?;
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::Canonicalize {
            max_flips,
            surface,
            coords,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let (value, backend) = load_coords_value(&coords)?;
            let doc = with_backend!(backend, canonicalize_doc(&chart, &value, max_flips))?;
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::Membership {
            cell,
            surface,
            coords,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let (value, backend) = load_coords_value(&coords)?;
            let doc = with_backend!(backend, membership_doc(&chart, &value, &cell))?;
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::SampleCell {
            cell,
            params,
            backend,
            surface,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let doc = with_backend!(
                Backend::from(backend),
                sample_doc(&chart, &cell, params.as_deref())
            )?;
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::Deform {
            cell,
            t,
            surface,
            coords,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let (value, backend) = load_coords_value(&coords)?;
            let doc = with_backend!(backend, deform_doc(&chart, &value, &cell, &t))?;
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::Xcoords {
            surface,
            coords,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let (value, backend) = load_coords_value(&coords)?;
            let doc = with_backend!(backend, xcoords_doc(&chart, &value))?;
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::Holonomy {
            puncture,
            surface,
            coords,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let (value, backend) = load_coords_value(&coords)?;
            let doc = with_backend!(backend, holonomy_doc(&chart, &value, puncture))?;
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::Dual {
            surface,
            coords,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let (value, backend) = load_coords_value(&coords)?;
            let doc = with_backend!(backend, dual_doc(&chart, &value))?;
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::EmbedPenner {
            lambda,
            backend,
            surface,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let doc = with_backend!(
                Backend::from(backend),
                embed_doc(&chart, lambda.as_deref())
            )?;
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::Center {
            cell,
            surface,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let kept = parse_edge_list(&chart, &cell)?;
            let (cell, flips) = standard_subdivision(&chart, &kept)?;
            let center = cell_center(&cell)?;
            let doc = json!({
                "coords": jsonio::coords_to_json(&center),
                "fan_flips": edge_names(&cell.chart, &flips),
                "outitudes": scalar_map(&cell.chart, &center.outitudes()),
                "surface": jsonio::surface_to_json(&cell.chart),
            });
            write_output(&output.output, &jsonio::render(&doc))
        }
        Command::Develop {
            base,
            depth,
            svg,
            width,
            highlight_cell,
            json: want_flags,
            surface,
            coords,
            output,
        } => {
            let chart = load_surface(&surface)?;
            let (value, backend) = load_coords_value(&coords)?;
            let (doc, svg_text) = with_backend!(
                backend,
                develop_doc(&chart, &value, &base, depth, svg.is_some(), width, highlight_cell, want_flags)
            )?;
            if let (Some(path), Some(text)) = (svg, svg_text) {
                write_output(&path, &text)?;
            }
            write_output(&output.output, &jsonio::render(&doc))
        }
    }
}

fn outitude_doc<S: Scalar>(chart: &Triangulation, value: &Value) -> Result<Value, Error> {
    let coords = jsonio::coords_from_json::<S>(value, chart)?;
    Ok(json!({
        "all_positive": coords.all_outitudes_positive(),
        "outitudes": scalar_map(chart, &coords.outitudes()),
    }))
}

fn flip_doc<S: Scalar>(chart: &Triangulation, value: &Value, edge: &str) -> Result<Value, Error> {
    let coords = jsonio::coords_from_json::<S>(value, chart)?;
    let e = chart.edge_id(edge).ok_or_else(|| Error::UnknownEdge {
        edge: edge.to_string(),
    })?;
    let (flipped, _) = coords.flip_transform(e)?;
    Ok(json!({
        "coords": jsonio::coords_to_json(&flipped),
        "flipped_edge": edge,
        "surface": jsonio::surface_to_json(&flipped.chart),
    }))
}

fn canonicalize_doc<S: Scalar>(
    chart: &Triangulation,
    value: &Value,
    max_flips: usize,
) -> Result<Value, Error> {
    let coords = jsonio::coords_from_json::<S>(value, chart)?;
    let (canonical, flips) = canonicalize(&coords, max_flips)?;
    let (cell, _) = extract_cell_decomposition(&canonical)?;
    Ok(json!({
        "cell": { "kept_edges": edge_names(&canonical.chart, &cell.kept_edges()) },
        "final_chart": jsonio::surface_to_json(&canonical.chart),
        "final_coords": jsonio::coords_to_json(&canonical),
        "flips": edge_names(&canonical.chart, &flips),
    }))
}

fn membership_doc<S: Scalar>(
    chart: &Triangulation,
    value: &Value,
    cell_arg: &str,
) -> Result<Value, Error> {
    let coords = jsonio::coords_from_json::<S>(value, chart)?;
    let (cell, moved, flips) = cell_on_fan_chart(chart, &coords, cell_arg)?;
    let report = cell_membership(&moved, &cell)?;
    Ok(json!({
        "borderline": report.borderline,
        "fan_flips": edge_names(&cell.chart, &flips),
        "membership": report.membership.to_string(),
    }))
}

fn sample_doc<S: Scalar>(
    chart: &Triangulation,
    cell_arg: &str,
    params: Option<&str>,
) -> Result<Value, Error> {
    let kept = parse_edge_list(chart, cell_arg)?;
    let (cell, flips) = standard_subdivision(chart, &kept)?;
    let mut tri_params = vec![S::one(); cell.chart.tri_count()];
    if let Some(text) = params {
        for (name, value) in parse_assignments::<S>(text)? {
            let t = cell.chart.tri_id(&name).ok_or_else(|| Error::UnknownTriangle {
                tri: name.clone(),
            })?;
            tri_params[t] = value;
        }
    }
    let sample = sample_cell(&cell, &tri_params)?;
    Ok(json!({
        "coords": jsonio::coords_to_json(&sample),
        "fan_flips": edge_names(&cell.chart, &flips),
        "surface": jsonio::surface_to_json(&cell.chart),
    }))
}

fn deform_doc<S: Scalar>(
    chart: &Triangulation,
    value: &Value,
    cell_arg: &str,
    t_text: &str,
) -> Result<Value, Error> {
    let coords = jsonio::coords_from_json::<S>(value, chart)?;
    let t = S::parse(t_text)?;
    let (cell, moved, flips) = cell_on_fan_chart(chart, &coords, cell_arg)?;
    let deformed = deform_toward_one(&moved, &cell, &t)?;
    Ok(json!({
        "coords": jsonio::coords_to_json(&deformed),
        "fan_flips": edge_names(&cell.chart, &flips),
        "surface": jsonio::surface_to_json(&cell.chart),
    }))
}

fn xcoords_doc<S: Scalar>(chart: &Triangulation, value: &Value) -> Result<Value, Error> {
    let coords = jsonio::coords_from_json::<S>(value, chart)?;
    let x = coords.to_x_coords();
    let mut triples = Map::new();
    for (t, v) in x.triple.iter().enumerate() {
        triples.insert(chart.tri_name(t).to_string(), v.to_json());
    }
    let mut quads = Map::new();
    for e in 0..chart.edge_count() {
        let mut entry = Map::new();
        for (k, side) in chart.sides(e).into_iter().enumerate() {
            entry.insert(jsonio::oriented_key(chart, side), x.quad[e][k].to_json());
        }
        quads.insert(chart.edge_name(e).to_string(), Value::Object(entry));
    }
    Ok(json!({
        "backend": S::BACKEND.name(),
        "quad_ratios": quads,
        "triple_ratios": triples,
    }))
}

fn holonomy_doc<S: Scalar>(
    chart: &Triangulation,
    value: &Value,
    puncture: usize,
) -> Result<Value, Error> {
    let coords = jsonio::coords_from_json::<S>(value, chart)?;
    let m = peripheral_holonomy(&coords, puncture)?;
    let rows: Vec<Value> = m
        .rows
        .iter()
        .map(|row| Value::Array(row.iter().map(Scalar::to_json).collect()))
        .collect();
    Ok(json!({
        "det": m.det().to_json(),
        "matrix": rows,
        "parabolic": is_parabolic(&m)?,
        "puncture": puncture,
        "second_invariant": m.second_invariant().to_json(),
        "trace": m.trace().to_json(),
    }))
}

fn dual_doc<S: Scalar>(chart: &Triangulation, value: &Value) -> Result<Value, Error> {
    let coords = jsonio::coords_from_json::<S>(value, chart)?;
    Ok(jsonio::coords_to_json(&dual_coords(&coords)))
}

fn embed_doc<S: Scalar>(chart: &Triangulation, lambda: Option<&str>) -> Result<Value, Error> {
    let lengths = match lambda {
        None => LambdaLengths::all_ones(chart.clone()),
        Some(text) => {
            let mut values = vec![S::one(); chart.edge_count()];
            for (name, value) in parse_assignments::<S>(text)? {
                let e = chart.edge_id(&name).ok_or_else(|| Error::UnknownEdge {
                    edge: name.clone(),
                })?;
                values[e] = value;
            }
            LambdaLengths::new(chart.clone(), values)?
        }
    };
    Ok(jsonio::coords_to_json(&embed_penner(&lengths)?))
}

#[allow(clippy::too_many_arguments)]
fn develop_doc<S: Scalar>(
    chart: &Triangulation,
    value: &Value,
    base: &str,
    depth: usize,
    want_svg: bool,
    width: u32,
    highlight_cell: bool,
    want_flags: bool,
) -> Result<(Value, Option<String>), Error> {
    let coords = jsonio::coords_from_json::<S>(value, chart)?;
    let base = chart.tri_id(base).ok_or_else(|| Error::UnknownTriangle {
        tri: base.to_string(),
    })?;
    let dev = develop(&coords, base, depth)?;

    let svg_text = if want_svg {
        let highlight: Vec<EdgeId> = if highlight_cell {
            coords
                .outitudes()
                .iter()
                .enumerate()
                .filter(|(_, out)| out.is_positive())
                .map(|(e, _)| e)
                .collect()
        } else {
            Vec::new()
        };
        Some(render_svg(&dev, width, &highlight)?)
    } else {
        None
    };

    let mut doc = json!({
        "base": chart.tri_name(base),
        "depth": depth,
        "lift_count": dev.lifts.len(),
    });
    if want_flags {
        doc.as_object_mut()
            .expect("doc is an object")
            .insert("lifts".to_string(), lifts_json(&dev));
    }
    Ok((doc, svg_text))
}

fn lifts_json<S: Scalar>(dev: &Development<S>) -> Value {
    Value::Array(
        dev.lifts
            .iter()
            .map(|lift| {
                let flags: Vec<Value> = lift
                    .concrete
                    .flags
                    .iter()
                    .map(|flag| {
                        json!({
                            "covector": flag.covector.iter().map(Scalar::to_json).collect::<Vec<_>>(),
                            "vector": flag.vector.iter().map(Scalar::to_json).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                json!({
                    "flags": flags,
                    "name": lift.name(&dev.chart, dev.base),
                    "triangle": dev.chart.tri_name(lift.tri),
                })
            })
            .collect(),
    )
}
