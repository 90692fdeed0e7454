//! JSON reading and writing for surface and coordinate files.
//!
//! Surface file shape:
//! `{ "genus": g, "punctures": n, "triangles": ["t0", …],
//!    "gluings": [{ "edge": "a", "sides": [["t0", 1], ["t1", 0]] }, …] }`
//!
//! Coordinates file shape:
//! `{ "backend": "rational"|"float", "triangle_params": {"t0": "107/12", …},
//!    "edge_params": {"a": {"tail_t0_s1": "1", "tail_t1_s0": "1"}, …} }`
//! where the key `tail_T_sK` names the oriented edge whose tail is corner K
//! of triangle T. Rationals are strings `p/q` in lowest terms; floats are
//! JSON numbers.
//!
//! All writers produce lexicographically ordered keys, so identical values
//! serialize to identical bytes.

use serde_json::{json, Map, Value};

use crate::coords::ACoords;
use crate::error::Error;
use crate::scalar::Scalar;
use crate::surface::{Side, Triangulation};

fn bad(detail: impl Into<String>) -> Error {
    Error::BadInput {
        detail: detail.into(),
    }
}

fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value, Error> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize, Error> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

fn as_str<'v>(v: &'v Value, what: &str) -> Result<&'v str, Error> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn as_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>, Error> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn as_object<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>, Error> {
    v.as_object().ok_or_else(|| bad(format!("{what} must be an object")))
}

/// Render a value with deterministic bytes: two-space indentation, sorted
/// keys (the default map is ordered), trailing newline.
pub fn render(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always render");
    text.push('\n');
    text
}

pub fn parse(text: &str) -> Result<Value, Error> {
    serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))
}

pub fn surface_to_json(tri: &Triangulation) -> Value {
    let gluings: Vec<Value> = (0..tri.edge_count())
        .map(|e| {
            let sides: Vec<Value> = tri
                .sides(e)
                .iter()
                .map(|s| json!([tri.tri_name(s.tri), s.slot]))
                .collect();
            json!({ "edge": tri.edge_name(e), "sides": sides })
        })
        .collect();
    json!({
        "genus": tri.genus(),
        "punctures": tri.punctures(),
        "triangles": (0..tri.tri_count()).map(|t| tri.tri_name(t)).collect::<Vec<_>>(),
        "gluings": gluings,
    })
}

pub fn surface_from_json(v: &Value) -> Result<Triangulation, Error> {
    let genus = as_usize(field(v, "genus")?, "genus")?;
    let punctures = as_usize(field(v, "punctures")?, "punctures")?;
    let tri_names: Vec<String> = as_array(field(v, "triangles")?, "triangles")?
        .iter()
        .map(|t| as_str(t, "triangle name").map(str::to_string))
        .collect::<Result<_, _>>()?;
    let lookup = |name: &str| -> Result<usize, Error> {
        tri_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownTriangle { tri: name.into() })
    };
    let mut gluings = Vec::new();
    for g in as_array(field(v, "gluings")?, "gluings")? {
        let name = as_str(field(g, "edge")?, "edge")?.to_string();
        let sides = as_array(field(g, "sides")?, "sides")?;
        if sides.len() != 2 {
            return Err(bad(format!("edge {name:?} must list exactly two sides")));
        }
        let mut parsed = Vec::new();
        for side in sides {
            let pair = as_array(side, "side")?;
            if pair.len() != 2 {
                return Err(bad("a side must be a [triangle, slot] pair"));
            }
            let t = lookup(as_str(&pair[0], "side triangle")?)?;
            let slot = as_usize(&pair[1], "side slot")?;
            if slot > 2 {
                return Err(bad(format!("slot {slot} out of range in edge {name:?}")));
            }
            parsed.push(Side::new(t, slot as u8));
        }
        gluings.push((name, parsed[0], parsed[1]));
    }
    Triangulation::build(genus, punctures, tri_names, gluings)
}

/// The JSON key for the oriented edge whose tail sits at `side`.
pub fn oriented_key(tri: &Triangulation, side: Side) -> String {
    format!("tail_{}_s{}", tri.tri_name(side.tri), side.slot)
}

pub fn coords_to_json<S: Scalar>(coords: &ACoords<S>) -> Value {
    let tri = &coords.chart;
    let mut triangle_params = Map::new();
    for t in 0..tri.tri_count() {
        triangle_params.insert(tri.tri_name(t).to_string(), coords.tri[t].to_json());
    }
    let mut edge_params = Map::new();
    for e in 0..tri.edge_count() {
        let mut entry = Map::new();
        for (k, side) in tri.sides(e).into_iter().enumerate() {
            entry.insert(oriented_key(tri, side), coords.edge[e][k].to_json());
        }
        edge_params.insert(tri.edge_name(e).to_string(), Value::Object(entry));
    }
    json!({
        "backend": S::BACKEND.name(),
        "triangle_params": triangle_params,
        "edge_params": edge_params,
    })
}

pub fn coords_from_json<S: Scalar>(v: &Value, chart: &Triangulation) -> Result<ACoords<S>, Error> {
    let backend = as_str(field(v, "backend")?, "backend")?;
    if backend != S::BACKEND.name() {
        return Err(bad(format!(
            "coordinates use the {backend} backend, expected {}",
            S::BACKEND.name()
        )));
    }
    let tri_params = as_object(field(v, "triangle_params")?, "triangle_params")?;
    let mut tri = Vec::with_capacity(chart.tri_count());
    for t in 0..chart.tri_count() {
        let name = chart.tri_name(t);
        let raw = tri_params
            .get(name)
            .ok_or_else(|| bad(format!("missing triangle parameter {name:?}")))?;
        tri.push(S::from_json(raw)?);
    }
    if tri_params.len() != chart.tri_count() {
        return Err(bad("triangle_params lists a triangle not in the chart"));
    }
    let edge_params = as_object(field(v, "edge_params")?, "edge_params")?;
    let mut edge = Vec::with_capacity(chart.edge_count());
    for e in 0..chart.edge_count() {
        let name = chart.edge_name(e);
        let entry = as_object(
            edge_params
                .get(name)
                .ok_or_else(|| bad(format!("missing edge parameters for {name:?}")))?,
            "edge parameter entry",
        )?;
        let mut pair = Vec::new();
        for side in chart.sides(e) {
            let key = oriented_key(chart, side);
            let raw = entry
                .get(&key)
                .ok_or_else(|| bad(format!("edge {name:?} is missing key {key:?}")))?;
            pair.push(S::from_json(raw)?);
        }
        if entry.len() != 2 {
            return Err(bad(format!("edge {name:?} must carry exactly two parameters")));
        }
        edge.push([pair[0].clone(), pair[1].clone()]);
    }
    if edge_params.len() != chart.edge_count() {
        return Err(bad("edge_params lists an edge not in the chart"));
    }
    ACoords::new(chart.clone(), tri, edge)
}
