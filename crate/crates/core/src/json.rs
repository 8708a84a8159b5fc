//! JSON encodings shared by the CLI and the round-trip tests.
//!
//! Rationals are JSON integers or `"p/q"` strings. Leaves and support indices
//! are 1-based. Trees list their edges by node name: internal nodes are
//! `v0, v1, ...` and the ray of leaf k is an edge to `leafk`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::pencil::{Affine, CellGeometry, FixedLocusCell, Witness};
use crate::primitives::{format_rational, parse_rational, ProjPoint, Rational, SupportSet};
use crate::stable::Generality;
use crate::subdivision::{CurveGraph, RegularSubdivision};
use crate::tree::{embed, EmbeddedLine, LeafSet, PlueckerVector, TreeTopology};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn rational_to_json(q: &Rational) -> Value {
    if q.is_integer() {
        if let Ok(k) = i64::try_from(q.numer()) {
            return json!(k);
        }
    }
    Value::String(format_rational(q))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(num) => match num.as_i64() {
            Some(k) => Ok(Rational::from_integer(k.into())),
            None => Err(bad(format!("number {num} is not an integer; write fractions as \"p/q\""))),
        },
        Value::String(s) => parse_rational(s),
        other => Err(bad(format!("expected a rational, got {other}"))),
    }
}

pub fn point_to_json(p: &ProjPoint) -> Value {
    Value::Array(p.coords().iter().map(rational_to_json).collect())
}

pub fn point_from_json(v: &Value, dim: Option<usize>) -> Result<ProjPoint> {
    let items = v.as_array().ok_or_else(|| bad("a point must be an array"))?;
    if items.is_empty() {
        return Err(bad("a point needs at least one coordinate"));
    }
    if let Some(d) = dim {
        if items.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: items.len() });
        }
    }
    Ok(ProjPoint::new(items.iter().map(rational_from_json).collect::<Result<_>>()?))
}

pub fn config_to_json(c: &[ProjPoint]) -> Value {
    Value::Array(c.iter().map(point_to_json).collect())
}

pub fn config_from_json(v: &Value) -> Result<Vec<ProjPoint>> {
    v.as_array()
        .ok_or_else(|| bad("a configuration must be an array of points"))?
        .iter()
        .map(|p| point_from_json(p, Some(3)))
        .collect()
}

pub fn support_to_json(a: &SupportSet) -> Value {
    json!({ "degree": a.degree(), "points": a.points() })
}

/// `{"degree": d, "points": [[r, s, t], ...]}`; `t` may be omitted.
pub fn support_from_json(v: &Value) -> Result<SupportSet> {
    let degree = v.get("degree").and_then(Value::as_i64).ok_or_else(|| bad("support needs an integer \"degree\""))?;
    let pts = v.get("points").and_then(Value::as_array).ok_or_else(|| bad("support needs \"points\""))?;
    let mut points = Vec::new();
    for p in pts {
        let coords: Vec<i64> = p
            .as_array()
            .ok_or_else(|| bad("support points are arrays"))?
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| bad("support coordinates are integers")))
            .collect::<Result<_>>()?;
        match coords.as_slice() {
            [r, s] => points.push([*r, *s, degree - r - s]),
            [r, s, t] => points.push([*r, *s, *t]),
            _ => return Err(bad("support points have 2 or 3 coordinates")),
        }
    }
    SupportSet::new(degree, points)
}

fn leaf_name(k: usize) -> String {
    format!("leaf{}", k + 1)
}

fn node_name(v: usize) -> String {
    format!("v{v}")
}

fn leaf_set_json(s: LeafSet) -> Value {
    Value::Array(s.iter().map(|k| json!(k + 1)).collect())
}

pub fn topology_to_json(t: &TreeTopology) -> Value {
    let mut edges: Vec<Value> =
        t.edges().iter().map(|&(a, b)| json!({ "a": node_name(a), "b": node_name(b) })).collect();
    edges.extend((0..t.n()).map(|k| json!({ "a": node_name(t.leaf_node(k)), "b": leaf_name(k) })));
    json!({
        "n": t.n(),
        "edges": edges,
        "splits": t.splits().into_iter().map(|(_, s)| leaf_set_json(s)).collect::<Vec<_>>(),
    })
}

pub fn line_to_json(l: &EmbeddedLine) -> Value {
    let mut out = topology_to_json(l.topology());
    let edges = out["edges"].as_array_mut().unwrap();
    for (e, len) in l.lengths().iter().enumerate() {
        edges[e]["length"] = rational_to_json(len);
    }
    let vertices: Map<String, Value> =
        (0..l.topology().node_count()).map(|v| (node_name(v), point_to_json(l.coords(v)))).collect();
    out["anchor"] = json!({ "node": node_name(0), "coords": point_to_json(l.coords(0)) });
    out["vertices"] = Value::Object(vertices);
    out
}

/// A parsed tree: a bare type, or a line with lengths and coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeInput {
    Topology(TreeTopology),
    Line(EmbeddedLine),
}

impl TreeInput {
    pub fn topology(&self) -> &TreeTopology {
        match self {
            TreeInput::Topology(t) => t,
            TreeInput::Line(l) => l.topology(),
        }
    }

    pub fn into_line(self) -> Result<EmbeddedLine> {
        match self {
            TreeInput::Line(l) => Ok(l),
            TreeInput::Topology(_) => Err(bad("tree needs edge lengths and an anchor to be a line")),
        }
    }
}

fn leaf_index(name: &str, n: usize) -> Result<Option<usize>> {
    let Some(rest) = name.strip_prefix("leaf") else {
        return Ok(None);
    };
    let k: usize = rest.parse().map_err(|_| bad(format!("bad leaf name {name:?}")))?;
    if k == 0 || k > n {
        return Err(bad(format!("leaf {k} outside 1..={n}")));
    }
    Ok(Some(k - 1))
}

/// Orders internal node names: `v<number>` numerically, then the rest.
fn name_order(a: &str, b: &str) -> std::cmp::Ordering {
    let num = |s: &str| s.strip_prefix('v').and_then(|r| r.parse::<u64>().ok());
    match (num(a), num(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.cmp(b),
    }
}

pub fn tree_from_json(v: &Value) -> Result<TreeInput> {
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("tree needs \"n\""))? as usize;
    if !(3..=64).contains(&n) {
        return Err(Error::InvalidTree(format!("leaf count {n} outside 3..=64")));
    }
    let Some(edges) = v.get("edges").and_then(Value::as_array) else {
        let splits =
            v.get("splits").and_then(Value::as_array).ok_or_else(|| bad("tree needs \"edges\" or \"splits\""))?;
        let mut sets = Vec::new();
        for s in splits {
            let mut set = LeafSet::EMPTY;
            for k in s.as_array().ok_or_else(|| bad("a split is an array of leaves"))? {
                let k = k.as_u64().ok_or_else(|| bad("leaves are positive integers"))? as usize;
                if k == 0 || k > n {
                    return Err(bad(format!("leaf {k} outside 1..={n}")));
                }
                set = set.with(k - 1);
            }
            sets.push(set);
        }
        return Ok(TreeInput::Topology(TreeTopology::from_splits(n, &sets)?));
    };
    struct RawEdge<'a> {
        a: &'a str,
        b: &'a str,
        length: Option<Rational>,
    }
    let mut raw = Vec::new();
    for e in edges {
        let name =
            |key: &str| e.get(key).and_then(Value::as_str).ok_or_else(|| bad(format!("edge needs string \"{key}\"")));
        let length = match e.get("length") {
            None | Some(Value::Null) => None,
            Some(x) => Some(rational_from_json(x)?),
        };
        raw.push(RawEdge { a: name("a")?, b: name("b")?, length });
    }
    let mut names: Vec<&str> = Vec::new();
    for e in &raw {
        for s in [e.a, e.b] {
            if leaf_index(s, n)?.is_none() && !names.contains(&s) {
                names.push(s);
            }
        }
    }
    names.sort_by(|a, b| name_order(a, b));
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut leaf_node = vec![None; n];
    let mut internal = Vec::new();
    let mut lengths = Vec::new();
    for e in &raw {
        match (leaf_index(e.a, n)?, leaf_index(e.b, n)?) {
            (None, None) => {
                internal.push((index[e.a], index[e.b]));
                lengths.push(e.length.clone());
            }
            (Some(k), None) | (None, Some(k)) => {
                let node = index[if leaf_index(e.a, n)?.is_some() { e.b } else { e.a }];
                if leaf_node[k].replace(node).is_some() {
                    return Err(Error::InvalidTree(format!("leaf {} attached twice", k + 1)));
                }
            }
            (Some(_), Some(_)) => return Err(Error::InvalidTree("edge between two leaves".into())),
        }
    }
    let leaf_node: Vec<usize> = leaf_node
        .into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| Error::InvalidTree(format!("leaf {} is not attached", k + 1))))
        .collect::<Result<_>>()?;
    let topo = TreeTopology::new(n, names.len(), leaf_node, internal)?;
    let vertices: BTreeMap<usize, ProjPoint> = match v.get("vertices") {
        None | Some(Value::Null) => BTreeMap::new(),
        Some(Value::Object(m)) => m
            .iter()
            .map(|(k, p)| {
                let node = *index.get(k.as_str()).ok_or_else(|| bad(format!("unknown vertex {k:?}")))?;
                Ok((node, point_from_json(p, Some(n))?))
            })
            .collect::<Result<_>>()?,
        Some(_) => return Err(bad("\"vertices\" must be an object")),
    };
    let anchor = match v.get("anchor") {
        None | Some(Value::Null) => vertices.iter().next().map(|(k, p)| (*k, p.clone())),
        Some(a) => {
            let name = a.get("node").and_then(Value::as_str).ok_or_else(|| bad("anchor needs \"node\""))?;
            let node = *index.get(name).ok_or_else(|| bad(format!("unknown anchor node {name:?}")))?;
            let coords = a.get("coords").ok_or_else(|| bad("anchor needs \"coords\""))?;
            Some((node, point_from_json(coords, Some(n))?))
        }
    };
    let all_lengths: Option<Vec<Rational>> = lengths.into_iter().collect();
    match (anchor, all_lengths) {
        (Some((node, coords)), Some(lengths)) => {
            let line = embed(topo, lengths, node, coords)?;
            if vertices.iter().any(|(v, p)| line.coords(*v) != p) {
                return Err(Error::InvalidTree("vertex coordinates disagree with edge lengths".into()));
            }
            Ok(TreeInput::Line(line))
        }
        _ => Ok(TreeInput::Topology(topo)),
    }
}

pub fn plucker_to_json(p: &PlueckerVector) -> Value {
    let mut m = Map::new();
    for i in 0..p.n() {
        for j in i + 1..p.n() {
            m.insert(format!("{},{}", i + 1, j + 1), rational_to_json(p.get(i, j)));
        }
    }
    Value::Object(m)
}

pub fn generality_to_json(g: &Generality) -> Value {
    json!({
        "general": g.is_general(),
        "singular_pair": g.singular_pair.map(|(i, j)| json!([i + 1, j + 1])),
    })
}

fn affine_json(f: &Affine) -> Value {
    json!([f.x, f.y, rational_to_json(&f.c)])
}

pub fn geometry_to_json(g: &CellGeometry) -> Value {
    match g {
        CellGeometry::Point(p) => json!({ "type": "point", "point": point_to_json(p) }),
        CellGeometry::Segment(p, q) => json!({ "type": "segment", "from": point_to_json(p), "to": point_to_json(q) }),
        CellGeometry::Ray { from, direction } => {
            json!({ "type": "ray", "from": point_to_json(from), "direction": [direction.0, direction.1] })
        }
        CellGeometry::Line { through, direction } => {
            json!({ "type": "line", "through": point_to_json(through), "direction": [direction.0, direction.1] })
        }
    }
}

pub fn cell_to_json(line: &EmbeddedLine, cell: &FixedLocusCell) -> Value {
    let witness = match &cell.witness {
        Witness::Vertex(v) => json!({ "vertex": node_name(*v) }),
        Witness::Edge { edge, t_form } => {
            let (a, b) = line.topology().edges()[*edge];
            json!({ "edge": [node_name(a), node_name(b)], "t": affine_json(t_form) })
        }
    };
    json!({
        "witness": witness,
        "indices": cell.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "eq": cell.equalities.iter().map(affine_json).collect::<Vec<_>>(),
        "ineq": cell.inequalities.iter().map(affine_json).collect::<Vec<_>>(),
        "geometry": geometry_to_json(&cell.geometry),
    })
}

pub fn subdivision_to_json(s: &RegularSubdivision) -> Value {
    let cells: Vec<Vec<usize>> = s.cells().iter().map(|c| c.iter().map(|i| i + 1).collect()).collect();
    json!({ "cells": cells })
}

pub fn curve_to_json(g: &CurveGraph) -> Value {
    let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
    json!({
        "subdivision": subdivision_to_json(&g.subdivision),
        "vertices": g.vertices.iter().map(|v| json!({
            "point": point_to_json(&v.point),
            "cell": one_based(&g.subdivision.cells()[v.cell]),
        })).collect::<Vec<_>>(),
        "edges": g.edges.iter().map(|e| json!({
            "from": e.from, "to": e.to, "dual": one_based(&e.dual),
        })).collect::<Vec<_>>(),
        "rays": g.rays.iter().map(|r| json!({
            "from": r.from, "direction": [r.direction.0, r.direction.1], "dual": one_based(&r.dual),
        })).collect::<Vec<_>>(),
    })
}

pub fn error_to_json(e: &Error) -> Value {
    json!({ "error": { "kind": e.kind(), "message": e.to_string() } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{square, square_line};
    use crate::primitives::{rat, ratio};

    #[test]
    fn rationals() {
        assert_eq!(rational_to_json(&rat(-3)), json!(-3));
        assert_eq!(rational_to_json(&ratio(1, 2)), json!("1/2"));
        assert_eq!(rational_from_json(&json!("6/4")).unwrap(), ratio(3, 2));
        assert_eq!(rational_from_json(&json!(5)).unwrap(), rat(5));
        assert!(rational_from_json(&json!(0.5)).is_err());
        assert!(rational_from_json(&json!("1/0")).is_err());
    }

    #[test]
    fn line_round_trip() {
        let l = square_line();
        let v = line_to_json(&l);
        assert_eq!(tree_from_json(&v).unwrap(), TreeInput::Line(l.clone()));
        // re-emitting gives identical JSON
        let again = tree_from_json(&v).unwrap().into_line().unwrap();
        assert_eq!(line_to_json(&again), v);
    }

    #[test]
    fn topology_inputs() {
        let t = tree_from_json(&json!({ "n": 4, "splits": [[1, 3]] })).unwrap();
        assert_eq!(t.topology(), square_line().topology());
        let edges = tree_from_json(&topology_to_json(square_line().topology())).unwrap();
        assert!(matches!(edges, TreeInput::Topology(_)));
        assert!(tree_from_json(&json!({ "n": 4, "splits": [[1, 5]] })).is_err());
    }

    #[test]
    fn support_round_trip() {
        let a = square();
        assert_eq!(support_from_json(&support_to_json(&a)).unwrap(), a);
        let planar = json!({ "degree": 2, "points": [[0, 0], [1, 0], [0, 1], [1, 1]] });
        assert_eq!(support_from_json(&planar).unwrap(), a);
    }
}
