//! File reading and JSON helpers for the command line.

use std::path::Path;

use serde_json::Value;

use super::{CliError, CliResult};
use crate::error::NcsError;
use crate::graph::format::{parse_graph, GraphDoc};
use crate::graph::{Edge, NcsGraph};
use crate::linsys::MeasurementSet;
use crate::rational::{parse_rational, to_f64, Rational};

pub(super) enum Measurements {
    Exact(NcsGraph, MeasurementSet<Rational>),
    Noisy(NcsGraph, MeasurementSet<f64>),
}

pub(super) fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Domain(format!("reading {}: {e}", path.display())))
}

pub(super) fn read_graph(path: &Path) -> CliResult<NcsGraph> {
    Ok(parse_graph(&read_text(path)?)?)
}

/// `[[a, b, value], ...]` in edge order.
pub(super) fn edge_values_json(items: impl IntoIterator<Item = (Edge, Value)>) -> Value {
    Value::Array(
        items
            .into_iter()
            .map(|(e, v)| Value::Array(vec![e.a().0.into(), e.b().0.into(), v]))
            .collect(),
    )
}

fn parse_error(msg: impl Into<String>) -> NcsError {
    NcsError::Parse(msg.into())
}

/// Parses `{"graph": {...}, "measurements": [[a, b, value], ...]}`. Values
/// may be strings or numbers; in exact mode they are read as exact rationals.
pub(super) fn read_measurements(text: &str, exact: bool) -> crate::error::Result<Measurements> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| parse_error(format!("measurement json: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| parse_error("measurement file must be a JSON object"))?;
    let graph_doc: GraphDoc =
        serde_json::from_value(obj.get("graph").cloned().unwrap_or(Value::Null))
            .map_err(|e| parse_error(format!("graph: {e}")))?;
    let g = graph_doc.into_graph()?;
    let rows = obj
        .get("measurements")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_error("missing `measurements` array"))?;
    let mut triples = Vec::with_capacity(rows.len());
    for row in rows {
        let bad = || parse_error(format!("measurement entry {row} must be [a, b, value]"));
        let items = row.as_array().filter(|r| r.len() == 3).ok_or_else(bad)?;
        let a = items[0].as_u64().ok_or_else(bad)? as usize;
        let b = items[1].as_u64().ok_or_else(bad)? as usize;
        let raw = match &items[2] {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(bad()),
        };
        triples.push((a, b, raw));
    }
    if exact {
        let parsed = triples
            .into_iter()
            .map(|(a, b, s)| Ok((a, b, parse_rational(&s)?)))
            .collect::<crate::error::Result<Vec<_>>>()?;
        let m = MeasurementSet::from_oriented(&g, parsed)?;
        Ok(Measurements::Exact(g, m))
    } else {
        let parsed = triples
            .into_iter()
            .map(|(a, b, s)| {
                let v = match s.trim().parse::<f64>() {
                    Ok(v) => v,
                    Err(_) => to_f64(&parse_rational(&s)?),
                };
                Ok((a, b, v))
            })
            .collect::<crate::error::Result<Vec<_>>>()?;
        let m = MeasurementSet::from_oriented(&g, parsed)?;
        Ok(Measurements::Noisy(g, m))
    }
}
