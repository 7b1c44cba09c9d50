//! Tree JSON files:
//!
//! ```json
//! {"format":"cosettree/1","levels":[[2],[2,4]],"nodes":{"1":[[0],[1]],"2":[[0,[1,3]]]}}
//! ```
//!
//! A coordinate is an integer when its level is a single cyclic group and a
//! residue array otherwise. Missing levels are empty.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::Value;

use super::{Caps, LevelStructure, LevelTree, TreeError, TreeNode};
use crate::abelian::FiniteAbelian;
use crate::FORMAT_TAG;

#[derive(Debug, Clone, Serialize)]
pub struct TreeFile {
    pub format: &'static str,
    pub levels: Vec<Vec<u64>>,
    pub nodes: BTreeMap<String, Vec<Value>>,
}

fn fmt_err(location: impl Into<String>, msg: impl Into<String>) -> TreeError {
    TreeError::Format {
        location: location.into(),
        msg: msg.into(),
    }
}

pub fn node_to_json(ls: &LevelStructure, node: &TreeNode) -> Value {
    Value::Array(
        node.coords()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if ls.level(i).rank() == 1 {
                    Value::from(c[0])
                } else {
                    Value::from(c.clone())
                }
            })
            .collect(),
    )
}

pub fn tree_to_json(t: &LevelTree) -> TreeFile {
    let ls = t.structure();
    TreeFile {
        format: FORMAT_TAG,
        levels: ls.levels().iter().map(|l| l.orders().to_vec()).collect(),
        nodes: (1..=t.depth())
            .map(|n| {
                (
                    n.to_string(),
                    t.nodes_at(n).map(|node| node_to_json(ls, &node)).collect(),
                )
            })
            .collect(),
    }
}

pub(crate) fn node_from_json(
    ls: &LevelStructure,
    v: &Value,
    location: &str,
) -> Result<TreeNode, TreeError> {
    let coords = v
        .as_array()
        .ok_or_else(|| fmt_err(location, "node must be an array of coordinates"))?;
    if coords.is_empty() || coords.len() > ls.depth() {
        return Err(fmt_err(
            location,
            format!("node length {} outside 1..={}", coords.len(), ls.depth()),
        ));
    }
    let mut out = Vec::with_capacity(coords.len());
    for (i, c) in coords.iter().enumerate() {
        let at = format!("{location}[{i}]");
        let residues = match c {
            Value::Number(_) if ls.level(i).rank() == 1 => vec![c
                .as_u64()
                .ok_or_else(|| fmt_err(&at, "residue must be a natural number"))?],
            Value::Array(rs) => rs
                .iter()
                .map(|r| {
                    r.as_u64()
                        .ok_or_else(|| fmt_err(&at, "residue must be a natural number"))
                })
                .collect::<Result<Vec<_>, _>>()?,
            _ => {
                return Err(fmt_err(
                    &at,
                    format!(
                        "coordinate must be a residue array of length {}",
                        ls.level(i).rank()
                    ),
                ))
            }
        };
        ls.level(i)
            .check_residues(&residues)
            .map_err(|e| fmt_err(&at, e.to_string()))?;
        out.push(residues);
    }
    ls.node(out).map_err(|e| fmt_err(location, e.to_string()))
}

pub(crate) fn structure_from_json(v: &Value, caps: Caps) -> Result<LevelStructure, TreeError> {
    let levels = v
        .get("levels")
        .and_then(Value::as_array)
        .ok_or_else(|| fmt_err("levels", "missing array of level orders"))?;
    let mut shapes = Vec::with_capacity(levels.len());
    for (i, l) in levels.iter().enumerate() {
        let at = format!("levels[{i}]");
        let orders = l
            .as_array()
            .ok_or_else(|| fmt_err(&at, "level must be an array of cyclic orders"))?
            .iter()
            .map(|n| {
                n.as_u64()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| fmt_err(&at, "cyclic orders must be integers >= 1"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        shapes.push(FiniteAbelian::new(orders).map_err(|e| fmt_err(&at, e.to_string()))?);
    }
    LevelStructure::new(shapes, caps).map_err(|e| match e {
        TreeError::CapExceeded { .. } | TreeError::NoLevels => e,
        other => fmt_err("levels", other.to_string()),
    })
}

pub(crate) fn check_format_tag(v: &Value) -> Result<(), TreeError> {
    match v.get("format") {
        None => Ok(()),
        Some(Value::String(s)) if s == FORMAT_TAG => Ok(()),
        Some(other) => Err(fmt_err(
            "format",
            format!("expected \"{FORMAT_TAG}\", found {other}"),
        )),
    }
}

pub(crate) fn parse_json(text: &str) -> Result<Value, TreeError> {
    serde_json::from_str(text).map_err(|e| {
        fmt_err(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

pub fn read_tree_json(text: &str, caps: Caps) -> Result<LevelTree, TreeError> {
    let v = parse_json(text)?;
    tree_from_value(&v, caps)
}

pub(crate) fn tree_from_value(v: &Value, caps: Caps) -> Result<LevelTree, TreeError> {
    check_format_tag(v)?;
    let ls = structure_from_json(v, caps)?;
    let d = ls.depth();
    let nodes = match v.get("nodes") {
        None => return Err(fmt_err("nodes", "missing node map")),
        Some(Value::Object(m)) => m,
        Some(_) => return Err(fmt_err("nodes", "must be an object keyed by level")),
    };
    let mut levels = vec![BTreeSet::new(); d];
    for (key, list) in nodes {
        let n: usize = key
            .parse()
            .ok()
            .filter(|n| (1..=d).contains(n))
            .ok_or_else(|| {
                fmt_err(
                    format!("nodes.{key}"),
                    format!("level key must be in 1..={d}"),
                )
            })?;
        let list = list
            .as_array()
            .ok_or_else(|| fmt_err(format!("nodes.{key}"), "must be an array of nodes"))?;
        for (j, raw) in list.iter().enumerate() {
            let at = format!("nodes.{key}[{j}]");
            let node = node_from_json(&ls, raw, &at)?;
            if node.len() != n {
                return Err(fmt_err(
                    at,
                    format!("node has length {}, expected {n}", node.len()),
                ));
            }
            let (_, idx) = ls.encode(&node)?;
            levels[n - 1].insert(idx);
        }
    }
    LevelTree::from_indices(ls, levels, caps).map_err(|e| match e {
        TreeError::NotPrefixClosed { level, node } => fmt_err(
            format!("nodes.{level}"),
            format!("node {node} has no parent at level {}", level - 1),
        ),
        other => other,
    })
}
