//! Contact logs in a line-oriented text format.
//!
//! ```text
//! # comment
//! @vertices 5          optional, defaults to the largest id + 1
//! @lifetime 7          optional, defaults to the largest time + 1
//! @undirected          optional, adds the reverse of every contact
//! @node 0 a            optional vertex name
//! a b 1 3              u v t_begin t_end
//! ```
//!
//! Vertices are given by declared name or by numeric id. Undeclared names
//! are numbered in order of first appearance, skipping ids already taken.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::container::{is_container, Container};
use crate::error::{Error, Result};
use crate::model::{Contact, TemporalGraph, Vertex};

/// A parsed contact log: the validated graph and its vertex names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactLog {
    pub graph: TemporalGraph,
    pub names: Option<Vec<String>>,
    pub directed: bool,
}

impl ContactLog {
    pub fn new(graph: TemporalGraph, names: Option<Vec<String>>) -> Self {
        ContactLog { graph, names, directed: true }
    }

    /// Label of vertex `v`: its name when one exists, its id otherwise.
    pub fn label(&self, v: Vertex) -> String {
        label(self.names.as_deref(), v)
    }

    /// Resolves a vertex given by name or numeric id.
    pub fn resolve(&self, token: &str) -> Result<Vertex> {
        resolve(self.names.as_deref(), token)
    }
}

pub fn label(names: Option<&[String]>, v: Vertex) -> String {
    match names.and_then(|n| n.get(v as usize)) {
        Some(name) if !name.is_empty() => name.clone(),
        _ => v.to_string(),
    }
}

pub fn resolve(names: Option<&[String]>, token: &str) -> Result<Vertex> {
    if let Some(i) = names.and_then(|n| n.iter().position(|x| x == token)) {
        return Ok(i as Vertex);
    }
    token.parse().map_err(|_| Error::Parse { line: 0, message: format!("unknown vertex `{token}`") })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn number(line: usize, token: &str, what: &str) -> Result<u32> {
    token.parse().map_err(|_| parse_err(line, format!("{what} `{token}` is not a non-negative integer")))
}

/// Parses the text format.
pub fn parse_tsv(text: &str) -> Result<ContactLog> {
    let mut declared: BTreeMap<String, Vertex> = BTreeMap::new();
    let mut vertices = None;
    let mut lifetime = None;
    let mut directed = true;
    let mut records: Vec<(usize, [&str; 4])> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if let Some(directive) = fields[0].strip_prefix('@') {
            match (directive, &fields[1..]) {
                ("vertices", [n]) => vertices = Some(number(line, n, "vertex count")?),
                ("lifetime", [t]) => lifetime = Some(number(line, t, "lifetime")?),
                ("directed", []) => directed = true,
                ("undirected", []) => directed = false,
                ("node", [id, name]) => {
                    let id = number(line, id, "vertex id")?;
                    if declared.insert(name.to_string(), id).is_some() {
                        return Err(parse_err(line, format!("vertex name `{name}` declared twice")));
                    }
                }
                _ => return Err(parse_err(line, format!("malformed directive `{body}`"))),
            }
            continue;
        }
        match fields.as_slice() {
            [u, v, b, e] => records.push((line, [u, v, b, e])),
            _ => return Err(parse_err(line, format!("expected 4 fields, found {}", fields.len()))),
        }
    }

    let mut taken: BTreeSet<Vertex> = declared.values().copied().collect();
    for (_, r) in &records {
        for tok in &r[..2] {
            if !declared.contains_key(*tok) {
                if let Ok(id) = tok.parse::<Vertex>() {
                    taken.insert(id);
                }
            }
        }
    }
    let mut names = declared.clone();
    let mut next_free: Vertex = 0;
    let mut contacts = Vec::with_capacity(records.len());
    for (line, r) in &records {
        let mut ids = [0; 2];
        for (slot, tok) in ids.iter_mut().zip(&r[..2]) {
            *slot = match names.get(*tok) {
                Some(&id) => id,
                None => match tok.parse::<Vertex>() {
                    Ok(id) => id,
                    Err(_) => {
                        while taken.contains(&next_free) {
                            next_free += 1;
                        }
                        taken.insert(next_free);
                        names.insert(tok.to_string(), next_free);
                        next_free
                    }
                },
            };
        }
        let begin = number(*line, r[2], "begin time")?;
        let end = number(*line, r[3], "end time")?;
        contacts.push(Contact::new(ids[0], ids[1], begin, end));
    }
    if !directed {
        let reversed: Vec<Contact> = contacts.iter().filter(|c| c.u != c.v).map(Contact::reversed).collect();
        contacts.extend(reversed);
    }

    let max_id = taken.iter().next_back().map_or(0, |&m| m + 1);
    let n = vertices.unwrap_or(max_id);
    let tau = lifetime.unwrap_or_else(|| contacts.iter().map(|c| c.end + 1).max().unwrap_or(0));
    let graph = TemporalGraph::new(contacts, n, tau)?;
    let names = if names.is_empty() {
        None
    } else {
        let mut table = vec![String::new(); n as usize];
        for (name, id) in names {
            if let Some(slot) = table.get_mut(id as usize) {
                *slot = name;
            }
        }
        Some(table)
    };
    Ok(ContactLog { graph, names, directed })
}

/// Writes a log that [`parse_tsv`] reads back to the same graph.
pub fn write_tsv(log: &ContactLog) -> String {
    let g = &log.graph;
    let mut out = String::new();
    let _ = writeln!(out, "@vertices {}", g.vertices());
    let _ = writeln!(out, "@lifetime {}", g.lifetime());
    if let Some(names) = &log.names {
        for (i, name) in names.iter().enumerate() {
            if !name.is_empty() {
                let _ = writeln!(out, "@node {i} {name}");
            }
        }
    }
    for c in g.contacts() {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", log.label(c.u), log.label(c.v), c.begin, c.end);
    }
    out
}

/// Reads a text log or a binary container; a container's graph is
/// recovered from the index it holds.
pub fn read_path(path: impl AsRef<Path>) -> Result<ContactLog> {
    let bytes = std::fs::read(path)?;
    if is_container(&bytes) {
        let c = Container::from_bytes(&bytes)?;
        return Ok(ContactLog::new(c.index.to_graph()?, c.names));
    }
    let text = String::from_utf8(bytes).map_err(|e| parse_err(0, format!("not UTF-8 text: {e}")))?;
    parse_tsv(&text)
}
