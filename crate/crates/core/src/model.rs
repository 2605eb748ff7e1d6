//! Temporal graph data model, query semantics and the shared index contract.
//!
//! A temporal graph is a set of contacts `(u, v, begin, end)` over dense vertex
//! ids `0..n` and timestamps `0..lifetime`. A contact keeps the directed edge
//! `(u, v)` active on the half-open interval `[begin, end)`: it emits an
//! activation event at `begin` and a deactivation event at `end`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;
pub type Time = u32;
pub type Edge = (Vertex, Vertex);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Contact {
    pub u: Vertex,
    pub v: Vertex,
    pub begin: Time,
    pub end: Time,
}

impl Contact {
    pub const fn new(u: Vertex, v: Vertex, begin: Time, end: Time) -> Self {
        Contact { u, v, begin, end }
    }

    pub fn edge(&self) -> Edge {
        (self.u, self.v)
    }

    /// Active at some timestamp of `[from, to]`.
    pub fn overlaps(&self, from: Time, to: Time) -> bool {
        self.begin <= to && self.end > from
    }

    /// Active at every timestamp of `[from, to]`.
    pub fn covers(&self, from: Time, to: Time) -> bool {
        self.begin <= from && self.end > to
    }

    pub fn matches(&self, q: &QueryInterval) -> bool {
        match q.semantics {
            Semantics::Point | Semantics::Weak => self.overlaps(q.from, q.to),
            Semantics::Strong => self.covers(q.from, q.to),
        }
    }

    pub fn reversed(&self) -> Contact {
        Contact::new(self.v, self.u, self.begin, self.end)
    }
}

impl fmt::Display for Contact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({},{}),{},{})", self.u, self.v, self.begin, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Semantics {
    Point,
    Weak,
    Strong,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Point => "point",
            Semantics::Weak => "weak",
            Semantics::Strong => "strong",
        })
    }
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "point" => Ok(Semantics::Point),
            "weak" => Ok(Semantics::Weak),
            "strong" => Ok(Semantics::Strong),
            other => Err(Error::Semantics(format!("unknown semantics `{other}`"))),
        }
    }
}

/// A closed query interval `[from, to]` with its semantics.
///
/// An interval with `from == to` is always a point query: weak and strong
/// semantics coincide there, so construction normalizes them to
/// [`Semantics::Point`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QueryInterval {
    pub from: Time,
    pub to: Time,
    pub semantics: Semantics,
}

impl QueryInterval {
    pub fn new(from: Time, to: Time, semantics: Semantics) -> Result<Self> {
        if from > to {
            return Err(Error::range(format!("interval [{from},{to}] is reversed")));
        }
        if semantics == Semantics::Point && from != to {
            return Err(Error::Semantics(format!(
                "point semantics needs a single timestamp, got [{from},{to}]"
            )));
        }
        let semantics = if from == to { Semantics::Point } else { semantics };
        Ok(QueryInterval { from, to, semantics })
    }

    pub fn point(t: Time) -> Self {
        QueryInterval { from: t, to: t, semantics: Semantics::Point }
    }

    /// Panics if `from > to`.
    pub fn weak(from: Time, to: Time) -> Self {
        Self::new(from, to, Semantics::Weak).expect("valid interval")
    }

    /// Panics if `from > to`.
    pub fn strong(from: Time, to: Time) -> Self {
        Self::new(from, to, Semantics::Strong).expect("valid interval")
    }

    pub fn is_strong(&self) -> bool {
        self.semantics == Semantics::Strong
    }

    /// The same interval read with weak semantics.
    pub fn as_weak(&self) -> Self {
        let semantics = if self.from == self.to { Semantics::Point } else { Semantics::Weak };
        QueryInterval { semantics, ..*self }
    }
}

impl fmt::Display for QueryInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}] {}", self.from, self.to, self.semantics)
    }
}

/// Vertex count and lifetime of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDims {
    pub vertices: u32,
    pub lifetime: u32,
}

impl GraphDims {
    pub fn new(vertices: u32, lifetime: u32) -> Self {
        GraphDims { vertices, lifetime }
    }

    pub fn check_vertex(&self, u: Vertex) -> Result<()> {
        if u < self.vertices {
            Ok(())
        } else {
            Err(Error::range(format!("vertex {u} outside [0,{})", self.vertices)))
        }
    }

    pub fn check_time(&self, t: Time) -> Result<()> {
        if t < self.lifetime {
            Ok(())
        } else {
            Err(Error::range(format!("timestamp {t} outside [0,{})", self.lifetime)))
        }
    }

    pub fn check_interval(&self, q: &QueryInterval) -> Result<()> {
        if q.from > q.to {
            return Err(Error::range(format!("interval [{},{}] is reversed", q.from, q.to)));
        }
        self.check_time(q.to)
    }
}

/// A validated contact set: sorted by `(u, v, begin)`, deduplicated, in
/// range, and with the contacts of one edge strictly separated in time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalGraph {
    dims: GraphDims,
    contacts: Vec<Contact>,
}

impl TemporalGraph {
    pub fn new(contacts: Vec<Contact>, vertices: u32, lifetime: u32) -> Result<Self> {
        let contacts = validate(contacts, vertices, lifetime)?;
        Ok(TemporalGraph { dims: GraphDims::new(vertices, lifetime), contacts })
    }

    pub fn empty(vertices: u32, lifetime: u32) -> Self {
        TemporalGraph { dims: GraphDims::new(vertices, lifetime), contacts: Vec::new() }
    }

    pub fn dims(&self) -> GraphDims {
        self.dims
    }

    pub fn vertices(&self) -> u32 {
        self.dims.vertices
    }

    pub fn lifetime(&self) -> u32 {
        self.dims.lifetime
    }

    pub fn contacts(&self) -> &[Contact] {
        &self.contacts
    }

    /// Number of distinct edges of the aggregate graph.
    pub fn edge_count(&self) -> usize {
        let mut m = 0;
        let mut last = None;
        for c in &self.contacts {
            if last != Some(c.edge()) {
                m += 1;
                last = Some(c.edge());
            }
        }
        m
    }

    /// The same graph with every edge reversed.
    pub fn transposed(&self) -> TemporalGraph {
        let mut contacts: Vec<Contact> = self.contacts.iter().map(Contact::reversed).collect();
        contacts.sort_unstable();
        TemporalGraph { dims: self.dims, contacts }
    }
}

/// Checks and canonicalizes a contact list.
///
/// Contacts are sorted by `(u, v, begin)` and exact duplicates removed. Two
/// contacts of the same edge must be separated: the later one has to begin
/// strictly after the earlier one ends.
pub fn validate(mut contacts: Vec<Contact>, vertices: u32, lifetime: u32) -> Result<Vec<Contact>> {
    let reject = |c: &Contact, reason: String| Err(Error::Validation { contact: *c, reason });
    for c in &contacts {
        if c.u >= vertices || c.v >= vertices {
            return reject(c, format!("vertex id outside [0,{vertices})"));
        }
        if c.begin >= lifetime || c.end >= lifetime {
            return reject(c, format!("timestamp outside [0,{lifetime})"));
        }
        if c.begin >= c.end {
            return reject(c, "contact must begin before it ends".to_string());
        }
    }
    contacts.sort_unstable();
    contacts.dedup();
    for w in contacts.windows(2) {
        if w[0].edge() == w[1].edge() && w[1].begin <= w[0].end {
            return reject(&w[1], format!("overlaps or touches the earlier contact {}", w[0]));
        }
    }
    Ok(contacts)
}

/// Vertex names of the five-vertex example graph, in id order.
pub const FIXTURE_NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];
pub const FIXTURE_VERTICES: u32 = 5;
pub const FIXTURE_LIFETIME: u32 = 7;

/// The seven-contact example graph over vertices `a..e` (ids `0..5`) and
/// timestamps `0..7`.
pub fn canonical_fixture() -> Vec<Contact> {
    const A: Vertex = 0;
    const B: Vertex = 1;
    const C: Vertex = 2;
    const D: Vertex = 3;
    const E: Vertex = 4;
    vec![
        Contact::new(A, B, 1, 3),
        Contact::new(A, D, 2, 3),
        Contact::new(A, D, 4, 6),
        Contact::new(B, C, 3, 6),
        Contact::new(B, E, 3, 5),
        Contact::new(D, B, 0, 6),
        Contact::new(E, D, 3, 5),
    ]
}

pub fn fixture_graph() -> TemporalGraph {
    TemporalGraph::new(canonical_fixture(), FIXTURE_VERTICES, FIXTURE_LIFETIME)
        .expect("fixture is valid")
}

/// The query surface shared by every index and the brute-force oracle.
///
/// All set-valued answers are sorted and free of duplicates. Activation
/// queries only have weak semantics and fail with [`Error::Semantics`] when
/// asked for a strong interval.
pub trait TemporalIndex {
    fn dims(&self) -> GraphDims;
    fn contact_count(&self) -> usize;
    /// Measured size of the built structure.
    fn space_bits(&self) -> u64;

    fn has_edge(&self, u: Vertex, v: Vertex, q: QueryInterval) -> Result<bool>;
    /// Smallest activation time `>= t` of edge `(u, v)`.
    fn next_activation(&self, u: Vertex, v: Vertex, t: Time) -> Result<Option<Time>>;
    fn neighbors(&self, u: Vertex, q: QueryInterval) -> Result<Vec<Vertex>>;
    fn reverse_neighbors(&self, v: Vertex, q: QueryInterval) -> Result<Vec<Vertex>>;
    fn aggregate(&self, q: QueryInterval) -> Result<Vec<Edge>>;
    fn activated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>>;
    fn deactivated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>>;

    /// Weak: edges with an activation or deactivation event in the interval.
    /// Strong: edges with both kinds of event in the interval.
    fn changed_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        let weak = q.as_weak();
        let on = self.activated_edges(weak)?;
        let off = self.deactivated_edges(weak)?;
        Ok(if q.is_strong() { sorted_intersection(&on, &off) } else { sorted_union(&on, &off) })
    }
}

/// Rejects strong intervals for the activation-style queries.
pub(crate) fn require_weak(q: &QueryInterval, query: &str) -> Result<()> {
    if q.is_strong() {
        Err(Error::Semantics(format!("{query} has no strong semantics")))
    } else {
        Ok(())
    }
}

pub(crate) fn sorted_union<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub(crate) fn sorted_intersection<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_matches_example() {
        let c = canonical_fixture();
        assert_eq!(c.len(), 7);
        assert!(c.contains(&Contact::new(0, 1, 1, 3)));
        assert!(c.contains(&Contact::new(3, 1, 0, 6)));
        let g = fixture_graph();
        assert_eq!(g.contacts().len(), 7);
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn validate_accepts_empty() {
        assert!(validate(vec![], 3, 3).unwrap().is_empty());
    }

    #[test]
    fn validate_rejects_zero_duration() {
        let err = validate(vec![Contact::new(0, 1, 3, 3)], 5, 7).unwrap_err();
        match err {
            Error::Validation { contact, .. } => assert_eq!(contact, Contact::new(0, 1, 3, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_out_of_range() {
        assert!(validate(vec![Contact::new(5, 1, 0, 1)], 5, 7).is_err());
        assert!(validate(vec![Contact::new(0, 1, 0, 7)], 5, 7).is_err());
    }

    #[test]
    fn validate_sorts_and_dedups() {
        let c = vec![Contact::new(1, 0, 2, 3), Contact::new(0, 1, 0, 1), Contact::new(1, 0, 2, 3)];
        let v = validate(c, 2, 4).unwrap();
        assert_eq!(v, vec![Contact::new(0, 1, 0, 1), Contact::new(1, 0, 2, 3)]);
    }

    #[test]
    fn validate_rejects_overlap_and_touching() {
        assert!(validate(vec![Contact::new(0, 1, 0, 3), Contact::new(0, 1, 2, 5)], 2, 6).is_err());
        assert!(validate(vec![Contact::new(0, 1, 0, 3), Contact::new(0, 1, 3, 5)], 2, 6).is_err());
        assert!(validate(vec![Contact::new(0, 1, 0, 3), Contact::new(0, 1, 4, 5)], 2, 6).is_ok());
    }

    #[test]
    fn interval_normalizes_points() {
        let q = QueryInterval::new(2, 2, Semantics::Strong).unwrap();
        assert_eq!(q.semantics, Semantics::Point);
        assert!(QueryInterval::new(2, 4, Semantics::Point).is_err());
        assert!(QueryInterval::new(4, 2, Semantics::Weak).is_err());
    }

    #[test]
    fn contact_semantics_are_half_open() {
        let c = Contact::new(0, 1, 1, 3);
        assert!(c.matches(&QueryInterval::point(1)));
        assert!(c.matches(&QueryInterval::point(2)));
        assert!(!c.matches(&QueryInterval::point(3)));
        assert!(c.matches(&QueryInterval::weak(2, 4)));
        assert!(!c.matches(&QueryInterval::strong(2, 4)));
        assert!(c.matches(&QueryInterval::strong(1, 2)));
    }
}
