//! One value type for each of the eight queries, so callers can store,
//! print and replay workloads without matching on index methods.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Edge, QueryInterval, Semantics, TemporalIndex, Time, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QueryKind {
    HasEdge,
    NextActivation,
    Neighbors,
    ReverseNeighbors,
    Aggregate,
    ActivatedEdges,
    DeactivatedEdges,
    ChangedEdges,
}

impl QueryKind {
    pub const ALL: [QueryKind; 8] = [
        QueryKind::HasEdge,
        QueryKind::NextActivation,
        QueryKind::Neighbors,
        QueryKind::ReverseNeighbors,
        QueryKind::Aggregate,
        QueryKind::ActivatedEdges,
        QueryKind::DeactivatedEdges,
        QueryKind::ChangedEdges,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QueryKind::HasEdge => "has_edge",
            QueryKind::NextActivation => "next_activation",
            QueryKind::Neighbors => "neighbors",
            QueryKind::ReverseNeighbors => "neighbors_r",
            QueryKind::Aggregate => "aggregate",
            QueryKind::ActivatedEdges => "activated_edges",
            QueryKind::DeactivatedEdges => "deactivated_edges",
            QueryKind::ChangedEdges => "changed_edges",
        }
    }

    /// Number of vertex arguments the query takes.
    pub fn arity(self) -> usize {
        match self {
            QueryKind::HasEdge | QueryKind::NextActivation => 2,
            QueryKind::Neighbors | QueryKind::ReverseNeighbors => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QueryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QueryKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse { line: 0, message: format!("unknown query `{s}`") })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Query {
    HasEdge { u: Vertex, v: Vertex, q: QueryInterval },
    /// Only point intervals have an answer; interval forms yield nothing.
    NextActivation { u: Vertex, v: Vertex, q: QueryInterval },
    Neighbors { u: Vertex, q: QueryInterval },
    ReverseNeighbors { v: Vertex, q: QueryInterval },
    Aggregate { q: QueryInterval },
    ActivatedEdges { q: QueryInterval },
    DeactivatedEdges { q: QueryInterval },
    ChangedEdges { q: QueryInterval },
}

impl Query {
    /// Builds a query from its kind, vertex arguments and interval.
    pub fn new(kind: QueryKind, vertices: &[Vertex], q: QueryInterval) -> Result<Self> {
        if vertices.len() != kind.arity() {
            return Err(Error::Parse {
                line: 0,
                message: format!("{kind} takes {} vertex argument(s), got {}", kind.arity(), vertices.len()),
            });
        }
        Ok(match kind {
            QueryKind::HasEdge => Query::HasEdge { u: vertices[0], v: vertices[1], q },
            QueryKind::NextActivation => Query::NextActivation { u: vertices[0], v: vertices[1], q },
            QueryKind::Neighbors => Query::Neighbors { u: vertices[0], q },
            QueryKind::ReverseNeighbors => Query::ReverseNeighbors { v: vertices[0], q },
            QueryKind::Aggregate => Query::Aggregate { q },
            QueryKind::ActivatedEdges => Query::ActivatedEdges { q },
            QueryKind::DeactivatedEdges => Query::DeactivatedEdges { q },
            QueryKind::ChangedEdges => Query::ChangedEdges { q },
        })
    }

    pub fn kind(&self) -> QueryKind {
        match self {
            Query::HasEdge { .. } => QueryKind::HasEdge,
            Query::NextActivation { .. } => QueryKind::NextActivation,
            Query::Neighbors { .. } => QueryKind::Neighbors,
            Query::ReverseNeighbors { .. } => QueryKind::ReverseNeighbors,
            Query::Aggregate { .. } => QueryKind::Aggregate,
            Query::ActivatedEdges { .. } => QueryKind::ActivatedEdges,
            Query::DeactivatedEdges { .. } => QueryKind::DeactivatedEdges,
            Query::ChangedEdges { .. } => QueryKind::ChangedEdges,
        }
    }

    pub fn interval(&self) -> QueryInterval {
        match *self {
            Query::HasEdge { q, .. }
            | Query::NextActivation { q, .. }
            | Query::Neighbors { q, .. }
            | Query::ReverseNeighbors { q, .. }
            | Query::Aggregate { q }
            | Query::ActivatedEdges { q }
            | Query::DeactivatedEdges { q }
            | Query::ChangedEdges { q } => q,
        }
    }

    pub fn evaluate(&self, index: &(impl TemporalIndex + ?Sized)) -> Result<Answer> {
        Ok(match *self {
            Query::HasEdge { u, v, q } => Answer::Bool(index.has_edge(u, v, q)?),
            Query::NextActivation { u, v, q } => {
                let found = index.next_activation(u, v, q.from)?;
                Answer::Time(if q.semantics == Semantics::Point { found } else { None })
            }
            Query::Neighbors { u, q } => Answer::Vertices(index.neighbors(u, q)?),
            Query::ReverseNeighbors { v, q } => Answer::Vertices(index.reverse_neighbors(v, q)?),
            Query::Aggregate { q } => Answer::Edges(index.aggregate(q)?),
            Query::ActivatedEdges { q } => Answer::Edges(index.activated_edges(q)?),
            Query::DeactivatedEdges { q } => Answer::Edges(index.deactivated_edges(q)?),
            Query::ChangedEdges { q } => Answer::Edges(index.changed_edges(q)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Answer {
    Bool(bool),
    Time(Option<Time>),
    Vertices(Vec<Vertex>),
    Edges(Vec<Edge>),
}

impl Answer {
    /// Renders the answer with `name` mapping vertex ids to labels: `true`,
    /// a time, or space-separated sets. An absent time prints as `{}`.
    pub fn render(&self, name: impl Fn(Vertex) -> String) -> String {
        match self {
            Answer::Bool(b) => b.to_string(),
            Answer::Time(Some(t)) => t.to_string(),
            Answer::Time(None) => "{}".to_string(),
            Answer::Vertices(vs) if vs.is_empty() => "{}".to_string(),
            Answer::Vertices(vs) => vs.iter().map(|&v| name(v)).collect::<Vec<_>>().join(" "),
            Answer::Edges(es) if es.is_empty() => "{}".to_string(),
            Answer::Edges(es) => {
                es.iter().map(|&(u, v)| format!("({},{})", name(u), name(v))).collect::<Vec<_>>().join(" ")
            }
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|v| v.to_string()))
    }
}
