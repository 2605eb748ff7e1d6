//! Space-efficient in-memory indexes for temporal graphs.
//!
//! Six structures answer the same eight low-level queries (see
//! [`TemporalIndex`]): [`EdgeLog`], [`EveLog`], [`Cas`], [`Cet`], [`Tgcsa`]
//! and [`CkdTreeIndex`]. [`OracleIndex`] answers them by brute force and is
//! the reference every structure is checked against.

pub mod cas;
pub mod cet;
pub mod ckd;
pub mod codecs;
pub mod container;
pub mod edgelog;
mod error;
pub mod evelog;
pub mod generate;
pub mod ingest;
pub mod model;
pub mod oracle;
pub mod query;
pub mod report;
pub mod succinct;
pub mod tgcsa;

pub use cas::Cas;
pub use cet::Cet;
pub use ckd::{CkdTreeIndex, KdTree};
pub use container::{AnyIndex, BuildOptions, Container, StructureKind};
pub use edgelog::EdgeLog;
pub use error::{Error, Result};
pub use evelog::EveLog;
pub use generate::GenParams;
pub use ingest::ContactLog;
pub use model::{
    canonical_fixture, fixture_graph, validate, Contact, Edge, GraphDims, QueryInterval, Semantics,
    TemporalGraph, TemporalIndex, Time, Vertex,
};
pub use oracle::OracleIndex;
pub use query::{Answer, Query, QueryKind};
pub use report::{BenchOptions, BenchReport, GraphStats};
pub use tgcsa::{PsiEncoding, Tgcsa};
