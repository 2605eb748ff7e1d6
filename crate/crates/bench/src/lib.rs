//! Inputs shared by the benchmarks.

use tgraph_core::generate::uniform;
use tgraph_core::report::workload;
use tgraph_core::{AnyIndex, GenParams, Query, QueryKind, StructureKind, TemporalGraph};

pub const SEED: u64 = 42;

/// A uniform random graph with `contacts` contacts over `vertices`
/// vertices and as many timestamps.
pub fn square_graph(vertices: u32, contacts: usize) -> TemporalGraph {
    uniform(GenParams { vertices, lifetime: vertices, contacts, seed: SEED }).expect("feasible parameters")
}

/// Every compact structure built over `graph`.
pub fn indexes(graph: &TemporalGraph) -> Vec<AnyIndex> {
    StructureKind::INDEXES.iter().map(|&k| AnyIndex::build(k, graph).expect("valid graph")).collect()
}

/// The seeded workload split by query class.
pub fn workload_by_kind(graph: &TemporalGraph, per_class: usize) -> Vec<(QueryKind, Vec<Query>)> {
    let all = workload(graph.dims(), per_class, SEED);
    QueryKind::ALL
        .into_iter()
        .map(|kind| (kind, all.iter().filter(|q| q.kind() == kind).copied().collect()))
        .collect()
}
