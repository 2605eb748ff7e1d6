#![allow(dead_code)]

use rand::Rng;
use tgraph_core::{
    fixture_graph, AnyIndex, Answer, BuildOptions, Container, Error, OracleIndex, PsiEncoding, Query, QueryInterval,
    QueryKind, StructureKind, TemporalGraph, TemporalIndex, Vertex,
};

pub const A: Vertex = 0;
pub const B: Vertex = 1;
pub const C: Vertex = 2;
pub const D: Vertex = 3;
pub const E: Vertex = 4;

/// Expected cell of the golden table: an answer or a semantics error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Is(Answer),
    SemanticsError,
}

pub fn columns() -> [QueryInterval; 3] {
    [QueryInterval::point(2), QueryInterval::weak(2, 4), QueryInterval::strong(2, 4)]
}

fn edges(es: &[(Vertex, Vertex)]) -> Cell {
    Cell::Is(Answer::Edges(es.to_vec()))
}

fn vertices(vs: &[Vertex]) -> Cell {
    Cell::Is(Answer::Vertices(vs.to_vec()))
}

/// The eight rows of the golden table on the fixture, one cell per column
/// of [`columns`].
pub fn golden_rows() -> Vec<(QueryKind, Vec<Vertex>, [Cell; 3])> {
    use Cell::*;
    vec![
        (
            QueryKind::HasEdge,
            vec![A, B],
            [Is(Answer::Bool(true)), Is(Answer::Bool(true)), Is(Answer::Bool(false))],
        ),
        (
            QueryKind::NextActivation,
            vec![B, C],
            [Is(Answer::Time(Some(3))), Is(Answer::Time(None)), Is(Answer::Time(None))],
        ),
        (QueryKind::Neighbors, vec![D], [vertices(&[B]), vertices(&[B]), vertices(&[B])]),
        (QueryKind::ReverseNeighbors, vec![D], [vertices(&[A]), vertices(&[A, E]), vertices(&[])]),
        (
            QueryKind::Aggregate,
            vec![],
            [
                edges(&[(A, B), (A, D), (D, B)]),
                edges(&[(A, B), (A, D), (B, C), (B, E), (D, B), (E, D)]),
                edges(&[(D, B)]),
            ],
        ),
        (
            QueryKind::ActivatedEdges,
            vec![],
            [edges(&[(A, D)]), edges(&[(A, D), (B, C), (B, E), (E, D)]), SemanticsError],
        ),
        (QueryKind::DeactivatedEdges, vec![], [edges(&[]), edges(&[(A, B), (A, D)]), SemanticsError]),
        (
            QueryKind::ChangedEdges,
            vec![],
            [edges(&[(A, D)]), edges(&[(A, B), (A, D), (B, C), (B, E), (E, D)]), edges(&[(A, D)])],
        ),
    ]
}

/// Mismatching golden cells of `index`, described for a report.
pub fn golden_failures(index: &(impl TemporalIndex + ?Sized)) -> Vec<String> {
    let mut out = Vec::new();
    for (kind, args, cells) in golden_rows() {
        for (q, want) in columns().into_iter().zip(cells) {
            let got = Query::new(kind, &args, q).unwrap().evaluate(index);
            let ok = match (&got, &want) {
                (Ok(a), Cell::Is(b)) => a == b,
                (Err(Error::Semantics(_)), Cell::SemanticsError) => true,
                _ => false,
            };
            if !ok {
                out.push(format!("{kind} {args:?} {q:?}: got {got:?}, want {want:?}"));
            }
        }
    }
    out
}

/// The two build configurations every structure is exercised under.
pub fn option_sets() -> [BuildOptions; 2] {
    [BuildOptions::default(), BuildOptions { reverse: true, psi: PsiEncoding::Compressed }]
}

pub fn build_all(graph: &TemporalGraph, opts: BuildOptions) -> Vec<AnyIndex> {
    StructureKind::INDEXES.iter().map(|&k| AnyIndex::build_with(k, graph, opts).unwrap()).collect()
}

pub fn round_trip(index: &AnyIndex) -> AnyIndex {
    let bytes = Container::new(index.clone(), None).to_bytes().unwrap();
    Container::from_bytes(&bytes).unwrap().index
}

pub fn same_outcome(a: &tgraph_core::Result<Answer>, b: &tgraph_core::Result<Answer>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(x), Err(y)) => std::mem::discriminant(x) == std::mem::discriminant(y),
        _ => false,
    }
}

/// Random intervals over `[0, τ)` in every semantics.
pub fn random_intervals(rng: &mut impl Rng, lifetime: u32, count: usize) -> Vec<QueryInterval> {
    let mut out = Vec::with_capacity(3 * count);
    for _ in 0..count {
        let a = rng.gen_range(0..lifetime);
        let b = rng.gen_range(0..lifetime);
        let (from, to) = (a.min(b), a.max(b));
        out.extend([QueryInterval::point(from), QueryInterval::weak(from, to), QueryInterval::strong(from, to)]);
    }
    out
}

/// Every query of every kind over all vertex arguments and the given
/// intervals, including `[0, τ)`-boundary points.
pub fn exhaustive_queries(graph: &TemporalGraph, intervals: &[QueryInterval]) -> Vec<Query> {
    let n = graph.vertices();
    let mut out = Vec::new();
    for &q in intervals {
        for u in 0..n {
            for v in 0..n {
                out.push(Query::HasEdge { u, v, q });
                out.push(Query::NextActivation { u, v, q });
            }
            out.push(Query::Neighbors { u, q });
            out.push(Query::ReverseNeighbors { v: u, q });
        }
        out.push(Query::Aggregate { q });
        out.push(Query::ActivatedEdges { q });
        out.push(Query::DeactivatedEdges { q });
        out.push(Query::ChangedEdges { q });
    }
    out
}

/// Compares every index with the oracle on `queries`; returns the first
/// mismatch per index.
pub fn oracle_mismatches(graph: &TemporalGraph, indexes: &[AnyIndex], queries: &[Query]) -> Vec<String> {
    let oracle = OracleIndex::build(graph);
    let expected: Vec<_> = queries.iter().map(|q| q.evaluate(&oracle)).collect();
    let mut out = Vec::new();
    for index in indexes {
        for (q, want) in queries.iter().zip(&expected) {
            let got = q.evaluate(index);
            if !same_outcome(&got, want) {
                out.push(format!("{}: {q:?} got {got:?}, want {want:?}", index.kind()));
                break;
            }
        }
    }
    out
}

pub fn fixture_indexes() -> Vec<AnyIndex> {
    let g = fixture_graph();
    option_sets().iter().flat_map(|&o| build_all(&g, o)).collect()
}
