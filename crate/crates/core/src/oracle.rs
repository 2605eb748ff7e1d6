//! Brute-force reference implementation: every query is a linear scan over
//! the contact list.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{
    require_weak, Contact, Edge, GraphDims, QueryInterval, TemporalGraph, TemporalIndex, Time,
    Vertex,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleIndex {
    graph: TemporalGraph,
}

impl OracleIndex {
    pub fn build(graph: &TemporalGraph) -> Self {
        OracleIndex { graph: graph.clone() }
    }

    pub fn graph(&self) -> &TemporalGraph {
        &self.graph
    }

    fn contacts(&self) -> &[Contact] {
        self.graph.contacts()
    }

    fn edges_where(&self, pred: impl Fn(&Contact) -> bool) -> Vec<Edge> {
        let mut out: Vec<Edge> = self.contacts().iter().filter(|c| pred(c)).map(Contact::edge).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl TemporalIndex for OracleIndex {
    fn dims(&self) -> GraphDims {
        self.graph.dims()
    }

    fn contact_count(&self) -> usize {
        self.contacts().len()
    }

    fn space_bits(&self) -> u64 {
        (std::mem::size_of_val(self.contacts()) * 8) as u64
    }

    fn has_edge(&self, u: Vertex, v: Vertex, q: QueryInterval) -> Result<bool> {
        let dims = self.dims();
        dims.check_vertex(u)?;
        dims.check_vertex(v)?;
        dims.check_interval(&q)?;
        Ok(self.contacts().iter().any(|c| c.u == u && c.v == v && c.matches(&q)))
    }

    fn next_activation(&self, u: Vertex, v: Vertex, t: Time) -> Result<Option<Time>> {
        let dims = self.dims();
        dims.check_vertex(u)?;
        dims.check_vertex(v)?;
        dims.check_time(t)?;
        Ok(self
            .contacts()
            .iter()
            .filter(|c| c.u == u && c.v == v && c.begin >= t)
            .map(|c| c.begin)
            .min())
    }

    fn neighbors(&self, u: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        let dims = self.dims();
        dims.check_vertex(u)?;
        dims.check_interval(&q)?;
        Ok(self.edges_where(|c| c.u == u && c.matches(&q)).into_iter().map(|e| e.1).collect())
    }

    fn reverse_neighbors(&self, v: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        let dims = self.dims();
        dims.check_vertex(v)?;
        dims.check_interval(&q)?;
        let mut out: Vec<Vertex> =
            self.edges_where(|c| c.v == v && c.matches(&q)).into_iter().map(|e| e.0).collect();
        out.sort_unstable();
        Ok(out)
    }

    fn aggregate(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims().check_interval(&q)?;
        Ok(self.edges_where(|c| c.matches(&q)))
    }

    fn activated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims().check_interval(&q)?;
        require_weak(&q, "activated_edges")?;
        Ok(self.edges_where(|c| (q.from..=q.to).contains(&c.begin)))
    }

    fn deactivated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims().check_interval(&q)?;
        require_weak(&q, "deactivated_edges")?;
        Ok(self.edges_where(|c| (q.from..=q.to).contains(&c.end)))
    }

    fn changed_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims().check_interval(&q)?;
        let inside = |t: Time| (q.from..=q.to).contains(&t);
        if q.is_strong() {
            let on = self.edges_where(|c| inside(c.begin));
            let off = self.edges_where(|c| inside(c.end));
            Ok(on.into_iter().filter(|e| off.binary_search(e).is_ok()).collect())
        } else {
            Ok(self.edges_where(|c| inside(c.begin) || inside(c.end)))
        }
    }
}
