//! Time-interval log per edge.
//!
//! Three levels, like an inverted index: an offset table indexed by source
//! vertex, a delta-gap compressed list of targets per source, and a
//! delta-gap compressed list of activity intervals per edge. All lists live
//! in two contiguous byte arenas.
//!
//! An edge's interval list is stored as the flattened boundary sequence
//! `b0 e0 b1 e1 ...`, which is strictly increasing because contacts of one
//! edge are disjoint and separated.

use serde::{Deserialize, Serialize};

use crate::codecs::deltagap;
use crate::error::{Error, Result};
use crate::model::{
    require_weak, Contact, Edge, GraphDims, QueryInterval, Semantics, TemporalGraph,
    TemporalIndex, Time, Vertex,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLog {
    dims: GraphDims,
    contacts: usize,
    /// Byte offset of each source's target list; `n + 1` entries.
    target_offsets: Vec<u32>,
    targets: Vec<u8>,
    /// Global index of each source's first edge; `n + 1` entries.
    edge_base: Vec<u32>,
    /// Byte offset of each edge's interval list; `m + 1` entries.
    interval_offsets: Vec<u32>,
    intervals: Vec<u8>,
    reverse: Option<Box<EdgeLog>>,
}

type Interval = (Time, Time);

impl EdgeLog {
    pub fn build(graph: &TemporalGraph, with_reverse: bool) -> Result<Self> {
        let n = graph.vertices() as usize;
        let mut target_offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut edge_base = Vec::with_capacity(n + 1);
        let mut interval_offsets = Vec::new();
        let mut intervals = Vec::new();

        let contacts = graph.contacts();
        let mut ci = 0;
        let mut edges = 0u32;
        for u in 0..n as Vertex {
            target_offsets.push(targets.len() as u32);
            edge_base.push(edges);
            let mut list = Vec::new();
            while ci < contacts.len() && contacts[ci].u == u {
                let v = contacts[ci].v;
                let mut bounds = Vec::new();
                while ci < contacts.len() && contacts[ci].edge() == (u, v) {
                    bounds.push(u64::from(contacts[ci].begin));
                    bounds.push(u64::from(contacts[ci].end));
                    ci += 1;
                }
                interval_offsets.push(intervals.len() as u32);
                deltagap::write_sorted(&bounds, &mut intervals)?;
                list.push(u64::from(v));
                edges += 1;
            }
            deltagap::write_sorted(&list, &mut targets)?;
        }
        target_offsets.push(targets.len() as u32);
        edge_base.push(edges);
        interval_offsets.push(intervals.len() as u32);

        let reverse = if with_reverse {
            Some(Box::new(EdgeLog::build(&graph.transposed(), false)?))
        } else {
            None
        };
        Ok(EdgeLog {
            dims: graph.dims(),
            contacts: contacts.len(),
            target_offsets,
            targets,
            edge_base,
            interval_offsets,
            intervals,
            reverse,
        })
    }

    pub fn has_reverse(&self) -> bool {
        self.reverse.is_some()
    }

    /// Sorted targets of `u`.
    pub fn targets_of(&self, u: Vertex) -> Result<Vec<Vertex>> {
        let u = u as usize;
        let bytes = &self.targets[self.target_offsets[u] as usize..self.target_offsets[u + 1] as usize];
        let mut pos = 0;
        Ok(deltagap::read_sorted(bytes, &mut pos)?.into_iter().map(|x| x as Vertex).collect())
    }

    fn intervals_at(&self, edge: usize) -> Result<Vec<Interval>> {
        let bytes =
            &self.intervals[self.interval_offsets[edge] as usize..self.interval_offsets[edge + 1] as usize];
        let mut pos = 0;
        let bounds = deltagap::read_sorted(bytes, &mut pos)?;
        if bounds.len() % 2 != 0 {
            return Err(Error::Decoding(format!("odd boundary count for edge {edge}")));
        }
        Ok(bounds.chunks_exact(2).map(|p| (p[0] as Time, p[1] as Time)).collect())
    }

    /// Activity intervals of `(u, v)`, or `None` if the edge never exists.
    pub fn edge_intervals(&self, u: Vertex, v: Vertex) -> Result<Option<Vec<Interval>>> {
        let targets = self.targets_of(u)?;
        match targets.binary_search(&v) {
            Ok(k) => Ok(Some(self.intervals_at(self.edge_base[u as usize] as usize + k)?)),
            Err(_) => Ok(None),
        }
    }

    /// Every `(target, intervals)` pair of source `u`.
    fn adjacency(&self, u: Vertex) -> Result<Vec<(Vertex, Vec<Interval>)>> {
        let base = self.edge_base[u as usize] as usize;
        self.targets_of(u)?
            .into_iter()
            .enumerate()
            .map(|(k, v)| Ok((v, self.intervals_at(base + k)?)))
            .collect()
    }

    /// Decompresses the whole index back into its contact list.
    pub fn contacts(&self) -> Result<Vec<Contact>> {
        let mut out = Vec::with_capacity(self.contacts);
        for u in 0..self.dims.vertices {
            for (v, ivs) in self.adjacency(u)? {
                out.extend(ivs.into_iter().map(|(b, e)| Contact::new(u, v, b, e)));
            }
        }
        Ok(out)
    }

    fn scan_edges(&self, mut keep: impl FnMut(&[Interval]) -> bool) -> Result<Vec<Edge>> {
        let mut out = Vec::new();
        for u in 0..self.dims.vertices {
            for (v, ivs) in self.adjacency(u)? {
                if keep(&ivs) {
                    out.push((u, v));
                }
            }
        }
        Ok(out)
    }

    /// Reverse neighbors by decompressing every list.
    pub fn reverse_neighbors_by_scan(&self, v: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(v)?;
        self.dims.check_interval(&q)?;
        let mut out = Vec::new();
        for u in 0..self.dims.vertices {
            let targets = self.targets_of(u)?;
            if let Ok(k) = targets.binary_search(&v) {
                let ivs = self.intervals_at(self.edge_base[u as usize] as usize + k)?;
                if matches_interval(&ivs, &q) {
                    out.push(u);
                }
            }
        }
        Ok(out)
    }

    fn own_space_bits(&self) -> u64 {
        let words = self.target_offsets.len() + self.edge_base.len() + self.interval_offsets.len();
        ((self.targets.len() + self.intervals.len()) * 8 + words * 32) as u64 + 4 * 64
    }
}

/// Some interval of the sorted, disjoint list satisfies `q`.
fn matches_interval(ivs: &[Interval], q: &QueryInterval) -> bool {
    match q.semantics {
        Semantics::Point | Semantics::Weak => {
            let k = ivs.partition_point(|iv| iv.0 <= q.to);
            k > 0 && ivs[k - 1].1 > q.from
        }
        Semantics::Strong => {
            let k = ivs.partition_point(|iv| iv.0 <= q.from);
            k > 0 && ivs[k - 1].1 > q.to
        }
    }
}

fn begins_within(ivs: &[Interval], from: Time, to: Time) -> bool {
    let k = ivs.partition_point(|iv| iv.0 < from);
    k < ivs.len() && ivs[k].0 <= to
}

fn ends_within(ivs: &[Interval], from: Time, to: Time) -> bool {
    let k = ivs.partition_point(|iv| iv.1 < from);
    k < ivs.len() && ivs[k].1 <= to
}

impl TemporalIndex for EdgeLog {
    fn dims(&self) -> GraphDims {
        self.dims
    }

    fn contact_count(&self) -> usize {
        self.contacts
    }

    fn space_bits(&self) -> u64 {
        self.own_space_bits() + self.reverse.as_ref().map_or(0, |r| r.own_space_bits())
    }

    fn has_edge(&self, u: Vertex, v: Vertex, q: QueryInterval) -> Result<bool> {
        self.dims.check_vertex(u)?;
        self.dims.check_vertex(v)?;
        self.dims.check_interval(&q)?;
        Ok(self.edge_intervals(u, v)?.is_some_and(|ivs| matches_interval(&ivs, &q)))
    }

    fn next_activation(&self, u: Vertex, v: Vertex, t: Time) -> Result<Option<Time>> {
        self.dims.check_vertex(u)?;
        self.dims.check_vertex(v)?;
        self.dims.check_time(t)?;
        Ok(self.edge_intervals(u, v)?.and_then(|ivs| {
            let k = ivs.partition_point(|iv| iv.0 < t);
            ivs.get(k).map(|iv| iv.0)
        }))
    }

    fn neighbors(&self, u: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(u)?;
        self.dims.check_interval(&q)?;
        let base = self.edge_base[u as usize] as usize;
        let mut out = Vec::new();
        for (k, v) in self.targets_of(u)?.into_iter().enumerate() {
            if matches_interval(&self.intervals_at(base + k)?, &q) {
                out.push(v);
            }
        }
        Ok(out)
    }

    fn reverse_neighbors(&self, v: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        match &self.reverse {
            Some(twin) => twin.neighbors(v, q),
            None => self.reverse_neighbors_by_scan(v, q),
        }
    }

    fn aggregate(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        let mut out = Vec::new();
        for u in 0..self.dims.vertices {
            out.extend(self.neighbors(u, q)?.into_iter().map(|v| (u, v)));
        }
        Ok(out)
    }

    fn activated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        require_weak(&q, "activated_edges")?;
        self.scan_edges(|ivs| begins_within(ivs, q.from, q.to))
    }

    fn deactivated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        require_weak(&q, "deactivated_edges")?;
        self.scan_edges(|ivs| ends_within(ivs, q.from, q.to))
    }

    fn changed_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        let strong = q.is_strong();
        self.scan_edges(|ivs| {
            let on = begins_within(ivs, q.from, q.to);
            let off = ends_within(ivs, q.from, q.to);
            if strong {
                on && off
            } else {
                on || off
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixture_graph;

    const A: Vertex = 0;
    const B: Vertex = 1;
    const C: Vertex = 2;
    const D: Vertex = 3;
    const E: Vertex = 4;

    #[test]
    fn fixture_layout() {
        let log = EdgeLog::build(&fixture_graph(), false).unwrap();
        assert_eq!(log.targets_of(A).unwrap(), vec![B, D]);
        assert_eq!(log.edge_intervals(A, D).unwrap(), Some(vec![(2, 3), (4, 6)]));
        assert_eq!(log.edge_intervals(A, C).unwrap(), None);
        assert!(log.targets_of(C).unwrap().is_empty());
    }

    #[test]
    fn empty_graph() {
        let log = EdgeLog::build(&TemporalGraph::empty(4, 4), true).unwrap();
        for u in 0..4 {
            assert!(log.targets_of(u).unwrap().is_empty());
        }
        assert!(log.aggregate(QueryInterval::weak(0, 3)).unwrap().is_empty());
    }

    #[test]
    fn fixture_queries() {
        let log = EdgeLog::build(&fixture_graph(), false).unwrap();
        assert!(log.has_edge(A, B, QueryInterval::point(2)).unwrap());
        assert_eq!(log.neighbors(D, QueryInterval::strong(2, 4)).unwrap(), vec![B]);
        assert_eq!(log.next_activation(A, D, 3).unwrap(), Some(4));
        assert_eq!(log.reverse_neighbors(D, QueryInterval::weak(2, 4)).unwrap(), vec![A, E]);
        assert!(log.reverse_neighbors(D, QueryInterval::strong(2, 4)).unwrap().is_empty());
        assert_eq!(log.aggregate(QueryInterval::point(0)).unwrap(), vec![(D, B)]);
        assert_eq!(
            log.activated_edges(QueryInterval::weak(2, 4)).unwrap(),
            vec![(A, D), (B, C), (B, E), (E, D)]
        );
    }

    #[test]
    fn twin_matches_scan() {
        let log = EdgeLog::build(&fixture_graph(), true).unwrap();
        for v in 0..5 {
            for q in [QueryInterval::point(2), QueryInterval::weak(2, 4), QueryInterval::strong(1, 2)] {
                assert_eq!(log.reverse_neighbors(v, q).unwrap(), log.reverse_neighbors_by_scan(v, q).unwrap());
            }
        }
    }

    #[test]
    fn rebuild_from_decoded_is_identical() {
        let g = fixture_graph();
        let log = EdgeLog::build(&g, false).unwrap();
        let decoded = log.contacts().unwrap();
        assert_eq!(decoded, g.contacts());
        let again = EdgeLog::build(&TemporalGraph::new(decoded, 5, 7).unwrap(), false).unwrap();
        assert_eq!(again, log);
    }
}
