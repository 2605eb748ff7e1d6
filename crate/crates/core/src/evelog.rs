//! Adjacency log of events.
//!
//! Each source vertex keeps its time-ordered list of `(target, time)`
//! activation and deactivation events. Whether an event opens or closes a
//! contact is never stored: an edge is active at `t` iff the number of its
//! events up to `t` is odd. Targets are ETDC-coded against one dictionary
//! for the whole structure and times are delta-gap coded.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::codecs::{deltagap, EtdcDictionary};
use crate::error::Result;
use crate::model::{
    require_weak, Edge, GraphDims, QueryInterval, Semantics, TemporalGraph, TemporalIndex, Time,
    Vertex,
};
use crate::succinct::IntVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveLog {
    dims: GraphDims,
    contacts: usize,
    dictionary: Option<EtdcDictionary>,
    target_offsets: IntVector,
    targets: Vec<u8>,
    time_offsets: IntVector,
    times: Vec<u8>,
    reverse: Option<Box<EveLog>>,
}

/// The decoded event list of one source vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EventList {
    pub targets: Vec<Vertex>,
    pub times: Vec<Time>,
}

impl EventList {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Number of events with time `<= t`.
    pub fn cut(&self, t: Time) -> usize {
        self.times.partition_point(|&x| x <= t)
    }

    /// Number of events with time `< t`.
    fn cut_before(&self, t: Time) -> usize {
        self.times.partition_point(|&x| x < t)
    }

    fn count(&self, v: Vertex, range: std::ops::Range<usize>) -> usize {
        self.targets[range].iter().filter(|&&x| x == v).count()
    }

    fn histogram(&self, range: std::ops::Range<usize>) -> BTreeMap<Vertex, usize> {
        let mut h = BTreeMap::new();
        for &v in &self.targets[range] {
            *h.entry(v).or_insert(0) += 1;
        }
        h
    }

    /// Calls `f(target, time, is_activation)` for every event in order.
    fn for_each_event(&self, mut f: impl FnMut(Vertex, Time, bool)) {
        let mut seen: BTreeMap<Vertex, usize> = BTreeMap::new();
        for (&v, &t) in self.targets.iter().zip(&self.times) {
            let c = seen.entry(v).or_insert(0);
            *c += 1;
            f(v, t, *c % 2 == 1);
        }
    }
}

/// Combines the frequency before the interval and inside it.
pub(crate) fn parity_match(semantics: Semantics, before: usize, inside: usize) -> bool {
    let active_at_start = before % 2 == 1;
    match semantics {
        Semantics::Point => active_at_start,
        Semantics::Weak => active_at_start || inside > 0,
        Semantics::Strong => active_at_start && inside == 0,
    }
}

impl EveLog {
    pub fn build(graph: &TemporalGraph, with_reverse: bool) -> Result<Self> {
        let n = graph.vertices() as usize;
        let mut per_source: Vec<Vec<(Time, Vertex)>> = vec![Vec::new(); n];
        for c in graph.contacts() {
            per_source[c.u as usize].push((c.begin, c.v));
            per_source[c.u as usize].push((c.end, c.v));
        }
        let all_targets: Vec<u64> = graph.contacts().iter().map(|c| u64::from(c.v)).collect();
        let dictionary =
            if all_targets.is_empty() { None } else { Some(EtdcDictionary::from_stream(&all_targets)?) };

        let mut target_offsets = Vec::with_capacity(n + 1);
        let mut time_offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut times = Vec::new();
        for events in &mut per_source {
            events.sort_unstable();
            target_offsets.push(targets.len() as u64);
            time_offsets.push(times.len() as u64);
            if let Some(dict) = &dictionary {
                for &(_, v) in events.iter() {
                    dict.encode_symbol(u64::from(v), &mut targets)?;
                }
            }
            let ts: Vec<u64> = events.iter().map(|e| u64::from(e.0)).collect();
            deltagap::write_non_decreasing(&ts, &mut times)?;
        }
        target_offsets.push(targets.len() as u64);
        time_offsets.push(times.len() as u64);

        let reverse = if with_reverse {
            Some(Box::new(EveLog::build(&graph.transposed(), false)?))
        } else {
            None
        };
        Ok(EveLog {
            dims: graph.dims(),
            contacts: graph.contacts().len(),
            dictionary,
            target_offsets: IntVector::from_slice(&target_offsets),
            targets,
            time_offsets: IntVector::from_slice(&time_offsets),
            times,
            reverse,
        })
    }

    pub fn has_reverse(&self) -> bool {
        self.reverse.is_some()
    }

    /// Decompresses the event list of `u`.
    pub fn events(&self, u: Vertex) -> Result<EventList> {
        let u = u as usize;
        let tb = &self.times[self.time_offsets.get(u) as usize..self.time_offsets.get(u + 1) as usize];
        let mut pos = 0;
        let times: Vec<Time> =
            deltagap::read_non_decreasing(tb, &mut pos)?.into_iter().map(|t| t as Time).collect();
        let vb = &self.targets[self.target_offsets.get(u) as usize..self.target_offsets.get(u + 1) as usize];
        let targets = match &self.dictionary {
            Some(d) => d.decode(vb)?.into_iter().map(|v| v as Vertex).collect(),
            None => Vec::new(),
        };
        if targets.len() != times.len() {
            return Err(crate::Error::Decoding(format!("event lists of vertex {u} disagree in length")));
        }
        Ok(EventList { targets, times })
    }

    fn matching_targets(&self, list: &EventList, q: &QueryInterval) -> Vec<Vertex> {
        let i = list.cut(q.from);
        let j = list.cut(q.to);
        let before = list.histogram(0..i);
        let inside = list.histogram(i..j);
        let mut out: Vec<Vertex> = before
            .keys()
            .chain(inside.keys())
            .copied()
            .filter(|v| {
                parity_match(
                    q.semantics,
                    before.get(v).copied().unwrap_or(0),
                    inside.get(v).copied().unwrap_or(0),
                )
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Reverse neighbors by decompressing every event list.
    pub fn reverse_neighbors_by_scan(&self, v: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(v)?;
        self.dims.check_interval(&q)?;
        let mut out = Vec::new();
        for u in 0..self.dims.vertices {
            let list = self.events(u)?;
            let i = list.cut(q.from);
            let j = list.cut(q.to);
            if parity_match(q.semantics, list.count(v, 0..i), list.count(v, i..j)) {
                out.push(u);
            }
        }
        Ok(out)
    }

    /// Edges with an event of the requested kind inside `[from, to]`.
    fn edges_with_events(&self, q: &QueryInterval, want: impl Fn(bool, bool) -> bool) -> Result<Vec<Edge>> {
        let mut out = Vec::new();
        for u in 0..self.dims.vertices {
            let list = self.events(u)?;
            let mut kinds: BTreeMap<Vertex, (bool, bool)> = BTreeMap::new();
            list.for_each_event(|v, t, on| {
                if (q.from..=q.to).contains(&t) {
                    let k = kinds.entry(v).or_default();
                    if on {
                        k.0 = true;
                    } else {
                        k.1 = true;
                    }
                }
            });
            out.extend(kinds.into_iter().filter(|(_, k)| want(k.0, k.1)).map(|(v, _)| (u, v)));
        }
        Ok(out)
    }

    fn own_space_bits(&self) -> u64 {
        let offsets = self.target_offsets.space_bits() + self.time_offsets.space_bits();
        let dict = self.dictionary.as_ref().map_or(0, EtdcDictionary::space_bits);
        ((self.targets.len() + self.times.len()) * 8) as u64 + offsets + dict + 4 * 64
    }
}

impl TemporalIndex for EveLog {
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
        let list = self.events(u)?;
        let i = list.cut(q.from);
        let j = list.cut(q.to);
        Ok(parity_match(q.semantics, list.count(v, 0..i), list.count(v, i..j)))
    }

    fn next_activation(&self, u: Vertex, v: Vertex, t: Time) -> Result<Option<Time>> {
        self.dims.check_vertex(u)?;
        self.dims.check_vertex(v)?;
        self.dims.check_time(t)?;
        let list = self.events(u)?;
        let start = list.cut_before(t);
        let mut parity = list.count(v, 0..start);
        for k in start..list.len() {
            if list.targets[k] == v {
                parity += 1;
                if parity % 2 == 1 {
                    return Ok(Some(list.times[k]));
                }
            }
        }
        Ok(None)
    }

    fn neighbors(&self, u: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(u)?;
        self.dims.check_interval(&q)?;
        Ok(self.matching_targets(&self.events(u)?, &q))
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
        self.edges_with_events(&q, |on, _| on)
    }

    fn deactivated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        require_weak(&q, "deactivated_edges")?;
        self.edges_with_events(&q, |_, off| off)
    }

    fn changed_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        if q.is_strong() {
            self.edges_with_events(&q, |on, off| on && off)
        } else {
            self.edges_with_events(&q, |on, off| on || off)
        }
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

    fn log() -> EveLog {
        EveLog::build(&fixture_graph(), false).unwrap()
    }

    #[test]
    fn fixture_event_lists() {
        let log = log();
        let a = log.events(A).unwrap();
        assert_eq!(a.targets, vec![B, D, B, D, D, D]);
        assert_eq!(a.times, vec![1, 2, 3, 3, 4, 6]);
        assert!(log.events(C).unwrap().is_empty());
        let d = log.events(D).unwrap();
        assert_eq!(d.targets, vec![B, B]);
        assert_eq!(d.times, vec![0, 6]);
    }

    #[test]
    fn parity_queries() {
        let log = log();
        assert!(log.has_edge(A, B, QueryInterval::point(2)).unwrap());
        assert!(log.has_edge(A, B, QueryInterval::weak(2, 4)).unwrap());
        assert!(!log.has_edge(A, B, QueryInterval::strong(2, 4)).unwrap());
        assert!(!log.has_edge(D, B, QueryInterval::point(6)).unwrap());
        assert!(log.has_edge(E, D, QueryInterval::point(3)).unwrap());
        assert_eq!(log.neighbors(A, QueryInterval::point(2)).unwrap(), vec![B, D]);
        assert!(log.neighbors(C, QueryInterval::weak(0, 6)).unwrap().is_empty());
        assert_eq!(log.changed_edges(QueryInterval::strong(2, 4)).unwrap(), vec![(A, D)]);
        assert_eq!(log.next_activation(A, D, 3).unwrap(), Some(4));
        assert_eq!(log.next_activation(A, B, 2).unwrap(), None);
    }

    #[test]
    fn twin_and_scan_agree() {
        let log = EveLog::build(&fixture_graph(), true).unwrap();
        assert_eq!(log.reverse_neighbors(D, QueryInterval::weak(2, 4)).unwrap(), vec![A, E]);
        for v in 0..5 {
            let q = QueryInterval::weak(1, 3);
            assert_eq!(log.reverse_neighbors(v, q).unwrap(), log.reverse_neighbors_by_scan(v, q).unwrap());
        }
    }

    #[test]
    fn empty_graph_has_no_dictionary() {
        let log = EveLog::build(&TemporalGraph::empty(3, 3), false).unwrap();
        assert!(log.events(0).unwrap().is_empty());
        assert!(log.aggregate(QueryInterval::weak(0, 2)).unwrap().is_empty());
    }
}
