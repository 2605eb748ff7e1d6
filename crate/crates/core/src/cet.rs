//! Compact events ordered by time.
//!
//! Every activation and deactivation is a `(u, v)` tuple in one sequence
//! `S`, grouped by timestamp and sorted by tuple inside each group. The
//! bitmap `B` writes `1 0^k` per timestamp, `k` being the number of events
//! at that time. `S` is an interleaved wavelet tree, so fixing either
//! coordinate costs the same and reverse neighbors need no second copy.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::evelog::parity_match;
use crate::model::{
    require_weak, Edge, GraphDims, QueryInterval, TemporalGraph, TemporalIndex, Time, Vertex,
};
use crate::succinct::{BitVector, BitVectorBuilder, InterleavedWaveletTree, Tuple};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cet {
    dims: GraphDims,
    contacts: usize,
    seq: InterleavedWaveletTree<2>,
    blocks: BitVector,
}

type Histogram = Vec<(Edge, usize)>;

fn frequency(h: &Histogram, e: Edge) -> usize {
    h.binary_search_by_key(&e, |p| p.0).map_or(0, |i| h[i].1)
}

impl Cet {
    pub fn build(graph: &TemporalGraph) -> Result<Self> {
        let mut events: Vec<(Time, Vertex, Vertex)> = Vec::with_capacity(2 * graph.contacts().len());
        for c in graph.contacts() {
            events.push((c.begin, c.u, c.v));
            events.push((c.end, c.u, c.v));
        }
        events.sort_unstable();
        let tuples: Vec<Tuple<2>> = events.iter().map(|e| [u64::from(e.1), u64::from(e.2)]).collect();
        let seq = InterleavedWaveletTree::new(&tuples, u64::from(graph.vertices()))?;
        let mut b = BitVectorBuilder::with_capacity(events.len() + graph.lifetime() as usize);
        let mut i = 0;
        for t in 0..graph.lifetime() {
            b.push(true);
            let start = i;
            while i < events.len() && events[i].0 == t {
                i += 1;
            }
            b.push_run(false, i - start);
        }
        Ok(Cet { dims: graph.dims(), contacts: graph.contacts().len(), seq, blocks: b.build() })
    }

    pub fn sequence(&self) -> &InterleavedWaveletTree<2> {
        &self.seq
    }

    pub fn block_bitmap(&self) -> &BitVector {
        &self.blocks
    }

    /// Number of events with time `< t`.
    fn events_before(&self, t: Time) -> usize {
        if t >= self.dims.lifetime {
            return self.seq.len();
        }
        self.blocks.rank0(self.blocks.select1(t as usize + 1).expect("one bit per timestamp"))
    }

    /// Number of events with time `<= t`.
    fn cut(&self, t: Time) -> usize {
        self.events_before(t + 1)
    }

    /// 0-based span of the events at time `t`.
    pub fn block(&self, t: Time) -> Result<Range<usize>> {
        self.dims.check_time(t)?;
        Ok(self.events_before(t)..self.cut(t))
    }

    fn histogram(&self, span: Range<usize>, lo: Tuple<2>, hi: Tuple<2>) -> Histogram {
        let mut out = Vec::new();
        self.seq.box_report_in(span, &lo, &hi, |t, c| out.push(((t[0] as Vertex, t[1] as Vertex), c)));
        out.sort_unstable();
        out
    }

    /// Edges inside the box whose events satisfy the semantics of `q`.
    fn active_in_box(&self, q: &QueryInterval, lo: Tuple<2>, hi: Tuple<2>) -> Vec<Edge> {
        let kb = self.cut(q.from);
        let ke = self.cut(q.to);
        let before = self.histogram(0..kb, lo, hi);
        let inside = self.histogram(kb..ke, lo, hi);
        let mut out: Vec<Edge> = before
            .iter()
            .chain(&inside)
            .map(|p| p.0)
            .filter(|&e| parity_match(q.semantics, frequency(&before, e), frequency(&inside, e)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn edges_with_events(&self, q: &QueryInterval, want: impl Fn(bool, bool) -> bool) -> Vec<Edge> {
        let max = self.max_vertex();
        let full = ([0, 0], [max, max]);
        let k0 = self.events_before(q.from);
        let k1 = self.cut(q.to);
        let before = self.histogram(0..k0, full.0, full.1);
        self.histogram(k0..k1, full.0, full.1)
            .into_iter()
            .filter(|&(e, inside)| {
                let prior = frequency(&before, e);
                want(inside >= 2 || prior.is_multiple_of(2), inside >= 2 || prior % 2 == 1)
            })
            .map(|p| p.0)
            .collect()
    }

    fn max_vertex(&self) -> u64 {
        u64::from(self.dims.vertices).saturating_sub(1)
    }
}

impl TemporalIndex for Cet {
    fn dims(&self) -> GraphDims {
        self.dims
    }

    fn contact_count(&self) -> usize {
        self.contacts
    }

    fn space_bits(&self) -> u64 {
        self.seq.space_bits() + self.blocks.space_bits() + 2 * 64
    }

    fn has_edge(&self, u: Vertex, v: Vertex, q: QueryInterval) -> Result<bool> {
        self.dims.check_vertex(u)?;
        self.dims.check_vertex(v)?;
        self.dims.check_interval(&q)?;
        let e = [u64::from(u), u64::from(v)];
        let kb = self.cut(q.from);
        let ke = self.cut(q.to);
        Ok(parity_match(q.semantics, self.seq.rank_in(&e, 0..kb), self.seq.rank_in(&e, kb..ke)))
    }

    fn next_activation(&self, u: Vertex, v: Vertex, t: Time) -> Result<Option<Time>> {
        self.dims.check_vertex(u)?;
        self.dims.check_vertex(v)?;
        self.dims.check_time(t)?;
        let e = [u64::from(u), u64::from(v)];
        let prior = self.seq.rank_in(&e, 0..self.events_before(t));
        let nth = if prior.is_multiple_of(2) { prior + 1 } else { prior + 2 };
        let Some(pos) = self.seq.select(&e, nth) else { return Ok(None) };
        let zero = self.blocks.select0(pos).expect("every event has a zero in B");
        Ok(Some((self.blocks.rank1(zero) - 1) as Time))
    }

    fn neighbors(&self, u: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(u)?;
        self.dims.check_interval(&q)?;
        let u = u64::from(u);
        Ok(self.active_in_box(&q, [u, 0], [u, self.max_vertex()]).into_iter().map(|e| e.1).collect())
    }

    fn reverse_neighbors(&self, v: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(v)?;
        self.dims.check_interval(&q)?;
        let v = u64::from(v);
        Ok(self.active_in_box(&q, [0, v], [self.max_vertex(), v]).into_iter().map(|e| e.0).collect())
    }

    fn aggregate(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        let max = self.max_vertex();
        Ok(self.active_in_box(&q, [0, 0], [max, max]))
    }

    fn activated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        require_weak(&q, "activated_edges")?;
        Ok(self.edges_with_events(&q, |on, _| on))
    }

    fn deactivated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        require_weak(&q, "deactivated_edges")?;
        Ok(self.edges_with_events(&q, |_, off| off))
    }

    fn changed_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        Ok(if q.is_strong() {
            self.edges_with_events(&q, |on, off| on && off)
        } else {
            self.edges_with_events(&q, |on, off| on || off)
        })
    }
}
