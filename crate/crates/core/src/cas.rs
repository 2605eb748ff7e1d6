//! Compact adjacency sequence.
//!
//! All event lists are concatenated into one sequence `S` over the alphabet
//! `T ∪ V`, block by block in source-vertex order. Inside a block each
//! distinct timestamp is written once, followed by the targets of the
//! events at that time. Timestamps use symbols `0..τ` and targets use
//! `τ..τ+n`. A bitvector `B` holds `1 0^k` per source, `k` being the block
//! length. `S` is a wavelet tree, so frequencies inside any block prefix are
//! `O(log σ)` and no list is ever decompressed.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::evelog::parity_match;
use crate::model::{
    require_weak, Edge, GraphDims, QueryInterval, TemporalGraph, TemporalIndex, Time, Vertex,
};
use crate::succinct::{BitVector, BitVectorBuilder, WaveletTree};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cas {
    dims: GraphDims,
    contacts: usize,
    seq: WaveletTree,
    blocks: BitVector,
    reverse: Option<Box<Cas>>,
}

impl Cas {
    pub fn build(graph: &TemporalGraph, with_reverse: bool) -> Result<Self> {
        let n = graph.vertices() as usize;
        let tau = u64::from(graph.lifetime());
        let mut per_source: Vec<Vec<(Time, Vertex)>> = vec![Vec::new(); n];
        for c in graph.contacts() {
            per_source[c.u as usize].push((c.begin, c.v));
            per_source[c.u as usize].push((c.end, c.v));
        }
        let mut symbols = Vec::with_capacity(3 * graph.contacts().len());
        let mut b = BitVectorBuilder::new();
        for events in &mut per_source {
            events.sort_unstable();
            let start = symbols.len();
            let mut last_time = None;
            for &(t, v) in events.iter() {
                if last_time != Some(t) {
                    symbols.push(u64::from(t));
                    last_time = Some(t);
                }
                symbols.push(tau + u64::from(v));
            }
            b.push(true);
            b.push_run(false, symbols.len() - start);
        }
        let seq = WaveletTree::new(&symbols, tau + n as u64)?;
        let reverse = if with_reverse {
            Some(Box::new(Cas::build(&graph.transposed(), false)?))
        } else {
            None
        };
        Ok(Cas { dims: graph.dims(), contacts: graph.contacts().len(), seq, blocks: b.build(), reverse })
    }

    pub fn has_reverse(&self) -> bool {
        self.reverse.is_some()
    }

    pub fn sequence(&self) -> &WaveletTree {
        &self.seq
    }

    pub fn block_bitmap(&self) -> &BitVector {
        &self.blocks
    }

    fn tau(&self) -> u64 {
        u64::from(self.dims.lifetime)
    }

    fn target_symbol(&self, v: Vertex) -> u64 {
        self.tau() + u64::from(v)
    }

    /// 0-based span of `u`'s block in `S`.
    pub fn block(&self, u: Vertex) -> Result<Range<usize>> {
        self.dims.check_vertex(u)?;
        let start_of = |k: usize| self.blocks.rank0(self.blocks.select1(k).expect("one bit per vertex"));
        let start = start_of(u as usize + 1);
        let end = if u + 1 < self.dims.vertices { start_of(u as usize + 2) } else { self.seq.len() };
        Ok(start..end)
    }

    /// 1-indexed inclusive bounds `(i, j)` of `u`'s block; `i > j` when the
    /// block is empty.
    pub fn block_bounds(&self, u: Vertex) -> Result<(usize, usize)> {
        let r = self.block(u)?;
        Ok((r.start + 1, r.end))
    }

    /// End of the events with time `<= t` inside `block`: the position of
    /// the first timestamp symbol greater than `t`, or the block end.
    fn cut(&self, block: &Range<usize>, t: Time) -> usize {
        match self.seq.next_value_in(block.clone(), u64::from(t)) {
            Some((sym, pos)) if sym < self.tau() => pos,
            _ => block.end,
        }
    }

    /// Cuts at both ends of `q`.
    fn cuts(&self, block: &Range<usize>, q: &QueryInterval) -> (usize, usize) {
        let kb = self.cut(block, q.from);
        let ke = if q.to == q.from { kb } else { self.cut(&(kb..block.end), q.to) };
        (kb, ke)
    }

    /// End of the events with time `< t`.
    fn cut_before(&self, block: &Range<usize>, t: Time) -> usize {
        if t == 0 {
            block.start
        } else {
            self.cut(block, t - 1)
        }
    }

    fn target_histogram(&self, span: Range<usize>) -> Vec<(Vertex, usize)> {
        let mut out = Vec::new();
        let lo = self.tau();
        let hi = lo + u64::from(self.dims.vertices) - 1;
        self.seq.report_in(span, lo, hi, |s, c| out.push(((s - lo) as Vertex, c)));
        out
    }

    fn neighbors_unchecked(&self, u: Vertex, q: &QueryInterval) -> Result<Vec<Vertex>> {
        let block = self.block(u)?;
        let (kb, ke) = self.cuts(&block, q);
        let before = self.target_histogram(block.start..kb);
        let inside = self.target_histogram(kb..ke);
        let freq = |h: &[(Vertex, usize)], v: Vertex| {
            h.binary_search_by_key(&v, |p| p.0).map_or(0, |i| h[i].1)
        };
        let mut out: Vec<Vertex> = before
            .iter()
            .chain(&inside)
            .map(|p| p.0)
            .filter(|&v| parity_match(q.semantics, freq(&before, v), freq(&inside, v)))
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Reverse neighbors by counting `v` in every block.
    pub fn reverse_neighbors_by_scan(&self, v: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(v)?;
        self.dims.check_interval(&q)?;
        let sym = self.target_symbol(v);
        let mut out = Vec::new();
        for u in 0..self.dims.vertices {
            let block = self.block(u)?;
            if block.is_empty() {
                continue;
            }
            let (kb, ke) = self.cuts(&block, &q);
            let before = self.seq.count_in(block.start..kb, sym, sym);
            let inside = self.seq.count_in(kb..ke, sym, sym);
            if parity_match(q.semantics, before, inside) {
                out.push(u);
            }
        }
        Ok(out)
    }

    /// Edges whose events inside `[from, to]` satisfy `want(activation,
    /// deactivation)`. Events of an edge alternate, so the parity of the
    /// count before the interval tells the kind of the first one inside.
    fn edges_with_events(&self, q: &QueryInterval, want: impl Fn(bool, bool) -> bool) -> Result<Vec<Edge>> {
        let mut out = Vec::new();
        for u in 0..self.dims.vertices {
            let block = self.block(u)?;
            if block.is_empty() {
                continue;
            }
            let k0 = self.cut_before(&block, q.from);
            let k1 = self.cut(&block, q.to);
            let before = self.target_histogram(block.start..k0);
            for (v, inside) in self.target_histogram(k0..k1) {
                let prior = before.binary_search_by_key(&v, |p| p.0).map_or(0, |i| before[i].1);
                let on = inside >= 2 || prior % 2 == 0;
                let off = inside >= 2 || prior % 2 == 1;
                if want(on, off) {
                    out.push((u, v));
                }
            }
        }
        Ok(out)
    }

    fn own_space_bits(&self) -> u64 {
        self.seq.space_bits() + self.blocks.space_bits() + 2 * 64
    }
}

impl TemporalIndex for Cas {
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
        let block = self.block(u)?;
        if block.is_empty() {
            return Ok(false);
        }
        let (kb, ke) = self.cuts(&block, &q);
        let sym = self.target_symbol(v);
        let before = self.seq.count_in(block.start..kb, sym, sym);
        let inside = self.seq.count_in(kb..ke, sym, sym);
        Ok(parity_match(q.semantics, before, inside))
    }

    fn next_activation(&self, u: Vertex, v: Vertex, t: Time) -> Result<Option<Time>> {
        self.dims.check_vertex(u)?;
        self.dims.check_vertex(v)?;
        self.dims.check_time(t)?;
        let block = self.block(u)?;
        let sym = self.target_symbol(v);
        let k0 = self.cut_before(&block, t);
        let prior = self.seq.count_in(block.start..k0, sym, sym);
        // The next activation is the next odd-numbered event of the edge.
        let nth = if prior.is_multiple_of(2) { prior + 1 } else { prior + 2 };
        let global = self.seq.rank_in(sym, 0..block.start) + nth;
        let Some(pos) = self.seq.select(sym, global) else { return Ok(None) };
        let idx = pos - 1;
        if idx >= block.end {
            return Ok(None);
        }
        Ok(self.seq.prev_value_in(block.start..idx, self.tau()).map(|(s, _)| s as Time))
    }

    fn neighbors(&self, u: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(u)?;
        self.dims.check_interval(&q)?;
        self.neighbors_unchecked(u, &q)
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
            out.extend(self.neighbors_unchecked(u, &q)?.into_iter().map(|v| (u, v)));
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
