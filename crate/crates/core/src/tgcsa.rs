//! Temporal graph compressed suffix array.
//!
//! Each contact becomes a word of four codes `(u, v, t_begin, t_end)` drawn
//! from disjoint ranges, so sources sort before targets, targets before
//! begin times and begin times before end times. The words are concatenated
//! into `E` and indexed by a compressed suffix array made of a bitmap `D`
//! (`1 0^f` per code, `f` its frequency) and the successor array `Ψ`. Entries
//! of `Ψ` for end-time suffixes point back to the start of the same word, so
//! from any field of a contact four steps of `Ψ` visit all of it.

use serde::{Deserialize, Serialize};

use crate::codecs::varint;
use crate::error::Result;
use crate::model::{
    require_weak, Contact, Edge, GraphDims, QueryInterval, TemporalGraph, TemporalIndex, Time,
    Vertex,
};
use crate::succinct::{BitVector, BitVectorBuilder};

const SAMPLE: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum PsiEncoding {
    #[default]
    Plain,
    /// Gap-coded increasing runs with an absolute sample every 32 entries.
    Compressed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
enum PsiArray {
    Plain(Vec<u32>),
    Compressed { samples: Vec<u32>, offsets: Vec<u32>, bytes: Vec<u8> },
}

impl PsiArray {
    fn compress(psi: &[u32]) -> PsiArray {
        let mut samples = Vec::with_capacity(psi.len().div_ceil(SAMPLE));
        let mut offsets = Vec::with_capacity(samples.capacity());
        let mut bytes = Vec::new();
        for (k, &x) in psi.iter().enumerate() {
            if k % SAMPLE == 0 {
                samples.push(x);
                offsets.push(bytes.len() as u32);
            } else if x > psi[k - 1] {
                varint::encode(u64::from(x - psi[k - 1]), &mut bytes);
            } else {
                // A zero gap never occurs inside a run, so it marks a restart.
                varint::encode(0, &mut bytes);
                varint::encode(u64::from(x), &mut bytes);
            }
        }
        PsiArray::Compressed { samples, offsets, bytes }
    }

    fn get(&self, k: usize) -> usize {
        match self {
            PsiArray::Plain(psi) => psi[k] as usize,
            PsiArray::Compressed { samples, offsets, bytes } => {
                let chunk = k / SAMPLE;
                let mut x = u64::from(samples[chunk]);
                let mut pos = offsets[chunk] as usize;
                for _ in chunk * SAMPLE..k {
                    let gap = varint::decode(bytes, &mut pos).expect("well-formed Ψ stream");
                    x = if gap == 0 { varint::decode(bytes, &mut pos).expect("well-formed Ψ stream") } else { x + gap };
                }
                x as usize
            }
        }
    }

    fn space_bits(&self) -> u64 {
        match self {
            PsiArray::Plain(psi) => psi.len() as u64 * 32,
            PsiArray::Compressed { samples, offsets, bytes } => {
                (samples.len() + offsets.len()) as u64 * 32 + bytes.len() as u64 * 8
            }
        }
    }
}

/// The coded word sequence `E` of a contact list.
pub fn encode_contacts(contacts: &[Contact], vertices: u32, lifetime: u32) -> Vec<u64> {
    let n = u64::from(vertices);
    let tau = u64::from(lifetime);
    let mut e = Vec::with_capacity(4 * contacts.len());
    for c in contacts {
        e.push(u64::from(c.u) + 1);
        e.push(n + u64::from(c.v) + 1);
        e.push(2 * n + u64::from(c.begin) + 1);
        e.push(2 * n + tau + u64::from(c.end) + 1);
    }
    e
}

/// Positions of `seq` sorted by suffix, a proper prefix sorting first.
pub fn suffix_array(seq: &[u64]) -> Vec<usize> {
    let mut sa: Vec<usize> = (0..seq.len()).collect();
    sa.sort_unstable_by(|&a, &b| seq[a..].cmp(&seq[b..]));
    sa
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tgcsa {
    dims: GraphDims,
    contacts: usize,
    d: BitVector,
    psi: PsiArray,
}

impl Tgcsa {
    pub fn build(graph: &TemporalGraph) -> Result<Self> {
        Self::build_with(graph, PsiEncoding::Plain)
    }

    pub fn build_with(graph: &TemporalGraph, encoding: PsiEncoding) -> Result<Self> {
        let dims = graph.dims();
        let e = encode_contacts(graph.contacts(), dims.vertices, dims.lifetime);
        let sa = suffix_array(&e);
        let mut inverse = vec![0u32; sa.len()];
        for (i, &p) in sa.iter().enumerate() {
            inverse[p] = i as u32;
        }
        let psi: Vec<u32> = sa
            .iter()
            .map(|&p| if p % 4 == 3 { inverse[p - 3] } else { inverse[p + 1] })
            .collect();
        let sigma = 2 * (u64::from(dims.vertices) + u64::from(dims.lifetime));
        let mut freq = vec![0usize; sigma as usize + 1];
        for &x in &e {
            freq[x as usize] += 1;
        }
        let mut d = BitVectorBuilder::with_capacity(sigma as usize + e.len());
        for &f in &freq[1..] {
            d.push(true);
            d.push_run(false, f);
        }
        let psi = match encoding {
            PsiEncoding::Plain => PsiArray::Plain(psi),
            PsiEncoding::Compressed => PsiArray::compress(&psi),
        };
        Ok(Tgcsa { dims, contacts: graph.contacts().len(), d: d.build(), psi })
    }

    pub fn psi_encoding(&self) -> PsiEncoding {
        match self.psi {
            PsiArray::Plain(_) => PsiEncoding::Plain,
            PsiArray::Compressed { .. } => PsiEncoding::Compressed,
        }
    }

    /// Length of `E`, four codes per contact.
    pub fn len(&self) -> usize {
        4 * self.contacts
    }

    pub fn is_empty(&self) -> bool {
        self.contacts == 0
    }

    pub fn d_bitmap(&self) -> &BitVector {
        &self.d
    }

    fn sigma(&self) -> u64 {
        2 * (u64::from(self.dims.vertices) + u64::from(self.dims.lifetime))
    }

    /// `Ψ[k]` for a 0-based suffix-array position `k`.
    pub fn psi(&self, k: usize) -> usize {
        self.psi.get(k)
    }

    /// First code of the suffix at position `k`.
    pub fn symbol_at(&self, k: usize) -> u64 {
        let zero = self.d.select0(k + 1).expect("position inside the suffix array");
        self.d.rank1(zero) as u64
    }

    /// Suffix-array span of the suffixes starting with `code`.
    fn code_range(&self, code: u64) -> std::ops::Range<usize> {
        let start = |x: u64| self.d.rank0(self.d.select1(x as usize).expect("code within alphabet"));
        let end = if code < self.sigma() { start(code + 1) } else { self.len() };
        start(code)..end
    }

    /// Span of the suffixes starting with a code in `lo..=hi`.
    fn codes_range(&self, lo: u64, hi: u64) -> std::ops::Range<usize> {
        if lo > hi {
            return 0..0;
        }
        self.code_range(lo).start..self.code_range(hi).end
    }

    fn u_code(&self, u: Vertex) -> u64 {
        u64::from(u) + 1
    }

    fn v_code(&self, v: Vertex) -> u64 {
        u64::from(self.dims.vertices) + u64::from(v) + 1
    }

    fn begin_code(&self, t: Time) -> u64 {
        2 * u64::from(self.dims.vertices) + u64::from(t) + 1
    }

    fn end_code(&self, t: Time) -> u64 {
        2 * u64::from(self.dims.vertices) + u64::from(self.dims.lifetime) + u64::from(t) + 1
    }

    fn field_of(&self, k: usize, code_base: u64) -> Vertex {
        (self.symbol_at(k) - code_base - 1) as Vertex
    }

    /// Decodes the contact whose word starts at suffix position `k` of the
    /// source block.
    pub fn contact_at(&self, k: usize) -> Contact {
        let n = u64::from(self.dims.vertices);
        let tau = u64::from(self.dims.lifetime);
        let kv = self.psi(k);
        let kb = self.psi(kv);
        let ke = self.psi(kb);
        Contact::new(
            self.field_of(k, 0),
            self.field_of(kv, n),
            self.field_of(kb, 2 * n),
            self.field_of(ke, 2 * n + tau),
        )
    }

    /// Every contact, decoded from the index alone, in `(u, v, begin)` order.
    pub fn decode_contacts(&self) -> Vec<Contact> {
        (0..self.contacts).map(|k| self.contact_at(k)).collect()
    }

    /// Source-block positions of the contacts of edge `(u, v)`, ordered by
    /// begin time.
    fn edge_span(&self, u: Vertex, v: Vertex) -> std::ops::Range<usize> {
        let block = self.code_range(self.u_code(u));
        let target = self.v_code(v);
        let key = |k: usize| self.symbol_at(self.psi(k));
        let lo = partition_point(block.clone(), |k| key(k) < target);
        let hi = partition_point(lo..block.end, |k| key(k) <= target);
        lo..hi
    }

    fn neighbors_unchecked(&self, u: Vertex, q: &QueryInterval) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .code_range(self.u_code(u))
            .map(|k| self.contact_at(k))
            .filter(|c| c.matches(q))
            .map(|c| c.v)
            .collect();
        out.dedup();
        out
    }

    fn own_space_bits(&self) -> u64 {
        self.d.space_bits() + self.psi.space_bits() + 2 * 64
    }
}

fn partition_point(range: std::ops::Range<usize>, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (range.start, range.end);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

impl TemporalIndex for Tgcsa {
    fn dims(&self) -> GraphDims {
        self.dims
    }

    fn contact_count(&self) -> usize {
        self.contacts
    }

    fn space_bits(&self) -> u64 {
        self.own_space_bits()
    }

    fn has_edge(&self, u: Vertex, v: Vertex, q: QueryInterval) -> Result<bool> {
        self.dims.check_vertex(u)?;
        self.dims.check_vertex(v)?;
        self.dims.check_interval(&q)?;
        Ok(self.edge_span(u, v).any(|k| self.contact_at(k).matches(&q)))
    }

    fn next_activation(&self, u: Vertex, v: Vertex, t: Time) -> Result<Option<Time>> {
        self.dims.check_vertex(u)?;
        self.dims.check_vertex(v)?;
        self.dims.check_time(t)?;
        Ok(self.edge_span(u, v).map(|k| self.contact_at(k).begin).find(|&b| b >= t))
    }

    fn neighbors(&self, u: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(u)?;
        self.dims.check_interval(&q)?;
        Ok(self.neighbors_unchecked(u, &q))
    }

    fn reverse_neighbors(&self, v: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(v)?;
        self.dims.check_interval(&q)?;
        let mut out = Vec::new();
        for k in self.code_range(self.v_code(v)) {
            let kb = self.psi(k);
            let ke = self.psi(kb);
            let ku = self.psi(ke);
            let begin = self.field_of(kb, 2 * u64::from(self.dims.vertices));
            let end = self.field_of(ke, 2 * u64::from(self.dims.vertices) + u64::from(self.dims.lifetime));
            if Contact::new(0, v, begin, end).matches(&q) {
                out.push(self.field_of(ku, 0));
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn aggregate(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        let mut out = Vec::new();
        for u in 0..self.dims.vertices {
            out.extend(self.neighbors_unchecked(u, &q).into_iter().map(|v| (u, v)));
        }
        Ok(out)
    }

    fn activated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        require_weak(&q, "activated_edges")?;
        // begin -> end -> source -> target
        let mut out: Vec<Edge> = self
            .codes_range(self.begin_code(q.from), self.begin_code(q.to))
            .map(|k| {
                let ku = self.psi(self.psi(k));
                (self.field_of(ku, 0), self.field_of(self.psi(ku), u64::from(self.dims.vertices)))
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn deactivated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        require_weak(&q, "deactivated_edges")?;
        let mut out: Vec<Edge> = self
            .codes_range(self.end_code(q.from), self.end_code(q.to))
            .map(|k| {
                let ku = self.psi(k);
                (self.field_of(ku, 0), self.field_of(self.psi(ku), u64::from(self.dims.vertices)))
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}
