use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::wavelet::{bits_for, Cover, WaveletTree};
use crate::error::{Error, Result};

/// Wavelet tree over `D`-dimensional tuples.
///
/// Tuples are stored as bit-interleaved codes: level `l` of the tree
/// branches on coordinate `l % D`, most significant bits first. Box queries
/// can therefore fix or restrict any coordinate independently, which gives
/// direct and reverse neighbor lookups the same cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterleavedWaveletTree<const D: usize> {
    bits_per_dim: u32,
    tree: WaveletTree,
}

pub type Tuple<const D: usize> = [u64; D];

impl<const D: usize> InterleavedWaveletTree<D> {
    /// Builds over tuples whose coordinates are all below `side`.
    pub fn new(tuples: &[Tuple<D>], side: u64) -> Result<Self> {
        let bits_per_dim = bits_for(side.max(2));
        for t in tuples {
            if t.iter().any(|&x| x >= side) {
                return Err(Error::range(format!("tuple {t:?} outside side {side}")));
            }
        }
        let codes: Vec<u64> = tuples.iter().map(|t| Self::encode_with(t, bits_per_dim)).collect();
        let depth = bits_per_dim * D as u32;
        let alphabet = if depth >= 64 { u64::MAX } else { 1u64 << depth };
        Ok(InterleavedWaveletTree { bits_per_dim, tree: WaveletTree::with_depth(&codes, alphabet, depth) })
    }

    fn encode_with(t: &Tuple<D>, bits: u32) -> u64 {
        let mut code = 0u64;
        for b in (0..bits).rev() {
            for x in t {
                code = code << 1 | (x >> b & 1);
            }
        }
        code
    }

    fn encode(&self, t: &Tuple<D>) -> Option<u64> {
        if t.iter().any(|&x| x >> self.bits_per_dim != 0) {
            return None;
        }
        Some(Self::encode_with(t, self.bits_per_dim))
    }

    fn decode(&self, code: u64) -> Tuple<D> {
        let mut t = [0u64; D];
        let total = self.bits_per_dim * D as u32;
        for l in 0..total {
            let bit = code >> (total - 1 - l) & 1;
            let d = l as usize % D;
            t[d] = t[d] << 1 | bit;
        }
        t
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn space_bits(&self) -> u64 {
        self.tree.space_bits() + 64
    }

    /// Tuple at 0-based index `idx`.
    pub fn get(&self, idx: usize) -> Tuple<D> {
        self.decode(self.tree.get(idx))
    }

    pub fn rank_in(&self, t: &Tuple<D>, q: Range<usize>) -> usize {
        self.encode(t).map_or(0, |c| self.tree.rank_in(c, q))
    }

    /// Occurrences of `t` among the first `i` tuples.
    pub fn rank(&self, t: &Tuple<D>, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(Error::range(format!("rank position {i} beyond length {}", self.len())));
        }
        Ok(self.rank_in(t, 0..i))
    }

    /// 1-indexed position of the `f`-th occurrence of `t`.
    pub fn select(&self, t: &Tuple<D>, f: usize) -> Option<usize> {
        self.tree.select(self.encode(t)?, f)
    }

    fn box_cover(&self, level: u32, prefix: u64, lo: &Tuple<D>, hi: &Tuple<D>) -> Cover {
        let mut coords = [0u64; D];
        let mut taken = [0u32; D];
        for l in 0..level {
            let d = l as usize % D;
            coords[d] = coords[d] << 1 | (prefix >> (level - 1 - l) & 1);
            taken[d] += 1;
        }
        let mut full = true;
        for d in 0..D {
            let rem = self.bits_per_dim - taken[d];
            let first = coords[d] << rem;
            let last = first | ((1u64 << rem) - 1);
            if last < lo[d] || first > hi[d] {
                return Cover::Disjoint;
            }
            if first < lo[d] || last > hi[d] {
                full = false;
            }
        }
        if full {
            Cover::Full
        } else {
            Cover::Partial
        }
    }

    /// Tuples of span `q` inside the box `lo..=hi` (componentwise).
    pub fn box_count_in(&self, q: Range<usize>, lo: &Tuple<D>, hi: &Tuple<D>) -> usize {
        if (0..D).any(|d| lo[d] > hi[d]) {
            return 0;
        }
        let mut total = 0;
        self.tree.walk(q, &mut |l, p| self.box_cover(l, p, lo, hi), true, &mut |_, c| total += c);
        total
    }

    /// Per-tuple frequencies of span `q` inside the box, in code order.
    pub fn box_report_in(
        &self,
        q: Range<usize>,
        lo: &Tuple<D>,
        hi: &Tuple<D>,
        mut emit: impl FnMut(Tuple<D>, usize),
    ) {
        if (0..D).any(|d| lo[d] > hi[d]) {
            return;
        }
        self.tree.walk(q, &mut |l, p| self.box_cover(l, p, lo, hi), false, &mut |code, c| {
            emit(self.decode(code), c)
        });
    }

    /// Lexicographically smallest tuple of span `q` strictly greater than
    /// `alpha`, with the 0-based index of its leftmost occurrence.
    pub fn next_value_in(&self, q: Range<usize>, alpha: &Tuple<D>) -> Option<(Tuple<D>, usize)> {
        let max = (1u64 << self.bits_per_dim) - 1;
        let mut best: Option<Tuple<D>> = None;
        // Candidates share the first `d` coordinates with alpha and exceed it
        // at coordinate `d`; deeper shared prefixes give smaller tuples.
        for d in (0..D).rev() {
            if alpha[d] >= max {
                continue;
            }
            let mut lo = [0u64; D];
            let mut hi = [max; D];
            lo[..d].copy_from_slice(&alpha[..d]);
            hi[..d].copy_from_slice(&alpha[..d]);
            lo[d] = alpha[d] + 1;
            self.box_report_in(q.clone(), &lo, &hi, |t, _| {
                if best.is_none_or(|b| t < b) {
                    best = Some(t);
                }
            });
            if best.is_some() {
                break;
            }
        }
        let t = best?;
        let before = self.rank_in(&t, 0..q.start);
        Some((t, self.select(&t, before + 1)? - 1))
    }

    fn check_span(&self, i: usize, j: usize) -> Result<Range<usize>> {
        if i == 0 || i > j || j > self.len() {
            return Err(Error::range(format!("range [{i},{j}] invalid for length {}", self.len())));
        }
        Ok(i - 1..j)
    }

    /// Tuples of `S[i..=j]` inside the box `lo..=hi`.
    pub fn range_count(&self, lo: &Tuple<D>, hi: &Tuple<D>, i: usize, j: usize) -> Result<usize> {
        Ok(self.box_count_in(self.check_span(i, j)?, lo, hi))
    }

    /// `(tuple, frequency)` pairs of `S[i..=j]` inside the box, ordered
    /// lexicographically.
    pub fn range_report(
        &self,
        lo: &Tuple<D>,
        hi: &Tuple<D>,
        i: usize,
        j: usize,
    ) -> Result<Vec<(Tuple<D>, usize)>> {
        let q = self.check_span(i, j)?;
        let mut out = Vec::new();
        self.box_report_in(q, lo, hi, |t, c| out.push((t, c)));
        out.sort_unstable();
        Ok(out)
    }

    pub fn range_next_value(&self, alpha: &Tuple<D>, i: usize, j: usize) -> Result<Option<Tuple<D>>> {
        Ok(self.next_value_in(self.check_span(i, j)?, alpha).map(|(t, _)| t))
    }

    pub fn range_next_value_pos(&self, alpha: &Tuple<D>, i: usize, j: usize) -> Result<Option<usize>> {
        Ok(self.next_value_in(self.check_span(i, j)?, alpha).map(|(_, p)| p + 1))
    }
}
