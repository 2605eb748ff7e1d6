use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::bitvec::{BitVector, BitVectorBuilder};
use crate::error::{Error, Result};

/// How a subtree's symbol range relates to a query region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cover {
    Disjoint,
    Partial,
    Full,
}

/// Balanced wavelet tree over symbols in `[0, alphabet)`, stored level by
/// level: the nodes of one depth are concatenated into a single bitvector,
/// so a node is identified by its span at that level.
///
/// The methods with a `_in` suffix take 0-based half-open position spans.
/// The remaining query methods follow the 1-indexed convention: `rank`
/// counts in a prefix of length `i`, `select` returns a 1-indexed position
/// and ranges `i..=j` are inclusive with `1 <= i <= j <= len`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveletTree {
    len: usize,
    alphabet: u64,
    depth: u32,
    levels: Vec<BitVector>,
}

/// Bits needed to write every symbol below `alphabet`.
pub(crate) fn bits_for(alphabet: u64) -> u32 {
    if alphabet <= 2 {
        1
    } else {
        64 - (alphabet - 1).leading_zeros()
    }
}

impl WaveletTree {
    pub fn new(symbols: &[u64], alphabet: u64) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(Error::range(format!("symbol {bad} outside alphabet [0,{alphabet})")));
        }
        Ok(Self::with_depth(symbols, alphabet, bits_for(alphabet)))
    }

    pub(crate) fn with_depth(symbols: &[u64], alphabet: u64, depth: u32) -> Self {
        let mut cur = symbols.to_vec();
        let mut levels = Vec::with_capacity(depth as usize);
        for l in 0..depth {
            let shift = depth - 1 - l;
            let mut b = BitVectorBuilder::with_capacity(cur.len());
            for &s in &cur {
                b.push(s >> shift & 1 == 1);
            }
            levels.push(b.build());
            // Stable: keeps nodes contiguous and their order by prefix.
            cur.sort_by_key(|&s| s >> shift);
        }
        WaveletTree { len: symbols.len(), alphabet, depth, levels }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn space_bits(&self) -> u64 {
        self.levels.iter().map(BitVector::space_bits).sum::<u64>() + 3 * 64
    }

    /// Splits node `node` at `level` and maps the query span `q` into both
    /// children: `(left node, left span, right node, right span)`.
    pub(crate) fn split(
        &self,
        level: u32,
        node: &Range<usize>,
        q: &Range<usize>,
    ) -> (Range<usize>, Range<usize>, Range<usize>, Range<usize>) {
        let bv = &self.levels[level as usize];
        let z_start = bv.rank0(node.start);
        let zeros = bv.rank0(node.end) - z_start;
        let o_start = node.start - z_start;
        let (zq0, zq1) = (bv.rank0(q.start), bv.rank0(q.end));
        let mid = node.start + zeros;
        (
            node.start..mid,
            node.start + (zq0 - z_start)..node.start + (zq1 - z_start),
            mid..node.end,
            mid + (q.start - zq0 - o_start)..mid + (q.end - zq1 - o_start),
        )
    }

    /// Symbol at 0-based index `idx`.
    pub fn get(&self, idx: usize) -> u64 {
        assert!(idx < self.len, "index {idx} out of bounds ({})", self.len);
        let mut node = 0..self.len;
        let mut pos = idx;
        let mut sym = 0u64;
        for l in 0..self.depth {
            let bv = &self.levels[l as usize];
            let z_start = bv.rank0(node.start);
            let zeros = bv.rank0(node.end) - z_start;
            let g = node.start + pos;
            if bv.get(g) {
                pos = (g - bv.rank0(g)) - (node.start - z_start);
                node = node.start + zeros..node.end;
                sym = sym << 1 | 1;
            } else {
                pos = bv.rank0(g) - z_start;
                node = node.start..node.start + zeros;
                sym <<= 1;
            }
        }
        sym
    }

    /// 1-indexed access.
    pub fn access(&self, i: usize) -> Result<u64> {
        if i == 0 || i > self.len {
            return Err(Error::range(format!("position {i} outside [1,{}]", self.len)));
        }
        Ok(self.get(i - 1))
    }

    /// Occurrences of `sym` within the 0-based span `q`.
    pub fn rank_in(&self, sym: u64, q: Range<usize>) -> usize {
        if sym >= self.alphabet {
            return 0;
        }
        let mut node = 0..self.len;
        let mut q = q;
        for l in 0..self.depth {
            if q.is_empty() {
                return 0;
            }
            let (ln, lq, rn, rq) = self.split(l, &node, &q);
            if sym >> (self.depth - 1 - l) & 1 == 1 {
                node = rn;
                q = rq;
            } else {
                node = ln;
                q = lq;
            }
        }
        q.len()
    }

    /// Occurrences of `sym` among the first `i` symbols.
    pub fn rank(&self, sym: u64, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::range(format!("rank position {i} beyond length {}", self.len)));
        }
        Ok(self.rank_in(sym, 0..i))
    }

    /// 1-indexed position of the `f`-th occurrence of `sym`.
    pub fn select(&self, sym: u64, f: usize) -> Option<usize> {
        if f == 0 || sym >= self.alphabet {
            return None;
        }
        let mut path = Vec::with_capacity(self.depth as usize);
        let mut node = 0..self.len;
        for l in 0..self.depth {
            let (ln, _, rn, _) = self.split(l, &node, &(node.start..node.start));
            path.push(node.clone());
            node = if sym >> (self.depth - 1 - l) & 1 == 1 { rn } else { ln };
        }
        if f > node.len() {
            return None;
        }
        // Offset inside the current node, walked back up to the root.
        let mut pos = f - 1;
        for l in (0..self.depth).rev() {
            let parent = &path[l as usize];
            let bv = &self.levels[l as usize];
            let global = if sym >> (self.depth - 1 - l) & 1 == 1 {
                bv.select1(bv.rank1(parent.start) + pos + 1)?
            } else {
                bv.select0(bv.rank0(parent.start) + pos + 1)?
            };
            pos = global - 1 - parent.start;
        }
        Some(pos + 1)
    }

    fn symbol_cover(&self, level: u32, prefix: u64, lo: u64, hi: u64) -> Cover {
        let rem = self.depth - level;
        let first = prefix << rem;
        let last = first | ((1u64 << rem) - 1);
        if last < lo || first > hi {
            Cover::Disjoint
        } else if lo <= first && last <= hi {
            Cover::Full
        } else {
            Cover::Partial
        }
    }

    /// Depth-first walk that visits leaves accepted by `cover`, left to right.
    pub(crate) fn walk(
        &self,
        q: Range<usize>,
        cover: &mut impl FnMut(u32, u64) -> Cover,
        count_only: bool,
        emit: &mut impl FnMut(u64, usize),
    ) {
        self.walk_node(0, 0, 0..self.len, q, cover, count_only, emit);
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_node(
        &self,
        level: u32,
        prefix: u64,
        node: Range<usize>,
        q: Range<usize>,
        cover: &mut impl FnMut(u32, u64) -> Cover,
        count_only: bool,
        emit: &mut impl FnMut(u64, usize),
    ) {
        if q.is_empty() {
            return;
        }
        match cover(level, prefix) {
            Cover::Disjoint => return,
            Cover::Full if count_only => {
                emit(prefix, q.len());
                return;
            }
            _ => {}
        }
        if level == self.depth {
            emit(prefix, q.len());
            return;
        }
        let (ln, lq, rn, rq) = self.split(level, &node, &q);
        self.walk_node(level + 1, prefix << 1, ln, lq, cover, count_only, emit);
        self.walk_node(level + 1, prefix << 1 | 1, rn, rq, cover, count_only, emit);
    }

    /// Symbols within `[lo, hi]` in the 0-based span `q`.
    pub fn count_in(&self, q: Range<usize>, lo: u64, hi: u64) -> usize {
        if lo > hi {
            return 0;
        }
        let mut total = 0;
        self.walk(q, &mut |l, p| self.symbol_cover(l, p, lo, hi), true, &mut |_, c| total += c);
        total
    }

    /// Per-symbol frequencies of `[lo, hi]` in the 0-based span `q`, by
    /// ascending symbol.
    pub fn report_in(&self, q: Range<usize>, lo: u64, hi: u64, mut emit: impl FnMut(u64, usize)) {
        if lo > hi {
            return;
        }
        self.walk(q, &mut |l, p| self.symbol_cover(l, p, lo, hi), false, &mut emit);
    }

    /// Smallest symbol strictly greater than `alpha` in span `q`, with the
    /// 0-based index of its leftmost occurrence there.
    pub fn next_value_in(&self, q: Range<usize>, alpha: u64) -> Option<(u64, usize)> {
        self.next_value_node(0, 0, 0..self.len, q, alpha)
    }

    /// Maps an offset inside the child of `node` at `level` back to an
    /// offset inside `node`.
    fn lift(&self, level: u32, node: &Range<usize>, right: bool, offset: usize) -> usize {
        let bv = &self.levels[level as usize];
        let global = if right {
            bv.select1(bv.rank1(node.start) + offset + 1)
        } else {
            bv.select0(bv.rank0(node.start) + offset + 1)
        };
        global.expect("offset inside the child") - 1 - node.start
    }

    fn next_value_node(
        &self,
        level: u32,
        prefix: u64,
        node: Range<usize>,
        q: Range<usize>,
        alpha: u64,
    ) -> Option<(u64, usize)> {
        if q.is_empty() {
            return None;
        }
        let rem = self.depth - level;
        let last = (prefix << rem) | ((1u64 << rem) - 1);
        if last <= alpha {
            return None;
        }
        if level == self.depth {
            return Some((prefix, q.start - node.start));
        }
        let (ln, lq, rn, rq) = self.split(level, &node, &q);
        if let Some((sym, off)) = self.next_value_node(level + 1, prefix << 1, ln, lq, alpha) {
            return Some((sym, self.lift(level, &node, false, off)));
        }
        let (sym, off) = self.next_value_node(level + 1, prefix << 1 | 1, rn, rq, alpha)?;
        Some((sym, self.lift(level, &node, true, off)))
    }

    /// Largest symbol strictly smaller than `beta` in span `q`, with the
    /// 0-based index of its rightmost occurrence there.
    pub fn prev_value_in(&self, q: Range<usize>, beta: u64) -> Option<(u64, usize)> {
        self.prev_value_node(0, 0, 0..self.len, q, beta)
    }

    fn prev_value_node(
        &self,
        level: u32,
        prefix: u64,
        node: Range<usize>,
        q: Range<usize>,
        beta: u64,
    ) -> Option<(u64, usize)> {
        if q.is_empty() {
            return None;
        }
        let first = prefix << (self.depth - level);
        if first >= beta {
            return None;
        }
        if level == self.depth {
            return Some((prefix, q.end - 1 - node.start));
        }
        let (ln, lq, rn, rq) = self.split(level, &node, &q);
        if let Some((sym, off)) = self.prev_value_node(level + 1, prefix << 1 | 1, rn, rq, beta) {
            return Some((sym, self.lift(level, &node, true, off)));
        }
        let (sym, off) = self.prev_value_node(level + 1, prefix << 1, ln, lq, beta)?;
        Some((sym, self.lift(level, &node, false, off)))
    }

    fn check_span(&self, i: usize, j: usize) -> Result<Range<usize>> {
        if i == 0 || i > j || j > self.len {
            return Err(Error::range(format!("range [{i},{j}] invalid for length {}", self.len)));
        }
        Ok(i - 1..j)
    }

    /// Symbols of `S[i..=j]` within `[lo, hi]`.
    pub fn range_count(&self, lo: u64, hi: u64, i: usize, j: usize) -> Result<usize> {
        let q = self.check_span(i, j)?;
        if lo > hi {
            return Err(Error::range(format!("symbol range [{lo},{hi}] is reversed")));
        }
        Ok(self.count_in(q, lo, hi))
    }

    /// `(symbol, frequency)` pairs of `S[i..=j]` restricted to `[lo, hi]`.
    pub fn range_report(&self, lo: u64, hi: u64, i: usize, j: usize) -> Result<Vec<(u64, usize)>> {
        let q = self.check_span(i, j)?;
        if lo > hi {
            return Err(Error::range(format!("symbol range [{lo},{hi}] is reversed")));
        }
        let mut out = Vec::new();
        self.report_in(q, lo, hi, |s, c| out.push((s, c)));
        Ok(out)
    }

    /// Smallest symbol of `S[i..=j]` strictly greater than `alpha`.
    pub fn range_next_value(&self, alpha: u64, i: usize, j: usize) -> Result<Option<u64>> {
        let q = self.check_span(i, j)?;
        Ok(self.next_value_in(q, alpha).map(|(s, _)| s))
    }

    /// 1-indexed position of the leftmost occurrence of the symbol returned
    /// by [`WaveletTree::range_next_value`].
    pub fn range_next_value_pos(&self, alpha: u64, i: usize, j: usize) -> Result<Option<usize>> {
        let q = self.check_span(i, j)?;
        Ok(self.next_value_in(q, alpha).map(|(_, p)| p + 1))
    }
}
