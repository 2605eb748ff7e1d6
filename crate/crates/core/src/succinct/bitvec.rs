use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;
const WORDS_PER_SUPER: usize = 8;
const SUPER: usize = WORD * WORDS_PER_SUPER;

/// Plain bitvector with a rank directory sampled every 512 bits.
///
/// Rank is a directory lookup plus at most eight popcounts. Select binary
/// searches the directory and then scans one superblock.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
    supers: Vec<u64>,
}

#[derive(Debug, Clone, Default)]
pub struct BitVectorBuilder {
    words: Vec<u64>,
    len: usize,
}

impl BitVectorBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitVectorBuilder { words: Vec::with_capacity(bits.div_ceil(WORD)), len: 0 }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1 << (self.len % WORD);
        }
        self.len += 1;
    }

    pub fn push_run(&mut self, bit: bool, count: usize) {
        for _ in 0..count {
            self.push(bit);
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn build(self) -> BitVector {
        let mut supers = Vec::with_capacity(self.words.len() / WORDS_PER_SUPER + 2);
        let mut acc = 0u64;
        for (i, w) in self.words.iter().enumerate() {
            if i % WORDS_PER_SUPER == 0 {
                supers.push(acc);
            }
            acc += w.count_ones() as u64;
        }
        supers.push(acc);
        BitVector { words: self.words, len: self.len, supers }
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = BitVectorBuilder::new();
        for bit in iter {
            b.push(bit);
        }
        b.build()
    }
}

impl BitVector {
    /// Parses a string of `0`/`1` characters.
    pub fn from_bit_str(s: &str) -> Self {
        s.chars().filter(|c| !c.is_whitespace()).map(|c| c == '1').collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        *self.supers.last().unwrap_or(&0) as usize
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Bit at 0-based index `i`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of bounds ({})", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Ones among the first `i` bits. `i` may equal `len()`.
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let word = i / WORD;
        let sb = word / WORDS_PER_SUPER;
        let mut r = self.supers[sb] as usize;
        for w in &self.words[sb * WORDS_PER_SUPER..word] {
            r += w.count_ones() as usize;
        }
        let rem = i % WORD;
        if rem > 0 {
            r += (self.words[word] & ((1u64 << rem) - 1)).count_ones() as usize;
        }
        r
    }

    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Occurrences of `bit` among the first `i` bits, `0 <= i <= len`.
    pub fn rank(&self, bit: bool, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::range(format!("rank position {i} beyond length {}", self.len)));
        }
        Ok(if bit { self.rank1(i) } else { self.rank0(i) })
    }

    /// 1-indexed position of the `c`-th one, i.e. the smallest `j` with
    /// `rank1(j) == c`.
    pub fn select1(&self, c: usize) -> Option<usize> {
        self.select_impl(c, true)
    }

    /// 1-indexed position of the `c`-th zero.
    pub fn select0(&self, c: usize) -> Option<usize> {
        self.select_impl(c, false)
    }

    pub fn select(&self, bit: bool, c: usize) -> Option<usize> {
        self.select_impl(c, bit)
    }

    fn super_rank(&self, sb: usize, bit: bool) -> usize {
        let ones = self.supers[sb] as usize;
        if bit {
            ones
        } else {
            (sb * SUPER).min(self.len) - ones
        }
    }

    fn select_impl(&self, c: usize, bit: bool) -> Option<usize> {
        let total = if bit { self.count_ones() } else { self.count_zeros() };
        if c == 0 || c > total {
            return None;
        }
        // Last superblock whose preceding count is < c.
        let n_supers = self.supers.len() - 1;
        let (mut lo, mut hi) = (0, n_supers);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.super_rank(mid, bit) < c {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut remaining = c - self.super_rank(lo, bit);
        let mut wi = lo * WORDS_PER_SUPER;
        loop {
            let mut w = self.words[wi];
            if !bit {
                w = !w;
                if (wi + 1) * WORD > self.len {
                    let valid = self.len - wi * WORD;
                    w &= (1u64 << valid) - 1;
                }
            }
            let pc = w.count_ones() as usize;
            if pc >= remaining {
                for _ in 1..remaining {
                    w &= w - 1;
                }
                return Some(wi * WORD + w.trailing_zeros() as usize + 1);
            }
            remaining -= pc;
            wi += 1;
        }
    }

    pub fn space_bits(&self) -> u64 {
        (self.words.len() * 64 + self.supers.len() * 64 + 2 * 64) as u64
    }
}
