//! End-Tagged Dense Codes.
//!
//! A byte-oriented, frequency-ranked prefix code. Every codeword ends with
//! the only byte that has its high bit set, so codewords can be delimited
//! without a dictionary lookup.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::succinct::IntVector;

const DIGITS: u64 = 128;
const TAG: u8 = 0x80;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtdcDictionary {
    /// Symbols by rank.
    ranked: IntVector,
    /// Ranks ordered by their symbols.
    by_symbol: IntVector,
}

impl EtdcDictionary {
    /// Builds from `(symbol, frequency)` pairs. More frequent symbols get
    /// lower ranks; ties go to the smaller symbol.
    pub fn build(frequencies: &[(u64, u64)]) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::Encoding("empty frequency table".into()));
        }
        let mut order: Vec<(u64, u64)> = frequencies.to_vec();
        order.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        order.dedup_by_key(|p| p.0);
        let ranked: Vec<u64> = order.iter().map(|p| p.0).collect();
        let mut by_symbol: Vec<(u64, u64)> = ranked.iter().enumerate().map(|(r, &s)| (s, r as u64)).collect();
        by_symbol.sort_unstable();
        by_symbol.dedup_by_key(|p| p.0);
        if by_symbol.len() != ranked.len() {
            return Err(Error::Encoding("duplicate symbols in frequency table".into()));
        }
        let by_symbol: Vec<u64> = by_symbol.into_iter().map(|p| p.1).collect();
        Ok(EtdcDictionary { ranked: IntVector::from_slice(&ranked), by_symbol: IntVector::from_slice(&by_symbol) })
    }

    /// Builds from the frequencies observed in `stream`.
    pub fn from_stream(stream: &[u64]) -> Result<Self> {
        let mut sorted = stream.to_vec();
        sorted.sort_unstable();
        let mut freqs: Vec<(u64, u64)> = Vec::new();
        for s in sorted {
            match freqs.last_mut() {
                Some((sym, f)) if *sym == s => *f += 1,
                _ => freqs.push((s, 1)),
            }
        }
        Self::build(&freqs)
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    pub fn rank_of(&self, symbol: u64) -> Result<u64> {
        let (mut lo, mut hi) = (0, self.by_symbol.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            let rank = self.by_symbol.get(mid);
            match self.ranked.get(rank as usize).cmp(&symbol) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Ok(rank),
            }
        }
        Err(Error::UnknownSymbol(symbol))
    }

    pub fn code_len(&self, symbol: u64) -> Result<usize> {
        Ok(rank_code_len(self.rank_of(symbol)?))
    }

    pub fn encode_symbol(&self, symbol: u64, out: &mut Vec<u8>) -> Result<()> {
        encode_rank(self.rank_of(symbol)?, out);
        Ok(())
    }

    pub fn encode(&self, stream: &[u64]) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(stream.len());
        for &s in stream {
            self.encode_symbol(s, &mut out)?;
        }
        Ok(out)
    }

    pub fn decode_symbol(&self, bytes: &[u8], pos: &mut usize) -> Result<u64> {
        let r = decode_rank(bytes, pos)?;
        if r as usize >= self.ranked.len() {
            return Err(Error::Decoding(format!("codeword rank {r} beyond dictionary")));
        }
        Ok(self.ranked.get(r as usize))
    }

    pub fn decode(&self, bytes: &[u8]) -> Result<Vec<u64>> {
        let mut pos = 0;
        let mut out = Vec::new();
        while pos < bytes.len() {
            out.push(self.decode_symbol(bytes, &mut pos)?);
        }
        Ok(out)
    }

    pub fn space_bits(&self) -> u64 {
        self.ranked.space_bits() + self.by_symbol.space_bits()
    }
}

/// First rank that needs `k + 1` bytes.
fn base(k: u32) -> u64 {
    (1..=k).map(|i| DIGITS.pow(i)).sum()
}

fn rank_code_len(r: u64) -> usize {
    let mut k = 1;
    while r >= base(k) {
        k += 1;
    }
    k as usize
}

fn encode_rank(r: u64, out: &mut Vec<u8>) {
    let k = rank_code_len(r) as u32;
    let x = r - base(k - 1);
    for i in (0..k).rev() {
        let digit = (x / DIGITS.pow(i) % DIGITS) as u8;
        out.push(if i == 0 { digit | TAG } else { digit });
    }
}

fn decode_rank(bytes: &[u8], pos: &mut usize) -> Result<u64> {
    let mut x = 0u64;
    let mut k = 0;
    loop {
        let Some(&b) = bytes.get(*pos) else {
            return Err(Error::Decoding(format!("truncated codeword at byte {}", *pos)));
        };
        *pos += 1;
        k += 1;
        x = x * DIGITS + u64::from(b & !TAG);
        if b & TAG != 0 {
            return Ok(base(k - 1) + x);
        }
    }
}
