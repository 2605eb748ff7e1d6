//! Delta-gap transform of sorted integer lists.

use serde::{Deserialize, Serialize};

use super::varint;
use crate::error::{Error, Result};

/// A strictly increasing list written as its first element and the gaps
/// between successive elements. The empty list has no first element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaStream {
    pub first: Option<u64>,
    pub gaps: Vec<u64>,
}

pub fn encode(list: &[u64]) -> Result<DeltaStream> {
    let Some(&first) = list.first() else {
        return Ok(DeltaStream { first: None, gaps: Vec::new() });
    };
    let mut gaps = Vec::with_capacity(list.len() - 1);
    for w in list.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Encoding(format!("list not strictly increasing at {} -> {}", w[0], w[1])));
        }
        gaps.push(w[1] - w[0]);
    }
    Ok(DeltaStream { first: Some(first), gaps })
}

impl DeltaStream {
    pub fn decode(&self) -> Vec<u64> {
        let Some(first) = self.first else { return Vec::new() };
        let mut out = Vec::with_capacity(self.gaps.len() + 1);
        let mut acc = first;
        out.push(acc);
        for &g in &self.gaps {
            acc += g;
            out.push(acc);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.first.map_or(0, |_| self.gaps.len() + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_none()
    }

    /// Serializes as `varint(len)` followed by the first value and the gaps.
    pub fn write(&self, out: &mut Vec<u8>) {
        varint::encode(self.len() as u64, out);
        if let Some(first) = self.first {
            varint::encode(first, out);
            for &g in &self.gaps {
                varint::encode(g, out);
            }
        }
    }

    pub fn read(bytes: &[u8], pos: &mut usize) -> Result<Self> {
        let len = varint::decode(bytes, pos)? as usize;
        if len == 0 {
            return Ok(DeltaStream { first: None, gaps: Vec::new() });
        }
        let first = varint::decode(bytes, pos)?;
        let mut gaps = Vec::with_capacity(len.min(bytes.len()) - 1);
        for _ in 1..len {
            let g = varint::decode(bytes, pos)?;
            if g == 0 {
                return Err(Error::Decoding("zero gap in delta stream".into()));
            }
            gaps.push(g);
        }
        Ok(DeltaStream { first: Some(first), gaps })
    }
}

/// Writes a strictly increasing list as a delta-gap stream.
pub fn write_sorted(list: &[u64], out: &mut Vec<u8>) -> Result<()> {
    encode(list)?.write(out);
    Ok(())
}

pub fn read_sorted(bytes: &[u8], pos: &mut usize) -> Result<Vec<u64>> {
    Ok(DeltaStream::read(bytes, pos)?.decode())
}

/// Writes a non-decreasing list. Element `i` is shifted up by `i` so the
/// stored sequence is strictly increasing.
pub fn write_non_decreasing(list: &[u64], out: &mut Vec<u8>) -> Result<()> {
    let shifted: Vec<u64> = list.iter().enumerate().map(|(i, &x)| x + i as u64).collect();
    write_sorted(&shifted, out)
}

pub fn read_non_decreasing(bytes: &[u8], pos: &mut usize) -> Result<Vec<u64>> {
    let mut v = read_sorted(bytes, pos)?;
    for (i, x) in v.iter_mut().enumerate() {
        *x -= i as u64;
    }
    Ok(v)
}
