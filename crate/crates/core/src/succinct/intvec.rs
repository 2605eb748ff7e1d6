//! Fixed-width integer arrays.

use serde::{Deserialize, Serialize};

/// Unsigned integers of `width` bits each, packed into words.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntVector {
    width: u32,
    len: usize,
    words: Vec<u64>,
}

impl IntVector {
    pub fn new(width: u32) -> Self {
        assert!(width <= 64, "width {width} exceeds 64 bits");
        IntVector { width, len: 0, words: Vec::new() }
    }

    /// Packs `values` with the smallest width that holds the largest one.
    pub fn from_slice(values: &[u64]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        let mut out = IntVector::new(64 - max.leading_zeros());
        out.words.reserve((values.len() * out.width as usize).div_ceil(64));
        values.iter().for_each(|&x| out.push(x));
        out
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, x: u64) {
        debug_assert!(self.width == 64 || x >> self.width == 0, "{x} does not fit {} bits", self.width);
        let bit = self.len * self.width as usize;
        self.len += 1;
        if self.width == 0 {
            return;
        }
        let needed = (self.len * self.width as usize).div_ceil(64);
        self.words.resize(needed, 0);
        let (w, off) = (bit / 64, bit % 64);
        self.words[w] |= x << off;
        if off + self.width as usize > 64 {
            self.words[w + 1] |= x >> (64 - off);
        }
    }

    pub fn get(&self, i: usize) -> u64 {
        assert!(i < self.len, "index {i} out of bounds ({})", self.len);
        if self.width == 0 {
            return 0;
        }
        let bit = i * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        let mut x = self.words[w] >> off;
        if off + self.width as usize > 64 {
            x |= self.words[w + 1] << (64 - off);
        }
        if self.width == 64 {
            x
        } else {
            x & ((1u64 << self.width) - 1)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub fn space_bits(&self) -> u64 {
        (self.len * self.width as usize) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn widths() {
        assert_eq!(IntVector::from_slice(&[0, 0]).width(), 0);
        assert_eq!(IntVector::from_slice(&[5, 1]).width(), 3);
        assert_eq!(IntVector::from_slice(&[u64::MAX]).get(0), u64::MAX);
        assert_eq!(IntVector::from_slice(&[0, 0, 0]).iter().collect::<Vec<_>>(), vec![0, 0, 0]);
    }

    proptest! {
        #[test]
        fn round_trip(values in proptest::collection::vec(any::<u64>(), 0..100), shift in 0u32..64) {
            let values: Vec<u64> = values.into_iter().map(|x| x >> shift).collect();
            let v = IntVector::from_slice(&values);
            prop_assert_eq!(v.iter().collect::<Vec<_>>(), values);
        }
    }
}
