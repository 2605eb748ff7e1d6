//! Little-endian base-128 variable-length integers.

use crate::error::{Error, Result};

pub fn encode(mut k: u64, out: &mut Vec<u8>) {
    while k >= 0x80 {
        out.push((k as u8 & 0x7f) | 0x80);
        k >>= 7;
    }
    out.push(k as u8);
}

pub fn encoded_len(k: u64) -> usize {
    let bits = 64 - k.leading_zeros() as usize;
    bits.div_ceil(7).max(1)
}

/// Decodes one value starting at `*pos` and advances `pos` past it.
pub fn decode(bytes: &[u8], pos: &mut usize) -> Result<u64> {
    let mut value = 0u64;
    let mut shift = 0u32;
    loop {
        let Some(&b) = bytes.get(*pos) else {
            return Err(Error::Decoding(format!("truncated varint at byte {}", *pos)));
        };
        *pos += 1;
        if shift >= 64 || (shift == 63 && b & 0x7f > 1) {
            return Err(Error::Decoding("varint overflows 64 bits".into()));
        }
        value |= u64::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            return Ok(value);
        }
        shift += 7;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bytes_of(k: u64) -> Vec<u8> {
        let mut v = Vec::new();
        encode(k, &mut v);
        v
    }

    #[test]
    fn lengths_at_boundaries() {
        assert_eq!(bytes_of(0), vec![0]);
        assert_eq!(bytes_of(127).len(), 1);
        assert_eq!(bytes_of(128), vec![0x80, 0x01]);
        assert_eq!(bytes_of(u64::MAX).len(), 10);
        for k in [0, 1, 127, 128, 16383, 16384, u64::MAX] {
            assert_eq!(encoded_len(k), bytes_of(k).len());
        }
    }

    #[test]
    fn exhaustive_round_trip_below_2_pow_20() {
        let mut buf = Vec::new();
        for k in 0..(1u64 << 20) {
            encode(k, &mut buf);
        }
        let mut pos = 0;
        for k in 0..(1u64 << 20) {
            assert_eq!(decode(&buf, &mut pos).unwrap(), k);
        }
        assert_eq!(pos, buf.len());
    }

    #[test]
    fn truncated_input_fails() {
        let mut pos = 0;
        assert!(decode(&[0x80], &mut pos).is_err());
        let mut pos = 0;
        assert!(decode(&[], &mut pos).is_err());
    }

    #[test]
    fn max_value_round_trips() {
        let b = bytes_of(u64::MAX);
        let mut pos = 0;
        assert_eq!(decode(&b, &mut pos).unwrap(), u64::MAX);
    }
}
