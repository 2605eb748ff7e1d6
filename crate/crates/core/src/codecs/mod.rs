//! Integer-list codecs used by the log-style indexes.
//!
//! Byte layouts are fixed and platform independent:
//!
//! * varint: little-endian base-128, seven payload bits per byte, high bit
//!   set on every byte except the last.
//! * delta-gap: the first value followed by the successive differences,
//!   each written as a varint.
//! * ETDC: symbols ranked by descending frequency (ties by ascending
//!   symbol); rank `r` is written in base 128, most significant digit
//!   first, with the high bit set only on the final byte.

pub mod deltagap;
pub mod etdc;
pub mod varint;

pub use deltagap::DeltaStream;
pub use etdc::EtdcDictionary;
