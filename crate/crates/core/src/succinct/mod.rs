//! Rank/select bitvectors, packed integer arrays and wavelet trees.

mod bitvec;
mod interleaved;
mod intvec;
mod wavelet;

pub use bitvec::{BitVector, BitVectorBuilder};
pub use interleaved::{InterleavedWaveletTree, Tuple};
pub use intvec::IntVector;
pub use wavelet::WaveletTree;
