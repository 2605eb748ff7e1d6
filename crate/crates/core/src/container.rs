//! The shared on-disk index container.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "TGIX"
//! 4       2     format version, little endian (currently 1)
//! 6       1     structure tag (see StructureKind::tag)
//! 7       1     flags: bit 0 Ψ compressed, bit 1 vertex names present,
//!               bit 2 reverse twin present
//! 8       8     payload length in bytes, little endian
//! 16      ...   payload: bincode of (vertex names, index)
//! ```
//!
//! bincode 1 writes integers little endian with fixed widths, so the
//! payload of a given index is byte-for-byte stable.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cas::Cas;
use crate::cet::Cet;
use crate::ckd::CkdTreeIndex;
use crate::edgelog::EdgeLog;
use crate::error::{Error, Result};
use crate::evelog::EveLog;
use crate::model::{
    Contact, Edge, GraphDims, QueryInterval, TemporalGraph, TemporalIndex, Time, Vertex,
};
use crate::oracle::OracleIndex;
use crate::tgcsa::{PsiEncoding, Tgcsa};

pub const MAGIC: [u8; 4] = *b"TGIX";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 16;

const FLAG_COMPRESSED_PSI: u8 = 1;
const FLAG_NAMES: u8 = 1 << 1;
const FLAG_REVERSE: u8 = 1 << 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StructureKind {
    Oracle,
    EdgeLog,
    EveLog,
    Cas,
    Cet,
    Tgcsa,
    Ckd,
}

impl StructureKind {
    pub const ALL: [StructureKind; 7] = [
        StructureKind::Oracle,
        StructureKind::EdgeLog,
        StructureKind::EveLog,
        StructureKind::Cas,
        StructureKind::Cet,
        StructureKind::Tgcsa,
        StructureKind::Ckd,
    ];

    /// The six compact structures, without the oracle.
    pub const INDEXES: [StructureKind; 6] = [
        StructureKind::EdgeLog,
        StructureKind::EveLog,
        StructureKind::Cas,
        StructureKind::Cet,
        StructureKind::Tgcsa,
        StructureKind::Ckd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Oracle => "oracle",
            StructureKind::EdgeLog => "edgelog",
            StructureKind::EveLog => "evelog",
            StructureKind::Cas => "cas",
            StructureKind::Cet => "cet",
            StructureKind::Tgcsa => "tgcsa",
            StructureKind::Ckd => "ckd",
        }
    }

    pub fn tag(self) -> u8 {
        self as u8
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        StructureKind::ALL
            .get(tag as usize)
            .copied()
            .ok_or_else(|| Error::UnsupportedVersion(format!("unknown structure tag {tag}")))
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StructureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StructureKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse { line: 0, message: format!("unknown structure `{s}`") })
    }
}

/// Options that change how a structure is laid out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Also index the transposed graph for reverse neighbors (EdgeLog,
    /// EveLog and CAS).
    pub reverse: bool,
    pub psi: PsiEncoding,
}

/// Any of the seven index types behind one value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnyIndex {
    Oracle(OracleIndex),
    EdgeLog(EdgeLog),
    EveLog(EveLog),
    Cas(Cas),
    Cet(Cet),
    Tgcsa(Tgcsa),
    Ckd(CkdTreeIndex),
}

macro_rules! delegate {
    ($self:ident, $ix:ident => $body:expr) => {
        match $self {
            AnyIndex::Oracle($ix) => $body,
            AnyIndex::EdgeLog($ix) => $body,
            AnyIndex::EveLog($ix) => $body,
            AnyIndex::Cas($ix) => $body,
            AnyIndex::Cet($ix) => $body,
            AnyIndex::Tgcsa($ix) => $body,
            AnyIndex::Ckd($ix) => $body,
        }
    };
}

impl AnyIndex {
    pub fn build(kind: StructureKind, graph: &TemporalGraph) -> Result<Self> {
        Self::build_with(kind, graph, BuildOptions::default())
    }

    pub fn build_with(kind: StructureKind, graph: &TemporalGraph, opts: BuildOptions) -> Result<Self> {
        Ok(match kind {
            StructureKind::Oracle => AnyIndex::Oracle(OracleIndex::build(graph)),
            StructureKind::EdgeLog => AnyIndex::EdgeLog(EdgeLog::build(graph, opts.reverse)?),
            StructureKind::EveLog => AnyIndex::EveLog(EveLog::build(graph, opts.reverse)?),
            StructureKind::Cas => AnyIndex::Cas(Cas::build(graph, opts.reverse)?),
            StructureKind::Cet => AnyIndex::Cet(Cet::build(graph)?),
            StructureKind::Tgcsa => AnyIndex::Tgcsa(Tgcsa::build_with(graph, opts.psi)?),
            StructureKind::Ckd => AnyIndex::Ckd(CkdTreeIndex::build(graph)?),
        })
    }

    pub fn kind(&self) -> StructureKind {
        match self {
            AnyIndex::Oracle(_) => StructureKind::Oracle,
            AnyIndex::EdgeLog(_) => StructureKind::EdgeLog,
            AnyIndex::EveLog(_) => StructureKind::EveLog,
            AnyIndex::Cas(_) => StructureKind::Cas,
            AnyIndex::Cet(_) => StructureKind::Cet,
            AnyIndex::Tgcsa(_) => StructureKind::Tgcsa,
            AnyIndex::Ckd(_) => StructureKind::Ckd,
        }
    }

    fn flags(&self) -> u8 {
        match self {
            AnyIndex::Tgcsa(t) if t.psi_encoding() == PsiEncoding::Compressed => FLAG_COMPRESSED_PSI,
            AnyIndex::EdgeLog(x) if x.has_reverse() => FLAG_REVERSE,
            AnyIndex::EveLog(x) if x.has_reverse() => FLAG_REVERSE,
            AnyIndex::Cas(x) if x.has_reverse() => FLAG_REVERSE,
            _ => 0,
        }
    }

    /// Recovers the contact list through the query interface: the edges
    /// activated and deactivated at each timestamp, paired per edge.
    pub fn to_graph(&self) -> Result<TemporalGraph> {
        let dims = self.dims();
        if let AnyIndex::Oracle(o) = self {
            return Ok(o.graph().clone());
        }
        let mut events: Vec<(Edge, Time, bool)> = Vec::new();
        for t in 0..dims.lifetime {
            let q = QueryInterval::point(t);
            events.extend(self.activated_edges(q)?.into_iter().map(|e| (e, t, true)));
            events.extend(self.deactivated_edges(q)?.into_iter().map(|e| (e, t, false)));
        }
        events.sort_unstable_by_key(|&(e, t, _)| (e, t));
        let mut contacts = Vec::with_capacity(events.len() / 2);
        for pair in events.chunks(2) {
            match pair {
                [(e, b, true), (e2, end, false)] if e == e2 => contacts.push(Contact::new(e.0, e.1, *b, *end)),
                _ => return Err(Error::Decoding("unpaired activation events".into())),
            }
        }
        TemporalGraph::new(contacts, dims.vertices, dims.lifetime)
    }
}

impl TemporalIndex for AnyIndex {
    fn dims(&self) -> GraphDims {
        delegate!(self, x => x.dims())
    }

    fn contact_count(&self) -> usize {
        delegate!(self, x => x.contact_count())
    }

    fn space_bits(&self) -> u64 {
        delegate!(self, x => x.space_bits())
    }

    fn has_edge(&self, u: Vertex, v: Vertex, q: QueryInterval) -> Result<bool> {
        delegate!(self, x => x.has_edge(u, v, q))
    }

    fn next_activation(&self, u: Vertex, v: Vertex, t: Time) -> Result<Option<Time>> {
        delegate!(self, x => x.next_activation(u, v, t))
    }

    fn neighbors(&self, u: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        delegate!(self, x => x.neighbors(u, q))
    }

    fn reverse_neighbors(&self, v: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        delegate!(self, x => x.reverse_neighbors(v, q))
    }

    fn aggregate(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        delegate!(self, x => x.aggregate(q))
    }

    fn activated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        delegate!(self, x => x.activated_edges(q))
    }

    fn deactivated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        delegate!(self, x => x.deactivated_edges(q))
    }

    fn changed_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        delegate!(self, x => x.changed_edges(q))
    }
}

/// An index together with the optional vertex names of its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub index: AnyIndex,
    pub names: Option<Vec<String>>,
}

fn encode_err(e: bincode::Error) -> Error {
    Error::Encoding(e.to_string())
}

fn decode_err(e: bincode::Error) -> Error {
    Error::Decoding(e.to_string())
}

impl Container {
    pub fn new(index: AnyIndex, names: Option<Vec<String>>) -> Self {
        Container { index, names }
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let names = &self.names;
        let index = &self.index;
        let payload = delegate!(index, x => bincode::serialize(&(names, x))).map_err(encode_err)?;
        let mut flags = self.index.flags();
        if names.is_some() {
            flags |= FLAG_NAMES;
        }
        let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(self.index.kind().tag());
        out.push(flags);
        out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        out.extend_from_slice(&payload);
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN || bytes[..4] != MAGIC {
            return Err(Error::UnsupportedVersion("missing TGIX magic".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(Error::UnsupportedVersion(format!("format version {version}")));
        }
        let kind = StructureKind::from_tag(bytes[6])?;
        let flags = bytes[7];
        let len = u64::from_le_bytes(bytes[8..16].try_into().expect("eight bytes"));
        let payload = &bytes[HEADER_LEN..];
        if payload.len() as u64 != len {
            return Err(Error::Decoding(format!("payload holds {} bytes, header says {len}", payload.len())));
        }
        fn read<T: serde::de::DeserializeOwned>(p: &[u8]) -> Result<(Option<Vec<String>>, T)> {
            bincode::deserialize(p).map_err(decode_err)
        }
        let (names, index) = match kind {
            StructureKind::Oracle => read(payload).map(|(n, x)| (n, AnyIndex::Oracle(x)))?,
            StructureKind::EdgeLog => read(payload).map(|(n, x)| (n, AnyIndex::EdgeLog(x)))?,
            StructureKind::EveLog => read(payload).map(|(n, x)| (n, AnyIndex::EveLog(x)))?,
            StructureKind::Cas => read(payload).map(|(n, x)| (n, AnyIndex::Cas(x)))?,
            StructureKind::Cet => read(payload).map(|(n, x)| (n, AnyIndex::Cet(x)))?,
            StructureKind::Tgcsa => read(payload).map(|(n, x)| (n, AnyIndex::Tgcsa(x)))?,
            StructureKind::Ckd => read(payload).map(|(n, x)| (n, AnyIndex::Ckd(x)))?,
        };
        if names.is_some() != (flags & FLAG_NAMES != 0) || index.flags() != flags & !FLAG_NAMES {
            return Err(Error::Decoding(format!("header flags {flags:#04x} disagree with the payload")));
        }
        Ok(Container { index, names })
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(&self.to_bytes()?)?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

/// Whether `bytes` starts like a container.
pub fn is_container(bytes: &[u8]) -> bool {
    bytes.starts_with(&MAGIC)
}
