//! Space and latency reports over seeded query workloads.

use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::container::{AnyIndex, BuildOptions, StructureKind};
use crate::error::Result;
use crate::model::{GraphDims, QueryInterval, TemporalGraph, TemporalIndex};
use crate::oracle::OracleIndex;
use crate::query::{Answer, Query, QueryKind};

/// The four size parameters of a temporal graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub vertices: u32,
    pub edges: usize,
    pub contacts: usize,
    pub lifetime: u32,
}

impl GraphStats {
    pub fn of(graph: &TemporalGraph) -> Self {
        GraphStats {
            vertices: graph.vertices(),
            edges: graph.edge_count(),
            contacts: graph.contacts().len(),
            lifetime: graph.lifetime(),
        }
    }
}

/// `per_class` random queries of every kind. Activation queries only get
/// point and weak intervals.
pub fn workload(dims: GraphDims, per_class: usize, seed: u64) -> Vec<Query> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(8 * per_class);
    if dims.vertices == 0 || dims.lifetime == 0 {
        return out;
    }
    for kind in QueryKind::ALL {
        for _ in 0..per_class {
            let a = rng.gen_range(0..dims.lifetime);
            let b = rng.gen_range(0..dims.lifetime);
            let (from, to) = (a.min(b), a.max(b));
            let weak_only = matches!(kind, QueryKind::ActivatedEdges | QueryKind::DeactivatedEdges);
            let q = match rng.gen_range(0..if weak_only { 2 } else { 3 }) {
                0 => QueryInterval::point(from),
                1 => QueryInterval::weak(from, to),
                _ => QueryInterval::strong(from, to),
            };
            let vs: Vec<u32> = (0..kind.arity()).map(|_| rng.gen_range(0..dims.vertices)).collect();
            out.push(Query::new(kind, &vs, q).expect("arity matches"));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    pub per_class: usize,
    pub seed: u64,
    /// Record wall-clock build and query times. Without them the report is
    /// a pure function of its inputs.
    pub timing: bool,
    /// Compare every answer with the oracle.
    pub verify: bool,
    pub build: BuildOptions,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions { per_class: 100, seed: 42, timing: true, verify: false, build: BuildOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub query: String,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p50_ns: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p99_ns: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub structure: String,
    pub space_bits: u64,
    pub bits_per_contact: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub build_ms: Option<f64>,
    /// Hash of every answer in workload order; equal digests mean equal
    /// answers.
    pub answer_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatches: Option<usize>,
    pub classes: Vec<ClassReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub graph: GraphStats,
    pub seed: u64,
    pub queries_per_class: usize,
    pub structures: Vec<StructureReport>,
}

fn percentile(sorted: &[u64], p: f64) -> Option<u64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Some(sorted[rank - 1])
}

/// Builds every requested structure on `graph` and runs the workload
/// against it.
pub fn run_bench(graph: &TemporalGraph, kinds: &[StructureKind], opts: BenchOptions) -> Result<BenchReport> {
    let queries = workload(graph.dims(), opts.per_class, opts.seed);
    let expected: Option<Vec<Result<Answer>>> = opts
        .verify
        .then(|| queries.iter().map(|q| q.evaluate(&OracleIndex::build(graph))).collect());
    let mut structures = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let started = Instant::now();
        let index = AnyIndex::build_with(kind, graph, opts.build)?;
        let build_ms = opts.timing.then(|| started.elapsed().as_secs_f64() * 1e3);
        let mut hasher = DefaultHasher::new();
        let mut mismatches = 0;
        let mut classes = Vec::new();
        for (k, chunk) in queries.chunks(opts.per_class.max(1)).enumerate() {
            if opts.timing {
                for q in chunk {
                    let _ = q.evaluate(&index);
                }
            }
            let mut times = Vec::with_capacity(chunk.len());
            for (i, q) in chunk.iter().enumerate() {
                let t0 = Instant::now();
                let got = q.evaluate(&index);
                times.push(t0.elapsed().as_nanos() as u64);
                let rendered = match &got {
                    Ok(a) => format!("{a:?}"),
                    Err(e) => format!("error: {e}"),
                };
                rendered.hash(&mut hasher);
                if let Some(exp) = &expected {
                    let want = &exp[k * opts.per_class + i];
                    let same = match (&got, want) {
                        (Ok(a), Ok(b)) => a == b,
                        (Err(a), Err(b)) => std::mem::discriminant(a) == std::mem::discriminant(b),
                        _ => false,
                    };
                    mismatches += usize::from(!same);
                }
            }
            times.sort_unstable();
            classes.push(ClassReport {
                query: chunk[0].kind().to_string(),
                count: chunk.len(),
                p50_ns: if opts.timing { percentile(&times, 0.5) } else { None },
                p99_ns: if opts.timing { percentile(&times, 0.99) } else { None },
            });
        }
        let space_bits = index.space_bits();
        structures.push(StructureReport {
            structure: kind.to_string(),
            space_bits,
            bits_per_contact: if graph.contacts().is_empty() {
                0.0
            } else {
                space_bits as f64 / graph.contacts().len() as f64
            },
            build_ms,
            answer_digest: format!("{:016x}", hasher.finish()),
            mismatches: opts.verify.then_some(mismatches),
            classes,
        });
    }
    Ok(BenchReport { graph: GraphStats::of(graph), seed: opts.seed, queries_per_class: opts.per_class, structures })
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let g = &self.graph;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "n = {}  m = {}  c = {}  τ = {}  seed = {}  queries/class = {}",
            g.vertices, g.edges, g.contacts, g.lifetime, self.seed, self.queries_per_class
        );
        let _ = writeln!(out, "{:<10} {:>14} {:>12} {:>12}  digest", "structure", "space (bits)", "bits/contact", "build (ms)");
        for s in &self.structures {
            let build = s.build_ms.map_or("-".to_string(), |b| format!("{b:.2}"));
            let _ = write!(
                out,
                "{:<10} {:>14} {:>12.2} {:>12}  {}",
                s.structure, s.space_bits, s.bits_per_contact, build, s.answer_digest
            );
            if let Some(m) = s.mismatches {
                let _ = write!(out, "  mismatches = {m}");
            }
            out.push('\n');
        }
        if self.structures.iter().any(|s| s.classes.iter().any(|c| c.p50_ns.is_some())) {
            let _ = writeln!(out, "\nlatency p50 / p99 (ns)");
            let _ = write!(out, "{:<18}", "query");
            for s in &self.structures {
                let _ = write!(out, " {:>17}", s.structure);
            }
            out.push('\n');
            for (i, kind) in QueryKind::ALL.iter().enumerate() {
                let _ = write!(out, "{:<18}", kind.name());
                for s in &self.structures {
                    let cell = s.classes.get(i).map_or("-".to_string(), |c| {
                        format!("{}/{}", c.p50_ns.unwrap_or(0), c.p99_ns.unwrap_or(0))
                    });
                    let _ = write!(out, " {cell:>17}");
                }
                out.push('\n');
            }
        }
        out
    }
}
