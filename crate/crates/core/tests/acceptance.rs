//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::thread;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tgraph_core::codecs::{deltagap, etdc::EtdcDictionary, varint};
use tgraph_core::generate::{random_small, uniform};
use tgraph_core::report::run_bench;
use tgraph_core::succinct::{BitVector, BitVectorBuilder, InterleavedWaveletTree, WaveletTree};
use tgraph_core::tgcsa::{encode_contacts, suffix_array};
use tgraph_core::{
    fixture_graph, BenchOptions, Cas, Cet, EveLog, GenParams, KdTree, OracleIndex,
    QueryInterval, StructureKind, TemporalGraph, TemporalIndex, Tgcsa,
};

use common::*;

const SEED: u64 = 0x7467_7261_7068;

type Outcome = Result<String, Vec<String>>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(elapsed: Duration, limit: Duration, failures: &mut Vec<String>) {
    if elapsed > limit {
        failures.push(format!("took {elapsed:.2?}, limit {limit:.0?}"));
    }
}

fn finish(summary: String, failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(failures)
    }
}

fn golden_suite(round_trip_first: bool) -> Outcome {
    let started = Instant::now();
    let mut failures = Vec::new();
    let oracle = OracleIndex::build(&fixture_graph());
    failures.extend(golden_failures(&oracle).into_iter().map(|f| format!("oracle: {f}")));
    let mut implementations = 1;
    for index in fixture_indexes() {
        let index = if round_trip_first { round_trip(&index) } else { index };
        failures.extend(golden_failures(&index).into_iter().map(|f| format!("{}: {f}", index.kind())));
        implementations += 1;
    }
    let elapsed = started.elapsed();
    within(elapsed, Duration::from_secs(1), &mut failures);
    finish(format!("24 cells x {implementations} implementations in {elapsed:.2?}"), failures)
}

fn random_graph(i: u64) -> TemporalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    random_small(&mut rng, 16, 16, 128)
}

fn equivalence_one(i: u64, round_trip_first: bool) -> (usize, Vec<String>) {
    let graph = random_graph(i);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED.wrapping_add(i));
    let intervals = random_intervals(&mut rng, graph.lifetime(), 20);
    let queries = exhaustive_queries(&graph, &intervals);
    let opts = option_sets()[i as usize % 2];
    let mut indexes = build_all(&graph, opts);
    if round_trip_first {
        indexes = indexes.iter().map(round_trip).collect();
    }
    let failures = oracle_mismatches(&graph, &indexes, &queries)
        .into_iter()
        .map(|f| format!("graph {i} {opts:?}: {f}"))
        .collect();
    (queries.len() * indexes.len(), failures)
}

fn equivalence_suite(graphs: u64, round_trip_first: bool) -> Outcome {
    let started = Instant::now();
    let workers = thread::available_parallelism().map_or(1, |n| n.get()) as u64;
    let results: Vec<(usize, Vec<String>)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    let mut total = 0;
                    let mut failures = Vec::new();
                    for i in (w..graphs).step_by(workers as usize) {
                        let (n, f) = equivalence_one(i, round_trip_first);
                        total += n;
                        failures.extend(f);
                    }
                    (total, failures)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let checked: usize = results.iter().map(|r| r.0).sum();
    let mut failures: Vec<String> = results.into_iter().flat_map(|r| r.1).collect();
    let elapsed = started.elapsed();
    within(elapsed, Duration::from_secs(60), &mut failures);
    finish(format!("{graphs} graphs, {checked} structure answers, 0 mismatches in {elapsed:.2?}"), failures)
}

fn naive_rank(seq: &[u64], sym: u64, i: usize) -> usize {
    seq[..i].iter().filter(|&&x| x == sym).count()
}

fn naive_select(seq: &[u64], sym: u64, f: usize) -> Option<usize> {
    seq.iter().enumerate().filter(|(_, &x)| x == sym).nth(f.checked_sub(1)?).map(|(p, _)| p + 1)
}

fn succinct_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut failures = Vec::new();
    let mut calls = 0usize;
    let mut check = |ok: bool, what: String| {
        calls += 1;
        if !ok && failures.len() < 20 {
            failures.push(what);
        }
    };

    for _ in 0..40 {
        let len = rng.gen_range(0..2000);
        let density = rng.gen_range(0.0..1.0);
        let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
        let mut b = BitVectorBuilder::new();
        bits.iter().for_each(|&x| b.push(x));
        let bv: BitVector = b.build();
        for _ in 0..100 {
            let i = rng.gen_range(0..=len);
            let ones = bits[..i].iter().filter(|&&x| x).count();
            check(bv.rank1(i) == ones && bv.rank0(i) == i - ones, format!("bitvector rank {i}"));
            let bit = rng.gen_bool(0.5);
            let c = rng.gen_range(0..=len + 1);
            let want = bits.iter().enumerate().filter(|(_, &x)| x == bit).nth(c.wrapping_sub(1)).map(|(p, _)| p + 1);
            let want = if c == 0 { None } else { want };
            check(bv.select(bit, c) == want, format!("bitvector select({bit}, {c})"));
        }
    }

    for _ in 0..40 {
        let len = rng.gen_range(1..400);
        let sigma = rng.gen_range(1..70u64);
        let seq: Vec<u64> = (0..len).map(|_| rng.gen_range(0..sigma)).collect();
        let wt = WaveletTree::new(&seq, sigma).unwrap();
        for _ in 0..60 {
            let sym = rng.gen_range(0..sigma);
            let i = rng.gen_range(0..=len);
            check(wt.rank(sym, i).unwrap() == naive_rank(&seq, sym, i), format!("wt rank({sym}, {i})"));
            let f = rng.gen_range(0..len + 2);
            check(wt.select(sym, f) == naive_select(&seq, sym, f), format!("wt select({sym}, {f})"));
            let a = rng.gen_range(1..=len);
            let b = rng.gen_range(1..=len);
            let (i, j) = (a.min(b), a.max(b));
            let x = rng.gen_range(0..sigma);
            let y = rng.gen_range(0..sigma);
            let (lo, hi) = (x.min(y), x.max(y));
            let span = &seq[i - 1..j];
            let count = span.iter().filter(|&&s| (lo..=hi).contains(&s)).count();
            check(wt.range_count(lo, hi, i, j).unwrap() == count, format!("wt range_count {lo}..={hi} [{i},{j}]"));
            let mut report: Vec<(u64, usize)> = Vec::new();
            for s in lo..=hi {
                let c = span.iter().filter(|&&v| v == s).count();
                if c > 0 {
                    report.push((s, c));
                }
            }
            check(wt.range_report(lo, hi, i, j).unwrap() == report, format!("wt range_report {lo}..={hi} [{i},{j}]"));
            let alpha = rng.gen_range(0..sigma + 1);
            let next = span.iter().copied().filter(|&s| s > alpha).min();
            check(wt.range_next_value(alpha, i, j).unwrap() == next, format!("wt range_next_value {alpha} [{i},{j}]"));
            let pos = next.and_then(|v| span.iter().position(|&s| s == v)).map(|p| p + i);
            check(wt.range_next_value_pos(alpha, i, j).unwrap() == pos, format!("wt range_next_value_pos {alpha}"));
        }
    }

    for _ in 0..40 {
        let len = rng.gen_range(1..300);
        let side = rng.gen_range(1..40u64);
        let seq: Vec<[u64; 2]> = (0..len).map(|_| [rng.gen_range(0..side), rng.gen_range(0..side)]).collect();
        let wt = InterleavedWaveletTree::<2>::new(&seq, side).unwrap();
        for _ in 0..50 {
            let t = [rng.gen_range(0..side), rng.gen_range(0..side)];
            let i = rng.gen_range(0..=len);
            let want = seq[..i].iter().filter(|&&x| x == t).count();
            check(wt.rank(&t, i).unwrap() == want, format!("iwt rank({t:?}, {i})"));
            let f = rng.gen_range(0..len + 2);
            let want = seq.iter().enumerate().filter(|(_, &x)| x == t).nth(f.wrapping_sub(1)).map(|(p, _)| p + 1);
            check(wt.select(&t, f) == if f == 0 { None } else { want }, format!("iwt select({t:?}, {f})"));
            let a = rng.gen_range(1..=len);
            let b = rng.gen_range(1..=len);
            let (i, j) = (a.min(b), a.max(b));
            let span = &seq[i - 1..j];
            let mut lo = [0; 2];
            let mut hi = [0; 2];
            for d in 0..2 {
                let x = rng.gen_range(0..side);
                let y = rng.gen_range(0..side);
                lo[d] = x.min(y);
                hi[d] = x.max(y);
            }
            let inside = |t: &[u64; 2]| (0..2).all(|d| lo[d] <= t[d] && t[d] <= hi[d]);
            let count = span.iter().filter(|t| inside(t)).count();
            check(wt.range_count(&lo, &hi, i, j).unwrap() == count, format!("iwt range_count {lo:?} {hi:?}"));
            let distinct: BTreeSet<[u64; 2]> = span.iter().copied().filter(inside).collect();
            let report: Vec<([u64; 2], usize)> =
                distinct.into_iter().map(|t| (t, span.iter().filter(|&&x| x == t).count())).collect();
            check(wt.range_report(&lo, &hi, i, j).unwrap() == report, format!("iwt range_report {lo:?} {hi:?}"));
            let alpha = [rng.gen_range(0..side), rng.gen_range(0..side)];
            let next = span.iter().copied().filter(|&t| t > alpha).min();
            check(wt.range_next_value(&alpha, i, j).unwrap() == next, format!("iwt range_next_value {alpha:?}"));
            let pos = next.and_then(|v| span.iter().position(|&s| s == v)).map(|p| p + i);
            check(wt.range_next_value_pos(&alpha, i, j).unwrap() == pos, format!("iwt range_next_value_pos {alpha:?}"));
        }
    }

    if calls < 10_000 {
        failures.push(format!("only {calls} calls"));
    }
    finish(format!("{calls} calls, 0 mismatches"), failures)
}

fn tgcsa_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut failures = Vec::new();
    let mut graphs = 0;
    while graphs < 100 {
        let g = random_small(&mut rng, 16, 16, 64);
        if g.contacts().is_empty() {
            continue;
        }
        graphs += 1;
        let e = encode_contacts(g.contacts(), g.vertices(), g.lifetime());
        let sa = suffix_array(&e);
        for enc in [tgraph_core::PsiEncoding::Plain, tgraph_core::PsiEncoding::Compressed] {
            let t = Tgcsa::build_with(&g, enc).unwrap();
            for (i, &p) in sa.iter().enumerate() {
                let next = sa[t.psi(i)];
                let ok = if p % 4 == 3 { next == p - 3 } else { next == p + 1 };
                if !ok {
                    failures.push(format!("graph {graphs} {enc:?}: A[psi[{i}]] = {next}, A[{i}] = {p}"));
                }
            }
            for (j, contact) in g.contacts().iter().enumerate() {
                let start = sa.iter().position(|&p| p == 4 * j).unwrap();
                let mut k = start;
                let mut codes = Vec::new();
                for _ in 0..4 {
                    codes.push(t.symbol_at(k));
                    k = t.psi(k);
                }
                if k != start || codes != e[4 * j..4 * j + 4] || t.contact_at(start) != *contact {
                    failures.push(format!("graph {graphs} {enc:?}: cycle of contact {contact:?} does not close"));
                }
            }
        }
    }
    finish(format!("{graphs} graphs, both psi encodings"), failures)
}

/// Coordinates of a row-major cell index, dimension 0 most significant.
fn unflatten(cell: usize, side: u64) -> [u64; 4] {
    let mut p = [0u64; 4];
    let mut rest = cell as u64;
    for d in (0..4).rev() {
        p[d] = rest % side;
        rest /= side;
    }
    p
}

fn ckd_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut failures = Vec::new();
    let mut cells = 0usize;
    for trial in 0..24 {
        let side = rng.gen_range(1..=16u64);
        let volume = (side as usize).pow(4);
        let density = [0.0005, 0.005, 0.05, 0.3][trial % 4];
        let tensor: Vec<bool> = (0..volume).map(|_| rng.gen_bool(density)).collect();
        let points: Vec<[u64; 4]> =
            tensor.iter().enumerate().filter(|(_, &bit)| bit).map(|(cell, _)| unflatten(cell, side)).collect();
        let tree = KdTree::<4>::build(&points, side).unwrap();
        for (cell, &bit) in tensor.iter().enumerate() {
            let p = unflatten(cell, side);
            cells += 1;
            if tree.point(&p).unwrap() != bit && failures.len() < 20 {
                failures.push(format!("side {side}: point {p:?}"));
            }
        }
        for _ in 0..42 {
            let mut lo = [0u64; 4];
            let mut hi = [0u64; 4];
            for d in 0..4 {
                let a = rng.gen_range(0..side);
                let b = rng.gen_range(0..side);
                lo[d] = a.min(b);
                hi[d] = a.max(b);
            }
            let mut got = tree.range(&lo, &hi).unwrap();
            got.sort_unstable();
            let want: Vec<[u64; 4]> =
                points.iter().copied().filter(|p| (0..4).all(|d| lo[d] <= p[d] && p[d] <= hi[d])).collect();
            if got != want && failures.len() < 20 {
                failures.push(format!("side {side}: range {lo:?}..={hi:?}"));
            }
        }
    }
    finish(format!("{cells} exhaustive point cells, 1008 random boxes"), failures)
}

fn codec_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut failures = Vec::new();
    for i in 0..1000 {
        let len = rng.gen_range(0..200);
        let shift = rng.gen_range(0..64);
        let mut list: Vec<u64> = (0..len).map(|_| rng.gen::<u64>() >> shift).collect();
        list.sort_unstable();
        list.dedup();
        let stream = deltagap::encode(&list).unwrap();
        let mut bytes = Vec::new();
        stream.write(&mut bytes);
        let mut pos = 0;
        let back = deltagap::DeltaStream::read(&bytes, &mut pos).unwrap();
        if back.decode() != list || stream.decode() != list || pos != bytes.len() {
            failures.push(format!("delta-gap input {i}"));
        }

        let values: Vec<u64> = (0..len).map(|_| rng.gen::<u64>() >> rng.gen_range(0..64)).collect();
        let mut bytes = Vec::new();
        values.iter().for_each(|&v| varint::encode(v, &mut bytes));
        let mut pos = 0;
        let back: Vec<u64> = values.iter().map(|_| varint::decode(&bytes, &mut pos).unwrap()).collect();
        let lens: usize = values.iter().map(|&v| varint::encoded_len(v)).sum();
        if back != values || pos != bytes.len() || lens != bytes.len() {
            failures.push(format!("varint input {i}"));
        }

        let alphabet = rng.gen_range(1..40_000u64);
        let skew = rng.gen_range(1..4);
        let symbols: Vec<u64> = (0..len.max(1))
            .map(|_| (0..skew).fold(alphabet, |a, _| rng.gen_range(0..a.max(1))))
            .collect();
        let dict = EtdcDictionary::from_stream(&symbols).unwrap();
        let bytes = dict.encode(&symbols).unwrap();
        if dict.decode(&bytes).unwrap() != symbols {
            failures.push(format!("etdc input {i}"));
        }
    }
    finish("1000 inputs per codec".to_string(), failures)
}

fn parity_graph(graph: &TemporalGraph, label: &str, failures: &mut Vec<String>) {
    let oracle = OracleIndex::build(graph);
    let evelog = EveLog::build(graph, false).unwrap();
    let cas = Cas::build(graph, false).unwrap();
    let cet = Cet::build(graph).unwrap();
    let indexes: [(&str, &dyn TemporalIndex); 3] = [("evelog", &evelog), ("cas", &cas), ("cet", &cet)];
    for u in 0..graph.vertices() {
        let events = evelog.events(u).unwrap();
        for v in 0..graph.vertices() {
            for t in 0..graph.lifetime() {
                let q = QueryInterval::point(t);
                let want = oracle.has_edge(u, v, q).unwrap();
                let upto = events.cut(t);
                let count = events.targets[..upto].iter().filter(|&&x| x == v).count();
                if (count % 2 == 1) != want {
                    failures.push(format!("{label}: event list parity of ({u},{v}) at {t}"));
                }
                for (name, index) in indexes {
                    if index.has_edge(u, v, q).unwrap() != want {
                        failures.push(format!("{label}: {name} ({u},{v}) at {t}"));
                    }
                }
            }
        }
    }
}

fn parity_suite() -> Outcome {
    let mut failures = Vec::new();
    parity_graph(&fixture_graph(), "fixture", &mut failures);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for i in 0..100 {
        parity_graph(&random_small(&mut rng, 16, 16, 128), &format!("graph {i}"), &mut failures);
    }
    failures.truncate(20);
    finish("fixture and 100 random graphs at every (u, v, t)".to_string(), failures)
}

fn space_suite() -> Outcome {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for c in [1_000, 4_000, 16_000] {
        let g = uniform(GenParams { vertices: 256, lifetime: 256, contacts: c, seed: SEED }).unwrap();
        let opts = BenchOptions { per_class: 100, ..BenchOptions::default() };
        rows.push(run_bench(&g, &StructureKind::INDEXES, opts).unwrap());
    }
    let mut factors = Vec::new();
    for (k, kind) in StructureKind::INDEXES.iter().enumerate() {
        let bits: Vec<u64> = rows.iter().map(|r| r.structures[k].space_bits).collect();
        let steps: Vec<f64> = bits.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect();
        factors.push(format!("{kind} {:.2}/{:.2}", steps[0], steps[1]));
        for (s, f) in steps.iter().enumerate() {
            if !(3.0..=6.0).contains(f) {
                failures.push(format!("{kind}: space grows by {f:.2} ({} -> {} bits)", bits[s], bits[s + 1]));
            }
        }
    }
    let elapsed = started.elapsed();
    within(elapsed, Duration::from_secs(300), &mut failures);
    finish(format!("{} in {elapsed:.2?}", factors.join(", ")), failures)
}

fn round_trip_suite() -> Outcome {
    let golden = golden_suite(true);
    let equivalence = equivalence_suite(1000, true);
    match (golden, equivalence) {
        (Ok(a), Ok(b)) => Ok(format!("golden: {a}; randomized: {b}")),
        (a, b) => Err(a.err().into_iter().chain(b.err()).flatten().collect()),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("golden query table on the fixture", || golden_suite(false)),
        ("randomized oracle equivalence", || equivalence_suite(1000, false)),
        ("succinct primitives against naive scans", succinct_suite),
        ("TGCSA successor array and cycles", tgcsa_suite),
        ("ck^4-tree against a boolean tensor", ckd_suite),
        ("codec round trips", codec_suite),
        ("event parity", parity_suite),
        ("space growth per 4x contacts", space_suite),
        ("container round trip", round_trip_suite),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(summary) => println!("criterion {} ({name}): PASS  {summary}", n + 1),
            Err(failures) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL", n + 1);
                for f in failures.iter().take(10) {
                    println!("    {f}");
                }
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
