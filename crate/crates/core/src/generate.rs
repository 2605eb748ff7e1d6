//! Seeded synthetic temporal graphs.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Contact, TemporalGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub vertices: u32,
    pub lifetime: u32,
    pub contacts: usize,
    pub seed: u64,
}

/// Most contacts a graph with these dimensions can hold: every ordered
/// pair, each with `⌊τ/2⌋` separated contacts.
pub fn capacity(vertices: u32, lifetime: u32) -> u128 {
    u128::from(vertices) * u128::from(vertices) * u128::from(lifetime / 2)
}

/// `c` contacts on edges drawn uniformly from all `n·n` ordered pairs.
///
/// Each draw adds one contact to the chosen edge; full edges are drawn
/// again. An edge with `k` contacts gets `2k` distinct boundaries sampled
/// from `[0, τ)`, paired in order.
pub fn uniform(p: GenParams) -> Result<TemporalGraph> {
    let cap = capacity(p.vertices, p.lifetime);
    if p.contacts as u128 > cap {
        return Err(Error::InfeasibleParameters(format!(
            "{} contacts exceed the capacity {cap} of n = {}, τ = {}",
            p.contacts, p.vertices, p.lifetime
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let per_edge = p.lifetime / 2;
    let mut counts: BTreeMap<(Vertex, Vertex), u32> = BTreeMap::new();
    let mut placed = 0;
    while placed < p.contacts {
        let e = (rng.gen_range(0..p.vertices), rng.gen_range(0..p.vertices));
        let k = counts.entry(e).or_insert(0);
        if *k < per_edge {
            *k += 1;
            placed += 1;
        }
    }
    let mut contacts = Vec::with_capacity(p.contacts);
    for (&(u, v), &k) in &counts {
        let mut bounds = sample(&mut rng, p.lifetime as usize, 2 * k as usize).into_vec();
        bounds.sort_unstable();
        contacts.extend(bounds.chunks(2).map(|b| Contact::new(u, v, b[0] as u32, b[1] as u32)));
    }
    TemporalGraph::new(contacts, p.vertices, p.lifetime)
}

/// A small random graph with dimensions drawn from the given bounds; used
/// by randomized tests.
pub fn random_small(rng: &mut impl Rng, max_vertices: u32, max_lifetime: u32, max_contacts: usize) -> TemporalGraph {
    let n = rng.gen_range(1..=max_vertices);
    let tau = rng.gen_range(2..=max_lifetime);
    let cap = capacity(n, tau).min(max_contacts as u128) as usize;
    let c = rng.gen_range(0..=cap);
    uniform(GenParams { vertices: n, lifetime: tau, contacts: c, seed: rng.gen() })
        .expect("count within capacity")
}
