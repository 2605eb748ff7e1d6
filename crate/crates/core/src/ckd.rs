//! Compressed k^d-tree with k = 2.
//!
//! A `d`-dimensional boolean tensor of side `s` (a power of two) is split
//! recursively into `2^d` equal partitions. Level `l` keeps, breadth first:
//!
//! - `N`: `2^d` bits per node, set when the child partition holds a one;
//! - `B`: one bit per set child, 1 when the partition holds a single one
//!   (a coordinate leaf) and 0 when it is split further;
//! - `C`: the coordinates of each coordinate leaf relative to its partition.
//!
//! Children of the last level are single cells, so that level has no `B`
//! or `C`. Children are numbered in Morton order with dimension 0 as the
//! most significant bit.
//!
//! [`CkdTreeIndex`] stores one cell `(u, v, t_begin, t_end)` per contact
//! and answers every query as a box search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    require_weak, Edge, GraphDims, QueryInterval, TemporalGraph, TemporalIndex, Time, Vertex,
};
use crate::succinct::{BitVector, BitVectorBuilder, IntVector};

pub type Point<const D: usize> = [u64; D];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KdLevel {
    n: BitVector,
    b: BitVector,
    c: IntVector,
}

impl KdLevel {
    pub fn nodes(&self) -> &BitVector {
        &self.n
    }

    pub fn leaf_types(&self) -> &BitVector {
        &self.b
    }

    /// Number of coordinate leaves at this level.
    pub fn leaf_count(&self) -> usize {
        self.b.count_ones()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KdTree<const D: usize> {
    side: u64,
    height: u32,
    points: usize,
    levels: Vec<KdLevel>,
}

impl<const D: usize> KdTree<D> {
    const FANOUT: usize = 1 << D;

    /// Builds over the set of one-cells; the side is rounded up to a power
    /// of two no smaller than 2.
    pub fn build(points: &[Point<D>], side: u64) -> Result<Self> {
        let side = side.max(2).next_power_of_two();
        let height = side.trailing_zeros();
        let mut pts = points.to_vec();
        if let Some(p) = pts.iter().find(|p| p.iter().any(|&x| x >= side)) {
            return Err(Error::range(format!("cell {p:?} outside side {side}")));
        }
        pts.sort_unstable();
        pts.dedup();
        let count = pts.len();
        let mut levels = Vec::with_capacity(height as usize);
        let mut current = vec![pts];
        for level in 0..height {
            let shift = height - 1 - level;
            let mut n = BitVectorBuilder::new();
            let mut b = BitVectorBuilder::new();
            let mut c = IntVector::new(shift);
            let mut next = Vec::new();
            for node in current {
                let mut buckets: Vec<Vec<Point<D>>> = vec![Vec::new(); Self::FANOUT];
                for p in node {
                    buckets[Self::child_of(&p, shift)].push(p);
                }
                for bucket in buckets {
                    n.push(!bucket.is_empty());
                    if bucket.is_empty() || shift == 0 {
                        continue;
                    }
                    if bucket.len() == 1 {
                        b.push(true);
                        let mask = (1u64 << shift) - 1;
                        for x in bucket[0] {
                            c.push(x & mask);
                        }
                    } else {
                        b.push(false);
                        next.push(bucket);
                    }
                }
            }
            levels.push(KdLevel { n: n.build(), b: b.build(), c });
            current = next;
        }
        Ok(KdTree { side, height, points: count, levels })
    }

    fn child_of(p: &Point<D>, shift: u32) -> usize {
        p.iter().fold(0, |acc, &x| acc << 1 | (x >> shift & 1) as usize)
    }

    pub fn side(&self) -> u64 {
        self.side
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    pub fn levels(&self) -> &[KdLevel] {
        &self.levels
    }

    /// Relative coordinates of the `j`-th coordinate leaf of `level`.
    pub fn leaf_coordinates(&self, level: usize, j: usize) -> Point<D> {
        std::array::from_fn(|d| self.levels[level].c.get(j * D + d))
    }

    pub fn space_bits(&self) -> u64 {
        self.levels.iter().map(|l| l.n.space_bits() + l.b.space_bits() + l.c.space_bits()).sum::<u64>()
            + 3 * 64
    }

    fn check(&self, p: &Point<D>) -> Result<()> {
        if p.iter().any(|&x| x >= self.side) {
            return Err(Error::range(format!("cell {p:?} outside side {}", self.side)));
        }
        Ok(())
    }

    /// Whether cell `p` is set.
    pub fn point(&self, p: &Point<D>) -> Result<bool> {
        self.check(p)?;
        let mut found = false;
        self.search(p, p, &mut |_| {
            found = true;
            false
        });
        Ok(found)
    }

    /// Set cells inside the box `lo..=hi`, in Morton order.
    pub fn range(&self, lo: &Point<D>, hi: &Point<D>) -> Result<Vec<Point<D>>> {
        self.check(lo)?;
        self.check(hi)?;
        if (0..D).any(|d| lo[d] > hi[d]) {
            return Err(Error::Range(format!("box {lo:?}..={hi:?} is reversed")));
        }
        let mut out = Vec::new();
        self.search(lo, hi, &mut |p| {
            out.push(p);
            true
        });
        Ok(out)
    }

    /// Nodes and leaves inspected by a box search.
    pub fn visits(&self, lo: &Point<D>, hi: &Point<D>) -> usize {
        self.search(lo, hi, &mut |_| true)
    }

    /// Calls `emit` for every set cell in the box (clamped to the tensor)
    /// until it returns false; returns the number of inspected nodes.
    fn search(&self, lo: &Point<D>, hi: &Point<D>, emit: &mut dyn FnMut(Point<D>) -> bool) -> usize {
        let hi: Point<D> = std::array::from_fn(|d| hi[d].min(self.side - 1));
        if self.height == 0 || (0..D).any(|d| lo[d] > hi[d]) {
            return 0;
        }
        let mut visits = 0;
        self.descend(0, 0, [0; D], lo, &hi, emit, &mut visits);
        visits
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        level: u32,
        node: usize,
        origin: Point<D>,
        lo: &Point<D>,
        hi: &Point<D>,
        emit: &mut dyn FnMut(Point<D>) -> bool,
        visits: &mut usize,
    ) -> bool {
        *visits += 1;
        let l = &self.levels[level as usize];
        let shift = self.height - 1 - level;
        let child_side = 1u64 << shift;
        for child in 0..Self::FANOUT {
            let p = node * Self::FANOUT + child;
            if !l.n.get(p) {
                continue;
            }
            let corner: Point<D> =
                std::array::from_fn(|d| origin[d] + ((child >> (D - 1 - d)) & 1) as u64 * child_side);
            if (0..D).any(|d| corner[d] + child_side - 1 < lo[d] || corner[d] > hi[d]) {
                continue;
            }
            if shift == 0 {
                *visits += 1;
                if !emit(corner) {
                    return false;
                }
                continue;
            }
            let r = l.n.rank1(p);
            if l.b.get(r) {
                *visits += 1;
                let rel = self.leaf_coordinates(level as usize, l.b.rank1(r));
                let cell: Point<D> = std::array::from_fn(|d| corner[d] + rel[d]);
                if (0..D).all(|d| lo[d] <= cell[d] && cell[d] <= hi[d]) && !emit(cell) {
                    return false;
                }
            } else if !self.descend(level + 1, l.b.rank0(r), corner, lo, hi, emit, visits) {
                return false;
            }
        }
        true
    }
}

/// A ck^4-tree over the cells `(u, v, t_begin, t_end)` of the contacts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CkdTreeIndex {
    dims: GraphDims,
    tree: KdTree<4>,
}

impl CkdTreeIndex {
    pub fn build(graph: &TemporalGraph) -> Result<Self> {
        let cells: Vec<Point<4>> = graph
            .contacts()
            .iter()
            .map(|c| [c.u, c.v, c.begin, c.end].map(u64::from))
            .collect();
        let side = u64::from(graph.vertices().max(graph.lifetime()));
        Ok(CkdTreeIndex { dims: graph.dims(), tree: KdTree::build(&cells, side)? })
    }

    pub fn tree(&self) -> &KdTree<4> {
        &self.tree
    }

    fn max(&self) -> u64 {
        self.tree.side() - 1
    }

    /// Box bounds for the time dimensions: contacts overlapping `q` for
    /// point and weak semantics, contacts covering it for strong.
    fn time_box(&self, q: &QueryInterval) -> ([u64; 2], [u64; 2]) {
        let (b, e) = (u64::from(q.from), u64::from(q.to));
        if q.is_strong() {
            ([0, e + 1], [b, self.max()])
        } else {
            ([0, b + 1], [e, self.max()])
        }
    }

    fn cells(&self, lo: Point<4>, hi: Point<4>) -> Vec<Point<4>> {
        if (0..4).any(|d| lo[d] > hi[d]) {
            return Vec::new();
        }
        self.tree.range(&lo, &hi).expect("box inside the tensor")
    }

    fn edges(&self, lo: Point<4>, hi: Point<4>) -> Vec<Edge> {
        let mut out: Vec<Edge> = self.cells(lo, hi).iter().map(|c| (c[0] as Vertex, c[1] as Vertex)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn vertex_bounds(&self) -> u64 {
        u64::from(self.dims.vertices).saturating_sub(1)
    }
}

impl TemporalIndex for CkdTreeIndex {
    fn dims(&self) -> GraphDims {
        self.dims
    }

    fn contact_count(&self) -> usize {
        self.tree.len()
    }

    fn space_bits(&self) -> u64 {
        self.tree.space_bits() + 64
    }

    fn has_edge(&self, u: Vertex, v: Vertex, q: QueryInterval) -> Result<bool> {
        self.dims.check_vertex(u)?;
        self.dims.check_vertex(v)?;
        self.dims.check_interval(&q)?;
        let (tl, th) = self.time_box(&q);
        let (u, v) = (u64::from(u), u64::from(v));
        let mut found = false;
        self.tree.search(&[u, v, tl[0], tl[1]], &[u, v, th[0], th[1]], &mut |_| {
            found = true;
            false
        });
        Ok(found)
    }

    fn next_activation(&self, u: Vertex, v: Vertex, t: Time) -> Result<Option<Time>> {
        self.dims.check_vertex(u)?;
        self.dims.check_vertex(v)?;
        self.dims.check_time(t)?;
        let (u, v) = (u64::from(u), u64::from(v));
        let cells = self.cells([u, v, u64::from(t), 0], [u, v, self.max(), self.max()]);
        Ok(cells.iter().map(|c| c[2] as Time).min())
    }

    fn neighbors(&self, u: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(u)?;
        self.dims.check_interval(&q)?;
        let (tl, th) = self.time_box(&q);
        let u = u64::from(u);
        let edges = self.edges([u, 0, tl[0], tl[1]], [u, self.vertex_bounds(), th[0], th[1]]);
        Ok(edges.into_iter().map(|e| e.1).collect())
    }

    fn reverse_neighbors(&self, v: Vertex, q: QueryInterval) -> Result<Vec<Vertex>> {
        self.dims.check_vertex(v)?;
        self.dims.check_interval(&q)?;
        let (tl, th) = self.time_box(&q);
        let v = u64::from(v);
        let edges = self.edges([0, v, tl[0], tl[1]], [self.vertex_bounds(), v, th[0], th[1]]);
        Ok(edges.into_iter().map(|e| e.0).collect())
    }

    fn aggregate(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        let (tl, th) = self.time_box(&q);
        let n = self.vertex_bounds();
        Ok(self.edges([0, 0, tl[0], tl[1]], [n, n, th[0], th[1]]))
    }

    fn activated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        require_weak(&q, "activated_edges")?;
        let n = self.vertex_bounds();
        Ok(self.edges([0, 0, u64::from(q.from), 0], [n, n, u64::from(q.to), self.max()]))
    }

    fn deactivated_edges(&self, q: QueryInterval) -> Result<Vec<Edge>> {
        self.dims.check_interval(&q)?;
        require_weak(&q, "deactivated_edges")?;
        let n = self.vertex_bounds();
        Ok(self.edges([0, 0, 0, u64::from(q.from)], [n, n, self.max(), u64::from(q.to)]))
    }
}
