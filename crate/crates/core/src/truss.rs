//! Edge support and truss decomposition.
//!
//! Both decompositions peel edges out of a bin-sorted queue keyed by current
//! support. They differ only in how the triangles closed by a removed edge are
//! found: [`truss_decompose`] scans the lower-degree endpoint's adjacency and
//! probes the other endpoint's sorted list, while [`bitmap_truss_decompose`]
//! keeps one bitmap row per ego member and intersects rows word by word.

use crate::ego::EgoNetwork;
use crate::graph::{EdgeId, Graph, VertexId};

/// Triangle count per edge, indexed by [`EdgeId`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportMap {
    support: Vec<u32>,
}

impl SupportMap {
    pub fn get(&self, e: EdgeId) -> u32 {
        self.support[e as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.support
    }
}

/// Trussness of every edge of a graph, in the graph's edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrussMap {
    edges: Vec<(VertexId, VertexId)>,
    trussness: Vec<u32>,
}

impl TrussMap {
    pub fn from_parts(edges: Vec<(VertexId, VertexId)>, trussness: Vec<u32>) -> Self {
        assert_eq!(edges.len(), trussness.len());
        TrussMap { edges, trussness }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn trussness(&self) -> &[u32] {
        &self.trussness
    }

    pub fn edge_trussness(&self, e: EdgeId) -> u32 {
        self.trussness[e as usize]
    }

    /// Trussness of edge `(u, v)` in either orientation.
    pub fn get(&self, u: VertexId, v: VertexId) -> Option<u32> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges
            .binary_search(&key)
            .ok()
            .map(|i| self.trussness[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = ((VertexId, VertexId), u32)> + '_ {
        self.edges
            .iter()
            .copied()
            .zip(self.trussness.iter().copied())
    }

    pub fn max_trussness(&self) -> u32 {
        self.trussness.iter().copied().max().unwrap_or(0)
    }

    /// Max incident edge trussness per vertex; 0 for vertices without edges.
    pub fn vertex_trussness(&self, n: usize) -> Vec<u32> {
        let mut out = vec![0; n];
        for ((u, v), t) in self.iter() {
            out[u as usize] = out[u as usize].max(t);
            out[v as usize] = out[v as usize].max(t);
        }
        out
    }
}

/// Order in which equal-support edges enter the peeling queue. The resulting
/// trussness does not depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieOrder {
    #[default]
    Ascending,
    Descending,
}

pub fn compute_support(g: &Graph) -> SupportMap {
    let mut support = vec![0u32; g.m()];
    g.for_each_triangle(|_, _, _, ab, ac, bc| {
        support[ab as usize] += 1;
        support[ac as usize] += 1;
        support[bc as usize] += 1;
    });
    SupportMap { support }
}

pub fn truss_decompose(g: &Graph) -> TrussMap {
    truss_decompose_with(g, TieOrder::Ascending)
}

pub fn truss_decompose_with(g: &Graph, ties: TieOrder) -> TrussMap {
    let support = compute_support(g).support;
    let mut alive = vec![true; g.m()];
    let trussness = peel(support, ties, |e, companion| {
        let (u, v) = g.edge(e);
        let (a, b) = if g.degree(u) <= g.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        for (&w, &aw) in g.neighbors(a).iter().zip(g.neighbor_edges(a)) {
            if w == b || !alive[aw as usize] {
                continue;
            }
            if let Some(bw) = g.edge_id(b, w) {
                if alive[bw as usize] {
                    companion(aw);
                    companion(bw);
                }
            }
        }
        alive[e as usize] = false;
    });
    TrussMap::from_parts(g.edges().to_vec(), trussness)
}

/// Truss decomposition of an ego-network driven by per-member bitmaps.
pub fn bitmap_truss_decompose(ego: &EgoNetwork) -> TrussMap {
    bitmap_truss_decompose_graph(ego.graph())
}

/// Bitmap decomposition over any graph; rows are `⌈n/64⌉` words each.
pub fn bitmap_truss_decompose_graph(g: &Graph) -> TrussMap {
    if g.is_empty() {
        return TrussMap::from_parts(Vec::new(), Vec::new());
    }
    let mut bits = BitRows::new(g.n());
    for &(u, w) in g.edges() {
        bits.set(u, w);
        bits.set(w, u);
    }
    let support = g
        .edges()
        .iter()
        .map(|&(u, w)| bits.and_count(u, w))
        .collect();
    let trussness = peel(support, TieOrder::Ascending, |e, companion| {
        let (u, w) = g.edge(e);
        bits.for_each_common(u, w, |z| {
            // z is adjacent to both in the surviving graph, so both edges exist
            companion(g.edge_id(u, z).expect("bitmap out of sync"));
            companion(g.edge_id(w, z).expect("bitmap out of sync"));
        });
        bits.clear(u, w);
        bits.clear(w, u);
    });
    TrussMap::from_parts(g.edges().to_vec(), trussness)
}

/// Bin-sorted peeling. `remove(e, companion)` must report both other edges
/// of every triangle that `e` still closes, then drop `e`.
fn peel<R>(mut support: Vec<u32>, ties: TieOrder, mut remove: R) -> Vec<u32>
where
    R: FnMut(EdgeId, &mut dyn FnMut(EdgeId)),
{
    let m = support.len();
    let max_sup = support.iter().copied().max().unwrap_or(0) as usize;
    let mut bin_start = vec![0usize; max_sup + 2];
    for &s in &support {
        bin_start[s as usize + 1] += 1;
    }
    for s in 0..=max_sup {
        bin_start[s + 1] += bin_start[s];
    }
    let mut order = vec![0 as EdgeId; m];
    let mut pos = vec![0usize; m];
    let mut fill = bin_start.clone();
    let push = |e: usize, fill: &mut [usize], order: &mut [EdgeId], pos: &mut [usize]| {
        let s = support[e] as usize;
        order[fill[s]] = e as EdgeId;
        pos[e] = fill[s];
        fill[s] += 1;
    };
    match ties {
        TieOrder::Ascending => (0..m).for_each(|e| push(e, &mut fill, &mut order, &mut pos)),
        TieOrder::Descending => (0..m)
            .rev()
            .for_each(|e| push(e, &mut fill, &mut order, &mut pos)),
    }

    let mut trussness = vec![0u32; m];
    for i in 0..m {
        let e = order[i];
        let level = support[e as usize];
        trussness[e as usize] = level + 2;
        remove(e, &mut |f| {
            let fs = support[f as usize];
            if fs > level {
                // move f to the front of its bin, then shrink the bin
                let front = bin_start[fs as usize];
                let g = order[front];
                let pf = pos[f as usize];
                order.swap(front, pf);
                pos[g as usize] = pf;
                pos[f as usize] = front;
                bin_start[fs as usize] += 1;
                support[f as usize] = fs - 1;
            }
        });
    }
    trussness
}

/// Square bit matrix, one row per vertex.
struct BitRows {
    words: usize,
    data: Vec<u64>,
}

impl BitRows {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitRows {
            words,
            data: vec![0; n * words],
        }
    }

    #[inline]
    fn row(&self, v: VertexId) -> &[u64] {
        let start = v as usize * self.words;
        &self.data[start..start + self.words]
    }

    #[inline]
    fn set(&mut self, row: VertexId, col: VertexId) {
        self.data[row as usize * self.words + col as usize / 64] |= 1u64 << (col % 64);
    }

    #[inline]
    fn clear(&mut self, row: VertexId, col: VertexId) {
        self.data[row as usize * self.words + col as usize / 64] &= !(1u64 << (col % 64));
    }

    #[inline]
    fn and_count(&self, a: VertexId, b: VertexId) -> u32 {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x & y).count_ones())
            .sum()
    }

    #[inline]
    fn for_each_common<F: FnMut(VertexId)>(&self, a: VertexId, b: VertexId, mut f: F) {
        for (i, (x, y)) in self.row(a).iter().zip(self.row(b)).enumerate() {
            let mut word = x & y;
            while word != 0 {
                let bit = word.trailing_zeros();
                f((i * 64) as VertexId + bit);
                word &= word - 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ego::extract_ego;
    use crate::test_util::{fig1_ego, fig1_full};

    fn tri() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn triangle_support_and_trussness() {
        let g = tri();
        assert_eq!(compute_support(&g).as_slice(), &[1, 1, 1]);
        assert_eq!(truss_decompose(&g).trussness(), &[3, 3, 3]);
        assert_eq!(bitmap_truss_decompose_graph(&g).trussness(), &[3, 3, 3]);
    }

    #[test]
    fn path_is_two_truss() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        assert_eq!(truss_decompose(&g).trussness(), &[2, 2]);
        assert_eq!(truss_decompose(&g).vertex_trussness(3), vec![2, 2, 2]);
    }

    #[test]
    fn empty_graph_decomposes_to_nothing() {
        let g = Graph::from_edges(4, []);
        assert!(truss_decompose(&g).is_empty());
        assert!(bitmap_truss_decompose_graph(&g).is_empty());
        assert_eq!(truss_decompose(&g).vertex_trussness(4), vec![0; 4]);
    }

    #[test]
    fn k5_is_five_truss() {
        let g = Graph::from_edges(5, (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))));
        assert!(truss_decompose(&g).trussness().iter().all(|&t| t == 5));
    }

    #[test]
    fn reference_ego_support_and_trussness() {
        let g = fig1_ego();
        let id = |x| g.vertex(x).unwrap();
        let sup = compute_support(&g);
        let e = |a, b| g.edge_id(id(a), id(b)).unwrap();
        // x2-y1 and x2-x4
        assert_eq!(sup.get(e(2, 11)), 1);
        assert_eq!(sup.get(e(2, 4)), 3);

        let tm = truss_decompose(&g);
        assert_eq!(tm.get(id(2), id(11)), Some(3));
        assert_eq!(tm.get(id(4), id(11)), Some(3));
        for ((u, v), t) in tm.iter() {
            let (a, b) = (g.label(u), g.label(v));
            if (a, b) == (2, 11) || (a, b) == (4, 11) {
                continue;
            }
            assert_eq!(t, 4, "edge {a}-{b}");
        }
    }

    #[test]
    fn tie_order_does_not_change_trussness() {
        let g = fig1_full();
        assert_eq!(
            truss_decompose_with(&g, TieOrder::Ascending),
            truss_decompose_with(&g, TieOrder::Descending)
        );
    }

    #[test]
    fn bitmap_matches_on_reference_egos() {
        let g = fig1_full();
        for v in 0..g.n() as VertexId {
            let ego = extract_ego(&g, v).unwrap();
            assert_eq!(bitmap_truss_decompose(&ego), truss_decompose(ego.graph()));
        }
    }

    #[test]
    fn non_symmetric_ego_trussness() {
        let g = fig1_full();
        let id = |x| g.vertex(x).unwrap();
        let ego_v = extract_ego(&g, id(0)).unwrap();
        let tv = bitmap_truss_decompose(&ego_v);
        let (a, b) = (ego_v.local(id(21)).unwrap(), ego_v.local(id(22)).unwrap());
        assert_eq!(tv.get(a, b), Some(4));

        let ego_r1 = extract_ego(&g, id(21)).unwrap();
        let tr = bitmap_truss_decompose(&ego_r1);
        let (a, b) = (ego_r1.local(id(0)).unwrap(), ego_r1.local(id(22)).unwrap());
        assert_eq!(tr.get(a, b), Some(3));
    }

    #[test]
    fn bit_rows_cross_word_boundaries() {
        let mut rows = BitRows::new(130);
        for c in [0u32, 63, 64, 129] {
            rows.set(1, c);
            rows.set(2, c);
        }
        rows.set(2, 5);
        assert_eq!(rows.and_count(1, 2), 4);
        let mut seen = Vec::new();
        rows.for_each_common(1, 2, |z| seen.push(z));
        assert_eq!(seen, vec![0, 63, 64, 129]);
        rows.clear(1, 64);
        assert_eq!(rows.and_count(1, 2), 3);
    }
}
