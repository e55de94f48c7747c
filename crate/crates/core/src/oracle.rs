//! Slow, definitional reference implementations used to cross-check the
//! optimized code paths.
//!
//! Nothing here reuses the CSR adjacency, triangle listing, peeling, ego
//! extraction or union-find of the rest of the crate: the graph is copied
//! into a dense adjacency matrix and every quantity is recomputed from its
//! definition. A k-truss is found by repeatedly deleting edges that close
//! fewer than `k − 2` triangles; an edge's trussness is the largest k whose
//! k-truss still contains it.

use std::collections::BTreeMap;

use crate::diversity::SocialContexts;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph the oracle accepts unless told otherwise.
pub const ORACLE_DEFAULT_CAP: usize = 200;

/// Dense symmetric 0/1 matrix, bit-packed by row.
#[derive(Clone)]
struct Matrix {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Matrix {
    fn new(size: usize) -> Self {
        let words = size.div_ceil(64).max(1);
        Matrix {
            size,
            words,
            bits: vec![0; size * words],
        }
    }

    fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    fn put(&mut self, a: usize, b: usize, on: bool) {
        for (x, y) in [(a, b), (b, a)] {
            let w = &mut self.bits[x * self.words + y / 64];
            if on {
                *w |= 1 << (y % 64);
            } else {
                *w &= !(1 << (y % 64));
            }
        }
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words..(a + 1) * self.words]
    }

    /// Triangles through `(a, b)`: vertices adjacent to both.
    fn common(&self, a: usize, b: usize) -> u32 {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x & y).count_ones())
            .sum()
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for b in a + 1..self.size {
                if self.get(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Trussness of every edge, keyed by `(a, b)` with `a < b`.
    fn trussness(&self) -> BTreeMap<(usize, usize), u32> {
        let mut out: BTreeMap<(usize, usize), u32> =
            self.pairs().into_iter().map(|p| (p, 2)).collect();
        let mut current = self.clone();
        let mut alive: Vec<(usize, usize)> = out.keys().copied().collect();
        let mut k = 3u32;
        while !alive.is_empty() {
            // shrink the (k−1)-truss to the k-truss
            loop {
                let (keep, drop): (Vec<_>, Vec<_>) = alive
                    .iter()
                    .partition(|&&(a, b)| current.common(a, b) + 2 >= k);
                if drop.is_empty() {
                    break;
                }
                for (a, b) in drop {
                    current.put(a, b, false);
                }
                alive = keep;
            }
            for p in &alive {
                out.insert(*p, k);
            }
            k += 1;
        }
        out
    }
}

/// A graph copied into matrix form with its external labels.
pub struct Oracle {
    labels: Vec<u64>,
    adj: Matrix,
}

impl Oracle {
    pub fn new(g: &Graph) -> Result<Self> {
        Self::with_cap(g, ORACLE_DEFAULT_CAP)
    }

    pub fn with_cap(g: &Graph, cap: usize) -> Result<Self> {
        if g.n() > cap {
            return Err(Error::OracleCapExceeded { n: g.n(), cap });
        }
        let mut adj = Matrix::new(g.n());
        for &(u, v) in g.edges() {
            adj.put(u as usize, v as usize, true);
        }
        Ok(Oracle {
            labels: g.labels().to_vec(),
            adj,
        })
    }

    fn index(&self, label: u64) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownVertex(label))
    }

    /// `(u, v, trussness)` over external ids, `u < v`, sorted.
    pub fn truss(&self) -> Vec<(u64, u64, u32)> {
        let mut out: Vec<_> = self
            .adj
            .trussness()
            .into_iter()
            .map(|((a, b), t)| {
                let (x, y) = (self.labels[a], self.labels[b]);
                (x.min(y), x.max(y), t)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// The ego-network of `label` and its edge trussness.
    pub fn ego(&self, label: u64) -> Result<OracleEgo> {
        let v = self.index(label)?;
        let members: Vec<usize> = (0..self.adj.size).filter(|&u| self.adj.get(v, u)).collect();
        let mut sub = Matrix::new(members.len());
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate().skip(i + 1) {
                if self.adj.get(a, b) {
                    sub.put(i, j, true);
                }
            }
        }
        Ok(OracleEgo {
            center: label,
            members: members.iter().map(|&u| self.labels[u]).collect(),
            truss: sub.trussness(),
        })
    }

    pub fn score(&self, label: u64, k: u32) -> Result<SocialContexts> {
        if k < 2 {
            return Err(Error::InvalidK(k));
        }
        Ok(self.ego(label)?.contexts(k))
    }

    /// Best r `(label, score)` pairs by score desc then label asc; positive
    /// scores only.
    pub fn topr(&self, r: usize, k: u32) -> Result<Vec<(u64, u32)>> {
        let mut all = Vec::new();
        for &label in &self.labels {
            let s = self.score(label, k)?.score();
            if s > 0 {
                all.push((label, s));
            }
        }
        all.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        all.truncate(r);
        Ok(all)
    }
}

pub struct OracleEgo {
    center: u64,
    members: Vec<u64>,
    truss: BTreeMap<(usize, usize), u32>,
}

impl OracleEgo {
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    /// Largest ego-edge trussness, 0 for an edgeless ego.
    pub fn max_trussness(&self) -> u32 {
        self.truss.values().copied().max().unwrap_or(0)
    }

    /// `(u, v, trussness)` over external ids, sorted.
    pub fn edges(&self) -> Vec<(u64, u64, u32)> {
        self.truss
            .iter()
            .map(|(&(a, b), &t)| (self.members[a], self.members[b], t))
            .collect()
    }

    /// Components of the ego's k-truss, found by flood fill.
    pub fn contexts(&self, k: u32) -> SocialContexts {
        let n = self.members.len();
        let mut nbrs = vec![Vec::new(); n];
        for (&(a, b), &t) in &self.truss {
            if t >= k {
                nbrs[a].push(b);
                nbrs[b].push(a);
            }
        }
        let mut seen = vec![false; n];
        let mut contexts = Vec::new();
        for s in 0..n {
            if seen[s] || nbrs[s].is_empty() {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(x) = stack.pop() {
                comp.push(self.members[x]);
                for &y in &nbrs[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            contexts.push(comp);
        }
        contexts.sort();
        SocialContexts {
            center: self.center,
            k,
            contexts,
        }
    }
}

/// Edge trussness of the whole graph by iterative deletion.
pub fn oracle_truss(g: &Graph) -> Result<Vec<(u64, u64, u32)>> {
    Ok(Oracle::new(g)?.truss())
}

pub fn oracle_score(g: &Graph, label: u64, k: u32) -> Result<SocialContexts> {
    Oracle::new(g)?.score(label, k)
}

pub fn oracle_topr(g: &Graph, r: usize, k: u32) -> Result<Vec<(u64, u32)>> {
    Oracle::new(g)?.topr(r, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::fig1_full;

    fn complete(n: u32) -> Graph {
        Graph::from_edges(
            n as usize,
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))),
        )
    }

    #[test]
    fn cliques_have_trussness_n() {
        for n in 2..7 {
            let t = oracle_truss(&complete(n)).unwrap();
            assert!(t.iter().all(|&(_, _, x)| x == n));
        }
    }

    #[test]
    fn octahedron_is_a_4_truss() {
        // K6 minus a perfect matching: every edge is in exactly two triangles
        let g = Graph::from_edges(
            6,
            (0..6u32)
                .flat_map(|a| (a + 1..6).map(move |b| (a, b)))
                .filter(|&(a, b)| b != a + 3),
        );
        assert_eq!(g.m(), 12);
        assert!(oracle_truss(&g).unwrap().iter().all(|&(_, _, t)| t == 4));
    }

    #[test]
    fn triangle_free_graphs_are_2_trusses() {
        let path = Graph::from_edges(5, (0..4).map(|i| (i, i + 1)));
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i)));
        for g in [path, star] {
            assert!(oracle_truss(&g).unwrap().iter().all(|&(_, _, t)| t == 2));
        }
    }

    #[test]
    fn reference_graph_scores() {
        let g = fig1_full();
        let o = Oracle::with_cap(&g, 100).unwrap();
        let c = o.score(0, 4).unwrap();
        assert_eq!(
            c.contexts,
            vec![
                vec![1, 2, 3, 4],
                vec![11, 12, 13, 14],
                vec![21, 22, 23, 24, 25, 26]
            ]
        );
        assert_eq!(o.topr(1, 4).unwrap(), vec![(0, 3)]);
        assert_eq!(o.ego(0).unwrap().max_trussness(), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let g = complete(10);
        assert!(matches!(
            Oracle::with_cap(&g, 5),
            Err(Error::OracleCapExceeded { n: 10, cap: 5 })
        ));
    }
}
