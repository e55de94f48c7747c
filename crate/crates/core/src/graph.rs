//! Immutable undirected simple graphs in compressed sparse row form.
//!
//! Vertices are densely numbered `0..n` internally. Every graph also carries
//! a label per vertex (the external id from the input file), and labels are
//! strictly ascending in internal id order, so the remap is deterministic and
//! a label can be resolved back to its internal id with a binary search.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Dense internal vertex id.
pub type VertexId = u32;
/// Index into [`Graph::edges`].
pub type EdgeId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<VertexId>,
    /// Edge id of every adjacency slot, parallel to `adj`.
    slot_edge: Vec<EdgeId>,
    /// Edges as `(u, v)` with `u < v`, sorted ascending.
    edges: Vec<(VertexId, VertexId)>,
    labels: Vec<u64>,
}

/// What the loader dropped while sanitizing its input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LoadSummary {
    pub lines: usize,
    pub comments: usize,
    pub edges_read: usize,
    pub self_loops: usize,
    pub duplicates: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub d_max: usize,
    pub triangle_count: u64,
    /// Filled in once a global truss decomposition has been run.
    pub max_edge_trussness: Option<u32>,
}

impl Graph {
    /// Builds a graph over `0..n` from arbitrary pairs. Self-loops are dropped
    /// and duplicate or reversed pairs are merged.
    pub fn from_edges<I>(n: usize, pairs: I) -> Graph
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut edges: Vec<(VertexId, VertexId)> = pairs
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        assert!(
            edges.last().is_none_or(|&(_, v)| (v as usize) < n),
            "edge endpoint out of range"
        );
        Graph::from_sorted_edges((0..n as u64).collect(), edges)
    }

    /// Builds a graph from external-id pairs, remapping ids densely in
    /// ascending external order.
    pub fn from_labeled_edges(pairs: &[(u64, u64)]) -> (Graph, LoadSummary) {
        let mut summary = LoadSummary {
            edges_read: pairs.len(),
            ..LoadSummary::default()
        };
        let mut labels: Vec<u64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        labels.sort_unstable();
        labels.dedup();
        let lookup = |x: u64| labels.binary_search(&x).unwrap() as VertexId;

        let mut edges = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a == b {
                summary.self_loops += 1;
                continue;
            }
            let (u, v) = (lookup(a), lookup(b));
            edges.push(if u < v { (u, v) } else { (v, u) });
        }
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        summary.duplicates = before - edges.len();

        // A vertex that only appeared in a self-loop has no edges left; keep
        // the graph free of such ghosts so n counts real vertices.
        let mut used = vec![false; labels.len()];
        for &(u, v) in &edges {
            used[u as usize] = true;
            used[v as usize] = true;
        }
        if used.iter().all(|&b| b) {
            return (Graph::from_sorted_edges(labels, edges), summary);
        }
        let mut remap = vec![VertexId::MAX; labels.len()];
        let mut kept = Vec::new();
        for (i, &label) in labels.iter().enumerate() {
            if used[i] {
                remap[i] = kept.len() as VertexId;
                kept.push(label);
            }
        }
        let edges = edges
            .into_iter()
            .map(|(u, v)| (remap[u as usize], remap[v as usize]))
            .collect();
        (Graph::from_sorted_edges(kept, edges), summary)
    }

    /// `edges` must be sorted, deduplicated and oriented `u < v`.
    fn from_sorted_edges(labels: Vec<u64>, edges: Vec<(VertexId, VertexId)>) -> Graph {
        let n = labels.len();
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut adj = vec![0; 2 * edges.len()];
        let mut slot_edge = vec![0; 2 * edges.len()];
        // Lexicographic edge order fills each list in ascending order: all
        // smaller neighbours arrive (as first endpoints) before larger ones.
        for (e, &(u, v)) in edges.iter().enumerate() {
            let cu = &mut cursor[u as usize];
            adj[*cu] = v;
            slot_edge[*cu] = e as EdgeId;
            *cu += 1;
            let cv = &mut cursor[v as usize];
            adj[*cv] = u;
            slot_edge[*cv] = e as EdgeId;
            *cv += 1;
        }
        Graph {
            offsets,
            adj,
            slot_edge,
            edges,
            labels,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n() as VertexId)
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Sorted neighbours of `v`.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Edge ids parallel to [`Graph::neighbors`].
    #[inline]
    pub fn neighbor_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.slot_edge[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e as usize]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a)
            .binary_search(&b)
            .ok()
            .map(|i| self.neighbor_edges(a)[i])
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_id(u, v).is_some()
    }

    #[inline]
    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Internal id of an external label.
    pub fn vertex(&self, label: u64) -> Result<VertexId> {
        self.labels
            .binary_search(&label)
            .map(|i| i as VertexId)
            .map_err(|_| Error::UnknownVertex(label))
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v as u64))
        }
    }

    /// Ascending `N(u) ∩ N(v)`.
    pub fn common_neighbors(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SameVertex(self.label(u)));
        }
        let mut out = Vec::new();
        self.for_each_common(u, v, |w, _, _| out.push(w));
        Ok(out)
    }

    /// Merge-intersects two adjacency lists, passing each common neighbour
    /// together with the edge ids `(u, w)` and `(v, w)`.
    #[inline]
    pub fn for_each_common<F>(&self, u: VertexId, v: VertexId, mut f: F)
    where
        F: FnMut(VertexId, EdgeId, EdgeId),
    {
        let (nu, eu) = (self.neighbors(u), self.neighbor_edges(u));
        let (nv, ev) = (self.neighbors(v), self.neighbor_edges(v));
        let (mut i, mut j) = (0, 0);
        while i < nu.len() && j < nv.len() {
            match nu[i].cmp(&nv[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    f(nu[i], eu[i], ev[j]);
                    i += 1;
                    j += 1;
                }
            }
        }
    }

    /// Lists every triangle exactly once. Edges are oriented from lower to
    /// higher `(degree, id)` rank; the callback receives the three corners
    /// and the edge ids `(a,b)`, `(a,c)`, `(b,c)`.
    pub fn for_each_triangle<F>(&self, mut f: F)
    where
        F: FnMut(VertexId, VertexId, VertexId, EdgeId, EdgeId, EdgeId),
    {
        let n = self.n();
        let rank_less = |a: VertexId, b: VertexId| (self.degree(a), a) < (self.degree(b), b);
        let mut out_offsets = vec![0usize; n + 1];
        for v in 0..n as VertexId {
            out_offsets[v as usize + 1] = out_offsets[v as usize]
                + self
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| rank_less(v, w))
                    .count();
        }
        let mut out_adj = Vec::with_capacity(self.m());
        let mut out_edge = Vec::with_capacity(self.m());
        for v in 0..n as VertexId {
            for (&w, &e) in self.neighbors(v).iter().zip(self.neighbor_edges(v)) {
                if rank_less(v, w) {
                    out_adj.push(w);
                    out_edge.push(e);
                }
            }
        }
        const NONE: EdgeId = EdgeId::MAX;
        let mut mark = vec![NONE; n];
        for a in 0..n {
            let range = out_offsets[a]..out_offsets[a + 1];
            for i in range.clone() {
                mark[out_adj[i] as usize] = out_edge[i];
            }
            for i in range.clone() {
                let b = out_adj[i];
                let e_ab = out_edge[i];
                for j in out_offsets[b as usize]..out_offsets[b as usize + 1] {
                    let c = out_adj[j];
                    let e_ac = mark[c as usize];
                    if e_ac != NONE {
                        f(a as VertexId, b, c, e_ab, e_ac, out_edge[j]);
                    }
                }
            }
            for i in range {
                mark[out_adj[i] as usize] = NONE;
            }
        }
    }

    pub fn triangle_count(&self) -> u64 {
        let mut t = 0u64;
        self.for_each_triangle(|_, _, _, _, _, _| t += 1);
        t
    }

    /// Number of triangles through each vertex, i.e. the ego-network edge
    /// count `m_v`.
    pub fn triangles_per_vertex(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n()];
        self.for_each_triangle(|a, b, c, _, _, _| {
            counts[a as usize] += 1;
            counts[b as usize] += 1;
            counts[c as usize] += 1;
        });
        counts
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            n: self.n(),
            m: self.m(),
            d_max: self.max_degree(),
            triangle_count: self.triangle_count(),
            max_edge_trussness: None,
        }
    }

    /// Subgraph with the edges accepted by `keep`; vertices left without
    /// edges are dropped. Labels are carried over.
    pub fn edge_subgraph<F>(&self, mut keep: F) -> Graph
    where
        F: FnMut(EdgeId) -> bool,
    {
        let kept: Vec<EdgeId> = (0..self.m() as EdgeId).filter(|&e| keep(e)).collect();
        let mut remap = vec![VertexId::MAX; self.n()];
        for &e in &kept {
            let (u, v) = self.edge(e);
            remap[u as usize] = 0;
            remap[v as usize] = 0;
        }
        let mut labels = Vec::new();
        for (v, slot) in remap.iter_mut().enumerate() {
            if *slot == 0 {
                *slot = labels.len() as VertexId;
                labels.push(self.labels[v]);
            }
        }
        // Remapping is monotone, so lexicographic order survives.
        let edges = kept
            .into_iter()
            .map(|e| {
                let (u, v) = self.edge(e);
                (remap[u as usize], remap[v as usize])
            })
            .collect();
        Graph::from_sorted_edges(labels, edges)
    }

    /// Writes `label label` lines in edge order.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for &(u, v) in &self.edges {
            writeln!(out, "{} {}", self.label(u), self.label(v))?;
        }
        Ok(())
    }
}

/// Parses a whitespace separated edge list; `#` starts a comment line.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<(Graph, LoadSummary)> {
    let mut pairs = Vec::new();
    let mut lines = 0;
    let mut comments = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: "<input>".into(),
            source,
        })?;
        lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            comments += 1;
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next = || -> Result<u64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: idx + 1,
                token: trimmed.to_string(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                token: tok.to_string(),
            })
        };
        let (a, b) = (next()?, next()?);
        if let Some(extra) = tokens.next() {
            return Err(Error::Parse {
                line: idx + 1,
                token: extra.to_string(),
            });
        }
        pairs.push((a, b));
    }
    let (g, mut summary) = Graph::from_labeled_edges(&pairs);
    summary.lines = lines;
    summary.comments = comments;
    Ok((g, summary))
}

pub fn load_edge_list<P: AsRef<Path>>(path: P) -> Result<(Graph, LoadSummary)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> (Graph, LoadSummary) {
        parse_edge_list(text.as_bytes()).unwrap()
    }

    #[test]
    fn triangle_loads() {
        let (g, _) = parse("0 1\n1 2\n2 0\n");
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!(g.common_neighbors(0, 1).unwrap(), vec![2]);
        assert_eq!(g.stats().triangle_count, 1);
    }

    #[test]
    fn self_loops_and_duplicates_are_dropped() {
        let (g, s) = parse("# comment\n0 0\n0 1\n1 0\n");
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(s.self_loops, 1);
        assert_eq!(s.duplicates, 1);
        assert_eq!(s.comments, 1);
    }

    #[test]
    fn vertex_seen_only_in_self_loop_is_not_kept() {
        let (g, _) = parse("7 7\n1 2\n");
        assert_eq!(g.n(), 2);
        assert!(g.vertex(7).is_err());
    }

    #[test]
    fn external_ids_are_remapped_ascending() {
        let (g, _) = parse("100 5\n5 42\n");
        assert_eq!(g.labels(), &[5, 42, 100]);
        assert_eq!(g.vertex(42).unwrap(), 1);
        assert_eq!(g.neighbors(0), &[1, 2]);
    }

    #[test]
    fn malformed_token_reports_line() {
        let err = parse_edge_list("0 1\n1 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_edge_list("0 1\n\n3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_edge_list("-1 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn empty_input_is_an_empty_graph() {
        let (g, _) = parse("# nothing\n");
        assert_eq!((g.n(), g.m()), (0, 0));
        assert_eq!(g.stats().triangle_count, 0);
        assert_eq!(g.max_degree(), 0);
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(
            load_edge_list("/definitely/not/here.txt"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn common_neighbors_rejects_bad_ids() {
        let (g, _) = parse("0 1\n1 2\n2 0\n");
        assert!(matches!(
            g.common_neighbors(0, 0),
            Err(Error::SameVertex(0))
        ));
        assert!(matches!(
            g.common_neighbors(0, 9),
            Err(Error::UnknownVertex(9))
        ));
    }

    #[test]
    fn small_triangle_counts() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(k4.triangle_count(), 4);
        // octahedron: every pair except the three antipodal ones
        let octa = Graph::from_edges(
            6,
            (0..6u32)
                .flat_map(|a| (a + 1..6).map(move |b| (a, b)))
                .filter(|&(a, b)| b != a + 3),
        );
        assert_eq!(octa.m(), 12);
        assert_eq!(octa.triangle_count(), 8);
        assert_eq!(octa.triangles_per_vertex(), vec![4; 6]);
    }

    #[test]
    fn edge_subgraph_keeps_labels() {
        let (g, _) = parse("10 20\n20 30\n30 40\n");
        let e = g
            .edge_id(g.vertex(20).unwrap(), g.vertex(30).unwrap())
            .unwrap();
        let sub = g.edge_subgraph(|x| x == e);
        assert_eq!(sub.labels(), &[20, 30]);
        assert_eq!(sub.m(), 1);
    }
}
