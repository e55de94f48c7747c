//! TSD index: for every vertex, a maximum-weight spanning forest of its
//! ego-network where each edge weighs its ego trussness.
//!
//! For any threshold k, the forest edges of weight at least k connect exactly
//! the vertex sets of the k-truss components of the ego-network, so a score
//! query is a union-find pass over a prefix of the (weight-descending) edge
//! list.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diversity::{check_k, components, ScoreRecord};
use crate::ego::{map_egos, BuildOptions, EgoNetwork};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::search::SearchOptions;
use crate::search::{check_r, pad_with_zeros, phase_list, prune_by_bounds, TopRResult};
use crate::truss::bitmap_truss_decompose;
use crate::union_find::DisjointSets;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForestEdge {
    /// Endpoints as indices into [`TsdEntry::nodes`].
    pub a: u32,
    pub b: u32,
    pub weight: u32,
}

/// Forest of one vertex. Isolated ego members are only counted, not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TsdEntry {
    degree: u32,
    nodes: Vec<VertexId>,
    edges: Vec<ForestEdge>,
    /// `(weight, #edges with at least that weight)`, weights descending.
    weight_counts: Vec<(u32, u32)>,
}

impl TsdEntry {
    fn new(degree: u32, nodes: Vec<VertexId>, edges: Vec<ForestEdge>) -> Self {
        let mut weight_counts: Vec<(u32, u32)> = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            debug_assert!(i == 0 || edges[i - 1].weight >= e.weight);
            match weight_counts.last_mut() {
                Some((w, c)) if *w == e.weight => *c = i as u32 + 1,
                _ => weight_counts.push((e.weight, i as u32 + 1)),
            }
        }
        TsdEntry {
            degree,
            nodes,
            edges,
            weight_counts,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Global ids of the ego members that have at least one ego edge.
    pub fn nodes(&self) -> &[VertexId] {
        &self.nodes
    }

    /// Forest edges, heaviest first.
    pub fn edges(&self) -> &[ForestEdge] {
        &self.edges
    }

    /// Number of forest edges with weight at least `k`.
    pub fn edges_at_least(&self, k: u32) -> usize {
        self.weight_counts
            .iter()
            .take_while(|&&(w, _)| w >= k)
            .last()
            .map_or(0, |&(_, c)| c as usize)
    }

    /// Contexts at `k` as sorted global ids.
    pub fn contexts(&self, k: u32) -> Vec<Vec<VertexId>> {
        let prefix = &self.edges[..self.edges_at_least(k)];
        components(self.nodes.len(), prefix.iter().map(|e| (e.a, e.b)))
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.nodes[i as usize]).collect())
            .collect()
    }

    pub fn score(&self, k: u32) -> u32 {
        let prefix = &self.edges[..self.edges_at_least(k)];
        let mut ds = DisjointSets::new(self.nodes.len());
        let mut touched = vec![false; self.nodes.len()];
        let mut joined = 0;
        for e in prefix {
            touched[e.a as usize] = true;
            touched[e.b as usize] = true;
            if ds.union(e.a, e.b).is_some() {
                joined += 1;
            }
        }
        (touched.iter().filter(|&&t| t).count() - joined) as u32
    }

    /// `⌊|{e : w(e) ≥ k}| / (k − 1)⌋`.
    pub fn upper_bound(&self, k: u32) -> u32 {
        (self.edges_at_least(k) / (k as usize - 1)) as u32
    }
}

/// TSD index of a whole graph, keyed by the graph's internal vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsdIndex {
    labels: Vec<u64>,
    entries: Vec<TsdEntry>,
}

fn build_entry(ego: EgoNetwork) -> TsdEntry {
    let truss = bitmap_truss_decompose(&ego);
    let max_w = truss.max_trussness() as usize;
    // bin sort by weight, heaviest bucket first; ties keep edge order
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); max_w + 1];
    for (e, &t) in truss.trussness().iter().enumerate() {
        buckets[t as usize].push(e as u32);
    }
    let l = ego.len();
    let mut ds = DisjointSets::new(l);
    let mut forest = Vec::new();
    for (w, bucket) in buckets.iter().enumerate().rev() {
        for &e in bucket {
            let (a, b) = truss.edges()[e as usize];
            if ds.union(a, b).is_some() {
                forest.push((a, b, w as u32));
            }
        }
    }
    let mut slot = vec![u32::MAX; l];
    for &(a, b) in truss.edges() {
        slot[a as usize] = 0;
        slot[b as usize] = 0;
    }
    let mut nodes = Vec::new();
    for (local, s) in slot.iter_mut().enumerate() {
        if *s == 0 {
            *s = nodes.len() as u32;
            nodes.push(ego.global(local as VertexId));
        }
    }
    let edges = forest
        .into_iter()
        .map(|(a, b, weight)| ForestEdge {
            a: slot[a as usize],
            b: slot[b as usize],
            weight,
        })
        .collect();
    TsdEntry::new(l as u32, nodes, edges)
}

pub fn build_tsd(g: &Graph) -> Result<TsdIndex> {
    build_tsd_with(g, BuildOptions::default())
}

pub fn build_tsd_with(g: &Graph, opts: BuildOptions) -> Result<TsdIndex> {
    Ok(TsdIndex {
        labels: g.labels().to_vec(),
        entries: map_egos(g, opts, build_entry)?,
    })
}

impl TsdIndex {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn vertex(&self, label: u64) -> Result<VertexId> {
        self.labels
            .binary_search(&label)
            .map(|i| i as VertexId)
            .map_err(|_| Error::UnknownVertex(label))
    }

    pub fn entry(&self, v: VertexId) -> Result<&TsdEntry> {
        self.entries
            .get(v as usize)
            .ok_or(Error::UnknownVertex(v as u64))
    }

    pub fn forest_edge_total(&self) -> usize {
        self.entries.iter().map(|e| e.edges.len()).sum()
    }

    /// Stored vertex entries plus forest edges, summed over all vertices.
    pub fn storage_units(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.nodes.len() + e.edges.len())
            .sum()
    }

    fn record(&self, v: VertexId, k: u32, contexts: bool) -> ScoreRecord {
        let entry = &self.entries[v as usize];
        let (score, contexts) = if contexts {
            let c: Vec<Vec<u64>> = entry
                .contexts(k)
                .into_iter()
                .map(|c| c.into_iter().map(|x| self.labels[x as usize]).collect())
                .collect();
            (c.len() as u32, Some(c))
        } else {
            (entry.score(k), None)
        };
        ScoreRecord {
            vertex: self.labels[v as usize],
            k,
            score,
            contexts,
            padded: false,
        }
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        let file = TsdFile {
            format: "tsd".into(),
            version: 1,
            vertices: self
                .entries
                .iter()
                .enumerate()
                .map(|(v, e)| {
                    let label = |i: u32| self.labels[e.nodes[i as usize] as usize];
                    TsdVertexJson {
                        id: self.labels[v],
                        degree: e.degree,
                        members: e.nodes.iter().map(|&x| self.labels[x as usize]).collect(),
                        edges: e
                            .edges
                            .iter()
                            .map(|f| [label(f.a), label(f.b), f.weight as u64])
                            .collect(),
                    }
                })
                .collect(),
        };
        serde_json::to_writer(out, &file)?;
        Ok(())
    }

    pub fn read_json<R: Read>(input: R) -> Result<TsdIndex> {
        let file: TsdFile = serde_json::from_reader(input)?;
        TsdIndex::from_file(file)
    }

    pub(crate) fn from_file(file: TsdFile) -> Result<TsdIndex> {
        if file.format != "tsd" || file.version != 1 {
            return Err(Error::IndexFormat(format!(
                "expected tsd version 1, found {} version {}",
                file.format, file.version
            )));
        }
        let mut vertices = file.vertices;
        vertices.sort_by_key(|v| v.id);
        let labels: Vec<u64> = vertices.iter().map(|v| v.id).collect();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::IndexFormat("duplicate vertex id".into()));
        }
        let internal = |x: u64| {
            labels
                .binary_search(&x)
                .map(|i| i as VertexId)
                .map_err(|_| Error::IndexFormat(format!("unknown member {x}")))
        };
        let mut entries = Vec::with_capacity(vertices.len());
        for v in vertices {
            let mut members = v.members.clone();
            members.sort_unstable();
            let nodes = members
                .iter()
                .map(|&x| internal(x))
                .collect::<Result<Vec<_>>>()?;
            let position = |x: u64| {
                members
                    .binary_search(&x)
                    .map(|i| i as u32)
                    .map_err(|_| Error::IndexFormat(format!("edge endpoint {x} not a member")))
            };
            let mut edges = v
                .edges
                .iter()
                .map(|&[a, b, w]| {
                    Ok(ForestEdge {
                        a: position(a)?,
                        b: position(b)?,
                        weight: w as u32,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            edges.sort_by_key(|e| std::cmp::Reverse(e.weight));
            entries.push(TsdEntry::new(v.degree, nodes, edges));
        }
        Ok(TsdIndex { labels, entries })
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct TsdFile {
    pub format: String,
    pub version: u32,
    pub vertices: Vec<TsdVertexJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct TsdVertexJson {
    id: u64,
    #[serde(default)]
    degree: u32,
    members: Vec<u64>,
    edges: Vec<[u64; 3]>,
}

/// Score and contexts of `v` read off its forest.
pub fn tsd_score(idx: &TsdIndex, v: VertexId, k: u32) -> Result<ScoreRecord> {
    check_k(k)?;
    idx.entry(v)?;
    Ok(idx.record(v, k, true))
}

pub fn tsd_upper_bound(idx: &TsdIndex, v: VertexId, k: u32) -> Result<u32> {
    check_k(k)?;
    Ok(idx.entry(v)?.upper_bound(k))
}

pub fn tsd_topr(idx: &TsdIndex, r: usize, k: u32) -> Result<TopRResult> {
    tsd_topr_with(idx, r, k, SearchOptions::default())
}

pub fn tsd_topr_with(idx: &TsdIndex, r: usize, k: u32, opts: SearchOptions) -> Result<TopRResult> {
    check_k(k)?;
    check_r(r, idx.n())?;
    let start = Instant::now();
    let bounds: Vec<u32> = idx.entries.iter().map(|e| e.upper_bound(k)).collect();
    let t_bound = start.elapsed();
    let pruned = prune_by_bounds(&bounds, r, |v| Ok(idx.entries[v as usize].score(k)))?;
    let t_score = start.elapsed();
    let mut records: Vec<ScoreRecord> = pruned
        .ranking
        .par_iter()
        .map(|&(v, _)| idx.record(v, k, opts.contexts))
        .collect();
    if opts.pad_with_zeros {
        pad_with_zeros(&mut records, &idx.labels, r, k, opts.contexts);
    }
    let elapsed = start.elapsed();
    Ok(TopRResult {
        k,
        r,
        records,
        search_space: pruned.search_space,
        stop_bound: pruned.stop_bound,
        elapsed,
        phases: phase_list(&[
            ("bound", t_bound, Default::default()),
            ("score", t_score, t_bound),
            ("total", elapsed, Default::default()),
        ]),
    })
}

/// Histogram of forest weights over the whole index (weight → edge count).
pub fn weight_histogram(idx: &TsdIndex) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for e in idx.entries.iter().flat_map(|e| e.edges.iter()) {
        *h.entry(e.weight).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ego::extract_ego;
    use crate::test_util::fig1_full;

    #[test]
    fn triangle_entries_are_single_weight_two_edges() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let idx = build_tsd(&g).unwrap();
        for v in 0..3 {
            let e = idx.entry(v).unwrap();
            assert_eq!(e.edges().len(), 1);
            assert_eq!(e.edges()[0].weight, 2);
        }
    }

    #[test]
    fn empty_ego_has_no_forest_edges() {
        let g = Graph::from_edges(4, (1..4).map(|i| (0, i)));
        let idx = build_tsd(&g).unwrap();
        let e = idx.entry(0).unwrap();
        assert_eq!(e.degree(), 3);
        assert!(e.edges().is_empty() && e.nodes().is_empty());
    }

    #[test]
    fn reference_center_forest() {
        let g = fig1_full();
        let idx = build_tsd(&g).unwrap();
        let v = g.vertex(0).unwrap();
        let e = idx.entry(v).unwrap();
        assert_eq!(e.edges().len(), 12);
        assert_eq!(e.edges_at_least(4), 11);
        assert_eq!(e.edges().iter().filter(|f| f.weight == 3).count(), 1);
        assert_eq!(tsd_upper_bound(&idx, v, 4).unwrap(), 3);
        assert_eq!(tsd_upper_bound(&idx, v, 5).unwrap(), 0);

        let rec = tsd_score(&idx, v, 4).unwrap();
        assert_eq!(rec.score, 3);
        assert_eq!(
            rec.contexts.unwrap(),
            vec![
                vec![1, 2, 3, 4],
                vec![11, 12, 13, 14],
                vec![21, 22, 23, 24, 25, 26]
            ]
        );
        assert_eq!(tsd_score(&idx, v, 3).unwrap().score, 2);
        assert_eq!(tsd_score(&idx, v, 5).unwrap().score, 0);
    }

    #[test]
    fn lone_edge_bound_is_zero_above_k2() {
        let e = TsdEntry::new(
            2,
            vec![0, 1],
            vec![ForestEdge {
                a: 0,
                b: 1,
                weight: 3,
            }],
        );
        assert_eq!(e.upper_bound(3), 0);
        assert_eq!(e.upper_bound(2), 1);
        assert_eq!(e.upper_bound(4), 0);
    }

    #[test]
    fn reference_top1_scores_once() {
        let g = fig1_full();
        let idx = build_tsd(&g).unwrap();
        let res = tsd_topr(&idx, 1, 4).unwrap();
        assert_eq!(res.ranking(), vec![(0, 3)]);
        assert_eq!(res.search_space, 1);
    }

    #[test]
    fn json_round_trip() {
        let g = fig1_full();
        let idx = build_tsd(&g).unwrap();
        let mut buf = Vec::new();
        idx.write_json(&mut buf).unwrap();
        let back = TsdIndex::read_json(buf.as_slice()).unwrap();
        for k in 2..6 {
            for v in 0..g.n() as VertexId {
                assert_eq!(
                    tsd_score(&idx, v, k).unwrap(),
                    tsd_score(&back, v, k).unwrap()
                );
            }
        }
        assert_eq!(back.storage_units(), idx.storage_units());
    }

    #[test]
    fn rejects_wrong_format() {
        let text = r#"{"format":"gct","version":1,"vertices":[]}"#;
        assert!(matches!(
            TsdIndex::read_json(text.as_bytes()),
            Err(Error::IndexFormat(_))
        ));
    }

    #[test]
    fn per_vertex_and_shared_builds_agree() {
        let g = fig1_full();
        let shared = build_tsd(&g).unwrap();
        let naive = build_tsd_with(
            &g,
            BuildOptions {
                source: crate::ego::EgoSource::PerVertex,
                ..BuildOptions::default()
            },
        )
        .unwrap();
        assert_eq!(shared, naive);
        // sanity: node lists really are the non-isolated ego members
        let ego = extract_ego(&g, 0).unwrap();
        assert_eq!(shared.entry(0).unwrap().nodes(), ego.members());
    }
}
