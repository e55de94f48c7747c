//! GCT index: a compressed per-vertex summary of ego-network truss
//! structure.
//!
//! Ego members are grouped into supernodes: a supernode of trussness `t`
//! holds vertices whose maximum incident ego-edge trussness is exactly `t`
//! and which are connected inside the ego's `t`-truss. Superedges of weight
//! `w` record the merges of supernodes that happen at threshold `w`, so
//! for every `k` the number of k-truss components of the ego-network is
//! `N_k − M_k`: supernodes with trussness `≥ k` minus superedges of weight
//! `≥ k`.

use std::io::{Read, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diversity::{check_k, ScoreRecord, SocialContexts};
use crate::ego::{map_egos, BuildOptions, EgoNetwork};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::search::{check_r, pad_with_zeros, phase_list, RunningTopR, SearchOptions, TopRResult};
use crate::truss::{bitmap_truss_decompose, TrussMap};
use crate::union_find::DisjointSets;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Supernode {
    pub trussness: u32,
    /// Sorted global ids.
    pub members: Vec<VertexId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Superedge {
    /// Indices into [`GctEntry::supernodes`].
    pub a: u32,
    pub b: u32,
    pub weight: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GctEntry {
    supernodes: Vec<Supernode>,
    superedges: Vec<Superedge>,
    /// `node_ge[t]` = supernodes with trussness ≥ t.
    node_ge: Vec<u32>,
    /// `edge_ge[t]` = superedges with weight ≥ t.
    edge_ge: Vec<u32>,
}

fn cumulative_ge(values: impl Iterator<Item = u32>) -> Vec<u32> {
    let mut h: Vec<u32> = Vec::new();
    for t in values {
        if h.len() <= t as usize {
            h.resize(t as usize + 1, 0);
        }
        h[t as usize] += 1;
    }
    for t in (0..h.len().saturating_sub(1)).rev() {
        h[t] += h[t + 1];
    }
    h
}

impl GctEntry {
    fn new(supernodes: Vec<Supernode>, superedges: Vec<Superedge>) -> Self {
        let node_ge = cumulative_ge(supernodes.iter().map(|s| s.trussness));
        let edge_ge = cumulative_ge(superedges.iter().map(|e| e.weight));
        GctEntry {
            supernodes,
            superedges,
            node_ge,
            edge_ge,
        }
    }

    pub fn supernodes(&self) -> &[Supernode] {
        &self.supernodes
    }

    pub fn superedges(&self) -> &[Superedge] {
        &self.superedges
    }

    fn at(h: &[u32], k: u32) -> u32 {
        h.get(k as usize).copied().unwrap_or(0)
    }

    /// `N_k − M_k`.
    pub fn score(&self, k: u32) -> u32 {
        Self::at(&self.node_ge, k) - Self::at(&self.edge_ge, k)
    }

    /// Contexts at `k`, as sorted global ids ordered by smallest member.
    pub fn contexts(&self, k: u32) -> Vec<Vec<VertexId>> {
        let s = self.supernodes.len();
        let mut ds = DisjointSets::new(s);
        for e in self.superedges.iter().filter(|e| e.weight >= k) {
            ds.union(e.a, e.b);
        }
        let mut groups: Vec<Vec<VertexId>> = vec![Vec::new(); s];
        for (i, node) in self.supernodes.iter().enumerate() {
            if node.trussness >= k {
                let root = ds.find(i as u32) as usize;
                groups[root].extend_from_slice(&node.members);
            }
        }
        let mut out: Vec<Vec<VertexId>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
        for g in &mut out {
            g.sort_unstable();
        }
        out.sort_unstable_by_key(|g| g[0]);
        out
    }

    pub fn member_count(&self) -> usize {
        self.supernodes.iter().map(|s| s.members.len()).sum()
    }

    /// Structural invariants: supernodes are disjoint and non-empty, and a
    /// superedge of weight `w` joins supernodes of trussness `≥ w`, at least
    /// one of them strictly above `w`.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut seen: Vec<VertexId> = Vec::new();
        for s in &self.supernodes {
            if s.members.is_empty() {
                return Err("empty supernode".into());
            }
            if s.trussness < 2 {
                return Err(format!("supernode trussness {}", s.trussness));
            }
            seen.extend_from_slice(&s.members);
        }
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err("supernodes overlap".into());
        }
        let mut ds = DisjointSets::new(self.supernodes.len());
        for e in &self.superedges {
            let (ta, tb) = (
                self.supernodes[e.a as usize].trussness,
                self.supernodes[e.b as usize].trussness,
            );
            if e.weight > ta.min(tb) || e.weight >= ta.max(tb) {
                return Err(format!(
                    "superedge weight {} between trussness {ta} and {tb}",
                    e.weight
                ));
            }
            if ds.union(e.a, e.b).is_none() {
                return Err("superedges contain a cycle".into());
            }
        }
        Ok(())
    }
}

/// Builds the GCT entry of one ego-network from its (local) trussness map.
pub fn build_gct_ego(ego: &EgoNetwork, truss: &TrussMap) -> Result<GctEntry> {
    let g = ego.graph();
    if truss.len() != g.m() {
        let missing = g
            .edges()
            .iter()
            .find(|&&(a, b)| truss.get(a, b).is_none())
            .or_else(|| truss.edges().iter().find(|&&(a, b)| !g.has_edge(a, b)))
            .copied()
            .unwrap_or((0, 0));
        return Err(Error::MissingEdge(
            ego.global(missing.0),
            ego.global(missing.1),
        ));
    }
    let mut tau = Vec::with_capacity(g.m());
    for &(a, b) in g.edges() {
        tau.push(
            truss
                .get(a, b)
                .ok_or(Error::MissingEdge(ego.global(a), ego.global(b)))?,
        );
    }
    Ok(gct_from_levels(ego, &tau))
}

fn gct_from_levels(ego: &EgoNetwork, tau: &[u32]) -> GctEntry {
    let g = ego.graph();
    let l = g.n();
    let max_t = tau.iter().copied().max().unwrap_or(0) as usize;
    let mut edges_at: Vec<Vec<u32>> = vec![Vec::new(); max_t + 1];
    for (e, &t) in tau.iter().enumerate() {
        edges_at[t as usize].push(e as u32);
    }
    let mut vertex_tau = vec![0u32; l];
    for (e, &t) in tau.iter().enumerate() {
        let (a, b) = g.edge(e as u32);
        vertex_tau[a as usize] = vertex_tau[a as usize].max(t);
        vertex_tau[b as usize] = vertex_tau[b as usize].max(t);
    }
    let mut vertices_at: Vec<Vec<VertexId>> = vec![Vec::new(); max_t + 1];
    for (x, &t) in vertex_tau.iter().enumerate() {
        if t > 0 {
            vertices_at[t as usize].push(x as VertexId);
        }
    }

    // `conn` tracks components of the ego restricted to edges ≥ t; `merged`
    // tracks which supernodes are already joined by superedges.
    let mut conn = DisjointSets::new(l);
    let mut merged = DisjointSets::new(l);
    let mut node_of = vec![u32::MAX; l];
    let mut node_of_root = vec![u32::MAX; l];
    let mut supernodes: Vec<Supernode> = Vec::new();
    let mut superedges = Vec::new();
    for t in (2..=max_t).rev() {
        for &e in &edges_at[t] {
            let (a, b) = g.edge(e);
            conn.union(a, b);
        }
        let first = supernodes.len();
        for &x in &vertices_at[t] {
            let root = conn.find(x) as usize;
            if node_of_root[root] == u32::MAX || (node_of_root[root] as usize) < first {
                node_of_root[root] = supernodes.len() as u32;
                supernodes.push(Supernode {
                    trussness: t as u32,
                    members: Vec::new(),
                });
            }
            let s = node_of_root[root];
            node_of[x as usize] = s;
            supernodes[s as usize].members.push(ego.global(x));
        }
        for &e in &edges_at[t] {
            let (a, b) = g.edge(e);
            let (sa, sb) = (node_of[a as usize], node_of[b as usize]);
            if merged.union(sa, sb).is_some() {
                superedges.push(Superedge {
                    a: sa.min(sb),
                    b: sa.max(sb),
                    weight: t as u32,
                });
            }
        }
    }
    GctEntry::new(supernodes, superedges)
}

fn build_entry(ego: EgoNetwork) -> GctEntry {
    let truss = bitmap_truss_decompose(&ego);
    // the bitmap decomposition reports edges in the ego graph's own order
    debug_assert_eq!(truss.edges(), ego.graph().edges());
    gct_from_levels(&ego, truss.trussness())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GctIndex {
    labels: Vec<u64>,
    entries: Vec<GctEntry>,
}

pub fn build_gct(g: &Graph) -> Result<GctIndex> {
    build_gct_with(g, BuildOptions::default())
}

pub fn build_gct_with(g: &Graph, opts: BuildOptions) -> Result<GctIndex> {
    Ok(GctIndex {
        labels: g.labels().to_vec(),
        entries: map_egos(g, opts, build_entry)?,
    })
}

impl GctIndex {
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

    pub fn entry(&self, v: VertexId) -> Result<&GctEntry> {
        self.entries
            .get(v as usize)
            .ok_or(Error::UnknownVertex(v as u64))
    }

    pub fn supernode_total(&self) -> usize {
        self.entries.iter().map(|e| e.supernodes.len()).sum()
    }

    pub fn superedge_total(&self) -> usize {
        self.entries.iter().map(|e| e.superedges.len()).sum()
    }

    /// Stored vertex entries plus superedges, summed over all vertices.
    pub fn storage_units(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.member_count() + e.superedges.len())
            .sum()
    }

    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for (v, e) in self.entries.iter().enumerate() {
            e.check_invariants()
                .map_err(|msg| format!("vertex {}: {msg}", self.labels[v]))?;
        }
        Ok(())
    }

    fn labelled(&self, contexts: Vec<Vec<VertexId>>) -> Vec<Vec<u64>> {
        contexts
            .into_iter()
            .map(|c| c.into_iter().map(|x| self.labels[x as usize]).collect())
            .collect()
    }

    fn record(&self, v: VertexId, k: u32, score: u32, contexts: bool) -> ScoreRecord {
        ScoreRecord {
            vertex: self.labels[v as usize],
            k,
            score,
            contexts: contexts.then(|| self.labelled(self.entries[v as usize].contexts(k))),
            padded: false,
        }
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        let file = GctFile {
            format: "gct".into(),
            version: 1,
            vertices: self
                .entries
                .iter()
                .enumerate()
                .map(|(v, e)| GctVertexJson {
                    id: self.labels[v],
                    supernodes: e
                        .supernodes
                        .iter()
                        .map(|s| SupernodeJson {
                            tau: s.trussness,
                            members: s.members.iter().map(|&x| self.labels[x as usize]).collect(),
                        })
                        .collect(),
                    superedges: e.superedges.iter().map(|s| [s.a, s.b, s.weight]).collect(),
                })
                .collect(),
        };
        serde_json::to_writer(out, &file)?;
        Ok(())
    }

    pub fn read_json<R: Read>(input: R) -> Result<GctIndex> {
        let file: GctFile = serde_json::from_reader(input)?;
        GctIndex::from_file(file)
    }

    pub(crate) fn from_file(file: GctFile) -> Result<GctIndex> {
        if file.format != "gct" || file.version != 1 {
            return Err(Error::IndexFormat(format!(
                "expected gct version 1, found {} version {}",
                file.format, file.version
            )));
        }
        let mut vertices = file.vertices;
        vertices.sort_by_key(|v| v.id);
        let labels: Vec<u64> = vertices.iter().map(|v| v.id).collect();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::IndexFormat("duplicate vertex id".into()));
        }
        let mut entries = Vec::with_capacity(vertices.len());
        for v in vertices {
            let mut supernodes = Vec::with_capacity(v.supernodes.len());
            for s in v.supernodes {
                let mut members = s
                    .members
                    .iter()
                    .map(|&x| {
                        labels
                            .binary_search(&x)
                            .map(|i| i as VertexId)
                            .map_err(|_| Error::IndexFormat(format!("unknown member {x}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                members.sort_unstable();
                supernodes.push(Supernode {
                    trussness: s.tau,
                    members,
                });
            }
            let superedges: Vec<Superedge> = v
                .superedges
                .iter()
                .map(|&[a, b, weight]| Superedge { a, b, weight })
                .collect();
            if superedges
                .iter()
                .any(|e| e.a as usize >= supernodes.len() || e.b as usize >= supernodes.len())
            {
                return Err(Error::IndexFormat(format!(
                    "vertex {}: superedge endpoint out of range",
                    v.id
                )));
            }
            let entry = GctEntry::new(supernodes, superedges);
            entry
                .check_invariants()
                .map_err(|msg| Error::IndexFormat(format!("vertex {}: {msg}", v.id)))?;
            entries.push(entry);
        }
        Ok(GctIndex { labels, entries })
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct GctFile {
    pub format: String,
    pub version: u32,
    pub vertices: Vec<GctVertexJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct GctVertexJson {
    id: u64,
    supernodes: Vec<SupernodeJson>,
    superedges: Vec<[u32; 3]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SupernodeJson {
    tau: u32,
    members: Vec<u64>,
}

/// Score with contexts, read off the compressed tree.
pub fn gct_score(idx: &GctIndex, v: VertexId, k: u32) -> Result<ScoreRecord> {
    check_k(k)?;
    let score = idx.entry(v)?.score(k);
    Ok(idx.record(v, k, score, true))
}

pub fn gct_contexts(idx: &GctIndex, v: VertexId, k: u32) -> Result<SocialContexts> {
    check_k(k)?;
    let contexts = idx.labelled(idx.entry(v)?.contexts(k));
    Ok(SocialContexts {
        center: idx.labels[v as usize],
        k,
        contexts,
    })
}

pub fn gct_topr(idx: &GctIndex, r: usize, k: u32) -> Result<TopRResult> {
    gct_topr_with(idx, r, k, SearchOptions::default())
}

/// Every score is an O(1) lookup, so all vertices are scored directly.
pub fn gct_topr_with(idx: &GctIndex, r: usize, k: u32, opts: SearchOptions) -> Result<TopRResult> {
    check_k(k)?;
    check_r(r, idx.n())?;
    let start = Instant::now();
    let mut top = RunningTopR::new(r);
    for (v, e) in idx.entries.iter().enumerate() {
        top.offer(v as VertexId, e.score(k));
    }
    let t_score = start.elapsed();
    let mut records: Vec<ScoreRecord> = top
        .into_sorted()
        .par_iter()
        .map(|&(v, s)| idx.record(v, k, s, opts.contexts))
        .collect();
    if opts.pad_with_zeros {
        pad_with_zeros(&mut records, &idx.labels, r, k, opts.contexts);
    }
    let elapsed = start.elapsed();
    Ok(TopRResult {
        k,
        r,
        records,
        search_space: idx.n(),
        stop_bound: None,
        elapsed,
        phases: phase_list(&[
            ("score", t_score, Default::default()),
            ("total", elapsed, Default::default()),
        ]),
    })
}
