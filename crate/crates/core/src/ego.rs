//! Ego-network extraction.
//!
//! [`extract_ego`] builds one ego-network by intersecting the centre's
//! adjacency with each neighbour's. [`extract_all_egos`] instead runs a single
//! pass over the edges of the graph: every common neighbour `w` of an edge
//! `(u, v)` receives that edge, so each triangle is visited three times in
//! total rather than six. The pass materializes a compact buffer of edge ids
//! grouped by centre (`3T` entries); [`EgoNetwork`] values are then built
//! lazily, one at a time, from that buffer.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

/// Environment variable holding the ego materialization budget in MiB.
pub const MEM_CAP_ENV: &str = "TRUSSDIV_MEM_CAP_MB";

/// Approximate bytes held per materialized ego edge during the shared pass.
const BYTES_PER_EGO_EDGE: usize = 12;

/// The subgraph induced by `N(center)`, renumbered locally.
///
/// Local ids follow ascending global id, so local id `i` is `members()[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgoNetwork {
    center: VertexId,
    members: Vec<VertexId>,
    graph: Graph,
}

impl EgoNetwork {
    pub fn center(&self) -> VertexId {
        self.center
    }

    /// Global ids of the members, indexed by local id.
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    /// The ego-network itself over local ids `0..len()`.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Number of members, `|N(center)|`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of ego edges; equals the number of triangles through the centre.
    pub fn edge_count(&self) -> usize {
        self.graph.m()
    }

    pub fn local(&self, global: VertexId) -> Option<VertexId> {
        self.members
            .binary_search(&global)
            .ok()
            .map(|i| i as VertexId)
    }

    pub fn global(&self, local: VertexId) -> VertexId {
        self.members[local as usize]
    }

    /// Ego edges as sorted pairs of global ids.
    pub fn global_edges(&self) -> Vec<(VertexId, VertexId)> {
        self.graph
            .edges()
            .iter()
            .map(|&(a, b)| (self.global(a), self.global(b)))
            .collect()
    }
}

/// Upper limit on the number of ego edges the shared pass may hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EgoCap {
    pub max_ego_edges: usize,
}

impl EgoCap {
    pub const UNLIMITED: EgoCap = EgoCap {
        max_ego_edges: usize::MAX,
    };

    pub fn from_megabytes(mb: usize) -> Self {
        EgoCap {
            max_ego_edges: mb.saturating_mul(1 << 20) / BYTES_PER_EGO_EDGE,
        }
    }

    /// Reads [`MEM_CAP_ENV`]; unlimited when unset or unparsable.
    pub fn from_env() -> Self {
        std::env::var(MEM_CAP_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(EgoCap::from_megabytes)
            .unwrap_or(EgoCap::UNLIMITED)
    }
}

impl Default for EgoCap {
    fn default() -> Self {
        EgoCap::from_env()
    }
}

pub fn extract_ego(g: &Graph, v: VertexId) -> Result<EgoNetwork> {
    g.check_vertex(v)?;
    let members = g.neighbors(v).to_vec();
    let mut pairs = Vec::new();
    for (i, &u) in members.iter().enumerate() {
        // positions in N(v) are local ids
        let nu = g.neighbors(u);
        let (mut a, mut b) = (i + 1, nu.partition_point(|&x| x <= u));
        while a < members.len() && b < nu.len() {
            match members[a].cmp(&nu[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    pairs.push((i as VertexId, a as VertexId));
                    a += 1;
                    b += 1;
                }
            }
        }
    }
    let graph = Graph::from_edges(members.len(), pairs);
    Ok(EgoNetwork {
        center: v,
        members,
        graph,
    })
}

/// All ego-networks of a graph, produced by one shared triangle pass.
#[derive(Debug)]
pub struct EgoSet<'g> {
    graph: &'g Graph,
    offsets: Vec<usize>,
    entries: Vec<EdgeId>,
}

impl<'g> EgoSet<'g> {
    pub fn len(&self) -> usize {
        self.graph.n()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.n() == 0
    }

    /// `m_v` for centre `v`.
    pub fn edge_count(&self, v: VertexId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// `Σ m_v`, which is three times the triangle count.
    pub fn total_edges(&self) -> usize {
        self.entries.len()
    }

    pub fn ego(&self, v: VertexId) -> EgoNetwork {
        let g = self.graph;
        let members = g.neighbors(v).to_vec();
        let local = |x: VertexId| members.binary_search(&x).unwrap() as VertexId;
        let pairs: Vec<_> = self.entries[self.offsets[v as usize]..self.offsets[v as usize + 1]]
            .iter()
            .map(|&e| {
                let (a, b) = g.edge(e);
                (local(a), local(b))
            })
            .collect();
        let graph = Graph::from_edges(members.len(), pairs);
        EgoNetwork {
            center: v,
            members,
            graph,
        }
    }

    /// Streams the ego-networks in vertex order.
    pub fn iter(&self) -> impl Iterator<Item = EgoNetwork> + '_ {
        (0..self.len() as VertexId).map(move |v| self.ego(v))
    }
}

pub fn extract_all_egos(g: &Graph) -> Result<EgoSet<'_>> {
    extract_all_egos_with_cap(g, EgoCap::from_env())
}

pub fn extract_all_egos_with_cap(g: &Graph, cap: EgoCap) -> Result<EgoSet<'_>> {
    let n = g.n();
    let mut corner: Vec<(VertexId, EdgeId)> = Vec::new();
    let mut counts = vec![0usize; n + 1];
    for e in 0..g.m() as EdgeId {
        let (u, v) = g.edge(e);
        g.for_each_common(u, v, |w, _, _| {
            corner.push((w, e));
            counts[w as usize + 1] += 1;
        });
        if corner.len() > cap.max_ego_edges {
            return Err(Error::EgoCapExceeded {
                needed: corner.len(),
                cap: cap.max_ego_edges,
            });
        }
    }
    for i in 0..n {
        counts[i + 1] += counts[i];
    }
    let offsets = counts.clone();
    let mut entries = vec![0 as EdgeId; corner.len()];
    // edge ids arrive in ascending order, so each centre's slice stays sorted
    for (w, e) in corner {
        let slot = &mut counts[w as usize];
        entries[*slot] = e;
        *slot += 1;
    }
    Ok(EgoSet {
        graph: g,
        offsets,
        entries,
    })
}

/// How index builders obtain their ego-networks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EgoSource {
    /// One shared triangle pass over all edges ([`extract_all_egos`]).
    #[default]
    Shared,
    /// An independent [`extract_ego`] call per vertex.
    PerVertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub source: EgoSource,
    pub cap: EgoCap,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            source: EgoSource::Shared,
            cap: EgoCap::from_env(),
        }
    }
}

/// Applies `f` to the ego-network of every vertex, in parallel, returning
/// the results in vertex order.
pub fn map_egos<T, F>(g: &Graph, opts: BuildOptions, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(EgoNetwork) -> T + Sync,
{
    let ids = 0..g.n() as VertexId;
    match opts.source {
        EgoSource::Shared => {
            let egos = extract_all_egos_with_cap(g, opts.cap)?;
            Ok(ids.into_par_iter().map(|v| f(egos.ego(v))).collect())
        }
        EgoSource::PerVertex => ids
            .into_par_iter()
            .map(|v| extract_ego(g, v).map(&f))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{fig1_ego, fig1_full};

    #[test]
    fn star_center_has_edgeless_ego() {
        let g = Graph::from_edges(5, (1..5).map(|i| (0, i)));
        let ego = extract_ego(&g, 0).unwrap();
        assert_eq!((ego.len(), ego.edge_count()), (4, 0));
        let all = extract_all_egos_with_cap(&g, EgoCap::UNLIMITED).unwrap();
        assert!(all.iter().all(|e| e.edge_count() == 0));
    }

    #[test]
    fn pendant_leaf_ego_is_single_vertex() {
        // triangle 0-1-2 with pendant 3 on 0
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)]);
        let ego = extract_ego(&g, 3).unwrap();
        assert_eq!(ego.members(), &[0]);
        assert_eq!(ego.edge_count(), 0);
    }

    #[test]
    fn triangle_egos_are_single_edges() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let all = extract_all_egos_with_cap(&g, EgoCap::UNLIMITED).unwrap();
        for ego in all.iter() {
            assert_eq!(ego.edge_count(), 1);
            assert_eq!(ego, extract_ego(&g, ego.center()).unwrap());
        }
        assert_eq!(all.total_edges(), 3);
    }

    #[test]
    fn center_ego_is_the_ego_fixture() {
        let full = fig1_full();
        let ego_g = fig1_ego();
        let v = full.vertex(0).unwrap();
        let ego = extract_ego(&full, v).unwrap();
        assert_eq!(ego.len(), 14);
        assert_eq!(ego.edge_count(), 26);
        let mut as_labels: Vec<(u64, u64)> = ego
            .global_edges()
            .into_iter()
            .map(|(a, b)| (full.label(a), full.label(b)))
            .collect();
        as_labels.sort_unstable();
        let mut expected: Vec<(u64, u64)> = ego_g
            .edges()
            .iter()
            .map(|&(a, b)| (ego_g.label(a), ego_g.label(b)))
            .collect();
        expected.sort_unstable();
        assert_eq!(as_labels, expected);

        let all = extract_all_egos_with_cap(&full, EgoCap::UNLIMITED).unwrap();
        assert_eq!(all.edge_count(v), 26);
        assert_eq!(all.total_edges() as u64, 3 * full.triangle_count());
    }

    #[test]
    fn cap_refuses_large_materialization() {
        let g = fig1_full();
        let err = extract_all_egos_with_cap(&g, EgoCap { max_ego_edges: 10 }).unwrap_err();
        assert!(matches!(err, Error::EgoCapExceeded { cap: 10, .. }));
    }

    #[test]
    fn unknown_center_is_an_error() {
        let g = fig1_full();
        assert!(extract_ego(&g, 99).is_err());
    }
}
