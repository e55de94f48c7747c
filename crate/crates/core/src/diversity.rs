//! Structural diversity of a single vertex: the number of connected
//! components (social contexts) of the k-truss of its ego-network.

use serde::{Deserialize, Serialize};

use crate::ego::{extract_ego, EgoNetwork};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::truss::{truss_decompose, TrussMap};
use crate::union_find::DisjointSets;

/// The social contexts of one vertex at one threshold, as external ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocialContexts {
    pub center: u64,
    pub k: u32,
    pub contexts: Vec<Vec<u64>>,
}

impl SocialContexts {
    pub fn score(&self) -> u32 {
        self.contexts.len() as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub vertex: u64,
    pub k: u32,
    pub score: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contexts: Option<Vec<Vec<u64>>>,
    /// Set on zero-score entries that only pad a short top-r answer.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub padded: bool,
}

impl ScoreRecord {
    pub fn social_contexts(&self) -> Option<SocialContexts> {
        self.contexts.as_ref().map(|c| SocialContexts {
            center: self.vertex,
            k: self.k,
            contexts: c.clone(),
        })
    }
}

pub fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        Err(Error::InvalidK(k))
    } else {
        Ok(())
    }
}

/// An ego-network together with its local trussness.
#[derive(Clone, Debug)]
pub struct DecomposedEgo {
    pub ego: EgoNetwork,
    pub truss: TrussMap,
}

impl DecomposedEgo {
    pub fn new(ego: EgoNetwork) -> Self {
        let truss = truss_decompose(ego.graph());
        DecomposedEgo { ego, truss }
    }

    /// Largest ego edge trussness (0 for an edgeless ego).
    pub fn max_trussness(&self) -> u32 {
        self.truss.max_trussness()
    }

    /// Contexts at threshold `k`, as sorted lists of global internal ids.
    pub fn contexts(&self, k: u32) -> Vec<Vec<VertexId>> {
        let edges = self.truss.iter().filter(|&(_, t)| t >= k).map(|(e, _)| e);
        components(self.ego.len(), edges)
            .into_iter()
            .map(|c| c.into_iter().map(|l| self.ego.global(l)).collect())
            .collect()
    }

    pub fn score(&self, k: u32) -> u32 {
        self.contexts(k).len() as u32
    }
}

/// Connected components (with at least one edge) of an edge set over `0..n`.
/// Members are sorted, components ordered by their smallest member.
pub(crate) fn components<I>(n: usize, edges: I) -> Vec<Vec<VertexId>>
where
    I: IntoIterator<Item = (VertexId, VertexId)>,
{
    let mut ds = DisjointSets::new(n);
    let mut touched = vec![false; n];
    for (a, b) in edges {
        ds.union(a, b);
        touched[a as usize] = true;
        touched[b as usize] = true;
    }
    let mut slot_of_root = vec![usize::MAX; n];
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    for x in 0..n as VertexId {
        if !touched[x as usize] {
            continue;
        }
        let r = ds.find(x) as usize;
        if slot_of_root[r] == usize::MAX {
            slot_of_root[r] = out.len();
            out.push(Vec::new());
        }
        out[slot_of_root[r]].push(x);
    }
    out
}

pub(crate) fn to_labels(g: &Graph, contexts: Vec<Vec<VertexId>>) -> Vec<Vec<u64>> {
    contexts
        .into_iter()
        .map(|c| c.into_iter().map(|v| g.label(v)).collect())
        .collect()
}

/// Score and social contexts of `v` at threshold `k`.
pub fn compute_score(g: &Graph, v: VertexId, k: u32) -> Result<ScoreRecord> {
    check_k(k)?;
    let scored = DecomposedEgo::new(extract_ego(g, v)?);
    let contexts = to_labels(g, scored.contexts(k));
    Ok(ScoreRecord {
        vertex: g.label(v),
        k,
        score: contexts.len() as u32,
        contexts: Some(contexts),
        padded: false,
    })
}

/// `min(⌊d/k⌋, ⌊2·m_v / (k(k−1))⌋)` for a vertex of degree `d` whose
/// ego-network has `m_v` edges.
pub fn score_upper_bound(degree: usize, ego_edges: u64, k: u32) -> u32 {
    debug_assert!(k >= 2);
    let k = k as u64;
    let by_degree = degree as u64 / k;
    let by_edges = 2 * ego_edges / (k * (k - 1));
    by_degree.min(by_edges) as u32
}

/// [`score_upper_bound`] for `v`, counting its ego edges from the graph.
pub fn upper_bound_score(g: &Graph, v: VertexId, k: u32) -> Result<u32> {
    check_k(k)?;
    g.check_vertex(v)?;
    let mut ego_edges = 0u64;
    for &u in g.neighbors(v) {
        g.for_each_common(v, u, |_, _, _| ego_edges += 1);
    }
    Ok(score_upper_bound(g.degree(v), ego_edges / 2, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::fig1_full;

    fn contexts(g: &Graph, k: u32) -> Vec<Vec<u64>> {
        compute_score(g, g.vertex(0).unwrap(), k)
            .unwrap()
            .contexts
            .unwrap()
    }

    #[test]
    fn reference_center_at_k4() {
        let g = fig1_full();
        let rec = compute_score(&g, g.vertex(0).unwrap(), 4).unwrap();
        assert_eq!(rec.score, 3);
        assert_eq!(
            rec.contexts.unwrap(),
            vec![
                vec![1, 2, 3, 4],
                vec![11, 12, 13, 14],
                vec![21, 22, 23, 24, 25, 26]
            ]
        );
    }

    #[test]
    fn reference_center_at_k3_merges_bridge() {
        let g = fig1_full();
        assert_eq!(
            contexts(&g, 3),
            vec![
                vec![1, 2, 3, 4, 11, 12, 13, 14],
                vec![21, 22, 23, 24, 25, 26]
            ]
        );
    }

    #[test]
    fn reference_center_at_k5_is_zero() {
        let g = fig1_full();
        assert!(contexts(&g, 5).is_empty());
    }

    #[test]
    fn k_below_two_is_rejected() {
        let g = fig1_full();
        assert!(matches!(compute_score(&g, 0, 1), Err(Error::InvalidK(1))));
        assert!(matches!(
            upper_bound_score(&g, 0, 0),
            Err(Error::InvalidK(0))
        ));
    }

    #[test]
    fn k2_ignores_isolated_members() {
        // star with one extra leaf-leaf edge: ego of 0 has one edge, two isolated
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2)]);
        let rec = compute_score(&g, 0, 2).unwrap();
        assert_eq!(rec.score, 1);
        assert_eq!(rec.contexts.unwrap(), vec![vec![1, 2]]);
    }

    #[test]
    fn upper_bound_values() {
        let g = fig1_full();
        assert_eq!(upper_bound_score(&g, g.vertex(0).unwrap(), 4).unwrap(), 3);
        // x1 has degree 4 < k = 5
        assert_eq!(upper_bound_score(&g, g.vertex(1).unwrap(), 5).unwrap(), 0);
        let star = Graph::from_edges(6, (1..6).map(|i| (0, i)));
        for k in 2..6 {
            assert_eq!(upper_bound_score(&star, 0, k).unwrap(), 0);
        }
        assert_eq!(score_upper_bound(14, 26, 4), 3);
    }
}
