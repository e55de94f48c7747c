//! Seeded random graph generators for tests, examples and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};

/// `G(n, p)`: every pair is an edge independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as VertexId {
        for b in a + 1..n as VertexId {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Preferential attachment with triad closure (Holme–Kim).
///
/// Every new vertex attaches `m` edges. The first goes to a
/// degree-proportional target; each later one closes a triangle with a random
/// neighbour of the previous target with probability `triad_p`, and otherwise
/// attaches preferentially. The result has about `n·m` edges, a power-law
/// degree tail and plenty of triangles.
pub fn power_law_cluster(n: usize, m: usize, triad_p: f64, seed: u64) -> Graph {
    assert!(m >= 1 && m < n, "need 1 <= m < n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    // each vertex appears once per incident edge, plus once for the seed set
    let mut repeated: Vec<VertexId> = (0..m as VertexId).collect();
    let mut edges = Vec::with_capacity(n * m);
    let mut targets: Vec<VertexId> = Vec::with_capacity(m);
    for source in m as VertexId..n as VertexId {
        targets.clear();
        let mut last: Option<VertexId> = None;
        while targets.len() < m {
            let mut pick = None;
            if let Some(t) = last.filter(|_| rng.gen_bool(triad_p)) {
                // a few attempts at a fresh neighbour of the previous target
                for _ in 0..4 {
                    if let Some(&w) = adj[t as usize].choose(&mut rng) {
                        if w != source && !targets.contains(&w) {
                            pick = Some(w);
                            break;
                        }
                    }
                }
            }
            let w = match pick {
                Some(w) => w,
                None => loop {
                    let w = *repeated.choose(&mut rng).unwrap();
                    if !targets.contains(&w) {
                        break w;
                    }
                },
            };
            targets.push(w);
            last = Some(w);
        }
        for &t in &targets {
            adj[t as usize].push(source);
            adj[source as usize].push(t);
            repeated.push(t);
            repeated.push(source);
            edges.push((t, source));
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_is_deterministic() {
        assert_eq!(erdos_renyi(40, 0.3, 7), erdos_renyi(40, 0.3, 7));
        assert_eq!(erdos_renyi(10, 1.0, 1).m(), 45);
        assert_eq!(erdos_renyi(10, 0.0, 1).m(), 0);
    }

    #[test]
    fn power_law_has_expected_size() {
        let g = power_law_cluster(1000, 5, 0.5, 3);
        assert_eq!(g.m(), (1000 - 5) * 5);
        assert!(g.triangle_count() > 1000);
        assert!(g.max_degree() > 50);
        assert_eq!(g, power_law_cluster(1000, 5, 0.5, 3));
    }
}
