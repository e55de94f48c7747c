//! Truss-based structural diversity.
//!
//! The structural diversity of a vertex `v` at threshold `k` is the number of
//! connected components of the k-truss of its ego-network (the subgraph
//! induced by `v`'s neighbours). This crate computes it for single vertices,
//! finds the top-r most diverse vertices online or with bound-based pruning,
//! and builds two per-vertex indexes (TSD forests and compressed GCT trees)
//! that answer any `k` without touching the graph again.
//!
//! ```
//! use trussdiv::{Graph, compute_score, bounded_search};
//!
//! // two triangles sharing vertex 0
//! let g = Graph::from_edges(7, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4),
//!                               (1, 5), (2, 5), (0, 5), (0, 6), (3, 6), (4, 6)]);
//! assert_eq!(compute_score(&g, 0, 3).unwrap().score, 2);
//! assert_eq!(bounded_search(&g, 1, 3).unwrap().ranking(), vec![(0, 2)]);
//! ```

pub mod diversity;
pub mod ego;
pub mod error;
pub mod gct;
pub mod generate;
pub mod graph;
pub mod index;
pub mod oracle;
pub mod report;
pub mod search;
pub mod truss;
pub mod tsd;
pub mod union_find;

pub use diversity::{
    compute_score, score_upper_bound, upper_bound_score, ScoreRecord, SocialContexts,
};
pub use ego::{extract_all_egos, extract_ego, BuildOptions, EgoCap, EgoNetwork, EgoSource};
pub use error::{Error, Result};
pub use gct::{build_gct, build_gct_ego, gct_contexts, gct_score, gct_topr, GctIndex};
pub use graph::{load_edge_list, parse_edge_list, Graph, GraphStats, VertexId};
pub use index::{load_index, AnyIndex, IndexKind};
pub use report::{ranking_digest, RunReport};
pub use search::{bounded_search, online_search, sparsify, SearchOptions, TopRResult};
pub use truss::{bitmap_truss_decompose, truss_decompose, TrussMap};
pub use tsd::{build_tsd, tsd_score, tsd_topr, tsd_upper_bound, TsdIndex};

#[cfg(test)]
pub(crate) mod test_util {
    use crate::graph::{load_edge_list, Graph};

    fn fixture(name: &str) -> Graph {
        let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
        load_edge_list(path).unwrap().0
    }

    pub fn fig1_ego() -> Graph {
        fixture("fig1_ego.txt")
    }

    pub fn fig1_full() -> Graph {
        fixture("fig1_full.txt")
    }
}
