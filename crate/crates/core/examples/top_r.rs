//! Top-r search: score everything, or sparsify and prune by upper bounds.
//!
//!     cargo run --release --example top_r -- [edge-list] [k] [r]

use trussdiv::{bounded_search, load_edge_list, online_search, sparsify};

fn main() -> trussdiv::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig1_full.txt").into());
    let k: u32 = args.next().map_or(4, |s| s.parse().unwrap());
    let r: usize = args.next().map_or(3, |s| s.parse().unwrap());

    let (g, _) = load_edge_list(&path)?;
    let sparse = sparsify(&g, k);
    println!(
        "sparsified for k={k}: {}/{} vertices, {}/{} edges kept",
        sparse.n(),
        g.n(),
        sparse.m(),
        g.m()
    );

    let online = online_search(&g, r, k)?;
    let bounded = bounded_search(&g, r, k)?;
    assert_eq!(online.ranking(), bounded.ranking());
    for rec in &bounded.records {
        println!(
            "  {}: {}  {:?}",
            rec.vertex,
            rec.score,
            rec.contexts.as_deref().unwrap_or(&[])
        );
    }
    println!(
        "scored {} vertices online, {} with pruning (stopped at bound {:?})",
        online.search_space, bounded.search_space, bounded.stop_bound
    );
    Ok(())
}
