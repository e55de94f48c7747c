//! Structural diversity of one vertex across thresholds, with its social
//! contexts and the degree/edge upper bound.
//!
//!     cargo run --example score -- [edge-list] [vertex]

use trussdiv::diversity::DecomposedEgo;
use trussdiv::{compute_score, extract_ego, load_edge_list, upper_bound_score};

fn main() -> trussdiv::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig1_full.txt").into());
    let label: u64 = args.next().map_or(0, |s| s.parse().expect("vertex id"));

    let (g, _) = load_edge_list(&path)?;
    let v = g.vertex(label)?;
    let ego = DecomposedEgo::new(extract_ego(&g, v)?);
    println!(
        "vertex {label}: degree {}, ego max trussness {}",
        g.degree(v),
        ego.max_trussness()
    );
    for k in 2..=ego.max_trussness() + 1 {
        let rec = compute_score(&g, v, k)?;
        println!(
            "  k={k}: score {} (bound {})  contexts {:?}",
            rec.score,
            upper_bound_score(&g, v, k)?,
            rec.contexts.unwrap_or_default()
        );
    }
    Ok(())
}
