//! Ego-network extraction: one at a time, or all at once from a single
//! triangle pass under a memory budget.
//!
//!     TRUSSDIV_MEM_CAP_MB=64 cargo run --release --example ego_networks -- [n]

use std::time::Instant;

use trussdiv::ego::{extract_all_egos, extract_all_egos_with_cap, EgoCap};
use trussdiv::generate::power_law_cluster;
use trussdiv::{extract_ego, Error};

fn main() -> trussdiv::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .map_or(20_000, |s| s.parse().unwrap());
    let g = power_law_cluster(n, 5, 0.5, 11);
    println!(
        "graph: n={} m={} triangles={}",
        g.n(),
        g.m(),
        g.triangle_count()
    );

    let t = Instant::now();
    let mut edges = 0;
    for v in 0..g.n() as u32 {
        edges += extract_ego(&g, v)?.edge_count();
    }
    println!(
        "per-vertex extraction: {edges} ego edges in {:.3}s",
        t.elapsed().as_secs_f64()
    );

    let t = Instant::now();
    match extract_all_egos(&g) {
        Ok(all) => {
            let biggest = (0..g.n() as u32)
                .max_by_key(|&v| all.edge_count(v))
                .unwrap();
            println!(
                "shared extraction: {} ego edges in {:.3}s; largest ego at vertex {} with {} edges",
                all.total_edges(),
                t.elapsed().as_secs_f64(),
                g.label(biggest),
                all.edge_count(biggest)
            );
            assert_eq!(all.ego(biggest), extract_ego(&g, biggest)?);
        }
        Err(e @ Error::EgoCapExceeded { .. }) => println!("shared extraction refused: {e}"),
        Err(e) => return Err(e),
    }

    // a tiny budget is refused up front instead of exhausting memory
    let err = extract_all_egos_with_cap(&g, EgoCap::from_megabytes(0)).unwrap_err();
    println!("with a 0 MiB budget: {err}");
    Ok(())
}
