//! Truss decomposition of a whole graph and of one ego-network.
//!
//!     cargo run --example decompose -- [edge-list] [vertex]

use std::collections::BTreeMap;

use trussdiv::truss::bitmap_truss_decompose_graph;
use trussdiv::{bitmap_truss_decompose, extract_ego, load_edge_list, truss_decompose};

fn main() -> trussdiv::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig1_full.txt").into());
    let center: u64 = args.next().map_or(0, |s| s.parse().expect("vertex id"));

    let (g, _) = load_edge_list(&path)?;
    let tm = truss_decompose(&g);
    assert_eq!(tm, bitmap_truss_decompose_graph(&g));

    let mut hist: BTreeMap<u32, usize> = BTreeMap::new();
    for &t in tm.trussness() {
        *hist.entry(t).or_default() += 1;
    }
    println!(
        "{} vertices, {} edges, {} triangles",
        g.n(),
        g.m(),
        g.triangle_count()
    );
    for (t, count) in &hist {
        println!("  trussness {t}: {count} edges");
    }

    // the same edge can have a different trussness inside an ego-network
    let ego = extract_ego(&g, g.vertex(center)?)?;
    let local = bitmap_truss_decompose(&ego);
    println!(
        "ego-network of {center}: {} members, {} edges",
        ego.len(),
        ego.edge_count()
    );
    for ((a, b), t) in local.iter() {
        let (ga, gb) = (ego.global(a), ego.global(b));
        let global_t = tm.get(ga, gb).unwrap();
        println!(
            "  {} {}  ego {t}  global {global_t}",
            g.label(ga),
            g.label(gb)
        );
    }
    Ok(())
}
