//! GCT index: supernodes and superedges per vertex; scores are a difference
//! of two counts.
//!
//!     cargo run --release --example gct_index -- [edge-list] [vertex]

use trussdiv::{build_gct, build_tsd, gct_contexts, gct_topr, load_edge_list};

fn main() -> trussdiv::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig1_full.txt").into());
    let label: u64 = args.next().map_or(0, |s| s.parse().unwrap());
    let (g, _) = load_edge_list(&path)?;

    let gct = build_gct(&g)?;
    gct.check_invariants().expect("well-formed index");
    let tsd = build_tsd(&g)?;
    println!(
        "storage: gct {} units, tsd {} units",
        gct.storage_units(),
        tsd.storage_units()
    );

    let v = gct.vertex(label)?;
    let entry = gct.entry(v)?;
    for (i, s) in entry.supernodes().iter().enumerate() {
        let members: Vec<u64> = s.members.iter().map(|&x| g.label(x)).collect();
        println!(
            "  supernode {i}: trussness {} members {members:?}",
            s.trussness
        );
    }
    for e in entry.superedges() {
        println!("  superedge {} - {} weight {}", e.a, e.b, e.weight);
    }
    for k in 2..=5 {
        let c = gct_contexts(&gct, v, k)?;
        println!("k={k}: score {} contexts {:?}", entry.score(k), c.contexts);
    }
    println!("top-3 at k=4: {:?}", gct_topr(&gct, 3, 4)?.ranking());
    Ok(())
}
