//! TSD index: build once, save, reload and answer queries for any k.
//!
//!     cargo run --release --example tsd_index -- [edge-list]

use trussdiv::tsd::TsdIndex;
use trussdiv::{build_tsd, load_edge_list, tsd_score, tsd_topr, tsd_upper_bound};

fn main() -> trussdiv::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig1_full.txt").into());
    let (g, _) = load_edge_list(&path)?;
    let idx = build_tsd(&g)?;
    println!(
        "{} forest edges (graph has {} edges), {} storage units",
        idx.forest_edge_total(),
        g.m(),
        idx.storage_units()
    );

    let mut buf = Vec::new();
    idx.write_json(&mut buf)?;
    let idx = TsdIndex::read_json(buf.as_slice())?;
    println!("round-tripped through {} bytes of JSON", buf.len());

    let v = 0;
    for f in idx.entry(v)?.edges() {
        let e = idx.entry(v)?;
        println!(
            "  forest edge {} - {} weight {}",
            g.label(e.nodes()[f.a as usize]),
            g.label(e.nodes()[f.b as usize]),
            f.weight
        );
    }
    for k in 2..=5 {
        let rec = tsd_score(&idx, v, k)?;
        println!(
            "vertex {} k={k}: score {} (forest bound {})",
            rec.vertex,
            rec.score,
            tsd_upper_bound(&idx, v, k)?
        );
    }
    let top = tsd_topr(&idx, 3, 4)?;
    println!(
        "top-3 at k=4: {:?}, {} scored",
        top.ranking(),
        top.search_space
    );
    Ok(())
}
