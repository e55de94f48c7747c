//! Compare how many full score computations each top-r method needs on a
//! generated power-law graph.
//!
//!     cargo run --release --example pruning -- [n] [edges-per-vertex] [triad-p] [k] [r]

use trussdiv::gct::{build_gct, gct_topr_with};
use trussdiv::generate::power_law_cluster;
use trussdiv::search::{bounded_search_with, online_search_with};
use trussdiv::tsd::{build_tsd, tsd_topr_with};
use trussdiv::SearchOptions;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, d: &str| args.get(i).cloned().unwrap_or_else(|| d.to_string());
    let n: usize = arg(0, "100000").parse().unwrap();
    let m: usize = arg(1, "5").parse().unwrap();
    let p: f64 = arg(2, "0.5").parse().unwrap();
    let k: u32 = arg(3, "3").parse().unwrap();
    let r: usize = arg(4, "100").parse().unwrap();

    let g = power_law_cluster(n, m, p, 42);
    println!("n={} m={} triangles={}", g.n(), g.m(), g.triangle_count());
    let opts = SearchOptions {
        contexts: false,
        pad_with_zeros: false,
    };

    let online = online_search_with(&g, r, k, opts).unwrap();
    let bounded = bounded_search_with(&g, r, k, opts).unwrap();
    let tsd = build_tsd(&g).unwrap();
    let via_tsd = tsd_topr_with(&tsd, r, k, opts).unwrap();
    let gct = build_gct(&g).unwrap();
    let via_gct = gct_topr_with(&gct, r, k, opts).unwrap();

    for (name, res) in [
        ("online", &online),
        ("bounded", &bounded),
        ("tsd", &via_tsd),
        ("gct", &via_gct),
    ] {
        println!(
            "{name:>8}: search space {:>7}  time {:.3}s  stop bound {:?}",
            res.search_space,
            res.elapsed.as_secs_f64(),
            res.stop_bound
        );
    }
    assert_eq!(online.ranking(), bounded.ranking());
    assert_eq!(online.ranking(), via_tsd.ranking());
    assert_eq!(online.ranking(), via_gct.ranking());
    println!("r-th score: {:?}", online.records.last().map(|x| x.score));
}
