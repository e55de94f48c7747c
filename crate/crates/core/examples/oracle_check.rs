//! Cross-check the fast paths against the definitional oracle on random
//! graphs.
//!
//!     cargo run --release --example oracle_check -- [graphs]

use trussdiv::generate::erdos_renyi;
use trussdiv::oracle::Oracle;
use trussdiv::{build_gct, build_tsd, compute_score, gct_score, truss_decompose, tsd_score};

fn main() -> trussdiv::Result<()> {
    let count: u64 = std::env::args().nth(1).map_or(50, |s| s.parse().unwrap());
    let mut checked = 0;
    for seed in 0..count {
        let p = [0.1, 0.3, 0.5][seed as usize % 3];
        let g = erdos_renyi(12 + (seed as usize * 5) % 40, p, seed);
        let oracle = Oracle::new(&g)?;

        let mut fast: Vec<_> = truss_decompose(&g)
            .iter()
            .map(|((a, b), t)| (g.label(a), g.label(b), t))
            .collect();
        fast.sort_unstable();
        assert_eq!(fast, oracle.truss(), "truss mismatch, seed {seed}");

        let (tsd, gct) = (build_tsd(&g)?, build_gct(&g)?);
        for v in 0..g.n() as u32 {
            let ego = oracle.ego(g.label(v))?;
            for k in 2..=ego.max_trussness() + 1 {
                let want = Some(ego.contexts(k).contexts);
                assert_eq!(compute_score(&g, v, k)?.contexts, want);
                assert_eq!(tsd_score(&tsd, v, k)?.contexts, want);
                assert_eq!(gct_score(&gct, v, k)?.contexts, want);
                checked += 1;
            }
        }
    }
    println!("{count} graphs, {checked} (vertex, k) pairs: all methods agree with the oracle");
    Ok(())
}
