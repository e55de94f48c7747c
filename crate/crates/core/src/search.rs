//! Top-r structural diversity search.
//!
//! Every search ranks vertices by `(score desc, external id asc)` and only
//! admits vertices with a positive score, unless zero-score padding is
//! requested. The bound-driven searches visit candidates by
//! `(bound desc, external id asc)` and stop once the next candidate can no
//! longer displace the current r-th answer under that total order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::diversity::{check_k, compute_score, score_upper_bound, DecomposedEgo, ScoreRecord};
use crate::ego::extract_ego;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::truss::{truss_decompose, TrussMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Attach social contexts to the returned records.
    pub contexts: bool,
    /// Fill a short answer with zero-score vertices (smallest ids first).
    pub pad_with_zeros: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            contexts: true,
            pad_with_zeros: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Phase {
    pub name: &'static str,
    pub secs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TopRResult {
    pub k: u32,
    pub r: usize,
    pub records: Vec<ScoreRecord>,
    /// Vertices whose full score was computed.
    pub search_space: usize,
    /// Bound of the candidate that triggered early termination, if any.
    pub stop_bound: Option<u32>,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
    pub phases: Vec<Phase>,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl TopRResult {
    /// `(vertex, score)` pairs in rank order.
    pub fn ranking(&self) -> Vec<(u64, u32)> {
        self.records.iter().map(|r| (r.vertex, r.score)).collect()
    }

    pub fn phase(&self, name: &str) -> Option<f64> {
        self.phases.iter().find(|p| p.name == name).map(|p| p.secs)
    }
}

pub(crate) fn check_r(r: usize, n: usize) -> Result<()> {
    if r == 0 || (n > 0 && r > n) {
        Err(Error::InvalidR { r, n })
    } else {
        Ok(())
    }
}

/// The r best `(score, id)` pairs seen so far, positive scores only.
#[derive(Debug)]
pub(crate) struct RunningTopR {
    r: usize,
    best: BTreeSet<(Reverse<u32>, VertexId)>,
}

impl RunningTopR {
    pub(crate) fn new(r: usize) -> Self {
        RunningTopR {
            r,
            best: BTreeSet::new(),
        }
    }

    pub(crate) fn offer(&mut self, v: VertexId, score: u32) {
        if score == 0 {
            return;
        }
        self.best.insert((Reverse(score), v));
        if self.best.len() > self.r {
            self.best.pop_last();
        }
    }

    fn worst(&self) -> Option<(u32, VertexId)> {
        if self.best.len() < self.r {
            return None;
        }
        self.best.last().map(|&(Reverse(s), v)| (s, v))
    }

    /// True when a vertex `v` scoring at most `bound` cannot enter the answer,
    /// and neither can any later candidate (lower bound, or same bound and
    /// larger id).
    pub(crate) fn excludes(&self, bound: u32, v: VertexId) -> bool {
        match self.worst() {
            Some((s, w)) => bound < s || (bound == s && v > w),
            None => false,
        }
    }

    pub(crate) fn into_sorted(self) -> Vec<(VertexId, u32)> {
        self.best
            .into_iter()
            .map(|(Reverse(s), v)| (v, s))
            .collect()
    }
}

/// Outcome of a bound-ordered candidate loop.
pub(crate) struct Pruned {
    pub ranking: Vec<(VertexId, u32)>,
    pub search_space: usize,
    pub stop_bound: Option<u32>,
}

/// Visits vertices by `(bound desc, id asc)`, scoring each until the next
/// bound cannot beat the current r-th answer.
pub(crate) fn prune_by_bounds<F>(bounds: &[u32], r: usize, mut score: F) -> Result<Pruned>
where
    F: FnMut(VertexId) -> Result<u32>,
{
    // bucket queue keyed by bound; ids ascend within a bucket
    let max_bound = bounds.iter().copied().max().unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<VertexId>> = vec![Vec::new(); max_bound + 1];
    for (v, &b) in bounds.iter().enumerate() {
        buckets[b as usize].push(v as VertexId);
    }
    let mut top = RunningTopR::new(r);
    let mut search_space = 0;
    let mut stop_bound = None;
    'outer: for (b, bucket) in buckets.iter().enumerate().rev() {
        let b = b as u32;
        for &v in bucket {
            if b == 0 || top.excludes(b, v) {
                stop_bound = Some(b);
                break 'outer;
            }
            let s = score(v)?;
            search_space += 1;
            top.offer(v, s);
        }
    }
    Ok(Pruned {
        ranking: top.into_sorted(),
        search_space,
        stop_bound,
    })
}

/// Appends zero-score records for the smallest labels not yet present.
pub(crate) fn pad_with_zeros(
    records: &mut Vec<ScoreRecord>,
    labels: &[u64],
    r: usize,
    k: u32,
    contexts: bool,
) {
    if records.len() >= r {
        return;
    }
    let present: BTreeSet<u64> = records.iter().map(|x| x.vertex).collect();
    let missing = r - records.len();
    let pads: Vec<ScoreRecord> = labels
        .iter()
        .filter(|l| !present.contains(l))
        .take(missing)
        .map(|&vertex| ScoreRecord {
            vertex,
            k,
            score: 0,
            contexts: contexts.then(Vec::new),
            padded: true,
        })
        .collect();
    records.extend(pads);
}

/// Keeps the edges whose global trussness is at least `k + 1`, dropping
/// vertices left isolated. No k-truss of any ego-network uses a removed edge.
pub fn sparsify(g: &Graph, k: u32) -> Graph {
    sparsify_with(g, &truss_decompose(g), k)
}

pub fn sparsify_with(g: &Graph, truss: &TrussMap, k: u32) -> Graph {
    g.edge_subgraph(|e| truss.edge_trussness(e) > k)
}

fn finish_records(
    g: &Graph,
    ranking: &[(VertexId, u32)],
    k: u32,
    opts: SearchOptions,
) -> Result<Vec<ScoreRecord>> {
    ranking
        .par_iter()
        .map(|&(v, score)| {
            if opts.contexts {
                let rec = compute_score(g, v, k)?;
                debug_assert_eq!(rec.score, score);
                Ok(rec)
            } else {
                Ok(ScoreRecord {
                    vertex: g.label(v),
                    k,
                    score,
                    contexts: None,
                    padded: false,
                })
            }
        })
        .collect()
}

/// Scores every vertex and keeps the best r.
pub fn online_search(g: &Graph, r: usize, k: u32) -> Result<TopRResult> {
    online_search_with(g, r, k, SearchOptions::default())
}

pub fn online_search_with(g: &Graph, r: usize, k: u32, opts: SearchOptions) -> Result<TopRResult> {
    check_k(k)?;
    check_r(r, g.n())?;
    let start = Instant::now();
    let scores: Vec<u32> = (0..g.n() as VertexId)
        .into_par_iter()
        .map(|v| extract_ego(g, v).map(|ego| DecomposedEgo::new(ego).score(k)))
        .collect::<Result<_>>()?;
    let mut top = RunningTopR::new(r);
    for (v, &s) in scores.iter().enumerate() {
        top.offer(v as VertexId, s);
    }
    let score_secs = start.elapsed().as_secs_f64();
    let mut records = finish_records(g, &top.into_sorted(), k, opts)?;
    if opts.pad_with_zeros {
        pad_with_zeros(&mut records, g.labels(), r, k, opts.contexts);
    }
    let elapsed = start.elapsed();
    Ok(TopRResult {
        k,
        r,
        records,
        search_space: g.n(),
        stop_bound: None,
        elapsed,
        phases: vec![
            Phase {
                name: "score",
                secs: score_secs,
            },
            Phase {
                name: "total",
                secs: elapsed.as_secs_f64(),
            },
        ],
    })
}

/// Sparsifies, bounds every surviving vertex, then scores candidates in
/// bound order with early termination.
pub fn bounded_search(g: &Graph, r: usize, k: u32) -> Result<TopRResult> {
    bounded_search_with(g, r, k, SearchOptions::default())
}

pub fn bounded_search_with(g: &Graph, r: usize, k: u32, opts: SearchOptions) -> Result<TopRResult> {
    check_k(k)?;
    check_r(r, g.n())?;
    let start = Instant::now();
    let sparse = sparsify(g, k);
    let t_sparsify = start.elapsed();

    let ego_edges = sparse.triangles_per_vertex();
    let bounds: Vec<u32> = (0..sparse.n() as VertexId)
        .map(|v| score_upper_bound(sparse.degree(v), ego_edges[v as usize], k))
        .collect();
    let t_bound = start.elapsed();

    let pruned = prune_by_bounds(&bounds, r, |v| {
        Ok(DecomposedEgo::new(extract_ego(&sparse, v)?).score(k))
    })?;
    let t_score = start.elapsed();

    let mut records = finish_records(&sparse, &pruned.ranking, k, opts)?;
    if opts.pad_with_zeros {
        pad_with_zeros(&mut records, g.labels(), r, k, opts.contexts);
    }
    let elapsed = start.elapsed();
    Ok(TopRResult {
        k,
        r,
        records,
        search_space: pruned.search_space,
        stop_bound: pruned.stop_bound,
        elapsed,
        phases: phase_list(&[
            ("sparsify", t_sparsify, Duration::ZERO),
            ("bound", t_bound, t_sparsify),
            ("score", t_score, t_bound),
            ("total", elapsed, Duration::ZERO),
        ]),
    })
}

pub(crate) fn phase_list(marks: &[(&'static str, Duration, Duration)]) -> Vec<Phase> {
    marks
        .iter()
        .map(|&(name, end, begin)| Phase {
            name,
            secs: (end - begin).as_secs_f64(),
        })
        .collect()
}

/// Ranks all `(label, score)` pairs by the global tie order; used by the
/// exhaustive paths and by tests.
pub fn rank_all(scores: &BTreeMap<u64, u32>, r: usize) -> Vec<(u64, u32)> {
    let mut v: Vec<(u64, u32)> = scores
        .iter()
        .filter(|&(_, &s)| s > 0)
        .map(|(&l, &s)| (l, s))
        .collect();
    v.sort_by_key(|&(l, s)| (Reverse(s), l));
    v.truncate(r);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::fig1_full;

    #[test]
    fn reference_top1_online() {
        let g = fig1_full();
        let res = online_search(&g, 1, 4).unwrap();
        assert_eq!(res.ranking(), vec![(0, 3)]);
        assert_eq!(res.search_space, 15);
        assert_eq!(
            res.records[0].contexts.as_ref().unwrap(),
            &vec![
                vec![1, 2, 3, 4],
                vec![11, 12, 13, 14],
                vec![21, 22, 23, 24, 25, 26]
            ]
        );
    }

    #[test]
    fn reference_top1_bounded_scores_once() {
        let g = fig1_full();
        let res = bounded_search(&g, 1, 4).unwrap();
        assert_eq!(res.ranking(), vec![(0, 3)]);
        assert_eq!(res.search_space, 1);
        assert_eq!(res.stop_bound, Some(1));
    }

    #[test]
    fn triangle_sparsifies_to_nothing_at_k3() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let s = sparsify(&g, 3);
        assert_eq!((s.n(), s.m()), (0, 0));
        let res = bounded_search(&g, 1, 3).unwrap();
        assert!(res.records.is_empty());
        assert_eq!(res.search_space, 0);
    }

    #[test]
    fn sparsify_k2_keeps_triangle_edges() {
        // triangle with a pendant edge
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]);
        let s = sparsify(&g, 2);
        assert_eq!(s.m(), 3);
        assert_eq!(s.labels(), &[0, 1, 2]);
    }

    #[test]
    fn empty_graph_gives_empty_answer() {
        let g = Graph::from_edges(0, []);
        assert!(online_search(&g, 1, 3).unwrap().records.is_empty());
        assert!(bounded_search(&g, 5, 3).unwrap().records.is_empty());
    }

    #[test]
    fn r_out_of_range() {
        let g = fig1_full();
        assert!(matches!(
            online_search(&g, 0, 3),
            Err(Error::InvalidR { .. })
        ));
        assert!(matches!(
            bounded_search(&g, 16, 3),
            Err(Error::InvalidR { .. })
        ));
    }

    #[test]
    fn padding_fills_with_zero_scores() {
        let g = fig1_full();
        let opts = SearchOptions {
            contexts: false,
            pad_with_zeros: true,
        };
        // nine vertices (v, the x's and the y's) score 1 or more at k = 4
        let on = online_search_with(&g, 12, 4, opts).unwrap();
        let bo = bounded_search_with(&g, 12, 4, opts).unwrap();
        assert_eq!(on.ranking(), bo.ranking());
        assert_eq!(on.records.len(), 12);
        assert_eq!(on.records.iter().filter(|r| r.padded).count(), 3);
        let pads: Vec<u64> = on.records[9..].iter().map(|r| r.vertex).collect();
        assert_eq!(pads, vec![21, 22, 23]);

        let none = online_search_with(&g, 2, 5, opts).unwrap();
        assert_eq!(none.ranking(), vec![(0, 0), (1, 0)]);
        assert!(none.records.iter().all(|r| r.padded));
    }

    #[test]
    fn tie_at_the_cut_goes_to_smaller_id() {
        let mut top = RunningTopR::new(1);
        top.offer(5, 2);
        // a later candidate with bound 2 but a smaller id could still tie and win
        assert!(!top.excludes(2, 3));
        assert!(top.excludes(2, 7));
        assert!(top.excludes(1, 0));
        top.offer(3, 2);
        assert_eq!(top.into_sorted(), vec![(3, 2)]);
    }
}
