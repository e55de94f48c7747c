//! Machine-readable run summaries.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::graph::GraphStats;
use crate::search::{Phase, TopRResult};

/// Summary of one command invocation: inputs, sizes, timings and a digest
/// of the answer that is stable across thread counts and algorithms.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub command: String,
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<GraphStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_space: Option<usize>,
    pub phases: Vec<Phase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
    pub elapsed_secs: f64,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            ..RunReport::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(serde_json::Value::Null),
        );
        self
    }

    pub fn with_result(&mut self, res: &TopRResult) -> &mut Self {
        self.search_space = Some(res.search_space);
        self.phases = res.phases.clone();
        self.digest = Some(ranking_digest(&res.ranking()));
        self
    }
}

/// SHA-256 over `vertex\tscore\n` lines, hex encoded.
pub fn ranking_digest(ranking: &[(u64, u32)]) -> String {
    let mut h = Sha256::new();
    for (v, s) in ranking {
        h.update(format!("{v}\t{s}\n").as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_depends_on_order_and_values() {
        let a = ranking_digest(&[(1, 3), (2, 1)]);
        assert_eq!(a.len(), 64);
        assert_ne!(a, ranking_digest(&[(2, 1), (1, 3)]));
        assert_ne!(a, ranking_digest(&[(1, 3), (2, 2)]));
        assert_eq!(a, ranking_digest(&[(1, 3), (2, 1)]));
    }
}
