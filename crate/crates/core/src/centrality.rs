//! Per-edge score vectors and the measures that produce them.

use std::fmt;

/// The edge centrality measures exposed by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Edge ranking via the edge-wise random walk with restart.
    EdgeRake,
    EdgePageRank,
    EdgeKatz,
    Gtom,
    EdgeBetweenness,
    EffectiveResistance,
    Bdrc,
}

impl Measure {
    /// Short CLI token for the measure.
    pub fn token(self) -> &'static str {
        match self {
            Measure::EdgeRake => "erk",
            Measure::EdgePageRank => "ep",
            Measure::EdgeKatz => "ek",
            Measure::Gtom => "gtom",
            Measure::EdgeBetweenness => "eb",
            Measure::EffectiveResistance => "er",
            Measure::Bdrc => "bdrc",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Parameters a measure was computed with; unused fields stay `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Params {
    pub alpha: Option<f64>,
    pub iterations: Option<usize>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
}

/// Scores for every edge of one graph, in edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub scores: Vec<f64>,
    pub measure: Measure,
    pub params: Params,
}

impl CentralityVector {
    pub fn new(scores: Vec<f64>, measure: Measure, params: Params) -> CentralityVector {
        debug_assert!(
            scores.iter().all(|s| s.is_finite() && *s >= 0.0),
            "centrality scores must be finite and non-negative"
        );
        CentralityVector {
            scores,
            measure,
            params,
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}
