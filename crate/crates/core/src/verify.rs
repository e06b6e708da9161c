//! Randomized invariant suites, runnable from the CLI.
//!
//! Each suite draws seeded random graphs, checks one family of analytic
//! properties of the walk operator or the spectral machinery at a fixed
//! tolerance, and reports the worst deviation it saw. A non-empty violation
//! list means the property failed on a concrete graph; the offending seed and
//! graph are named so the case can be replayed.

use crate::erwr::{self, TransitionOperator};
use crate::graph::Graph;
use crate::spectral;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Which invariant family to exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Row stochasticity of the walk operator; double stochasticity on the
    /// unweighted symmetric cases.
    Stochasticity,
    /// Weighted symmetry `w(i) P^l[i,j] = w(j) P^l[j,i]` on undirected graphs.
    DetailedBalance,
    /// Exact-score bracket and the regular-graph closed form.
    ScoreRange,
    /// Truncation error of the iterative scores against the dense solver.
    Approximation,
    /// Edge resistances sum to `n - c`.
    FosterSum,
    /// Projection structure of Q: diagonal, idempotence, trace.
    QMatrix,
}

impl Suite {
    /// CLI token for the suite.
    pub fn token(self) -> &'static str {
        match self {
            Suite::Stochasticity => "lemma2",
            Suite::DetailedBalance => "balance",
            Suite::ScoreRange => "lemma3",
            Suite::Approximation => "theorem",
            Suite::FosterSum => "foster",
            Suite::QMatrix => "qmatrix",
        }
    }

    pub fn from_token(token: &str) -> Option<Suite> {
        Some(match token {
            "lemma2" => Suite::Stochasticity,
            "balance" => Suite::DetailedBalance,
            "lemma3" => Suite::ScoreRange,
            "theorem" => Suite::Approximation,
            "foster" => Suite::FosterSum,
            "qmatrix" => Suite::QMatrix,
            _ => return None,
        })
    }

    pub fn all() -> [Suite; 6] {
        [
            Suite::Stochasticity,
            Suite::DetailedBalance,
            Suite::ScoreRange,
            Suite::Approximation,
            Suite::FosterSum,
            Suite::QMatrix,
        ]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Upper bound on node count per random graph.
    pub max_nodes: usize,
    /// Number of random graphs.
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_nodes: 30,
            trials: 50,
            seed: 7,
        }
    }
}

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub graphs: usize,
    pub checks: usize,
    pub max_deviation: f64,
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn new(suite: Suite) -> SuiteReport {
        SuiteReport {
            suite,
            graphs: 0,
            checks: 0,
            max_deviation: 0.0,
            violations: Vec::new(),
        }
    }

    fn check(&mut self, deviation: f64, tolerance: f64, context: impl FnOnce() -> String) {
        self.checks += 1;
        self.max_deviation = self.max_deviation.max(deviation);
        if deviation > tolerance || deviation.is_nan() {
            self.violations
                .push(format!("{} (deviation {deviation:.3e})", context()));
        }
    }
}

pub fn run_suite(suite: Suite, cfg: VerifyConfig) -> SuiteReport {
    match suite {
        Suite::Stochasticity => stochasticity(cfg),
        Suite::DetailedBalance => detailed_balance(cfg),
        Suite::ScoreRange => score_range(cfg),
        Suite::Approximation => approximation(cfg),
        Suite::FosterSum => foster_sum(cfg),
        Suite::QMatrix => q_matrix_suite(cfg),
    }
}

// ---------------------------------------------------------------------------
// Random graph generators. All take the RNG by value-seeded ChaCha stream so
// identical configs regenerate identical suites.

pub mod gen {
    use super::*;

    /// Random undirected graph: a sampled edge set over up to `max_nodes`
    /// nodes, at least one edge, optional random weights in [0.1, 10].
    pub fn undirected(rng: &mut impl Rng, max_nodes: usize, weighted: bool) -> Graph {
        let n = rng.gen_range(2..=max_nodes.max(2));
        let p = rng.gen_range(0.08..0.5);
        let mut triples = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen::<f64>() < p {
                    triples.push((u, v, weight(rng, weighted)));
                }
            }
        }
        if triples.is_empty() {
            let u = rng.gen_range(0..n - 1);
            triples.push((u, u + 1, weight(rng, weighted)));
        }
        Graph::with_nodes(&triples, false, n).expect("generated graph is valid")
    }

    /// Random connected undirected graph: a random attachment tree plus
    /// extra edges. May contain parallel edges.
    pub fn connected_undirected(rng: &mut impl Rng, max_nodes: usize, weighted: bool) -> Graph {
        let n = rng.gen_range(2..=max_nodes.max(2));
        let mut triples = Vec::new();
        for v in 1..n {
            let u = rng.gen_range(0..v);
            triples.push((u, v, weight(rng, weighted)));
        }
        let extras = rng.gen_range(0..=n);
        for _ in 0..extras {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                triples.push((u.min(v), u.max(v), weight(rng, weighted)));
            }
        }
        Graph::with_nodes(&triples, false, n).expect("generated graph is valid")
    }

    /// Like [`connected_undirected`] but without parallel edges, for the
    /// degree-based bounds that assume simple graphs.
    pub fn connected_simple(rng: &mut impl Rng, max_nodes: usize) -> Graph {
        let g = connected_undirected(rng, max_nodes, false);
        let mut seen = std::collections::BTreeSet::new();
        let triples: Vec<(usize, usize, f64)> = g
            .triples()
            .into_iter()
            .filter(|&(t, h, _)| seen.insert((t.min(h), t.max(h))))
            .collect();
        Graph::with_nodes(&triples, false, g.node_count()).expect("subset of a valid graph")
    }

    /// Random directed graph where every node has at least one out-edge, so
    /// every jump target can forward the walk.
    pub fn directed_all_out(rng: &mut impl Rng, max_nodes: usize, weighted: bool) -> Graph {
        let n = rng.gen_range(2..=max_nodes.max(2));
        let p = rng.gen_range(0.05..0.4);
        let mut triples = Vec::new();
        let mut has_out = vec![false; n];
        for (u, out) in has_out.iter_mut().enumerate() {
            for v in 0..n {
                if u != v && rng.gen::<f64>() < p {
                    triples.push((u, v, weight(rng, weighted)));
                    *out = true;
                }
            }
        }
        for (u, _) in has_out.iter().enumerate().filter(|(_, out)| !**out) {
            let v = (u + 1 + rng.gen_range(0..n - 1)) % n;
            triples.push((u, v, weight(rng, weighted)));
        }
        Graph::with_nodes(&triples, true, n).expect("generated graph is valid")
    }

    /// Random union of directed cycles: every node has in-degree equal to
    /// out-degree, the strongest form of the out-edges premise.
    pub fn directed_balanced(rng: &mut impl Rng, max_nodes: usize) -> Graph {
        let n = rng.gen_range(2..=max_nodes.max(2));
        let cycles = rng.gen_range(1..=3);
        let mut triples = Vec::new();
        for _ in 0..cycles {
            let len = rng.gen_range(2..=n);
            let mut nodes: Vec<usize> = (0..n).collect();
            // Partial Fisher-Yates: the first `len` entries become the cycle.
            for i in 0..len {
                let j = rng.gen_range(i..n);
                nodes.swap(i, j);
            }
            for i in 0..len {
                triples.push((nodes[i], nodes[(i + 1) % len], 1.0));
            }
        }
        Graph::with_nodes(&triples, true, n).expect("generated graph is valid")
    }

    /// A random d-regular-style graph from the circulant family.
    pub fn circulant(rng: &mut impl Rng, max_nodes: usize) -> Graph {
        let n = rng.gen_range(5..=max_nodes.max(5));
        let max_step = (n - 1) / 2;
        let steps = rng.gen_range(1..=max_step.min(3));
        let mut triples = Vec::new();
        for s in 1..=steps {
            for v in 0..n {
                let u = (v + s) % n;
                triples.push((v.min(u), v.max(u), 1.0));
            }
        }
        // Steps touching each node twice give degree 2 * steps, except the
        // half-way step of an even cycle which pairs nodes once.
        Graph::with_nodes(&triples, false, n).expect("generated graph is valid")
    }

    fn weight(rng: &mut impl Rng, weighted: bool) -> f64 {
        if weighted {
            rng.gen_range(0.1..10.0)
        } else {
            1.0
        }
    }
}

// ---------------------------------------------------------------------------
// Suites.

const ROW_TOL: f64 = 1e-10;
const BALANCE_TOL: f64 = 1e-10;
const RANGE_TOL: f64 = 1e-10;
const FOSTER_TOL: f64 = 1e-8;
const Q_DIAG_TOL: f64 = 1e-10;
const Q_PROJ_TOL: f64 = 1e-8;

fn stochasticity(cfg: VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Stochasticity);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for trial in 0..cfg.trials {
        let (g, check_columns) = match trial % 4 {
            0 => (gen::undirected(&mut rng, cfg.max_nodes, false), true),
            1 => (gen::undirected(&mut rng, cfg.max_nodes, true), false),
            // Balanced digraphs are the directed unweighted family on which
            // the operator stays doubly stochastic (in-degree = out-degree).
            2 => (gen::directed_balanced(&mut rng, cfg.max_nodes), true),
            _ => (gen::directed_all_out(&mut rng, cfg.max_nodes, true), false),
        };
        report.graphs += 1;
        let op = TransitionOperator::new(&g);
        let m = g.edge_count();
        for e in 0..m {
            let sum: f64 = op.row(e).expect("row in range").iter().sum();
            report.check((sum - 1.0).abs(), ROW_TOL, || {
                format!("trial {trial}: row {e} sum {sum}")
            });
        }
        if check_columns {
            let ones = vec![1.0; m];
            let zeros = vec![0.0; m];
            let col_sums = op.apply(&ones, &zeros, 1.0).expect("lengths match");
            for (e, sum) in col_sums.iter().enumerate() {
                report.check((sum - 1.0).abs(), ROW_TOL, || {
                    format!("trial {trial}: column {e} sum {sum}")
                });
            }
        }
    }
    report
}

fn detailed_balance(cfg: VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::DetailedBalance);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for trial in 0..cfg.trials {
        let g = gen::undirected(&mut rng, cfg.max_nodes, true);
        report.graphs += 1;
        let p = TransitionOperator::new(&g).to_dense().expect("desk scale");
        let m = g.edge_count();
        let mut power = DMatrix::<f64>::identity(m, m);
        for level in 1..=4 {
            power = &power * &p;
            for i in 0..m {
                for j in (i + 1)..m {
                    let lhs = g.edge(i).weight * power[(i, j)];
                    let rhs = g.edge(j).weight * power[(j, i)];
                    let scale = lhs.abs().max(rhs.abs());
                    let deviation = if scale == 0.0 {
                        0.0
                    } else {
                        (lhs - rhs).abs() / scale
                    };
                    report.check(deviation, BALANCE_TOL, || {
                        format!("trial {trial}: level {level}, edges ({i},{j})")
                    });
                }
            }
        }
    }
    report
}

fn score_range(cfg: VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::ScoreRange);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for trial in 0..cfg.trials {
        // The bracket depends on the weighted-symmetry property of the walk
        // operator, which holds on undirected graphs only; directed graphs
        // genuinely escape it.
        let g = match trial % 3 {
            0 => gen::undirected(&mut rng, cfg.max_nodes, true),
            1 => gen::undirected(&mut rng, cfg.max_nodes, false),
            _ => gen::connected_undirected(&mut rng, cfg.max_nodes, true),
        };
        report.graphs += 1;
        let alpha = rng.gen_range(0.1..0.9);
        let scores = erwr::edgerake_exact(&g, alpha).expect("desk scale").scores;
        let d = g.out_strength();
        let roots: Vec<f64> = g
            .edges()
            .iter()
            .map(|e| (d[e.tail] + d[e.head]).sqrt())
            .collect();
        let max_root = roots.iter().cloned().fold(f64::MIN, f64::max);
        let min_root = roots.iter().cloned().fold(f64::MAX, f64::min);
        for (e, s) in scores.iter().enumerate() {
            let w = g.edge(e).weight;
            let below = (w / max_root) - s;
            let above = s - (w / min_root);
            report.check(below.max(above).max(0.0), RANGE_TOL, || {
                format!("trial {trial}: edge {e} score {s} outside bracket")
            });
        }
    }
    // Regular families pin the closed form 1 / sqrt(2d).
    for (label, g, d) in regular_examples(&mut rng, cfg.max_nodes) {
        report.graphs += 1;
        let expect = 1.0 / (2.0 * d).sqrt();
        let scores = erwr::edgerake_exact(&g, 0.5).expect("desk scale").scores;
        for (e, s) in scores.iter().enumerate() {
            report.check((s - expect).abs(), RANGE_TOL, || {
                format!("{label}: edge {e} score {s} != {expect}")
            });
        }
    }
    report
}

fn regular_examples(rng: &mut impl Rng, max_nodes: usize) -> Vec<(String, Graph, f64)> {
    let mut out = Vec::new();
    let k3 = Graph::new(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], false).unwrap();
    out.push(("K3".to_string(), k3, 2.0));
    let c4 = Graph::new(&[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)], false).unwrap();
    out.push(("C4".to_string(), c4, 2.0));
    let n = rng.gen_range(5..=max_nodes.max(5));
    let ring: Vec<(usize, usize, f64)> = (0..n).map(|v| (v, (v + 1) % n, 1.0)).collect();
    out.push((format!("C{n}"), Graph::new(&ring, false).unwrap(), 2.0));
    let k = rng.gen_range(4..=6);
    let mut complete = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            complete.push((i, j, 1.0));
        }
    }
    out.push((
        format!("K{k}"),
        Graph::new(&complete, false).unwrap(),
        (k - 1) as f64,
    ));
    let circ = gen::circulant(rng, max_nodes);
    let degree = circ.out_strength()[0];
    out.push(("circulant".to_string(), circ, degree));
    out
}

fn approximation(cfg: VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Approximation);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for trial in 0..cfg.trials {
        let weighted = trial % 2 == 1;
        let g = gen::undirected(&mut rng, cfg.max_nodes, weighted);
        report.graphs += 1;
        let alpha = rng.gen_range(0.2..0.8);
        let exact = erwr::edgerake_exact(&g, alpha).expect("desk scale").scores;
        let d = g.out_strength();
        let min_root = g
            .edges()
            .iter()
            .map(|e| (d[e.tail] + d[e.head]).sqrt())
            .fold(f64::MAX, f64::min);
        for epsilon in [1e-2, 1e-4] {
            let t = erwr::iterations_for_epsilon(alpha, epsilon).expect("valid params");
            let approx = erwr::edgerake_approx(&g, alpha, t)
                .expect("valid params")
                .scores;
            for (e, (c, ca)) in exact.iter().zip(&approx).enumerate() {
                let gap = c - ca;
                report.check((-gap).max(0.0), 1e-12, || {
                    format!(
                        "trial {trial}: edge {e} approx exceeds exact by {:.3e}",
                        -gap
                    )
                });
                let bound = g.edge(e).weight * epsilon / min_root + 1e-12;
                report.check((gap - bound).max(0.0), 0.0, || {
                    format!("trial {trial}: edge {e} gap {gap:.3e} above bound {bound:.3e}")
                });
            }
        }
    }
    report
}

fn foster_sum(cfg: VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::FosterSum);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for trial in 0..cfg.trials {
        let g = gen::undirected(&mut rng, cfg.max_nodes, false);
        report.graphs += 1;
        let r = spectral::effective_resistance_all(&g).expect("undirected");
        let (_, components) = g.connected_components();
        let expect = (g.node_count() - components) as f64;
        let total: f64 = r.iter().sum();
        report.check((total - expect).abs(), FOSTER_TOL, || {
            format!("trial {trial}: resistance sum {total} != {expect}")
        });
    }
    report
}

fn q_matrix_suite(cfg: VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::QMatrix);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for trial in 0..cfg.trials {
        let g = gen::undirected(&mut rng, cfg.max_nodes, false);
        report.graphs += 1;
        let q = spectral::q_matrix(&g).expect("unweighted undirected").q;
        let r = spectral::effective_resistance_all(&g).expect("undirected");
        for (e, expect) in r.iter().enumerate() {
            report.check((q[(e, e)] - expect).abs(), Q_DIAG_TOL, || {
                format!("trial {trial}: Q[{e},{e}] != resistance")
            });
        }
        let idempotence = (&q * &q - &q).norm();
        report.check(idempotence, Q_PROJ_TOL, || {
            format!("trial {trial}: |Q^2 - Q| = {idempotence:.3e}")
        });
        let (_, components) = g.connected_components();
        let expect_trace = (g.node_count() - components) as f64;
        report.check((q.trace() - expect_trace).abs(), Q_PROJ_TOL, || {
            format!("trial {trial}: trace {} != {expect_trace}", q.trace())
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_default_config() {
        for suite in Suite::all() {
            let cfg = VerifyConfig {
                max_nodes: 12,
                trials: 8,
                seed: 99,
            };
            let report = run_suite(suite, cfg);
            assert!(
                report.ok(),
                "suite {:?} violations: {:?}",
                suite,
                report.violations
            );
            assert!(report.checks > 0);
        }
    }

    #[test]
    fn suite_tokens_round_trip() {
        for suite in Suite::all() {
            assert_eq!(Suite::from_token(suite.token()), Some(suite));
        }
        assert_eq!(Suite::from_token("nope"), None);
    }

    #[test]
    fn generators_respect_premises() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = gen::directed_all_out(&mut rng, 15, true);
            for v in 0..g.node_count() {
                assert!(!g.out_edges(v).is_empty(), "node {v} has no out-edges");
            }
            let b = gen::directed_balanced(&mut rng, 15);
            let mut in_deg = vec![0usize; b.node_count()];
            let mut out_deg = vec![0usize; b.node_count()];
            for e in b.edges() {
                out_deg[e.tail] += 1;
                in_deg[e.head] += 1;
            }
            assert_eq!(in_deg, out_deg);

            let c = gen::connected_undirected(&mut rng, 15, false);
            assert!(c.is_connected());
        }
    }
}
