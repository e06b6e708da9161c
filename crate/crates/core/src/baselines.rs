//! The comparison edge centralities: edge PageRank, edge Katz, GTOM, edge
//! betweenness, biharmonic-distance centrality, and effective resistance.
//!
//! Edge PageRank and edge Katz are recursive per-arc scores. Undirected
//! graphs are expanded to two opposite arcs per edge and the reported edge
//! score is the sum of its two arc scores, which is symmetric and independent
//! of insertion orientation.
//!
//! Edge betweenness sums over ordered source/target pairs, so undirected
//! values are twice the unordered convention.

use crate::centrality::{CentralityVector, Measure, Params};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral;

/// Default iteration cap for the recursive measures.
pub const DEFAULT_MAX_ITERS: usize = 150;

/// Default infinity-norm tolerance for the recursive measures.
pub const DEFAULT_TOL: f64 = 1e-10;

/// One directed arc of the (possibly expanded) graph.
struct Arc {
    tail: usize,
    head: usize,
    weight: f64,
    edge: usize,
}

fn expand_arcs(g: &Graph) -> Vec<Arc> {
    let mut arcs = Vec::with_capacity(if g.is_directed() {
        g.edge_count()
    } else {
        2 * g.edge_count()
    });
    for (e, edge) in g.edges().iter().enumerate() {
        arcs.push(Arc {
            tail: edge.tail,
            head: edge.head,
            weight: edge.weight,
            edge: e,
        });
        if !g.is_directed() {
            arcs.push(Arc {
                tail: edge.head,
                head: edge.tail,
                weight: edge.weight,
                edge: e,
            });
        }
    }
    arcs
}

fn collapse_arc_scores(g: &Graph, arcs: &[Arc], arc_scores: &[f64]) -> Vec<f64> {
    let mut scores = vec![0.0; g.edge_count()];
    for (arc, s) in arcs.iter().zip(arc_scores) {
        scores[arc.edge] += s;
    }
    scores
}

/// Edge PageRank: fixed point of
/// `C(u,v) = (w(u,v) / D[u,u]) * (alpha * sum of C over arcs into u + 1)`.
///
/// Iterates until the max-norm update drops below `tol` or `max_iters` is
/// reached, whichever comes first.
pub fn edge_pagerank(
    g: &Graph,
    alpha: f64,
    max_iters: usize,
    tol: f64,
) -> Result<CentralityVector> {
    check_alpha(alpha)?;
    let arcs = expand_arcs(g);
    for arc in &arcs {
        // Unreachable for well-formed graphs (the arc itself contributes to
        // its tail's out-strength), kept as a guard for the stated contract.
        if g.out_strength()[arc.tail] <= 0.0 {
            return Err(Error::EdgeUndefined {
                index: arc.edge,
                tail: arc.tail,
                head: arc.head,
                reason: "tail has zero out-strength, the PageRank ratio is undefined",
            });
        }
    }
    let (scores, iterations, _) = iterate_recursive(g, &arcs, alpha, max_iters, tol, true);
    Ok(CentralityVector::new(
        collapse_arc_scores(g, &arcs, &scores),
        Measure::EdgePageRank,
        Params {
            alpha: Some(alpha),
            iterations: Some(iterations),
            ..Params::default()
        },
    ))
}

/// Edge Katz: fixed point of
/// `C(u,v) = w(u,v) * (alpha * sum of C over arcs into u + 1)`.
///
/// The recurrence only has a fixed point when `alpha * spectral_radius(A)`
/// is below 1; runaway iterations are reported as [`Error::KatzDivergence`].
pub fn edge_katz(g: &Graph, alpha: f64, max_iters: usize, tol: f64) -> Result<CentralityVector> {
    check_alpha(alpha)?;
    let arcs = expand_arcs(g);
    let (scores, iterations, status) = iterate_recursive(g, &arcs, alpha, max_iters, tol, false);
    match status {
        RecursiveStatus::Converged => Ok(CentralityVector::new(
            collapse_arc_scores(g, &arcs, &scores),
            Measure::EdgeKatz,
            Params {
                alpha: Some(alpha),
                iterations: Some(iterations),
                ..Params::default()
            },
        )),
        RecursiveStatus::ResidualGrowth => Err(Error::KatzDivergence {
            detail: format!(
                "update norm non-decreasing for 10 consecutive iterations after iteration {iterations}"
            ),
        }),
        RecursiveStatus::CapReached { residual } => Err(Error::KatzDivergence {
            detail: format!(
                "no convergence after {max_iters} iterations, last update norm {residual:.3e}"
            ),
        }),
    }
}

enum RecursiveStatus {
    Converged,
    ResidualGrowth,
    CapReached { residual: f64 },
}

fn iterate_recursive(
    g: &Graph,
    arcs: &[Arc],
    alpha: f64,
    max_iters: usize,
    tol: f64,
    pagerank_scaling: bool,
) -> (Vec<f64>, usize, RecursiveStatus) {
    let n = g.node_count();
    let d = g.out_strength();
    let mut scores = vec![0.0; arcs.len()];
    let mut incoming = vec![0.0; n];
    // Residual transients can last about one graph diameter; only call a
    // non-decreasing residual divergent after that burn-in.
    let burn_in = n;
    let mut prev_delta = f64::INFINITY;
    let mut growth_streak = 0usize;
    for iteration in 1..=max_iters {
        incoming.fill(0.0);
        for (arc, s) in arcs.iter().zip(&scores) {
            incoming[arc.head] += s;
        }
        let mut delta = 0.0f64;
        for (arc, s) in arcs.iter().zip(scores.iter_mut()) {
            let base = alpha * incoming[arc.tail] + 1.0;
            let next = if pagerank_scaling {
                arc.weight / d[arc.tail] * base
            } else {
                arc.weight * base
            };
            delta = delta.max((next - *s).abs());
            *s = next;
        }
        if delta <= tol {
            return (scores, iteration, RecursiveStatus::Converged);
        }
        if iteration > burn_in && delta >= prev_delta * (1.0 - 1e-12) {
            growth_streak += 1;
            if growth_streak >= 10 {
                return (scores, iteration, RecursiveStatus::ResidualGrowth);
            }
        } else {
            growth_streak = 0;
        }
        prev_delta = delta;
    }
    let status = RecursiveStatus::CapReached {
        residual: prev_delta,
    };
    (scores, max_iters, status)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "alpha",
            value: alpha,
        });
    }
    Ok(())
}

/// Generalized topological overlap of each edge:
/// `(|N+(u) & N+(v)| + 1) / min(|N+(u)|, |N+(v)|)`. Unweighted graphs only;
/// for undirected graphs N+ is the plain neighbor set.
pub fn gtom(g: &Graph) -> Result<CentralityVector> {
    if !g.is_unweighted() {
        return Err(Error::WeightedInput);
    }
    let sets = g.out_neighbor_sets();
    let mut scores = Vec::with_capacity(g.edge_count());
    for (e, edge) in g.edges().iter().enumerate() {
        let (a, b) = (&sets[edge.tail], &sets[edge.head]);
        let min_degree = a.len().min(b.len());
        if min_degree == 0 {
            return Err(Error::EdgeUndefined {
                index: e,
                tail: edge.tail,
                head: edge.head,
                reason: "an endpoint has no outgoing neighbors, GTOM is undefined",
            });
        }
        let common = count_common(a, b);
        scores.push((common as f64 + 1.0) / min_degree as f64);
    }
    Ok(CentralityVector::new(
        scores,
        Measure::Gtom,
        Params::default(),
    ))
}

fn count_common(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Edge betweenness over ordered node pairs: the fraction of shortest paths
/// through each edge, accumulated with one BFS and one dependency pass per
/// source. Unreachable pairs contribute nothing.
pub fn edge_betweenness(g: &Graph) -> CentralityVector {
    let n = g.node_count();
    let mut scores = vec![0.0; g.edge_count()];
    let mut dist = vec![-1i64; n];
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();

    for s in 0..n {
        dist.fill(-1);
        sigma.fill(0.0);
        delta.fill(0.0);
        for p in preds.iter_mut() {
            p.clear();
        }
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &e in g.out_edges(v) {
                let edge = g.edge(e);
                let w = if edge.tail == v { edge.head } else { edge.tail };
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push((v, e));
                }
            }
        }
        for &w in order.iter().rev() {
            for &(v, e) in &preds[w] {
                let credit = sigma[v] / sigma[w] * (1.0 + delta[w]);
                scores[e] += credit;
                delta[v] += credit;
            }
        }
    }
    CentralityVector::new(scores, Measure::EdgeBetweenness, Params::default())
}

/// Biharmonic-distance centrality:
/// `w(u,v)^2 * ((L+)^2[u,u] + (L+)^2[v,v] - 2 (L+)^2[u,v])`.
/// Unlike effective resistance this separates cut edges. Undirected only.
pub fn bdrc(g: &Graph) -> Result<CentralityVector> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    let pinv = spectral::pinv_laplacian(&g.laplacian()?)?.pinv;
    let p2 = &pinv * &pinv;
    let scores = g
        .edges()
        .iter()
        .map(|e| {
            e.weight
                * e.weight
                * (p2[(e.tail, e.tail)] + p2[(e.head, e.head)] - 2.0 * p2[(e.tail, e.head)])
        })
        .collect();
    Ok(CentralityVector::new(
        scores,
        Measure::Bdrc,
        Params::default(),
    ))
}

/// Effective resistance of each edge as a centrality vector.
pub fn effective_resistance_centrality(g: &Graph) -> Result<CentralityVector> {
    let scores = spectral::effective_resistance_all(g)?;
    Ok(CentralityVector::new(
        scores,
        Measure::EffectiveResistance,
        Params::default(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn k3() -> Graph {
        Graph::new(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], false).unwrap()
    }

    fn c4() -> Graph {
        Graph::new(&[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)], false).unwrap()
    }

    #[test]
    fn pagerank_directed_cycle_and_path() {
        let cycle = Graph::new(&[(0, 1, 1.0), (1, 0, 1.0)], true).unwrap();
        let c = edge_pagerank(&cycle, 0.5, DEFAULT_MAX_ITERS, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(c.scores[0], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.scores[1], 2.0, epsilon = 1e-9);

        let path = Graph::new(&[(0, 1, 1.0), (1, 2, 1.0)], true).unwrap();
        let c = edge_pagerank(&path, 0.5, DEFAULT_MAX_ITERS, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(c.scores[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.scores[1], 1.5, epsilon = 1e-9);
    }

    #[test]
    fn pagerank_undirected_edge_is_arc_sum() {
        let g = Graph::new(&[(0, 1, 1.0)], false).unwrap();
        let c = edge_pagerank(&g, 0.5, DEFAULT_MAX_ITERS, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(c.scores[0], 4.0, epsilon = 1e-9);
    }

    #[test]
    fn pagerank_fixed_point_satisfies_recurrence() {
        let g = Graph::new(&[(0, 1, 2.0), (1, 2, 1.0), (2, 0, 0.5), (0, 2, 1.0)], true).unwrap();
        let c = edge_pagerank(&g, 0.5, DEFAULT_MAX_ITERS, DEFAULT_TOL).unwrap();
        let d = g.out_strength();
        for (e, edge) in g.edges().iter().enumerate() {
            let incoming: f64 = g
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, other)| other.head == edge.tail)
                .map(|(i, _)| c.scores[i])
                .sum();
            let expect = edge.weight / d[edge.tail] * (0.5 * incoming + 1.0);
            assert_abs_diff_eq!(c.scores[e], expect, epsilon = 10.0 * DEFAULT_TOL);
        }
    }

    #[test]
    fn katz_directed_cases() {
        let path = Graph::new(&[(0, 1, 1.0), (1, 2, 1.0)], true).unwrap();
        let c = edge_katz(&path, 0.5, DEFAULT_MAX_ITERS, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(c.scores[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.scores[1], 1.5, epsilon = 1e-9);

        let cycle = Graph::new(&[(0, 1, 1.0), (1, 0, 1.0)], true).unwrap();
        let c = edge_katz(&cycle, 0.5, DEFAULT_MAX_ITERS, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(c.scores[0], 2.0, epsilon = 1e-9);
    }

    #[test]
    fn katz_reports_divergence_on_triangle_at_half() {
        // Bidirected K3 has adjacency spectral radius 2, so alpha = 0.5 sits
        // exactly on the divergence boundary.
        let err = edge_katz(&k3(), 0.5, DEFAULT_MAX_ITERS, DEFAULT_TOL).unwrap_err();
        assert!(matches!(err, Error::KatzDivergence { .. }));
        assert!(err.to_string().contains("spectral_radius"));
    }

    #[test]
    fn katz_converges_below_the_boundary() {
        let c = edge_katz(&k3(), 0.4, DEFAULT_MAX_ITERS, DEFAULT_TOL).unwrap();
        // Symmetric fixed point: every arc solves C = 0.4 * 2C + 1 = 5, and
        // an undirected edge reports the sum of its two arcs.
        for s in &c.scores {
            assert_abs_diff_eq!(*s, 10.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn gtom_reference_values() {
        assert_abs_diff_eq!(gtom(&k3()).unwrap().scores[0], 1.0);
        assert_abs_diff_eq!(gtom(&c4()).unwrap().scores[0], 0.5);

        let star = Graph::new(&[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], false).unwrap();
        for s in gtom(&star).unwrap().scores {
            assert_abs_diff_eq!(s, 1.0);
        }
    }

    #[test]
    fn gtom_rejects_weighted_and_dead_end() {
        let g = Graph::new(&[(0, 1, 2.0)], false).unwrap();
        assert!(matches!(gtom(&g), Err(Error::WeightedInput)));

        let dead_end = Graph::new(&[(0, 1, 1.0)], true).unwrap();
        assert!(matches!(gtom(&dead_end), Err(Error::EdgeUndefined { .. })));
    }

    #[test]
    fn betweenness_reference_values() {
        let p3 = Graph::new(&[(0, 1, 1.0), (1, 2, 1.0)], false).unwrap();
        assert_abs_diff_eq!(edge_betweenness(&p3).scores[0], 4.0, epsilon = 1e-12);

        for s in edge_betweenness(&k3()).scores {
            assert_abs_diff_eq!(s, 2.0, epsilon = 1e-12);
        }
        for s in edge_betweenness(&c4()).scores {
            assert_abs_diff_eq!(s, 4.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn betweenness_directed_respects_arcs() {
        // 0 -> 1 -> 2: ordered pairs (0,1), (0,2), (1,2) have paths.
        let g = Graph::new(&[(0, 1, 1.0), (1, 2, 1.0)], true).unwrap();
        let c = edge_betweenness(&g);
        assert_abs_diff_eq!(c.scores[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.scores[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn bdrc_single_edge() {
        let g = Graph::new(&[(0, 1, 1.0)], false).unwrap();
        assert_abs_diff_eq!(bdrc(&g).unwrap().scores[0], 0.5, epsilon = 1e-10);
    }

    #[test]
    fn bdrc_triangle_symmetric() {
        let c = bdrc(&k3()).unwrap();
        assert_abs_diff_eq!(c.scores[0], c.scores[1], epsilon = 1e-12);
        assert_abs_diff_eq!(c.scores[1], c.scores[2], epsilon = 1e-12);
    }

    #[test]
    fn bdrc_separates_cut_edges_resistance_cannot() {
        let p4 = Graph::new(&[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], false).unwrap();
        let r = spectral::effective_resistance_all(&p4).unwrap();
        assert_abs_diff_eq!(r[0], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r[1], 1.0, epsilon = 1e-10);
        let b = bdrc(&p4).unwrap().scores;
        assert!(
            (b[0] - b[1]).abs() > 1e-6,
            "expected distinct cut-edge scores, got {} and {}",
            b[0],
            b[1]
        );
    }

    #[test]
    fn resistance_centrality_delegates() {
        let c = effective_resistance_centrality(&c4()).unwrap();
        for s in c.scores {
            assert_abs_diff_eq!(s, 0.75, epsilon = 1e-12);
        }
    }
}
