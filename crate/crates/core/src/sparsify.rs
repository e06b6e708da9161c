//! Resistance-proportional edge sampling and the sparsified Laplacian.
//!
//! Edges are drawn i.i.d. with probability proportional to their leverage
//! `w(e) * r(e)` (plain `r(e) / (n - 1)` on unweighted graphs, where the
//! probabilities already sum to 1 because edge resistances of a connected
//! graph sum to n - 1). Each sampled edge is reweighted by
//! `count / (n_s * p_e) * w(e)`, which makes the sparsified Laplacian
//! `L' = B^T S B` an unbiased estimator of L.
//!
//! The literal reweighting `(count / n_s) * (r(e) / (n - 1))` is available
//! behind [`Reweighting::Literal`] for comparison; it is biased and is not
//! the default.
//!
//! Sampling stream: one ChaCha8 generator seeded with the given 64-bit seed;
//! each draw consumes one uniform integer in `[0, m)` and one uniform `f64`
//! from that stream, in that order, fed through a Vose alias table.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::incidence::IncidenceBundle;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// How sampled edges are reweighted into the diagonal of S.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reweighting {
    /// Importance-sampling weights `count / (n_s * p_e) * w(e)`; makes
    /// `E[L'] = L`.
    #[default]
    Unbiased,
    /// The plain product `(count / n_s) * (r(e) / (n - 1))`.
    Literal,
}

/// Outcome of one sampling run.
#[derive(Debug, Clone)]
pub struct SparsifierSample {
    /// Per-edge sampling probability.
    pub probabilities: Vec<f64>,
    /// Per-edge draw counts; sums to `n_s`.
    pub counts: Vec<u64>,
    pub n_s: u64,
    pub seed: u64,
    /// Diagonal of S: the reweighted edge weights, zero where never drawn.
    pub sparse_weights: Vec<f64>,
    /// `L' = B^T S B`, symmetric PSD with the all-ones vector in its kernel.
    pub sparsified_laplacian: DMatrix<f64>,
}

impl SparsifierSample {
    /// The reweighted graph: sampled edges only, carrying their S weights.
    pub fn sparsified_graph(&self, g: &Graph) -> Result<Graph> {
        let triples: Vec<(usize, usize, f64)> = g
            .edges()
            .iter()
            .zip(&self.sparse_weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(e, &w)| (e.tail, e.head, w))
            .collect();
        Graph::with_nodes(&triples, false, g.node_count())
    }

    /// Edge indices of `g` that were drawn at least once.
    pub fn support(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(e, _)| e)
            .collect()
    }
}

/// Per-edge sampling probabilities: `r(e) / (n - 1)` on unweighted graphs,
/// normalized leverage `w(e) * r(e)` on weighted ones. Requires a connected
/// undirected graph.
pub fn sampling_probabilities(g: &Graph) -> Result<Vec<f64>> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let resistance = crate::spectral::effective_resistance_all(g)?;
    if g.is_unweighted() {
        let denom = (g.node_count() - 1) as f64;
        return Ok(resistance.iter().map(|r| r / denom).collect());
    }
    let leverage: Vec<f64> = g
        .edges()
        .iter()
        .zip(&resistance)
        .map(|(e, r)| e.weight * r)
        .collect();
    let total: f64 = leverage.iter().sum();
    Ok(leverage.iter().map(|l| l / total).collect())
}

/// Draws `n_s` edges with replacement and builds the sparsified Laplacian
/// with unbiased reweighting. Deterministic for a fixed seed.
pub fn sparsify(g: &Graph, n_s: u64, seed: u64) -> Result<SparsifierSample> {
    sparsify_with(g, n_s, seed, Reweighting::Unbiased)
}

pub fn sparsify_with(
    g: &Graph,
    n_s: u64,
    seed: u64,
    reweighting: Reweighting,
) -> Result<SparsifierSample> {
    if n_s == 0 {
        return Err(Error::EmptySample);
    }
    let probabilities = sampling_probabilities(g)?;
    let table = AliasTable::new(&probabilities)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; g.edge_count()];
    for _ in 0..n_s {
        counts[table.sample(&mut rng)] += 1;
    }
    Ok(assemble(g, probabilities, counts, n_s, seed, reweighting))
}

/// Builds the sample result from explicit draw counts. Split out so concrete
/// draw sequences can be evaluated without going through the RNG.
pub fn sample_from_counts(
    g: &Graph,
    n_s: u64,
    counts: Vec<u64>,
    reweighting: Reweighting,
) -> Result<SparsifierSample> {
    if n_s == 0 {
        return Err(Error::EmptySample);
    }
    if counts.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            got: counts.len(),
            expected: g.edge_count(),
        });
    }
    let probabilities = sampling_probabilities(g)?;
    Ok(assemble(g, probabilities, counts, n_s, 0, reweighting))
}

fn assemble(
    g: &Graph,
    probabilities: Vec<f64>,
    counts: Vec<u64>,
    n_s: u64,
    seed: u64,
    reweighting: Reweighting,
) -> SparsifierSample {
    let literal_factor: Vec<f64> = match reweighting {
        Reweighting::Unbiased => Vec::new(),
        Reweighting::Literal => {
            let denom = (g.node_count().max(2) - 1) as f64;
            crate::spectral::effective_resistance_all(g)
                .expect("probabilities already required an undirected graph")
                .iter()
                .map(|r| r / denom)
                .collect()
        }
    };
    let sparse_weights: Vec<f64> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            if counts[e] == 0 {
                return 0.0;
            }
            let frequency = counts[e] as f64 / n_s as f64;
            match reweighting {
                Reweighting::Unbiased => frequency / probabilities[e] * edge.weight,
                Reweighting::Literal => frequency * literal_factor[e],
            }
        })
        .collect();
    let bundle = IncidenceBundle::new(g);
    let n = g.node_count();
    let mut laplacian = DMatrix::zeros(n, n);
    for (e, &s) in sparse_weights.iter().enumerate() {
        if s == 0.0 {
            continue;
        }
        let (tail, head) = bundle.signed_row(e);
        laplacian[(tail, head)] -= s;
        laplacian[(head, tail)] -= s;
    }
    // Diagonal as the exact negation of each row's off-diagonal sum, so the
    // all-ones vector stays in the kernel to the last bit.
    for v in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if j != v {
                row_sum += laplacian[(v, j)];
            }
        }
        laplacian[(v, v)] = -row_sum;
    }
    SparsifierSample {
        probabilities,
        counts,
        n_s,
        seed,
        sparse_weights,
        sparsified_laplacian: laplacian,
    }
}

/// Vose alias table for O(1) categorical draws.
#[derive(Debug, Clone)]
pub struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    pub fn new(weights: &[f64]) -> Result<AliasTable> {
        let total: f64 = weights.iter().sum();
        let malformed = weights.iter().any(|w| *w < 0.0 || !w.is_finite());
        if weights.is_empty() || malformed || total <= 0.0 {
            return Err(Error::BadSampleWeights);
        }
        let k = weights.len();
        let mut scaled: Vec<f64> = weights.iter().map(|w| w / total * k as f64).collect();
        let mut prob = vec![0.0; k];
        let mut alias = vec![0usize; k];
        let mut small: Vec<usize> = (0..k).filter(|&i| scaled[i] < 1.0).collect();
        let mut large: Vec<usize> = (0..k).filter(|&i| scaled[i] >= 1.0).collect();
        loop {
            match (small.pop(), large.pop()) {
                (Some(s), Some(l)) => {
                    prob[s] = scaled[s];
                    alias[s] = l;
                    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
                    if scaled[l] < 1.0 {
                        small.push(l);
                    } else {
                        large.push(l);
                    }
                }
                // Leftovers on either side sit at 1 up to rounding.
                (Some(i), None) | (None, Some(i)) => {
                    prob[i] = 1.0;
                    alias[i] = i;
                }
                (None, None) => break,
            }
        }
        Ok(AliasTable { prob, alias })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let column = rng.gen_range(0..self.prob.len());
        if rng.gen::<f64>() < self.prob[column] {
            column
        } else {
            self.alias[column]
        }
    }
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
    fn probabilities_on_reference_graphs() {
        for p in sampling_probabilities(&k3()).unwrap() {
            assert_abs_diff_eq!(p, 1.0 / 3.0, epsilon = 1e-12);
        }
        for p in sampling_probabilities(&c4()).unwrap() {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-12);
        }
        // Any tree: all cut edges, uniform 1/(n-1).
        let tree =
            Graph::new(&[(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (3, 4, 1.0)], false).unwrap();
        for p in sampling_probabilities(&tree).unwrap() {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-10);
        }
    }

    #[test]
    fn probabilities_reject_disconnected() {
        let g = Graph::new(&[(0, 1, 1.0), (2, 3, 1.0)], false).unwrap();
        assert!(matches!(
            sampling_probabilities(&g),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn zero_draws_rejected() {
        assert!(matches!(sparsify(&k3(), 0, 1), Err(Error::EmptySample)));
    }

    #[test]
    fn concrete_draw_sequence_all_on_one_edge() {
        // Three draws landing on edge 0 with p = 1/3 reweight it to
        // 3 / (3 * 1/3) = 3, so L' is three times the single-edge Laplacian.
        let sample = sample_from_counts(&k3(), 3, vec![3, 0, 0], Reweighting::Unbiased).unwrap();
        assert_abs_diff_eq!(sample.sparse_weights[0], 3.0, epsilon = 1e-12);
        assert_eq!(sample.sparse_weights[1], 0.0);
        let expect =
            DMatrix::from_row_slice(3, 3, &[3.0, -3.0, 0.0, -3.0, 3.0, 0.0, 0.0, 0.0, 0.0]);
        assert!((&sample.sparsified_laplacian - expect).norm() <= 1e-12);
    }

    #[test]
    fn identical_seed_identical_counts() {
        let a = sparsify(&c4(), 5000, 42).unwrap();
        let b = sparsify(&c4(), 5000, 42).unwrap();
        assert_eq!(a.counts, b.counts);
        let c = sparsify(&c4(), 5000, 43).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn counts_sum_and_support_match_weights() {
        let s = sparsify(&k3(), 1000, 7).unwrap();
        assert_eq!(s.counts.iter().sum::<u64>(), 1000);
        for (c, w) in s.counts.iter().zip(&s.sparse_weights) {
            assert_eq!(*c == 0, *w == 0.0);
        }
    }

    #[test]
    fn ones_vector_in_kernel() {
        let s = sparsify(&c4(), 100, 11).unwrap();
        let l = &s.sparsified_laplacian;
        for v in 0..4 {
            let off_sum: f64 = (0..4).filter(|&j| j != v).map(|j| l[(v, j)]).sum();
            assert_eq!(off_sum + l[(v, v)], 0.0, "row {v} escapes the kernel");
        }
    }

    #[test]
    fn weighted_leverage_sampling_is_unbiased() {
        // Weighted graphs sample by normalized w(e) * r(e); the estimator
        // must still average back to the true Laplacian.
        let g = Graph::new(
            &[
                (0, 1, 3.0),
                (1, 2, 0.5),
                (2, 3, 2.0),
                (3, 0, 1.0),
                (0, 2, 4.0),
            ],
            false,
        )
        .unwrap();
        let l = g.laplacian().unwrap();
        let mut mean = DMatrix::<f64>::zeros(4, 4);
        let reps = 10u64;
        for rep in 0..reps {
            let s = sparsify(&g, 50_000, 9000 + rep).unwrap();
            mean += &s.sparsified_laplacian;
        }
        mean /= reps as f64;
        let rel = (&mean - &l).norm() / l.norm();
        assert!(rel <= 0.02, "relative bias {rel:.4}");
    }

    #[test]
    fn sparsified_laplacian_is_symmetric_psd() {
        let s = sparsify(&c4(), 250, 5).unwrap();
        let l = &s.sparsified_laplacian;
        assert_eq!(l, &l.transpose());
        let eig = crate::spectral::symmetric_eigen(l);
        for lambda in &eig.eigenvalues {
            assert!(*lambda >= -1e-12, "negative eigenvalue {lambda}");
        }
    }

    #[test]
    fn weighted_leverage_normalizes() {
        let g = Graph::new(&[(0, 1, 3.0), (1, 2, 1.0), (0, 2, 0.5)], false).unwrap();
        let p = sampling_probabilities(&g).unwrap();
        assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert!(p.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn alias_table_matches_probabilities_in_expectation() {
        let table = AliasTable::new(&[0.5, 0.25, 0.25]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut hits = [0u64; 3];
        let draws = 200_000;
        for _ in 0..draws {
            hits[table.sample(&mut rng)] += 1;
        }
        assert_abs_diff_eq!(hits[0] as f64 / draws as f64, 0.5, epsilon = 0.01);
        assert_abs_diff_eq!(hits[1] as f64 / draws as f64, 0.25, epsilon = 0.01);
    }

    #[test]
    fn alias_rejects_bad_weights() {
        assert!(AliasTable::new(&[]).is_err());
        assert!(AliasTable::new(&[0.0, 0.0]).is_err());
        assert!(AliasTable::new(&[1.0, -0.5]).is_err());
    }

    #[test]
    fn literal_reweighting_shrinks_weights() {
        // With every edge drawn at its expected frequency, the literal rule
        // yields p_e^2 * (n-1) style weights, far below the graph's own.
        let s = sample_from_counts(&k3(), 300, vec![100, 100, 100], Reweighting::Literal).unwrap();
        for w in &s.sparse_weights {
            assert!(*w < 1.0);
        }
        let u = sample_from_counts(&k3(), 300, vec![100, 100, 100], Reweighting::Unbiased).unwrap();
        for w in &u.sparse_weights {
            assert_abs_diff_eq!(*w, 1.0, epsilon = 1e-12);
        }
    }
}
