//! The edge-wise random walk with restart and the centrality built on it.
//!
//! A walker sits on an edge. Each step it stops with probability `1 - alpha`;
//! otherwise it jumps to an incident node (the head for a directed edge,
//! either endpoint with probability 1/2 for an undirected one) and leaves that
//! node along an out-edge chosen proportionally to edge weight. The resulting
//! edge-to-edge transition matrix is
//!
//! ```text
//! P = JumpNorm^T . D^{-1} . TailIncidence      (m x m, never materialized)
//! ```
//!
//! and the centrality of an edge is the weighted sum of walk-absorption
//! probabilities into it from every source edge, each source weighted by
//! `w(e) / sqrt(D[u,u] + D[v,v])`. The power iteration computes the truncated
//! geometric series of `alpha P` against that source vector; the dense solver
//! evaluates the full series exactly for cross-checking at desk scale.
//!
//! A node with no out-edges absorbs jump mass (its `D^{-1}` entry is treated
//! as zero), making `P` sub-stochastic; the iteration still converges since
//! every term keeps the `alpha^l` damping.

use crate::centrality::{CentralityVector, Measure, Params};
use crate::error::{Error, Result};
use crate::graph::Graph;
use nalgebra::{DMatrix, DVector};

/// Largest edge count accepted by the dense exact solver.
pub const DENSE_SOLVE_MAX_EDGES: usize = 2000;

/// Iteration cap applied when an iteration count is derived from an accuracy
/// target rather than given explicitly.
pub const ITERATION_CAP: usize = 150;

/// The edge-to-edge walk operator, applied as two sparse passes through a
/// node buffer. Immutable and cheap to share.
///
/// The hot loop streams flat two-slot arrays instead of walking the
/// incidence views: every edge scatters to two (node, probability) jump
/// slots and gathers from two departure slots, with a sentinel node (whose
/// buffer entry stays zero) filling the unused slot of directed edges. This
/// keeps the inner loop branch-free without changing any rounding: the
/// sentinel contributes `+ 0.0` exactly.
#[derive(Debug, Clone)]
pub struct TransitionOperator {
    edge_count: usize,
    jump_nodes: Vec<[u32; 2]>,
    /// Probability carried by each jump slot; uniform across the graph
    /// ((1, 0) directed with a sentinel second slot, (1/2, 1/2) undirected).
    jump_probs: [f64; 2],
    gather_nodes: Vec<[u32; 2]>,
    weights: Vec<f64>,
    /// 1 / D[v,v] where positive, 0 for nodes without out-edges, with a
    /// trailing zero for the sentinel slot.
    inv_strength: Vec<f64>,
}

impl TransitionOperator {
    pub fn new(g: &Graph) -> TransitionOperator {
        let m = g.edge_count();
        let sentinel = g.node_count() as u32;
        let jump_probs = if g.is_directed() {
            [1.0, 0.0]
        } else {
            [0.5, 0.5]
        };
        let mut jump_nodes = Vec::with_capacity(m);
        let mut gather_nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for e in g.edges() {
            weights.push(e.weight);
            if g.is_directed() {
                jump_nodes.push([e.head as u32, sentinel]);
                gather_nodes.push([e.tail as u32, sentinel]);
            } else {
                jump_nodes.push([e.tail as u32, e.head as u32]);
                gather_nodes.push([e.tail as u32, e.head as u32]);
            }
        }
        let mut inv_strength: Vec<f64> = g
            .out_strength()
            .iter()
            .map(|&d| if d > 0.0 { 1.0 / d } else { 0.0 })
            .collect();
        inv_strength.push(0.0);
        TransitionOperator {
            edge_count: m,
            jump_nodes,
            jump_probs,
            gather_nodes,
            weights,
            inv_strength,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// One update of the damped walk iteration: `alpha * (z P) + x`.
    ///
    /// `z` and `x` are row vectors of length m. Runs in O(m) time and O(n)
    /// scratch; output order is fixed, so results are bitwise deterministic.
    pub fn apply(&self, z: &[f64], x: &[f64], alpha: f64) -> Result<Vec<f64>> {
        let m = self.edge_count();
        if z.len() != m {
            return Err(Error::LengthMismatch {
                got: z.len(),
                expected: m,
            });
        }
        if x.len() != m {
            return Err(Error::LengthMismatch {
                got: x.len(),
                expected: m,
            });
        }
        let mut out = vec![0.0; m];
        let mut scratch = Vec::new();
        self.apply_into(z, x, alpha, &mut out, &mut scratch);
        Ok(out)
    }

    /// Allocation-free variant of [`TransitionOperator::apply`] for the inner
    /// loop; `scratch` is resized as needed and reusable across calls.
    pub fn apply_into(
        &self,
        z: &[f64],
        x: &[f64],
        alpha: f64,
        out: &mut [f64],
        scratch: &mut Vec<f64>,
    ) {
        scratch.clear();
        scratch.resize(self.inv_strength.len(), 0.0);
        let buf = scratch.as_mut_slice();
        // Scatter: node mass received by each jump target.
        let [p0, p1] = self.jump_probs;
        for (&mass, nodes) in z.iter().zip(&self.jump_nodes) {
            buf[nodes[0] as usize] += p0 * mass;
            buf[nodes[1] as usize] += p1 * mass;
        }
        for (b, inv) in buf.iter_mut().zip(&self.inv_strength) {
            *b *= inv;
        }
        // Gather: every edge drains its departure nodes proportionally to w(e).
        for (((o, &xe), nodes), &w) in out
            .iter_mut()
            .zip(x)
            .zip(&self.gather_nodes)
            .zip(&self.weights)
        {
            let gathered = buf[nodes[0] as usize] + buf[nodes[1] as usize];
            *o = alpha * w * gathered + xe;
        }
    }

    /// Row `e` of the transition matrix P.
    pub fn row(&self, e: usize) -> Result<Vec<f64>> {
        let m = self.edge_count();
        if e >= m {
            return Err(Error::EdgeOutOfRange { index: e, m });
        }
        let mut unit = vec![0.0; m];
        unit[e] = 1.0;
        self.apply(&unit, &vec![0.0; m], 1.0)
    }

    /// Dense materialization of P; oracle scale only.
    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        let m = self.edge_count();
        if m > DENSE_SOLVE_MAX_EDGES {
            return Err(Error::OracleLimit {
                what: "dense transition matrix",
                limit: DENSE_SOLVE_MAX_EDGES,
                unit: "edges",
                got: m,
            });
        }
        let mut p = DMatrix::zeros(m, m);
        for e in 0..m {
            let row = self.row(e)?;
            for (j, v) in row.into_iter().enumerate() {
                p[(e, j)] = v;
            }
        }
        Ok(p)
    }
}

/// Source weight of every edge: `w(e) / sqrt(D[u,u] + D[v,v])`. On unweighted
/// graphs this is `1 / sqrt(d(u) + d(v))` counting out-degrees.
pub fn source_weights(g: &Graph) -> Vec<f64> {
    let d = g.out_strength();
    g.edges()
        .iter()
        .map(|e| e.weight / (d[e.tail] + d[e.head]).sqrt())
        .collect()
}

/// Smallest iteration count `t` with `alpha^(t+1) <= epsilon`, which makes the
/// truncated series differ from the full one by at most `epsilon` in total
/// walk mass.
pub fn iterations_for_epsilon(alpha: f64, epsilon: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "alpha",
            value: alpha,
        });
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "epsilon",
            value: epsilon,
        });
    }
    let mut t = ((epsilon.ln() / alpha.ln()).ceil() - 1.0).max(0.0) as usize;
    // Guard the ceiling against boundary rounding in the logarithms.
    while alpha.powi(t as i32 + 1) > epsilon {
        t += 1;
    }
    while t > 0 && alpha.powi(t as i32) <= epsilon {
        t -= 1;
    }
    Ok(t)
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

/// Iterative edge centrality: `(1 - alpha) * sum_{l=0..t} alpha^l x P^l` per
/// edge. O(m t) time, O(m + n) memory, deterministic.
pub fn edgerake_approx(g: &Graph, alpha: f64, iterations: usize) -> Result<CentralityVector> {
    check_alpha(alpha)?;
    let op = TransitionOperator::new(g);
    let x = source_weights(g);
    let mut z = x.clone();
    let mut next = vec![0.0; x.len()];
    let mut scratch = Vec::new();
    for _ in 0..iterations {
        op.apply_into(&z, &x, alpha, &mut next, &mut scratch);
        std::mem::swap(&mut z, &mut next);
    }
    let scores = z.iter().map(|v| (1.0 - alpha) * v).collect();
    Ok(CentralityVector::new(
        scores,
        Measure::EdgeRake,
        Params {
            alpha: Some(alpha),
            iterations: Some(iterations),
            ..Params::default()
        },
    ))
}

/// Exact edge centrality via the dense linear system `z (I - alpha P) = x`.
/// Oracle scale (m <= [`DENSE_SOLVE_MAX_EDGES`]).
pub fn edgerake_exact(g: &Graph, alpha: f64) -> Result<CentralityVector> {
    check_alpha(alpha)?;
    let x = source_weights(g);
    let z = solve_series(g, alpha, &x)?;
    let scores = z.iter().map(|v| (1.0 - alpha) * v).collect();
    Ok(CentralityVector::new(
        scores,
        Measure::EdgeRake,
        Params {
            alpha: Some(alpha),
            ..Params::default()
        },
    ))
}

/// Walk-absorption probabilities from a single source edge into every edge:
/// `(1 - alpha) * sum_l alpha^l P^l [source, .]`. Solved densely at oracle
/// scale, by truncated iteration beyond it.
pub fn erwr_scores(g: &Graph, alpha: f64, source: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let m = g.edge_count();
    if source >= m {
        return Err(Error::EdgeOutOfRange { index: source, m });
    }
    let mut x = vec![0.0; m];
    x[source] = 1.0;
    let z = if m <= DENSE_SOLVE_MAX_EDGES {
        solve_series(g, alpha, &x)?
    } else {
        let op = TransitionOperator::new(g);
        let t = iterations_for_epsilon(alpha, 1e-12)?;
        let mut z = x.clone();
        let mut next = vec![0.0; m];
        let mut scratch = Vec::new();
        for _ in 0..t {
            op.apply_into(&z, &x, alpha, &mut next, &mut scratch);
            std::mem::swap(&mut z, &mut next);
        }
        z
    };
    Ok(z.iter().map(|v| (1.0 - alpha) * v).collect())
}

/// Solves `z (I - alpha P) = x` for the row vector `z` with a dense LU
/// factorization of the transposed system.
fn solve_series(g: &Graph, alpha: f64, x: &[f64]) -> Result<Vec<f64>> {
    let m = g.edge_count();
    if m > DENSE_SOLVE_MAX_EDGES {
        return Err(Error::OracleLimit {
            what: "dense walk solve",
            limit: DENSE_SOLVE_MAX_EDGES,
            unit: "edges",
            got: m,
        });
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let op = TransitionOperator::new(g);
    // (I - alpha P)^T z^T = x^T; build the transpose column by column.
    let mut system = DMatrix::identity(m, m);
    for e in 0..m {
        let row = op.row(e)?;
        for (j, v) in row.into_iter().enumerate() {
            system[(j, e)] -= alpha * v;
        }
    }
    let rhs = DVector::from_column_slice(x);
    let solution = system
        .lu()
        .solve(&rhs)
        .expect("I - alpha P is nonsingular for alpha in (0,1)");
    Ok(solution.iter().copied().collect())
}
