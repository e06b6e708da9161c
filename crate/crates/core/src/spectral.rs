//! Desk-scale dense spectral computations: Laplacian pseudo-inverse,
//! effective resistance, the incidence projection matrix Q, an exact
//! spanning-tree-counting oracle, and spectral resistance bounds.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::incidence::IncidenceBundle;
use nalgebra::DMatrix;

/// Largest graph accepted by the exact spanning-tree oracle. Integer
/// determinants stay within i128 up to this size.
pub const TREE_ORACLE_MAX_NODES: usize = 12;

/// Relative eigenvalue cutoff below which eigenvalues count as zero.
pub const EIGEN_CUTOFF: f64 = 1e-10;

const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Eigenvalues and orthonormal eigenvector columns of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

/// Cyclic Jacobi eigendecomposition for symmetric matrices.
///
/// Graph Laplacians routinely carry degenerate spectra (one zero per
/// component, repeated eigenvalues on symmetric graphs), which trips the
/// deflation in some QR-based solvers; two-sided Jacobi rotations converge
/// unconditionally on any symmetric input and keep `V diag(d) V^T = A` to
/// machine precision. O(n^3) per sweep, quadratic convergence, deterministic
/// sweep order.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> SymmetricEigenDecomposition {
    let n = a.nrows();
    let mut d = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let stop = 1e-15 * scale.max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut largest_off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                largest_off = largest_off.max(d[(p, q)].abs());
            }
        }
        if largest_off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = d[(p, q)];
                if apq.abs() <= stop {
                    continue;
                }
                let (app, aqq) = (d[(p, p)], d[(q, q)]);
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    if i != p && i != q {
                        let dip = d[(i, p)];
                        let diq = d[(i, q)];
                        d[(i, p)] = c * dip - s * diq;
                        d[(p, i)] = d[(i, p)];
                        d[(i, q)] = s * dip + c * diq;
                        d[(q, i)] = d[(i, q)];
                    }
                }
                d[(p, p)] = app - t * apq;
                d[(q, q)] = aqq + t * apq;
                d[(p, q)] = 0.0;
                d[(q, p)] = 0.0;
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s * viq;
                    v[(i, q)] = s * vip + c * viq;
                }
            }
        }
    }
    SymmetricEigenDecomposition {
        eigenvalues: (0..n).map(|i| d[(i, i)]).collect(),
        eigenvectors: v,
    }
}

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix.
#[derive(Debug, Clone)]
pub struct PinvResult {
    pub pinv: DMatrix<f64>,
    /// Number of eigenvalues above the cutoff.
    pub rank: usize,
    /// Absolute eigenvalue threshold that was applied.
    pub eigen_tolerance: f64,
}

/// The m x m projection Q = B L^+ B^T built from the signed incidence B.
#[derive(Debug, Clone)]
pub struct QMatrix {
    pub q: DMatrix<f64>,
}

/// Pseudo-inverts a symmetric matrix by eigendecomposition. Eigenvalues below
/// `EIGEN_CUTOFF * max|eigenvalue|` are treated as exact zeros.
pub fn pinv_laplacian(l: &DMatrix<f64>) -> Result<PinvResult> {
    let n = l.nrows();
    let mut max_dev = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            max_dev = max_dev.max((l[(i, j)] - l[(j, i)]).abs());
        }
    }
    if max_dev > SYMMETRY_TOLERANCE {
        return Err(Error::Asymmetric {
            max_dev,
            tolerance: SYMMETRY_TOLERANCE,
        });
    }
    if n == 0 {
        return Ok(PinvResult {
            pinv: DMatrix::zeros(0, 0),
            rank: 0,
            eigen_tolerance: 0.0,
        });
    }
    let eig = symmetric_eigen(l);
    let max_eig = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let tolerance = EIGEN_CUTOFF * max_eig;
    let mut rank = 0;
    let mut inv_eigs = eig.eigenvalues.clone();
    for v in inv_eigs.iter_mut() {
        if v.abs() > tolerance {
            *v = 1.0 / *v;
            rank += 1;
        } else {
            *v = 0.0;
        }
    }
    let mut pinv = DMatrix::zeros(n, n);
    for (k, &inv_eig) in inv_eigs.iter().enumerate() {
        if inv_eig == 0.0 {
            continue;
        }
        let u = eig.eigenvectors.column(k);
        for i in 0..n {
            let scaled = inv_eig * u[i];
            for j in 0..n {
                pinv[(i, j)] += scaled * u[j];
            }
        }
    }
    // Symmetrize away the last-bit noise of the accumulation.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (pinv[(i, j)] + pinv[(j, i)]);
            pinv[(i, j)] = v;
            pinv[(j, i)] = v;
        }
    }
    Ok(PinvResult {
        pinv,
        rank,
        eigen_tolerance: tolerance,
    })
}

/// Effective resistance of every edge, from the Laplacian pseudo-inverse.
/// Undirected graphs only; weighted Laplacians are supported.
pub fn effective_resistance_all(g: &Graph) -> Result<Vec<f64>> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    let pinv = pinv_laplacian(&g.laplacian()?)?.pinv;
    Ok(g.edges()
        .iter()
        .map(|e| pinv[(e.tail, e.tail)] + pinv[(e.head, e.head)] - 2.0 * pinv[(e.tail, e.head)])
        .collect())
}

/// Builds Q = B L^+ B^T for an undirected unweighted graph. The diagonal of Q
/// is the effective resistance vector, and Q is an orthogonal projection
/// (idempotent, trace n - c).
pub fn q_matrix(g: &Graph) -> Result<QMatrix> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    if !g.is_unweighted() {
        return Err(Error::WeightedInput);
    }
    let pinv = pinv_laplacian(&g.laplacian()?)?.pinv;
    let b = IncidenceBundle::new(g).signed_dense();
    let bl = &b * &pinv;
    let q = &bl * b.transpose();
    Ok(QMatrix { q })
}

/// Exact spanning-tree counts: total count, count of trees containing the
/// given edge, and their ratio. Integer matrix-tree determinants via
/// fraction-free elimination; unweighted connected graphs up to
/// [`TREE_ORACLE_MAX_NODES`] nodes.
pub fn spanning_tree_ratio(g: &Graph, e: usize) -> Result<(u128, u128, f64)> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    if !g.is_unweighted() {
        return Err(Error::WeightedInput);
    }
    if g.node_count() > TREE_ORACLE_MAX_NODES {
        return Err(Error::OracleLimit {
            what: "spanning-tree oracle",
            limit: TREE_ORACLE_MAX_NODES,
            unit: "nodes",
            got: g.node_count(),
        });
    }
    if e >= g.edge_count() {
        return Err(Error::EdgeOutOfRange {
            index: e,
            m: g.edge_count(),
        });
    }
    let tau = tree_count(&integer_laplacian(
        g.node_count(),
        g.triples().iter().map(|&(t, h, _)| (t, h)),
    ));
    if tau == 0 {
        return Err(Error::Disconnected);
    }
    // Trees containing e are the trees of the graph with e contracted.
    let edge = g.edge(e);
    let (keep, merged) = (edge.tail.min(edge.head), edge.tail.max(edge.head));
    let remap = |v: usize| {
        if v == merged {
            keep
        } else if v > merged {
            v - 1
        } else {
            v
        }
    };
    let triples = g.triples();
    let contracted = triples
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != e)
        .map(|(_, &(t, h, _))| (remap(t), remap(h)))
        .filter(|&(t, h)| t != h);
    let tau_e = tree_count(&integer_laplacian(g.node_count() - 1, contracted));
    Ok((tau as u128, tau_e as u128, tau_e as f64 / tau as f64))
}

fn integer_laplacian(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<i128>> {
    let mut l = vec![vec![0i128; n]; n];
    for (t, h) in edges {
        l[t][t] += 1;
        l[h][h] += 1;
        l[t][h] -= 1;
        l[h][t] -= 1;
    }
    l
}

/// Matrix-tree count: determinant of the Laplacian with row/column 0 deleted,
/// computed exactly with Bareiss fraction-free elimination.
fn tree_count(laplacian: &[Vec<i128>]) -> i128 {
    let n = laplacian.len();
    if n <= 1 {
        return 1; // single node (or the empty graph): one trivial tree
    }
    let k = n - 1;
    let mut m: Vec<Vec<i128>> = (1..n)
        .map(|i| (1..n).map(|j| laplacian[i][j]).collect())
        .collect();
    let mut prev = 1i128;
    let mut sign = 1i128;
    for col in 0..k {
        if m[col][col] == 0 {
            let Some(swap) = (col + 1..k).find(|&r| m[r][col] != 0) else {
                return 0;
            };
            m.swap(col, swap);
            sign = -sign;
        }
        for row in (col + 1)..k {
            for j in (col + 1)..k {
                m[row][j] = (m[row][j] * m[col][col] - m[row][col] * m[col][j]) / prev;
            }
            m[row][col] = 0;
        }
        prev = m[col][col];
    }
    sign * m[k - 1][k - 1]
}

/// Smallest nonzero eigenvalue of the normalized Laplacian of a connected
/// undirected graph.
pub fn lambda2(g: &Graph) -> Result<f64> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let l = g.normalized_laplacian()?;
    let eig = symmetric_eigen(&l);
    let max_eig = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    eig.eigenvalues
        .iter()
        .filter(|&&v| v > EIGEN_CUTOFF * max_eig)
        .fold(None, |acc: Option<f64>, &v| {
            Some(acc.map_or(v, |a| a.min(v)))
        })
        .ok_or(Error::NoSpectralGap)
}

/// Degree-based bounds on the effective resistance of one edge:
/// `lower <= r(e) <= min(upper_spectral, upper_triangle)`.
///
/// `lower` and `upper_spectral` are (1/2) resp. (1/lambda2) times
/// (1/d(u) + 1/d(v)); `upper_triangle` is 2 / (2 + common neighbors).
/// Connected unweighted graphs only.
pub fn resistance_bounds(g: &Graph, e: usize) -> Result<(f64, f64, f64)> {
    if !g.is_unweighted() {
        return Err(Error::WeightedInput);
    }
    let lam2 = lambda2(g)?;
    if e >= g.edge_count() {
        return Err(Error::EdgeOutOfRange {
            index: e,
            m: g.edge_count(),
        });
    }
    let sets = g.out_neighbor_sets();
    let edge = g.edge(e);
    let (du, dv) = (sets[edge.tail].len() as f64, sets[edge.head].len() as f64);
    let inv_sum = 1.0 / du + 1.0 / dv;
    let common = count_common(&sets[edge.tail], &sets[edge.head]);
    Ok((0.5 * inv_sum, inv_sum / lam2, 2.0 / (2.0 + common as f64)))
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
