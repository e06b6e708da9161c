//! Immutable weighted graph with dense node indexing and CSR out-adjacency.
//!
//! Edges keep their insertion order forever; every per-edge vector produced by
//! the rest of the crate is indexed by that order. Undirected edges are stored
//! once and contribute to the adjacency of both endpoints.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// A single edge. For undirected graphs `tail`/`head` record the orientation
/// the edge was inserted with, which also fixes the sign convention of the
/// signed incidence matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    /// CSR offsets into `csr_edges`, length `n + 1`.
    csr_index: Vec<usize>,
    /// Out-edge indices per node, sorted ascending within each node's slice.
    csr_edges: Vec<usize>,
    /// Diagonal of the out-degree matrix D: sum of out-edge weights per node.
    out_strength: Vec<f64>,
}

impl Graph {
    /// Builds a graph from dense-indexed `(tail, head, weight)` triples.
    ///
    /// Node count is `1 + max index` unless `min_nodes` asks for more room
    /// (isolated trailing nodes). Parallel edges are kept as distinct edges;
    /// self-loops and non-positive weights are rejected.
    ///
    /// ```
    /// use edgerake::Graph;
    ///
    /// let g = Graph::new(&[(0, 1, 1.0), (1, 2, 2.0)], false)?;
    /// assert_eq!(g.node_count(), 3);
    /// assert_eq!(g.out_strength(), &[1.0, 3.0, 2.0]);
    /// # Ok::<(), edgerake::Error>(())
    /// ```
    pub fn new(triples: &[(usize, usize, f64)], directed: bool) -> Result<Graph> {
        Self::with_nodes(triples, directed, 0)
    }

    /// Like [`Graph::new`] but guarantees at least `min_nodes` nodes.
    pub fn with_nodes(
        triples: &[(usize, usize, f64)],
        directed: bool,
        min_nodes: usize,
    ) -> Result<Graph> {
        let mut n = min_nodes;
        for &(t, h, _) in triples {
            n = n.max(t + 1).max(h + 1);
        }
        let mut edges = Vec::with_capacity(triples.len());
        for (index, &(tail, head, weight)) in triples.iter().enumerate() {
            if weight <= 0.0 || !weight.is_finite() {
                return Err(Error::NonPositiveWeight { index, weight });
            }
            if tail == head {
                return Err(Error::SelfLoop { index, node: tail });
            }
            edges.push(Edge { tail, head, weight });
        }

        let mut degree = vec![0usize; n];
        let mut out_strength = vec![0.0f64; n];
        for e in &edges {
            degree[e.tail] += 1;
            out_strength[e.tail] += e.weight;
            if !directed {
                degree[e.head] += 1;
                out_strength[e.head] += e.weight;
            }
        }
        let mut csr_index = vec![0usize; n + 1];
        for v in 0..n {
            csr_index[v + 1] = csr_index[v] + degree[v];
        }
        let mut cursor = csr_index.clone();
        let mut csr_edges = vec![0usize; csr_index[n]];
        // Filling in edge order keeps each node's slice sorted by edge index.
        for (e, edge) in edges.iter().enumerate() {
            csr_edges[cursor[edge.tail]] = e;
            cursor[edge.tail] += 1;
            if !directed {
                csr_edges[cursor[edge.head]] = e;
                cursor[edge.head] += 1;
            }
        }

        Ok(Graph {
            n,
            directed,
            edges,
            csr_index,
            csr_edges,
            out_strength,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    /// Out-edge indices of `v`, ascending. For undirected graphs this is the
    /// full incidence list of `v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.csr_edges[self.csr_index[v]..self.csr_index[v + 1]]
    }

    /// Diagonal of the out-degree matrix D (weighted out-degree per node).
    pub fn out_strength(&self) -> &[f64] {
        &self.out_strength
    }

    /// True when every weight is exactly 1.
    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Distinct out-neighbors per node, sorted. For undirected graphs this is
    /// the neighbor set.
    pub fn out_neighbor_sets(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.n];
        for (v, set) in sets.iter_mut().enumerate() {
            for &e in self.out_edges(v) {
                let edge = self.edges[e];
                let other = if edge.tail == v { edge.head } else { edge.tail };
                set.push(other);
            }
            set.sort_unstable();
            set.dedup();
        }
        sets
    }

    /// Weak connectivity labels (edge direction ignored). Components are
    /// numbered by their smallest node index, so labels are deterministic.
    pub fn connected_components(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        // Undirected adjacency view: out lists plus reversed directed edges.
        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        if self.directed {
            for (e, edge) in self.edges.iter().enumerate() {
                incoming[edge.head].push(e);
            }
        }
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            stack.push(start);
            while let Some(v) = stack.pop() {
                let mut visit = |e: usize| {
                    let edge = self.edges[e];
                    let other = if edge.tail == v { edge.head } else { edge.tail };
                    if label[other] == usize::MAX {
                        label[other] = count;
                        stack.push(other);
                    }
                };
                for &e in self.out_edges(v) {
                    visit(e);
                }
                for &e in &incoming[v] {
                    visit(e);
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().1 <= 1
    }

    /// Dense adjacency matrix; parallel edge weights accumulate.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            a[(e.tail, e.head)] += e.weight;
            if !self.directed {
                a[(e.head, e.tail)] += e.weight;
            }
        }
        a
    }

    /// Graph Laplacian L = D - A. Undirected graphs only.
    pub fn laplacian(&self) -> Result<DMatrix<f64>> {
        if self.directed {
            return Err(Error::DirectedInput);
        }
        let mut l = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            l[(e.tail, e.tail)] += e.weight;
            l[(e.head, e.head)] += e.weight;
            l[(e.tail, e.head)] -= e.weight;
            l[(e.head, e.tail)] -= e.weight;
        }
        Ok(l)
    }

    /// Normalized adjacency D^{-1/2} A D^{-1/2}. Undirected graphs only;
    /// isolated nodes produce zero rows and columns.
    pub fn normalized_adjacency(&self) -> Result<DMatrix<f64>> {
        if self.directed {
            return Err(Error::DirectedInput);
        }
        let inv_sqrt: Vec<f64> = self
            .out_strength
            .iter()
            .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
            .collect();
        let mut a = self.adjacency();
        for i in 0..self.n {
            for j in 0..self.n {
                a[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
            }
        }
        Ok(a)
    }

    /// Normalized Laplacian I - D^{-1/2} A D^{-1/2} (isolated nodes keep a
    /// zero diagonal entry rather than 1).
    pub fn normalized_laplacian(&self) -> Result<DMatrix<f64>> {
        let mut l = -self.normalized_adjacency()?;
        for v in 0..self.n {
            if self.out_strength[v] > 0.0 {
                l[(v, v)] += 1.0;
            }
        }
        Ok(l)
    }

    /// The edge list as insertion-ordered triples.
    pub fn triples(&self) -> Vec<(usize, usize, f64)> {
        self.edges
            .iter()
            .map(|e| (e.tail, e.head, e.weight))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    pub(crate) fn k3() -> Graph {
        Graph::new(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], false).unwrap()
    }

    #[test]
    fn shared_types_are_send_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Graph>();
        assert_send_sync::<crate::incidence::IncidenceBundle>();
        assert_send_sync::<crate::erwr::TransitionOperator>();
    }

    #[test]
    fn single_edge_strengths() {
        let g = Graph::new(&[(0, 1, 1.0)], false).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.out_strength(), &[1.0, 1.0]);
    }

    #[test]
    fn triangle_is_two_regular() {
        let g = k3();
        assert_eq!(g.out_strength(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn directed_two_cycle() {
        let g = Graph::new(&[(0, 1, 1.0), (1, 0, 1.0)], true).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.out_strength(), &[1.0, 1.0]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Graph::new(&[(0, 1, 0.0)], false),
            Err(Error::NonPositiveWeight { index: 0, .. })
        ));
        assert!(matches!(
            Graph::new(&[(0, 1, -2.0)], true),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            Graph::new(&[(0, 1, 1.0), (2, 2, 1.0)], false),
            Err(Error::SelfLoop { index: 1, node: 2 })
        ));
    }

    #[test]
    fn parallel_edges_kept_distinct() {
        let g = Graph::new(&[(0, 1, 1.0), (0, 1, 2.0)], false).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.out_strength(), &[3.0, 3.0]);
        assert_eq!(g.out_edges(0), &[0, 1]);
        assert_eq!(g.out_edges(1), &[0, 1]);
    }

    #[test]
    fn csr_round_trips_edges() {
        let g = Graph::new(&[(0, 1, 1.0), (2, 1, 0.5), (0, 3, 2.0)], true).unwrap();
        let mut seen = Vec::new();
        for v in 0..g.node_count() {
            for &e in g.out_edges(v) {
                assert_eq!(g.edge(e).tail, v);
                seen.push(e);
            }
        }
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2]);
    }

    #[test]
    fn components_labeled_by_lowest_node() {
        let p3 = Graph::new(&[(0, 1, 1.0), (1, 2, 1.0)], false).unwrap();
        assert_eq!(p3.connected_components().1, 1);

        let two_edges = Graph::new(&[(0, 1, 1.0), (2, 3, 1.0)], false).unwrap();
        let (labels, c) = two_edges.connected_components();
        assert_eq!(c, 2);
        assert_eq!(labels, vec![0, 0, 1, 1]);

        let isolated = Graph::with_nodes(&[], false, 3).unwrap();
        assert_eq!(isolated.connected_components().1, 3);
    }

    #[test]
    fn weak_connectivity_ignores_direction() {
        let g = Graph::new(&[(0, 1, 1.0), (2, 1, 1.0)], true).unwrap();
        assert!(g.is_connected());
    }

    #[test]
    fn laplacian_small_cases() {
        let p2 = Graph::new(&[(0, 1, 1.0)], false).unwrap();
        let l = p2.laplacian().unwrap();
        assert_eq!(l, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));

        let l3 = k3().laplacian().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 2.0 } else { -1.0 };
                assert_abs_diff_eq!(l3[(i, j)], expect);
            }
        }

        let directed = Graph::new(&[(0, 1, 1.0)], true).unwrap();
        assert!(matches!(directed.laplacian(), Err(Error::DirectedInput)));
    }

    #[test]
    fn normalized_adjacency_values() {
        let p2 = Graph::new(&[(0, 1, 1.0)], false).unwrap();
        let a = p2.normalized_adjacency().unwrap();
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));

        let a3 = k3().normalized_adjacency().unwrap();
        assert_abs_diff_eq!(a3[(0, 1)], 0.5, epsilon = 1e-15);

        // Star K_{1,3}: center-leaf entries 1/sqrt(3).
        let star = Graph::new(&[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], false).unwrap();
        let a_star = star.normalized_adjacency().unwrap();
        for leaf in 1..4 {
            assert_abs_diff_eq!(a_star[(0, leaf)], 1.0 / 3.0f64.sqrt(), epsilon = 1e-15);
        }
    }

    #[test]
    fn strength_sum_matches_weight_sum() {
        let g = k3();
        let total: f64 = g.out_strength().iter().sum();
        assert_abs_diff_eq!(total, 2.0 * 3.0);

        let d = Graph::new(&[(0, 1, 2.0), (1, 2, 3.0)], true).unwrap();
        let total: f64 = d.out_strength().iter().sum();
        assert_abs_diff_eq!(total, 5.0);
    }

    #[test]
    fn triples_round_trip_in_order() {
        let triples = vec![(0usize, 1usize, 1.5f64), (2, 0, 0.5), (1, 2, 2.0)];
        let g = Graph::new(&triples, true).unwrap();
        assert_eq!(g.triples(), triples);
    }
}
