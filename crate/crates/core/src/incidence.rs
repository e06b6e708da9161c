//! Incidence matrix views of a graph.
//!
//! One edge set induces three different incidence matrices and they must not
//! be conflated:
//!
//! - `signed` (m x n): +1 at the tail, -1 at the head of each edge row. Its
//!   weighted Gram matrix is the Laplacian.
//! - `tail`/`head` (n x m): weight w(e) at the departure / jump-target nodes
//!   of each edge column. For undirected edges both endpoints play both roles,
//!   so the two coincide.
//! - `jump_norm` (n x m): `head` with each column normalized to sum 1. This is
//!   the jump distribution of the edge walk: a directed edge sends the walker
//!   to its head with probability 1, an undirected edge to either endpoint
//!   with probability 1/2 (weights cancel in the normalization).
//!
//! All four are stored edge-major as fixed-size per-edge entries, which is all
//! the walk operator needs; dense materializations are provided for the
//! desk-scale spectral computations.

use crate::graph::Graph;
use nalgebra::DMatrix;

/// Per-edge column data for the incidence views of one graph.
#[derive(Debug, Clone)]
pub struct IncidenceBundle {
    n: usize,
    /// Signed rows: (tail, head) per edge, carrying +1 / -1.
    signed: Vec<(usize, usize)>,
    /// Departure nodes per edge (tail side), with entry value w(e).
    departures: Vec<Targets>,
    /// Jump targets per edge with normalized probabilities.
    jump: Vec<JumpTargets>,
    weights: Vec<f64>,
}

/// One or two incident nodes of an edge column.
#[derive(Debug, Clone, Copy)]
pub enum Targets {
    One(usize),
    Two(usize, usize),
}

/// Jump-target nodes with their probabilities (sum to 1).
#[derive(Debug, Clone, Copy)]
pub enum JumpTargets {
    One(usize),
    Half(usize, usize),
}

impl IncidenceBundle {
    pub fn new(g: &Graph) -> IncidenceBundle {
        let mut signed = Vec::with_capacity(g.edge_count());
        let mut departures = Vec::with_capacity(g.edge_count());
        let mut jump = Vec::with_capacity(g.edge_count());
        let mut weights = Vec::with_capacity(g.edge_count());
        for e in g.edges() {
            signed.push((e.tail, e.head));
            weights.push(e.weight);
            if g.is_directed() {
                departures.push(Targets::One(e.tail));
                jump.push(JumpTargets::One(e.head));
            } else {
                departures.push(Targets::Two(e.tail, e.head));
                jump.push(JumpTargets::Half(e.tail, e.head));
            }
        }
        IncidenceBundle {
            n: g.node_count(),
            signed,
            departures,
            jump,
            weights,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.signed.len()
    }

    pub fn signed_row(&self, e: usize) -> (usize, usize) {
        self.signed[e]
    }

    pub fn departures(&self, e: usize) -> Targets {
        self.departures[e]
    }

    pub fn jump_targets(&self, e: usize) -> JumpTargets {
        self.jump[e]
    }

    pub fn weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    /// Signed incidence as a dense m x n matrix.
    pub fn signed_dense(&self) -> DMatrix<f64> {
        let mut b = DMatrix::zeros(self.edge_count(), self.n);
        for (e, &(tail, head)) in self.signed.iter().enumerate() {
            b[(e, tail)] = 1.0;
            b[(e, head)] = -1.0;
        }
        b
    }

    /// Tail-side incidence as a dense n x m matrix (w(e) at departure nodes).
    pub fn tail_dense(&self) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(self.n, self.edge_count());
        for (e, targets) in self.departures.iter().enumerate() {
            match *targets {
                Targets::One(v) => t[(v, e)] = self.weights[e],
                Targets::Two(u, v) => {
                    t[(u, e)] = self.weights[e];
                    t[(v, e)] = self.weights[e];
                }
            }
        }
        t
    }

    /// Head-side incidence as a dense n x m matrix (w(e) at jump targets).
    pub fn head_dense(&self) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.n, self.edge_count());
        for (e, targets) in self.jump.iter().enumerate() {
            match *targets {
                JumpTargets::One(v) => h[(v, e)] = self.weights[e],
                JumpTargets::Half(u, v) => {
                    h[(u, e)] = self.weights[e];
                    h[(v, e)] = self.weights[e];
                }
            }
        }
        h
    }

    /// Column-normalized jump incidence as a dense n x m matrix.
    pub fn jump_norm_dense(&self) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.n, self.edge_count());
        for (e, targets) in self.jump.iter().enumerate() {
            match *targets {
                JumpTargets::One(v) => j[(v, e)] = 1.0,
                JumpTargets::Half(u, v) => {
                    j[(u, e)] = 0.5;
                    j[(v, e)] = 0.5;
                }
            }
        }
        j
    }
}
