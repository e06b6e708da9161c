//! Edge centrality toolkit built around the edge-wise random walk with
//! restart, with the classical comparison measures, resistance-proportional
//! graph sparsification, and randomized verification suites for the analytic
//! properties of each construction.
//!
//! The centerpiece is [`erwr::edgerake_approx`]: a damped power iteration
//! over an implicit edge-to-edge transition operator that scores every edge
//! in O(m) time per iteration. [`erwr::edgerake_exact`] solves the same
//! series densely for cross-checking at desk scale. The [`baselines`] module
//! provides edge PageRank, edge Katz, GTOM, edge betweenness, effective
//! resistance, and biharmonic-distance centrality; [`sparsify`] samples edges
//! proportionally to effective resistance into an unbiased sparsified
//! Laplacian.
//!
//! ```
//! use edgerake::{erwr, Graph};
//!
//! // Triangle: 2-regular, so every edge scores exactly 1/sqrt(2*2).
//! let g = Graph::new(&[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)], false)?;
//! let t = erwr::iterations_for_epsilon(0.5, 1e-6)?;
//! let scores = erwr::edgerake_approx(&g, 0.5, t)?;
//! assert!((scores.scores[0] - 0.5).abs() < 1e-6);
//! # Ok::<(), edgerake::Error>(())
//! ```

pub mod baselines;
pub mod centrality;
pub mod error;
pub mod erwr;
pub mod graph;
pub mod incidence;
pub mod io;
pub mod sparsify;
pub mod spectral;
pub mod verify;

pub use centrality::{CentralityVector, Measure, Params};
pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use incidence::IncidenceBundle;
