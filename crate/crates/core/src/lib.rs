//! Graph states and their multipartite entanglement.
//!
//! The crate builds n-qubit graph states from edge lists, evaluates the
//! generalized concurrence (GCM) and the geometric measure of entanglement
//! (GEM), enumerates local-complementation orbits modulo isomorphism, and
//! classifies a built-in catalog of 45 graphs on up to seven vertices.
//!
//! ```
//! use graphent::{catalog::catalog_get, measures::gcm, state::StateVector};
//!
//! let g = catalog_get(2).unwrap().graph;
//! let s = StateVector::graph_state(&g).unwrap();
//! assert!((gcm(&s).unwrap().value - 1.22474).abs() < 5e-6);
//! ```
//!
//! The guide under `book/` walks through each module; its code blocks run
//! as doctests of this crate.

pub mod catalog;
pub mod classify;
pub mod cli;
pub mod graph;
pub mod measures;
pub mod reductions;
pub mod state;

pub use graph::{Graph, VertexPermutation};
pub use measures::{GemConfig, MeasureKind, MeasureResult};
pub use state::StateVector;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
