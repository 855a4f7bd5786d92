//! Exact clique-coloring solvers.
//!
//! A clique coloring assigns one of `k` colors to every vertex so that no
//! maximal clique is monochromatic. This crate bundles:
//!
//! - a brute-force solver and verifier used as the correctness oracle,
//! - a maximal-clique containment oracle built by subset convolution,
//! - an `O*(q^tw)` dynamic program over nice tree decompositions,
//! - an XP dynamic program over rooted branch decompositions
//!   (module-width parameterization),
//! - decomposition tooling (validation, nice-form transform, exact
//!   treewidth and module-width search for small graphs),
//! - generators for the gadget graphs used in the hardness reductions
//!   (Mycielski graphs, color-selection gadget, NAE-SAT gadget,
//!   list-coloring gadget).

pub mod branch_decomp;
pub mod cliques;
pub mod coloring;
pub mod cw;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod oracle;
pub mod tree_decomp;
pub mod tw;
pub mod vset;

pub use coloring::{is_clique_coloring, Coloring};
pub use error::Error;
pub use graph::Graph;
pub use vset::VertexSet;
