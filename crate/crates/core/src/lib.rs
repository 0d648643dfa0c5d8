//! Exact k-list-coloring for P5-free graphs.
//!
//! The solver branches on a dominating clique or dominating P3 until every
//! bag of vertices (grouped by their neighborhood in the dominating set) can
//! be colored independently with fewer colors, then recurses. Palettes of
//! size two are finished off with 2-SAT.
//!
//! ```
//! use p5color::{Graph, Solver, SolveConfig, Verdict};
//!
//! let c5 = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
//! let solver = Solver::new(SolveConfig::default());
//! assert!(matches!(solver.k_colorability(&c5, 2).unwrap(), Verdict::Unsat { .. }));
//! assert!(solver.k_colorability(&c5, 3).unwrap().is_sat());
//! ```

pub mod branching;
pub mod error;
pub mod formats;
pub mod graph;
pub mod instance;
pub mod sat2;
pub mod solver;
pub mod testkit;
mod vertex_set;

pub use error::{Error, Result};
pub use graph::{DominatingStructure, Graph, StructureKind};
pub use instance::{
    BagRestriction, Color, InstanceSet, ListInstance, Palette, Verdict, MAX_UNIVERSE,
};
pub use solver::{verify, SolveConfig, Solver};
pub use vertex_set::VertexSet;
