//! Which zero/nonzero patterns can a unitary matrix have?
//!
//! The crate works with three views of that question: a [`Digraph`] (arc
//! lists, loops and parallel arcs allowed), its 0/1 [`Pattern`], and dense
//! [`ComplexMatrix`] candidates. On top sit:
//!
//! - combinatorial tests: quadrangularity, strong quadrangularity with
//!   refutation witnesses, specularity with a block decomposition
//!   ([`analysis`]);
//! - constructive syntheses: block Fourier unitaries for specular patterns
//!   with square blocks, coined-walk unitaries realizing the line digraph of
//!   any degree-balanced digraph ([`synthesis`]);
//! - Euler circuits and their lift to Hamiltonian cycles of the line
//!   digraph ([`euler`]), plus a coined-walk simulator ([`walk`]);
//! - a seeded alternating-projection feasibility oracle whose `Infeasible`
//!   verdicts always carry a combinatorial witness ([`oracle`]);
//! - an exhaustive small-pattern census that cross-checks the oracle
//!   against the combinatorics ([`census`]).
//!
//! With the default `parallel` feature the oracle restarts and the census
//! fan out over rayon; disabling it gives a sequential build with
//! byte-identical results.

pub mod analysis;
pub mod census;
pub mod digraph;
pub mod error;
pub mod euler;
pub mod generate;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod pattern;
pub mod perm;
pub mod report;
pub mod synthesis;
pub mod walk;

pub use analysis::{Side, SpecularBlocks, SqWitness};
pub use digraph::{Arc, ArcLabeling, Degrees, Digraph, WellFormedness};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, Tolerances, UnitaryCertificate};
pub use oracle::{OracleParams, Verdict};
pub use pattern::Pattern;
pub use perm::Permutation;
