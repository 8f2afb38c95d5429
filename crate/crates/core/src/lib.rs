//! Exact-arithmetic toolkit for toric rings attached to signed posets and
//! integer vector configurations: divisor class groups, weight systems,
//! conic divisorial ideals and their lattice-point counts, Gorenstein
//! criteria, and the acyclic-orientation correspondence in the balanced
//! case.
//!
//! All core computations run over arbitrary-precision integers and
//! rationals; no floating point is used anywhere.

pub mod balanced;
pub mod error;
pub mod graph;
pub mod lp;
pub mod matrix;
pub mod matroid;
pub mod poset;
pub mod toric;

pub use error::{Error, Result};
