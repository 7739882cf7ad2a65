//! Non-self-adjoint Laplacians on finite weighted directed graphs that obey
//! Kirchhoff balance (`β⁺(x) = β⁻(x)` at every vertex), the special
//! self-adjoint operator `S = Δ + Δ*`, their spectra, and machine-checked
//! certificates for the eigenvalue inequalities relating them.

pub mod eigen;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod operators;
pub mod theorems;

pub use error::{Error, Result};
pub use graph::{DirectedWeightedGraph, Edge, VertexId};
