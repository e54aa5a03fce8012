//! Finite lattices with an emphasis on slim semimodular ones: planar
//! diagrams, multifork constructions, enumeration, morphisms and absorption
//! properties of retracts.

mod error;

pub mod canon;
pub mod cli;
pub mod diagram;
pub mod generate;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod morphisms;
pub mod par;
pub mod properties;
pub mod render;
pub mod slim;

pub use diagram::DiagramLayout;
pub use error::{Error, Result};
pub use lattice::{Elem, FiniteLattice};
