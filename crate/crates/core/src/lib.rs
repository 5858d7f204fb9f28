//! Vertex-level computation of the gauge-invariant ideal structure of
//! Toeplitz-Nica-Pimsner and Cuntz-Nica-Pimsner algebras of finite
//! higher-rank graphs and of finite commuting dynamics.
//!
//! A gauge-invariant ideal is encoded by a family of vertex sets indexed by
//! the subsets of the colors ([`TupleFamily`]); [`tuple`] decides which
//! families occur, [`lattice`] enumerates and orders them, and [`oracle`]
//! holds slow independent re-implementations used to cross-check the rest.

pub mod corpus;
pub mod doc;
pub mod dynsys;
pub mod error;
pub mod fixtures;
pub mod kgraph;
pub mod lattice;
pub mod oracle;
pub mod sets;
pub mod transfer;
pub mod tuple;

pub use error::{Error, Result};
pub use kgraph::{Edge, KGraph, Path, Violation};
pub use sets::{ColorSet, Degree, VertexSet};
pub use transfer::{EventualBehavior, TransferSystem};
pub use tuple::TupleFamily;
