//! Products of linear subspaces in finite field extensions, and packings of
//! quadratic forms under the weight distance.

pub mod codes;
pub mod error;
pub mod fields;
pub mod isoperimetry;
pub mod linalg;
pub mod poly;
pub mod qforms;
pub mod scheme;
pub mod sidon_bridge;
pub mod subspaces;

pub use error::{Error, Result};
pub use fields::{Elem, FieldSpec, Tower, TowerSpec};
pub use subspaces::Subspace;
