//! Exact computations around moonshine-type vertex operator algebras: Virasoro
//! normal ordering, projection operators for products of primaries, the
//! lattice vertex algebra of II_{1,1}, physical states of the tensor product,
//! and the q-series of `j - 744`.

pub mod characters;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod modes;
pub mod phi;
pub mod physical;
pub mod rational;
pub mod report;
pub mod virasoro;
