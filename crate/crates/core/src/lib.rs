//! A batch checker for a simplicial type theory: cube contexts, topes over the
//! directed interval, and a dependent type layer with extension types.

pub mod cli;
pub mod corpus;
pub mod kernel;
pub mod shape;
pub mod surface;
pub mod tope;
