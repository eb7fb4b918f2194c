//! The dependent type layer: Pi, Sigma, identity types with J, a single
//! universe with `U : U`, and extension types whose boundaries hold
//! judgmentally.
//!
//! Terms are checked bidirectionally. Definitional equality is decided by
//! evaluation to values followed by a type-directed comparison that consults
//! the tope solver for boundary rules, interval equalities and case splits.

pub mod check;
pub mod ctx;
pub mod env;
pub mod error;
pub mod pretty;
pub mod syntax;
pub mod value;

pub use ctx::{Ctx, Session};
pub use env::{boundary_sweep, check_decl, check_module, CheckResult, Checked, Decl, DeclBody, DeclKind, Globals, Span, SweepReport};
pub use error::{ErrorClass, KResult, KernelError};
pub use pretty::print_term;
pub use syntax::{ExtType, Term};
