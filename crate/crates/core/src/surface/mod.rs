//! Concrete syntax: lexer, parser, elaborator to core terms and printer.
//!
//! ASCII and Unicode spellings are interchangeable:
//!
//! | ASCII | Unicode |
//! |-------|---------|
//! | `\`   | `λ`     |
//! | `Sig` | `Σ`     |
//! | `->`  | `→`     |
//! | `|->` | `↦`     |
//! | `:=`  | `≔`     |
//! | `<=`  | `≤`     |
//! | `==`  | `≡`     |
//! | `/\`  | `∧`     |
//! | `\/`  | `∨`     |
//! | `=>`  | `⇒`     |
//! | `TOP` | `⊤`     |
//! | `BOT` | `⊥`     |
//! | `2`   | `𝟚`     |
//! | `<` `>` | `⟨` `⟩` |
//!
//! The printer always emits ASCII.

pub mod ast;
pub mod elab;
pub mod lexer;
pub mod parser;

pub use ast::{Expr, SurfaceModule};
pub use elab::{elaborate, elaborate_items, Scope, VarKind};
pub use parser::{parse_items, parse_module, parse_shape_expr, parse_term, parse_tope, parse_tope_query, ParseError};

use crate::kernel::{print_term, Decl, DeclBody, KernelError, Term};

/// Parses and elaborates a closed term.
pub fn read_term(src: &str) -> Result<Term, KernelError> {
    read_term_in(&Scope::new(), src)
}

/// Parses and elaborates a term in a local scope.
pub fn read_term_in(scope: &Scope, src: &str) -> Result<Term, KernelError> {
    let e = parse_term(src)
        .map_err(|e| KernelError::new(crate::kernel::ErrorClass::Syntax, e.to_string()))?;
    scope.term(&e).map_err(|(e, _)| e)
}

/// Parses and elaborates a whole file; parse failures become failed
/// declarations.
pub fn read_module(file: &str, src: &str) -> Result<Vec<Decl>, ParseError> {
    Ok(elaborate_items(file, &parse_items(src)?))
}

/// Prints an elaborated declaration so that it reads back to an alpha-equal
/// one. Failed declarations print as `None`.
pub fn print_decl(d: &Decl) -> Option<String> {
    Some(match &d.body {
        DeclBody::Def { ty, body } => {
            format!("def {} : {} := {} ;", d.name, print_term(&[], ty), print_term(&[], body))
        }
        DeclBody::Axiom { ty } => format!("axiom {} : {} ;", d.name, print_term(&[], ty)),
        DeclBody::Check { term, ty } => format!("#check {} : {} ;", print_term(&[], term), print_term(&[], ty)),
        DeclBody::Entails { cube, hyp, goal } => format!("#entails [{}] {} => {} ;", cube.join(", "), hyp, goal),
        DeclBody::Failed(_) => return None,
    })
}

pub fn print_module(decls: &[Decl]) -> String {
    decls.iter().filter_map(print_decl).map(|s| s + "\n").collect()
}
