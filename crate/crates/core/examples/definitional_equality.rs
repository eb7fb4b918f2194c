//! Compares terms up to definitional equality and prints their normal forms.
//!
//! ```text
//! cargo run --example definitional_equality
//! ```

use std::rc::Rc;

use sstt::kernel::value::Value;
use sstt::kernel::{check_module, print_term, Ctx, Globals, Session};
use sstt::surface::{read_module, read_term_in, Scope, VarKind};

const PRELUDE: &str = r"
def hom (A : U) (x y : A) : U := <{t | TOP} -> A [t==0 |-> x, t==1 |-> y]> ;
def idfun (A : U) : A -> A := \x. x ;
def compose (A B C : U) (g : B -> C) (f : A -> B) : A -> C := \x. g (f x) ;
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let decls = read_module("prelude.sst", PRELUDE).map_err(|e| format!("{e:?}"))?;
    let mut globals = Globals::new();
    let session = Session::new(false);
    for r in check_module(&mut globals, &session, &decls) {
        r.outcome?;
    }

    let (ctx, a_ty) = Ctx::new(&globals, &session).bind("A", Rc::new(Value::Universe));
    let (ctx, _) = ctx.bind("x", a_ty.clone());
    let (ctx, _) = ctx.bind("f", Rc::new(Value::Universe));
    let scope = Scope::from_names(&[("A", VarKind::Term), ("x", VarKind::Term), ("f", VarKind::Term)]);
    let names = ["A".to_string(), "x".to_string(), "f".to_string()];
    let read = |s: &str| read_term_in(&scope, s);

    let pairs = [
        ("A", "x", "idfun A x"),
        ("A", "compose A A A (idfun A) (idfun A) x", "x"),
        ("A -> A", "idfun A", "\\y. y"),
        ("Sig (y : A) A", "(x, x)", "(idfun A x, x)"),
        ("hom A x x", "\\{t}. x", "\\{s}. idfun A x"),
        ("A", "x", "idfun A (idfun A x)"),
        ("A -> A", "idfun A", "compose A A A (idfun A) (idfun A)"),
    ];
    for (ty, a, b) in pairs {
        let (ty_t, a_t, b_t) = (read(ty)?, read(a)?, read(b)?);
        let equal = ctx.def_equal(&a_t, &b_t, &ty_t)?;
        let nf = ctx.normalize_at(&b_t, &ty_t)?;
        println!("{a}  ≡  {b}  : {ty}   {equal}   (normal form {})", print_term(&names, &nf));
    }
    Ok(())
}
