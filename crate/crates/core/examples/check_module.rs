//! Checks a small module of arrows and extension types, printing one line per
//! declaration and the message for the one that is rejected.
//!
//! ```text
//! cargo run --example check_module
//! ```

use sstt::kernel::{check_module, Globals, Session};
use sstt::surface::read_module;

const MODULE: &str = r"
def hom (A : U) (x y : A) : U := <{t | TOP} -> A [t==0 |-> x, t==1 |-> y]> ;
def idArrow (A : U) (x : A) : hom A x x := \{t}. x ;
def ap (A B : U) (f : A -> B) (x y : A) (p : hom A x y) : hom B (f x) (f y) := \{t}. f (p @ t) ;
#check idArrow : (A : U) -> (x : A) -> hom A x x ;
#entails [t, s] t <= s /\ s <= t => t == s ;
def backwards (A : U) (x y : A) (p : hom A x y) : hom A y x := p ;
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let decls = read_module("example.sst", MODULE).map_err(|e| format!("{e:?}"))?;
    let mut globals = Globals::new();
    let session = Session::new(false);
    for result in check_module(&mut globals, &session, &decls) {
        match &result.outcome {
            Ok(_) => println!("ok     {:<8} {}", result.kind.as_str(), result.name),
            Err(e) => println!("error  {:<8} {}\n       {}: {e}", result.kind.as_str(), result.name, result.span),
        }
    }
    println!("{} globals, {} tope queries", globals.len(), session.queries());
    Ok(())
}
