//! Walks through the standard shapes: inclusions between them, the boundary
//! of the triangle, and products of intervals.
//!
//! ```text
//! cargo run --example shape_calculus
//! ```

use sstt::shape::{inclusion_of, product, shape_equiv, standard_shape, Shape};
use sstt::tope::CubeContext;

fn show(name: &str, s: &Shape) {
    println!("{name:<8} {{{} | {}}}", s.cube.vars().join(" "), s.tope);
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["Δ1", "Λ²₁", "Δ2", "∂Δ2", "square"] {
        show(name, &standard_shape(name)?);
    }
    println!();

    let chain = ["Λ²₁", "Δ2", "square"];
    for pair in chain.windows(2) {
        let inc = inclusion_of(&standard_shape(pair[0])?, &standard_shape(pair[1])?)?;
        println!("{} ⊆ {}: verified {}", pair[0], pair[1], inc.verified());
    }
    match inclusion_of(&standard_shape("square")?, &standard_shape("Δ2")?) {
        Ok(_) => println!("square ⊆ Δ2 (unexpected)"),
        Err(e) => println!("square ⊄ Δ2: {e}"),
    }
    println!();

    let interval = standard_shape("Δ1")?;
    let square = product(&interval, &interval);
    show("Δ1×Δ1", &square);
    println!("Δ1×Δ1 ≡ square: {}", shape_equiv(&square, &standard_shape("square")?)?);
    let empty = Shape::new(CubeContext::of(&["t"]), sstt::tope::Tope::Bot)?;
    println!("empty shape is empty: {}", empty.is_empty()?);
    Ok(())
}
