//! Prints the pushout-product of pairs of standard inclusions and checks that
//! each result includes into its codomain.
//!
//! ```text
//! cargo run --example leibniz_tensor
//! ```

use sstt::shape::{leibniz_halves, leibniz_tensor, standard_inclusion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (j, k) in [("i0", "i0"), ("b1", "i0"), ("i0", "b1"), ("b1", "b1"), ("Λ²₁⊂Δ2", "b1")] {
        let (jj, kk) = (standard_inclusion(j)?, standard_inclusion(k)?);
        let (cube, left, right, sup) = leibniz_halves(&jj, &kk)?;
        let tensor = leibniz_tensor(&jj, &kk)?;
        println!("{j} ⊗ {k} over [{}]", cube.vars().join(", "));
        println!("  left half   {left}");
        println!("  right half  {right}");
        println!("  codomain    {sup}");
        println!("  verified    {}", tensor.verified());
    }
    Ok(())
}
