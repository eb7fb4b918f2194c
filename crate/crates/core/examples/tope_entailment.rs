//! Decides a few tope entailments over the directed interval and prints a
//! countermodel when one fails.
//!
//! ```text
//! cargo run --example tope_entailment
//! ```

use sstt::surface::parse_tope;
use sstt::tope::{countermodel, entails, oracle_entails, CubeContext, IntervalTerm, Tope};

fn tope(src: &str) -> Tope {
    parse_tope(src)
        .expect("well-formed tope")
        .map_vars(&mut |v| IntervalTerm::Var(v.name.clone()))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ts = CubeContext::new(vec!["t".to_string(), "s".to_string()])?;
    let queries = [
        ("TOP", "t<=s \\/ s<=t"),
        ("t<=s /\\ s<=t", "t==s"),
        ("t==0 /\\ t==1", "BOT"),
        ("t<=s", "t==s"),
        ("s<=t /\\ t<=0", "s==0"),
    ];
    for (hyp, goal) in queries {
        let (h, g) = (tope(hyp), tope(goal));
        let verdict = entails(&ts, &h, &g)?;
        assert_eq!(verdict, oracle_entails(&ts, &h, &g)?);
        print!("{hyp:>16}  |-  {goal:<14} {verdict}");
        if let Some(cm) = countermodel(&ts, &h, &g)? {
            print!("   countermodel: {cm}");
        }
        println!();
    }
    Ok(())
}
