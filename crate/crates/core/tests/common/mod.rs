//! Generators and checks shared by the integration test targets.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use sstt::kernel::{check_module, DeclBody, Globals, Session, Term};
use sstt::surface::{print_module, read_module};
use sstt::tope::{IntervalTerm, Tope};

pub fn and(a: Tope, b: Tope) -> Tope {
    Tope::And(Box::new(a), Box::new(b))
}

pub fn or(a: Tope, b: Tope) -> Tope {
    Tope::Or(Box::new(a), Box::new(b))
}

/// Every `<=` atom and every unordered `==` atom over the variables and the
/// two endpoints.
pub fn atoms(names: &[&str]) -> Vec<Tope> {
    let mut terms: Vec<IntervalTerm> = names.iter().map(|n| IntervalTerm::var(n)).collect();
    terms.extend([IntervalTerm::Zero, IntervalTerm::One]);
    let mut out = Vec::new();
    for (i, a) in terms.iter().enumerate() {
        for (j, b) in terms.iter().enumerate() {
            out.push(Tope::Le(a.clone(), b.clone()));
            if i <= j {
                out.push(Tope::Eq(a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Every tope with exactly `k` atom leaves; `k = 0` gives the constants.
pub fn topes_with_atoms(atoms: &[Tope], k: usize) -> Vec<Tope> {
    match k {
        0 => vec![Tope::Top, Tope::Bot],
        1 => atoms.to_vec(),
        _ => {
            let mut out = Vec::new();
            for left in 1..k {
                let ls = topes_with_atoms(atoms, left);
                let rs = topes_with_atoms(atoms, k - left);
                for l in &ls {
                    for r in &rs {
                        out.push(and(l.clone(), r.clone()));
                        out.push(or(l.clone(), r.clone()));
                    }
                }
            }
            out
        }
    }
}

/// Calls `f` on every query over at most `max_vars` variables whose
/// hypothesis and goal together have at most `max_atoms` atoms.
pub fn for_each_small_query(max_vars: usize, max_atoms: usize, mut f: impl FnMut(&[&str], &Tope, &Tope)) {
    let pool = ["t", "s", "r", "q"];
    for n in 0..=max_vars {
        let names = &pool[..n];
        let atoms = atoms(names);
        let by_size: Vec<Vec<Tope>> = (0..=max_atoms).map(|k| topes_with_atoms(&atoms, k)).collect();
        for hyp_atoms in 0..=max_atoms {
            for goal_atoms in 0..=(max_atoms - hyp_atoms) {
                for hyp in &by_size[hyp_atoms] {
                    for goal in &by_size[goal_atoms] {
                        f(names, hyp, goal);
                    }
                }
            }
        }
    }
}

fn random_term(rng: &mut ChaCha8Rng, names: &[String]) -> IntervalTerm {
    match rng.gen_range(0..names.len() + 2) {
        i if i < names.len() => IntervalTerm::Var(names[i].clone()),
        i if i == names.len() => IntervalTerm::Zero,
        _ => IntervalTerm::One,
    }
}

pub fn random_tope(rng: &mut ChaCha8Rng, names: &[String], depth: usize) -> Tope {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..20) {
            0 => Tope::Top,
            1 => Tope::Bot,
            2..=11 => Tope::Le(random_term(rng, names), random_term(rng, names)),
            _ => Tope::Eq(random_term(rng, names), random_term(rng, names)),
        };
    }
    let a = random_tope(rng, names, depth - 1);
    let b = random_tope(rng, names, depth - 1);
    if rng.gen_bool(0.5) {
        and(a, b)
    } else {
        or(a, b)
    }
}

/// A random query over 3 or 4 variables with depth at most 6.
pub fn random_query(rng: &mut ChaCha8Rng) -> (Vec<String>, Tope, Tope) {
    let n = rng.gen_range(3..=4);
    let names: Vec<String> = ["t", "s", "r", "q"][..n].iter().map(|s| s.to_string()).collect();
    let (hyp_depth, goal_depth) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let hyp = random_tope(rng, &names, hyp_depth);
    let goal = random_tope(rng, &names, goal_depth);
    (names, hyp, goal)
}

pub const TERM_PRELUDE: &str = "
def hom (A : U) (x y : A) : U := <{t | TOP} -> A [t==0 |-> x, t==1 |-> y]> ;
def idfun (A : U) : A -> A := \\x. x ;
def compose (A B C : U) (g : B -> C) (f : A -> B) : A -> C := \\x. g (f x) ;
";

// Types the term generator targets, over the context
// (A : U) (a : A) (f : A -> A) (p : Sig (x : A) A) (h : hom A a a).
#[derive(Clone, Copy)]
enum Ty {
    Univ,
    Base,
    Fun,
    Pair,
    Path,
    Arrow,
}

fn gen(rng: &mut ChaCha8Rng, ty: Ty, depth: usize, fresh: &mut usize) -> String {
    let leaf = depth == 0;
    let pick = |rng: &mut ChaCha8Rng, n: usize| if leaf { 0 } else { rng.gen_range(0..n) };
    match ty {
        Ty::Base => match pick(rng, 6) {
            0 => ["a", "p.1", "p.2", "h @ 0"][rng.gen_range(0..4)].to_string(),
            1 => format!("f ({})", gen(rng, Ty::Base, depth - 1, fresh)),
            2 => format!("idfun A ({})", gen(rng, Ty::Base, depth - 1, fresh)),
            3 => format!(
                "compose A A A ({}) (idfun A) ({})",
                gen(rng, Ty::Fun, depth - 1, fresh),
                gen(rng, Ty::Base, depth - 1, fresh)
            ),
            4 => format!("h @ {}", rng.gen_range(0..2)),
            _ => format!("compose A A A f f ({})", gen(rng, Ty::Base, depth - 1, fresh)),
        },
        Ty::Fun => match pick(rng, 4) {
            0 => "f".to_string(),
            1 => {
                *fresh += 1;
                let x = format!("v{fresh}");
                let body = if rng.gen_bool(0.5) { format!("f {x}") } else { gen(rng, Ty::Base, depth - 1, fresh) };
                format!("\\{x}. {body}")
            }
            2 => format!(
                "compose A A A ({}) ({})",
                gen(rng, Ty::Fun, depth - 1, fresh),
                gen(rng, Ty::Fun, depth - 1, fresh)
            ),
            _ => "idfun A".to_string(),
        },
        Ty::Pair => match pick(rng, 2) {
            0 => "p".to_string(),
            _ => format!("({}, {})", gen(rng, Ty::Base, depth - 1, fresh), gen(rng, Ty::Base, depth - 1, fresh)),
        },
        Ty::Path => "refl".to_string(),
        Ty::Arrow => match pick(rng, 3) {
            0 => "h".to_string(),
            1 => "\\{t}. a".to_string(),
            _ => "\\{t}. h @ t".to_string(),
        },
        Ty::Univ => match pick(rng, 5) {
            0 => "A".to_string(),
            1 => "A -> A".to_string(),
            2 => "Sig (x : A) A".to_string(),
            3 => {
                let e = gen(rng, Ty::Base, depth - 1, fresh);
                format!("Id A ({e}) ({e})")
            }
            _ => "hom A a a".to_string(),
        },
    }
}

fn type_source(ty: Ty, witness: &str) -> String {
    match ty {
        Ty::Univ => "U".into(),
        Ty::Base => "A".into(),
        Ty::Fun => "A -> A".into(),
        Ty::Pair => "Sig (x : A) A".into(),
        Ty::Path => format!("Id A ({witness}) ({witness})"),
        Ty::Arrow => "hom A a a".into(),
    }
}

/// `count` definitions `r0, r1, ...` of random well-typed terms, to be
/// checked after [`TERM_PRELUDE`].
pub fn random_definitions(rng: &mut ChaCha8Rng, count: usize) -> String {
    let tys = [Ty::Univ, Ty::Base, Ty::Fun, Ty::Pair, Ty::Path, Ty::Arrow];
    let mut decls = String::new();
    let mut fresh = 0;
    for i in 0..count {
        let ty = tys[rng.gen_range(0..tys.len())];
        let depth = rng.gen_range(0..=4);
        let witness = gen(rng, Ty::Base, depth, &mut fresh);
        let term = gen(rng, ty, depth, &mut fresh);
        decls.push_str(&format!(
            "def r{i} (A : U) (a : A) (f : A -> A) (p : Sig (x : A) A) (h : hom A a a) : {} := {term} ;\n",
            type_source(ty, &witness)
        ));
    }
    decls
}

/// Checks a module in a fresh environment and reports failing declarations.
pub fn check_all(file: &str, src: &str) -> Result<usize, String> {
    let decls = read_module(file, src).map_err(|e| format!("{file}: {e}"))?;
    let results = check_module(&mut Globals::new(), &Session::new(false), &decls);
    let failures: Vec<String> = results
        .iter()
        .filter_map(|r| r.error().map(|e| format!("{}: {e}", r.name)))
        .collect();
    if failures.is_empty() {
        Ok(results.len())
    } else {
        Err(failures.join("; "))
    }
}

fn decl_terms(body: &DeclBody) -> Vec<&Term> {
    match body {
        DeclBody::Def { ty, body } => vec![ty, body],
        DeclBody::Axiom { ty } => vec![ty],
        DeclBody::Check { term, ty } => vec![term, ty],
        DeclBody::Entails { .. } | DeclBody::Failed(_) => vec![],
    }
}

/// parse, print, parse again: the two elaborations must be alpha-equal and
/// printing the second must reproduce the first printout.
pub fn round_trip(file: &str, src: &str) -> Result<(), String> {
    let first = read_module(file, src).map_err(|e| format!("{file}: {e}"))?;
    let printed = print_module(&first);
    let second = read_module(file, &printed).map_err(|e| format!("{file}: reparse failed: {e}"))?;
    if first.len() != second.len() {
        return Err(format!("{file}: {} declarations became {}", first.len(), second.len()));
    }
    for (a, b) in first.iter().zip(&second) {
        if a.kind != b.kind || (!a.name.starts_with('#') && a.name != b.name) {
            return Err(format!("{file}: {} became {}", a.name, b.name));
        }
        for (x, y) in decl_terms(&a.body).into_iter().zip(decl_terms(&b.body)) {
            if !x.alpha_eq(y) {
                return Err(format!("{file}: {} changed in the round trip", a.name));
            }
        }
        if let (DeclBody::Entails { hyp: h1, goal: g1, .. }, DeclBody::Entails { hyp: h2, goal: g2, .. }) =
            (&a.body, &b.body)
        {
            if (h1, g1) != (h2, g2) {
                return Err(format!("{file}: {} changed in the round trip", a.name));
            }
        }
    }
    if print_module(&second) != printed {
        return Err(format!("{file}: printing is not stable"));
    }
    Ok(())
}

fn keys(v: &Value) -> Vec<String> {
    let mut k: Vec<String> = v.as_object().map(|o| o.keys().cloned().collect()).unwrap_or_default();
    k.sort();
    k
}

/// Deviations of a `check --json` report from the documented schema.
pub fn json_schema_problems(text: &str) -> Vec<String> {
    let v: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return vec![format!("not JSON: {e}")],
    };
    let mut problems = Vec::new();
    let mut expect = |what: &str, got: Vec<String>, want: &[&str]| {
        if got != want {
            problems.push(format!("{what} has fields {got:?}, expected {want:?}"));
        }
    };
    expect("report", keys(&v), &["declarations", "summary", "tool_version"]);
    expect("summary", keys(&v["summary"]), &["declarations", "errors", "ok"]);
    for d in v["declarations"].as_array().into_iter().flatten() {
        expect("declaration", keys(d), &["diagnostics", "kind", "name", "status"]);
        for diag in d["diagnostics"].as_array().into_iter().flatten() {
            expect("diagnostic", keys(diag), &["message", "severity", "span"]);
            expect("span", keys(&diag["span"]), &["col", "file", "line"]);
        }
    }
    if !v["tool_version"].is_string() {
        problems.push("tool_version is not a string".into());
    }
    for field in ["declarations", "ok", "errors"] {
        if !v["summary"][field].is_u64() {
            problems.push(format!("summary.{field} is not a count"));
        }
    }
    problems
}
