use std::rc::Rc;

use proptest::prelude::*;

use sstt::corpus::{check_file, corpus_dir, load_globals, load_manifest};
use sstt::kernel::{
    check_module, CheckResult, Ctx, DeclBody, DeclKind, ErrorClass, Globals, Session, Term,
};
use sstt::surface::{read_module, read_term_in, Scope, VarKind};
use sstt::tope::{entails, CubeContext, IntervalTerm, Tope};

const PRELUDE: &str = "
def hom (A : U) (x y : A) : U := <{t | TOP} -> A [t==0 |-> x, t==1 |-> y]> ;
def idf (A : U) : A -> A := \\x. x ;
";

fn run_in(globals: &mut Globals, src: &str) -> Vec<CheckResult> {
    let decls = read_module("test.sst", src).expect("test source parses");
    check_module(globals, &Session::new(true), &decls)
}

fn run(src: &str) -> Vec<CheckResult> {
    let mut globals = Globals::new();
    let prelude = run_in(&mut globals, PRELUDE);
    assert!(prelude.iter().all(|r| r.is_ok()), "{prelude:?}");
    run_in(&mut globals, src)
}

fn single(src: &str) -> CheckResult {
    let mut results = run(src);
    assert_eq!(results.len(), 1, "{results:?}");
    results.remove(0)
}

fn assert_ok(src: &str) {
    let r = single(src);
    assert!(r.is_ok(), "{src}\n{:?}", r.error());
}

fn assert_class(src: &str, class: ErrorClass) -> String {
    let r = single(src);
    let e = r.error().unwrap_or_else(|| panic!("expected {class} for {src}"));
    assert_eq!(e.class, class, "{src}\n{e}");
    format!("{} {}", e.message, e.countermodel.clone().unwrap_or_default())
}

#[test]
fn universe_has_type_universe() {
    assert_ok("#check U : U ;");
}

#[test]
fn variable_rule() {
    assert_ok("def v (A : U) (x : A) : A := x ;");
}

#[test]
fn hom_application_at_zero_is_the_source() {
    assert_ok("def src (A : U) (x y : A) (f : hom A x y) : Id A (f @ 0) x := refl ;");
    assert_ok("def tgt (A : U) (x y : A) (g : hom A x y) : Id A (g @ 1) y := refl ;");
    assert_class(
        "def bad (A : U) (x y : A) (f : hom A x y) : Id A (f @ 0) y := refl ;",
        ErrorClass::TypeMismatch,
    );
}

#[test]
fn constant_arrow_is_an_identity() {
    assert_ok("def ida (A : U) (x : A) : hom A x x := \\{t}. x ;");
}

#[test]
fn wrong_boundary_is_reported_at_the_source_endpoint() {
    let msg = assert_class(
        "def bad (A : U) (x y : A) : hom A x y := \\{t}. y ;",
        ErrorClass::BoundaryMismatch,
    );
    assert!(msg.contains("t==0"), "{msg}");
}

#[test]
fn contractibility_is_a_type() {
    assert_ok("#check (\\A. Sig (c : A) (y : A) -> Id A c y) : U -> U ;");
}

#[test]
fn equal_points_give_equal_values() {
    assert_ok(
        "def cong (A : U) (x y : A) (f : hom A x y) (t s : 2) [t == s] : Id A (f @ t) (f @ s) := refl ;",
    );
    assert_class(
        "def nocong (A : U) (x y : A) (f : hom A x y) (t s : 2) [s <= t] : Id A (f @ t) (f @ s) := refl ;",
        ErrorClass::TypeMismatch,
    );
}

#[test]
fn beta_through_a_definition() {
    assert_ok("def b (A : U) (a : A) : Id A (idf A a) a := refl ;");
}

#[test]
fn points_outside_the_shape_are_rejected() {
    assert_class(
        "def out (A : U) (c : <{t s | s <= t} -> A>) (t s : 2) : A := c @ (s, t) ;",
        ErrorClass::ShapeMembership,
    );
}

#[test]
fn module_with_a_postulate() {
    assert_ok("axiom ua (A B : U) : Id U A B ;");
}

#[test]
fn unknown_names_are_scope_errors_at_their_declaration() {
    let results = run("def ok1 : U := U ;\n\ndef bad : U := mystery ;\ndef ok2 : U := U ;");
    assert_eq!(results.len(), 3);
    assert!(results[0].is_ok() && results[2].is_ok());
    assert_eq!(results[1].error().unwrap().class, ErrorClass::Scope);
    assert_eq!(results[1].span.line, 3);
}

#[test]
fn checks_and_entailments_do_not_extend_the_environment() {
    let mut globals = Globals::new();
    let results = run_in(&mut globals, "#check U : U ;\n#entails [t] t == 0 => t <= 1 ;");
    assert!(results.iter().all(|r| r.is_ok()));
    assert_eq!(results[1].kind, DeclKind::Entails);
    assert!(globals.is_empty());
}

// Value-level computation rules, which need no type annotations.
fn local_ctx_names() -> Vec<(&'static str, VarKind)> {
    vec![("A", VarKind::Term), ("a", VarKind::Term), ("b", VarKind::Term)]
}

fn with_locals<R>(f: impl FnOnce(&Ctx, &Scope) -> R) -> R {
    let globals = Globals::new();
    let session = Session::new(false);
    let ctx = Ctx::new(&globals, &session);
    let (ctx, a_ty) = ctx.bind("A", Rc::new(sstt::kernel::value::Value::Universe));
    let (ctx, _) = ctx.bind("a", a_ty.clone());
    let (ctx, _) = ctx.bind("b", a_ty);
    let scope = Scope::from_names(&local_ctx_names());
    f(&ctx, &scope)
}

#[test]
fn projection_and_identity_elimination_compute() {
    with_locals(|ctx, scope| {
        let fst = Term::Fst(Rc::new(Term::pair(read_term_in(scope, "a").unwrap(), read_term_in(scope, "b").unwrap())));
        assert!(ctx.quote(&ctx.eval(&fst)).alpha_eq(&read_term_in(scope, "a").unwrap()));
        let j = read_term_in(scope, "J (\\z q. A) b refl").unwrap();
        assert!(ctx.quote(&ctx.eval(&j)).alpha_eq(&read_term_in(scope, "b").unwrap()));
        let redex = Term::app(Term::lam("x", Term::Var(0)), read_term_in(scope, "a").unwrap());
        let a_ty = ctx.eval(&read_term_in(scope, "A").unwrap());
        let a = ctx.eval(&read_term_in(scope, "a").unwrap());
        assert!(ctx.conv(&a_ty, &ctx.eval(&redex), &a).unwrap());
        let b = ctx.eval(&read_term_in(scope, "b").unwrap());
        assert!(!ctx.conv(&a_ty, &a, &b).unwrap());
    });
}

#[test]
fn eta_for_functions_and_pairs() {
    assert_ok("def etaPi (A : U) (f : A -> A) : Id (A -> A) f (\\x. f x) := refl ;");
    assert_ok("def etaSig (A : U) (p : Sig (x : A) A) : Id (Sig (x : A) A) p (p.1, p.2) := refl ;");
}

fn corpus_results() -> (Globals, Vec<CheckResult>) {
    let dir = corpus_dir();
    let manifest = load_manifest(&dir).unwrap();
    let session = Session::new(false);
    let mut globals = Globals::new();
    let mut all = Vec::new();
    for entry in manifest.positive() {
        let src = std::fs::read_to_string(dir.join(&entry.file)).unwrap();
        all.extend(check_file(&mut globals, &session, &entry.file, &src).unwrap());
    }
    (globals, all)
}

#[test]
fn stability_over_the_corpus() {
    let (globals, results) = corpus_results();
    let session = Session::new(false);
    let ctx = Ctx::new(&globals, &session);
    let mut rechecked = 0;
    for r in &results {
        let checked = r.outcome.as_ref().unwrap_or_else(|e| panic!("{}: {e}", r.name));
        if let (Some(term), Some(ty)) = (&checked.term, &checked.ty) {
            ctx.check(term, &ctx.eval(ty)).unwrap_or_else(|e| panic!("{}: {e}", r.name));
            rechecked += 1;
        }
    }
    assert!(rechecked > 100, "only {rechecked} terms rechecked");
}

#[test]
fn normalization_is_idempotent_over_corpus_definitions() {
    let (globals, _) = corpus_results();
    let session = Session::new(false);
    let ctx = Ctx::new(&globals, &session);
    let mut normalized = 0;
    for name in globals.names() {
        let entry = globals.get(name).unwrap();
        let Some((body, _)) = &entry.def else { continue };
        let once = ctx.normalize_at(body, &entry.ty_term).unwrap_or_else(|e| panic!("{name}: {e}"));
        let twice = ctx.normalize_at(&once, &entry.ty_term).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(once.alpha_eq(&twice), "{name} is not a fixed point");
        normalized += 1;
    }
    assert!(normalized > 100);
}

#[test]
fn definitional_equality_is_an_equivalence_on_corpus_terms() {
    let dir = corpus_dir();
    let manifest = load_manifest(&dir).unwrap();
    let session = Session::new(false);
    let globals = load_globals(&dir, &manifest, &session).unwrap();
    let base = Ctx::new(&globals, &session);
    let (ctx, a_ty) = base.bind("A", Rc::new(sstt::kernel::value::Value::Universe));
    let (ctx, _) = ctx.bind("x", a_ty.clone());
    let scope = Scope::from_names(&[("A", VarKind::Term), ("x", VarKind::Term)]);
    let read = |s: &str| read_term_in(&scope, s).unwrap();
    let groups: [(&str, &[&str]); 2] = [
        ("A", &["x", "idfun A x", "compose A A A (idfun A) (idfun A) x"]),
        ("hom A x x", &["idArrow A x", "\\{t}. x", "\\{t}. idfun A x", "apArrow A A (idfun A) x x (idArrow A x)"]),
    ];
    for (ty, terms) in groups {
        let ty = read(ty);
        let terms: Vec<Term> = terms.iter().map(|s| read(s)).collect();
        for a in &terms {
            assert!(ctx.def_equal(a, a, &ty).unwrap());
            for b in &terms {
                let ab = ctx.def_equal(a, b, &ty).unwrap();
                assert_eq!(ab, ctx.def_equal(b, a, &ty).unwrap());
                for c in &terms {
                    if ab && ctx.def_equal(b, c, &ty).unwrap() {
                        assert!(ctx.def_equal(a, c, &ty).unwrap());
                    }
                }
            }
        }
    }
    // A pair that must differ, so the sampled classes are not trivially total.
    let (ctx2, _) = ctx.bind("y", a_ty);
    let scope2 = Scope::from_names(&[("A", VarKind::Term), ("x", VarKind::Term), ("y", VarKind::Term)]);
    let t = |s: &str| read_term_in(&scope2, s).unwrap();
    assert!(!ctx2.def_equal(&t("x"), &t("y"), &t("A")).unwrap());
}

#[test]
fn declarations_carry_their_elaborated_kind() {
    let decls = read_module("k.sst", "axiom p : U ;\ndef q : U := p ;").unwrap();
    assert!(matches!(decls[0].body, DeclBody::Axiom { .. }));
    assert_eq!(decls[1].kind, DeclKind::Def);
}

fn arb_restriction() -> impl Strategy<Value = Tope> {
    let term = prop_oneof![
        Just(IntervalTerm::var("t")),
        Just(IntervalTerm::var("s")),
        Just(IntervalTerm::Zero),
        Just(IntervalTerm::One),
    ];
    let leaf = prop_oneof![
        1 => Just(Tope::Top),
        3 => (term.clone(), term.clone()).prop_map(|(a, b)| Tope::Le(a, b)),
        3 => (term.clone(), term).prop_map(|(a, b)| Tope::Eq(a, b)),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tope::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Tope::Or(Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Conversion under a restriction follows exactly what the restriction
    // entails, so strengthening a restriction never loses an equality.
    #[test]
    fn restriction_monotonicity(r in arb_restriction()) {
        let ts = CubeContext::of(&["t", "s"]);
        let congruent = single(&format!(
            "def c (A : U) (x y : A) (f : hom A x y) (t s : 2) [{r}] : Id A (f @ t) (f @ s) := refl ;"
        ));
        let expected = entails(&ts, &r, &Tope::Eq(IntervalTerm::var("t"), IntervalTerm::var("s"))).unwrap();
        prop_assert_eq!(congruent.is_ok(), expected, "{}", r);
        let at_source = single(&format!(
            "def c (A : U) (x y : A) (f : hom A x y) (t s : 2) [{r}] : Id A (f @ t) x := refl ;"
        ));
        let expected = entails(&ts, &r, &Tope::Eq(IntervalTerm::var("t"), IntervalTerm::Zero)).unwrap();
        prop_assert_eq!(at_source.is_ok(), expected, "{}", r);
    }
}
