mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{and, for_each_small_query, or, random_query, random_tope};
use sstt::tope::{
    countermodel, dnf, dnf_clauses, entails, equiv, oracle_entails, satisfiable, ChainPoint,
    CubeContext, IntervalTerm, Tope, TopeError,
};

fn v(n: &str) -> IntervalTerm {
    IntervalTerm::var(n)
}

fn le(a: IntervalTerm, b: IntervalTerm) -> Tope {
    Tope::Le(a, b)
}

fn eq(a: IntervalTerm, b: IntervalTerm) -> Tope {
    Tope::Eq(a, b)
}

// Independent evaluator over the chain 0..=top, written without the library's
// own evaluation helpers.
fn holds(t: &Tope, vars: &[String], point: &[usize], top: usize) -> bool {
    let val = |x: &IntervalTerm| match x {
        IntervalTerm::Zero => 0,
        IntervalTerm::One => top,
        IntervalTerm::Var(n) => point[vars.iter().position(|w| w == n).unwrap()],
    };
    match t {
        Tope::Top => true,
        Tope::Bot => false,
        Tope::And(a, b) => holds(a, vars, point, top) && holds(b, vars, point, top),
        Tope::Or(a, b) => holds(a, vars, point, top) || holds(b, vars, point, top),
        Tope::Le(a, b) => val(a) <= val(b),
        Tope::Eq(a, b) => val(a) == val(b),
    }
}

fn all_points(n: usize, top: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| (0..=top).map(move |x| [p.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

fn reference_entails(vars: &[String], hyp: &Tope, goal: &Tope) -> bool {
    let top = vars.len() + 1;
    all_points(vars.len(), top)
        .iter()
        .all(|p| !holds(hyp, vars, p, top) || holds(goal, vars, p, top))
}

fn agree(ctx: &CubeContext, hyp: &Tope, goal: &Tope) {
    let expected = reference_entails(ctx.vars(), hyp, goal);
    let solver = entails(ctx, hyp, goal).unwrap();
    let oracle = oracle_entails(ctx, hyp, goal).unwrap();
    assert_eq!(solver, expected, "solver on {hyp} |- {goal}");
    assert_eq!(oracle, expected, "oracle on {hyp} |- {goal}");
    let cm = countermodel(ctx, hyp, goal).unwrap();
    assert_eq!(cm.is_none(), expected, "countermodel presence on {hyp} |- {goal}");
}

#[test]
fn antisymmetry_yields_equality() {
    let ctx = CubeContext::of(&["t", "s"]);
    let hyp = and(le(v("t"), v("s")), le(v("s"), v("t")));
    assert!(entails(&ctx, &hyp, &eq(v("t"), v("s"))).unwrap());
}

#[test]
fn linearity_covers_the_square() {
    let ctx = CubeContext::of(&["t", "s"]);
    let goal = or(le(v("s"), v("t")), le(v("t"), v("s")));
    assert!(entails(&ctx, &Tope::Top, &goal).unwrap());
    assert!(equiv(&ctx, &Tope::Top, &goal).unwrap());
}

#[test]
fn endpoints_are_distinct() {
    let ctx = CubeContext::of(&["t"]);
    let hyp = and(eq(v("t"), IntervalTerm::Zero), eq(v("t"), IntervalTerm::One));
    assert!(entails(&ctx, &hyp, &Tope::Bot).unwrap());
    assert!(!satisfiable(&ctx, &hyp).unwrap());
}

#[test]
fn order_does_not_force_equality() {
    let ctx = CubeContext::of(&["t", "s"]);
    let hyp = le(v("t"), v("s"));
    let goal = eq(v("t"), v("s"));
    assert!(!entails(&ctx, &hyp, &goal).unwrap());
    assert!(!reference_entails(ctx.vars(), &hyp, &goal));
    let cm = countermodel(&ctx, &hyp, &goal).unwrap().unwrap();
    assert_eq!(cm.assignment, vec![("t".into(), ChainPoint::Bottom), ("s".into(), ChainPoint::Top)]);
    assert_eq!(cm.to_string(), "t=⟂, s=⊤");
}

#[test]
fn oracle_golden_queries() {
    let t = CubeContext::of(&["t"]);
    assert!(oracle_entails(&t, &eq(v("t"), IntervalTerm::Zero), &le(v("t"), IntervalTerm::One)).unwrap());
    let ts = CubeContext::of(&["t", "s"]);
    let horn = and(
        le(v("s"), v("t")),
        or(eq(v("s"), IntervalTerm::Zero), eq(v("t"), IntervalTerm::One)),
    );
    assert!(oracle_entails(&ts, &horn, &le(v("s"), v("t"))).unwrap());
    assert!(entails(&ts, &horn, &le(v("s"), v("t"))).unwrap());
}

#[test]
fn equiv_goldens() {
    let t = CubeContext::of(&["t"]);
    let z = eq(v("t"), IntervalTerm::Zero);
    assert!(equiv(&t, &z, &z).unwrap());
    let ts = CubeContext::of(&["t", "s"]);
    assert!(!equiv(&ts, &le(v("t"), v("s")), &le(v("s"), v("t"))).unwrap());
    assert!(!reference_entails(ts.vars(), &le(v("s"), v("t")), &le(v("t"), v("s"))));
}

#[test]
fn dnf_distributes_and_sorts() {
    let ctx = CubeContext::of(&["t", "s"]);
    let t = and(
        le(v("t"), v("s")),
        or(eq(v("s"), IntervalTerm::Zero), eq(v("t"), IntervalTerm::One)),
    );
    let n = dnf(&ctx, &t).unwrap();
    let clauses = dnf_clauses(&n);
    assert_eq!(clauses.len(), 2);
    let expected = [
        and(eq(v("s"), IntervalTerm::Zero), le(v("t"), v("s"))),
        and(eq(v("t"), IntervalTerm::One), le(v("t"), v("s"))),
    ];
    for want in &expected {
        assert!(clauses.iter().any(|c| equiv(&ctx, c, want).unwrap()), "missing clause {want}");
    }
    assert_eq!(dnf(&ctx, &n).unwrap(), n);
    assert!(equiv(&ctx, &t, &n).unwrap());
}

#[test]
fn dnf_of_top_and_bot() {
    let ctx = CubeContext::of(&["t"]);
    let top = dnf(&ctx, &Tope::Top).unwrap();
    assert_eq!(dnf_clauses(&top).len(), 1);
    assert_eq!(top, Tope::Top);
    let bot = dnf(&ctx, &Tope::Bot).unwrap();
    assert!(dnf_clauses(&bot).is_empty());
}

#[test]
fn unscoped_variables_are_rejected() {
    let ctx = CubeContext::of(&["t"]);
    let bad = le(v("t"), v("s"));
    assert_eq!(entails(&ctx, &bad, &Tope::Top), Err(TopeError::Unscoped("s".into())));
    assert_eq!(oracle_entails(&ctx, &Tope::Top, &bad), Err(TopeError::Unscoped("s".into())));
    assert!(dnf(&ctx, &bad).is_err());
    assert!(CubeContext::new(vec!["t".to_string(), "t".to_string()]).is_err());
}

#[test]
fn exhaustive_agreement_up_to_two_variables_and_three_atoms() {
    let mut checked = 0usize;
    for_each_small_query(2, 3, |names, hyp, goal| {
        agree(&CubeContext::of(names), hyp, goal);
        checked += 1;
    });
    assert!(checked > 100_000, "{checked}");
}

#[test]
fn random_agreement_three_and_four_variables() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5157_7054);
    let mut entailed = 0;
    for _ in 0..500 {
        let (names, hyp, goal) = random_query(&mut rng);
        let ctx = CubeContext::new(names).unwrap();
        agree(&ctx, &hyp, &goal);
        if entails(&ctx, &hyp, &goal).unwrap() {
            entailed += 1;
        }
    }
    assert!(entailed > 0 && entailed < 500, "random instances are not all one verdict");
}

#[test]
fn countermodels_refute_the_query() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let names: Vec<String> = ["t", "s", "r"].iter().map(|s| s.to_string()).collect();
    let ctx = CubeContext::new(names.clone()).unwrap();
    for _ in 0..200 {
        let hyp = random_tope(&mut rng, &names, 4);
        let goal = random_tope(&mut rng, &names, 4);
        if let Some(cm) = countermodel(&ctx, &hyp, &goal).unwrap() {
            let top = names.len() + 1;
            let point: Vec<usize> = cm
                .assignment
                .iter()
                .map(|(_, p)| match p {
                    ChainPoint::Bottom => 0,
                    ChainPoint::Top => top,
                    ChainPoint::Inner(i) => *i,
                })
                .collect();
            assert!(holds(&hyp, &names, &point, top));
            assert!(!holds(&goal, &names, &point, top));
        }
    }
}

const NAMES: [&str; 4] = ["t", "s", "r", "q"];

fn arb_term() -> impl Strategy<Value = IntervalTerm> {
    prop_oneof![
        (0..NAMES.len()).prop_map(|i| v(NAMES[i])),
        Just(IntervalTerm::Zero),
        Just(IntervalTerm::One),
    ]
}

fn arb_tope() -> impl Strategy<Value = Tope> {
    let leaf = prop_oneof![
        1 => Just(Tope::Top),
        1 => Just(Tope::Bot),
        5 => (arb_term(), arb_term()).prop_map(|(a, b)| le(a, b)),
        3 => (arb_term(), arb_term()).prop_map(|(a, b)| eq(a, b)),
    ];
    leaf.prop_recursive(6, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| or(a, b)),
        ]
    })
}

fn ctx4() -> CubeContext {
    CubeContext::of(&NAMES)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn entailment_is_reflexive(h in arb_tope()) {
        prop_assert!(entails(&ctx4(), &h, &h).unwrap());
    }

    #[test]
    fn entailment_is_transitive(a in arb_tope(), b in arb_tope(), c in arb_tope()) {
        let ctx = ctx4();
        if entails(&ctx, &a, &b).unwrap() && entails(&ctx, &b, &c).unwrap() {
            prop_assert!(entails(&ctx, &a, &c).unwrap());
        }
        // a ∧ b always entails a, which exercises the positive branch.
        let ab = and(a.clone(), b.clone());
        prop_assert!(entails(&ctx, &ab, &a).unwrap());
        if entails(&ctx, &a, &c).unwrap() {
            prop_assert!(entails(&ctx, &ab, &c).unwrap());
        }
    }

    #[test]
    fn entailment_is_monotone_in_hypothesis(h in arb_tope(), x in arb_tope(), g in arb_tope()) {
        let ctx = ctx4();
        if entails(&ctx, &h, &g).unwrap() {
            prop_assert!(entails(&ctx, &and(h, x), &g).unwrap());
        }
    }

    #[test]
    fn dnf_is_equivalent_and_idempotent(t in arb_tope()) {
        let ctx = ctx4();
        let n = dnf(&ctx, &t).unwrap();
        prop_assert!(equiv(&ctx, &t, &n).unwrap());
        prop_assert_eq!(dnf(&ctx, &n).unwrap(), n);
    }

    #[test]
    fn satisfiability_matches_reference(t in arb_tope()) {
        let ctx = ctx4();
        let names: Vec<String> = NAMES.iter().map(|s| s.to_string()).collect();
        prop_assert_eq!(satisfiable(&ctx, &t).unwrap(), !reference_entails(&names, &t, &Tope::Bot));
    }

    #[test]
    fn solver_matches_oracle(h in arb_tope(), g in arb_tope()) {
        let ctx = ctx4();
        prop_assert_eq!(entails(&ctx, &h, &g).unwrap(), oracle_entails(&ctx, &h, &g).unwrap());
    }
}

#[test]
fn bot_unsatisfiable_top_satisfiable() {
    for names in [&[][..], &["t"][..], &["t", "s", "r"][..]] {
        let ctx = CubeContext::of(names);
        assert!(!satisfiable(&ctx, &Tope::Bot).unwrap());
        assert!(satisfiable(&ctx, &Tope::Top).unwrap());
    }
}
