//! Semantic values and evaluation.
//!
//! Free variables in values are de Bruijn levels. Definitions unfold during
//! evaluation; axioms stay as neutral heads. Tope cases that cannot be decided
//! without a restriction remain as [`Value::Case`] and are resolved by
//! forcing under a context.

use std::rc::Rc;

use super::env::Globals;
use super::syntax::{ExtType, Ix, Lvl, Name, Term};
use crate::tope::{IntervalTerm, Tope};

pub type Val = Rc<Value>;
pub type PointVal = IntervalTerm<Lvl>;

#[derive(Debug, Clone)]
pub enum Value {
    Universe,
    Pi(Name, Val, Closure),
    Lam(Name, Closure),
    Sigma(Name, Val, Closure),
    Pair(Val, Val),
    Id(Val, Val, Val),
    Refl,
    Ext(ExtClosure),
    ExtLam(Vec<Name>, Closure),
    Case(Vec<(Tope<Lvl>, Val)>),
    Neutral(Head, Vec<Elim>),
    /// A cube variable's value in an environment.
    Point(PointVal),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Head {
    Var(Lvl),
    Axiom(Name),
}

#[derive(Debug, Clone)]
pub enum Elim {
    App(Val),
    Fst,
    Snd,
    ExtApp(Vec<PointVal>),
    J(Val, Val),
}

/// Evaluation environment, indexed by level.
#[derive(Debug, Clone, Default)]
pub struct Env(Rc<Vec<Val>>);

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&self, v: Val) -> Env {
        let mut vals = (*self.0).clone();
        vals.push(v);
        Env(Rc::new(vals))
    }

    pub fn extend(&self, vs: impl IntoIterator<Item = Val>) -> Env {
        let mut vals = (*self.0).clone();
        vals.extend(vs);
        Env(Rc::new(vals))
    }

    fn lookup(&self, ix: Ix) -> &Val {
        &self.0[self.0.len() - 1 - ix]
    }
}

#[derive(Debug, Clone)]
pub struct Closure {
    pub env: Env,
    pub body: Rc<Term>,
}

impl Closure {
    pub fn apply(&self, g: &Globals, arg: Val) -> Val {
        eval(g, &self.env.push(arg), &self.body)
    }

    pub fn apply_points(&self, g: &Globals, pts: &[PointVal]) -> Val {
        eval(g, &points_env(&self.env, pts), &self.body)
    }
}

#[derive(Debug, Clone)]
pub struct ExtClosure {
    pub env: Env,
    pub ty: Rc<ExtType>,
}

fn points_env(env: &Env, pts: &[PointVal]) -> Env {
    env.extend(pts.iter().map(|p| Rc::new(Value::Point(p.clone()))))
}

impl ExtClosure {
    pub fn arity(&self) -> usize {
        self.ty.binders.len()
    }

    pub fn shape(&self, pts: &[PointVal]) -> Tope<Lvl> {
        eval_tope(&points_env(&self.env, pts), &self.ty.shape)
    }

    pub fn subshape(&self, pts: &[PointVal]) -> Tope<Lvl> {
        let env = points_env(&self.env, pts);
        Tope::disj(self.ty.boundary.iter().map(|(guard, _)| eval_tope(&env, guard)))
    }

    pub fn family(&self, g: &Globals, pts: &[PointVal]) -> Val {
        eval(g, &points_env(&self.env, pts), &self.ty.family)
    }

    /// The boundary instantiated at `pts`, as a case value.
    pub fn boundary(&self, g: &Globals, pts: &[PointVal]) -> Val {
        let env = points_env(&self.env, pts);
        Rc::new(Value::Case(
            self.ty
                .boundary
                .iter()
                .map(|(guard, t)| (eval_tope(&env, guard), eval(g, &env, t)))
                .collect(),
        ))
    }
}

pub fn eval_point(env: &Env, p: &IntervalTerm<Ix>) -> PointVal {
    match p {
        IntervalTerm::Zero => IntervalTerm::Zero,
        IntervalTerm::One => IntervalTerm::One,
        IntervalTerm::Var(ix) => match &**env.lookup(*ix) {
            Value::Point(p) => p.clone(),
            other => panic!("cube variable bound to a non-point value {other:?}"),
        },
    }
}

pub fn eval_tope(env: &Env, t: &Tope<Ix>) -> Tope<Lvl> {
    t.map_vars(&mut |ix| eval_point(env, &IntervalTerm::Var(*ix)))
}

pub fn eval(g: &Globals, env: &Env, t: &Term) -> Val {
    match t {
        Term::Var(ix) => env.lookup(*ix).clone(),
        Term::Const(name) => g.value_of(name),
        Term::Universe => Rc::new(Value::Universe),
        Term::Pi(n, a, b) => Rc::new(Value::Pi(
            n.clone(),
            eval(g, env, a),
            Closure { env: env.clone(), body: b.clone() },
        )),
        Term::Lam(n, b) => Rc::new(Value::Lam(n.clone(), Closure { env: env.clone(), body: b.clone() })),
        Term::App(f, a) => apply(g, eval(g, env, f), eval(g, env, a)),
        Term::Sigma(n, a, b) => Rc::new(Value::Sigma(
            n.clone(),
            eval(g, env, a),
            Closure { env: env.clone(), body: b.clone() },
        )),
        Term::Pair(a, b) => Rc::new(Value::Pair(eval(g, env, a), eval(g, env, b))),
        Term::Fst(p) => fst(eval(g, env, p)),
        Term::Snd(p) => snd(eval(g, env, p)),
        Term::Id(a, x, y) => Rc::new(Value::Id(eval(g, env, a), eval(g, env, x), eval(g, env, y))),
        Term::Refl => Rc::new(Value::Refl),
        Term::J(m, b, p) => j_elim(g, eval(g, env, m), eval(g, env, b), eval(g, env, p)),
        Term::Ext(e) => Rc::new(Value::Ext(ExtClosure { env: env.clone(), ty: e.clone() })),
        Term::ExtLam(ns, b) => Rc::new(Value::ExtLam(ns.clone(), Closure { env: env.clone(), body: b.clone() })),
        Term::ExtApp(f, pts) => {
            let pts: Vec<PointVal> = pts.iter().map(|p| eval_point(env, p)).collect();
            ext_apply(g, eval(g, env, f), &pts)
        }
        Term::Case(bs) => Rc::new(Value::Case(
            bs.iter().map(|(guard, t)| (eval_tope(env, guard), eval(g, env, t))).collect(),
        )),
    }
}

fn push_elim(head: &Head, spine: &[Elim], e: Elim) -> Val {
    let mut spine = spine.to_vec();
    spine.push(e);
    Rc::new(Value::Neutral(head.clone(), spine))
}

fn map_cases(bs: &[(Tope<Lvl>, Val)], f: impl Fn(Val) -> Val) -> Val {
    Rc::new(Value::Case(bs.iter().map(|(guard, v)| (guard.clone(), f(v.clone()))).collect()))
}

pub fn apply(g: &Globals, f: Val, a: Val) -> Val {
    match &*f {
        Value::Lam(_, c) => c.apply(g, a),
        Value::Neutral(h, sp) => push_elim(h, sp, Elim::App(a)),
        Value::Case(bs) => map_cases(bs, |b| apply(g, b, a.clone())),
        other => panic!("ill-typed application of {other:?}"),
    }
}

pub fn fst(p: Val) -> Val {
    match &*p {
        Value::Pair(a, _) => a.clone(),
        Value::Neutral(h, sp) => push_elim(h, sp, Elim::Fst),
        Value::Case(bs) => map_cases(bs, fst),
        other => panic!("ill-typed first projection of {other:?}"),
    }
}

pub fn snd(p: Val) -> Val {
    match &*p {
        Value::Pair(_, b) => b.clone(),
        Value::Neutral(h, sp) => push_elim(h, sp, Elim::Snd),
        Value::Case(bs) => map_cases(bs, snd),
        other => panic!("ill-typed second projection of {other:?}"),
    }
}

pub fn ext_apply(g: &Globals, f: Val, pts: &[PointVal]) -> Val {
    match &*f {
        Value::ExtLam(_, c) => c.apply_points(g, pts),
        Value::Neutral(h, sp) => push_elim(h, sp, Elim::ExtApp(pts.to_vec())),
        Value::Case(bs) => map_cases(bs, |b| ext_apply(g, b, pts)),
        other => panic!("ill-typed extension application of {other:?}"),
    }
}

pub fn j_elim(g: &Globals, motive: Val, base: Val, path: Val) -> Val {
    match &*path {
        Value::Refl => base,
        Value::Neutral(h, sp) => push_elim(h, sp, Elim::J(motive, base)),
        Value::Case(bs) => map_cases(bs, |p| j_elim(g, motive.clone(), base.clone(), p)),
        other => panic!("ill-typed path induction on {other:?}"),
    }
}

pub fn apply_elim(g: &Globals, v: Val, e: &Elim) -> Val {
    match e {
        Elim::App(a) => apply(g, v, a.clone()),
        Elim::Fst => fst(v),
        Elim::Snd => snd(v),
        Elim::ExtApp(pts) => ext_apply(g, v, pts),
        Elim::J(m, b) => j_elim(g, m.clone(), b.clone(), v),
    }
}
