//! Typing contexts, tope-aware forcing, definitional equality and readback.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

use super::env::Globals;
use super::error::{ErrorClass, KResult, KernelError};
use super::pretty;
use super::syntax::{ExtType, Lvl, Name, Term};
use super::value::{
    apply, apply_elim, eval, eval_tope, ext_apply, fst, snd, Elim, Env, Head, PointVal, Val, Value,
};
use crate::tope::{self, dnf_clauses, CubeContext, IntervalTerm, Tope, TopeError};

const SHOW_LIMIT: usize = 240;

/// Per-run state shared by every context: the entailment cache and the
/// oracle cross-check switch.
#[derive(Debug, Default)]
pub struct Session {
    pub oracle: bool,
    cache: RefCell<HashMap<(Tope<Lvl>, Tope<Lvl>), bool>>,
    queries: Cell<u64>,
    solver_calls: Cell<u64>,
}

impl Session {
    pub fn new(oracle: bool) -> Session {
        Session { oracle, ..Session::default() }
    }

    /// Number of entailment queries answered, including cache hits.
    pub fn queries(&self) -> u64 {
        self.queries.get()
    }

    /// Number of queries that reached the decision procedure.
    pub fn solver_calls(&self) -> u64 {
        self.solver_calls.get()
    }

    pub fn entails(&self, hyp: &Tope<Lvl>, goal: &Tope<Lvl>) -> KResult<bool> {
        self.queries.set(self.queries.get() + 1);
        let key = (hyp.clone(), goal.clone());
        if let Some(&b) = self.cache.borrow().get(&key) {
            return Ok(b);
        }
        self.solver_calls.set(self.solver_calls.get() + 1);
        let cube = occurring(hyp, goal);
        let verdict = tope::entails(&cube, hyp, goal).map_err(resource)?;
        if self.oracle {
            let reference = tope::oracle_entails(&cube, hyp, goal).map_err(resource)?;
            if reference != verdict {
                return Err(KernelError::new(
                    ErrorClass::OracleDivergence,
                    format!("solver says {verdict}, oracle says {reference} for {hyp} => {goal}"),
                ));
            }
        }
        self.cache.borrow_mut().insert(key, verdict);
        Ok(verdict)
    }
}

fn occurring(hyp: &Tope<Lvl>, goal: &Tope<Lvl>) -> CubeContext<Lvl> {
    let mut vars = hyp.vars();
    vars.extend(goal.vars());
    CubeContext::new(vars.into_iter().collect()).expect("set elements are distinct")
}

fn resource(e: TopeError) -> KernelError {
    KernelError::new(ErrorClass::Resource, e.to_string())
}

/// A typing context: the global environment, the local telescope (term and
/// cube variables share one level space) and the active tope restriction.
#[derive(Clone)]
pub struct Ctx<'a> {
    pub globals: &'a Globals,
    pub session: &'a Session,
    pub env: Env,
    pub names: Vec<Name>,
    /// `None` marks a cube variable.
    pub types: Vec<Option<Val>>,
    pub restriction: Tope<Lvl>,
}

impl<'a> Ctx<'a> {
    pub fn new(globals: &'a Globals, session: &'a Session) -> Ctx<'a> {
        Ctx { globals, session, env: Env::new(), names: Vec::new(), types: Vec::new(), restriction: Tope::Top }
    }

    pub fn lvl(&self) -> Lvl {
        self.env.len()
    }

    pub fn bind(&self, name: &str, ty: Val) -> (Ctx<'a>, Val) {
        let var = Rc::new(Value::Neutral(Head::Var(self.lvl()), Vec::new()));
        let mut ctx = self.clone();
        ctx.env = ctx.env.push(var.clone());
        ctx.names.push(name.to_string());
        ctx.types.push(Some(ty));
        (ctx, var)
    }

    /// Binds a term variable to a known value, as for a let.
    pub fn define(&self, name: &str, ty: Val, value: Val) -> Ctx<'a> {
        let mut ctx = self.clone();
        ctx.env = ctx.env.push(value);
        ctx.names.push(name.to_string());
        ctx.types.push(Some(ty));
        ctx
    }

    pub fn bind_cube(&self, names: &[Name]) -> (Ctx<'a>, Vec<PointVal>) {
        let mut ctx = self.clone();
        let mut pts = Vec::new();
        for n in names {
            let p = IntervalTerm::Var(ctx.lvl());
            ctx.env = ctx.env.push(Rc::new(Value::Point(p.clone())));
            ctx.names.push(n.clone());
            ctx.types.push(None);
            pts.push(p);
        }
        (ctx, pts)
    }

    pub fn restrict(&self, t: Tope<Lvl>) -> Ctx<'a> {
        let mut ctx = self.clone();
        ctx.restriction = Tope::and(ctx.restriction.clone(), t);
        ctx
    }

    pub fn with_restriction(&self, t: Tope<Lvl>) -> Ctx<'a> {
        let mut ctx = self.clone();
        ctx.restriction = t;
        ctx
    }

    pub fn is_cube_var(&self, l: Lvl) -> bool {
        matches!(self.types.get(l), Some(None))
    }

    pub fn eval(&self, t: &Term) -> Val {
        eval(self.globals, &self.env, t)
    }

    pub fn eval_tope(&self, t: &Tope<usize>) -> Tope<Lvl> {
        eval_tope(&self.env, t)
    }

    pub fn quote(&self, v: &Val) -> Term {
        quote(self.globals, self.lvl(), v)
    }

    pub fn quote_tope(&self, t: &Tope<Lvl>) -> Tope<usize> {
        quote_tope(self.lvl(), t)
    }

    pub fn show_term(&self, t: &Term) -> String {
        truncate(pretty::print_term(&self.names, t))
    }

    pub fn show(&self, v: &Val) -> String {
        self.show_term(&self.quote(v))
    }

    pub fn show_tope(&self, t: &Tope<Lvl>) -> String {
        self.named_tope(t).to_string()
    }

    pub fn show_point(&self, p: &PointVal) -> String {
        match p {
            IntervalTerm::Var(l) => self.names[*l].clone(),
            other => other.map_var(&mut |_: &Lvl| IntervalTerm::<String>::Zero).to_string(),
        }
    }

    pub fn named_tope(&self, t: &Tope<Lvl>) -> Tope<String> {
        t.map_vars(&mut |l| IntervalTerm::Var(self.names[*l].clone()))
    }

    // -- entailment ---------------------------------------------------------

    pub fn entails_under(&self, hyp: &Tope<Lvl>, goal: &Tope<Lvl>) -> KResult<bool> {
        if matches!(goal, Tope::Top) || matches!(hyp, Tope::Bot) || hyp == goal {
            return Ok(true);
        }
        self.session.entails(hyp, goal)
    }

    /// Whether the restriction entails `goal`.
    pub fn entails(&self, goal: &Tope<Lvl>) -> KResult<bool> {
        self.entails_under(&self.restriction, goal)
    }

    pub fn satisfiable(&self) -> KResult<bool> {
        Ok(!self.entails(&Tope::Bot)?)
    }

    /// A chain countermodel to `restriction => goal`, rendered with source
    /// names.
    pub fn countermodel(&self, goal: &Tope<Lvl>) -> Option<String> {
        let hyp = self.named_tope(&self.restriction);
        let goal = self.named_tope(goal);
        let mut vars = hyp.vars();
        vars.extend(goal.vars());
        let cube = CubeContext::new(vars.into_iter().collect()).ok()?;
        tope::countermodel(&cube, &hyp, &goal).ok().flatten().map(|cm| cm.to_string())
    }

    pub fn points_equal(&self, p: &PointVal, q: &PointVal) -> KResult<bool> {
        if p == q {
            return Ok(true);
        }
        self.entails(&Tope::eq(p.clone(), q.clone()))
    }

    // -- forcing ------------------------------------------------------------

    pub fn head_type(&self, h: &Head) -> Option<Val> {
        match h {
            Head::Var(l) => self.types.get(*l).cloned().flatten(),
            Head::Axiom(n) => self.globals.get(n).map(|g| g.ty.clone()),
        }
    }

    /// Resolves tope cases and boundary applications that the restriction
    /// decides.
    pub fn force(&self, v: &Val) -> KResult<Val> {
        match &**v {
            Value::Case(bs) => {
                for (guard, b) in bs {
                    if self.entails(guard)? {
                        return self.force(b);
                    }
                }
                Ok(v.clone())
            }
            Value::Neutral(h, sp) if sp.iter().any(|e| matches!(e, Elim::ExtApp(_))) => {
                self.force_neutral(h, sp, v)
            }
            _ => Ok(v.clone()),
        }
    }

    fn force_neutral(&self, h: &Head, sp: &[Elim], v: &Val) -> KResult<Val> {
        let g = self.globals;
        let Some(mut ty) = self.head_type(h) else {
            return Ok(v.clone());
        };
        let mut cur: Val = Rc::new(Value::Neutral(h.clone(), Vec::new()));
        for (i, e) in sp.iter().enumerate() {
            let tyf = self.force(&ty)?;
            let next = match (e, &*tyf) {
                (Elim::ExtApp(pts), Value::Ext(ec)) => {
                    if !ec.ty.boundary.is_empty() && self.entails(&ec.subshape(pts))? {
                        let mut r = ec.boundary(g, pts);
                        for later in &sp[i + 1..] {
                            r = apply_elim(g, r, later);
                        }
                        return self.force(&r);
                    }
                    ec.family(g, pts)
                }
                (Elim::App(a), Value::Pi(_, _, b)) => b.apply(g, a.clone()),
                (Elim::Fst, Value::Sigma(_, a, _)) => a.clone(),
                (Elim::Snd, Value::Sigma(_, _, b)) => b.apply(g, fst(cur.clone())),
                (Elim::J(m, _), Value::Id(_, _, y)) => apply(g, apply(g, m.clone(), y.clone()), cur.clone()),
                _ => return Ok(v.clone()),
            };
            cur = apply_elim(g, cur, e);
            ty = next;
        }
        Ok(v.clone())
    }

    // -- definitional equality ----------------------------------------------

    /// Type-directed definitional equality of `a` and `b` at `ty` under the
    /// restriction.
    pub fn conv(&self, ty: &Val, a: &Val, b: &Val) -> KResult<bool> {
        if !self.satisfiable()? {
            return Ok(true);
        }
        if self.conv_inner(ty, a, b)? {
            return Ok(true);
        }
        let clauses = dnf_clauses(&self.restriction);
        if clauses.len() > 1 {
            for c in clauses {
                if !self.with_restriction(c).conv(ty, a, b)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        Ok(false)
    }

    /// Runs `f` under each guard of a stuck case, skipping empty branches.
    fn split<T>(
        &self,
        guards: &[(Tope<Lvl>, Val)],
        mut f: impl FnMut(&Ctx<'a>) -> KResult<T>,
    ) -> KResult<Vec<(Tope<Lvl>, T)>> {
        let mut out = Vec::new();
        for (guard, _) in guards {
            let ctx = self.restrict(guard.clone());
            if ctx.satisfiable()? {
                out.push((guard.clone(), f(&ctx)?));
            }
        }
        Ok(out)
    }

    fn conv_inner(&self, ty: &Val, a: &Val, b: &Val) -> KResult<bool> {
        let g = self.globals;
        let ty = self.force(ty)?;
        let a = self.force(a)?;
        let b = self.force(b)?;
        for v in [&ty, &a, &b] {
            if let Value::Case(bs) = &**v {
                let results = self.split(bs, |ctx| ctx.conv(&ty, &a, &b))?;
                return Ok(results.into_iter().all(|(_, ok)| ok));
            }
        }
        match &*ty {
            Value::Pi(n, dom, cod) => {
                let (ctx, x) = self.bind(n, dom.clone());
                ctx.conv(&cod.apply(g, x.clone()), &apply(g, a, x.clone()), &apply(g, b, x))
            }
            Value::Sigma(_, dom, cod) => {
                let (a1, b1) = (fst(a.clone()), fst(b.clone()));
                Ok(self.conv(dom, &a1, &b1)? && self.conv(&cod.apply(g, a1), &snd(a), &snd(b))?)
            }
            Value::Ext(ec) => {
                let (ctx, pts) = self.bind_cube(&ec.ty.binders);
                let ctx = ctx.restrict(ec.shape(&pts));
                ctx.conv(&ec.family(g, &pts), &ext_apply(g, a, &pts), &ext_apply(g, b, &pts))
            }
            _ => self.conv_struct(&a, &b),
        }
    }

    fn universe() -> Val {
        Rc::new(Value::Universe)
    }

    fn conv_struct(&self, a: &Val, b: &Val) -> KResult<bool> {
        let g = self.globals;
        let u = Ctx::universe();
        match (&**a, &**b) {
            (Value::Universe, Value::Universe) | (Value::Refl, Value::Refl) => Ok(true),
            (Value::Pi(n, a1, b1), Value::Pi(_, a2, b2)) | (Value::Sigma(n, a1, b1), Value::Sigma(_, a2, b2))
                if std::mem::discriminant(&**a) == std::mem::discriminant(&**b) =>
            {
                if !self.conv(&u, a1, a2)? {
                    return Ok(false);
                }
                let (ctx, x) = self.bind(n, a1.clone());
                ctx.conv(&u, &b1.apply(g, x.clone()), &b2.apply(g, x))
            }
            (Value::Id(t1, x1, y1), Value::Id(t2, x2, y2)) => {
                Ok(self.conv(&u, t1, t2)? && self.conv(t1, x1, x2)? && self.conv(t1, y1, y2)?)
            }
            (Value::Ext(e1), Value::Ext(e2)) => {
                if e1.arity() != e2.arity() {
                    return Ok(false);
                }
                let (ctx, pts) = self.bind_cube(&e1.ty.binders);
                let (s1, s2) = (e1.shape(&pts), e2.shape(&pts));
                let r = &ctx.restriction;
                if !(ctx.entails_under(&Tope::and(r.clone(), s1.clone()), &s2)?
                    && ctx.entails_under(&Tope::and(r.clone(), s2), &s1)?)
                {
                    return Ok(false);
                }
                let ctx = ctx.restrict(s1);
                let fam = e1.family(g, &pts);
                if !ctx.conv(&u, &fam, &e2.family(g, &pts))? {
                    return Ok(false);
                }
                let (sub1, sub2) = (e1.subshape(&pts), e2.subshape(&pts));
                let r = &ctx.restriction;
                if !(ctx.entails_under(&Tope::and(r.clone(), sub1.clone()), &sub2)?
                    && ctx.entails_under(&Tope::and(r.clone(), sub2), &sub1)?)
                {
                    return Ok(false);
                }
                if e1.ty.boundary.is_empty() {
                    return Ok(true);
                }
                ctx.restrict(sub1).conv(&fam, &e1.boundary(g, &pts), &e2.boundary(g, &pts))
            }
            (Value::Neutral(h1, sp1), Value::Neutral(h2, sp2)) => self.conv_neutral(h1, sp1, h2, sp2),
            _ => Ok(false),
        }
    }

    fn conv_neutral(&self, h1: &Head, sp1: &[Elim], h2: &Head, sp2: &[Elim]) -> KResult<bool> {
        let g = self.globals;
        if h1 != h2 || sp1.len() != sp2.len() {
            return Ok(false);
        }
        let Some(mut ty) = self.head_type(h1) else {
            return Ok(false);
        };
        let mut cur: Val = Rc::new(Value::Neutral(h1.clone(), Vec::new()));
        for (e1, e2) in sp1.iter().zip(sp2) {
            let tyf = self.force(&ty)?;
            let next = match (e1, e2, &*tyf) {
                (Elim::App(a1), Elim::App(a2), Value::Pi(_, dom, cod)) => {
                    if !self.conv(dom, a1, a2)? {
                        return Ok(false);
                    }
                    cod.apply(g, a1.clone())
                }
                (Elim::Fst, Elim::Fst, Value::Sigma(_, dom, _)) => dom.clone(),
                (Elim::Snd, Elim::Snd, Value::Sigma(_, _, cod)) => cod.apply(g, fst(cur.clone())),
                (Elim::ExtApp(p1), Elim::ExtApp(p2), Value::Ext(ec)) => {
                    for (p, q) in p1.iter().zip(p2) {
                        if !self.points_equal(p, q)? {
                            return Ok(false);
                        }
                    }
                    ec.family(g, p1)
                }
                (Elim::J(m1, b1), Elim::J(m2, b2), Value::Id(a, x, y)) => {
                    let u = Ctx::universe();
                    let (ctx, yv) = self.bind("y", a.clone());
                    let path_ty = Rc::new(Value::Id(a.clone(), x.clone(), yv.clone()));
                    let (ctx, pv) = ctx.bind("p", path_ty);
                    let motive = |m: &Val| apply(g, apply(g, m.clone(), yv.clone()), pv.clone());
                    if !ctx.conv(&u, &motive(m1), &motive(m2))? {
                        return Ok(false);
                    }
                    let base_ty = apply(g, apply(g, m1.clone(), x.clone()), Rc::new(Value::Refl));
                    if !self.conv(&base_ty, b1, b2)? {
                        return Ok(false);
                    }
                    apply(g, apply(g, m1.clone(), y.clone()), cur.clone())
                }
                _ => return Ok(false),
            };
            cur = apply_elim(g, cur, e1);
            ty = next;
        }
        Ok(true)
    }

    // -- readback -----------------------------------------------------------

    /// Typed readback: an eta-long normal form of `v` at `ty`, with boundary
    /// applications resolved and interval terms replaced by canonical
    /// representatives under the restriction.
    pub fn readback(&self, ty: &Val, v: &Val) -> KResult<Term> {
        let g = self.globals;
        if !self.satisfiable()? {
            return Ok(self.quote(v));
        }
        let ty = self.force(ty)?;
        let v = self.force(v)?;
        for w in [&ty, &v] {
            if let Value::Case(bs) = &**w {
                let branches = self.split(bs, |ctx| ctx.readback(&ty, &v))?;
                return Ok(Term::Case(branches.into_iter().map(|(guard, t)| (self.quote_tope(&guard), t)).collect()));
            }
        }
        match &*ty {
            Value::Pi(n, dom, cod) => {
                let name = match &*v {
                    Value::Lam(m, _) => m.clone(),
                    _ => n.clone(),
                };
                let (ctx, x) = self.bind(&name, dom.clone());
                let body = ctx.readback(&cod.apply(g, x.clone()), &apply(g, v, x))?;
                Ok(Term::Lam(name, Rc::new(body)))
            }
            Value::Sigma(_, dom, cod) => {
                let a = fst(v.clone());
                let first = self.readback(dom, &a)?;
                let second = self.readback(&cod.apply(g, a), &snd(v))?;
                Ok(Term::pair(first, second))
            }
            Value::Ext(ec) => {
                let names = match &*v {
                    Value::ExtLam(ns, _) if ns.len() == ec.arity() => ns.clone(),
                    _ => ec.ty.binders.clone(),
                };
                let (ctx, pts) = self.bind_cube(&names);
                let ctx = ctx.restrict(ec.shape(&pts));
                let body = ctx.readback(&ec.family(g, &pts), &ext_apply(g, v, &pts))?;
                Ok(Term::ExtLam(names, Rc::new(body)))
            }
            Value::Universe => self.readback_type(&v),
            _ => match &*v {
                Value::Neutral(h, sp) => self.readback_neutral(h, sp),
                _ => Ok(self.quote(&v)),
            },
        }
    }

    pub fn readback_type(&self, v: &Val) -> KResult<Term> {
        let g = self.globals;
        let u = Ctx::universe();
        let v = self.force(v)?;
        match &*v {
            Value::Universe => Ok(Term::Universe),
            Value::Pi(n, a, b) | Value::Sigma(n, a, b) => {
                let dom = self.readback_type(a)?;
                let (ctx, x) = self.bind(n, a.clone());
                let cod = ctx.readback_type(&b.apply(g, x))?;
                Ok(match &*v {
                    Value::Pi(..) => Term::Pi(n.clone(), Rc::new(dom), Rc::new(cod)),
                    _ => Term::Sigma(n.clone(), Rc::new(dom), Rc::new(cod)),
                })
            }
            Value::Id(a, x, y) => Ok(Term::id(self.readback_type(a)?, self.readback(a, x)?, self.readback(a, y)?)),
            Value::Ext(ec) => {
                let (ctx, pts) = self.bind_cube(&ec.ty.binders);
                let shape_val = ec.shape(&pts);
                let shape = ctx.quote_tope(&shape_val);
                let inner = ctx.restrict(shape_val);
                let fam = ec.family(g, &pts);
                let family = inner.readback_type(&fam)?;
                let penv = ec.env.extend(pts.iter().map(|p| Rc::new(Value::Point(p.clone()))));
                let mut boundary = Vec::new();
                for (guard, t) in &ec.ty.boundary {
                    let gv = eval_tope(&penv, guard);
                    let tv = eval(g, &penv, t);
                    let bctx = inner.restrict(gv.clone());
                    let bt = if bctx.satisfiable()? { bctx.readback(&fam, &tv)? } else { bctx.quote(&tv) };
                    boundary.push((ctx.quote_tope(&gv), bt));
                }
                Ok(Term::Ext(Rc::new(ExtType { binders: ec.ty.binders.clone(), shape, family, boundary })))
            }
            Value::Neutral(h, sp) => self.readback_neutral(h, sp),
            Value::Case(bs) => {
                let branches = self.split(bs, |ctx| ctx.readback(&u, &v))?;
                Ok(Term::Case(branches.into_iter().map(|(guard, t)| (self.quote_tope(&guard), t)).collect()))
            }
            _ => Ok(self.quote(&v)),
        }
    }

    fn canonical_point(&self, p: &PointVal) -> KResult<IntervalTerm<usize>> {
        let lvl = self.lvl();
        let canonical = if self.entails(&Tope::eq(p.clone(), IntervalTerm::Zero))? {
            IntervalTerm::Zero
        } else if self.entails(&Tope::eq(p.clone(), IntervalTerm::One))? {
            IntervalTerm::One
        } else {
            let mut found = p.clone();
            for l in (0..lvl).filter(|l| self.is_cube_var(*l)) {
                let q = IntervalTerm::Var(l);
                if self.points_equal(&q, p)? {
                    found = q;
                    break;
                }
            }
            found
        };
        Ok(quote_point(lvl, &canonical))
    }

    fn readback_neutral(&self, h: &Head, sp: &[Elim]) -> KResult<Term> {
        let g = self.globals;
        let lvl = self.lvl();
        let mut term = match h {
            Head::Var(l) => Term::Var(lvl - 1 - l),
            Head::Axiom(n) => Term::Const(n.clone()),
        };
        let Some(mut ty) = self.head_type(h) else {
            return Ok(self.quote(&Rc::new(Value::Neutral(h.clone(), sp.to_vec()))));
        };
        let mut cur: Val = Rc::new(Value::Neutral(h.clone(), Vec::new()));
        for e in sp {
            let tyf = self.force(&ty)?;
            let next = match (e, &*tyf) {
                (Elim::App(a), Value::Pi(_, dom, cod)) => {
                    term = Term::app(term, self.readback(dom, a)?);
                    cod.apply(g, a.clone())
                }
                (Elim::Fst, Value::Sigma(_, dom, _)) => {
                    term = Term::Fst(Rc::new(term));
                    dom.clone()
                }
                (Elim::Snd, Value::Sigma(_, _, cod)) => {
                    term = Term::Snd(Rc::new(term));
                    cod.apply(g, fst(cur.clone()))
                }
                (Elim::ExtApp(pts), Value::Ext(ec)) => {
                    let qs = pts.iter().map(|p| self.canonical_point(p)).collect::<KResult<Vec<_>>>()?;
                    term = Term::ExtApp(Rc::new(term), qs);
                    ec.family(g, pts)
                }
                (Elim::J(m, b), Value::Id(a, x, y)) => {
                    let (ctx, yv) = self.bind("y", a.clone());
                    let path_ty = Rc::new(Value::Id(a.clone(), x.clone(), yv.clone()));
                    let (ctx, pv) = ctx.bind("p", path_ty);
                    let body = ctx.readback_type(&apply(g, apply(g, m.clone(), yv), pv))?;
                    let motive = Term::lam("y", Term::lam("p", body));
                    let base_ty = apply(g, apply(g, m.clone(), x.clone()), Rc::new(Value::Refl));
                    let base = self.readback(&base_ty, b)?;
                    term = Term::J(Rc::new(motive), Rc::new(base), Rc::new(term));
                    apply(g, apply(g, m.clone(), y.clone()), cur.clone())
                }
                _ => return Ok(self.quote(&Rc::new(Value::Neutral(h.clone(), sp.to_vec())))),
            };
            cur = apply_elim(g, cur, e);
            ty = next;
        }
        Ok(term)
    }
}

fn truncate(s: String) -> String {
    if s.chars().count() <= SHOW_LIMIT {
        return s;
    }
    let cut: String = s.chars().take(SHOW_LIMIT).collect();
    format!("{cut}...")
}

pub fn quote_point(lvl: Lvl, p: &PointVal) -> IntervalTerm<usize> {
    match p {
        IntervalTerm::Var(l) => IntervalTerm::Var(lvl - 1 - l),
        IntervalTerm::Zero => IntervalTerm::Zero,
        IntervalTerm::One => IntervalTerm::One,
    }
}

pub fn quote_tope(lvl: Lvl, t: &Tope<Lvl>) -> Tope<usize> {
    t.map_vars(&mut |l| IntervalTerm::Var(lvl - 1 - l))
}

/// Untyped readback at depth `lvl`.
pub fn quote(g: &Globals, lvl: Lvl, v: &Val) -> Term {
    let fresh = |l: Lvl| Rc::new(Value::Neutral(Head::Var(l), Vec::new()));
    match &**v {
        Value::Universe => Term::Universe,
        Value::Refl => Term::Refl,
        Value::Pi(n, a, b) => Term::Pi(n.clone(), Rc::new(quote(g, lvl, a)), Rc::new(quote(g, lvl + 1, &b.apply(g, fresh(lvl))))),
        Value::Sigma(n, a, b) => {
            Term::Sigma(n.clone(), Rc::new(quote(g, lvl, a)), Rc::new(quote(g, lvl + 1, &b.apply(g, fresh(lvl)))))
        }
        Value::Lam(n, b) => Term::Lam(n.clone(), Rc::new(quote(g, lvl + 1, &b.apply(g, fresh(lvl))))),
        Value::Pair(a, b) => Term::pair(quote(g, lvl, a), quote(g, lvl, b)),
        Value::Id(a, x, y) => Term::id(quote(g, lvl, a), quote(g, lvl, x), quote(g, lvl, y)),
        Value::Ext(ec) => {
            let k = ec.arity();
            let pts: Vec<PointVal> = (lvl..lvl + k).map(IntervalTerm::Var).collect();
            let inner = lvl + k;
            let env = ec.env.extend(pts.iter().map(|p| Rc::new(Value::Point(p.clone()))));
            Term::Ext(Rc::new(ExtType {
                binders: ec.ty.binders.clone(),
                shape: quote_tope(inner, &eval_tope(&env, &ec.ty.shape)),
                family: quote(g, inner, &eval(g, &env, &ec.ty.family)),
                boundary: ec
                    .ty
                    .boundary
                    .iter()
                    .map(|(guard, t)| (quote_tope(inner, &eval_tope(&env, guard)), quote(g, inner, &eval(g, &env, t))))
                    .collect(),
            }))
        }
        Value::ExtLam(ns, b) => {
            let k = ns.len();
            let pts: Vec<PointVal> = (lvl..lvl + k).map(IntervalTerm::Var).collect();
            Term::ExtLam(ns.clone(), Rc::new(quote(g, lvl + k, &b.apply_points(g, &pts))))
        }
        Value::Case(bs) => {
            Term::Case(bs.iter().map(|(guard, b)| (quote_tope(lvl, guard), quote(g, lvl, b))).collect())
        }
        Value::Neutral(h, sp) => {
            let mut t = match h {
                Head::Var(l) => Term::Var(lvl - 1 - l),
                Head::Axiom(n) => Term::Const(n.clone()),
            };
            for e in sp {
                t = match e {
                    Elim::App(a) => Term::app(t, quote(g, lvl, a)),
                    Elim::Fst => Term::Fst(Rc::new(t)),
                    Elim::Snd => Term::Snd(Rc::new(t)),
                    Elim::ExtApp(pts) => Term::ExtApp(Rc::new(t), pts.iter().map(|p| quote_point(lvl, p)).collect()),
                    Elim::J(m, b) => Term::J(Rc::new(quote(g, lvl, m)), Rc::new(quote(g, lvl, b)), Rc::new(t)),
                };
            }
            t
        }
        Value::Point(p) => panic!("interval point {p:?} read back as a term"),
    }
}
