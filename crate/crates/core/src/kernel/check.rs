//! Bidirectional checking and synthesis.

use std::rc::Rc;

use super::ctx::{quote, Ctx};
use super::error::{ErrorClass, KResult, KernelError};
use super::syntax::{ExtType, Term};
use super::value::{apply, eval, eval_point, eval_tope, fst, ExtClosure, PointVal, Val, Value};
use crate::tope::{IntervalTerm, Tope};

fn universe() -> Val {
    Rc::new(Value::Universe)
}

fn err(class: ErrorClass, message: impl Into<String>) -> KernelError {
    KernelError::new(class, message)
}

impl<'a> Ctx<'a> {
    fn mismatch(&self, expected: &Val, found: &Val) -> KernelError {
        err(
            ErrorClass::TypeMismatch,
            format!("expected type {}, found {}", self.show(expected), self.show(found)),
        )
    }

    /// Checks `t` against the type value `ty`.
    pub fn check(&self, t: &Term, ty: &Val) -> KResult<()> {
        if !self.satisfiable()? {
            return Ok(());
        }
        let g = self.globals;
        let tyf = self.force(ty)?;
        if let Value::Case(bs) = &*tyf {
            for (guard, _) in bs {
                let ctx = self.restrict(guard.clone());
                if ctx.satisfiable()? {
                    ctx.check(t, &tyf)?;
                }
            }
            return Ok(());
        }
        match (t, &*tyf) {
            (Term::Lam(n, body), Value::Pi(_, dom, cod)) => {
                let (ctx, x) = self.bind(n, dom.clone());
                ctx.check(body, &cod.apply(g, x))
            }
            (Term::Lam(..), _) => Err(err(
                ErrorClass::TypeMismatch,
                format!("a function was given where {} was expected", self.show(&tyf)),
            )),
            (Term::Pair(a, b), Value::Sigma(_, dom, cod)) => {
                self.check(a, dom)?;
                self.check(b, &cod.apply(g, self.eval(a)))
            }
            (Term::Pair(..), _) => Err(err(
                ErrorClass::TypeMismatch,
                format!("a pair was given where {} was expected", self.show(&tyf)),
            )),
            (Term::Refl, Value::Id(a, x, y)) => {
                if self.conv(a, x, y)? {
                    Ok(())
                } else {
                    Err(err(
                        ErrorClass::TypeMismatch,
                        format!("refl: endpoints {} and {} are not equal", self.show(x), self.show(y)),
                    ))
                }
            }
            (Term::Refl, _) => Err(err(
                ErrorClass::TypeMismatch,
                format!("refl was given where {} was expected", self.show(&tyf)),
            )),
            (Term::ExtLam(names, body), Value::Ext(ec)) => self.check_ext_lam(names, body, ec),
            (Term::ExtLam(..), _) => Err(err(
                ErrorClass::TypeMismatch,
                format!("a shape abstraction was given where {} was expected", self.show(&tyf)),
            )),
            (Term::Case(bs), _) => self.check_case(bs, &tyf),
            _ => {
                let found = self.infer(t)?;
                if self.conv(&universe(), &found, &tyf)? {
                    Ok(())
                } else {
                    Err(self.mismatch(&tyf, &found))
                }
            }
        }
    }

    fn check_ext_lam(&self, names: &[String], body: &Term, ec: &ExtClosure) -> KResult<()> {
        let g = self.globals;
        if names.len() != ec.arity() {
            return Err(err(
                ErrorClass::TypeMismatch,
                format!("shape abstraction binds {} variables, the type expects {}", names.len(), ec.arity()),
            ));
        }
        let (ctx, pts) = self.bind_cube(names);
        let ctx = ctx.restrict(ec.shape(&pts));
        let family = ec.family(g, &pts);
        ctx.check(body, &family)?;
        let value = ctx.eval(body);
        let penv = ec.env.extend(pts.iter().map(|p| Rc::new(Value::Point(p.clone()))));
        for (guard, bt) in &ec.ty.boundary {
            let gv = eval_tope(&penv, guard);
            let bctx = ctx.restrict(gv.clone());
            let expected = eval(g, &penv, bt);
            if !bctx.conv(&family, &value, &expected)? {
                return Err(err(
                    ErrorClass::BoundaryMismatch,
                    format!(
                        "on {}: expected {}, found {}",
                        ctx.show_tope(&gv),
                        bctx.show(&expected),
                        bctx.show(&value)
                    ),
                ));
            }
        }
        Ok(())
    }

    fn check_case(&self, bs: &[(Tope<usize>, Term)], ty: &Val) -> KResult<()> {
        for (guard, _) in bs {
            self.check_tope_scope(guard)?;
        }
        let guards: Vec<Tope<usize>> = bs.iter().map(|(guard, _)| self.eval_tope(guard)).collect();
        let cover = Tope::disj(guards.iter().cloned());
        if !self.entails(&cover)? {
            return Err(err(
                ErrorClass::CaseCoverage,
                format!(
                    "the cases {} do not cover the restriction {}",
                    self.show_tope(&cover),
                    self.show_tope(&self.restriction)
                ),
            )
            .with_countermodel(self.countermodel(&cover)));
        }
        for (guard, (_, t)) in guards.iter().zip(bs) {
            let ctx = self.restrict(guard.clone());
            if ctx.satisfiable()? {
                ctx.check(t, ty)?;
            }
        }
        for i in 0..bs.len() {
            for j in i + 1..bs.len() {
                let ctx = self.restrict(Tope::and(guards[i].clone(), guards[j].clone()));
                if !ctx.satisfiable()? {
                    continue;
                }
                let (a, b) = (ctx.eval(&bs[i].1), ctx.eval(&bs[j].1));
                if !ctx.conv(ty, &a, &b)? {
                    return Err(err(
                        ErrorClass::IncompatibleCases,
                        format!(
                            "cases {} and {} disagree on their overlap: {} versus {}",
                            self.show_tope(&guards[i]),
                            self.show_tope(&guards[j]),
                            ctx.show(&a),
                            ctx.show(&b)
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_point_scope(&self, p: &IntervalTerm<usize>) -> KResult<()> {
        if let IntervalTerm::Var(ix) = p {
            let ok = self.lvl().checked_sub(ix + 1).is_some_and(|l| self.is_cube_var(l));
            if !ok {
                let name = self.lvl().checked_sub(ix + 1).map_or("?", |l| self.names[l].as_str());
                return Err(err(ErrorClass::Scope, format!("{name} is not a cube variable")));
            }
        }
        Ok(())
    }

    fn check_tope_scope(&self, t: &Tope<usize>) -> KResult<()> {
        for ix in t.vars() {
            self.check_point_scope(&IntervalTerm::Var(ix))?;
        }
        Ok(())
    }

    fn check_type(&self, t: &Term) -> KResult<()> {
        self.check(t, &universe())
    }

    /// Synthesizes the type of `t`.
    pub fn infer(&self, t: &Term) -> KResult<Val> {
        let g = self.globals;
        match t {
            Term::Var(ix) => {
                let l = self.lvl() - 1 - ix;
                match &self.types[l] {
                    Some(ty) => Ok(ty.clone()),
                    None => Err(err(
                        ErrorClass::Scope,
                        format!("cube variable {} used as a term", self.names[l]),
                    )),
                }
            }
            Term::Const(n) => match g.get(n) {
                Some(entry) => Ok(entry.ty.clone()),
                None => Err(err(ErrorClass::Scope, format!("unknown identifier {n}"))),
            },
            Term::Universe => Ok(universe()),
            Term::Pi(n, a, b) | Term::Sigma(n, a, b) => {
                self.check_type(a)?;
                let (ctx, _) = self.bind(n, self.eval(a));
                ctx.check_type(b)?;
                Ok(universe())
            }
            Term::App(f, a) => {
                let tf = self.force(&self.infer(f)?)?;
                match &*tf {
                    Value::Pi(_, dom, cod) => {
                        self.check(a, dom)?;
                        Ok(cod.apply(g, self.eval(a)))
                    }
                    _ => Err(err(
                        ErrorClass::TypeMismatch,
                        format!("{} is applied to an argument but has type {}", self.show_term(f), self.show(&tf)),
                    )),
                }
            }
            Term::Fst(p) | Term::Snd(p) => {
                let tp = self.force(&self.infer(p)?)?;
                match &*tp {
                    Value::Sigma(_, dom, cod) => Ok(match t {
                        Term::Fst(_) => dom.clone(),
                        _ => cod.apply(g, fst(self.eval(p))),
                    }),
                    _ => Err(err(
                        ErrorClass::TypeMismatch,
                        format!("{} is projected but has type {}", self.show_term(p), self.show(&tp)),
                    )),
                }
            }
            Term::Id(a, x, y) => {
                self.check_type(a)?;
                let av = self.eval(a);
                self.check(x, &av)?;
                self.check(y, &av)?;
                Ok(universe())
            }
            Term::J(motive, base, path) => self.infer_j(motive, base, path),
            Term::Ext(e) => {
                self.check_ext_type(e)?;
                Ok(universe())
            }
            Term::ExtApp(f, pts) => {
                let tf = self.force(&self.infer(f)?)?;
                let Value::Ext(ec) = &*tf else {
                    return Err(err(
                        ErrorClass::TypeMismatch,
                        format!("{} is applied to points but has type {}", self.show_term(f), self.show(&tf)),
                    ));
                };
                if pts.len() != ec.arity() {
                    return Err(err(
                        ErrorClass::TypeMismatch,
                        format!("{} expects {} points, given {}", self.show_term(f), ec.arity(), pts.len()),
                    ));
                }
                for p in pts {
                    self.check_point_scope(p)?;
                }
                let pv: Vec<PointVal> = pts.iter().map(|p| eval_point(&self.env, p)).collect();
                let shape = ec.shape(&pv);
                if !self.entails(&shape)? {
                    return Err(err(
                        ErrorClass::ShapeMembership,
                        format!(
                            "the points ({}) do not satisfy {} under {}",
                            pv.iter().map(|p| self.show_point(p)).collect::<Vec<_>>().join(", "),
                            self.show_tope(&shape),
                            self.show_tope(&self.restriction)
                        ),
                    )
                    .with_countermodel(self.countermodel(&shape)));
                }
                Ok(ec.family(g, &pv))
            }
            Term::Lam(..) | Term::Pair(..) | Term::Refl | Term::ExtLam(..) | Term::Case(..) => Err(err(
                ErrorClass::NotSynthesizable,
                format!("cannot synthesize a type for {}; add a type annotation", self.show_term(t)),
            )),
        }
    }

    fn infer_j(&self, motive: &Term, base: &Term, path: &Term) -> KResult<Val> {
        let g = self.globals;
        let tp = self.force(&self.infer(path)?)?;
        let Value::Id(a, x, y) = &*tp else {
            return Err(err(
                ErrorClass::TypeMismatch,
                format!("path induction on {} of non-identity type {}", self.show_term(path), self.show(&tp)),
            ));
        };
        let lvl = self.lvl();
        let motive_ty = Term::pi(
            "y",
            quote(g, lvl, a),
            Term::pi("p", Term::id(quote(g, lvl + 1, a), quote(g, lvl + 1, x), Term::Var(0)), Term::Universe),
        );
        self.check(motive, &self.eval(&motive_ty))?;
        let mv = self.eval(motive);
        self.check(base, &apply(g, apply(g, mv.clone(), x.clone()), Rc::new(Value::Refl)))?;
        Ok(apply(g, apply(g, mv, y.clone()), self.eval(path)))
    }

    fn check_ext_type(&self, e: &ExtType) -> KResult<()> {
        if e.binders.is_empty() {
            return Err(err(ErrorClass::Syntax, "an extension type binds at least one cube variable"));
        }
        let (ctx, _) = self.bind_cube(&e.binders);
        ctx.check_tope_scope(&e.shape)?;
        for (guard, _) in &e.boundary {
            ctx.check_tope_scope(guard)?;
        }
        let shape = ctx.eval_tope(&e.shape);
        let inner = ctx.restrict(shape.clone());
        inner.check_type(&e.family)?;
        if e.boundary.is_empty() {
            return Ok(());
        }
        let sub = ctx.eval_tope(&e.subshape());
        let hyp = Tope::and(ctx.restriction.clone(), sub.clone());
        if !ctx.entails_under(&hyp, &shape)? {
            return Err(err(
                ErrorClass::NonInclusion,
                format!("the subshape {} is not contained in the shape {}", ctx.show_tope(&sub), ctx.show_tope(&shape)),
            )
            .with_countermodel(ctx.with_restriction(hyp).countermodel(&shape)));
        }
        let family = inner.eval(&e.family);
        inner.restrict(sub).check_case(&e.boundary, &family)
    }
}
