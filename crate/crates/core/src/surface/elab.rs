//! Elaboration of surface syntax to core terms: name resolution and
//! desugaring of parameters, telescopes and the two-point boundary form.

use std::rc::Rc;

use super::ast::{Expr, Ident, Param, Pos, SDecl, SDeclBody, SPoint, STope, SurfaceModule};
use super::parser::{FailedDecl, Item};
use crate::kernel::{Decl, DeclBody, DeclKind, ErrorClass, ExtType, KernelError, Span, Term};
use crate::tope::{IntervalTerm, Tope};

/// Name of the two-point boundary form `rec01 a b`, which stands for
/// `[v==0 |-> a, v==1 |-> b]` over the innermost cube variable `v`.
pub const REC01: &str = "rec01";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Term,
    Cube,
}

/// Local names in scope, innermost last.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    vars: Vec<(String, VarKind)>,
}

type EResult<T> = Result<T, (KernelError, Pos)>;

fn scope_error(message: String, pos: Pos) -> (KernelError, Pos) {
    (KernelError::new(ErrorClass::Scope, message), pos)
}

impl Scope {
    pub fn new() -> Scope {
        Scope::default()
    }

    pub fn from_names(names: &[(&str, VarKind)]) -> Scope {
        Scope { vars: names.iter().map(|(n, k)| (n.to_string(), *k)).collect() }
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|(n, _)| n.clone()).collect()
    }

    fn lookup(&self, name: &str) -> Option<(usize, VarKind)> {
        self.vars.iter().rev().position(|(n, _)| n == name).map(|ix| (ix, self.vars[self.vars.len() - 1 - ix].1))
    }

    fn with(&self, names: impl IntoIterator<Item = String>, kind: VarKind) -> Scope {
        let mut s = self.clone();
        s.vars.extend(names.into_iter().map(|n| (n, kind)));
        s
    }

    fn cube_index(&self, id: &Ident) -> EResult<usize> {
        match self.lookup(&id.name) {
            Some((ix, VarKind::Cube)) => Ok(ix),
            Some((_, VarKind::Term)) => {
                Err(scope_error(format!("{} is a term variable, not a cube variable", id.name), id.pos))
            }
            None => Err(scope_error(format!("cube variable {} is not in scope", id.name), id.pos)),
        }
    }

    fn point(&self, p: &SPoint) -> EResult<IntervalTerm<usize>> {
        Ok(match p {
            IntervalTerm::Var(id) => IntervalTerm::Var(self.cube_index(id)?),
            IntervalTerm::Zero => IntervalTerm::Zero,
            IntervalTerm::One => IntervalTerm::One,
        })
    }

    pub fn tope(&self, t: &STope) -> EResult<Tope<usize>> {
        Ok(match t {
            Tope::Top => Tope::Top,
            Tope::Bot => Tope::Bot,
            Tope::And(a, b) => Tope::And(Box::new(self.tope(a)?), Box::new(self.tope(b)?)),
            Tope::Or(a, b) => Tope::Or(Box::new(self.tope(a)?), Box::new(self.tope(b)?)),
            Tope::Le(a, b) => Tope::Le(self.point(a)?, self.point(b)?),
            Tope::Eq(a, b) => Tope::Eq(self.point(a)?, self.point(b)?),
        })
    }

    fn cases(&self, cases: &[(STope, Expr)]) -> EResult<Vec<(Tope<usize>, Term)>> {
        cases.iter().map(|(g, t)| Ok((self.tope(g)?, self.term(t)?))).collect()
    }

    pub fn term(&self, e: &Expr) -> EResult<Term> {
        Ok(match e {
            Expr::Var(id) => match self.lookup(&id.name) {
                Some((ix, VarKind::Term)) => Term::Var(ix),
                Some((_, VarKind::Cube)) => {
                    return Err(scope_error(format!("cube variable {} used as a term", id.name), id.pos))
                }
                None => Term::Const(id.name.clone()),
            },
            Expr::Universe => Term::Universe,
            Expr::Refl => Term::Refl,
            Expr::Pi(groups, cod) => {
                let mut binders = Vec::new();
                let mut scope = self.clone();
                for (names, ty) in groups {
                    for n in names {
                        binders.push((n.name.clone(), scope.term(ty)?));
                        scope = scope.with([n.name.clone()], VarKind::Term);
                    }
                }
                let mut t = scope.term(cod)?;
                for (n, ty) in binders.into_iter().rev() {
                    t = Term::Pi(n, Rc::new(ty), Rc::new(t));
                }
                t
            }
            Expr::Arrow(a, b) => {
                let dom = self.term(a)?;
                let cod = self.with(["_".to_string()], VarKind::Term).term(b)?;
                Term::Pi("_".into(), Rc::new(dom), Rc::new(cod))
            }
            Expr::Lam(names, body) => {
                let b = self.with(names.iter().map(|n| n.name.clone()), VarKind::Term).term(body)?;
                names.iter().rev().fold(b, |acc, n| Term::Lam(n.name.clone(), Rc::new(acc)))
            }
            Expr::Sigma(names, dom, cod) => {
                let mut doms = Vec::new();
                let mut scope = self.clone();
                for n in names {
                    doms.push((n.name.clone(), scope.term(dom)?));
                    scope = scope.with([n.name.clone()], VarKind::Term);
                }
                let mut t = scope.term(cod)?;
                for (n, ty) in doms.into_iter().rev() {
                    t = Term::Sigma(n, Rc::new(ty), Rc::new(t));
                }
                t
            }
            Expr::App(f, a) => {
                if let Expr::App(g, x) = &**f {
                    if let Expr::Var(id) = &**g {
                        if id.name == REC01 && self.lookup(REC01).is_none() {
                            return self.rec01(id, x, a);
                        }
                    }
                }
                Term::app(self.term(f)?, self.term(a)?)
            }
            Expr::Pair(a, b) => Term::pair(self.term(a)?, self.term(b)?),
            Expr::Fst(p) => Term::Fst(Rc::new(self.term(p)?)),
            Expr::Snd(p) => Term::Snd(Rc::new(self.term(p)?)),
            Expr::Id(a, x, y) => Term::id(self.term(a)?, self.term(x)?, self.term(y)?),
            Expr::J(c, d, p) => Term::J(Rc::new(self.term(c)?), Rc::new(self.term(d)?), Rc::new(self.term(p)?)),
            Expr::Ext { binders, shape, family, boundary } => {
                check_distinct(binders)?;
                let inner = self.with(binders.iter().map(|b| b.name.clone()), VarKind::Cube);
                Term::Ext(Rc::new(ExtType {
                    binders: binders.iter().map(|b| b.name.clone()).collect(),
                    shape: inner.tope(shape)?,
                    family: inner.term(family)?,
                    boundary: inner.cases(boundary)?,
                }))
            }
            Expr::ExtLam(names, body) => {
                check_distinct(names)?;
                let inner = self.with(names.iter().map(|b| b.name.clone()), VarKind::Cube);
                Term::ExtLam(names.iter().map(|n| n.name.clone()).collect(), Rc::new(inner.term(body)?))
            }
            Expr::ExtApp(f, pts) => {
                let pts = pts.iter().map(|p| self.point(p)).collect::<EResult<Vec<_>>>()?;
                Term::ExtApp(Rc::new(self.term(f)?), pts)
            }
            Expr::Case(cases) => Term::Case(self.cases(cases)?),
        })
    }

    fn rec01(&self, id: &Ident, a: &Expr, b: &Expr) -> EResult<Term> {
        let Some(ix) = self.vars.iter().rev().position(|(_, k)| *k == VarKind::Cube) else {
            return Err(scope_error(format!("{REC01} needs a cube variable in scope"), id.pos));
        };
        let v = IntervalTerm::Var(ix);
        Ok(Term::Case(vec![
            (Tope::Eq(v.clone(), IntervalTerm::Zero), self.term(a)?),
            (Tope::Eq(v, IntervalTerm::One), self.term(b)?),
        ]))
    }
}

fn check_distinct(names: &[Ident]) -> EResult<()> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].iter().any(|m| m.name == n.name) {
            return Err(scope_error(format!("cube variable {} is bound twice", n.name), n.pos));
        }
    }
    Ok(())
}

/// Folds term parameters, cube parameters and an optional tope into the
/// declared type and body.
fn telescope(
    params: &[Param],
    cube: &[Ident],
    tope: &Option<STope>,
    ty: &Expr,
    body: Option<&Expr>,
) -> EResult<(Term, Option<Term>)> {
    let mut scope = Scope::new();
    let mut binders = Vec::new();
    for p in params {
        for n in &p.names {
            binders.push((n.name.clone(), scope.term(&p.ty)?));
            scope = scope.with([n.name.clone()], VarKind::Term);
        }
    }
    let (mut ty, mut body) = if cube.is_empty() {
        if let Some(t) = tope {
            let pos = t.vars().into_iter().next().map(|v| v.pos).unwrap_or_default();
            return Err(scope_error("a tope constraint needs cube parameters".into(), pos));
        }
        (scope.term(ty)?, body.map(|b| scope.term(b)).transpose()?)
    } else {
        check_distinct(cube)?;
        let names: Vec<String> = cube.iter().map(|c| c.name.clone()).collect();
        let inner = scope.with(names.clone(), VarKind::Cube);
        let shape = match tope {
            Some(t) => inner.tope(t)?,
            None => Tope::Top,
        };
        let family = inner.term(ty)?;
        let ext = Term::Ext(Rc::new(ExtType { binders: names.clone(), shape, family, boundary: Vec::new() }));
        let lam = body.map(|b| inner.term(b)).transpose()?.map(|b| Term::ExtLam(names, Rc::new(b)));
        (ext, lam)
    };
    for (n, dom) in binders.into_iter().rev() {
        ty = Term::Pi(n.clone(), Rc::new(dom), Rc::new(ty));
        body = body.map(|b| Term::Lam(n, Rc::new(b)));
    }
    Ok((ty, body))
}

fn span(file: &str, pos: Pos) -> Span {
    Span { file: file.to_string(), line: pos.line, col: pos.col }
}

pub fn elaborate_decl(file: &str, d: &SDecl) -> Decl {
    let (kind, result) = match &d.body {
        SDeclBody::Def { params, cube, tope, ty, body } => (
            DeclKind::Def,
            telescope(params, cube, tope, ty, Some(body))
                .map(|(ty, body)| DeclBody::Def { ty, body: body.expect("body requested") }),
        ),
        SDeclBody::Axiom { params, cube, tope, ty } => {
            (DeclKind::Axiom, telescope(params, cube, tope, ty, None).map(|(ty, _)| DeclBody::Axiom { ty }))
        }
        SDeclBody::Check { term, ty } => {
            let s = Scope::new();
            (DeclKind::Check, s.term(term).and_then(|term| Ok(DeclBody::Check { term, ty: s.term(ty)? })))
        }
        SDeclBody::Entails { vars, hyp, goal } => {
            let strip = |t: &STope| t.map_vars(&mut |v: &Ident| IntervalTerm::Var(v.name.clone()));
            (
                DeclKind::Entails,
                Ok(DeclBody::Entails {
                    cube: vars.iter().map(|v| v.name.clone()).collect(),
                    hyp: strip(hyp),
                    goal: strip(goal),
                }),
            )
        }
    };
    match result {
        Ok(body) => Decl { name: d.name.clone(), kind, span: span(file, d.pos), body },
        Err((e, pos)) => Decl { name: d.name.clone(), kind, span: span(file, pos), body: DeclBody::Failed(e) },
    }
}

pub fn elaborate(file: &str, m: &SurfaceModule) -> Vec<Decl> {
    m.decls.iter().map(|d| elaborate_decl(file, d)).collect()
}

/// Elaborates parsed items, turning parse failures into failed declarations.
pub fn elaborate_items(file: &str, items: &[Item]) -> Vec<Decl> {
    items
        .iter()
        .enumerate()
        .map(|(i, item)| match item {
            Item::Decl(d) => elaborate_decl(file, d),
            Item::Failed(FailedDecl { name, kind, error }) => {
                let kind = match *kind {
                    Some("axiom") => DeclKind::Axiom,
                    Some("check") => DeclKind::Check,
                    Some("entails") => DeclKind::Entails,
                    _ => DeclKind::Def,
                };
                Decl {
                    name: name.clone().unwrap_or_else(|| format!("<item {}>", i + 1)),
                    kind,
                    span: span(file, error.pos),
                    body: DeclBody::Failed(KernelError::new(ErrorClass::Syntax, error.to_string())),
                }
            }
        })
        .collect()
}
