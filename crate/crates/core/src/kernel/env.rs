//! Global environment, declarations and module checking.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use super::ctx::{Ctx, Session};
use super::error::{ErrorClass, KResult, KernelError};
use super::syntax::{Name, Term};
use super::value::{apply, ext_apply, Head, PointVal, Val, Value};
use crate::tope::{self, CubeContext, IntervalTerm, Tope};

#[derive(Debug)]
pub struct GlobalEntry {
    pub ty: Val,
    pub ty_term: Term,
    /// Body and value of a definition; `None` for an axiom.
    pub def: Option<(Term, Val)>,
}

impl GlobalEntry {
    pub fn is_axiom(&self) -> bool {
        self.def.is_none()
    }
}

/// Checked declarations, in the order they were added.
#[derive(Debug, Clone, Default)]
pub struct Globals {
    entries: HashMap<Name, Rc<GlobalEntry>>,
    order: Vec<Name>,
}

impl Globals {
    pub fn new() -> Globals {
        Globals::default()
    }

    pub fn get(&self, name: &str) -> Option<&GlobalEntry> {
        self.entries.get(name).map(|e| &**e)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> &[Name] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The value of a constant: definitions unfold, axioms stay neutral.
    pub fn value_of(&self, name: &str) -> Val {
        match self.entries.get(name).and_then(|e| e.def.as_ref()) {
            Some((_, v)) => v.clone(),
            None => Rc::new(Value::Neutral(Head::Axiom(name.to_string()), Vec::new())),
        }
    }

    fn insert(&mut self, name: &str, entry: GlobalEntry) {
        self.entries.insert(name.to_string(), Rc::new(entry));
        self.order.push(name.to_string());
    }
}

/// A position in a source file, 1-based; `col` counts bytes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Span {
    pub file: String,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclKind {
    Def,
    Axiom,
    Check,
    Entails,
}

impl DeclKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DeclKind::Def => "def",
            DeclKind::Axiom => "axiom",
            DeclKind::Check => "check",
            DeclKind::Entails => "entails",
        }
    }
}

#[derive(Debug, Clone)]
pub enum DeclBody {
    Def { ty: Term, body: Term },
    Axiom { ty: Term },
    Check { term: Term, ty: Term },
    Entails { cube: Vec<Name>, hyp: Tope<Name>, goal: Tope<Name> },
    /// A declaration that failed before reaching the kernel.
    Failed(KernelError),
}

#[derive(Debug, Clone)]
pub struct Decl {
    pub name: Name,
    pub kind: DeclKind,
    pub span: Span,
    pub body: DeclBody,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: Name,
    pub kind: DeclKind,
    pub span: Span,
    pub outcome: Result<Checked, KernelError>,
}

/// The elaborated term and its type, for a successful declaration.
#[derive(Debug, Clone)]
pub struct Checked {
    pub term: Option<Term>,
    pub ty: Option<Term>,
}

impl CheckResult {
    pub fn is_ok(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn error(&self) -> Option<&KernelError> {
        self.outcome.as_ref().err()
    }
}

/// Checks a declaration and, if it is a well-typed `def` or `axiom`, adds it
/// to `globals`.
pub fn check_decl(globals: &mut Globals, session: &Session, decl: &Decl) -> CheckResult {
    let outcome = check_decl_inner(globals, session, decl);
    CheckResult { name: decl.name.clone(), kind: decl.kind, span: decl.span.clone(), outcome }
}

fn check_decl_inner(globals: &mut Globals, session: &Session, decl: &Decl) -> KResult<Checked> {
    let fresh_name = |globals: &Globals| {
        if globals.contains(&decl.name) {
            Err(KernelError::new(ErrorClass::Duplicate, format!("{} is already declared", decl.name)))
        } else {
            Ok(())
        }
    };
    match &decl.body {
        DeclBody::Failed(e) => Err(e.clone()),
        DeclBody::Def { ty, body } => {
            fresh_name(globals)?;
            let ctx = Ctx::new(globals, session);
            ctx.check(ty, &Rc::new(Value::Universe))?;
            let tyv = ctx.eval(ty);
            ctx.check(body, &tyv)?;
            let value = ctx.eval(body);
            globals.insert(&decl.name, GlobalEntry { ty: tyv, ty_term: ty.clone(), def: Some((body.clone(), value)) });
            Ok(Checked { term: Some(body.clone()), ty: Some(ty.clone()) })
        }
        DeclBody::Axiom { ty } => {
            fresh_name(globals)?;
            let ctx = Ctx::new(globals, session);
            ctx.check(ty, &Rc::new(Value::Universe))?;
            let tyv = ctx.eval(ty);
            globals.insert(&decl.name, GlobalEntry { ty: tyv, ty_term: ty.clone(), def: None });
            Ok(Checked { term: None, ty: Some(ty.clone()) })
        }
        DeclBody::Check { term, ty } => {
            let ctx = Ctx::new(globals, session);
            ctx.check(ty, &Rc::new(Value::Universe))?;
            ctx.check(term, &ctx.eval(ty))?;
            Ok(Checked { term: Some(term.clone()), ty: Some(ty.clone()) })
        }
        DeclBody::Entails { cube, hyp, goal } => {
            check_entails(session, cube, hyp, goal)?;
            Ok(Checked { term: None, ty: None })
        }
    }
}

fn check_entails(session: &Session, cube: &[Name], hyp: &Tope<Name>, goal: &Tope<Name>) -> KResult<()> {
    let scope = |e: tope::TopeError| KernelError::new(ErrorClass::Scope, e.to_string());
    let ctx = CubeContext::new(cube.to_vec()).map_err(scope)?;
    let verdict = match tope::entails(&ctx, hyp, goal) {
        Ok(v) => v,
        Err(tope::TopeError::BranchLimit) => {
            return Err(KernelError::new(ErrorClass::Resource, tope::TopeError::BranchLimit.to_string()))
        }
        Err(e) => return Err(scope(e)),
    };
    if session.oracle {
        let reference = tope::oracle_entails(&ctx, hyp, goal).map_err(scope)?;
        if reference != verdict {
            return Err(KernelError::new(
                ErrorClass::OracleDivergence,
                format!("solver says {verdict}, oracle says {reference} for {hyp} => {goal}"),
            ));
        }
    }
    if verdict {
        Ok(())
    } else {
        let cm = tope::countermodel(&ctx, hyp, goal).map_err(scope)?;
        Err(KernelError::new(ErrorClass::EntailmentFailure, format!("{ctx} {hyp} does not entail {goal}"))
            .with_countermodel(cm.map(|c| c.to_string())))
    }
}

/// Checks declarations in order. A failing declaration is reported and
/// skipped; later declarations are still checked.
pub fn check_module(globals: &mut Globals, session: &Session, decls: &[Decl]) -> Vec<CheckResult> {
    decls.iter().map(|d| check_decl(globals, session, d)).collect()
}

/// Outcome of the boundary strictness sweep.
#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    /// Number of (constant, endpoint tuple) pairs compared.
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every constant whose type, after its leading Pi binders, is an
/// extension type, applies it at every 0/1 tuple of the subshape and compares
/// the result with the prescribed boundary.
pub fn boundary_sweep(globals: &Globals, session: &Session) -> KResult<SweepReport> {
    let mut report = SweepReport::default();
    for name in globals.names() {
        let entry = globals.get(name).expect("ordered names are present");
        let mut ctx = Ctx::new(globals, session);
        let mut ty = entry.ty.clone();
        let mut v = globals.value_of(name);
        loop {
            let tyf = ctx.force(&ty)?;
            match &*tyf {
                Value::Pi(n, dom, cod) => {
                    let (next, x) = ctx.bind(n, dom.clone());
                    v = apply(globals, v, x.clone());
                    ty = cod.apply(globals, x);
                    ctx = next;
                }
                Value::Ext(ec) if !ec.ty.boundary.is_empty() => {
                    let k = ec.arity();
                    for bits in 0..(1u32 << k) {
                        let pts: Vec<PointVal> = (0..k)
                            .map(|i| if bits >> (k - 1 - i) & 1 == 1 { IntervalTerm::One } else { IntervalTerm::Zero })
                            .collect();
                        if !ctx.entails(&ec.shape(&pts))? || !ctx.entails(&ec.subshape(&pts))? {
                            continue;
                        }
                        report.checked += 1;
                        let family = ec.family(globals, &pts);
                        let at = ext_apply(globals, v.clone(), &pts);
                        let expected = ec.boundary(globals, &pts);
                        if !ctx.conv(&family, &at, &expected)? {
                            let shown: Vec<String> = pts.iter().map(|p| ctx.show_point(p)).collect();
                            report.failures.push(format!(
                                "{name} @ ({}): {} is not {}",
                                shown.join(", "),
                                ctx.show(&at),
                                ctx.show(&expected)
                            ));
                        }
                    }
                    break;
                }
                _ => break,
            }
        }
    }
    Ok(report)
}

impl<'a> Ctx<'a> {
    /// Normal form of a well-typed term.
    pub fn normalize(&self, t: &Term) -> KResult<Term> {
        let ty = self.infer(t)?;
        self.readback(&ty, &self.eval(t))
    }

    /// Normal form of `t` checked against `ty`.
    pub fn normalize_at(&self, t: &Term, ty: &Term) -> KResult<Term> {
        let tyv = self.eval(ty);
        self.check(t, &tyv)?;
        self.readback(&tyv, &self.eval(t))
    }

    /// Definitional equality of two terms at a type, after checking both.
    pub fn def_equal(&self, a: &Term, b: &Term, ty: &Term) -> KResult<bool> {
        self.check(ty, &Rc::new(Value::Universe))?;
        let tyv = self.eval(ty);
        self.check(a, &tyv)?;
        self.check(b, &tyv)?;
        self.conv(&tyv, &self.eval(a), &self.eval(b))
    }
}
