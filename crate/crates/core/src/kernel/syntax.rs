//! Core terms. Variables are de Bruijn indices; term and cube variables share
//! one index space.

use std::rc::Rc;

use crate::tope::{IntervalTerm, Tope};

pub type Name = String;
/// De Bruijn index, counting binders outward from the use site.
pub type Ix = usize;
/// De Bruijn level, counting binders from the root of the context.
pub type Lvl = usize;

pub type Point = IntervalTerm<Ix>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(Ix),
    /// A global constant, either a definition (transparent) or an axiom.
    Const(Name),
    Universe,
    Pi(Name, Rc<Term>, Rc<Term>),
    Lam(Name, Rc<Term>),
    App(Rc<Term>, Rc<Term>),
    Sigma(Name, Rc<Term>, Rc<Term>),
    Pair(Rc<Term>, Rc<Term>),
    Fst(Rc<Term>),
    Snd(Rc<Term>),
    Id(Rc<Term>, Rc<Term>, Rc<Term>),
    Refl,
    /// `J motive base path`, based path induction.
    J(Rc<Term>, Rc<Term>, Rc<Term>),
    Ext(Rc<ExtType>),
    ExtLam(Vec<Name>, Rc<Term>),
    ExtApp(Rc<Term>, Vec<Point>),
    /// Definition by cases on topes; branches must agree on overlaps.
    Case(Vec<(Tope<Ix>, Term)>),
}

/// `<{binders | shape} -> family [ guard |-> term, ... ]>`.
///
/// The binders scope over every other field. The subshape is the
/// disjunction of the boundary guards, so an empty boundary is the plain
/// cotensor over the shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtType {
    pub binders: Vec<Name>,
    pub shape: Tope<Ix>,
    pub family: Term,
    pub boundary: Vec<(Tope<Ix>, Term)>,
}

impl ExtType {
    pub fn subshape(&self) -> Tope<Ix> {
        Tope::disj(self.boundary.iter().map(|(g, _)| g.clone()))
    }
}

impl Term {
    pub fn pi(name: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(name.to_string(), Rc::new(dom), Rc::new(cod))
    }

    pub fn lam(name: &str, body: Term) -> Term {
        Term::Lam(name.to_string(), Rc::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Rc::new(f), Rc::new(a))
    }

    pub fn sigma(name: &str, dom: Term, cod: Term) -> Term {
        Term::Sigma(name.to_string(), Rc::new(dom), Rc::new(cod))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Rc::new(a), Rc::new(b))
    }

    pub fn id(ty: Term, a: Term, b: Term) -> Term {
        Term::Id(Rc::new(ty), Rc::new(a), Rc::new(b))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    /// Whether the variable with index `ix` occurs free.
    pub fn occurs(&self, ix: Ix) -> bool {
        fn point(p: &Point, ix: Ix) -> bool {
            matches!(p, IntervalTerm::Var(i) if *i == ix)
        }
        fn tope(t: &Tope<Ix>, ix: Ix) -> bool {
            t.vars().contains(&ix)
        }
        match self {
            Term::Var(i) => *i == ix,
            Term::Const(_) | Term::Universe | Term::Refl => false,
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) => a.occurs(ix) || b.occurs(ix + 1),
            Term::Lam(_, b) => b.occurs(ix + 1),
            Term::App(a, b) | Term::Pair(a, b) => a.occurs(ix) || b.occurs(ix),
            Term::Fst(a) | Term::Snd(a) => a.occurs(ix),
            Term::Id(a, b, c) | Term::J(a, b, c) => a.occurs(ix) || b.occurs(ix) || c.occurs(ix),
            Term::Ext(e) => {
                let k = ix + e.binders.len();
                tope(&e.shape, k)
                    || e.family.occurs(k)
                    || e.boundary.iter().any(|(g, t)| tope(g, k) || t.occurs(k))
            }
            Term::ExtLam(names, b) => b.occurs(ix + names.len()),
            Term::ExtApp(f, pts) => f.occurs(ix) || pts.iter().any(|p| point(p, ix)),
            Term::Case(bs) => bs.iter().any(|(g, t)| tope(g, ix) || t.occurs(ix)),
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        use Term::*;
        match (self, other) {
            (Var(a), Var(b)) => a == b,
            (Const(a), Const(b)) => a == b,
            (Universe, Universe) | (Refl, Refl) => true,
            (Pi(_, a1, b1), Pi(_, a2, b2)) | (Sigma(_, a1, b1), Sigma(_, a2, b2)) => {
                a1.alpha_eq(a2) && b1.alpha_eq(b2)
            }
            (Lam(_, a), Lam(_, b)) => a.alpha_eq(b),
            (App(a1, b1), App(a2, b2)) | (Pair(a1, b1), Pair(a2, b2)) => a1.alpha_eq(a2) && b1.alpha_eq(b2),
            (Fst(a), Fst(b)) | (Snd(a), Snd(b)) => a.alpha_eq(b),
            (Id(a1, b1, c1), Id(a2, b2, c2)) | (J(a1, b1, c1), J(a2, b2, c2)) => {
                a1.alpha_eq(a2) && b1.alpha_eq(b2) && c1.alpha_eq(c2)
            }
            (Ext(e1), Ext(e2)) => {
                e1.binders.len() == e2.binders.len()
                    && e1.shape == e2.shape
                    && e1.family.alpha_eq(&e2.family)
                    && cases_alpha_eq(&e1.boundary, &e2.boundary)
            }
            (ExtLam(n1, a), ExtLam(n2, b)) => n1.len() == n2.len() && a.alpha_eq(b),
            (ExtApp(f1, p1), ExtApp(f2, p2)) => f1.alpha_eq(f2) && p1 == p2,
            (Case(b1), Case(b2)) => cases_alpha_eq(b1, b2),
            _ => false,
        }
    }
}

fn cases_alpha_eq(a: &[(Tope<Ix>, Term)], b: &[(Tope<Ix>, Term)]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|((g1, t1), (g2, t2))| g1 == g2 && t1.alpha_eq(t2))
}
