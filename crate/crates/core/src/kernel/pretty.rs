//! ASCII printer for core terms.
//!
//! Bound names are freshened so that printed output reparses to an
//! alpha-equal term: a binder never reuses a name already in scope or the
//! name of a constant mentioned anywhere in the term.

use std::collections::BTreeSet;

use super::syntax::{Ix, Term};
use crate::tope::{IntervalTerm, Tope};

const TERM: u8 = 0;
const EXT_APP: u8 = 1;
const APP: u8 = 2;
const ATOM: u8 = 3;

/// Prints `t` in a scope whose variables are `names`, innermost last.
pub fn print_term(names: &[String], t: &Term) -> String {
    let mut avoid = BTreeSet::new();
    constants(t, &mut avoid);
    let mut p = Printer { names: names.to_vec(), avoid };
    p.term(t, TERM)
}

pub fn print_tope(names: &[String], t: &Tope<Ix>) -> String {
    named_tope(names, t).to_string()
}

fn named_tope(names: &[String], t: &Tope<Ix>) -> Tope<String> {
    t.map_vars(&mut |ix| IntervalTerm::Var(names[names.len() - 1 - ix].clone()))
}

fn constants(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Const(n) => {
            out.insert(n.clone());
        }
        Term::Var(_) | Term::Universe | Term::Refl => {}
        Term::Pi(_, a, b) | Term::Sigma(_, a, b) | Term::App(a, b) | Term::Pair(a, b) => {
            constants(a, out);
            constants(b, out);
        }
        Term::Lam(_, b) | Term::Fst(b) | Term::Snd(b) | Term::ExtLam(_, b) | Term::ExtApp(b, _) => {
            constants(b, out)
        }
        Term::Id(a, b, c) | Term::J(a, b, c) => {
            constants(a, out);
            constants(b, out);
            constants(c, out);
        }
        Term::Ext(e) => {
            constants(&e.family, out);
            for (_, b) in &e.boundary {
                constants(b, out);
            }
        }
        Term::Case(bs) => {
            for (_, b) in bs {
                constants(b, out);
            }
        }
    }
}

struct Printer {
    names: Vec<String>,
    avoid: BTreeSet<String>,
}

impl Printer {
    fn fresh(&self, base: &str) -> String {
        let taken = |n: &str| self.names.iter().any(|m| m == n) || self.avoid.contains(n) || is_keyword(n);
        if !taken(base) {
            return base.to_string();
        }
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { "x" } else { stem };
        (1..)
            .map(|i| format!("{stem}{i}"))
            .find(|n| !taken(n))
            .expect("unbounded supply of names")
    }

    fn bind(&mut self, base: &str) -> String {
        let n = self.fresh(base);
        self.names.push(n.clone());
        n
    }

    fn unbind(&mut self, k: usize) {
        let len = self.names.len();
        self.names.truncate(len - k);
    }

    fn var(&self, ix: Ix) -> String {
        match self.names.len().checked_sub(ix + 1) {
            Some(i) => self.names[i].clone(),
            None => format!("#{ix}"),
        }
    }

    fn point(&self, p: &IntervalTerm<Ix>) -> String {
        match p {
            IntervalTerm::Var(ix) => self.var(*ix),
            IntervalTerm::Zero => "0".into(),
            IntervalTerm::One => "1".into(),
        }
    }

    fn tope(&self, t: &Tope<Ix>) -> String {
        named_tope(&self.names, t).to_string()
    }

    fn cases(&mut self, bs: &[(Tope<Ix>, Term)]) -> String {
        let items: Vec<String> = bs
            .iter()
            .map(|(g, t)| format!("{} |-> {}", self.tope(g), self.term(t, TERM)))
            .collect();
        format!("[{}]", items.join(", "))
    }

    fn term(&mut self, t: &Term, prec: u8) -> String {
        let (s, own) = self.render(t);
        if own < prec {
            format!("({s})")
        } else {
            s
        }
    }

    fn render(&mut self, t: &Term) -> (String, u8) {
        match t {
            Term::Var(ix) => (self.var(*ix), ATOM),
            Term::Const(n) => (n.clone(), ATOM),
            Term::Universe => ("U".into(), ATOM),
            Term::Refl => ("refl".into(), ATOM),
            Term::Pi(n, a, b) => {
                if b.occurs(0) {
                    let a = self.term(a, TERM);
                    let n = self.bind(n);
                    let b = self.term(b, TERM);
                    self.unbind(1);
                    (format!("({n} : {a}) -> {b}"), TERM)
                } else {
                    let a = self.term(a, EXT_APP);
                    self.names.push("_".into());
                    let b = self.term(b, TERM);
                    self.unbind(1);
                    (format!("{a} -> {b}"), TERM)
                }
            }
            Term::Lam(..) => {
                let mut binders = Vec::new();
                let mut body = t;
                while let Term::Lam(n, b) = body {
                    binders.push(self.bind(n));
                    body = b;
                }
                let b = self.term(body, TERM);
                self.unbind(binders.len());
                (format!("\\{}. {}", binders.join(" "), b), TERM)
            }
            Term::Sigma(n, a, b) => {
                let a = self.term(a, TERM);
                let n = self.bind(n);
                let b = self.term(b, TERM);
                self.unbind(1);
                (format!("Sig ({n} : {a}) {b}"), TERM)
            }
            Term::App(f, a) => {
                let f = self.term(f, APP);
                let a = self.term(a, ATOM);
                (format!("{f} {a}"), APP)
            }
            Term::Pair(a, b) => {
                let a = self.term(a, TERM);
                let b = self.term(b, TERM);
                (format!("({a}, {b})"), ATOM)
            }
            Term::Fst(p) => (format!("{}.1", self.term(p, ATOM)), ATOM),
            Term::Snd(p) => (format!("{}.2", self.term(p, ATOM)), ATOM),
            Term::Id(a, x, y) => {
                let (a, x, y) = (self.term(a, ATOM), self.term(x, ATOM), self.term(y, ATOM));
                (format!("Id {a} {x} {y}"), APP)
            }
            Term::J(c, d, p) => {
                let (c, d, p) = (self.term(c, ATOM), self.term(d, ATOM), self.term(p, ATOM));
                (format!("J {c} {d} {p}"), APP)
            }
            Term::Ext(e) => {
                let binders: Vec<String> = e.binders.iter().map(|n| self.bind(n)).collect();
                let shape = self.tope(&e.shape);
                let family = self.term(&e.family, TERM);
                let boundary = if e.boundary.is_empty() {
                    String::new()
                } else {
                    format!(" {}", self.cases(&e.boundary))
                };
                self.unbind(binders.len());
                (format!("<{{{} | {}}} -> {}{}>", binders.join(" "), shape, family, boundary), ATOM)
            }
            Term::ExtLam(ns, b) => {
                let binders: Vec<String> = ns.iter().map(|n| self.bind(n)).collect();
                let b = self.term(b, TERM);
                self.unbind(binders.len());
                (format!("\\{{{}}}. {}", binders.join(" "), b), TERM)
            }
            Term::ExtApp(f, pts) => {
                let f = self.term(f, EXT_APP);
                let pts: Vec<String> = pts.iter().map(|p| self.point(p)).collect();
                (format!("{f} @ ({})", pts.join(", ")), EXT_APP)
            }
            Term::Case(bs) => (self.cases(bs), TERM),
        }
    }
}

pub fn is_keyword(s: &str) -> bool {
    matches!(s, "def" | "axiom" | "U" | "refl" | "J" | "Id" | "Sig" | "TOP" | "BOT")
}
