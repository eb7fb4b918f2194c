//! Recursive-descent parser for modules, terms, topes and shapes.

use std::fmt;

use thiserror::Error;

use super::ast::{Expr, Ident, Param, SDecl, SDeclBody, SPoint, STope, SurfaceModule};
use super::lexer::{lex, Pos, Tok, Token};
use crate::tope::{IntervalTerm, Tope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub pos: Pos,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: unexpected {}", self.pos.line, self.pos.col, self.found)?;
        if !self.expected.is_empty() {
            write!(f, ", expected {}", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

type PResult<T> = Result<T, ParseError>;

/// A declaration that failed to parse, with its name when it was reached.
#[derive(Debug, Clone, PartialEq)]
pub struct FailedDecl {
    pub name: Option<String>,
    pub kind: Option<&'static str>,
    pub error: ParseError,
}

/// Parse result that keeps going past broken declarations.
#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Decl(SDecl),
    Failed(FailedDecl),
}

pub struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    pub fn new(src: &str) -> PResult<Parser> {
        let toks = lex(src).map_err(|e| ParseError {
            pos: Pos { line: e.line, col: e.col },
            found: format!("character {:?}", e.ch),
            expected: Vec::new(),
        })?;
        Ok(Parser { toks, i: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let j = (self.i + k).min(self.toks.len() - 1);
        &self.toks[j].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError {
            pos: self.pos(),
            found: self.peek().to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, t: &Tok) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(&[&t.to_string()])
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) if !is_reserved(&name) => {
                let pos = self.pos();
                self.bump();
                Ok(Ident { name, pos })
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn at_ident(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if !is_reserved(s))
    }

    pub fn at_eof(&self) -> bool {
        self.at(&Tok::Eof)
    }

    // -- declarations -------------------------------------------------------

    /// Parses every declaration, recovering at the next `;` after an error.
    pub fn items(&mut self) -> Vec<Item> {
        let mut out = Vec::new();
        while !self.at_eof() {
            let start = self.i;
            match self.decl() {
                Ok(d) => out.push(Item::Decl(d)),
                Err(error) => {
                    let (kind, name) = self.header_at(start);
                    out.push(Item::Failed(FailedDecl { name, kind, error }));
                    if self.i == start {
                        self.bump();
                    }
                    while !self.at_eof() && !self.at(&Tok::Semi) && !self.at_decl_start() {
                        self.bump();
                    }
                    self.eat(&Tok::Semi);
                }
            }
        }
        out
    }

    fn at_decl_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == "def" || w == "axiom") || matches!(self.peek(), Tok::Hash(_))
    }

    fn header_at(&self, start: usize) -> (Option<&'static str>, Option<String>) {
        let kind = match &self.toks[start].tok {
            Tok::Ident(w) if w == "def" => Some("def"),
            Tok::Ident(w) if w == "axiom" => Some("axiom"),
            Tok::Hash(w) if w == "check" => Some("check"),
            Tok::Hash(w) if w == "entails" => Some("entails"),
            _ => None,
        };
        let name = match (kind, self.toks.get(start + 1).map(|t| &t.tok)) {
            (Some("def" | "axiom"), Some(Tok::Ident(n))) => Some(n.clone()),
            _ => None,
        };
        (kind, name)
    }

    pub fn module(&mut self) -> Result<SurfaceModule, Vec<ParseError>> {
        let mut decls = Vec::new();
        let mut errors = Vec::new();
        for item in self.items() {
            match item {
                Item::Decl(d) => decls.push(d),
                Item::Failed(f) => errors.push(f.error),
            }
        }
        if errors.is_empty() {
            Ok(SurfaceModule { decls })
        } else {
            Err(errors)
        }
    }

    pub fn decl(&mut self) -> PResult<SDecl> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(w) if w == "def" || w == "axiom" => {
                self.bump();
                let name = self.ident()?;
                let (params, cube, tope) = self.params()?;
                self.expect(&Tok::Colon)?;
                let ty = self.term()?;
                let body = if w == "def" {
                    self.expect(&Tok::DefEq)?;
                    let body = self.term()?;
                    SDeclBody::Def { params, cube, tope, ty, body }
                } else {
                    SDeclBody::Axiom { params, cube, tope, ty }
                };
                self.expect(&Tok::Semi)?;
                Ok(SDecl { name: name.name, pos, body })
            }
            Tok::Hash(w) if w == "check" => {
                self.bump();
                let term = self.term()?;
                self.expect(&Tok::Colon)?;
                let ty = self.term()?;
                self.expect(&Tok::Semi)?;
                Ok(SDecl { name: format!("#check@{}", pos.line), pos, body: SDeclBody::Check { term, ty } })
            }
            Tok::Hash(w) if w == "entails" => {
                self.bump();
                let (vars, hyp, goal) = self.tope_query()?;
                self.expect(&Tok::Semi)?;
                Ok(SDecl { name: format!("#entails@{}", pos.line), pos, body: SDeclBody::Entails { vars, hyp, goal } })
            }
            _ => self.error(&["`def`", "`axiom`", "`#check`", "`#entails`"]),
        }
    }

    fn binder_group_ahead(&self) -> bool {
        if !self.at(&Tok::LParen) {
            return false;
        }
        let mut k = 1;
        while matches!(self.peek_at(k), Tok::Ident(s) if !is_reserved(s)) {
            k += 1;
        }
        k > 1 && self.peek_at(k) == &Tok::Colon
    }

    #[allow(clippy::type_complexity)]
    fn params(&mut self) -> PResult<(Vec<Param>, Vec<Ident>, Option<STope>)> {
        let mut params = Vec::new();
        let mut cube = Vec::new();
        while self.binder_group_ahead() {
            self.bump();
            let mut names = Vec::new();
            while self.at_ident() {
                names.push(self.ident()?);
            }
            self.expect(&Tok::Colon)?;
            if self.at(&Tok::Num(2)) && self.peek_at(1) == &Tok::RParen {
                self.bump();
                self.bump();
                cube.extend(names);
                continue;
            }
            if !cube.is_empty() {
                return self.error(&["`2`"]);
            }
            let ty = self.term()?;
            self.expect(&Tok::RParen)?;
            params.push(Param { names, ty });
        }
        let tope = if self.eat(&Tok::LBracket) {
            let t = self.tope()?;
            self.expect(&Tok::RBracket)?;
            Some(t)
        } else {
            None
        };
        Ok((params, cube, tope))
    }

    // -- terms --------------------------------------------------------------

    pub fn term(&mut self) -> PResult<Expr> {
        if self.eat(&Tok::Backslash) {
            if self.eat(&Tok::LBrace) {
                let names = self.idents_until(&Tok::RBrace)?;
                self.expect(&Tok::Dot)?;
                let body = self.term()?;
                return Ok(Expr::ExtLam(names, Box::new(body)));
            }
            let names = self.idents_until(&Tok::Dot)?;
            let body = self.term()?;
            return Ok(Expr::Lam(names, Box::new(body)));
        }
        if self.at_word("Sig") {
            self.bump();
            self.expect(&Tok::LParen)?;
            let names = self.idents_until(&Tok::Colon)?;
            let dom = self.term()?;
            self.expect(&Tok::RParen)?;
            let cod = self.term()?;
            return Ok(Expr::Sigma(names, Box::new(dom), Box::new(cod)));
        }
        if self.at(&Tok::LBracket) {
            self.bump();
            let cases = self.cases()?;
            return Ok(Expr::Case(cases));
        }
        if self.binder_group_ahead() {
            let mut groups = Vec::new();
            while self.binder_group_ahead() {
                self.bump();
                let names = self.idents_until(&Tok::Colon)?;
                let ty = self.term()?;
                self.expect(&Tok::RParen)?;
                groups.push((names, ty));
            }
            self.expect(&Tok::Arrow)?;
            let cod = self.term()?;
            return Ok(Expr::Pi(groups, Box::new(cod)));
        }
        let lhs = self.ext_app()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.term()?;
            return Ok(Expr::Arrow(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    /// One or more identifiers, consuming the terminator.
    fn idents_until(&mut self, end: &Tok) -> PResult<Vec<Ident>> {
        let mut names = vec![self.ident()?];
        while self.at_ident() {
            names.push(self.ident()?);
        }
        self.expect(end)?;
        Ok(names)
    }

    /// `tope |-> term, ...` up to and including the closing bracket.
    fn cases(&mut self) -> PResult<Vec<(STope, Expr)>> {
        let mut cases = Vec::new();
        loop {
            let guard = self.tope()?;
            self.expect(&Tok::MapsTo)?;
            let t = self.term()?;
            cases.push((guard, t));
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(&Tok::RBracket)?;
            return Ok(cases);
        }
    }

    fn ext_app(&mut self) -> PResult<Expr> {
        let mut e = self.app()?;
        while self.eat(&Tok::At) {
            let pts = if self.eat(&Tok::LParen) {
                let mut pts = vec![self.point()?];
                while self.eat(&Tok::Comma) {
                    pts.push(self.point()?);
                }
                self.expect(&Tok::RParen)?;
                pts
            } else {
                vec![self.point()?]
            };
            e = Expr::ExtApp(Box::new(e), pts);
        }
        Ok(e)
    }

    fn point(&mut self) -> PResult<SPoint> {
        match self.peek() {
            Tok::Num(0) => {
                self.bump();
                Ok(IntervalTerm::Zero)
            }
            Tok::Num(1) => {
                self.bump();
                Ok(IntervalTerm::One)
            }
            Tok::Ident(s) if !is_reserved(s) => Ok(IntervalTerm::Var(self.ident()?)),
            _ => self.error(&["interval variable", "`0`", "`1`"]),
        }
    }

    fn at_atom_start(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !matches!(s.as_str(), "def" | "axiom" | "Sig" | "TOP" | "BOT"),
            Tok::LParen | Tok::LAngle => true,
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Expr> {
        let head = if self.at_word("Id") || self.at_word("J") {
            let is_id = self.at_word("Id");
            self.bump();
            let a = self.postfix()?;
            let b = self.postfix()?;
            let c = self.postfix()?;
            let (a, b, c) = (Box::new(a), Box::new(b), Box::new(c));
            if is_id {
                Expr::Id(a, b, c)
            } else {
                Expr::J(a, b, c)
            }
        } else {
            self.postfix()?
        };
        let mut e = head;
        while self.at_atom_start() {
            let arg = self.postfix()?;
            e = Expr::App(Box::new(e), Box::new(arg));
        }
        Ok(e)
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.atom()?;
        loop {
            if self.eat(&Tok::Proj1) {
                e = Expr::Fst(Box::new(e));
            } else if self.eat(&Tok::Proj2) {
                e = Expr::Snd(Box::new(e));
            } else {
                return Ok(e);
            }
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Ident(w) if w == "U" => {
                self.bump();
                Ok(Expr::Universe)
            }
            Tok::Ident(w) if w == "refl" => {
                self.bump();
                Ok(Expr::Refl)
            }
            Tok::Ident(w) if w == "Id" || w == "J" => {
                self.error(&["parenthesized `Id` or `J` application in argument position"])
            }
            Tok::Ident(_) => Ok(Expr::Var(self.ident()?)),
            Tok::LParen => {
                self.bump();
                let first = self.term()?;
                if self.eat(&Tok::RParen) {
                    return Ok(first);
                }
                let mut items = vec![first];
                while self.eat(&Tok::Comma) {
                    items.push(self.term()?);
                }
                self.expect(&Tok::RParen)?;
                if items.len() < 2 {
                    return self.error(&["`,`", "`)`"]);
                }
                let mut e = items.pop().expect("at least two items");
                while let Some(prev) = items.pop() {
                    e = Expr::Pair(Box::new(prev), Box::new(e));
                }
                Ok(e)
            }
            Tok::LAngle => {
                self.bump();
                let (binders, shape) = self.shape_braces()?;
                self.expect(&Tok::Arrow)?;
                let family = self.term()?;
                let boundary = if self.eat(&Tok::LBracket) { self.cases()? } else { Vec::new() };
                self.expect(&Tok::RAngle)?;
                Ok(Expr::Ext { binders, shape, family: Box::new(family), boundary })
            }
            _ => self.error(&["term"]),
        }
    }

    /// `{t s | φ}` or `{t : 2, s : 2 | φ}`; the tope defaults to `TOP`.
    pub fn shape_braces(&mut self) -> PResult<(Vec<Ident>, STope)> {
        self.expect(&Tok::LBrace)?;
        let mut binders = vec![self.ident()?];
        if self.eat(&Tok::Colon) {
            self.expect(&Tok::Num(2))?;
            while self.eat(&Tok::Comma) {
                binders.push(self.ident()?);
                self.expect(&Tok::Colon)?;
                self.expect(&Tok::Num(2))?;
            }
        } else {
            while self.at_ident() {
                binders.push(self.ident()?);
            }
        }
        let shape = if self.eat(&Tok::Pipe) { self.tope()? } else { Tope::Top };
        self.expect(&Tok::RBrace)?;
        Ok((binders, shape))
    }

    // -- topes --------------------------------------------------------------

    pub fn tope(&mut self) -> PResult<STope> {
        let mut t = self.tope_conj()?;
        while self.eat(&Tok::Or) {
            let rhs = self.tope_conj()?;
            t = Tope::Or(Box::new(t), Box::new(rhs));
        }
        Ok(t)
    }

    fn tope_conj(&mut self) -> PResult<STope> {
        let mut t = self.tope_atom()?;
        while self.eat(&Tok::And) {
            let rhs = self.tope_atom()?;
            t = Tope::And(Box::new(t), Box::new(rhs));
        }
        Ok(t)
    }

    fn tope_atom(&mut self) -> PResult<STope> {
        if self.at_word("TOP") {
            self.bump();
            return Ok(Tope::Top);
        }
        if self.at_word("BOT") {
            self.bump();
            return Ok(Tope::Bot);
        }
        if self.eat(&Tok::LParen) {
            let t = self.tope()?;
            self.expect(&Tok::RParen)?;
            return Ok(t);
        }
        let a = self.point().or_else(|_| self.error(&["tope"]))?;
        if self.eat(&Tok::Le) {
            Ok(Tope::Le(a, self.point()?))
        } else if self.eat(&Tok::EqEq) {
            Ok(Tope::Eq(a, self.point()?))
        } else {
            self.error(&["`<=`", "`==`"])
        }
    }

    /// `[t, s] HYP => GOAL`; commas between variables are optional.
    pub fn tope_query(&mut self) -> PResult<(Vec<Ident>, STope, STope)> {
        self.expect(&Tok::LBracket)?;
        let mut vars = Vec::new();
        while !self.at(&Tok::RBracket) {
            vars.push(self.ident()?);
            self.eat(&Tok::Comma);
        }
        self.bump();
        let hyp = self.tope()?;
        self.expect(&Tok::Implies)?;
        let goal = self.tope()?;
        Ok((vars, hyp, goal))
    }

    pub fn expect_eof(&mut self) -> PResult<()> {
        if self.at_eof() {
            Ok(())
        } else {
            self.error(&["end of input"])
        }
    }
}

fn is_reserved(s: &str) -> bool {
    matches!(s, "def" | "axiom" | "U" | "refl" | "J" | "Id" | "Sig" | "TOP" | "BOT")
}

/// Parses a whole module, failing on the first broken declaration.
pub fn parse_module(src: &str) -> Result<SurfaceModule, Vec<ParseError>> {
    Parser::new(src).map_err(|e| vec![e])?.module()
}

/// Parses a module, keeping every declaration that parses.
pub fn parse_items(src: &str) -> Result<Vec<Item>, ParseError> {
    Ok(Parser::new(src)?.items())
}

pub fn parse_term(src: &str) -> PResult<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.term()?;
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_tope(src: &str) -> PResult<STope> {
    let mut p = Parser::new(src)?;
    let t = p.tope()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_tope_query(src: &str) -> PResult<(Vec<Ident>, STope, STope)> {
    let mut p = Parser::new(src)?;
    let q = p.tope_query()?;
    p.expect_eof()?;
    Ok(q)
}

/// A shape written as a standard name or in braces.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSyntax {
    Named(String),
    Braces(Vec<Ident>, STope),
}

/// A shape, or an inclusion written `S <= T`.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeExpr {
    Shape(ShapeSyntax),
    Inclusion(ShapeSyntax, ShapeSyntax),
}

fn shape_syntax(src: &str) -> PResult<ShapeSyntax> {
    let src = src.trim();
    if src.starts_with('{') {
        let mut p = Parser::new(src)?;
        let (binders, tope) = p.shape_braces()?;
        p.expect_eof()?;
        return Ok(ShapeSyntax::Braces(binders, tope));
    }
    if src.is_empty() || src.chars().any(char::is_whitespace) {
        return Err(ParseError {
            pos: Pos { line: 1, col: 1 },
            found: format!("{src:?}"),
            expected: vec!["shape name".into(), "`{`".into()],
        });
    }
    Ok(ShapeSyntax::Named(src.to_string()))
}

/// Parses `S` or `S <= T`, where each side is a standard shape name or a
/// braced shape.
pub fn parse_shape_expr(src: &str) -> PResult<ShapeExpr> {
    let mut depth = 0i32;
    let bytes = src.as_bytes();
    let mut split = None;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'{' => depth += 1,
            b'}' => depth -= 1,
            b'<' if depth == 0 && bytes.get(i + 1) == Some(&b'=') => {
                split = Some(i);
                break;
            }
            _ => {}
        }
    }
    match split {
        Some(i) => Ok(ShapeExpr::Inclusion(shape_syntax(&src[..i])?, shape_syntax(&src[i + 2..])?)),
        None => Ok(ShapeExpr::Shape(shape_syntax(src)?)),
    }
}
