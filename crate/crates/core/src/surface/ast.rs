use crate::tope::{IntervalTerm, Tope};

pub use super::lexer::Pos;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

impl std::fmt::Display for Ident {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name)
    }
}

pub type STope = Tope<Ident>;
pub type SPoint = IntervalTerm<Ident>;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(Ident),
    Universe,
    Refl,
    /// A telescope of binder groups followed by a codomain.
    Pi(Vec<(Vec<Ident>, Expr)>, Box<Expr>),
    Arrow(Box<Expr>, Box<Expr>),
    Lam(Vec<Ident>, Box<Expr>),
    Sigma(Vec<Ident>, Box<Expr>, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Fst(Box<Expr>),
    Snd(Box<Expr>),
    Id(Box<Expr>, Box<Expr>, Box<Expr>),
    J(Box<Expr>, Box<Expr>, Box<Expr>),
    Ext {
        binders: Vec<Ident>,
        shape: STope,
        family: Box<Expr>,
        boundary: Vec<(STope, Expr)>,
    },
    ExtLam(Vec<Ident>, Box<Expr>),
    ExtApp(Box<Expr>, Vec<SPoint>),
    Case(Vec<(STope, Expr)>),
}

/// `(x y : A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub names: Vec<Ident>,
    pub ty: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SDeclBody {
    Def { params: Vec<Param>, cube: Vec<Ident>, tope: Option<STope>, ty: Expr, body: Expr },
    Axiom { params: Vec<Param>, cube: Vec<Ident>, tope: Option<STope>, ty: Expr },
    Check { term: Expr, ty: Expr },
    Entails { vars: Vec<Ident>, hyp: STope, goal: STope },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SDecl {
    pub name: String,
    pub pos: Pos,
    pub body: SDeclBody,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurfaceModule {
    pub decls: Vec<SDecl>,
}
