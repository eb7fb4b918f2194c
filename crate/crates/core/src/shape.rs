//! Shapes as topes over a cube context, and the shape inclusions between them.

use std::fmt;

use thiserror::Error;

use crate::tope::{self, Countermodel, CubeContext, IntervalTerm, Tope, TopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("unknown standard shape `{0}`")]
    UnknownShape(String),
    #[error("`{0}` names a shape inclusion, not a shape")]
    NotAShape(String),
    #[error("`{0}` names a shape, not a shape inclusion")]
    NotAnInclusion(String),
    #[error("{sub} is not included in {sup}{}", countermodel_suffix(.countermodel))]
    NotIncluded {
        sub: String,
        sup: String,
        countermodel: Option<Countermodel>,
    },
    #[error("shapes live over different cube contexts {0} and {1}")]
    CubeMismatch(String, String),
    #[error(transparent)]
    Tope(#[from] TopeError),
}

fn countermodel_suffix(cm: &Option<Countermodel>) -> String {
    match cm {
        Some(cm) => format!(" (countermodel: {cm})"),
        None => String::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub cube: CubeContext,
    pub tope: Tope,
}

impl Shape {
    pub fn new(cube: CubeContext, tope: Tope) -> Result<Shape, ShapeError> {
        cube.check_scope(&tope)?;
        Ok(Shape { cube, tope })
    }

    pub fn is_empty(&self) -> Result<bool, ShapeError> {
        Ok(!tope::satisfiable(&self.cube, &self.tope)?)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.cube.vars().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} : 2")?;
        }
        write!(f, " | {}}}", self.tope)
    }
}

/// `sub ⊆ sup` over one cube context. Only [`is_inclusion`] constructs
/// verified values, so holding one means the entailment was checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeInclusion {
    cube: CubeContext,
    sub: Tope,
    sup: Tope,
    verified: bool,
}

impl ShapeInclusion {
    pub fn cube(&self) -> &CubeContext {
        &self.cube
    }

    pub fn sub(&self) -> &Tope {
        &self.sub
    }

    pub fn sup(&self) -> &Tope {
        &self.sup
    }

    pub fn verified(&self) -> bool {
        self.verified
    }

    pub fn domain(&self) -> Shape {
        Shape { cube: self.cube.clone(), tope: self.sub.clone() }
    }

    pub fn codomain(&self) -> Shape {
        Shape { cube: self.cube.clone(), tope: self.sup.clone() }
    }
}

impl fmt::Display for ShapeInclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.domain(), self.codomain())
    }
}

/// Verifies `sub ⊆ sup`; on failure reports a chain countermodel.
pub fn is_inclusion(cube: &CubeContext, sub: &Tope, sup: &Tope) -> Result<ShapeInclusion, ShapeError> {
    if tope::entails(cube, sub, sup)? {
        Ok(ShapeInclusion { cube: cube.clone(), sub: sub.clone(), sup: sup.clone(), verified: true })
    } else {
        Err(ShapeError::NotIncluded {
            sub: Shape { cube: cube.clone(), tope: sub.clone() }.to_string(),
            sup: Shape { cube: cube.clone(), tope: sup.clone() }.to_string(),
            countermodel: tope::countermodel(cube, sub, sup)?,
        })
    }
}

pub fn inclusion_of(sub: &Shape, sup: &Shape) -> Result<ShapeInclusion, ShapeError> {
    if sub.cube != sup.cube {
        return Err(ShapeError::CubeMismatch(sub.cube.to_string(), sup.cube.to_string()));
    }
    is_inclusion(&sub.cube, &sub.tope, &sup.tope)
}

pub fn shape_equiv(a: &Shape, b: &Shape) -> Result<bool, ShapeError> {
    if a.cube != b.cube {
        return Err(ShapeError::CubeMismatch(a.cube.to_string(), b.cube.to_string()));
    }
    Ok(tope::equiv(&a.cube, &a.tope, &b.tope)?)
}

/// A standard shape or standard inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Standard {
    Shape(Shape),
    Inclusion(ShapeInclusion),
}

const SHAPE_NAMES: &[(&str, &[&str])] = &[
    ("Δ0", &["D0", "Delta0"]),
    ("Δ1", &["D1", "Delta1"]),
    ("Δ2", &["D2", "Delta2"]),
    ("Δ3", &["D3", "Delta3"]),
    ("∂Δ1", &["dD1", "bD1", "boundary1"]),
    ("∂Δ2", &["dD2", "bD2", "boundary2"]),
    ("Λ²₁", &["L21", "Lambda21", "horn21"]),
    ("square", &["sq"]),
    ("i0", &[]),
    ("i1", &[]),
    ("b1", &[]),
    ("∂Δ2⊂Δ2", &["dD2<=D2"]),
    ("Λ²₁⊂Δ2", &["L21<=D2"]),
];

/// Canonical spelling of a standard shape name, accepting ASCII aliases.
pub fn canonical_name(name: &str) -> Option<&'static str> {
    SHAPE_NAMES
        .iter()
        .find(|(canon, aliases)| *canon == name || aliases.contains(&name))
        .map(|(canon, _)| *canon)
}

fn var(n: &str) -> IntervalTerm {
    IntervalTerm::var(n)
}

fn at(n: &str, p: IntervalTerm) -> Tope {
    Tope::eq(var(n), p)
}

fn delta2() -> Tope {
    Tope::le(var("s"), var("t"))
}

fn horn21() -> Tope {
    Tope::and(delta2(), Tope::or(at("s", IntervalTerm::Zero), at("t", IntervalTerm::One)))
}

fn boundary2() -> Tope {
    Tope::and(
        delta2(),
        Tope::or(
            Tope::or(at("s", IntervalTerm::Zero), at("t", IntervalTerm::One)),
            Tope::eq(var("s"), var("t")),
        ),
    )
}

fn endpoints(n: &str) -> Tope {
    Tope::or(at(n, IntervalTerm::Zero), at(n, IntervalTerm::One))
}

fn verified_standard(cube: CubeContext, sub: Tope, sup: Tope) -> ShapeInclusion {
    is_inclusion(&cube, &sub, &sup).expect("standard inclusions hold")
}

pub fn standard(name: &str) -> Result<Standard, ShapeError> {
    let canon = canonical_name(name).ok_or_else(|| ShapeError::UnknownShape(name.to_string()))?;
    let t = || CubeContext::of(&["t"]);
    let ts = || CubeContext::of(&["t", "s"]);
    let shape = |cube, tope| Standard::Shape(Shape { cube, tope });
    Ok(match canon {
        "Δ0" => shape(CubeContext::empty(), Tope::Top),
        "Δ1" => shape(t(), Tope::Top),
        "Δ2" => shape(ts(), delta2()),
        "Δ3" => shape(
            CubeContext::of(&["t", "s", "r"]),
            Tope::and(Tope::le(var("r"), var("s")), Tope::le(var("s"), var("t"))),
        ),
        "∂Δ1" => shape(t(), endpoints("t")),
        "∂Δ2" => shape(ts(), boundary2()),
        "Λ²₁" => shape(ts(), horn21()),
        "square" => shape(ts(), Tope::Top),
        "i0" => Standard::Inclusion(verified_standard(t(), at("t", IntervalTerm::Zero), Tope::Top)),
        "i1" => Standard::Inclusion(verified_standard(t(), at("t", IntervalTerm::One), Tope::Top)),
        "b1" => Standard::Inclusion(verified_standard(t(), endpoints("t"), Tope::Top)),
        "∂Δ2⊂Δ2" => Standard::Inclusion(verified_standard(ts(), boundary2(), delta2())),
        "Λ²₁⊂Δ2" => Standard::Inclusion(verified_standard(ts(), horn21(), delta2())),
        _ => unreachable!("every canonical name is handled"),
    })
}

pub fn standard_shape(name: &str) -> Result<Shape, ShapeError> {
    match standard(name)? {
        Standard::Shape(s) => Ok(s),
        Standard::Inclusion(_) => Err(ShapeError::NotAShape(name.to_string())),
    }
}

pub fn standard_inclusion(name: &str) -> Result<ShapeInclusion, ShapeError> {
    match standard(name)? {
        Standard::Inclusion(i) => Ok(i),
        Standard::Shape(_) => Err(ShapeError::NotAnInclusion(name.to_string())),
    }
}

const PREFERRED_NAMES: &[&str] = &["t", "s", "r", "q", "p", "u", "v", "w"];

/// Renames the variables of `right` away from those of `left`. Clashing names
/// take the first free name from a fixed list, then `x1`, `x2`, ...
fn freshen(left: &CubeContext, right: &CubeContext) -> Vec<(String, String)> {
    let mut taken: Vec<String> = left.vars().to_vec();
    taken.extend(right.vars().iter().cloned());
    let mut renaming = Vec::new();
    for v in right.vars() {
        if !left.contains(v) {
            continue;
        }
        let fresh = PREFERRED_NAMES
            .iter()
            .map(|s| s.to_string())
            .chain((1..).map(|i| format!("x{i}")))
            .find(|c| !taken.contains(c))
            .expect("an unbounded supply of names");
        taken.push(fresh.clone());
        renaming.push((v.clone(), fresh));
    }
    renaming
}

fn apply_renaming(t: &Tope, renaming: &[(String, String)]) -> Tope {
    t.map_vars(&mut |v| {
        let name = renaming.iter().find(|(from, _)| from == v).map_or(v, |(_, to)| to);
        IntervalTerm::Var(name.clone())
    })
}

fn product_cube(a: &CubeContext, b: &CubeContext) -> (CubeContext, Vec<(String, String)>) {
    let renaming = freshen(a, b);
    let mut vars = a.vars().to_vec();
    vars.extend(b.vars().iter().map(|v| {
        renaming.iter().find(|(from, _)| from == v).map_or(v.clone(), |(_, to)| to.clone())
    }));
    (CubeContext::new(vars).expect("freshened names are distinct"), renaming)
}

pub fn product(a: &Shape, b: &Shape) -> Shape {
    let (cube, renaming) = product_cube(&a.cube, &b.cube);
    Shape { cube, tope: Tope::and(a.tope.clone(), apply_renaming(&b.tope, &renaming)) }
}

/// The two halves `φ ∧ ζ` and `ψ ∧ χ` of the pushout-product domain, over
/// the product cube, for `j = (φ ⊆ ψ)` and `k = (χ ⊆ ζ)`.
pub fn leibniz_halves(j: &ShapeInclusion, k: &ShapeInclusion) -> Result<(CubeContext, Tope, Tope, Tope), ShapeError> {
    for inc in [j, k] {
        if !inc.verified {
            return Err(ShapeError::NotIncluded {
                sub: inc.domain().to_string(),
                sup: inc.codomain().to_string(),
                countermodel: None,
            });
        }
    }
    let (cube, renaming) = product_cube(&j.cube, &k.cube);
    let k_sub = apply_renaming(&k.sub, &renaming);
    let k_sup = apply_renaming(&k.sup, &renaming);
    let left = Tope::and(j.sub.clone(), k_sup.clone());
    let right = Tope::and(j.sup.clone(), k_sub);
    let sup = Tope::and(j.sup.clone(), k_sup);
    Ok((cube, left, right, sup))
}

/// Leibniz tensor (pushout product) `j ⊗̂ k`.
pub fn leibniz_tensor(j: &ShapeInclusion, k: &ShapeInclusion) -> Result<ShapeInclusion, ShapeError> {
    let (cube, left, right, sup) = leibniz_halves(j, k)?;
    is_inclusion(&cube, &Tope::or(left, right), &sup)
}

/// Renders the tensor domain as `(φ ∧ ζ) \/ (ψ ∧ χ)`, leaving out an empty half.
pub fn render_tensor_sub(left: &Tope, right: &Tope) -> String {
    match (left, right) {
        (Tope::Bot, r) => r.to_string(),
        (l, Tope::Bot) => l.to_string(),
        (l, r) => format!("({l}) \\/ ({r})"),
    }
}
