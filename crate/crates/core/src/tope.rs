//! Tope logic over the directed interval.
//!
//! Topes are quantifier-free formulas built from `<=` and `==` atoms over
//! interval terms (cube variables and the endpoints `0`, `1`). The interval is
//! a strict bounded total order: `0 <= x`, `x <= 1`, antisymmetry, linearity
//! and `0 != 1`.
//!
//! [`entails`] decides entailment by saturating each hypothesis clause and
//! case-splitting on linearity. [`oracle_entails`] is an independent brute
//! force check over finite chains, used to cross-validate the solver.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Maximum number of case-split branches explored by [`entails`].
pub const BRANCH_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopeError {
    #[error("cube variable `{0}` is not in scope")]
    Unscoped(String),
    #[error("cube variable `{0}` is declared twice")]
    DuplicateVariable(String),
    #[error("tope entailment exceeded {BRANCH_LIMIT} case-split branches")]
    BranchLimit,
}

/// A point of the directed interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntervalTerm<V = String> {
    Var(V),
    Zero,
    One,
}

impl<V> IntervalTerm<V> {
    pub fn map_var<W>(&self, f: &mut impl FnMut(&V) -> IntervalTerm<W>) -> IntervalTerm<W> {
        match self {
            IntervalTerm::Var(v) => f(v),
            IntervalTerm::Zero => IntervalTerm::Zero,
            IntervalTerm::One => IntervalTerm::One,
        }
    }
}

impl IntervalTerm<String> {
    pub fn var(name: &str) -> Self {
        IntervalTerm::Var(name.to_string())
    }
}

impl<V: fmt::Display> fmt::Display for IntervalTerm<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalTerm::Var(v) => write!(f, "{v}"),
            IntervalTerm::Zero => f.write_str("0"),
            IntervalTerm::One => f.write_str("1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tope<V = String> {
    Top,
    Bot,
    And(Box<Tope<V>>, Box<Tope<V>>),
    Or(Box<Tope<V>>, Box<Tope<V>>),
    Le(IntervalTerm<V>, IntervalTerm<V>),
    Eq(IntervalTerm<V>, IntervalTerm<V>),
}

impl<V: Clone + Ord> Tope<V> {
    /// Conjunction that drops `⊤` operands and absorbs `⊥`.
    pub fn and(a: Tope<V>, b: Tope<V>) -> Tope<V> {
        match (a, b) {
            (Tope::Top, x) | (x, Tope::Top) => x,
            (Tope::Bot, _) | (_, Tope::Bot) => Tope::Bot,
            (a, b) => Tope::And(Box::new(a), Box::new(b)),
        }
    }

    /// Disjunction that drops `⊥` operands and absorbs `⊤`.
    pub fn or(a: Tope<V>, b: Tope<V>) -> Tope<V> {
        match (a, b) {
            (Tope::Bot, x) | (x, Tope::Bot) => x,
            (Tope::Top, _) | (_, Tope::Top) => Tope::Top,
            (a, b) => Tope::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn conj(items: impl IntoIterator<Item = Tope<V>>) -> Tope<V> {
        items.into_iter().fold(Tope::Top, Tope::and)
    }

    pub fn disj(items: impl IntoIterator<Item = Tope<V>>) -> Tope<V> {
        items.into_iter().fold(Tope::Bot, Tope::or)
    }

    pub fn le(a: IntervalTerm<V>, b: IntervalTerm<V>) -> Tope<V> {
        Tope::Le(a, b)
    }

    pub fn eq(a: IntervalTerm<V>, b: IntervalTerm<V>) -> Tope<V> {
        Tope::Eq(a, b)
    }

    /// Substitutes interval terms for variables.
    pub fn map_vars<W>(&self, f: &mut impl FnMut(&V) -> IntervalTerm<W>) -> Tope<W> {
        match self {
            Tope::Top => Tope::Top,
            Tope::Bot => Tope::Bot,
            Tope::And(a, b) => Tope::And(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Tope::Or(a, b) => Tope::Or(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Tope::Le(a, b) => Tope::Le(a.map_var(f), b.map_var(f)),
            Tope::Eq(a, b) => Tope::Eq(a.map_var(f), b.map_var(f)),
        }
    }

    pub fn vars(&self) -> BTreeSet<V> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<V>) {
        match self {
            Tope::Top | Tope::Bot => {}
            Tope::And(a, b) | Tope::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Tope::Le(a, b) | Tope::Eq(a, b) => {
                for t in [a, b] {
                    if let IntervalTerm::Var(v) = t {
                        out.insert(v.clone());
                    }
                }
            }
        }
    }

    pub fn atom_count(&self) -> usize {
        match self {
            Tope::Top | Tope::Bot => 0,
            Tope::And(a, b) | Tope::Or(a, b) => a.atom_count() + b.atom_count(),
            Tope::Le(..) | Tope::Eq(..) => 1,
        }
    }

    /// Evaluates the tope under an assignment of variables to chain positions,
    /// where `0` is position 0 and `1` is position `top`.
    pub fn eval_in_chain(&self, top: usize, value: &impl Fn(&V) -> usize) -> bool {
        let pos = |t: &IntervalTerm<V>| match t {
            IntervalTerm::Zero => 0,
            IntervalTerm::One => top,
            IntervalTerm::Var(v) => value(v),
        };
        match self {
            Tope::Top => true,
            Tope::Bot => false,
            Tope::And(a, b) => a.eval_in_chain(top, value) && b.eval_in_chain(top, value),
            Tope::Or(a, b) => a.eval_in_chain(top, value) || b.eval_in_chain(top, value),
            Tope::Le(a, b) => pos(a) <= pos(b),
            Tope::Eq(a, b) => pos(a) == pos(b),
        }
    }
}

impl Tope<String> {
    pub fn rename(&self, from: &str, to: &str) -> Tope<String> {
        self.map_vars(&mut |v| {
            IntervalTerm::Var(if v == from { to.to_string() } else { v.clone() })
        })
    }
}

impl<V: fmt::Display> Tope<V> {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: disjunction level, 1: conjunction level, 2: atom
        match self {
            Tope::Top => f.write_str("TOP"),
            Tope::Bot => f.write_str("BOT"),
            Tope::Le(a, b) => write!(f, "{a}<={b}"),
            Tope::Eq(a, b) => write!(f, "{a}=={b}"),
            Tope::Or(a, b) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 0)?;
                f.write_str(" \\/ ")?;
                b.fmt_prec(f, 1)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Tope::And(a, b) => {
                if prec > 1 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 1)?;
                f.write_str(" /\\ ")?;
                b.fmt_prec(f, 2)?;
                if prec > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// ASCII rendering with minimal parentheses (`/\` binds tighter than `\/`).
impl<V: fmt::Display> fmt::Display for Tope<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// An ordered list of distinct cube variables, each ranging over the interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeContext<V = String> {
    vars: Vec<V>,
}

impl<V: Clone + Ord + fmt::Display> CubeContext<V> {
    pub fn new(vars: Vec<V>) -> Result<Self, TopeError> {
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.clone()) {
                return Err(TopeError::DuplicateVariable(v.to_string()));
            }
        }
        Ok(CubeContext { vars })
    }

    pub fn empty() -> Self {
        CubeContext { vars: Vec::new() }
    }

    pub fn vars(&self) -> &[V] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn contains(&self, v: &V) -> bool {
        self.vars.contains(v)
    }

    pub fn check_scope(&self, t: &Tope<V>) -> Result<(), TopeError> {
        for v in t.vars() {
            if !self.contains(&v) {
                return Err(TopeError::Unscoped(v.to_string()));
            }
        }
        Ok(())
    }
}

impl CubeContext<String> {
    pub fn of(names: &[&str]) -> Self {
        CubeContext::new(names.iter().map(|s| s.to_string()).collect())
            .expect("distinct cube variable names")
    }
}

impl<V: fmt::Display> fmt::Display for CubeContext<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

// ---------------------------------------------------------------------------
// Disjunctive normal form

#[derive(Debug, Clone, PartialEq, Eq)]
enum Atom<V> {
    Eq(IntervalTerm<V>, IntervalTerm<V>),
    Le(IntervalTerm<V>, IntervalTerm<V>),
}

impl<V: fmt::Display> Atom<V> {
    fn key(&self) -> (u8, String, String) {
        match self {
            Atom::Eq(a, b) => (0, a.to_string(), b.to_string()),
            Atom::Le(a, b) => (1, a.to_string(), b.to_string()),
        }
    }
}

impl<V: fmt::Display + Eq> PartialOrd for Atom<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<V: fmt::Display + Eq> Ord for Atom<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

type Clause<V> = Vec<Atom<V>>;

fn clauses_of<V: Clone + Ord + fmt::Display>(t: &Tope<V>) -> Vec<Clause<V>> {
    match t {
        Tope::Top => vec![Vec::new()],
        Tope::Bot => Vec::new(),
        Tope::Le(a, b) => vec![vec![Atom::Le(a.clone(), b.clone())]],
        Tope::Eq(a, b) => vec![vec![Atom::Eq(a.clone(), b.clone())]],
        Tope::Or(a, b) => {
            let mut out = clauses_of(a);
            out.extend(clauses_of(b));
            out
        }
        Tope::And(a, b) => {
            let left = clauses_of(a);
            let right = clauses_of(b);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r.iter().cloned());
                    out.push(c);
                }
            }
            out
        }
    }
}

fn canonical_clauses<V: Clone + Ord + fmt::Display>(t: &Tope<V>) -> Vec<Clause<V>> {
    let mut clauses: Vec<Clause<V>> = clauses_of(t)
        .into_iter()
        .map(|mut c| {
            c.sort();
            c.dedup();
            c
        })
        .collect();
    clauses.sort();
    clauses.dedup();
    clauses
}

fn atom_tope<V>(a: Atom<V>) -> Tope<V> {
    match a {
        Atom::Eq(x, y) => Tope::Eq(x, y),
        Atom::Le(x, y) => Tope::Le(x, y),
    }
}

fn rebuild<V>(clauses: Vec<Clause<V>>) -> Tope<V> {
    let mut disj: Option<Tope<V>> = None;
    for clause in clauses {
        let mut conj: Option<Tope<V>> = None;
        for atom in clause {
            let a = atom_tope(atom);
            conj = Some(match conj {
                None => a,
                Some(c) => Tope::And(Box::new(c), Box::new(a)),
            });
        }
        let c = conj.unwrap_or(Tope::Top);
        disj = Some(match disj {
            None => c,
            Some(d) => Tope::Or(Box::new(d), Box::new(c)),
        });
    }
    disj.unwrap_or(Tope::Bot)
}

/// Canonical disjunctive normal form: sorted, duplicate-free clauses of
/// sorted, duplicate-free atoms. `⊥` is the empty disjunction and `⊤` a single
/// empty clause.
pub fn dnf<V: Clone + Ord + fmt::Display>(
    ctx: &CubeContext<V>,
    t: &Tope<V>,
) -> Result<Tope<V>, TopeError> {
    ctx.check_scope(t)?;
    Ok(rebuild(canonical_clauses(t)))
}

/// The DNF clauses of `t` as separate conjunctive topes.
pub fn dnf_clauses<V: Clone + Ord + fmt::Display>(t: &Tope<V>) -> Vec<Tope<V>> {
    canonical_clauses(t)
        .into_iter()
        .map(|c| rebuild(vec![c]))
        .collect()
}

// ---------------------------------------------------------------------------
// Saturation-based decision procedure

#[derive(Clone, Copy)]
enum GoalNode {
    Top,
    Bot,
    Le(usize, usize),
    Eq(usize, usize),
}

/// Goal formula over term indices, stored as a flat tree.
struct Goal {
    nodes: Vec<(GoalNode, Option<(bool, usize, usize)>)>,
    root: usize,
}

impl Goal {
    fn build<V: Ord + Clone>(t: &Tope<V>, index: &BTreeMap<IntervalTerm<V>, usize>) -> Goal {
        let mut g = Goal { nodes: Vec::new(), root: 0 };
        g.root = g.push(t, index);
        g
    }

    fn push<V: Ord + Clone>(&mut self, t: &Tope<V>, index: &BTreeMap<IntervalTerm<V>, usize>) -> usize {
        let node = match t {
            Tope::Top => (GoalNode::Top, None),
            Tope::Bot => (GoalNode::Bot, None),
            Tope::Le(a, b) => (GoalNode::Le(index[a], index[b]), None),
            Tope::Eq(a, b) => (GoalNode::Eq(index[a], index[b]), None),
            Tope::And(a, b) | Tope::Or(a, b) => {
                let l = self.push(a, index);
                let r = self.push(b, index);
                (GoalNode::Top, Some((matches!(t, Tope::And(..)), l, r)))
            }
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// True iff the formula holds when exactly the derivable atoms are true.
    fn holds(&self, st: &Order, i: usize) -> bool {
        let (leaf, conn) = self.nodes[i];
        if let Some((is_and, l, r)) = conn {
            return if is_and {
                self.holds(st, l) && self.holds(st, r)
            } else {
                self.holds(st, l) || self.holds(st, r)
            };
        }
        match leaf {
            GoalNode::Top => true,
            GoalNode::Bot => false,
            GoalNode::Le(a, b) => st.le(a, b),
            GoalNode::Eq(a, b) => st.le(a, b) && st.le(b, a),
        }
    }
}

/// A preorder on term indices; index 0 is the bottom `0`, index 1 the top `1`.
#[derive(Clone)]
struct Order {
    n: usize,
    rel: Vec<bool>,
}

impl Order {
    fn new(n: usize) -> Order {
        let mut o = Order { n, rel: vec![false; n * n] };
        for i in 0..n {
            o.set(i, i);
            o.set(0, i);
            o.set(i, 1);
        }
        o
    }

    fn le(&self, a: usize, b: usize) -> bool {
        self.rel[a * self.n + b]
    }

    fn set(&mut self, a: usize, b: usize) {
        self.rel[a * self.n + b] = true;
    }

    fn close(&mut self) {
        let n = self.n;
        for k in 0..n {
            for i in 0..n {
                if !self.le(i, k) {
                    continue;
                }
                for j in 0..n {
                    if self.le(k, j) {
                        self.set(i, j);
                    }
                }
            }
        }
    }

    fn inconsistent(&self) -> bool {
        self.le(1, 0)
    }

    fn incomparable_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if !self.le(i, j) && !self.le(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

fn index_terms<V: Clone + Ord>(hyp: &Tope<V>, goal: &Tope<V>) -> BTreeMap<IntervalTerm<V>, usize> {
    let mut index = BTreeMap::new();
    index.insert(IntervalTerm::Zero, 0);
    index.insert(IntervalTerm::One, 1);
    for v in hyp.vars().into_iter().chain(goal.vars()) {
        let next = index.len();
        index.entry(IntervalTerm::Var(v)).or_insert(next);
    }
    index
}

fn refute(order: Order, goal: &Goal, budget: &mut usize) -> Result<bool, TopeError> {
    if *budget == 0 {
        return Err(TopeError::BranchLimit);
    }
    *budget -= 1;
    let mut order = order;
    order.close();
    if order.inconsistent() || goal.holds(&order, goal.root) {
        return Ok(true);
    }
    match order.incomparable_pair() {
        None => Ok(false),
        Some((i, j)) => {
            let mut left = order.clone();
            left.set(i, j);
            if !refute(left, goal, budget)? {
                return Ok(false);
            }
            let mut right = order;
            right.set(j, i);
            refute(right, goal, budget)
        }
    }
}

/// Decides whether `hyp` entails `goal` in every bounded total order with
/// distinct endpoints.
pub fn entails<V: Clone + Ord + fmt::Display>(
    ctx: &CubeContext<V>,
    hyp: &Tope<V>,
    goal: &Tope<V>,
) -> Result<bool, TopeError> {
    ctx.check_scope(hyp)?;
    ctx.check_scope(goal)?;
    let index = index_terms(hyp, goal);
    let goal_tree = Goal::build(goal, &index);
    let mut budget = BRANCH_LIMIT;
    for clause in canonical_clauses(hyp) {
        let mut order = Order::new(index.len());
        for atom in &clause {
            match atom {
                Atom::Le(a, b) => order.set(index[a], index[b]),
                Atom::Eq(a, b) => {
                    order.set(index[a], index[b]);
                    order.set(index[b], index[a]);
                }
            }
        }
        if !refute(order, &goal_tree, &mut budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mutual entailment.
pub fn equiv<V: Clone + Ord + fmt::Display>(
    ctx: &CubeContext<V>,
    a: &Tope<V>,
    b: &Tope<V>,
) -> Result<bool, TopeError> {
    Ok(entails(ctx, a, b)? && entails(ctx, b, a)?)
}

pub fn satisfiable<V: Clone + Ord + fmt::Display>(
    ctx: &CubeContext<V>,
    t: &Tope<V>,
) -> Result<bool, TopeError> {
    Ok(!entails(ctx, t, &Tope::Bot)?)
}

// ---------------------------------------------------------------------------
// Finite-chain oracle

/// A position in the chain `{0, 1, ..., n+1}` used by the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainPoint {
    Bottom,
    Inner(usize),
    Top,
}

impl fmt::Display for ChainPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainPoint::Bottom => f.write_str("⟂"),
            ChainPoint::Top => f.write_str("⊤"),
            ChainPoint::Inner(i) => write!(f, "{i}"),
        }
    }
}

/// An assignment of cube variables to chain positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel<V = String> {
    pub assignment: Vec<(V, ChainPoint)>,
}

impl<V: fmt::Display> fmt::Display for Countermodel<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, p)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={p}")?;
        }
        Ok(())
    }
}

/// Enumerates chain assignments, endpoints first, and returns the first one
/// satisfying `hyp` but not `goal`.
fn search_countermodel<V: Clone + Ord + fmt::Display>(
    vars: &[V],
    hyp: &Tope<V>,
    goal: &Tope<V>,
) -> Option<Vec<usize>> {
    let n = vars.len();
    let top = n + 1;
    // Enumeration order of chain positions: bottom, top, then inner points.
    let order: Vec<usize> = [0, top].into_iter().chain(1..top).collect();
    let mut digits = vec![0usize; n];
    loop {
        let assignment: Vec<usize> = digits.iter().map(|&d| order[d]).collect();
        let lookup = |v: &V| {
            let i = vars.iter().position(|w| w == v).expect("scoped variable");
            assignment[i]
        };
        if hyp.eval_in_chain(top, &lookup) && !goal.eval_in_chain(top, &lookup) {
            return Some(assignment);
        }
        // odometer increment, last variable fastest
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < order.len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Brute-force entailment over all assignments into the chain of length
/// `|ctx| + 2`. Any countermodel collapses to at most that many distinct
/// values, so the check is complete.
pub fn oracle_entails<V: Clone + Ord + fmt::Display>(
    ctx: &CubeContext<V>,
    hyp: &Tope<V>,
    goal: &Tope<V>,
) -> Result<bool, TopeError> {
    ctx.check_scope(hyp)?;
    ctx.check_scope(goal)?;
    Ok(search_countermodel(ctx.vars(), hyp, goal).is_none())
}

/// A chain countermodel to `hyp ⊢ goal`, if entailment fails.
pub fn countermodel<V: Clone + Ord + fmt::Display>(
    ctx: &CubeContext<V>,
    hyp: &Tope<V>,
    goal: &Tope<V>,
) -> Result<Option<Countermodel<V>>, TopeError> {
    ctx.check_scope(hyp)?;
    ctx.check_scope(goal)?;
    let vars = ctx.vars();
    let top = vars.len() + 1;
    Ok(search_countermodel(vars, hyp, goal).map(|assignment| Countermodel {
        assignment: vars
            .iter()
            .cloned()
            .zip(assignment.into_iter().map(|p| {
                if p == 0 {
                    ChainPoint::Bottom
                } else if p == top {
                    ChainPoint::Top
                } else {
                    ChainPoint::Inner(p)
                }
            }))
            .collect(),
    }))
}
