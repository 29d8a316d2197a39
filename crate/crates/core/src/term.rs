//! First-order terms, signatures, substitutions and the syntactic
//! operations on them: positions, matching, unification and Herbrand
//! universe enumeration.
//!
//! Terms are immutable values. Application nodes are reference counted so
//! cloning a term is cheap; equality and hashing are purely structural.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name of the binary magma operation, written infix.
pub const MUL: &str = "*";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("position {position} is not valid in {term}")]
    InvalidPosition { position: Position, term: String },
    #[error("symbol `{name}` applied to {given} arguments but has arity {arity}")]
    ArityMismatch { name: String, arity: usize, given: usize },
    #[error("symbol `{name}` declared with arities {first} and {second}")]
    ConflictingArity { name: String, first: usize, second: usize },
    #[error("empty symbol name")]
    EmptyName,
    #[error("signature has no constants, so its Herbrand universe is empty")]
    NoConstants,
}

/// A function or constant symbol. Equality is by name and arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    name: Arc<str>,
    arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<Arc<str>>, arity: usize) -> Symbol {
        let name = name.into();
        assert!(!name.is_empty(), "symbol names must be non-empty");
        Symbol { name, arity }
    }

    pub fn constant(name: impl Into<Arc<str>>) -> Symbol {
        Symbol::new(name, 0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_constant(&self) -> bool {
        self.arity == 0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Declaration-ordered set of symbols with injective lookup by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<Symbol>,
    index: HashMap<Arc<str>, usize>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    /// Adds `symbol` unless already present. Returns whether it was new.
    pub fn add(&mut self, symbol: Symbol) -> Result<bool, TermError> {
        match self.index.get(&symbol.name) {
            Some(&i) if self.symbols[i].arity == symbol.arity => Ok(false),
            Some(&i) => Err(TermError::ConflictingArity {
                name: symbol.name.to_string(),
                first: self.symbols[i].arity,
                second: symbol.arity,
            }),
            None => {
                self.index.insert(symbol.name.clone(), self.symbols.len());
                self.symbols.push(symbol);
                Ok(true)
            }
        }
    }

    /// Adds every symbol occurring in `t`, in outermost-leftmost order.
    pub fn add_term(&mut self, t: &Term) -> Result<(), TermError> {
        for (_, sub) in t.subterm_positions() {
            if let Term::App(app) = sub {
                self.add(app.symbol.clone())?;
            }
        }
        Ok(())
    }

    pub fn extend(&mut self, other: &Signature) -> Result<(), TermError> {
        for s in other.symbols() {
            self.add(s.clone())?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.index.get(name).map(|&i| &self.symbols[i])
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.get(symbol.name()) == Some(symbol)
    }

    /// Position of `symbol` in declaration order.
    pub fn position(&self, symbol: &Symbol) -> Option<usize> {
        self.index
            .get(&symbol.name)
            .copied()
            .filter(|&i| self.symbols[i].arity == symbol.arity)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn constants(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.iter().filter(|s| s.is_constant())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// A constant name not yet used in this signature.
    pub fn fresh_constant(&self, base: &str) -> Symbol {
        if self.get(base).is_none() {
            return Symbol::constant(base);
        }
        (0..)
            .map(|i| format!("{base}{i}"))
            .find(|n| self.get(n).is_none())
            .map(Symbol::constant)
            .expect("unbounded name supply")
    }
}

impl FromIterator<Symbol> for Signature {
    /// Panics on conflicting arities.
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Signature {
        let mut sig = Signature::new();
        for s in iter {
            sig.add(s).expect("conflicting arity");
        }
        sig
    }
}

/// A variable, identified by its index within a clause.
///
/// Indices 0..6 print as `x y z w u v`; later ones as `x6`, `x7`, ...
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var(pub u32);

const VAR_NAMES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];

impl Var {
    pub fn name(self) -> String {
        match VAR_NAMES.get(self.0 as usize) {
            Some(n) => (*n).to_string(),
            None => format!("x{}", self.0),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone)]
pub struct App {
    symbol: Symbol,
    args: Vec<Term>,
    size: usize,
    ground: bool,
    /// structural hash, computed once
    hash: u64,
}

impl PartialEq for App {
    fn eq(&self, other: &App) -> bool {
        self.hash == other.hash && self.size == other.size && self.symbol == other.symbol && self.args == other.args
    }
}

impl Eq for App {}

impl App {
    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }
}

#[derive(Clone, Eq)]
pub enum Term {
    Var(Var),
    App(Arc<App>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a == b,
            (Term::App(a), Term::App(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.structural_hash());
    }
}

impl Term {
    pub fn var(index: u32) -> Term {
        Term::Var(Var(index))
    }

    pub fn constant(name: &str) -> Term {
        Term::app(Symbol::constant(name), vec![])
    }

    /// Builds an application. Panics if `args.len()` differs from the arity.
    pub fn app(symbol: Symbol, args: Vec<Term>) -> Term {
        Term::try_app(symbol, args).expect("arity mismatch")
    }

    pub fn try_app(symbol: Symbol, args: Vec<Term>) -> Result<Term, TermError> {
        if symbol.arity != args.len() {
            return Err(TermError::ArityMismatch {
                name: symbol.name.to_string(),
                arity: symbol.arity,
                given: args.len(),
            });
        }
        let size = 1 + args.iter().map(Term::size).sum::<usize>();
        let ground = args.iter().all(Term::is_ground);
        let mut h = std::collections::hash_map::DefaultHasher::new();
        symbol.hash(&mut h);
        for a in &args {
            h.write_u64(a.structural_hash());
        }
        let hash = h.finish();
        Ok(Term::App(Arc::new(App {
            symbol,
            args,
            size,
            ground,
            hash,
        })))
    }

    /// `s * t` for the magma operation.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(s: Term, t: Term) -> Term {
        Term::app(Symbol::new(MUL, 2), vec![s, t])
    }

    fn structural_hash(&self) -> u64 {
        match self {
            Term::Var(v) => 0x9e37_79b9_7f4a_7c15 ^ u64::from(v.0),
            Term::App(app) => app.hash,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(_) => None,
        }
    }

    pub fn head(&self) -> Option<&Symbol> {
        match self {
            Term::Var(_) => None,
            Term::App(app) => Some(&app.symbol),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(app) => &app.args,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(app) => app.ground,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(app) => app.size,
        }
    }

    /// Number of applications of non-constant symbols.
    pub fn operation_count(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(app) if app.args.is_empty() => 0,
            Term::App(app) => 1 + app.args.iter().map(Term::operation_count).sum::<usize>(),
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(app) => !app.ground && app.args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Variables in first-occurrence order, without repetition.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            Term::App(app) if !app.ground => app.args.iter().for_each(|a| a.collect_vars(out)),
            Term::App(_) => {}
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(v.0),
            Term::App(app) if app.ground => None,
            Term::App(app) => app.args.iter().filter_map(Term::max_var).max(),
        }
    }

    /// Occurrence count of `v`.
    pub fn var_occurrences(&self, v: Var) -> usize {
        match self {
            Term::Var(w) => usize::from(*w == v),
            Term::App(app) if app.ground => 0,
            Term::App(app) => app.args.iter().map(|a| a.var_occurrences(v)).sum(),
        }
    }

    /// Every position of the term with its subterm, root first, then the
    /// arguments left to right (outermost-leftmost).
    pub fn subterm_positions(&self) -> Vec<(Position, &Term)> {
        let mut out = Vec::with_capacity(self.size());
        let mut path = Vec::new();
        fn go<'t>(t: &'t Term, path: &mut Vec<usize>, out: &mut Vec<(Position, &'t Term)>) {
            out.push((Position(path.clone()), t));
            for (i, a) in t.args().iter().enumerate() {
                path.push(i);
                go(a, path, out);
                path.pop();
            }
        }
        go(self, &mut path, &mut out);
        out
    }

    /// Positions in innermost-leftmost order (post-order).
    pub fn positions_innermost(&self) -> Vec<Position> {
        let mut out = Vec::with_capacity(self.size());
        let mut path = Vec::new();
        fn go(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Position>) {
            for (i, a) in t.args().iter().enumerate() {
                path.push(i);
                go(a, path, out);
                path.pop();
            }
            out.push(Position(path.clone()));
        }
        go(self, &mut path, &mut out);
        out
    }

    pub fn subterm_at(&self, p: &Position) -> Option<&Term> {
        let mut t = self;
        for &i in &p.0 {
            t = t.args().get(i)?;
        }
        Some(t)
    }

    /// Returns `self` with the subterm at `p` replaced by `s`.
    pub fn replace_at(&self, p: &Position, s: Term) -> Result<Term, TermError> {
        fn go(t: &Term, path: &[usize], s: Term) -> Option<Term> {
            let Some((&i, rest)) = path.split_first() else {
                return Some(s);
            };
            let Term::App(app) = t else { return None };
            let child = go(app.args.get(i)?, rest, s)?;
            let mut args = app.args.clone();
            args[i] = child;
            Some(Term::app(app.symbol.clone(), args))
        }
        go(self, &p.0, s).ok_or_else(|| TermError::InvalidPosition {
            position: p.clone(),
            term: self.to_string(),
        })
    }

    /// Adds `offset` to every variable index.
    pub fn shift_vars(&self, offset: u32) -> Term {
        if offset == 0 || self.is_ground() {
            return self.clone();
        }
        match self {
            Term::Var(v) => Term::Var(Var(v.0 + offset)),
            Term::App(app) => Term::app(
                app.symbol.clone(),
                app.args.iter().map(|a| a.shift_vars(offset)).collect(),
            ),
        }
    }

    /// Renames variables through `map`, leaving unmapped ones unchanged.
    pub fn rename(&self, map: &HashMap<Var, Var>) -> Term {
        match self {
            Term::Var(v) => Term::Var(*map.get(v).unwrap_or(v)),
            Term::App(app) if app.ground => self.clone(),
            Term::App(app) => Term::app(app.symbol.clone(), app.args.iter().map(|a| a.rename(map)).collect()),
        }
    }

    /// Tests whether `self` occurs at some position of `t`, possibly the root.
    pub fn is_subterm_of(&self, t: &Term) -> bool {
        if self.size() > t.size() {
            return false;
        }
        self == t || t.args().iter().any(|a| self.is_subterm_of(a))
    }
}

/// Size first, then variables before applications, then variable index or
/// symbol and arguments lexicographically. Total on terms.
impl Ord for Term {
    fn cmp(&self, other: &Term) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Var(_), Term::App(_)) => Ordering::Less,
            (Term::App(_), Term::Var(_)) => Ordering::Greater,
            (Term::App(a), Term::App(b)) => a.symbol.cmp(&b.symbol).then_with(|| a.args.iter().cmp(b.args.iter())),
        })
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Term) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn needs_parens(t: &Term) -> bool {
    matches!(t, Term::App(app) if app.symbol.name() == MUL && app.args.len() == 2)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(app) if app.args.is_empty() => write!(f, "{}", app.symbol),
            Term::App(app) if app.symbol.name() == MUL && app.args.len() == 2 => {
                for (i, a) in app.args.iter().enumerate() {
                    if i == 1 {
                        f.write_str("*")?;
                    }
                    if needs_parens(a) {
                        write!(f, "({a})")?;
                    } else {
                        write!(f, "{a}")?;
                    }
                }
                Ok(())
            }
            Term::App(app) => {
                write!(f, "{}(", app.symbol)?;
                for (i, a) in app.args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Path of argument indices from the root; empty is the root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Finite map from variables to terms.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Substitution {
    bindings: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.bindings.get(&v)
    }

    pub fn insert(&mut self, v: Var, t: Term) -> Option<Term> {
        self.bindings.insert(v, t)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &Term)> {
        self.bindings.iter().map(|(v, t)| (*v, t))
    }

    /// Simultaneous replacement; unbound variables are unchanged.
    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() || t.is_ground() {
            return t.clone();
        }
        match t {
            Term::Var(v) => self.bindings.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(app) => Term::app(app.symbol.clone(), app.args.iter().map(|a| self.apply(a)).collect()),
        }
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Substitution {
        Substitution {
            bindings: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}↦{t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Terms serialize as their display string.
impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Serializes as a map from variable name to term string.
impl Serialize for Substitution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.bindings.iter().map(|(v, t)| (v.name(), t.to_string())))
    }
}

pub fn is_ground(t: &Term) -> bool {
    t.is_ground()
}

pub fn apply_subst(sigma: &Substitution, t: &Term) -> Term {
    sigma.apply(t)
}

/// One-way matching: finds `σ` with `σ(pattern) = subject`.
///
/// Variables of `subject` are treated as rigid constants.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    match_into(pattern, subject, &mut sigma).then_some(sigma)
}

/// Extends `sigma` so that `sigma(pattern) = subject`. On failure `sigma`
/// may hold partial bindings.
pub fn match_into(pattern: &Term, subject: &Term, sigma: &mut Substitution) -> bool {
    match pattern {
        Term::Var(v) => match sigma.bindings.get(v) {
            Some(bound) => bound == subject,
            None => {
                sigma.bindings.insert(*v, subject.clone());
                true
            }
        },
        Term::App(p) => match subject {
            Term::Var(_) => false,
            Term::App(s) => {
                if p.ground {
                    return pattern == subject;
                }
                p.symbol == s.symbol
                    && p.size <= s.size
                    && p.args.iter().zip(&s.args).all(|(pa, sa)| match_into(pa, sa, sigma))
            }
        },
    }
}

/// Most general unifier with occurs check.
///
/// The result is idempotent: no bound variable occurs in any binding.
pub fn unify(s: &Term, t: &Term) -> Option<Substitution> {
    let mut bindings: HashMap<Var, Term> = HashMap::new();
    let mut stack = vec![(s.clone(), t.clone())];

    fn walk(t: &Term, b: &HashMap<Var, Term>) -> Term {
        let mut cur = t.clone();
        while let Term::Var(v) = cur {
            match b.get(&v) {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }

    fn occurs(v: Var, t: &Term, b: &HashMap<Var, Term>) -> bool {
        match walk(t, b) {
            Term::Var(w) => w == v,
            Term::App(app) => !app.ground && app.args.iter().any(|a| occurs(v, a, b)),
        }
    }

    while let Some((a, b)) = stack.pop() {
        let a = walk(&a, &bindings);
        let b = walk(&b, &bindings);
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if occurs(*x, other, &bindings) {
                    return None;
                }
                bindings.insert(*x, other.clone());
            }
            (Term::App(fa), Term::App(fb)) => {
                if fa.symbol != fb.symbol {
                    return None;
                }
                stack.extend(fa.args.iter().cloned().zip(fb.args.iter().cloned()));
            }
        }
    }

    fn resolve(t: &Term, b: &HashMap<Var, Term>) -> Term {
        match walk(t, b) {
            v @ Term::Var(_) => v,
            Term::App(app) if app.ground => Term::App(app),
            Term::App(app) => Term::app(app.symbol.clone(), app.args.iter().map(|a| resolve(a, b)).collect()),
        }
    }

    Some(
        bindings
            .keys()
            .map(|v| (*v, resolve(&Term::Var(*v), &bindings)))
            .collect(),
    )
}

/// All ground terms with at most `max_ops` applications of non-constant
/// symbols, ordered by operation count and then by the [`Ord`] on terms.
pub fn ground_terms_up_to(sig: &Signature, max_ops: usize) -> Result<Vec<Term>, TermError> {
    let constants: Vec<Term> = sig.constants().map(|c| Term::app(c.clone(), vec![])).collect();
    if constants.is_empty() {
        return Err(TermError::NoConstants);
    }
    let functions: Vec<&Symbol> = sig.symbols().iter().filter(|s| s.arity > 0).collect();
    // by_ops[k] holds every ground term with exactly k operations
    let mut by_ops: Vec<Vec<Term>> = vec![constants];
    for k in 1..=max_ops {
        let mut level = BTreeSet::new();
        for f in &functions {
            for split in compositions(k - 1, f.arity) {
                let pools: Vec<&Vec<Term>> = split.iter().map(|&n| &by_ops[n]).collect();
                for_each_product(&pools, &mut |args| {
                    level.insert(Term::app((*f).clone(), args.to_vec()));
                });
            }
        }
        by_ops.push(level.into_iter().collect());
    }
    let mut out = Vec::new();
    for mut level in by_ops {
        level.sort();
        out.extend(level);
    }
    Ok(out)
}

/// Ordered ways of writing `total` as a sum of `parts` non-negative integers.
pub(crate) fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn for_each_product(pools: &[&Vec<Term>], f: &mut dyn FnMut(&[Term])) {
    fn go(pools: &[&Vec<Term>], acc: &mut Vec<Term>, f: &mut dyn FnMut(&[Term])) {
        match pools.split_first() {
            None => f(acc),
            Some((first, rest)) => {
                for t in first.iter() {
                    acc.push(t.clone());
                    go(rest, acc, f);
                    acc.pop();
                }
            }
        }
    }
    go(pools, &mut Vec::with_capacity(pools.len()), f)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn c(name: &str) -> Term {
        Term::constant(name)
    }

    pub fn f(name: &str, args: Vec<Term>) -> Term {
        Term::app(Symbol::new(name, args.len()), args)
    }

    pub fn x() -> Term {
        Term::var(0)
    }

    pub fn y() -> Term {
        Term::var(1)
    }

    fn m(s: Term, t: Term) -> Term {
        Term::mul(s, t)
    }

    #[test]
    fn groundness() {
        assert!(c("a").is_ground());
        assert!(!f("f", vec![x(), c("a")]).is_ground());
        let t = f("f", vec![f("f", vec![c("b"), c("a")]), c("a")]);
        assert!(t.is_ground());
    }

    #[test]
    fn positions_outermost_leftmost() {
        let a = c("a");
        let ps = a.subterm_positions();
        assert_eq!(ps, vec![(Position::root(), &a)]);

        let t = f("f", vec![c("a"), c("b")]);
        let ps: Vec<_> = t
            .subterm_positions()
            .into_iter()
            .map(|(p, s)| (p.to_string(), s.to_string()))
            .collect();
        assert_eq!(
            ps,
            vec![
                ("ε".to_string(), "f(a,b)".to_string()),
                ("0".to_string(), "a".to_string()),
                ("1".to_string(), "b".to_string()),
            ]
        );

        let t = f("f", vec![f("f", vec![c("b"), c("a")]), c("a")]);
        assert_eq!(t.subterm_positions().len(), 5);
        assert_eq!(t.positions_innermost().len(), 5);
        assert_eq!(t.positions_innermost().last(), Some(&Position::root()));
    }

    #[test]
    fn replacement() {
        let t = f("f", vec![c("a"), c("b")]);
        assert_eq!(
            t.replace_at(&Position(vec![0]), c("b")).unwrap(),
            f("f", vec![c("b"), c("b")])
        );
        let faa = f("f", vec![c("a"), c("a")]);
        assert_eq!(c("a").replace_at(&Position::root(), faa.clone()).unwrap(), faa);

        let t = f("f", vec![f("f", vec![c("b"), c("a")]), c("a")]);
        let r = t.replace_at(&Position(vec![0]), f("f", vec![c("a"), c("b")])).unwrap();
        assert_eq!(r.to_string(), "f(f(a,b),a)");

        assert!(matches!(
            c("a").replace_at(&Position(vec![0]), c("b")),
            Err(TermError::InvalidPosition { .. })
        ));
        assert!(t.replace_at(&Position(vec![2]), c("b")).is_err());
    }

    #[test]
    fn matching() {
        let s = match_term(&f("f", vec![x(), y()]), &f("f", vec![c("a"), c("b")])).unwrap();
        assert_eq!(s.get(Var(0)), Some(&c("a")));
        assert_eq!(s.get(Var(1)), Some(&c("b")));
        assert!(match_term(&f("f", vec![x(), x()]), &f("f", vec![c("a"), c("b")])).is_none());

        // y*(x*(y*(y*y))) against (a*a)*(a*(a*a))
        let pat = m(y(), m(x(), m(y(), m(y(), y()))));
        let a = c("a");
        let subj = m(m(a.clone(), a.clone()), m(a.clone(), m(a.clone(), a.clone())));
        assert!(match_term(&pat, &subj).is_none());
        for (_, sub) in subj.subterm_positions() {
            assert!(match_term(&pat, sub).is_none());
        }
    }

    #[test]
    fn unification() {
        let s = unify(&f("f", vec![x(), c("a")]), &f("f", vec![c("b"), y()])).unwrap();
        assert_eq!(s.get(Var(0)), Some(&c("b")));
        assert_eq!(s.get(Var(1)), Some(&c("a")));
        assert!(unify(&x(), &f("f", vec![x()])).is_none());

        let l = f("f", vec![x(), y()]);
        let r = f("f", vec![y(), x()]);
        let s = unify(&l, &r).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.apply(&l), s.apply(&r));

        assert!(unify(&c("a"), &c("b")).is_none());
        assert!(unify(&x(), &x()).unwrap().is_empty());
    }

    #[test]
    fn substitution_application() {
        let s: Substitution = [(Var(0), c("a"))].into_iter().collect();
        assert_eq!(s.apply(&f("f", vec![x(), y()])), f("f", vec![c("a"), y()]));
        let t = f("f", vec![x(), y()]);
        assert_eq!(Substitution::new().apply(&t), t);
        let s: Substitution = [(Var(0), c("a")), (Var(1), c("b"))].into_iter().collect();
        assert_eq!(s.apply(&m(m(x(), y()), y())).to_string(), "(a*b)*b");
    }

    #[test]
    fn herbrand_enumeration() {
        let sig: Signature = [Symbol::new(MUL, 2), Symbol::constant("a")].into_iter().collect();
        assert_eq!(ground_terms_up_to(&sig, 0).unwrap(), vec![c("a")]);
        let got: Vec<String> = ground_terms_up_to(&sig, 2)
            .unwrap()
            .iter()
            .map(Term::to_string)
            .collect();
        assert_eq!(got, vec!["a", "a*a", "a*(a*a)", "(a*a)*a"]);

        let sig: Signature = [Symbol::new(MUL, 2), Symbol::constant("a"), Symbol::constant("b")]
            .into_iter()
            .collect();
        let got: Vec<String> = ground_terms_up_to(&sig, 1)
            .unwrap()
            .iter()
            .map(Term::to_string)
            .collect();
        assert_eq!(got, vec!["a", "b", "a*a", "a*b", "b*a", "b*b"]);

        let sig: Signature = [Symbol::new("f", 1)].into_iter().collect();
        assert_eq!(ground_terms_up_to(&sig, 3), Err(TermError::NoConstants));
    }

    #[test]
    fn signature_rejects_arity_conflicts() {
        let mut sig = Signature::new();
        assert!(sig.add(Symbol::new("f", 2)).unwrap());
        assert!(!sig.add(Symbol::new("f", 2)).unwrap());
        assert!(sig.add(Symbol::new("f", 1)).is_err());
        assert_eq!(sig.fresh_constant("c").name(), "c");
        sig.add(Symbol::constant("c")).unwrap();
        assert_eq!(sig.fresh_constant("c").name(), "c0");
    }

    #[test]
    fn display() {
        let t = m(y(), m(x(), m(y(), m(y(), y()))));
        assert_eq!(t.to_string(), "y*(x*(y*(y*y)))");
        assert_eq!(Term::var(7).to_string(), "x7");
        assert_eq!(f("f1", vec![y(), x()]).to_string(), "f1(y,x)");
    }
}
