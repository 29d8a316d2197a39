//! Equations of a single binary operation with at most four applications,
//! counted up to variable renaming and side swap, and implication problems
//! between them.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::equation::Equation;
use crate::term::{Symbol, Term, Var, MUL};
use crate::tptp::Problem;

pub const MAX_OPERATIONS: usize = 4;
pub const EXPECTED_COUNT: usize = 4694;

const SKOLEM_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EtpError {
    #[error("`{0}` uses a symbol other than the binary operation")]
    NotMagma(Equation),
    #[error("`{equation}` applies the operation {count} times, more than {MAX_OPERATIONS}")]
    TooLarge { equation: Equation, count: usize },
    #[error("cannot parse equation `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error("mapping line {line}: {reason}")]
    Mapping { line: usize, reason: String },
    #[error("equation index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
}

/// A canonical magma equation: variables renamed in first-occurrence order
/// and the smaller of the two orientations kept.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct MagmaEquation(Equation);

fn is_magma_term(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(app) => app.symbol().name() == MUL && app.args().len() == 2 && app.args().iter().all(is_magma_term),
    }
}

impl MagmaEquation {
    pub fn canonicalize(e: &Equation) -> Result<MagmaEquation, EtpError> {
        if !is_magma_term(&e.lhs) || !is_magma_term(&e.rhs) {
            return Err(EtpError::NotMagma(e.clone()));
        }
        let count = e.lhs.operation_count() + e.rhs.operation_count();
        if count > MAX_OPERATIONS {
            return Err(EtpError::TooLarge {
                equation: e.clone(),
                count,
            });
        }
        let a = e.normalized();
        let b = e.swapped().normalized();
        Ok(MagmaEquation(if order_key(&b) < order_key(&a) { b } else { a }))
    }

    pub fn equation(&self) -> &Equation {
        &self.0
    }

    pub fn lhs(&self) -> &Term {
        &self.0.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.0.rhs
    }

    pub fn operation_count(&self) -> usize {
        self.0.lhs.operation_count() + self.0.rhs.operation_count()
    }
}

/// The fixed total order on equations: operation count, then operations
/// on the left, then the two tree shapes, then the variable labels of the
/// leaves from left to right. Shapes of equal size compare by the
/// operation count of the left subtree, then left subtree, then right
/// subtree, so right-leaning trees come first. With this order the
/// enumeration numbers equations the same way as the usual magma
/// equation catalogue, e.g. 118 is `x = y*((x*y)*y)`.
#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct OrderKey {
    operations: usize,
    lhs_operations: usize,
    lhs_shape: Vec<usize>,
    rhs_shape: Vec<usize>,
    labels: Vec<u32>,
}

fn shape_code(t: &Term, out: &mut Vec<usize>) {
    if let [l, r] = t.args() {
        out.push(l.operation_count());
        shape_code(l, out);
        shape_code(r, out);
    }
}

fn leaf_labels(t: &Term, out: &mut Vec<u32>) {
    match t {
        Term::Var(v) => out.push(v.0),
        Term::App(app) => app.args().iter().for_each(|a| leaf_labels(a, out)),
    }
}

fn order_key(e: &Equation) -> OrderKey {
    let mut lhs_shape = Vec::new();
    let mut rhs_shape = Vec::new();
    shape_code(&e.lhs, &mut lhs_shape);
    shape_code(&e.rhs, &mut rhs_shape);
    let mut labels = Vec::new();
    leaf_labels(&e.lhs, &mut labels);
    leaf_labels(&e.rhs, &mut labels);
    OrderKey {
        operations: e.lhs.operation_count() + e.rhs.operation_count(),
        lhs_operations: e.lhs.operation_count(),
        lhs_shape,
        rhs_shape,
        labels,
    }
}

impl Ord for MagmaEquation {
    fn cmp(&self, other: &MagmaEquation) -> std::cmp::Ordering {
        order_key(&self.0).cmp(&order_key(&other.0))
    }
}

impl PartialOrd for MagmaEquation {
    fn partial_cmp(&self, other: &MagmaEquation) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MagmaEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Binary tree shapes, in the order of the equation key.
#[derive(Clone)]
enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

fn shapes(ops: usize) -> Vec<Shape> {
    if ops == 0 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for left in 0..ops {
        for l in shapes(left) {
            for r in shapes(ops - 1 - left) {
                out.push(Shape::Node(Box::new(l.clone()), Box::new(r.clone())));
            }
        }
    }
    out
}

fn leaves(s: &Shape) -> usize {
    match s {
        Shape::Leaf => 1,
        Shape::Node(l, r) => leaves(l) + leaves(r),
    }
}

fn fill(s: &Shape, labels: &mut impl Iterator<Item = u32>) -> Term {
    match s {
        Shape::Leaf => Term::var(labels.next().expect("enough labels")),
        Shape::Node(l, r) => {
            let l = fill(l, labels);
            let r = fill(r, labels);
            Term::mul(l, r)
        }
    }
}

/// Restricted growth strings of length `len`: each set partition of the
/// leaves once, numbered by first occurrence.
fn growth_strings(len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn go(len: usize, max: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for v in 0..=max {
            current.push(v);
            go(len, max.max(v + 1), current, out);
            current.pop();
        }
    }
    go(len, 0, &mut current, &mut out);
    out
}

/// Every pair of shapes with `ops` applications in total, with variable
/// labels in first-occurrence order. Includes trivial equations and both
/// orientations.
pub(crate) fn raw_equations(ops: usize) -> Vec<Equation> {
    let mut out = Vec::new();
    for left_ops in 0..=ops {
        for l in shapes(left_ops) {
            for r in shapes(ops - left_ops) {
                for labels in growth_strings(leaves(&l) + leaves(&r)) {
                    let mut it = labels.into_iter();
                    let lhs = fill(&l, &mut it);
                    let rhs = fill(&r, &mut it);
                    out.push(Equation::new(lhs, rhs));
                }
            }
        }
    }
    out
}

/// Equations identical on both sides are dropped, apart from `x = x`.
fn admitted(e: &MagmaEquation) -> bool {
    !e.equation().is_trivial() || e.operation_count() == 0
}

/// All canonical equations in increasing order.
pub fn enumerate_equations() -> Vec<MagmaEquation> {
    let mut out = Vec::new();
    for ops in 0..=MAX_OPERATIONS {
        let mut level: Vec<MagmaEquation> = raw_equations(ops)
            .iter()
            .map(|e| MagmaEquation::canonicalize(e).expect("magma equation within bound"))
            .filter(admitted)
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        level.sort();
        out.extend(level);
    }
    out
}

/// Ordered pairs of distinct equations.
pub fn implication_count(n: usize) -> u64 {
    let n = n as u64;
    n * n - n
}

/// Looks up a 1-based index.
pub fn equation_at(equations: &[MagmaEquation], index: usize) -> Result<&MagmaEquation, EtpError> {
    index
        .checked_sub(1)
        .and_then(|i| equations.get(i))
        .ok_or(EtpError::IndexOutOfRange {
            index,
            len: equations.len(),
        })
}

/// Premise as the axiom; conclusion with its variables replaced by
/// `a, b, c, ...` in first-occurrence order as the disequation.
pub fn implication_problem(premise: &MagmaEquation, conclusion: &MagmaEquation) -> Problem {
    let vars = conclusion.equation().vars();
    let skolem: HashMap<Var, Term> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, Term::app(Symbol::constant(SKOLEM_NAMES[i]), vec![])))
        .collect();
    let ground = |t: &Term| ground_with(t, &skolem);
    let goal = Equation::new(ground(conclusion.lhs()), ground(conclusion.rhs()));
    Problem::new(vec![premise.equation().clone()], vec![goal]).expect("magma signature is consistent")
}

fn ground_with(t: &Term, skolem: &HashMap<Var, Term>) -> Term {
    match t {
        Term::Var(v) => skolem[v].clone(),
        Term::App(app) => Term::app(
            app.symbol().clone(),
            app.args().iter().map(|a| ground_with(a, skolem)).collect(),
        ),
    }
}

/// One equation per line; the line number is the 1-based index.
pub fn write_equation_list(equations: &[MagmaEquation]) -> String {
    let mut out = String::new();
    for e in equations {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

/// Parses the infix syntax produced by `Display`, e.g. `x = y*((x*y)*y)`.
/// A chain `s*t*u` associates to the left.
pub fn parse_magma_equation(text: &str) -> Result<MagmaEquation, EtpError> {
    let err = |reason: &str| EtpError::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let (lhs, rhs) = text.split_once('=').ok_or_else(|| err("missing `=`"))?;
    let side = |s: &str| -> Result<Term, EtpError> {
        let tokens: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_product(&tokens, &mut pos).map_err(|r| err(&r))?;
        if pos != tokens.len() {
            return Err(err("trailing input"));
        }
        Ok(t)
    };
    MagmaEquation::canonicalize(&Equation::new(side(lhs)?, side(rhs)?))
}

fn parse_product(tokens: &[char], pos: &mut usize) -> Result<Term, String> {
    let mut t = parse_factor(tokens, pos)?;
    while tokens.get(*pos) == Some(&'*') {
        *pos += 1;
        let r = parse_factor(tokens, pos)?;
        t = Term::mul(t, r);
    }
    Ok(t)
}

fn parse_factor(tokens: &[char], pos: &mut usize) -> Result<Term, String> {
    match tokens.get(*pos) {
        Some('(') => {
            *pos += 1;
            let t = parse_product(tokens, pos)?;
            if tokens.get(*pos) != Some(&')') {
                return Err("expected `)`".into());
            }
            *pos += 1;
            Ok(t)
        }
        Some(c) => {
            let index = ["x", "y", "z", "w", "u", "v"]
                .iter()
                .position(|n| n.starts_with(*c))
                .ok_or_else(|| format!("unknown variable `{c}`"))?;
            *pos += 1;
            Ok(Term::var(index as u32))
        }
        None => Err("unexpected end of input".into()),
    }
}

/// Internal index to an external equation number, read from two-column
/// text. Blank lines and lines starting with `#` are skipped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IndexMapping {
    to_external: BTreeMap<usize, u64>,
    to_internal: BTreeMap<u64, usize>,
}

impl IndexMapping {
    pub fn parse(text: &str) -> Result<IndexMapping, EtpError> {
        let mut m = IndexMapping::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: &str| EtpError::Mapping {
                line: i + 1,
                reason: reason.to_string(),
            };
            let cols: Vec<&str> = line.split_whitespace().collect();
            let [internal, external] = cols[..] else {
                return Err(bad("expected two columns"));
            };
            let internal: usize = internal.parse().map_err(|_| bad("internal index is not a number"))?;
            let external: u64 = external.parse().map_err(|_| bad("external number is not a number"))?;
            if m.to_external.insert(internal, external).is_some() {
                return Err(bad("internal index repeated"));
            }
            if m.to_internal.insert(external, internal).is_some() {
                return Err(bad("external number repeated"));
            }
        }
        Ok(m)
    }

    pub fn external(&self, internal: usize) -> Option<u64> {
        self.to_external.get(&internal).copied()
    }

    pub fn internal(&self, external: u64) -> Option<usize> {
        self.to_internal.get(&external).copied()
    }

    pub fn len(&self) -> usize {
        self.to_external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_external.is_empty()
    }
}
