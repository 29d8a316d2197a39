//! Finite model search by backtracking over operation-table cells.
//!
//! Cells are ordered by symbol (declaration order) and then by argument
//! tuple, lexicographically; values are tried in ascending order. The first
//! constant is fixed to element 0. After every assignment each ground
//! instance of each axiom is evaluated as far as the assigned cells allow.
//! An instance whose sides are both known and differ is a conflict; one
//! whose side is known while the other only lacks its outermost cell
//! forces that cell.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::equation::Equation;
use crate::term::{Term, Var};
use crate::tptp::Problem;

pub const DEFAULT_CEILING: usize = 4;
/// Largest accepted ceiling; sizes above the default are slow.
pub const MAX_CEILING: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiniteError {
    #[error("domain size must be positive")]
    ZeroSize,
    #[error("domain size {size} is above the ceiling {ceiling}")]
    AboveCeiling { size: usize, ceiling: usize },
    #[error("ceiling {0} is above the maximum {MAX_CEILING}")]
    CeilingTooHigh(usize),
    #[error("goal `{0}` is not ground")]
    NonGroundGoal(Equation),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperationTable {
    pub symbol: String,
    pub arity: usize,
    /// Row-major over argument tuples; a single entry for a constant.
    pub values: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteInterpretation {
    pub size: usize,
    pub tables: Vec<OperationTable>,
}

impl FiniteInterpretation {
    fn table(&self, name: &str) -> Option<&OperationTable> {
        self.tables.iter().find(|t| t.symbol == name)
    }

    /// Value of `t` with variables read from `env`; `None` on unknown
    /// symbols or unbound variables.
    pub fn eval(&self, t: &Term, env: &[(Var, u32)]) -> Option<u32> {
        match t {
            Term::Var(v) => env.iter().find(|(w, _)| w == v).map(|(_, x)| *x),
            Term::App(app) => {
                let table = self.table(app.symbol().name())?;
                let mut index = 0usize;
                for a in app.args() {
                    index = index * self.size + self.eval(a, env)? as usize;
                }
                table.values.get(index).copied()
            }
        }
    }

    /// Every axiom under every assignment, and every disequation.
    /// Independent of the search: plain evaluation over all assignments.
    pub fn satisfies(&self, p: &Problem) -> bool {
        let in_range = self.tables.iter().all(|t| {
            t.values.len() == self.size.pow(t.arity as u32) && t.values.iter().all(|&v| (v as usize) < self.size)
        });
        if !in_range {
            return false;
        }
        let axioms_hold = p.axioms.iter().all(|a| {
            let vars = a.vars();
            assignments(self.size, vars.len()).all(|vals| {
                let env: Vec<(Var, u32)> = vars.iter().copied().zip(vals).collect();
                matches!((self.eval(&a.lhs, &env), self.eval(&a.rhs, &env)), (Some(l), Some(r)) if l == r)
            })
        });
        axioms_hold
            && p.disequations
                .iter()
                .all(|d| matches!((self.eval(&d.lhs, &[]), self.eval(&d.rhs, &[])), (Some(l), Some(r)) if l != r))
    }
}

/// All tuples in `0..size` of length `len`, lexicographically.
fn assignments(size: usize, len: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = size.pow(len as u32);
    (0..total).map(move |mut k| {
        let mut out = vec![0u32; len];
        for slot in out.iter_mut().rev() {
            *slot = (k % size) as u32;
            k /= size;
        }
        out
    })
}

impl fmt::Display for FiniteInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain size {}", self.size)?;
        for t in &self.tables {
            match t.arity {
                0 => writeln!(f, "{} = {}", t.symbol, t.values[0])?,
                2 => {
                    writeln!(f, "{}:", t.symbol)?;
                    for row in t.values.chunks(self.size) {
                        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
                        writeln!(f, "  {}", cells.join(" "))?;
                    }
                }
                _ => {
                    writeln!(f, "{}/{}:", t.symbol, t.arity)?;
                    for (args, v) in assignments(self.size, t.arity).zip(&t.values) {
                        let args: Vec<String> = args.iter().map(u32::to_string).collect();
                        writeln!(f, "  ({}) = {v}", args.join(","))?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Term with symbols and variables replaced by indices.
enum Compiled {
    Var(usize),
    App { symbol: usize, args: Vec<Compiled> },
}

enum Partial {
    Known(u32),
    /// Arguments known, outermost cell unassigned.
    Root(usize),
    Blocked,
}

struct Constraint<'a> {
    lhs: &'a Compiled,
    rhs: &'a Compiled,
    env: Vec<u32>,
    equal: bool,
}

struct Search<'a> {
    size: usize,
    offsets: Vec<usize>,
    cells: Vec<Option<u32>>,
    constraints: Vec<Constraint<'a>>,
    trail: Vec<usize>,
    /// cell fixed to 0 by symmetry breaking
    pinned: Option<usize>,
}

impl Search<'_> {
    fn eval(&self, t: &Compiled, env: &[u32]) -> Partial {
        match t {
            Compiled::Var(i) => Partial::Known(env[*i]),
            Compiled::App { symbol, args } => {
                let mut index = 0usize;
                for a in args {
                    match self.eval(a, env) {
                        Partial::Known(v) => index = index * self.size + v as usize,
                        _ => return Partial::Blocked,
                    }
                }
                let cell = self.offsets[*symbol] + index;
                match self.cells[cell] {
                    Some(v) => Partial::Known(v),
                    None => Partial::Root(cell),
                }
            }
        }
    }

    fn assign(&mut self, cell: usize, v: u32) {
        self.cells[cell] = Some(v);
        self.trail.push(cell);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let c = self.trail.pop().expect("trail");
            self.cells[c] = None;
        }
    }

    /// Forces cells until nothing changes. False on a conflict.
    fn propagate(&mut self) -> bool {
        loop {
            let mut forced = None;
            for c in &self.constraints {
                match (self.eval(c.lhs, &c.env), self.eval(c.rhs, &c.env)) {
                    (Partial::Known(a), Partial::Known(b)) => {
                        if (a == b) != c.equal {
                            return false;
                        }
                    }
                    (Partial::Known(a), Partial::Root(cell)) | (Partial::Root(cell), Partial::Known(a)) if c.equal => {
                        forced = Some((cell, a));
                        break;
                    }
                    _ => {}
                }
            }
            match forced {
                Some((cell, v)) => {
                    if self.pinned == Some(cell) && v != 0 {
                        return false;
                    }
                    self.assign(cell, v);
                }
                None => return true,
            }
        }
    }

    fn solve(&mut self) -> bool {
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo_to(mark);
            return false;
        }
        let Some(cell) = self.cells.iter().position(Option::is_none) else {
            return true;
        };
        let values = if self.pinned == Some(cell) { 1 } else { self.size as u32 };
        for v in 0..values {
            let inner = self.trail.len();
            self.assign(cell, v);
            if self.solve() {
                return true;
            }
            self.undo_to(inner);
        }
        self.undo_to(mark);
        false
    }
}

fn compile(t: &Term, symbols: &[String], vars: &[Var]) -> Compiled {
    match t {
        Term::Var(v) => Compiled::Var(vars.iter().position(|w| w == v).expect("collected var")),
        Term::App(app) => Compiled::App {
            symbol: symbols
                .iter()
                .position(|s| s == app.symbol().name())
                .expect("symbol in signature"),
            args: app.args().iter().map(|a| compile(a, symbols, vars)).collect(),
        },
    }
}

fn check_bounds(size: usize, ceiling: usize) -> Result<(), FiniteError> {
    if ceiling > MAX_CEILING {
        return Err(FiniteError::CeilingTooHigh(ceiling));
    }
    if size == 0 {
        return Err(FiniteError::ZeroSize);
    }
    if size > ceiling {
        return Err(FiniteError::AboveCeiling { size, ceiling });
    }
    Ok(())
}

/// The first model of `p` with domain `0..size` in the search order, if
/// any exists.
pub fn search_finite_model(
    p: &Problem,
    size: usize,
    ceiling: usize,
) -> Result<Option<FiniteInterpretation>, FiniteError> {
    check_bounds(size, ceiling)?;
    if let Some(d) = p.disequations.iter().find(|d| !d.is_ground()) {
        return Err(FiniteError::NonGroundGoal(d.clone()));
    }
    let symbols = p.signature.symbols();
    let names: Vec<String> = symbols.iter().map(|s| s.name().to_string()).collect();
    let mut offsets = Vec::with_capacity(symbols.len());
    let mut total = 0;
    for s in symbols {
        offsets.push(total);
        total += size.pow(s.arity() as u32);
    }

    let compiled: Vec<(Vec<Var>, Compiled, Compiled, bool)> = p
        .axioms
        .iter()
        .map(|a| (a, true))
        .chain(p.disequations.iter().map(|d| (d, false)))
        .map(|(e, equal)| {
            let vars = e.vars();
            let lhs = compile(&e.lhs, &names, &vars);
            let rhs = compile(&e.rhs, &names, &vars);
            (vars, lhs, rhs, equal)
        })
        .collect();
    let mut constraints = Vec::new();
    for (vars, lhs, rhs, equal) in &compiled {
        for env in assignments(size, vars.len()) {
            constraints.push(Constraint {
                lhs,
                rhs,
                env,
                equal: *equal,
            });
        }
    }

    let pinned = symbols.iter().position(|s| s.is_constant()).map(|i| offsets[i]);
    let mut search = Search {
        size,
        offsets: offsets.clone(),
        cells: vec![None; total],
        constraints,
        trail: Vec::new(),
        pinned,
    };
    if !search.solve() {
        return Ok(None);
    }
    let tables = symbols
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let n = size.pow(s.arity() as u32);
            OperationTable {
                symbol: s.name().to_string(),
                arity: s.arity(),
                values: search.cells[offsets[i]..offsets[i] + n]
                    .iter()
                    .map(|v| v.expect("complete assignment"))
                    .collect(),
            }
        })
        .collect();
    let model = FiniteInterpretation { size, tables };
    debug_assert!(model.satisfies(p));
    Ok(Some(model))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeResult {
    pub size: usize,
    pub model: Option<FiniteInterpretation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteReport {
    pub max_size: usize,
    pub sizes: Vec<SizeResult>,
}

impl FiniteReport {
    pub fn first_model(&self) -> Option<&FiniteInterpretation> {
        self.sizes.iter().find_map(|s| s.model.as_ref())
    }

    /// One line for the whole run. Absence is only claimed up to the size
    /// searched.
    pub fn summary(&self) -> String {
        match self.first_model() {
            Some(m) => format!("model found at size {}", m.size),
            None => format!("no model up to size {}", self.max_size),
        }
    }
}

/// Searches sizes `1..=max_size`, stopping at the first model.
pub fn no_finite_model_up_to(p: &Problem, max_size: usize, ceiling: usize) -> Result<FiniteReport, FiniteError> {
    check_bounds(max_size, ceiling)?;
    let mut sizes = Vec::new();
    for size in 1..=max_size {
        let model = search_finite_model(p, size, ceiling)?;
        let found = model.is_some();
        sizes.push(SizeResult { size, model });
        if found {
            break;
        }
    }
    Ok(FiniteReport { max_size, sizes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tptp::parse_problem;

    fn problem(text: &str) -> Problem {
        parse_problem(text).unwrap()
    }

    #[test]
    fn assoc_not_comm_left_projection() {
        let p = problem(include_str!("../fixtures/assoc_not_comm.p"));
        assert!(search_finite_model(&p, 1, 4).unwrap().is_none());
        let m = search_finite_model(&p, 2, 4).unwrap().unwrap();
        assert!(m.satisfies(&p));
        assert_eq!(m.table("*").unwrap().values, [0, 0, 1, 1]);
        assert_eq!(m.table("a").unwrap().values, [0]);
        assert_eq!(m.table("b").unwrap().values, [1]);
    }

    #[test]
    fn constant_operation_has_no_model() {
        let p = problem(include_str!("../fixtures/constant_operation.p"));
        let report = no_finite_model_up_to(&p, 3, 4).unwrap();
        assert!(report.first_model().is_none());
        assert_eq!(report.summary(), "no model up to size 3");
    }

    #[test]
    fn no_small_models_for_fixture_implications() {
        for text in [
            include_str!("../fixtures/eq118_not_274.p"),
            include_str!("../fixtures/eq477_not_1426.p"),
        ] {
            let report = no_finite_model_up_to(&problem(text), 3, 4).unwrap();
            assert_eq!(report.sizes.len(), 3);
            assert_eq!(report.summary(), "no model up to size 3");
        }
    }

    #[test]
    fn distinct_constants_need_two_elements() {
        let p = problem("cnf(g, negated_conjecture, a != b).");
        let report = no_finite_model_up_to(&p, 2, 4).unwrap();
        assert!(report.sizes[0].model.is_none());
        assert_eq!(report.first_model().unwrap().size, 2);
    }

    #[test]
    fn bounds_are_enforced() {
        let p = problem("cnf(g, negated_conjecture, a != b).");
        assert!(matches!(
            search_finite_model(&p, 5, 4),
            Err(FiniteError::AboveCeiling { .. })
        ));
        assert!(matches!(search_finite_model(&p, 0, 4), Err(FiniteError::ZeroSize)));
        assert!(matches!(
            search_finite_model(&p, 2, 7),
            Err(FiniteError::CeilingTooHigh(7))
        ));
    }

    #[test]
    fn matrix_display() {
        let p = problem(include_str!("../fixtures/assoc_not_comm.p"));
        let m = search_finite_model(&p, 2, 4).unwrap().unwrap();
        assert_eq!(m.to_string(), "domain size 2\n*:\n  0 0\n  1 1\na = 0\nb = 1\n");
    }
}
