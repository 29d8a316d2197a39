//! Ordered rewriting with a set of equations, normalization, critical
//! pairs and the desk checks built on them (pre-orderedness, ground
//! confluence).
//!
//! In [`Mode::Ordered`] an equation `l = r` may be used in either
//! direction, but a step `σ(l) → σ(r)` is only taken when `σ(l) ≻ σ(r)`
//! under the configured ordering. Directions that are decided once and for
//! all by comparing `l` and `r` skip the per-instance check. Variables of
//! the right side that the match leaves unbound are set to the smallest
//! constant. In [`Mode::Oriented`] every equation is a rule used left to
//! right without any check.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::equation::{Equation, Rule};
use crate::ordering::{
    find_orientation, is_reduction_orientation, smallest_constant, Comparison, OrderingConfig, OrderingError,
    OrderingKind, DEFAULT_SEARCH_BUDGET,
};
use crate::term::{match_into, unify, Position, Signature, Substitution, Symbol, Term, TermError, Var};

pub const DEFAULT_STEP_CAP: usize = 100_000;

/// Name tried for the constant added to a signature that has none.
pub const FRESH_CONSTANT: &str = "c";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("term `{0}` is not ground")]
    NonGround(Term),
    #[error("symbol `{0}` is not in the signature")]
    UnknownSymbol(String),
    #[error("normalization of `{start}` exceeded {cap} steps")]
    StepCap { cap: usize, start: Term },
    #[error(transparent)]
    Ordering(#[from] OrderingError),
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Ordered,
    Oriented,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    #[serde(rename = "->")]
    LeftToRight,
    #[serde(rename = "<-")]
    RightToLeft,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::LeftToRight => "->",
            Direction::RightToLeft => "<-",
        })
    }
}

/// Which redex is contracted first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    InnermostLeftmost,
    OutermostLeftmost,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub position: Position,
    /// Index into [`RewriteSystem::equations`].
    pub equation: usize,
    pub direction: Direction,
    pub substitution: Substitution,
    pub before: Term,
    pub after: Term,
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | {} | {} | {} -> {}",
            self.position, self.equation, self.direction, self.before, self.after
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizationTrace {
    pub start: Term,
    pub steps: Vec<RewriteStep>,
    pub result: Term,
}

impl fmt::Display for NormalizationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        write!(f, "{}", self.result)
    }
}

/// One usable direction of an equation.
#[derive(Clone, Debug)]
struct Directed {
    equation: usize,
    direction: Direction,
    lhs: Term,
    rhs: Term,
    /// Right-side variables not bound by matching the left side.
    extra: Vec<Var>,
    /// Whether each instance must be compared before use.
    checked: bool,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    equations: Vec<Equation>,
    ordering: OrderingConfig,
    mode: Mode,
    signature: Signature,
    fresh: Option<Symbol>,
    filler: Term,
    directed: Vec<Directed>,
    by_head: HashMap<Symbol, Vec<usize>>,
    var_headed: Vec<usize>,
    step_cap: usize,
}

impl RewriteSystem {
    /// Builds a system over `signature` extended with the symbols of
    /// `equations`. If the result has no constant, a fresh one is added and
    /// ranked least.
    pub fn new(
        signature: &Signature,
        equations: Vec<Equation>,
        ordering: OrderingConfig,
        mode: Mode,
    ) -> Result<RewriteSystem, RewriteError> {
        let mut signature = signature.clone();
        for e in &equations {
            signature.add_term(&e.lhs)?;
            signature.add_term(&e.rhs)?;
        }
        let mut ordering = ordering;
        let mut fresh = None;
        if signature.constants().next().is_none() {
            let c = signature.fresh_constant(FRESH_CONSTANT);
            signature.add(c.clone())?;
            ordering = ordering.with_bottom_symbol(&c);
            fresh = Some(c);
        }
        ordering.validate(&signature)?;
        let filler = smallest_constant(&signature, &ordering)?;

        let mut directed = Vec::new();
        for (i, e) in equations.iter().enumerate() {
            let dirs: &[(Direction, bool)] = match mode {
                Mode::Oriented => &[(Direction::LeftToRight, false)],
                Mode::Ordered => match ordering.compare_unchecked(&e.lhs, &e.rhs) {
                    Comparison::Greater => &[(Direction::LeftToRight, false)],
                    Comparison::Less => &[(Direction::RightToLeft, false)],
                    Comparison::Equal => &[],
                    Comparison::Incomparable => &[(Direction::LeftToRight, true), (Direction::RightToLeft, true)],
                },
            };
            for &(direction, checked) in dirs {
                let (lhs, rhs) = match direction {
                    Direction::LeftToRight => (e.lhs.clone(), e.rhs.clone()),
                    Direction::RightToLeft => (e.rhs.clone(), e.lhs.clone()),
                };
                let extra = rhs.vars().into_iter().filter(|v| !lhs.contains_var(*v)).collect();
                directed.push(Directed {
                    equation: i,
                    direction,
                    lhs,
                    rhs,
                    extra,
                    checked,
                });
            }
        }

        let var_headed: Vec<usize> = (0..directed.len()).filter(|&k| directed[k].lhs.is_var()).collect();
        let mut by_head: HashMap<Symbol, Vec<usize>> = HashMap::new();
        for (k, d) in directed.iter().enumerate() {
            if let Some(f) = d.lhs.head() {
                by_head.entry(f.clone()).or_default().push(k);
            }
        }
        for list in by_head.values_mut() {
            list.extend(&var_headed);
            list.sort_unstable();
        }

        Ok(RewriteSystem {
            equations,
            ordering,
            mode,
            signature,
            fresh,
            filler,
            directed,
            by_head,
            var_headed,
            step_cap: DEFAULT_STEP_CAP,
        })
    }

    pub fn ordered(
        signature: &Signature,
        equations: Vec<Equation>,
        ordering: OrderingConfig,
    ) -> Result<RewriteSystem, RewriteError> {
        RewriteSystem::new(signature, equations, ordering, Mode::Ordered)
    }

    pub fn oriented(
        signature: &Signature,
        rules: Vec<Rule>,
        ordering: OrderingConfig,
    ) -> Result<RewriteSystem, RewriteError> {
        let equations = rules.iter().map(Rule::as_equation).collect();
        RewriteSystem::new(signature, equations, ordering, Mode::Oriented)
    }

    pub fn with_step_cap(mut self, cap: usize) -> RewriteSystem {
        self.step_cap = cap;
        self
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn ordering(&self) -> &OrderingConfig {
        &self.ordering
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// The constant added because the signature had none.
    pub fn fresh_constant(&self) -> Option<&Symbol> {
        self.fresh.as_ref()
    }

    /// The smallest constant, used for unbound right-side variables.
    pub fn smallest_constant(&self) -> &Term {
        &self.filler
    }

    pub fn step_cap(&self) -> usize {
        self.step_cap
    }

    fn check_query(&self, t: &Term) -> Result<(), RewriteError> {
        if !t.is_ground() {
            return Err(RewriteError::NonGround(t.clone()));
        }
        self.check_symbols(t)
    }

    fn check_symbols(&self, t: &Term) -> Result<(), RewriteError> {
        for (_, sub) in t.subterm_positions() {
            if let Some(f) = sub.head() {
                if !self.signature.contains(f) {
                    return Err(RewriteError::UnknownSymbol(f.name().to_string()));
                }
            }
        }
        Ok(())
    }

    fn candidates(&self, t: &Term) -> &[usize] {
        t.head()
            .and_then(|f| self.by_head.get(f))
            .map_or(&self.var_headed[..], Vec::as_slice)
    }

    /// First directed equation that rewrites `t` at the root.
    fn root_step(&self, t: &Term) -> Option<(usize, Substitution, Term)> {
        for &k in self.candidates(t) {
            let d = &self.directed[k];
            let mut sigma = Substitution::new();
            if !match_into(&d.lhs, t, &mut sigma) {
                continue;
            }
            for v in &d.extra {
                sigma.insert(*v, self.filler.clone());
            }
            let after = sigma.apply(&d.rhs);
            if d.checked && !self.ordering.greater_unchecked(t, &after) {
                if !d.extra.is_empty() {
                    log::debug!(
                        "skipped {} at `{t}`: instance with smallest constant is not decreasing",
                        self.equations[d.equation]
                    );
                }
                continue;
            }
            return Some((k, sigma, after));
        }
        None
    }

    fn step_unchecked(&self, t: &Term, strategy: Strategy) -> Option<RewriteStep> {
        let positions: Vec<Position> = match strategy {
            Strategy::InnermostLeftmost => t.positions_innermost(),
            Strategy::OutermostLeftmost => t.subterm_positions().into_iter().map(|(p, _)| p).collect(),
        };
        for p in positions {
            let sub = t.subterm_at(&p).expect("position of t");
            if sub.is_var() {
                continue;
            }
            if let Some((k, substitution, reduct)) = self.root_step(sub) {
                let d = &self.directed[k];
                let after = t.replace_at(&p, reduct).expect("position of t");
                return Some(RewriteStep {
                    position: p,
                    equation: d.equation,
                    direction: d.direction,
                    substitution,
                    before: t.clone(),
                    after,
                });
            }
        }
        None
    }

    /// The first innermost-leftmost step from ground `t`, or `None` if `t`
    /// is a normal form.
    pub fn rewrite_step(&self, t: &Term) -> Result<Option<RewriteStep>, RewriteError> {
        self.rewrite_step_with(t, Strategy::InnermostLeftmost)
    }

    pub fn rewrite_step_with(&self, t: &Term, strategy: Strategy) -> Result<Option<RewriteStep>, RewriteError> {
        self.check_query(t)?;
        Ok(self.step_unchecked(t, strategy))
    }

    pub fn normalize(&self, t: &Term) -> Result<NormalizationTrace, RewriteError> {
        self.normalize_with(t, Strategy::InnermostLeftmost)
    }

    /// Iterates single steps to a normal form, recording each one.
    pub fn normalize_with(&self, t: &Term, strategy: Strategy) -> Result<NormalizationTrace, RewriteError> {
        self.check_query(t)?;
        if strategy == Strategy::InnermostLeftmost {
            return self.normalize_open(t);
        }
        let mut steps = Vec::new();
        let mut cur = t.clone();
        while let Some(step) = self.step_unchecked(&cur, strategy) {
            if steps.len() >= self.step_cap {
                return Err(RewriteError::StepCap {
                    cap: self.step_cap,
                    start: t.clone(),
                });
            }
            cur = step.after.clone();
            steps.push(step);
        }
        Ok(NormalizationTrace {
            start: t.clone(),
            steps,
            result: cur,
        })
    }

    /// Traced innermost-leftmost normalization of a possibly open term.
    pub(crate) fn normalize_open(&self, t: &Term) -> Result<NormalizationTrace, RewriteError> {
        let mut steps = Vec::new();
        let mut cur = t.clone();
        while let Some(step) = self.step_unchecked(&cur, Strategy::InnermostLeftmost) {
            if steps.len() >= self.step_cap {
                return Err(RewriteError::StepCap {
                    cap: self.step_cap,
                    start: t.clone(),
                });
            }
            cur = step.after.clone();
            steps.push(step);
        }
        Ok(NormalizationTrace {
            start: t.clone(),
            steps,
            result: cur,
        })
    }

    /// Innermost-leftmost normal form of ground `t`, without a trace.
    pub fn normal_form(&self, t: &Term) -> Result<Term, RewriteError> {
        self.check_query(t)?;
        self.normalizer().normal_form(t)
    }

    pub fn equal_in_model(&self, s: &Term, t: &Term) -> Result<bool, RewriteError> {
        self.check_query(s)?;
        self.check_query(t)?;
        let mut n = self.normalizer();
        Ok(n.normal_form(s)? == n.normal_form(t)?)
    }

    /// A caching normalizer. It accepts open terms, treating their
    /// variables as fixed constants.
    pub fn normalizer(&self) -> Normalizer<'_> {
        Normalizer {
            system: self,
            cache: HashMap::new(),
        }
    }

    /// The usable directions as rules, in candidate order.
    fn directed_rules(&self) -> impl Iterator<Item = (usize, &Directed)> {
        self.directed.iter().enumerate()
    }

    /// Overlaps of every usable direction into the non-variable positions of
    /// every usable direction. In ordered mode an overlap is dropped when
    /// the unified instance of either direction is not decreasing.
    pub fn critical_pairs(&self) -> Vec<CriticalPair> {
        self.critical_pairs_where(|_, _| true)
    }

    /// Critical pairs whose outer and inner equation indices satisfy `keep`.
    pub(crate) fn critical_pairs_where(&self, keep: impl Fn(usize, usize) -> bool) -> Vec<CriticalPair> {
        let mut out = Vec::new();
        for (ko, outer) in self.directed_rules() {
            let offset = outer.lhs.max_var().max(outer.rhs.max_var()).map_or(0, |m| m + 1);
            for (ki, inner) in self.directed_rules() {
                if !keep(outer.equation, inner.equation) {
                    continue;
                }
                let inner_lhs = inner.lhs.shift_vars(offset);
                let inner_rhs = inner.rhs.shift_vars(offset);
                for (p, sub) in outer.lhs.subterm_positions() {
                    if sub.is_var() || (p.is_root() && ko == ki) {
                        continue;
                    }
                    let Some(sigma) = unify(sub, &inner_lhs) else {
                        continue;
                    };
                    let peak = sigma.apply(&outer.lhs);
                    let outer_reduct = sigma.apply(&outer.rhs);
                    let inner_redex = sigma.apply(&inner_lhs);
                    let inner_reduct = sigma.apply(&inner_rhs);
                    if self.mode == Mode::Ordered
                        && ((outer.checked && self.refuted(&peak, &outer_reduct))
                            || (inner.checked && self.refuted(&inner_redex, &inner_reduct)))
                    {
                        continue;
                    }
                    let left = peak.replace_at(&p, inner_reduct).expect("overlap position");
                    out.push(CriticalPair {
                        trivial: left == outer_reduct,
                        peak,
                        left,
                        right: outer_reduct,
                        position: p,
                        unifier: sigma,
                        outer: (outer.equation, outer.direction),
                        inner: (inner.equation, inner.direction),
                    });
                }
            }
        }
        out
    }

    fn refuted(&self, l: &Term, r: &Term) -> bool {
        matches!(
            self.ordering.compare_unchecked(l, r),
            Comparison::Less | Comparison::Equal
        )
    }

    /// Reports, for each equation as written, whether its left side is
    /// strictly greater than its right side.
    pub fn check_preordered(&self) -> PreorderReport {
        let oriented: Vec<bool> = self
            .equations
            .iter()
            .map(|e| self.ordering.compare_unchecked(&e.lhs, &e.rhs) == Comparison::Greater)
            .collect();
        let count = oriented.iter().filter(|&&b| b).count();
        PreorderReport {
            unoriented: oriented.len() - count,
            oriented_count: count,
            oriented,
        }
    }

    /// Knuth-Bendix criterion: a terminating rule set whose critical pairs
    /// all join is confluent.
    ///
    /// In ordered mode every equation must be comparable under the
    /// configured ordering, so that ordered rewriting coincides with the
    /// oriented rule set. In oriented mode termination comes from the
    /// configured ordering or, failing that, from a precedence search.
    pub fn check_ground_confluence(&self) -> ConfluenceReport {
        let mut rules = Vec::new();
        let mut unorientable = Vec::new();
        for (i, e) in self.equations.iter().enumerate() {
            match self.mode {
                Mode::Oriented => rules.push(e.as_rule()),
                Mode::Ordered => match self.ordering.compare_unchecked(&e.lhs, &e.rhs) {
                    Comparison::Greater => rules.push(e.as_rule()),
                    Comparison::Less => rules.push(e.swapped().as_rule()),
                    Comparison::Equal => {}
                    Comparison::Incomparable => unorientable.push(i),
                },
            }
        }
        let inconclusive = |reason: String| ConfluenceReport {
            verdict: ConfluenceVerdict::Inconclusive,
            termination: None,
            rules: rules.clone(),
            pairs: Vec::new(),
            witness: None,
            reason: Some(reason),
        };
        if !unorientable.is_empty() {
            let list: Vec<String> = unorientable.iter().map(|i| self.equations[*i].to_string()).collect();
            return inconclusive(format!("not orientable under {}: {}", self.ordering, list.join("; ")));
        }
        let termination = if is_reduction_orientation(&self.ordering, &rules) {
            Some(self.ordering.clone())
        } else {
            [OrderingKind::Lpo, OrderingKind::Kbo]
                .into_iter()
                .find_map(|kind| find_orientation(&self.signature, &rules, kind, DEFAULT_SEARCH_BUDGET).into_config())
        };
        let Some(termination) = termination else {
            return inconclusive("termination not established: no LPO or KBO orients the rules".into());
        };
        let trs = match RewriteSystem::oriented(&self.signature, rules.clone(), termination.clone()) {
            Ok(trs) => trs.with_step_cap(self.step_cap),
            Err(e) => return inconclusive(e.to_string()),
        };
        let mut n = trs.normalizer();
        let mut pairs = Vec::new();
        let mut witness = None;
        for cp in trs.critical_pairs() {
            let (left_nf, right_nf) = match (n.normal_form(&cp.left), n.normal_form(&cp.right)) {
                (Ok(l), Ok(r)) => (l, r),
                (Err(e), _) | (_, Err(e)) => return inconclusive(e.to_string()),
            };
            let joinable = left_nf == right_nf;
            if !joinable && witness.is_none() {
                witness = Some((left_nf.clone(), right_nf.clone()));
            }
            pairs.push(PairVerdict {
                pair: cp,
                left_nf,
                right_nf,
                joinable,
            });
        }
        ConfluenceReport {
            verdict: if witness.is_none() {
                ConfluenceVerdict::Certified
            } else {
                ConfluenceVerdict::NotConfluent
            },
            termination: Some(termination),
            rules,
            pairs,
            witness,
            reason: None,
        }
    }
}

/// Normalizes terms with a memo table of results.
pub struct Normalizer<'a> {
    system: &'a RewriteSystem,
    cache: HashMap<Term, Term>,
}

const CACHE_LIMIT: usize = 1 << 20;

impl Normalizer<'_> {
    pub fn normal_form(&mut self, t: &Term) -> Result<Term, RewriteError> {
        let mut steps = 0;
        self.nf(t, t, &mut steps)
    }

    fn nf(&mut self, t: &Term, start: &Term, steps: &mut usize) -> Result<Term, RewriteError> {
        if t.is_var() {
            return Ok(t.clone());
        }
        if let Some(r) = self.cache.get(t) {
            return Ok(r.clone());
        }
        let mut cur = t.clone();
        // arguments first, left to right, then the root
        while let Term::App(app) = &cur {
            let mut args = Vec::with_capacity(app.args().len());
            let mut changed = false;
            for a in app.args() {
                let na = self.nf(a, start, steps)?;
                changed |= &na != a;
                args.push(na);
            }
            if changed {
                cur = Term::app(app.symbol().clone(), args);
            }
            match self.system.root_step(&cur) {
                None => break,
                Some((_, _, after)) => {
                    *steps += 1;
                    if *steps > self.system.step_cap {
                        return Err(RewriteError::StepCap {
                            cap: self.system.step_cap,
                            start: start.clone(),
                        });
                    }
                    if let Some(r) = self.cache.get(&after) {
                        cur = r.clone();
                        break;
                    }
                    cur = after;
                }
            }
        }
        if self.cache.len() > CACHE_LIMIT {
            self.cache.clear();
        }
        if &cur != t {
            self.cache.insert(cur.clone(), cur.clone());
        }
        self.cache.insert(t.clone(), cur.clone());
        Ok(cur)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPair {
    pub peak: Term,
    /// Reduct by the inner direction at `position`.
    pub left: Term,
    /// Reduct by the outer direction at the root.
    pub right: Term,
    pub position: Position,
    pub unifier: Substitution,
    pub outer: (usize, Direction),
    pub inner: (usize, Direction),
    pub trivial: bool,
}

impl fmt::Display for CriticalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} <- {} -> {} (outer {}{}, inner {}{} at {})",
            self.left, self.peak, self.right, self.outer.0, self.outer.1, self.inner.0, self.inner.1, self.position
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreorderReport {
    pub oriented: Vec<bool>,
    pub oriented_count: usize,
    pub unoriented: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfluenceVerdict {
    #[serde(rename = "confluent_certified")]
    Certified,
    NotConfluent,
    Inconclusive,
}

impl fmt::Display for ConfluenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfluenceVerdict::Certified => "confluent_certified",
            ConfluenceVerdict::NotConfluent => "not_confluent",
            ConfluenceVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub pair: CriticalPair,
    pub left_nf: Term,
    pub right_nf: Term,
    pub joinable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub verdict: ConfluenceVerdict,
    /// The ordering proving termination of `rules`, when one was found.
    pub termination: Option<OrderingConfig>,
    pub rules: Vec<Rule>,
    pub pairs: Vec<PairVerdict>,
    /// Normal forms of the first non-joinable pair.
    pub witness: Option<(Term, Term)>,
    pub reason: Option<String>,
}

impl ConfluenceReport {
    pub fn nontrivial_pairs(&self) -> usize {
        self.pairs.iter().filter(|p| !p.pair.trivial).count()
    }
}
