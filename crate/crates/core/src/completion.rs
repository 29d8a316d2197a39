//! Unfailing completion with a given-clause loop.
//!
//! Passive equations are selected smallest first, except that every sixth
//! pick takes the oldest. The given equation is simplified by ordered
//! rewriting with the active set, dropped if trivial or a variant of an
//! active equation, and otherwise used to simplify the active set before
//! joining it. Critical pairs with the active set go to the passive queue.
//! After each activation the ground goals are normalized; if some goal's
//! sides meet, the problem is refuted.
//!
//! Every equation carries a proof: either an input axiom, or a chain of
//! single rewrite steps with earlier equations leading from its left side
//! to its right side. [`replay`] re-checks such chains by matching alone.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::equation::Equation;
use crate::model::{check_axiom, representatives};
use crate::ordering::OrderingConfig;
use crate::rewrite::{CriticalPair, Direction, RewriteError, RewriteStep, RewriteSystem};
use crate::term::{ground_terms_up_to, match_into, Position, Signature, Substitution, Term, Var};
use crate::tptp::{Problem, SaturationDump};

/// Picks by size before each pick by age.
const SIZE_PICKS_PER_AGE_PICK: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompletionError {
    #[error("goal `{0}` is not ground")]
    NonGroundGoal(Equation),
    #[error("the conjecture is a theorem: the disequation {0} was refuted, so no countermodel exists")]
    Refuted(Equation),
    #[error("completion ran out of resources ({0})")]
    ResourceOut(ResourceLimit),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Given-clause iterations.
    pub max_steps: usize,
    /// Active plus passive equations.
    pub max_equations: usize,
    /// Equations with a larger side are discarded, which forfeits a
    /// saturation verdict.
    pub max_term_size: usize,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_steps: 10_000,
            max_equations: 50_000,
            max_term_size: 40,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceLimit {
    Steps,
    Equations,
    TermSize,
}

impl fmt::Display for ResourceLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResourceLimit::Steps => "step limit",
            ResourceLimit::Equations => "equation limit",
            ResourceLimit::TermSize => "term size limit",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Statistics {
    pub steps: usize,
    pub generated: usize,
    pub simplified: usize,
    pub deleted: usize,
    pub back_simplified: usize,
    pub oversized: usize,
}

/// A rewrite step with a recorded equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofStep {
    pub position: Position,
    /// Record id of the equation used.
    pub equation: usize,
    pub direction: Direction,
    pub after: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Inference {
    Axiom { index: usize },
    CriticalPair { outer: usize, inner: usize },
    Simplification { from: usize },
}

impl fmt::Display for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inference::Axiom { index } => write!(f, "axiom {index}"),
            Inference::CriticalPair { outer, inner } => write!(f, "critical pair {outer} {inner}"),
            Inference::Simplification { from } => write!(f, "simplification of {from}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InferenceRecord {
    pub id: usize,
    pub equation: Equation,
    pub inference: Inference,
    /// Steps from `equation.lhs` to `equation.rhs`; empty for axioms.
    pub chain: Vec<ProofStep>,
}

fn write_chain(f: &mut fmt::Formatter<'_>, start: &Term, chain: &[ProofStep]) -> fmt::Result {
    let mut cur = start;
    for s in chain {
        writeln!(
            f,
            "  {} | {} | {} | {} -> {}",
            s.position, s.equation, s.direction, cur, s.after
        )?;
        cur = &s.after;
    }
    Ok(())
}

impl fmt::Display for InferenceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {} [{}]", self.id, self.equation, self.inference)?;
        write_chain(f, &self.equation.lhs, &self.chain)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    /// Index into the problem's disequations.
    pub goal: usize,
    pub disequation: Equation,
    /// Steps joining the two sides of the disequation.
    pub chain: Vec<ProofStep>,
    /// Every record the chain depends on, in id order.
    pub records: Vec<InferenceRecord>,
    pub statistics: Statistics,
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            write!(f, "{r}")?;
        }
        writeln!(f, "goal {}: {} refuted", self.goal, self.disequation)?;
        write_chain(f, &self.disequation.lhs, &self.chain)
    }
}

#[derive(Clone, Debug)]
pub struct Saturation {
    pub system: RewriteSystem,
    /// Records of the active equations, in the order of `system`.
    pub active: Vec<InferenceRecord>,
    pub records: Vec<InferenceRecord>,
    pub statistics: Statistics,
}

#[derive(Clone, Debug)]
pub enum CompletionOutcome {
    Refuted(Refutation),
    Saturated(Box<Saturation>),
    ResourceOut {
        limit: ResourceLimit,
        statistics: Statistics,
    },
}

/// The state of the given-clause loop.
struct CompletionState<'a> {
    signature: Signature,
    ordering: OrderingConfig,
    goals: &'a [Equation],
    limits: Limits,
    records: Vec<InferenceRecord>,
    active: Vec<usize>,
    active_keys: HashSet<Equation>,
    passive: Vec<usize>,
    system: RewriteSystem,
    picks: usize,
    stats: Statistics,
}

impl<'a> CompletionState<'a> {
    fn rebuild(&mut self) -> Result<(), RewriteError> {
        let eqs = self
            .active
            .iter()
            .map(|&id| self.records[id].equation.clone())
            .collect();
        self.system = RewriteSystem::ordered(&self.signature, eqs, self.ordering.clone())?;
        Ok(())
    }

    fn push_record(&mut self, equation: Equation, inference: Inference, chain: Vec<ProofStep>) -> usize {
        let id = self.records.len();
        self.records.push(InferenceRecord {
            id,
            equation,
            inference,
            chain,
        });
        id
    }

    fn select(&mut self) -> Option<usize> {
        if self.passive.is_empty() {
            return None;
        }
        self.picks += 1;
        let by_age = self.picks.is_multiple_of(SIZE_PICKS_PER_AGE_PICK + 1);
        let k = if by_age {
            // passive ids are increasing
            0
        } else {
            (0..self.passive.len())
                .min_by_key(|&k| (self.records[self.passive[k]].equation.size(), self.passive[k]))
                .expect("nonempty")
        };
        Some(self.passive.remove(k))
    }

    fn to_proof(&self, steps: &[RewriteStep]) -> Vec<ProofStep> {
        steps
            .iter()
            .map(|s| ProofStep {
                position: s.position.clone(),
                equation: self.active[s.equation],
                direction: s.direction,
                after: s.after.clone(),
            })
            .collect()
    }

    /// Rewrites both sides with the active set. Returns the record id of
    /// the simplified equation, which is `id` itself if nothing changed.
    fn simplify(&mut self, id: usize) -> Result<usize, RewriteError> {
        let eq = self.records[id].equation.clone();
        let left = self.system.normalize_open(&eq.lhs)?;
        let right = self.system.normalize_open(&eq.rhs)?;
        if left.steps.is_empty() && right.steps.is_empty() {
            return Ok(id);
        }
        self.stats.simplified += 1;
        // l' <- ... <- l, then the old equation, then r -> ... -> r'
        let mut chain = reversed(&eq.lhs, &self.to_proof(&left.steps));
        chain.push(ProofStep {
            position: Position::root(),
            equation: id,
            direction: Direction::LeftToRight,
            after: eq.rhs.clone(),
        });
        chain.extend(self.to_proof(&right.steps));
        let new = Equation::new(left.result, right.result);
        Ok(self.push_record(new, Inference::Simplification { from: id }, chain))
    }

    fn check_goals(&self) -> Result<Option<Refutation>, RewriteError> {
        for (g, goal) in self.goals.iter().enumerate() {
            let left = self.system.normalize_open(&goal.lhs)?;
            let right = self.system.normalize_open(&goal.rhs)?;
            if left.result == right.result {
                let mut chain = self.to_proof(&left.steps);
                chain.extend(reversed(&goal.rhs, &self.to_proof(&right.steps)));
                return Ok(Some(Refutation {
                    goal: g,
                    disequation: goal.clone(),
                    records: ancestors(&self.records, &chain),
                    chain,
                    statistics: self.stats,
                }));
            }
        }
        Ok(None)
    }

    /// Critical pairs between the newest active equation and all active
    /// ones, added to the passive queue.
    fn add_critical_pairs(&mut self) {
        let newest = self.active.len() - 1;
        let pairs = self
            .system
            .critical_pairs_where(|outer, inner| outer == newest || inner == newest);
        for cp in pairs {
            if cp.trivial {
                continue;
            }
            let (equation, chain) = self.pair_proof(&cp);
            self.stats.generated += 1;
            let id = self.push_record(
                equation,
                Inference::CriticalPair {
                    outer: self.active[cp.outer.0],
                    inner: self.active[cp.inner.0],
                },
                chain,
            );
            self.passive.push(id);
        }
    }

    /// `left <- peak -> right` as a renamed equation with its chain.
    fn pair_proof(&self, cp: &CriticalPair) -> (Equation, Vec<ProofStep>) {
        let flip = |d: Direction| match d {
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        };
        let chain = vec![
            ProofStep {
                position: cp.position.clone(),
                equation: self.active[cp.inner.0],
                direction: flip(cp.inner.1),
                after: cp.peak.clone(),
            },
            ProofStep {
                position: Position::root(),
                equation: self.active[cp.outer.0],
                direction: cp.outer.1,
                after: cp.right.clone(),
            },
        ];
        rename_with_chain(Equation::new(cp.left.clone(), cp.right.clone()), chain)
    }

    fn total(&self) -> usize {
        self.active.len() + self.passive.len()
    }

    fn run(mut self) -> Result<CompletionOutcome, CompletionError> {
        if let Some(r) = self.check_goals()? {
            return Ok(CompletionOutcome::Refuted(r));
        }
        let resource_out = |limit, stats| {
            Ok(CompletionOutcome::ResourceOut {
                limit,
                statistics: stats,
            })
        };
        loop {
            let Some(given) = self.select() else {
                if self.stats.oversized > 0 {
                    return resource_out(ResourceLimit::TermSize, self.stats);
                }
                // a final pass: every critical pair of the active set must join
                let pending = self.unjoined_pairs()?;
                if pending.is_empty() {
                    return Ok(CompletionOutcome::Saturated(Box::new(self.finish())));
                }
                self.passive.extend(pending);
                continue;
            };
            self.stats.steps += 1;
            if self.stats.steps > self.limits.max_steps {
                return resource_out(ResourceLimit::Steps, self.stats);
            }
            let given = self.simplify(given)?;
            let eq = self.records[given].equation.clone();
            if eq.is_trivial() || self.active_keys.contains(&eq.variant_key()) {
                self.stats.deleted += 1;
                continue;
            }
            if eq.lhs.size().max(eq.rhs.size()) > self.limits.max_term_size {
                self.stats.oversized += 1;
                continue;
            }

            // back-simplification by the given equation alone
            let single = RewriteSystem::ordered(&self.signature, vec![eq.clone()], self.ordering.clone())?;
            let mut kept = Vec::new();
            let mut moved = false;
            for &id in &self.active {
                let a = &self.records[id].equation;
                let reducible =
                    single.normalize_open(&a.lhs)?.steps.len() + single.normalize_open(&a.rhs)?.steps.len() > 0;
                if reducible {
                    self.active_keys.remove(&a.variant_key());
                    self.passive.push(id);
                    self.stats.back_simplified += 1;
                    moved = true;
                } else {
                    kept.push(id);
                }
            }
            if moved {
                self.active = kept;
                self.passive.sort_unstable();
            }

            self.active.push(given);
            self.active_keys.insert(eq.variant_key());
            self.rebuild()?;
            self.add_critical_pairs();
            if self.total() > self.limits.max_equations {
                return resource_out(ResourceLimit::Equations, self.stats);
            }
            if let Some(r) = self.check_goals()? {
                return Ok(CompletionOutcome::Refuted(r));
            }
        }
    }

    /// Records for the critical pairs of the active set that do not join.
    fn unjoined_pairs(&mut self) -> Result<Vec<usize>, RewriteError> {
        let mut out = Vec::new();
        for cp in self.system.critical_pairs() {
            if cp.trivial {
                continue;
            }
            let mut n = self.system.normalizer();
            if n.normal_form(&cp.left)? == n.normal_form(&cp.right)? {
                continue;
            }
            let (equation, chain) = self.pair_proof(&cp);
            // instances of an active equation that ordered rewriting may not use
            if self.active_keys.contains(&equation.variant_key()) {
                continue;
            }
            let id = self.push_record(
                equation,
                Inference::CriticalPair {
                    outer: self.active[cp.outer.0],
                    inner: self.active[cp.inner.0],
                },
                chain,
            );
            out.push(id);
        }
        Ok(out)
    }

    fn finish(self) -> Saturation {
        Saturation {
            active: self.active.iter().map(|&id| self.records[id].clone()).collect(),
            system: self.system,
            records: self.records,
            statistics: self.stats,
        }
    }
}

/// The steps of `chain` (starting at `start`) undone in reverse order.
fn reversed(start: &Term, chain: &[ProofStep]) -> Vec<ProofStep> {
    let mut befores = vec![start.clone()];
    befores.extend(chain.iter().map(|s| s.after.clone()));
    chain
        .iter()
        .enumerate()
        .rev()
        .map(|(i, s)| ProofStep {
            position: s.position.clone(),
            equation: s.equation,
            direction: match s.direction {
                Direction::LeftToRight => Direction::RightToLeft,
                Direction::RightToLeft => Direction::LeftToRight,
            },
            after: befores[i].clone(),
        })
        .collect()
}

/// Renames variables to `0..` in order of first occurrence in the
/// equation, then in the chain.
fn rename_with_chain(eq: Equation, chain: Vec<ProofStep>) -> (Equation, Vec<ProofStep>) {
    let mut order: Vec<Var> = Vec::new();
    eq.lhs.collect_vars(&mut order);
    eq.rhs.collect_vars(&mut order);
    for s in &chain {
        s.after.collect_vars(&mut order);
    }
    let map = order.iter().enumerate().map(|(i, v)| (*v, Var(i as u32))).collect();
    let eq = Equation::new(eq.lhs.rename(&map), eq.rhs.rename(&map));
    let chain = chain
        .into_iter()
        .map(|s| ProofStep {
            after: s.after.rename(&map),
            ..s
        })
        .collect();
    (eq, chain)
}

/// Records reachable from the equations used in `chain`.
fn ancestors(records: &[InferenceRecord], chain: &[ProofStep]) -> Vec<InferenceRecord> {
    let mut seen = HashSet::new();
    let mut stack: Vec<usize> = chain.iter().map(|s| s.equation).collect();
    while let Some(id) = stack.pop() {
        if seen.insert(id) {
            let r = &records[id];
            stack.extend(r.chain.iter().map(|s| s.equation));
            if let Inference::Simplification { from } = r.inference {
                stack.push(from);
            }
        }
    }
    let mut ids: Vec<usize> = seen.into_iter().collect();
    ids.sort_unstable();
    ids.into_iter().map(|id| records[id].clone()).collect()
}

/// Runs completion on `p`. Ground goals are checked after every
/// activation.
pub fn complete(p: &Problem, cfg: &OrderingConfig, limits: Limits) -> Result<CompletionOutcome, CompletionError> {
    if let Some(g) = p.disequations.iter().find(|d| !d.is_ground()) {
        return Err(CompletionError::NonGroundGoal(g.clone()));
    }
    let system = RewriteSystem::ordered(&p.signature, Vec::new(), cfg.clone())?;
    let signature = system.signature().clone();
    let ordering = system.ordering().clone();
    let mut state = CompletionState {
        signature,
        ordering,
        goals: &p.disequations,
        limits,
        records: Vec::new(),
        active: Vec::new(),
        active_keys: HashSet::new(),
        passive: Vec::new(),
        system,
        picks: 0,
        stats: Statistics::default(),
    };
    for (i, a) in p.axioms.iter().enumerate() {
        let id = state.push_record(a.clone(), Inference::Axiom { index: i }, Vec::new());
        state.passive.push(id);
    }
    state.run()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("record {record}: step {step} uses equation {equation}, which is not earlier")]
    Forward {
        record: usize,
        step: usize,
        equation: usize,
    },
    #[error("record {record}: step {step} is not an instance of equation {equation}")]
    BadStep {
        record: usize,
        step: usize,
        equation: usize,
    },
    #[error("record {record}: the chain ends at `{reached}`, not at the right side")]
    WrongEnd { record: usize, reached: Term },
    #[error("record {0}: axiom index out of range or equation differs from the axiom")]
    BadAxiom(usize),
    #[error("record {0}: record ids must be increasing")]
    BadId(usize),
}

/// Checks that `after` is `before` with one instance of `eq` replaced at
/// `position` in the given direction.
fn valid_step(before: &Term, step: &ProofStep, eq: &Equation) -> bool {
    let (from, to) = match step.direction {
        Direction::LeftToRight => (&eq.lhs, &eq.rhs),
        Direction::RightToLeft => (&eq.rhs, &eq.lhs),
    };
    let (Some(b), Some(a)) = (before.subterm_at(&step.position), step.after.subterm_at(&step.position)) else {
        return false;
    };
    let mut sigma = Substitution::new();
    if !match_into(from, b, &mut sigma) || !match_into(to, a, &mut sigma) {
        return false;
    }
    // the context around the position must be unchanged
    step.after.replace_at(&step.position, b.clone()).as_ref() == Ok(before)
}

fn replay_chain(
    record: usize,
    start: &Term,
    end: &Term,
    chain: &[ProofStep],
    known: &HashMap<usize, Equation>,
) -> Result<(), ReplayError> {
    let mut cur = start.clone();
    for (i, s) in chain.iter().enumerate() {
        let Some(eq) = known.get(&s.equation).filter(|_| s.equation < record) else {
            return Err(ReplayError::Forward {
                record,
                step: i,
                equation: s.equation,
            });
        };
        if !valid_step(&cur, s, eq) {
            return Err(ReplayError::BadStep {
                record,
                step: i,
                equation: s.equation,
            });
        }
        cur = s.after.clone();
    }
    if &cur != end {
        return Err(ReplayError::WrongEnd { record, reached: cur });
    }
    Ok(())
}

fn replay_records(records: &[InferenceRecord], axioms: &[Equation]) -> Result<HashMap<usize, Equation>, ReplayError> {
    let mut known = HashMap::new();
    let mut last = None;
    for r in records {
        if last.is_some_and(|l| r.id <= l) {
            return Err(ReplayError::BadId(r.id));
        }
        last = Some(r.id);
        match r.inference {
            Inference::Axiom { index } => {
                if axioms.get(index) != Some(&r.equation) {
                    return Err(ReplayError::BadAxiom(r.id));
                }
            }
            _ => replay_chain(r.id, &r.equation.lhs, &r.equation.rhs, &r.chain, &known)?,
        }
        known.insert(r.id, r.equation.clone());
    }
    Ok(known)
}

/// Re-checks records given in increasing id order: axioms against
/// `axioms`, derived equations by replaying their chains with earlier
/// records of the list only.
pub fn replay(records: &[InferenceRecord], axioms: &[Equation]) -> Result<(), ReplayError> {
    replay_records(records, axioms).map(|_| ())
}

/// Replays a refutation: its records, then the chain joining the two sides
/// of the goal.
pub fn replay_refutation(r: &Refutation, axioms: &[Equation]) -> Result<(), ReplayError> {
    let known = replay_records(&r.records, axioms)?;
    replay_chain(usize::MAX, &r.disequation.lhs, &r.disequation.rhs, &r.chain, &known)
}

/// A rewrite system ready for model construction, with the result of the
/// sanity pass when it came from a dump.
#[derive(Clone, Debug)]
pub struct LoadedSystem {
    pub system: RewriteSystem,
    pub from_dump: bool,
    /// Axiom instances over terms with at most one operation that the dump
    /// fails to join, as `(axiom, substitution)`.
    pub sanity_failures: Vec<(Equation, Substitution)>,
}

/// Uses `dump` when given (after checking small axiom instances against
/// it); otherwise runs completion and requires saturation.
pub fn saturate_or_load(
    p: &Problem,
    dump: Option<&SaturationDump>,
    cfg: &OrderingConfig,
    limits: Limits,
) -> Result<LoadedSystem, CompletionError> {
    match dump {
        Some(d) => {
            let mut signature = p.signature.clone();
            signature.extend(&d.signature).map_err(RewriteError::from)?;
            let system = RewriteSystem::ordered(&signature, d.equations.clone(), cfg.clone())?;
            let universe = ground_terms_up_to(system.signature(), 1).map_err(RewriteError::from)?;
            let reps = representatives(&system, &universe)?;
            let mut sanity_failures = Vec::new();
            for a in &p.axioms {
                let cov = check_axiom(&system, a, universe.len(), &reps, 1);
                if let Some(e) = cov.error {
                    log::warn!("sanity check of {a} failed: {e}");
                }
                for f in cov.failures {
                    log::warn!("dump does not join {a} under {}", f.substitution);
                    sanity_failures.push((a.clone(), f.substitution));
                }
            }
            Ok(LoadedSystem {
                system,
                from_dump: true,
                sanity_failures,
            })
        }
        None => match complete(p, cfg, limits)? {
            CompletionOutcome::Saturated(s) => Ok(LoadedSystem {
                system: s.system,
                from_dump: false,
                sanity_failures: Vec::new(),
            }),
            CompletionOutcome::Refuted(r) => Err(CompletionError::Refuted(r.disequation)),
            CompletionOutcome::ResourceOut { limit, .. } => Err(CompletionError::ResourceOut(limit)),
        },
    }
}
