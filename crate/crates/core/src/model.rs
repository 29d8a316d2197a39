//! The Herbrand model induced by a rewrite system: the domain is the set of
//! ground normal forms, and a ground term denotes its normal form.
//!
//! Countermodel verification evaluates the disequations, checks every
//! ground instance of every axiom over a bounded universe, and attaches the
//! confluence check that lifts the bounded evidence to all instances.
//!
//! Instance checking works on normal-form representatives. Normalization
//! is innermost, so the normal form of `σ(l)` only depends on the normal
//! forms of the terms `σ` substitutes. Each universe term is therefore
//! normalized once, and instances are enumerated over the distinct normal
//! forms; the report gives both the raw and the reduced instance counts.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::equation::Equation;
use crate::ordering::OrderingConfig;
use crate::rewrite::{ConfluenceVerdict, PreorderReport, RewriteError, RewriteSystem};
use crate::term::{ground_terms_up_to, Signature, Substitution, Term, Var};
use crate::tptp::Problem;

pub const DEFAULT_INSTANCE_BOUND: usize = 2;

/// Failures kept per axiom; the count is always exact.
const MAX_REPORTED_FAILURES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("`{0}` is not ground; only ground terms and equations can be evaluated")]
    NonGround(String),
    #[error(transparent)]
    Rewrite(RewriteError),
}

impl From<RewriteError> for ModelError {
    fn from(e: RewriteError) -> ModelError {
        match e {
            RewriteError::NonGround(t) => ModelError::NonGround(t.to_string()),
            other => ModelError::Rewrite(other),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HerbrandModel {
    system: RewriteSystem,
}

impl HerbrandModel {
    pub fn new(system: RewriteSystem) -> HerbrandModel {
        HerbrandModel { system }
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.system
    }

    /// Always has a constant.
    pub fn signature(&self) -> &Signature {
        self.system.signature()
    }

    /// The domain element denoted by `t`: its normal form.
    pub fn evaluate(&self, t: &Term) -> Result<Term, ModelError> {
        Ok(self.system.normal_form(t)?)
    }

    pub fn holds(&self, eq: &Equation) -> Result<bool, ModelError> {
        if !eq.is_ground() {
            return Err(ModelError::NonGround(eq.to_string()));
        }
        Ok(self.system.equal_in_model(&eq.lhs, &eq.rhs)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelVerdict {
    VerifiedCountermodelAtBound,
    RefutedModel,
    Inconclusive,
}

impl fmt::Display for ModelVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelVerdict::VerifiedCountermodelAtBound => "verified_countermodel_at_bound",
            ModelVerdict::RefutedModel => "refuted_model",
            ModelVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisequationVerdict {
    pub disequation: Equation,
    pub lhs_normal_form: Option<Term>,
    pub rhs_normal_form: Option<Term>,
    pub distinct: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceFailure {
    pub substitution: Substitution,
    pub lhs_normal_form: Term,
    pub rhs_normal_form: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCoverage {
    pub axiom: Equation,
    pub bound: usize,
    /// Grounding substitutions into the bounded universe.
    pub instances: u128,
    /// Substitutions into distinct normal forms actually evaluated.
    pub checked: u128,
    pub failure_count: u128,
    pub failures: Vec<InstanceFailure>,
    pub error: Option<String>,
}

impl AxiomCoverage {
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.error.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceSummary {
    pub verdict: ConfluenceVerdict,
    pub termination: Option<OrderingConfig>,
    pub critical_pairs: usize,
    pub nontrivial_pairs: usize,
    pub witness: Option<(Term, Term)>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub verdict: ModelVerdict,
    pub reasons: Vec<String>,
    pub ordering: OrderingConfig,
    pub bound: usize,
    pub universe_size: usize,
    pub representatives: usize,
    pub disequations: Vec<DisequationVerdict>,
    pub axioms: Vec<AxiomCoverage>,
    pub preordered: PreorderReport,
    pub confluence: ConfluenceSummary,
}

/// A normal form standing for every universe term that reduces to it.
#[derive(Clone, Debug)]
pub(crate) struct Representative {
    /// First universe term with this normal form.
    pub example: Term,
    pub normal: Term,
    pub class_size: u64,
}

/// One representative per distinct normal form of `universe`.
pub(crate) fn representatives(system: &RewriteSystem, universe: &[Term]) -> Result<Vec<Representative>, RewriteError> {
    let normal: Vec<Result<Term, RewriteError>> = universe
        .par_iter()
        .map_init(|| system.normalizer(), |n, t| n.normal_form(t))
        .collect();
    let mut index: HashMap<Term, usize> = HashMap::new();
    let mut out: Vec<Representative> = Vec::new();
    for (t, nf) in universe.iter().zip(normal) {
        let nf = nf?;
        let k = *index.entry(nf.clone()).or_insert_with(|| {
            out.push(Representative {
                example: t.clone(),
                normal: nf,
                class_size: 0,
            });
            out.len() - 1
        });
        out[k].class_size += 1;
    }
    Ok(out)
}

/// Checks `axiom` on every grounding substitution into the universe that
/// `reps` partitions. Failures are counted per raw instance.
pub(crate) fn check_axiom(
    system: &RewriteSystem,
    axiom: &Equation,
    universe_size: usize,
    reps: &[Representative],
    bound: usize,
) -> AxiomCoverage {
    let vars: Vec<Var> = axiom.vars();
    let n = vars.len() as u32;
    let instances = (universe_size as u128).saturating_pow(n);
    let checked = (reps.len() as u128).saturating_pow(n);

    // tuples in mixed radix; the first variable is split across workers
    let per_first = (reps.len() as u128).saturating_pow(n.saturating_sub(1));
    let firsts = if n == 0 { 1 } else { reps.len() };
    // one normalizer per chunk, so its cache is reused
    let chunks = rayon::current_num_threads().max(1);
    let chunk_len = firsts.div_ceil(chunks).max(1);
    let starts: Vec<usize> = (0..firsts).step_by(chunk_len).collect();
    let results: Vec<Result<(u128, Vec<InstanceFailure>), RewriteError>> = starts
        .into_par_iter()
        .map(|start| {
            let mut norm = system.normalizer();
            let mut failures = Vec::new();
            let mut count = 0u128;
            for first in start..(start + chunk_len).min(firsts) {
                let mut idx = vec![0usize; vars.len()];
                if n > 0 {
                    idx[0] = first;
                }
                for _ in 0..per_first {
                    let sigma: Substitution = vars
                        .iter()
                        .zip(&idx)
                        .map(|(v, &i)| (*v, reps[i].normal.clone()))
                        .collect();
                    let l = norm.normal_form(&sigma.apply(&axiom.lhs))?;
                    let r = norm.normal_form(&sigma.apply(&axiom.rhs))?;
                    if l != r {
                        count += idx.iter().map(|&i| reps[i].class_size as u128).product::<u128>();
                        if failures.len() < MAX_REPORTED_FAILURES {
                            failures.push(InstanceFailure {
                                substitution: vars
                                    .iter()
                                    .zip(&idx)
                                    .map(|(v, &i)| (*v, reps[i].example.clone()))
                                    .collect(),
                                lhs_normal_form: l,
                                rhs_normal_form: r,
                            });
                        }
                    }
                    for d in (1..idx.len()).rev() {
                        idx[d] += 1;
                        if idx[d] < reps.len() {
                            break;
                        }
                        idx[d] = 0;
                    }
                }
            }
            Ok((count, failures))
        })
        .collect();

    let mut coverage = AxiomCoverage {
        axiom: axiom.clone(),
        bound,
        instances,
        checked,
        failure_count: 0,
        failures: Vec::new(),
        error: None,
    };
    for r in results {
        match r {
            Ok((count, failures)) => {
                coverage.failure_count += count;
                let room = MAX_REPORTED_FAILURES - coverage.failures.len();
                coverage.failures.extend(failures.into_iter().take(room));
            }
            Err(e) => {
                coverage.error.get_or_insert(e.to_string());
            }
        }
    }
    coverage
}

fn disequation_verdict(m: &HerbrandModel, d: &Equation) -> DisequationVerdict {
    match (m.evaluate(&d.lhs), m.evaluate(&d.rhs)) {
        (Ok(l), Ok(r)) => DisequationVerdict {
            disequation: d.clone(),
            distinct: l != r,
            lhs_normal_form: Some(l),
            rhs_normal_form: Some(r),
            error: None,
        },
        (Err(e), _) | (_, Err(e)) => DisequationVerdict {
            disequation: d.clone(),
            lhs_normal_form: None,
            rhs_normal_form: None,
            distinct: false,
            error: Some(e.to_string()),
        },
    }
}

/// Checks that `m` satisfies every disequation of `p`, and every axiom on
/// all ground instances drawn from terms with at most `bound` operations
/// over the model's signature.
pub fn verify_countermodel(m: &HerbrandModel, p: &Problem, bound: usize) -> ModelReport {
    let system = m.system();
    let mut reasons = Vec::new();

    let disequations: Vec<DisequationVerdict> = p.disequations.iter().map(|d| disequation_verdict(m, d)).collect();

    for s in p.signature.symbols() {
        if !m.signature().contains(s) {
            reasons.push(format!("problem symbol `{s}` is not in the model signature"));
        }
    }
    let universe = ground_terms_up_to(m.signature(), bound).unwrap_or_default();
    let (reps, axioms) = match representatives(system, &universe) {
        Ok(reps) => {
            let axioms = p
                .axioms
                .iter()
                .map(|a| check_axiom(system, a, universe.len(), &reps, bound))
                .collect();
            (reps, axioms)
        }
        Err(e) => {
            reasons.push(format!("normalizing the universe failed: {e}"));
            (Vec::new(), Vec::new())
        }
    };

    let report = system.check_ground_confluence();
    let confluence = ConfluenceSummary {
        verdict: report.verdict,
        critical_pairs: report.pairs.len(),
        nontrivial_pairs: report.nontrivial_pairs(),
        termination: report.termination,
        witness: report.witness,
        reason: report.reason,
    };

    let mut refuted = false;
    for d in &disequations {
        if let Some(e) = &d.error {
            reasons.push(format!("disequation {} could not be evaluated: {e}", d.disequation));
        } else if !d.distinct {
            refuted = true;
            reasons.push(format!(
                "disequation sides of {} have the same normal form",
                d.disequation
            ));
        }
    }
    for a in &axioms {
        if a.failure_count > 0 {
            refuted = true;
            reasons.push(format!(
                "axiom {} fails on {} of {} instances",
                a.axiom, a.failure_count, a.instances
            ));
        }
        if let Some(e) = &a.error {
            reasons.push(format!("axiom {} could not be checked: {e}", a.axiom));
        }
    }
    if confluence.verdict != ConfluenceVerdict::Certified {
        reasons.push(format!(
            "confluence not certified ({}){}",
            confluence.verdict,
            confluence.reason.as_ref().map_or(String::new(), |r| format!(": {r}"))
        ));
    }
    let verdict = if refuted {
        ModelVerdict::RefutedModel
    } else if reasons.is_empty() {
        ModelVerdict::VerifiedCountermodelAtBound
    } else {
        ModelVerdict::Inconclusive
    };

    ModelReport {
        verdict,
        reasons,
        ordering: system.ordering().clone(),
        bound,
        universe_size: universe.len(),
        representatives: reps.len(),
        disequations,
        axioms,
        preordered: system.check_preordered(),
        confluence,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::{parse_precedence, OrderingConfig};
    use crate::term::tests::c;
    use crate::tptp::{parse_equation, parse_problem, parse_saturation, parse_term};

    fn model_118() -> HerbrandModel {
        let dump = parse_saturation(include_str!("../fixtures/eq118_saturation.p")).unwrap();
        let cfg = OrderingConfig::lpo(parse_precedence("mul > f0 > f1 > f4 > f3 > f2 > b > a").unwrap());
        let mut sig = dump.signature.clone();
        let p = parse_problem(include_str!("../fixtures/eq118_not_274.p")).unwrap();
        sig.extend(&p.signature).unwrap();
        HerbrandModel::new(RewriteSystem::ordered(&sig, dump.equations, cfg).unwrap())
    }

    #[test]
    fn evaluates_and_decides() {
        let m = model_118();
        assert_eq!(m.evaluate(&c("a")).unwrap(), c("a"));
        let goal = parse_term("mul(mul(mul(b, a), b), b)").unwrap();
        assert_eq!(m.evaluate(&goal).unwrap().to_string(), "f4");
        assert!(m
            .holds(&parse_equation("mul(b, mul(mul(a, b), b)) = a").unwrap())
            .unwrap());
        assert!(!m.holds(&Equation::new(c("a"), goal)).unwrap());
        assert!(matches!(
            m.holds(&parse_equation("X = a").unwrap()),
            Err(ModelError::NonGround(_))
        ));
    }

    #[test]
    fn model_118_verified_at_bound_two() {
        let m = model_118();
        let p = parse_problem(include_str!("../fixtures/eq118_not_274.p")).unwrap();
        let report = verify_countermodel(&m, &p, 2);
        assert_eq!(
            report.verdict,
            ModelVerdict::VerifiedCountermodelAtBound,
            "{:?}",
            report.reasons
        );
        assert_eq!(report.axioms[0].instances, (report.universe_size as u128).pow(2));
        let d = &report.disequations[0];
        assert_eq!(d.rhs_normal_form.as_ref().unwrap().to_string(), "f4");
    }

    #[test]
    fn identical_sides_refute() {
        let p = Problem::new(vec![], vec![Equation::new(c("a"), c("a"))]).unwrap();
        let cfg = OrderingConfig::lpo(parse_precedence("a").unwrap());
        let m = HerbrandModel::new(RewriteSystem::ordered(&p.signature, vec![], cfg).unwrap());
        let report = verify_countermodel(&m, &p, 2);
        assert_eq!(report.verdict, ModelVerdict::RefutedModel);
    }

    #[test]
    fn wrong_model_fails_axiom_instances() {
        // the empty system does not satisfy x*y = y*x
        let p = parse_problem("cnf(c, axiom, mul(X,Y) = mul(Y,X)).").unwrap();
        let mut sig = p.signature.clone();
        sig.add(crate::term::Symbol::constant("a")).unwrap();
        sig.add(crate::term::Symbol::constant("b")).unwrap();
        let cfg = OrderingConfig::lpo(parse_precedence("mul > b > a").unwrap());
        let m = HerbrandModel::new(RewriteSystem::ordered(&sig, vec![], cfg).unwrap());
        let report = verify_countermodel(&m, &p, 1);
        assert_eq!(report.verdict, ModelVerdict::RefutedModel);
        let a = &report.axioms[0];
        // 6 terms; the 6 diagonal instances hold
        assert_eq!(a.instances, 36);
        assert_eq!(a.failure_count, 30);
        assert_eq!(a.failures.len(), MAX_REPORTED_FAILURES);
    }
}
