//! Search for a precedence under which every rule is decreasing.
//!
//! The precedence is built greatest symbol first. A partially built
//! precedence ranks the placed symbols above all unplaced ones and leaves
//! unplaced pairs undecided, so the three-valued comparison answers `False`
//! only when no completion can orient a rule. Such branches are pruned,
//! and a node at which every rule is already `True` is completed
//! arbitrarily.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::{kbo, lpo, KboConfig, OrderingConfig, OrderingKind, Params, Precedence, Truth};
use crate::equation::Rule;
use crate::term::{Signature, Symbol};

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrientationOutcome {
    Found(OrderingConfig),
    /// Every precedence was refuted: no configuration of this kind (with
    /// unit weights for KBO) orients the rules. Other orderings might.
    Exhausted {
        nodes: u64,
    },
    /// Budget ran out first; inconclusive.
    BudgetExceeded {
        nodes: u64,
    },
}

impl OrientationOutcome {
    pub fn config(&self) -> Option<&OrderingConfig> {
        match self {
            OrientationOutcome::Found(cfg) => Some(cfg),
            _ => None,
        }
    }

    pub fn into_config(self) -> Option<OrderingConfig> {
        match self {
            OrientationOutcome::Found(cfg) => Some(cfg),
            _ => None,
        }
    }
}

struct Partial<'a> {
    /// rank of placed symbols; higher is greater
    placed: &'a HashMap<&'a str, u32>,
}

impl Params for Partial<'_> {
    fn prec(&self, f: &Symbol, g: &Symbol) -> Option<Ordering> {
        if f == g {
            return Some(Ordering::Equal);
        }
        match (self.placed.get(f.name()), self.placed.get(g.name())) {
            (Some(a), Some(b)) => Some(a.cmp(b)),
            (Some(_), None) => Some(Ordering::Greater),
            (None, Some(_)) => Some(Ordering::Less),
            (None, None) => None,
        }
    }

    fn weight(&self, _f: &Symbol) -> u64 {
        1
    }

    fn var_weight(&self) -> u64 {
        1
    }
}

/// Looks for an LPO precedence, or a unit-weight KBO precedence, that makes
/// every rule strictly decreasing. Symbols of `sig` not occurring in any
/// rule are ranked below the rest, later-declared ones greater.
pub fn find_orientation(sig: &Signature, rules: &[Rule], kind: OrderingKind, budget: u64) -> OrientationOutcome {
    let mut in_rules: Vec<Symbol> = Vec::new();
    for r in rules {
        for t in [&r.lhs, &r.rhs] {
            for (_, sub) in t.subterm_positions() {
                if let Some(f) = sub.head() {
                    if !in_rules.contains(f) {
                        in_rules.push(f.clone());
                    }
                }
            }
        }
    }
    // try big operators near the top first
    in_rules.sort_by(|a, b| {
        b.arity()
            .cmp(&a.arity())
            .then_with(|| sig.position(a).cmp(&sig.position(b)))
    });

    let mut search = Search {
        rules,
        kind,
        symbols: &in_rules,
        budget,
        nodes: 0,
    };
    let mut order = Vec::new();
    let mut used = vec![false; in_rules.len()];
    let result = search.dfs(&mut order, &mut used);
    let nodes = search.nodes;
    match result {
        Step::Found(mut order) => {
            for s in sig.symbols().iter().rev() {
                if !order.iter().any(|n| n == s.name()) {
                    order.push(s.name().to_string());
                }
            }
            let precedence = Precedence::from_greatest_first(order).expect("unique names");
            let cfg = match kind {
                OrderingKind::Lpo => OrderingConfig::lpo(precedence),
                OrderingKind::Kbo => OrderingConfig::kbo(precedence, KboConfig::default()),
            };
            debug_assert!(super::is_reduction_orientation(&cfg, rules));
            OrientationOutcome::Found(cfg)
        }
        Step::Refuted => OrientationOutcome::Exhausted { nodes },
        Step::OutOfBudget => OrientationOutcome::BudgetExceeded { nodes },
    }
}

enum Step {
    Found(Vec<String>),
    Refuted,
    OutOfBudget,
}

struct Search<'a> {
    rules: &'a [Rule],
    kind: OrderingKind,
    symbols: &'a [Symbol],
    budget: u64,
    nodes: u64,
}

impl Search<'_> {
    fn evaluate(&self, order: &[usize]) -> Truth {
        let n = order.len() as u32;
        let placed: HashMap<&str, u32> = order
            .iter()
            .enumerate()
            .map(|(i, &s)| (self.symbols[s].name(), n - i as u32))
            .collect();
        let params = Partial { placed: &placed };
        self.rules.iter().fold(Truth::True, |acc, r| {
            acc.and(|| match self.kind {
                OrderingKind::Lpo => lpo::greater(&params, &r.lhs, &r.rhs),
                OrderingKind::Kbo => kbo::greater(&params, &r.lhs, &r.rhs),
            })
        })
    }

    fn dfs(&mut self, order: &mut Vec<usize>, used: &mut [bool]) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::OutOfBudget;
        }
        match self.evaluate(order) {
            Truth::False => return Step::Refuted,
            Truth::True => {
                let mut names: Vec<String> = order.iter().map(|&i| self.symbols[i].name().to_string()).collect();
                for (i, s) in self.symbols.iter().enumerate() {
                    if !used[i] {
                        names.push(s.name().to_string());
                    }
                }
                return Step::Found(names);
            }
            Truth::Unknown => {}
        }
        let mut out_of_budget = false;
        for i in 0..self.symbols.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            order.push(i);
            let step = self.dfs(order, used);
            order.pop();
            used[i] = false;
            match step {
                Step::Found(p) => return Step::Found(p),
                Step::OutOfBudget => {
                    out_of_budget = true;
                    break;
                }
                Step::Refuted => {}
            }
        }
        if out_of_budget {
            Step::OutOfBudget
        } else {
            Step::Refuted
        }
    }
}
