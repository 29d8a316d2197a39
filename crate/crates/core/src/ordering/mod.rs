//! Reduction orderings on terms: the lexicographic path ordering and the
//! Knuth-Bendix ordering, both total on ground terms once the precedence
//! is total.
//!
//! Both orderings are implemented once over a three-valued logic so the
//! same code serves exact comparison (total precedence, never `Unknown`)
//! and the precedence search in [`search`], where symbols not yet ranked
//! compare as `Unknown`.

mod config;
mod kbo;
mod lpo;
mod search;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equation::Rule;
use crate::term::{Signature, Symbol, Term};

pub use config::{parse_precedence, parse_weights};
pub use search::{find_orientation, OrientationOutcome, DEFAULT_SEARCH_BUDGET};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderingError {
    #[error("symbol `{0}` is missing from the precedence")]
    MissingSymbol(String),
    #[error("symbol `{0}` appears twice in the precedence")]
    DuplicateSymbol(String),
    #[error("inadmissible KBO weights: {0}")]
    Inadmissible(String),
    #[error("signature has no constants")]
    NoConstants,
    #[error("ordering config line {line}: {message}")]
    Config { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl Comparison {
    pub fn reverse(self) -> Comparison {
        match self {
            Comparison::Greater => Comparison::Less,
            Comparison::Less => Comparison::Greater,
            other => other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderingKind {
    Kbo,
    Lpo,
}

impl fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderingKind::Kbo => "kbo",
            OrderingKind::Lpo => "lpo",
        })
    }
}

/// Strict total order on symbol names. Higher rank is greater.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Precedence {
    /// Greatest first.
    order: Vec<String>,
    rank: HashMap<String, u32>,
}

impl Precedence {
    /// Builds a precedence from names listed greatest first.
    pub fn from_greatest_first<I, S>(names: I) -> Result<Precedence, OrderingError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let order: Vec<String> = names.into_iter().map(Into::into).collect();
        let n = order.len() as u32;
        let mut rank = HashMap::new();
        for (i, name) in order.iter().enumerate() {
            if rank.insert(name.clone(), n - i as u32).is_some() {
                return Err(OrderingError::DuplicateSymbol(name.clone()));
            }
        }
        Ok(Precedence { order, rank })
    }

    /// Later-declared symbols are greater.
    pub fn from_declaration_order(sig: &Signature) -> Precedence {
        Precedence::from_greatest_first(sig.symbols().iter().rev().map(|s| s.name().to_string()))
            .expect("signature names are unique")
    }

    pub fn rank(&self, name: &str) -> Option<u32> {
        self.rank.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.rank.contains_key(name)
    }

    pub fn greatest_first(&self) -> &[String] {
        &self.order
    }

    pub fn compare(&self, f: &Symbol, g: &Symbol) -> Option<Ordering> {
        if f == g {
            return Some(Ordering::Equal);
        }
        Some(self.rank(f.name())?.cmp(&self.rank(g.name())?))
    }

    /// Appends `name` below every ranked symbol.
    pub fn push_bottom(&mut self, name: &str) {
        if self.contains(name) {
            return;
        }
        let mut order = self.order.clone();
        order.push(name.to_string());
        *self = Precedence::from_greatest_first(order).expect("fresh name");
    }
}

impl fmt::Display for Precedence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.order.join(" > "))
    }
}

impl fmt::Debug for Precedence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Precedence({self})")
    }
}

impl Serialize for Precedence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.order.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Precedence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Precedence, D::Error> {
        let order = Vec::<String>::deserialize(d)?;
        Precedence::from_greatest_first(order).map_err(serde::de::Error::custom)
    }
}

/// Symbol weights for KBO. Unlisted symbols get `default_weight`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KboConfig {
    pub weights: BTreeMap<String, u32>,
    pub default_weight: u32,
    pub variable_weight: u32,
}

impl Default for KboConfig {
    fn default() -> KboConfig {
        KboConfig {
            weights: BTreeMap::new(),
            default_weight: 1,
            variable_weight: 1,
        }
    }
}

impl KboConfig {
    pub fn weight(&self, name: &str) -> u32 {
        self.weights.get(name).copied().unwrap_or(self.default_weight)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingConfig {
    pub kind: OrderingKind,
    pub precedence: Precedence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kbo: Option<KboConfig>,
}

impl fmt::Display for OrderingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.precedence)?;
        if let Some(kbo) = &self.kbo {
            if !kbo.weights.is_empty() || kbo.default_weight != 1 || kbo.variable_weight != 1 {
                write!(f, " weights")?;
                for (name, w) in &kbo.weights {
                    write!(f, " {name}:{w}")?;
                }
                write!(f, " default:{} var:{}", kbo.default_weight, kbo.variable_weight)?;
            }
        }
        Ok(())
    }
}

impl OrderingConfig {
    pub fn lpo(precedence: Precedence) -> OrderingConfig {
        OrderingConfig {
            kind: OrderingKind::Lpo,
            precedence,
            kbo: None,
        }
    }

    pub fn kbo(precedence: Precedence, weights: KboConfig) -> OrderingConfig {
        OrderingConfig {
            kind: OrderingKind::Kbo,
            precedence,
            kbo: Some(weights),
        }
    }

    /// KBO with unit weights and later-declared symbols greater.
    pub fn default_for(sig: &Signature) -> OrderingConfig {
        OrderingConfig::kbo(Precedence::from_declaration_order(sig), KboConfig::default())
    }

    /// Checks that every symbol of `sig` is ranked and, for KBO, that the
    /// weights are admissible.
    pub fn validate(&self, sig: &Signature) -> Result<(), OrderingError> {
        for s in sig.symbols() {
            if !self.precedence.contains(s.name()) {
                return Err(OrderingError::MissingSymbol(s.name().to_string()));
            }
        }
        if self.kind == OrderingKind::Lpo {
            return Ok(());
        }
        let kbo = self
            .kbo
            .as_ref()
            .ok_or_else(|| OrderingError::Inadmissible("KBO requires weights".into()))?;
        if kbo.variable_weight == 0 {
            return Err(OrderingError::Inadmissible("variable weight must be positive".into()));
        }
        let mut zero_unary = Vec::new();
        for s in sig.symbols() {
            let w = kbo.weight(s.name());
            if s.is_constant() && w < kbo.variable_weight {
                return Err(OrderingError::Inadmissible(format!(
                    "constant `{s}` has weight {w} below the variable weight {}",
                    kbo.variable_weight
                )));
            }
            if s.arity() == 1 && w == 0 {
                zero_unary.push(s);
            }
        }
        match zero_unary.as_slice() {
            [] => Ok(()),
            [f] => {
                let top = self.precedence.rank(f.name());
                let maximal = sig
                    .symbols()
                    .iter()
                    .all(|g| g == *f || self.precedence.rank(g.name()) < top);
                if maximal {
                    Ok(())
                } else {
                    Err(OrderingError::Inadmissible(format!(
                        "weight-0 unary symbol `{f}` must be greatest in the precedence"
                    )))
                }
            }
            _ => Err(OrderingError::Inadmissible(
                "more than one unary symbol of weight 0".into(),
            )),
        }
    }

    /// Ensures `symbol` is ranked, adding it as the least symbol if not.
    pub fn with_bottom_symbol(mut self, symbol: &Symbol) -> OrderingConfig {
        self.precedence.push_bottom(symbol.name());
        self
    }

    fn check_symbols(&self, t: &Term) -> Result<(), OrderingError> {
        for (_, sub) in t.subterm_positions() {
            if let Some(f) = sub.head() {
                if !self.precedence.contains(f.name()) {
                    return Err(OrderingError::MissingSymbol(f.name().to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn compare(&self, s: &Term, t: &Term) -> Result<Comparison, OrderingError> {
        self.check_symbols(s)?;
        self.check_symbols(t)?;
        Ok(self.compare_unchecked(s, t))
    }

    /// Comparison without checking symbol coverage; unranked symbols make
    /// the verdict `Incomparable`.
    pub(crate) fn compare_unchecked(&self, s: &Term, t: &Term) -> Comparison {
        if s == t {
            return Comparison::Equal;
        }
        let params = TotalParams(self);
        let gt = |a: &Term, b: &Term| match self.kind {
            OrderingKind::Lpo => lpo::greater(&params, a, b),
            OrderingKind::Kbo => kbo::greater(&params, a, b),
        };
        if gt(s, t) == Truth::True {
            Comparison::Greater
        } else if gt(t, s) == Truth::True {
            Comparison::Less
        } else {
            Comparison::Incomparable
        }
    }

    pub(crate) fn greater_unchecked(&self, s: &Term, t: &Term) -> bool {
        if s == t {
            return false;
        }
        let params = TotalParams(self);
        let verdict = match self.kind {
            OrderingKind::Lpo => lpo::greater(&params, s, t),
            OrderingKind::Kbo => kbo::greater(&params, s, t),
        };
        verdict == Truth::True
    }
}

pub fn compare(cfg: &OrderingConfig, s: &Term, t: &Term) -> Result<Comparison, OrderingError> {
    cfg.compare(s, t)
}

/// The constant that is least under `cfg` among the constants of `sig`.
pub fn smallest_constant(sig: &Signature, cfg: &OrderingConfig) -> Result<Term, OrderingError> {
    let mut best: Option<Term> = None;
    for c in sig.constants() {
        let t = Term::app(c.clone(), vec![]);
        best = match best {
            None => Some(t),
            Some(b) => {
                if cfg.compare(&t, &b)? == Comparison::Less {
                    Some(t)
                } else {
                    Some(b)
                }
            }
        };
    }
    best.ok_or(OrderingError::NoConstants)
}

/// True iff every rule's left side is strictly greater than its right side,
/// which proves the rule set terminating. Unranked symbols yield false.
pub fn is_reduction_orientation(cfg: &OrderingConfig, rules: &[Rule]) -> bool {
    rules
        .iter()
        .all(|r| matches!(cfg.compare(&r.lhs, &r.rhs), Ok(Comparison::Greater)))
}

/// Kleene three-valued truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn and(self, other: impl FnOnce() -> Truth) -> Truth {
        match self {
            Truth::False => Truth::False,
            Truth::True => other(),
            Truth::Unknown => match other() {
                Truth::False => Truth::False,
                _ => Truth::Unknown,
            },
        }
    }

    pub fn or(self, other: impl FnOnce() -> Truth) -> Truth {
        match self {
            Truth::True => Truth::True,
            Truth::False => other(),
            Truth::Unknown => match other() {
                Truth::True => Truth::True,
                _ => Truth::Unknown,
            },
        }
    }
}

pub(crate) trait Params {
    /// `None` when the precedence does not (yet) decide `f` against `g`.
    fn prec(&self, f: &Symbol, g: &Symbol) -> Option<Ordering>;
    fn weight(&self, f: &Symbol) -> u64;
    fn var_weight(&self) -> u64;
}

struct TotalParams<'a>(&'a OrderingConfig);

impl Params for TotalParams<'_> {
    fn prec(&self, f: &Symbol, g: &Symbol) -> Option<Ordering> {
        self.0.precedence.compare(f, g)
    }

    fn weight(&self, f: &Symbol) -> u64 {
        self.0.kbo.as_ref().map_or(1, |k| k.weight(f.name()) as u64)
    }

    fn var_weight(&self) -> u64 {
        self.0.kbo.as_ref().map_or(1, |k| k.variable_weight as u64)
    }
}
