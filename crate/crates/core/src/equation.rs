use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::term::{Term, Var};

/// An unordered pair of terms, implicitly universally quantified.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Equation {
        Equation { lhs, rhs }
    }

    pub fn swapped(&self) -> Equation {
        Equation::new(self.rhs.clone(), self.lhs.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn is_ground(&self) -> bool {
        self.lhs.is_ground() && self.rhs.is_ground()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = self.lhs.vars();
        self.rhs.collect_vars(&mut out);
        out
    }

    pub fn max_var(&self) -> Option<u32> {
        self.lhs.max_var().max(self.rhs.max_var())
    }

    /// Variables renamed to 0, 1, 2, ... in first-occurrence order.
    pub fn normalized(&self) -> Equation {
        let map: HashMap<Var, Var> = self
            .vars()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, Var(i as u32)))
            .collect();
        Equation::new(self.lhs.rename(&map), self.rhs.rename(&map))
    }

    /// Identifies equations up to variable renaming and side swap.
    pub fn variant_key(&self) -> Equation {
        let a = self.normalized();
        let b = self.swapped().normalized();
        a.min(b)
    }

    pub fn size(&self) -> usize {
        self.lhs.size() + self.rhs.size()
    }

    pub fn as_rule(&self) -> Rule {
        Rule::new(self.lhs.clone(), self.rhs.clone())
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// A directed pair `lhs -> rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Rule {
        Rule { lhs, rhs }
    }

    pub fn as_equation(&self) -> Equation {
        Equation::new(self.lhs.clone(), self.rhs.clone())
    }

    /// Proper rewrite rules have a non-variable left side and no variables
    /// on the right that are absent on the left.
    pub fn is_proper(&self) -> bool {
        !self.lhs.is_var() && self.rhs.vars().iter().all(|v| self.lhs.contains_var(*v))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

impl Serialize for Equation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
