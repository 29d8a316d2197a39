//! Reading and writing the unit-equational subset of TPTP CNF, and
//! exporting oriented rule sets in the TRS format read by termination and
//! confluence tools.
//!
//! Accepted input is `cnf(name, role, literal[, annotations]).` where the
//! literal is `s = t`, `s != t` or `~ (s = t)`. Variables are uppercase
//! identifiers and are renamed `x, y, z, ...` per clause in order of first
//! occurrence. The magma operation may be written either `mul(s, t)` or
//! infix `s * t`; both denote the symbol `*`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::equation::{Equation, Rule};
use crate::ordering::{Comparison, OrderingConfig};
use crate::term::{Signature, Symbol, Term, TermError, Var, MUL};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TptpError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: clause `{name}` is not a unit clause")]
    NonUnit { line: usize, name: String },
    #[error("line {line}: clause `{name}` uses predicate `{predicate}`; only equality is supported")]
    NonEquational {
        line: usize,
        name: String,
        predicate: String,
    },
    #[error("line {line}: disequation in `{name}` is not ground")]
    NonGroundDisequation { line: usize, name: String },
    #[error("line {line}: {what} is not supported; clausify to unit cnf externally")]
    Unsupported { line: usize, what: String },
    #[error("line {line}: {source}")]
    Signature { line: usize, source: TermError },
}

impl TptpError {
    /// True for errors about the logical fragment rather than the syntax.
    pub fn is_fragment_violation(&self) -> bool {
        matches!(
            self,
            TptpError::NonUnit { .. }
                | TptpError::NonEquational { .. }
                | TptpError::NonGroundDisequation { .. }
                | TptpError::Unsupported { .. }
        )
    }
}

/// A unit-equational problem: universally quantified axioms and ground
/// disequations (the negated, Skolemized conjecture).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Problem {
    pub signature: Signature,
    pub axioms: Vec<Equation>,
    /// Each entry `s = t` stands for the literal `s != t`.
    pub disequations: Vec<Equation>,
}

impl Problem {
    /// Infers the signature from occurrences, axioms first.
    pub fn new(axioms: Vec<Equation>, disequations: Vec<Equation>) -> Result<Problem, TermError> {
        let mut signature = Signature::new();
        for e in axioms.iter().chain(&disequations) {
            signature.add_term(&e.lhs)?;
            signature.add_term(&e.rhs)?;
        }
        Ok(Problem {
            signature,
            axioms,
            disequations,
        })
    }
}

/// Equations dumped by a prover at saturation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SaturationDump {
    pub signature: Signature,
    pub equations: Vec<Equation>,
    /// `Some(true)` when the source marked the equation as oriented
    /// left to right.
    pub orientation_hints: Vec<Option<bool>>,
    /// Disequations found in the dump. They play no part in the model.
    pub ignored_disequations: Vec<Equation>,
    /// Lines that were not part of any `cnf` statement (prover chatter).
    pub skipped_lines: usize,
}

impl SaturationDump {
    pub fn from_equations(equations: Vec<Equation>) -> Result<SaturationDump, TermError> {
        let mut signature = Signature::new();
        for e in &equations {
            signature.add_term(&e.lhs)?;
            signature.add_term(&e.rhs)?;
        }
        Ok(SaturationDump {
            signature,
            orientation_hints: vec![None; equations.len()],
            equations,
            ..SaturationDump::default()
        })
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.equations.iter().map(Equation::as_rule).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Dollar(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Neq,
    Tilde,
    Pipe,
    Star,
    Other(char),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, TptpError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            advance(&mut i, &mut line, &mut col, '/');
            advance(&mut i, &mut line, &mut col, '*');
            loop {
                if i >= chars.len() {
                    return Err(syntax(l0, c0, "unterminated comment"));
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    advance(&mut i, &mut line, &mut col, '*');
                    advance(&mut i, &mut line, &mut col, '/');
                    break;
                }
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            continue;
        }
        let tok = if c.is_alphanumeric() || c == '_' || c == '$' {
            let mut word = String::new();
            word.push(c);
            advance(&mut i, &mut line, &mut col, c);
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                word.push(chars[i]);
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            if c == '$' {
                Tok::Dollar(word)
            } else if c.is_uppercase() || c == '_' {
                Tok::Upper(word)
            } else {
                Tok::Lower(word)
            }
        } else if c == '\'' {
            let mut word = String::new();
            advance(&mut i, &mut line, &mut col, c);
            loop {
                match chars.get(i) {
                    None => return Err(syntax(l0, c0, "unterminated quoted name")),
                    Some('\'') => {
                        advance(&mut i, &mut line, &mut col, '\'');
                        break;
                    }
                    Some('\\') if i + 1 < chars.len() => {
                        advance(&mut i, &mut line, &mut col, '\\');
                        word.push(chars[i]);
                        let ch = chars[i];
                        advance(&mut i, &mut line, &mut col, ch);
                    }
                    Some(&ch) => {
                        word.push(ch);
                        advance(&mut i, &mut line, &mut col, ch);
                    }
                }
            }
            if word.is_empty() {
                return Err(syntax(l0, c0, "empty quoted name"));
            }
            Tok::Lower(word)
        } else {
            advance(&mut i, &mut line, &mut col, c);
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '=' => Tok::Eq,
                '|' => Tok::Pipe,
                '*' => Tok::Star,
                '~' => Tok::Tilde,
                '!' if chars.get(i) == Some(&'=') => {
                    advance(&mut i, &mut line, &mut col, '=');
                    Tok::Neq
                }
                other => Tok::Other(other),
            }
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
    }
    Ok(out)
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> TptpError {
    TptpError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// A parsed literal before classification.
struct Literal {
    positive: bool,
    lhs: Term,
    rhs: Term,
}

struct Clause {
    name: String,
    role: String,
    line: usize,
    literal: Literal,
    oriented: bool,
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    /// uppercase name to variable, per clause
    vars: HashMap<String, Var>,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Spanned]) -> Parser<'a> {
        Parser {
            toks,
            pos: 0,
            vars: HashMap::new(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(s) => (s.line, s.column),
            None => (1, 1),
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, TptpError> {
        let (line, column) = self.here();
        Err(syntax(line, column, message))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), TptpError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn clause(&mut self) -> Result<Clause, TptpError> {
        let (line, _) = self.here();
        match self.next() {
            Some(Tok::Lower(w)) if w == "cnf" => {}
            Some(Tok::Lower(w)) if ["fof", "tff", "thf", "tcf"].contains(&w.as_str()) => {
                return Err(TptpError::Unsupported {
                    line,
                    what: format!("`{w}` input"),
                })
            }
            Some(Tok::Lower(w)) if w == "include" => {
                return Err(TptpError::Unsupported {
                    line,
                    what: "`include`".into(),
                })
            }
            _ => {
                self.pos -= 1;
                return self.error("expected `cnf(`");
            }
        }
        self.expect(Tok::LParen, "`(`")?;
        let name = match self.next() {
            Some(Tok::Lower(w)) | Some(Tok::Upper(w)) => w,
            _ => {
                self.pos -= 1;
                return self.error("expected clause name");
            }
        };
        self.expect(Tok::Comma, "`,`")?;
        let role = match self.next() {
            Some(Tok::Lower(w)) => w,
            _ => {
                self.pos -= 1;
                return self.error("expected clause role");
            }
        };
        self.expect(Tok::Comma, "`,`")?;
        self.vars.clear();
        let mut literals = self.disjunction(&name, line)?;
        let mut oriented = false;
        if self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            oriented = self.skip_annotations()?;
        }
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Dot, "`.`")?;
        if literals.len() != 1 {
            return Err(TptpError::NonUnit { line, name });
        }
        Ok(Clause {
            name,
            role,
            line,
            literal: literals.pop().expect("one literal"),
            oriented,
        })
    }

    /// Skips annotation terms up to the closing parenthesis of the clause.
    /// Returns whether the word `oriented` appears among them.
    fn skip_annotations(&mut self) -> Result<bool, TptpError> {
        let mut depth = 0usize;
        let mut oriented = false;
        loop {
            match self.peek() {
                None => return self.error("unterminated annotations"),
                Some(Tok::RParen) if depth == 0 => return Ok(oriented),
                Some(Tok::LParen) => depth += 1,
                Some(Tok::RParen) => depth -= 1,
                Some(Tok::Lower(w)) if w == "oriented" => oriented = true,
                _ => {}
            }
            self.pos += 1;
        }
    }

    fn disjunction(&mut self, name: &str, line: usize) -> Result<Vec<Literal>, TptpError> {
        let mut lits = self.literal_or_group(name, line)?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            lits.extend(self.literal_or_group(name, line)?);
        }
        Ok(lits)
    }

    fn literal_or_group(&mut self, name: &str, line: usize) -> Result<Vec<Literal>, TptpError> {
        if self.peek() == Some(&Tok::LParen) {
            // either a parenthesised disjunction or a parenthesised term
            let save = self.pos;
            let saved_vars = self.vars.clone();
            self.pos += 1;
            if let Ok(lits) = self.disjunction(name, line) {
                if self.peek() == Some(&Tok::RParen) {
                    self.pos += 1;
                    if !matches!(self.peek(), Some(Tok::Eq | Tok::Neq | Tok::Star)) {
                        return Ok(lits);
                    }
                }
            }
            self.pos = save;
            self.vars = saved_vars;
        }
        self.literal(name, line).map(|l| vec![l])
    }

    fn literal(&mut self, name: &str, line: usize) -> Result<Literal, TptpError> {
        if self.peek() == Some(&Tok::Tilde) {
            self.pos += 1;
            let mut lits = self.literal_or_group(name, line)?;
            if lits.len() != 1 {
                return self.error("negation of a disjunction");
            }
            let mut lit = lits.pop().expect("one literal");
            lit.positive = !lit.positive;
            return Ok(lit);
        }
        if let Some(Tok::Dollar(w)) = self.peek() {
            let w = w.clone();
            return Err(TptpError::NonEquational {
                line,
                name: name.to_string(),
                predicate: w,
            });
        }
        let lhs = self.term()?;
        let positive = match self.peek() {
            Some(Tok::Eq) => true,
            Some(Tok::Neq) => false,
            _ => {
                let predicate = lhs.head().map_or_else(|| lhs.to_string(), |h| h.name().to_string());
                return Err(TptpError::NonEquational {
                    line,
                    name: name.to_string(),
                    predicate,
                });
            }
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(Literal { positive, lhs, rhs })
    }

    fn term(&mut self) -> Result<Term, TptpError> {
        let mut t = self.primary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let r = self.primary()?;
            t = Term::mul(t, r);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term, TptpError> {
        match self.next() {
            Some(Tok::Upper(name)) => {
                let next = self.vars.len() as u32;
                Ok(Term::Var(*self.vars.entry(name).or_insert(Var(next))))
            }
            Some(Tok::Lower(name)) => {
                let mut args = Vec::new();
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    loop {
                        args.push(self.term()?);
                        match self.next() {
                            Some(Tok::Comma) => continue,
                            Some(Tok::RParen) => break,
                            _ => {
                                self.pos -= 1;
                                return self.error("expected `,` or `)` in argument list");
                            }
                        }
                    }
                }
                let name = if name == "mul" && args.len() == 2 {
                    MUL.to_string()
                } else {
                    name
                };
                Ok(Term::app(Symbol::new(name, args.len()), args))
            }
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Dollar(w)) => {
                self.pos -= 1;
                self.error(format!("unsupported defined term `{w}`"))
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.error("expected a term")
            }
        }
    }
}

fn parse_clauses(text: &str) -> Result<Vec<Clause>, TptpError> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks);
    let mut out = Vec::new();
    while !p.at_end() {
        out.push(p.clause()?);
    }
    Ok(out)
}

fn add_to_signature(sig: &mut Signature, e: &Equation, line: usize) -> Result<(), TptpError> {
    for t in [&e.lhs, &e.rhs] {
        sig.add_term(t)
            .map_err(|source| TptpError::Signature { line, source })?;
    }
    Ok(())
}

/// Parses a problem. Positive literals become axioms, negative ones ground
/// disequations.
pub fn parse_problem(text: &str) -> Result<Problem, TptpError> {
    let mut problem = Problem::default();
    for clause in parse_clauses(text)? {
        if clause.role == "conjecture" {
            return Err(TptpError::Unsupported {
                line: clause.line,
                what: format!("role `conjecture` in cnf clause `{}` (negate it)", clause.name),
            });
        }
        let lit = clause.literal;
        let eq = Equation::new(lit.lhs, lit.rhs);
        add_to_signature(&mut problem.signature, &eq, clause.line)?;
        if lit.positive {
            problem.axioms.push(eq);
        } else if eq.is_ground() {
            problem.disequations.push(eq);
        } else {
            return Err(TptpError::NonGroundDisequation {
                line: clause.line,
                name: clause.name,
            });
        }
    }
    Ok(problem)
}

/// Blanks out every line that is not part of a `cnf` statement, keeping
/// line numbers intact. Returns the filtered text and the skipped count.
fn filter_chatter(text: &str) -> (String, usize) {
    let mut out = String::with_capacity(text.len());
    let mut skipped = 0;
    let mut in_statement = false;
    let mut depth: i64 = 0;
    for line in text.lines() {
        let trimmed = line.trim_start();
        let starts = trimmed.starts_with("cnf(") || trimmed.starts_with("cnf (");
        if in_statement || starts {
            in_statement = true;
            out.push_str(line);
            let mut quoted = false;
            for c in line.chars() {
                match c {
                    '\'' => quoted = !quoted,
                    '(' if !quoted => depth += 1,
                    ')' if !quoted => depth -= 1,
                    '%' if !quoted => break,
                    _ => {}
                }
            }
            if depth <= 0 && line.trim_end().ends_with('.') {
                in_statement = false;
                depth = 0;
            }
        } else if !(trimmed.is_empty() || trimmed.starts_with('%')) {
            skipped += 1;
        }
        out.push('\n');
    }
    (out, skipped)
}

/// Parses a prover's saturation dump. Lines outside `cnf` statements are
/// skipped and counted; disequations are kept aside as ignorable.
pub fn parse_saturation(text: &str) -> Result<SaturationDump, TptpError> {
    let (filtered, skipped_lines) = filter_chatter(text);
    let mut dump = SaturationDump {
        skipped_lines,
        ..SaturationDump::default()
    };
    for clause in parse_clauses(&filtered)? {
        let lit = clause.literal;
        let eq = Equation::new(lit.lhs, lit.rhs);
        add_to_signature(&mut dump.signature, &eq, clause.line)?;
        if lit.positive {
            dump.equations.push(eq);
            dump.orientation_hints.push(clause.oriented.then_some(true));
        } else {
            dump.ignored_disequations.push(eq);
        }
    }
    Ok(dump)
}

/// Parses a single term in input syntax (uppercase variables).
pub fn parse_term(text: &str) -> Result<Term, TptpError> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks);
    let t = p.term()?;
    if !p.at_end() {
        return p.error("unexpected input after term");
    }
    Ok(t)
}

/// Parses `s = t` in input syntax.
pub fn parse_equation(text: &str) -> Result<Equation, TptpError> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks);
    let lhs = p.term()?;
    p.expect(Tok::Eq, "`=`")?;
    let rhs = p.term()?;
    if !p.at_end() {
        return p.error("unexpected input after equation");
    }
    Ok(Equation::new(lhs, rhs))
}

fn is_lower_word(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn tptp_var(v: Var) -> String {
    v.name().to_uppercase()
}

/// Renders a term in TPTP syntax: uppercase variables, `mul` for `*`.
pub fn term_to_tptp(t: &Term) -> String {
    let mut out = String::new();
    write_tptp_term(&mut out, t);
    out
}

fn write_tptp_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) => out.push_str(&tptp_var(*v)),
        Term::App(app) => {
            let sym = app.symbol();
            if sym.name() == MUL && sym.arity() == 2 {
                out.push_str("mul");
            } else if is_lower_word(sym.name()) {
                out.push_str(sym.name());
            } else {
                out.push('\'');
                out.push_str(&sym.name().replace('\\', "\\\\").replace('\'', "\\'"));
                out.push('\'');
            }
            if !app.args().is_empty() {
                out.push('(');
                for (i, a) in app.args().iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_tptp_term(out, a);
                }
                out.push(')');
            }
        }
    }
}

/// Writes a problem as TPTP CNF, one clause per line.
pub fn write_problem(p: &Problem) -> String {
    let mut out = String::new();
    for (i, e) in p.axioms.iter().enumerate() {
        let _ = writeln!(
            out,
            "cnf(ax{}, axiom, {} = {}).",
            i + 1,
            term_to_tptp(&e.lhs),
            term_to_tptp(&e.rhs)
        );
    }
    for (i, e) in p.disequations.iter().enumerate() {
        let _ = writeln!(
            out,
            "cnf(goal{}, negated_conjecture, {} != {}).",
            i + 1,
            term_to_tptp(&e.lhs),
            term_to_tptp(&e.rhs)
        );
    }
    out
}

/// Writes equations as a saturation dump; `oriented[i]` adds the
/// `oriented` annotation to equation `i`.
pub fn write_saturation(equations: &[Equation], oriented: &[bool]) -> String {
    let mut out = String::new();
    for (i, e) in equations.iter().enumerate() {
        let ann = if oriented.get(i).copied().unwrap_or(false) {
            ", oriented"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "cnf(e{}, plain, {} = {}{ann}).",
            i + 1,
            term_to_tptp(&e.lhs),
            term_to_tptp(&e.rhs)
        );
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrsError {
    #[error(
        "rule {index} `{rule}` is not oriented by {ordering}; check pre-orderedness or search for an orientation first"
    )]
    Unoriented {
        index: usize,
        rule: String,
        ordering: String,
    },
    #[error("rule {index} `{rule}` is not a rewrite rule (variable left side or extra variables on the right); orient the system first")]
    Improper { index: usize, rule: String },
}

fn is_trs_identifier(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Writes oriented rules in the TRS format: a `(VAR ...)` block, then a
/// `(RULES ...)` block with one `l -> r` per line.
///
/// If `certificate` is given, every rule must be strictly decreasing under
/// it; without one the orientation is trusted but rules must still be
/// proper. Symbols that are not plain identifiers are renamed (`*`
/// becomes `m`) and the alias table is recorded in a leading comment.
pub fn write_trs(rules: &[Rule], certificate: Option<&OrderingConfig>) -> Result<String, TrsError> {
    for (index, r) in rules.iter().enumerate() {
        if !r.is_proper() {
            return Err(TrsError::Improper {
                index,
                rule: r.to_string(),
            });
        }
        if let Some(cfg) = certificate {
            if !matches!(cfg.compare(&r.lhs, &r.rhs), Ok(Comparison::Greater)) {
                return Err(TrsError::Unoriented {
                    index,
                    rule: r.to_string(),
                    ordering: cfg.to_string(),
                });
            }
        }
    }

    let mut vars = BTreeSet::new();
    let mut symbols: Vec<Symbol> = Vec::new();
    for r in rules {
        for t in [&r.lhs, &r.rhs] {
            for (_, sub) in t.subterm_positions() {
                match sub {
                    Term::Var(v) => {
                        vars.insert(*v);
                    }
                    Term::App(app) => {
                        if !symbols.contains(app.symbol()) {
                            symbols.push(app.symbol().clone());
                        }
                    }
                }
            }
        }
    }
    let var_names: BTreeSet<String> = vars.iter().map(|v| v.name()).collect();
    let mut taken: BTreeSet<String> = symbols
        .iter()
        .map(|s| s.name().to_string())
        .filter(|n| is_trs_identifier(n))
        .chain(var_names.iter().cloned())
        .collect();
    let mut alias: HashMap<String, String> = HashMap::new();
    let mut alias_table = Vec::new();
    for s in &symbols {
        let name = s.name();
        if is_trs_identifier(name) && !var_names.contains(name) {
            continue;
        }
        let base = if name == MUL {
            "m".to_string()
        } else if is_trs_identifier(name) {
            format!("{name}_")
        } else {
            "op".to_string()
        };
        let fresh = std::iter::once(base.clone())
            .chain((1..).map(|i| format!("{base}{i}")))
            .find(|n| !taken.contains(n))
            .expect("unbounded names");
        taken.insert(fresh.clone());
        alias_table.push(format!("{fresh} = {name}"));
        alias.insert(name.to_string(), fresh);
    }

    fn render(t: &Term, alias: &HashMap<String, String>, out: &mut String) {
        match t {
            Term::Var(v) => out.push_str(&v.name()),
            Term::App(app) => {
                let name = app.symbol().name();
                out.push_str(alias.get(name).map_or(name, String::as_str));
                if !app.args().is_empty() {
                    out.push('(');
                    for (i, a) in app.args().iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        render(a, alias, out);
                    }
                    out.push(')');
                }
            }
        }
    }

    let mut out = String::new();
    if !alias_table.is_empty() {
        let _ = writeln!(out, "(COMMENT aliases: {})", alias_table.join(", "));
    }
    out.push_str("(VAR");
    for v in &vars {
        out.push(' ');
        out.push_str(&v.name());
    }
    out.push_str(")\n(RULES\n");
    for r in rules {
        out.push_str("  ");
        render(&r.lhs, &alias, &mut out);
        out.push_str(" -> ");
        render(&r.rhs, &alias, &mut out);
        out.push('\n');
    }
    out.push_str(")\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::{OrderingConfig, Precedence};
    use crate::term::tests::{c, f, x, y};

    const P118: &str = "\
% 118 does not imply 274
cnf(ax, axiom, X = mul(Y, mul(mul(X,Y),Y))).
cnf(goal, negated_conjecture, a != mul(mul(mul(b,a),b),b)).
";

    #[test]
    fn parses_the_118_problem() {
        let p = parse_problem(P118).unwrap();
        assert_eq!(p.axioms.len(), 1);
        assert_eq!(p.axioms[0].to_string(), "x = y*((x*y)*y)");
        assert_eq!(p.disequations.len(), 1);
        assert_eq!(p.disequations[0].to_string(), "a = ((b*a)*b)*b");
        let names: Vec<&str> = p.signature.symbols().iter().map(Symbol::name).collect();
        assert_eq!(names, ["*", "a", "b"]);
    }

    #[test]
    fn empty_and_comment_only_inputs() {
        assert_eq!(parse_problem("").unwrap(), Problem::default());
        assert_eq!(parse_problem("% nothing\n/* block */\n").unwrap(), Problem::default());
    }

    #[test]
    fn rejects_outside_the_fragment() {
        assert!(matches!(
            parse_problem("cnf(c, axiom, p(X))."),
            Err(TptpError::NonEquational { .. })
        ));
        assert!(matches!(
            parse_problem("cnf(c, axiom, a = b | b = c)."),
            Err(TptpError::NonUnit { .. })
        ));
        assert!(matches!(
            parse_problem("cnf(c, negated_conjecture, X != a)."),
            Err(TptpError::NonGroundDisequation { .. })
        ));
        assert!(matches!(
            parse_problem("fof(c, axiom, ![X]: X = X)."),
            Err(TptpError::Unsupported { .. })
        ));
        assert!(matches!(
            parse_problem("cnf(c, axiom, $false)."),
            Err(TptpError::NonEquational { .. })
        ));
        assert!(matches!(
            parse_problem("cnf(c, axiom, f(a) = f(a,b))."),
            Err(TptpError::Signature { .. })
        ));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_problem("cnf(c, axiom,\n  a = ).").unwrap_err();
        match err {
            TptpError::Syntax { line, column, .. } => assert_eq!((line, column), (2, 7)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn alternative_literal_syntax() {
        let p = parse_problem(
            "cnf(a1, axiom, (X * Y) * Z = X * (Y * Z)).\n\
             cnf(g, negated_conjecture, ~ (a * b = b * a)).\n\
             cnf(g2, negated_conjecture, (a != b)).",
        )
        .unwrap();
        assert_eq!(p.axioms[0].to_string(), "(x*y)*z = x*(y*z)");
        assert_eq!(p.disequations.len(), 2);
        assert_eq!(p.disequations[0].to_string(), "a*b = b*a");
    }

    #[test]
    fn saturation_dump_skips_chatter() {
        let text = "\
# SZS status Satisfiable
cnf(i_0_1, plain, f(X,Y) = f(Y,X)).
Saturation reached after 0 steps
cnf(i_0_2, plain, a != b).
cnf(i_0_3, plain,
    g(X) = X, oriented).
";
        let dump = parse_saturation(text).unwrap();
        assert_eq!(dump.equations.len(), 2);
        assert_eq!(dump.equations[0].to_string(), "f(x,y) = f(y,x)");
        assert_eq!(dump.orientation_hints, vec![None, Some(true)]);
        assert_eq!(dump.ignored_disequations.len(), 1);
        assert_eq!(dump.skipped_lines, 2);

        let only_diseq = parse_saturation("cnf(d, plain, a != b).").unwrap();
        assert!(only_diseq.equations.is_empty());
        assert_eq!(only_diseq.ignored_disequations.len(), 1);
    }

    #[test]
    fn writes_problems() {
        let p = parse_problem(P118).unwrap();
        let text = write_problem(&p);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(parse_problem(&text).unwrap(), p);
        assert_eq!(write_problem(&Problem::default()), "");
        assert_eq!(parse_problem("").unwrap(), Problem::default());

        let three = Problem::new(
            vec![
                Equation::new(Term::mul(x(), y()), Term::mul(y(), x())),
                Equation::new(f("g", vec![x()]), x()),
            ],
            vec![Equation::new(c("a"), c("b"))],
        )
        .unwrap();
        let text = write_problem(&three);
        assert_eq!(text.lines().count(), 3);
        assert_eq!(parse_problem(&text).unwrap(), three);
    }

    #[test]
    fn trs_export() {
        let r = Rule::new(f("f1", vec![y(), x()]), x());
        let out = write_trs(&[r], None).unwrap();
        assert_eq!(out, "(VAR x y)\n(RULES\n  f1(y,x) -> x\n)\n");

        assert_eq!(write_trs(&[], None).unwrap(), "(VAR)\n(RULES\n)\n");

        let r = Rule::new(Term::mul(c("b"), c("a")), c("f2"));
        let out = write_trs(std::slice::from_ref(&r), None).unwrap();
        assert!(out.contains("\n  m(b,a) -> f2\n"), "{out}");
        assert!(out.starts_with("(COMMENT aliases: m = *)\n"));

        let comm = Rule::new(f("f", vec![x(), y()]), f("f", vec![y(), x()]));
        let cfg = OrderingConfig::lpo(Precedence::from_greatest_first(["f"]).unwrap());
        assert!(matches!(
            write_trs(&[comm], Some(&cfg)),
            Err(TrsError::Unoriented { .. })
        ));
        assert!(matches!(
            write_trs(&[Rule::new(x(), f("g", vec![x()]))], None),
            Err(TrsError::Improper { .. })
        ));

        // a symbol literally named like a variable gets an alias
        let r = Rule::new(f("g", vec![c("x")]), c("x"));
        let out = write_trs(&[r], None).unwrap();
        assert!(out.contains("g(x) -> x"), "{out}");
        let r = Rule::new(f("g", vec![x(), c("x")]), x());
        let out = write_trs(&[r], None).unwrap();
        assert!(out.contains("x_ = x"), "{out}");
    }

    #[test]
    fn term_and_equation_syntax() {
        let t = parse_term("f(f(b,a),a)").unwrap();
        assert_eq!(t.to_string(), "f(f(b,a),a)");
        assert!(t.is_ground());
        let e = parse_equation("f(X,Y)=f(Y,X)").unwrap();
        assert_eq!(e.to_string(), "f(x,y) = f(y,x)");
        assert_eq!(parse_term("a*b*c").unwrap().to_string(), "(a*b)*c");
        assert!(parse_term("f(a,").is_err());
        assert_eq!(term_to_tptp(&parse_term("mul(X,'a b')").unwrap()), "mul(X,'a b')");
    }
}
