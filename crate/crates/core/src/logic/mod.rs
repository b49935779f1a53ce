//! Abstract syntax for first-order formulas, quantitative second-order
//! sentences over Σ₂-2SAT bases, the single-variable Π₂ counting specs, and
//! restricted-Horn Π₁ formulas.
//!
//! The concrete syntax is documented in `docs/grammar.md`; every AST prints
//! back into text that parses to the same AST.

mod normal;
mod parse;
mod print;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::Vocabulary;

pub use normal::{normalize_qso, rh_to_qso, NormalTerm, SumNormalForm};
pub use parse::{
    parse_fo, parse_formula, parse_pi2, parse_qso, parse_qso_sentence, parse_rh, FormulaKind,
    ParsedFormula,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown relation symbol `{0}`")]
    UnknownRelation(String),
    #[error("`{name}` expects {expected} argument(s), got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("clause shape violation: {0}")]
    ClauseShape(String),
    #[error("free variable(s) in sentence position: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))]
    FreeVariables(Vec<FreeVar>),
    #[error("binder `{0}` shadows a variable or symbol already in scope")]
    Shadowed(String),
    #[error("formula is outside the sum-of-terms fragment: {0}")]
    NotNormalizable(String),
    #[error("restricted-Horn shape violation: {0}")]
    RestrictedHorn(String),
    #[error("malformed single-variable spec: {0}")]
    Pi2Shape(String),
}

/// First-order formulas. `And`, `Implies` and `Forall` are sugar removed by
/// [`FoFormula::lower`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FoFormula {
    Eq(String, String),
    Atom(String, Vec<String>),
    Not(Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Exists(String, Box<FoFormula>),
    Top,
    Bottom,
    And(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    Forall(String, Box<FoFormula>),
}

impl FoFormula {
    pub fn atom(rel: &str, vars: &[&str]) -> Self {
        FoFormula::Atom(rel.to_string(), vars.iter().map(|v| v.to_string()).collect())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FoFormula) -> Self {
        FoFormula::Not(Box::new(f))
    }

    pub fn or(a: FoFormula, b: FoFormula) -> Self {
        FoFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: FoFormula, b: FoFormula) -> Self {
        FoFormula::And(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, f: FoFormula) -> Self {
        FoFormula::Exists(x.to_string(), Box::new(f))
    }

    pub fn forall(x: &str, f: FoFormula) -> Self {
        FoFormula::Forall(x.to_string(), Box::new(f))
    }

    /// Disjunction of all formulas, left-nested; ⊥ when empty.
    pub fn disjoin(parts: impl IntoIterator<Item = FoFormula>) -> Self {
        parts
            .into_iter()
            .reduce(FoFormula::or)
            .unwrap_or(FoFormula::Bottom)
    }

    /// Rewrites the sugar constructors into ¬, ∨, ∃.
    pub fn lower(&self) -> FoFormula {
        use FoFormula::*;
        match self {
            Eq(..) | Atom(..) | Top | Bottom => self.clone(),
            Not(f) => Not(Box::new(f.lower())),
            Or(a, b) => Or(Box::new(a.lower()), Box::new(b.lower())),
            Exists(x, f) => Exists(x.clone(), Box::new(f.lower())),
            And(a, b) => Not(Box::new(Or(
                Box::new(Not(Box::new(a.lower()))),
                Box::new(Not(Box::new(b.lower()))),
            ))),
            Implies(a, b) => Or(Box::new(Not(Box::new(a.lower()))), Box::new(b.lower())),
            Forall(x, f) => Not(Box::new(Exists(
                x.clone(),
                Box::new(Not(Box::new(f.lower()))),
            ))),
        }
    }

    pub fn is_core(&self) -> bool {
        use FoFormula::*;
        match self {
            Eq(..) | Atom(..) | Top | Bottom => true,
            Not(f) | Exists(_, f) => f.is_core(),
            Or(a, b) => a.is_core() && b.is_core(),
            And(..) | Implies(..) | Forall(..) => false,
        }
    }

    /// Free first-order variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        use FoFormula::*;
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            Eq(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Atom(_, vs) => vs.iter().for_each(|v| note(v, bound)),
            Top | Bottom => {}
            Not(f) => f.collect_free(bound, out),
            Or(a, b) | And(a, b) | Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Exists(x, f) | Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// All variable names, bound or free.
    pub(crate) fn all_vars(&self, out: &mut BTreeSet<String>) {
        use FoFormula::*;
        match self {
            Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Atom(_, vs) => out.extend(vs.iter().cloned()),
            Top | Bottom => {}
            Not(f) => f.all_vars(out),
            Or(a, b) | And(a, b) | Implies(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Exists(x, f) | Forall(x, f) => {
                out.insert(x.clone());
                f.all_vars(out);
            }
        }
    }

    pub(crate) fn relations(&self, out: &mut BTreeSet<String>) {
        use FoFormula::*;
        match self {
            Atom(r, _) => {
                out.insert(r.clone());
            }
            Eq(..) | Top | Bottom => {}
            Not(f) | Exists(_, f) | Forall(_, f) => f.relations(out),
            Or(a, b) | And(a, b) | Implies(a, b) => {
                a.relations(out);
                b.relations(out);
            }
        }
    }

    /// Checks atoms against the vocabulary and rejects quantifiers that
    /// rebind a name in `scope`.
    pub(crate) fn check(&self, vocab: &Vocabulary, scope: &mut Vec<String>) -> Result<(), LogicError> {
        use FoFormula::*;
        match self {
            Atom(r, vs) => match vocab.arity(r) {
                None => Err(LogicError::UnknownRelation(r.clone())),
                Some(a) if a != vs.len() => Err(LogicError::ArityMismatch {
                    name: r.clone(),
                    expected: a,
                    got: vs.len(),
                }),
                Some(_) => Ok(()),
            },
            Eq(..) | Top | Bottom => Ok(()),
            Not(f) => f.check(vocab, scope),
            Or(a, b) | And(a, b) | Implies(a, b) => {
                a.check(vocab, scope)?;
                b.check(vocab, scope)
            }
            Exists(x, f) | Forall(x, f) => {
                if scope.contains(x) {
                    return Err(LogicError::Shadowed(x.clone()));
                }
                scope.push(x.clone());
                let r = f.check(vocab, scope);
                scope.pop();
                r
            }
        }
    }
}

/// `X(x̄)` or `¬X(x̄)` for a second-order variable `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SoLiteral {
    pub positive: bool,
    pub var: String,
    pub args: Vec<String>,
}

impl SoLiteral {
    pub fn pos(var: &str, args: &[&str]) -> Self {
        SoLiteral {
            positive: true,
            var: var.to_string(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }

    pub fn neg(var: &str, args: &[&str]) -> Self {
        SoLiteral {
            positive: false,
            ..Self::pos(var, args)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClausePart {
    So(SoLiteral),
    Fo(FoFormula),
}

/// A three-part disjunction with at most two second-order literals and at
/// least one first-order part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoSatClause {
    parts: [ClausePart; 3],
}

impl TwoSatClause {
    pub fn new(parts: [ClausePart; 3]) -> Result<Self, LogicError> {
        let so = parts.iter().filter(|p| matches!(p, ClausePart::So(_))).count();
        if so > 2 {
            return Err(LogicError::ClauseShape(format!(
                "{so} second-order literals (at most 2 allowed)"
            )));
        }
        Ok(TwoSatClause { parts })
    }

    /// Builds a clause from up to three entries, padding with ⊥.
    pub fn from_parts(parts: Vec<ClausePart>) -> Result<Self, LogicError> {
        if parts.is_empty() || parts.len() > 3 {
            return Err(LogicError::ClauseShape(format!(
                "{} entries (1 to 3 allowed)",
                parts.len()
            )));
        }
        let mut it = parts.into_iter();
        let mut next = || it.next().unwrap_or(ClausePart::Fo(FoFormula::Bottom));
        let (a, b, c) = (next(), next(), next());
        Self::new([a, b, c])
    }

    pub fn parts(&self) -> &[ClausePart; 3] {
        &self.parts
    }

    pub fn so_literals(&self) -> impl Iterator<Item = &SoLiteral> {
        self.parts.iter().filter_map(|p| match p {
            ClausePart::So(l) => Some(l),
            ClausePart::Fo(_) => None,
        })
    }

    pub fn fo_parts(&self) -> impl Iterator<Item = &FoFormula> {
        self.parts.iter().filter_map(|p| match p {
            ClausePart::Fo(f) => Some(f),
            ClausePart::So(_) => None,
        })
    }

    /// Free first-order variables of the clause.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.parts {
            let vs = match p {
                ClausePart::So(l) => l.args.clone(),
                ClausePart::Fo(f) => f.free_vars(),
            };
            for v in vs {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

/// `∃x̄ ∀ȳ ⋀ⱼ Cⱼ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sigma2TwoSat {
    pub exists_vars: Vec<String>,
    pub forall_vars: Vec<String>,
    pub clauses: Vec<TwoSatClause>,
}

/// Quantitative sentences built from Σ₂-2SAT bases by `+`, constants and
/// first/second-order sums.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QsoFormula {
    Base(Sigma2TwoSat),
    Const(u64),
    Plus(Box<QsoFormula>, Box<QsoFormula>),
    SumFo(String, Box<QsoFormula>),
    SumSo(String, usize, Box<QsoFormula>),
}

impl QsoFormula {
    pub fn plus(a: QsoFormula, b: QsoFormula) -> Self {
        QsoFormula::Plus(Box::new(a), Box::new(b))
    }

    pub fn sum_fo(x: &str, body: QsoFormula) -> Self {
        QsoFormula::SumFo(x.to_string(), Box::new(body))
    }

    pub fn sum_so(var: &str, arity: usize, body: QsoFormula) -> Self {
        QsoFormula::SumSo(var.to_string(), arity, Box::new(body))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FreeVar {
    Fo(String),
    So(String),
}

impl std::fmt::Display for FreeVar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FreeVar::Fo(x) => write!(f, "{x}"),
            FreeVar::So(x) => write!(f, "{x} (second-order)"),
        }
    }
}

/// Reports the free variables of a QSO formula; `Ok(())` for a sentence.
pub fn check_sentence(alpha: &QsoFormula) -> Result<(), Vec<FreeVar>> {
    let mut free = Vec::new();
    collect_qso_free(alpha, &mut Vec::new(), &mut Vec::new(), &mut free);
    if free.is_empty() {
        Ok(())
    } else {
        Err(free)
    }
}

fn collect_qso_free(
    alpha: &QsoFormula,
    fo: &mut Vec<String>,
    so: &mut Vec<String>,
    free: &mut Vec<FreeVar>,
) {
    match alpha {
        QsoFormula::Const(_) => {}
        QsoFormula::Plus(a, b) => {
            collect_qso_free(a, fo, so, free);
            collect_qso_free(b, fo, so, free);
        }
        QsoFormula::SumFo(x, body) => {
            fo.push(x.clone());
            collect_qso_free(body, fo, so, free);
            fo.pop();
        }
        QsoFormula::SumSo(x, _, body) => {
            so.push(x.clone());
            collect_qso_free(body, fo, so, free);
            so.pop();
        }
        QsoFormula::Base(base) => {
            let depth = fo.len();
            fo.extend(base.exists_vars.iter().cloned());
            fo.extend(base.forall_vars.iter().cloned());
            let mut note = |v: FreeVar| {
                if !free.contains(&v) {
                    free.push(v);
                }
            };
            for clause in &base.clauses {
                for v in clause.free_vars() {
                    if !fo.contains(&v) {
                        note(FreeVar::Fo(v));
                    }
                }
                for lit in clause.so_literals() {
                    if !so.contains(&lit.var) {
                        note(FreeVar::So(lit.var.clone()));
                    }
                }
            }
            fo.truncate(depth);
        }
    }
}

/// Scope bookkeeping shared by the parser and the programmatic validators.
#[derive(Debug, Default)]
pub(crate) struct Scope {
    pub fo: Vec<String>,
    pub so: Vec<(String, usize)>,
}

impl Scope {
    pub fn bind_fo(&mut self, x: &str) -> Result<(), LogicError> {
        if self.fo.iter().any(|v| v == x) {
            return Err(LogicError::Shadowed(x.to_string()));
        }
        self.fo.push(x.to_string());
        Ok(())
    }

    pub fn bind_so(&mut self, x: &str, arity: usize, vocab: &Vocabulary) -> Result<(), LogicError> {
        if self.so.iter().any(|(v, _)| v == x) || vocab.index_of(x).is_some() {
            return Err(LogicError::Shadowed(x.to_string()));
        }
        self.so.push((x.to_string(), arity));
        Ok(())
    }

    pub fn so_arity(&self, x: &str) -> Option<usize> {
        self.so.iter().rev().find(|(v, _)| v == x).map(|(_, a)| *a)
    }
}

/// Validates scoping, arities and clause shapes of a QSO formula against a
/// vocabulary. Free variables are permitted here; see [`check_sentence`].
pub fn validate_qso(alpha: &QsoFormula, vocab: &Vocabulary) -> Result<(), LogicError> {
    validate_qso_in(alpha, vocab, &mut Scope::default())
}

fn validate_qso_in(alpha: &QsoFormula, vocab: &Vocabulary, scope: &mut Scope) -> Result<(), LogicError> {
    match alpha {
        QsoFormula::Const(_) => Ok(()),
        QsoFormula::Plus(a, b) => {
            validate_qso_in(a, vocab, scope)?;
            validate_qso_in(b, vocab, scope)
        }
        QsoFormula::SumFo(x, body) => {
            scope.bind_fo(x)?;
            let r = validate_qso_in(body, vocab, scope);
            scope.fo.pop();
            r
        }
        QsoFormula::SumSo(x, arity, body) => {
            if *arity == 0 {
                return Err(LogicError::ArityMismatch {
                    name: x.clone(),
                    expected: 1,
                    got: 0,
                });
            }
            scope.bind_so(x, *arity, vocab)?;
            let r = validate_qso_in(body, vocab, scope);
            scope.so.pop();
            r
        }
        QsoFormula::Base(base) => validate_base(base, vocab, scope),
    }
}

pub(crate) fn validate_base(
    base: &Sigma2TwoSat,
    vocab: &Vocabulary,
    scope: &mut Scope,
) -> Result<(), LogicError> {
    let depth = scope.fo.len();
    let result = (|| {
        for x in base.exists_vars.iter().chain(&base.forall_vars) {
            scope.bind_fo(x)?;
        }
        for clause in &base.clauses {
            // Re-run the shape check for ASTs built without `TwoSatClause::new`.
            TwoSatClause::new(clause.parts.clone())?;
            for part in clause.parts() {
                match part {
                    ClausePart::Fo(f) => f.check(vocab, &mut scope.fo)?,
                    ClausePart::So(lit) => {
                        if let Some(a) = scope.so_arity(&lit.var) {
                            if a != lit.args.len() {
                                return Err(LogicError::ArityMismatch {
                                    name: lit.var.clone(),
                                    expected: a,
                                    got: lit.args.len(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    scope.fo.truncate(depth);
    result
}

/// `∀ȳ ∃z̄ (φ(ȳ,z̄) ∧ X(z̄))` with a single positive second-order variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pi2Spec {
    pub so_var: String,
    pub arity: usize,
    pub forall_vars: Vec<String>,
    pub exists_vars: Vec<String>,
    pub fo_part: FoFormula,
}

impl Pi2Spec {
    /// Checks shape, scoping and arities.
    pub fn validate(&self, vocab: &Vocabulary) -> Result<(), LogicError> {
        if self.arity == 0 {
            return Err(LogicError::Pi2Shape("arity must be at least 1".into()));
        }
        if self.exists_vars.len() != self.arity {
            return Err(LogicError::Pi2Shape(format!(
                "{} existential variables for a variable of arity {}",
                self.exists_vars.len(),
                self.arity
            )));
        }
        if vocab.index_of(&self.so_var).is_some() {
            return Err(LogicError::Shadowed(self.so_var.clone()));
        }
        let mut scope = Scope::default();
        for x in self.forall_vars.iter().chain(&self.exists_vars) {
            scope.bind_fo(x)?;
        }
        self.fo_part.check(vocab, &mut scope.fo)?;
        let free: Vec<FreeVar> = self
            .fo_part
            .free_vars()
            .into_iter()
            .filter(|v| !scope.fo.contains(v))
            .map(FreeVar::Fo)
            .collect();
        if !free.is_empty() {
            return Err(LogicError::FreeVariables(free));
        }
        Ok(())
    }
}

/// One clause of a restricted-Horn CNF.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RhClause {
    pub fo_literals: Vec<FoFormula>,
    pub pos_so: Option<SoLiteral>,
    pub neg_so: Option<SoLiteral>,
}

impl RhClause {
    /// Sorts entries into the restricted-Horn slots, rejecting a second
    /// positive or second negative second-order literal.
    pub fn from_parts(parts: Vec<ClausePart>) -> Result<Self, LogicError> {
        let mut clause = RhClause {
            fo_literals: Vec::new(),
            pos_so: None,
            neg_so: None,
        };
        for part in parts {
            match part {
                ClausePart::Fo(f) => clause.fo_literals.push(f),
                ClausePart::So(lit) => {
                    let slot = if lit.positive {
                        &mut clause.pos_so
                    } else {
                        &mut clause.neg_so
                    };
                    if slot.is_some() {
                        return Err(LogicError::RestrictedHorn(format!(
                            "more than one {} second-order literal in a clause",
                            if lit.positive { "unnegated" } else { "negated" }
                        )));
                    }
                    *slot = Some(lit);
                }
            }
        }
        Ok(clause)
    }
}

/// `|{⟨X̄, x̄⟩ : A ⊨ ∀ȳ ψ}|` for a restricted-Horn CNF `ψ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RhPi1Formula {
    pub so_vars: Vec<(String, usize)>,
    pub count_vars: Vec<String>,
    pub forall_vars: Vec<String>,
    pub clauses: Vec<RhClause>,
}

impl RhPi1Formula {
    pub fn validate(&self, vocab: &Vocabulary) -> Result<(), LogicError> {
        let mut scope = Scope::default();
        for (x, a) in &self.so_vars {
            if *a == 0 {
                return Err(LogicError::ArityMismatch {
                    name: x.clone(),
                    expected: 1,
                    got: 0,
                });
            }
            scope.bind_so(x, *a, vocab)?;
        }
        for x in self.count_vars.iter().chain(&self.forall_vars) {
            scope.bind_fo(x)?;
        }
        let mut free = Vec::new();
        for clause in &self.clauses {
            if clause.pos_so.as_ref().is_some_and(|l| !l.positive)
                || clause.neg_so.as_ref().is_some_and(|l| l.positive)
            {
                return Err(LogicError::RestrictedHorn(
                    "literal polarity does not match its slot".into(),
                ));
            }
            for f in &clause.fo_literals {
                f.check(vocab, &mut scope.fo)?;
                for v in f.free_vars() {
                    if !scope.fo.contains(&v) {
                        free.push(FreeVar::Fo(v));
                    }
                }
            }
            for lit in clause.pos_so.iter().chain(&clause.neg_so) {
                match scope.so_arity(&lit.var) {
                    None => free.push(FreeVar::So(lit.var.clone())),
                    Some(a) if a != lit.args.len() => {
                        return Err(LogicError::ArityMismatch {
                            name: lit.var.clone(),
                            expected: a,
                            got: lit.args.len(),
                        })
                    }
                    Some(_) => {}
                }
                for v in &lit.args {
                    if !scope.fo.contains(v) {
                        free.push(FreeVar::Fo(v.clone()));
                    }
                }
            }
        }
        if !free.is_empty() {
            free.dedup();
            return Err(LogicError::FreeVariables(free));
        }
        Ok(())
    }
}
