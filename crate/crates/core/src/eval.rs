//! Brute-force reference semantics: first-order model checking, quantitative
//! evaluation by full enumeration, and single-variable Π₂ counting.
//!
//! Nothing here is clever on purpose; every reduction in the crate is tested
//! against these functions.

use thiserror::Error;

use crate::logic::{check_sentence, ClausePart, FoFormula, FreeVar, Pi2Spec, QsoFormula};
use crate::model::{tuple_space, FoAssignment, SoAssignment, Structure};

/// Exact counts. Every enumeration bound keeps values far below `u128::MAX`;
/// additions are still checked.
pub type Count = u128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("empty universe")]
    EmptyUniverse,
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("`{name}` expects {expected} argument(s), got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("second-order exponent {exponent} exceeds budget {limit}")]
    SoBudget { exponent: u64, limit: u32 },
    #[error("first-order expansion {size} exceeds budget {limit}")]
    FoBudget { size: u128, limit: u64 },
    #[error("not a sentence; free: {0:?}")]
    NotSentence(Vec<FreeVar>),
    #[error("count overflow")]
    Overflow,
}

/// Guards the `2^(|A|^arity)` enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget {
    /// Largest total `Σ |A|^arity` over the second-order binders on any path.
    pub max_so_exponent: u32,
    /// Largest number of first-order tuples enumerated for one base formula.
    pub max_fo_expansion: u64,
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget {
            max_so_exponent: 24,
            max_fo_expansion: 1 << 24,
        }
    }
}

impl EvalBudget {
    pub fn with_so_exponent(max_so_exponent: u32) -> Self {
        EvalBudget {
            max_so_exponent,
            ..Self::default()
        }
    }

    fn check_so(&self, exponent: u64) -> Result<(), EvalError> {
        // Subsets are enumerated with a u64 counter.
        if exponent > u64::from(self.max_so_exponent) || exponent > 63 {
            return Err(EvalError::SoBudget {
                exponent,
                limit: self.max_so_exponent,
            });
        }
        Ok(())
    }

    pub(crate) fn check_fo(&self, n: usize, vars: usize) -> Result<(), EvalError> {
        let size = (0..vars).try_fold(1u128, |acc, _| acc.checked_mul(n as u128));
        match size {
            Some(s) if s <= u128::from(self.max_fo_expansion) => Ok(()),
            Some(s) => Err(EvalError::FoBudget {
                size: s,
                limit: self.max_fo_expansion,
            }),
            None => Err(EvalError::FoBudget {
                size: u128::MAX,
                limit: self.max_fo_expansion,
            }),
        }
    }
}

// ---- compiled first-order formulas ----

/// A first-order formula with variables resolved to environment slots and
/// relations to structure indices.
#[derive(Debug, Clone)]
pub(crate) enum CFo {
    Eq(usize, usize),
    Atom(usize, Vec<usize>),
    Not(Box<CFo>),
    Or(Box<CFo>, Box<CFo>),
    Exists(usize, Box<CFo>),
    Const(bool),
}

/// Name resolution: innermost binding wins.
#[derive(Debug, Default, Clone)]
pub(crate) struct Env {
    names: Vec<String>,
}

impl Env {
    pub fn push(&mut self, name: &str) -> usize {
        self.names.push(name.to_string());
        self.names.len() - 1
    }

    pub fn lookup(&self, name: &str) -> Result<usize, EvalError> {
        self.names
            .iter()
            .rposition(|n| n == name)
            .ok_or_else(|| EvalError::UnboundVariable(name.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn truncate(&mut self, len: usize) {
        self.names.truncate(len);
    }
}

/// Compiles a formula (after lowering sugar). Slots grow monotonically so the
/// environment vector length is `max_slots`.
pub(crate) fn compile_fo(
    a: &Structure,
    phi: &FoFormula,
    env: &mut Env,
    max_slots: &mut usize,
) -> Result<CFo, EvalError> {
    let lowered = phi.lower();
    compile_core(a, &lowered, env, max_slots)
}

fn compile_core(
    a: &Structure,
    phi: &FoFormula,
    env: &mut Env,
    max_slots: &mut usize,
) -> Result<CFo, EvalError> {
    *max_slots = (*max_slots).max(env.len());
    Ok(match phi {
        FoFormula::Top => CFo::Const(true),
        FoFormula::Bottom => CFo::Const(false),
        FoFormula::Eq(x, y) => CFo::Eq(env.lookup(x)?, env.lookup(y)?),
        FoFormula::Atom(r, vs) => {
            let idx = a
                .vocabulary()
                .index_of(r)
                .ok_or_else(|| EvalError::UnknownRelation(r.clone()))?;
            let arity = a.vocabulary().symbols()[idx].1;
            if arity != vs.len() {
                return Err(EvalError::ArityMismatch {
                    name: r.clone(),
                    expected: arity,
                    got: vs.len(),
                });
            }
            CFo::Atom(
                idx,
                vs.iter().map(|v| env.lookup(v)).collect::<Result<_, _>>()?,
            )
        }
        FoFormula::Not(f) => CFo::Not(Box::new(compile_core(a, f, env, max_slots)?)),
        FoFormula::Or(l, r) => CFo::Or(
            Box::new(compile_core(a, l, env, max_slots)?),
            Box::new(compile_core(a, r, env, max_slots)?),
        ),
        FoFormula::Exists(x, f) => {
            let depth = env.len();
            let slot = env.push(x);
            *max_slots = (*max_slots).max(env.len());
            let body = compile_core(a, f, env, max_slots)?;
            env.truncate(depth);
            CFo::Exists(slot, Box::new(body))
        }
        other => unreachable!("sugar survived lowering: {other:?}"),
    })
}

#[inline]
fn rank(n: usize, env: &[usize], slots: &[usize]) -> usize {
    slots.iter().fold(0, |acc, &s| acc * n + env[s])
}

impl CFo {
    pub fn eval(&self, a: &Structure, env: &mut [usize]) -> bool {
        match self {
            CFo::Const(b) => *b,
            CFo::Eq(x, y) => env[*x] == env[*y],
            CFo::Atom(r, slots) => {
                let n = a.universe_size();
                a.holds_rank(*r, rank(n, env, slots))
            }
            CFo::Not(f) => !f.eval(a, env),
            CFo::Or(l, r) => l.eval(a, env) || r.eval(a, env),
            CFo::Exists(slot, f) => {
                let saved = env[*slot];
                let mut found = false;
                for e in 0..a.universe_size() {
                    env[*slot] = e;
                    if f.eval(a, env) {
                        found = true;
                        break;
                    }
                }
                env[*slot] = saved;
                found
            }
        }
    }
}

/// Calls `pred` for every assignment of `slots` over the universe until it
/// returns `true`; reports whether it did.
pub(crate) fn exists_assignment(
    n: usize,
    env: &mut [usize],
    slots: &[usize],
    pred: &mut dyn FnMut(&mut [usize]) -> bool,
) -> bool {
    match slots.split_first() {
        None => pred(env),
        Some((&first, rest)) => {
            for e in 0..n {
                env[first] = e;
                if exists_assignment(n, env, rest, pred) {
                    return true;
                }
            }
            false
        }
    }
}

fn bind_fo_assignment(env: &mut Env, values: &mut Vec<usize>, v: &FoAssignment) {
    let mut bindings: Vec<(&str, usize)> = v.iter().collect();
    bindings.sort();
    for (name, e) in bindings {
        env.push(name);
        values.push(e);
    }
}

/// Truth of `phi` in `a` under `v`.
pub fn fo_eval(a: &Structure, phi: &FoFormula, v: &FoAssignment) -> Result<bool, EvalError> {
    if a.universe_size() == 0 {
        return Err(EvalError::EmptyUniverse);
    }
    v.validate(a.universe_size())
        .map_err(|e| EvalError::UnboundVariable(e.to_string()))?;
    let mut env = Env::default();
    let mut values = Vec::new();
    bind_fo_assignment(&mut env, &mut values, v);
    let mut max_slots = env.len();
    let c = compile_fo(a, phi, &mut env, &mut max_slots)?;
    values.resize(max_slots, 0);
    Ok(c.eval(a, &mut values))
}

// ---- quantitative evaluation ----

#[derive(Debug)]
enum CPart {
    Fo(CFo),
    So {
        positive: bool,
        var: usize,
        args: Vec<usize>,
    },
}

#[derive(Debug)]
struct CClause {
    parts: [CPart; 3],
    /// Universal slots the clause mentions; the others are vacuous because
    /// the universe is nonempty.
    forall: Vec<usize>,
}

#[derive(Debug)]
enum CQso {
    Base {
        exists: Vec<usize>,
        clauses: Vec<CClause>,
    },
    Const(Count),
    Plus(Box<CQso>, Box<CQso>),
    SumFo(usize, Box<CQso>),
    SumSo {
        slot: usize,
        width: u64,
        body: Box<CQso>,
    },
}

struct QsoCompiler<'a> {
    a: &'a Structure,
    budget: EvalBudget,
    fo: Env,
    max_fo: usize,
    so: Vec<(String, usize)>,
    max_so: usize,
}

impl QsoCompiler<'_> {
    fn so_lookup(&self, name: &str) -> Result<(usize, usize), EvalError> {
        self.so
            .iter()
            .rposition(|(n, _)| n == name)
            .map(|i| (i, self.so[i].1))
            .ok_or_else(|| EvalError::UnboundVariable(name.to_string()))
    }

    fn compile(&mut self, alpha: &QsoFormula, so_exponent: u64, fo_depth: usize) -> Result<CQso, EvalError> {
        let n = self.a.universe_size();
        Ok(match alpha {
            QsoFormula::Const(s) => CQso::Const(Count::from(*s)),
            QsoFormula::Plus(l, r) => CQso::Plus(
                Box::new(self.compile(l, so_exponent, fo_depth)?),
                Box::new(self.compile(r, so_exponent, fo_depth)?),
            ),
            QsoFormula::SumFo(x, body) => {
                let depth = self.fo.len();
                let slot = self.fo.push(x);
                self.max_fo = self.max_fo.max(self.fo.len());
                let b = self.compile(body, so_exponent, fo_depth + 1)?;
                self.fo.truncate(depth);
                CQso::SumFo(slot, Box::new(b))
            }
            QsoFormula::SumSo(x, k, body) => {
                let width = tuple_space(n, *k).map(|w| w as u64).unwrap_or(u64::MAX);
                let exponent = so_exponent.saturating_add(width);
                self.budget.check_so(exponent)?;
                self.so.push((x.clone(), *k));
                self.max_so = self.max_so.max(self.so.len());
                let slot = self.so.len() - 1;
                let b = self.compile(body, exponent, fo_depth)?;
                self.so.pop();
                CQso::SumSo {
                    slot,
                    width,
                    body: Box::new(b),
                }
            }
            QsoFormula::Base(base) => {
                self.budget
                    .check_fo(n, fo_depth + base.exists_vars.len() + base.forall_vars.len())?;
                let depth = self.fo.len();
                let exists: Vec<usize> = base.exists_vars.iter().map(|x| self.fo.push(x)).collect();
                let forall: Vec<usize> = base.forall_vars.iter().map(|x| self.fo.push(x)).collect();
                self.max_fo = self.max_fo.max(self.fo.len());
                let mut clauses = Vec::with_capacity(base.clauses.len());
                for clause in &base.clauses {
                    let mut mentioned = Vec::new();
                    for x in clause.free_vars() {
                        let slot = self.fo.lookup(&x)?;
                        if forall.contains(&slot) && !mentioned.contains(&slot) {
                            mentioned.push(slot);
                        }
                    }
                    mentioned.sort_unstable();
                    let mut parts = Vec::with_capacity(3);
                    for part in clause.parts() {
                        parts.push(match part {
                            ClausePart::Fo(f) => {
                                CPart::Fo(compile_fo(self.a, f, &mut self.fo, &mut self.max_fo)?)
                            }
                            ClausePart::So(lit) => {
                                let (var, arity) = self.so_lookup(&lit.var)?;
                                if arity != lit.args.len() {
                                    return Err(EvalError::ArityMismatch {
                                        name: lit.var.clone(),
                                        expected: arity,
                                        got: lit.args.len(),
                                    });
                                }
                                CPart::So {
                                    positive: lit.positive,
                                    var,
                                    args: lit
                                        .args
                                        .iter()
                                        .map(|v| self.fo.lookup(v))
                                        .collect::<Result<_, _>>()?,
                                }
                            }
                        });
                    }
                    let [p0, p1, p2]: [CPart; 3] = parts.try_into().expect("three parts");
                    clauses.push(CClause {
                        parts: [p0, p1, p2],
                        forall: mentioned,
                    });
                }
                self.fo.truncate(depth);
                CQso::Base { exists, clauses }
            }
        })
    }
}

struct QsoState<'a> {
    a: &'a Structure,
    fo: Vec<usize>,
    so: Vec<Vec<u64>>,
}

impl QsoState<'_> {
    fn so_holds(&self, var: usize, env: &[usize], args: &[usize]) -> bool {
        let r = rank(self.a.universe_size(), env, args);
        self.so[var].get(r / 64).is_some_and(|w| (w >> (r % 64)) & 1 == 1)
    }

    fn clause_holds(&self, clause: &CClause, env: &mut [usize]) -> bool {
        clause.parts.iter().any(|p| match p {
            CPart::Fo(f) => f.eval(self.a, env),
            CPart::So {
                positive,
                var,
                args,
            } => self.so_holds(*var, env, args) == *positive,
        })
    }

    fn eval(&mut self, q: &CQso) -> Option<Count> {
        match q {
            CQso::Const(s) => Some(*s),
            CQso::Plus(l, r) => self.eval(l)?.checked_add(self.eval(r)?),
            CQso::SumFo(slot, body) => {
                let mut total: Count = 0;
                for e in 0..self.a.universe_size() {
                    self.fo[*slot] = e;
                    total = total.checked_add(self.eval(body)?)?;
                }
                Some(total)
            }
            CQso::SumSo { slot, width, body } => {
                let mut total: Count = 0;
                let saved = std::mem::replace(&mut self.so[*slot], vec![0]);
                for mask in 0..(1u64 << width) {
                    self.so[*slot][0] = mask;
                    total = total.checked_add(self.eval(body)?)?;
                }
                self.so[*slot] = saved;
                Some(total)
            }
            CQso::Base { exists, clauses } => {
                let n = self.a.universe_size();
                let mut env = std::mem::take(&mut self.fo);
                let state = &*self;
                let sat = exists_assignment(n, &mut env, exists, &mut |env| {
                    clauses.iter().all(|c| {
                        !exists_assignment(n, env, &c.forall, &mut |env| !state.clause_holds(c, env))
                    })
                });
                self.fo = env;
                Some(Count::from(sat))
            }
        }
    }
}

/// Evaluates a possibly open formula under the given assignments. Bound
/// variables shadow same-named entries of `v` and `so`.
pub fn qso_eval_under(
    a: &Structure,
    alpha: &QsoFormula,
    v: &FoAssignment,
    so: &SoAssignment,
    budget: &EvalBudget,
) -> Result<Count, EvalError> {
    let n = a.universe_size();
    if n == 0 {
        return Err(EvalError::EmptyUniverse);
    }
    v.validate(n)
        .map_err(|e| EvalError::UnboundVariable(e.to_string()))?;
    so.validate(n)
        .map_err(|e| EvalError::UnboundVariable(e.to_string()))?;

    let mut fo_env = Env::default();
    let mut fo_values = Vec::new();
    bind_fo_assignment(&mut fo_env, &mut fo_values, v);

    let mut so_bindings: Vec<(&str, usize, _)> = so.iter().collect();
    so_bindings.sort_by(|x, y| x.0.cmp(y.0));
    let mut so_names = Vec::new();
    let mut so_values = Vec::new();
    for (name, arity, tuples) in so_bindings {
        let width = tuple_space(n, arity).ok_or(EvalError::Overflow)?;
        let mut bits = vec![0u64; width.div_ceil(64).max(1)];
        for t in tuples {
            let r = crate::model::tuple_rank(n, t);
            bits[r / 64] |= 1 << (r % 64);
        }
        so_names.push((name.to_string(), arity));
        so_values.push(bits);
    }

    let mut compiler = QsoCompiler {
        a,
        budget: *budget,
        max_fo: fo_env.len(),
        fo: fo_env,
        max_so: so_names.len(),
        so: so_names,
    };
    let compiled = compiler.compile(alpha, 0, 0)?;
    fo_values.resize(compiler.max_fo, 0);
    so_values.resize(compiler.max_so, vec![0]);
    let mut state = QsoState {
        a,
        fo: fo_values,
        so: so_values,
    };
    state.eval(&compiled).ok_or(EvalError::Overflow)
}

/// Value of a quantitative sentence on `a`.
pub fn qso_eval(a: &Structure, alpha: &QsoFormula, budget: &EvalBudget) -> Result<Count, EvalError> {
    check_sentence(alpha).map_err(EvalError::NotSentence)?;
    qso_eval_under(a, alpha, &FoAssignment::new(), &SoAssignment::new(), budget)
}

/// `|{X : A ⊨ ∀ȳ ∃z̄ (φ(ȳ,z̄) ∧ X(z̄))}|` by enumerating every `X`.
pub fn pi2_count(a: &Structure, spec: &Pi2Spec, budget: &EvalBudget) -> Result<Count, EvalError> {
    let n = a.universe_size();
    if n == 0 {
        return Err(EvalError::EmptyUniverse);
    }
    let width = tuple_space(n, spec.arity).map(|w| w as u64).unwrap_or(u64::MAX);
    budget.check_so(width)?;
    budget.check_fo(n, spec.forall_vars.len() + spec.exists_vars.len())?;

    let mut env = Env::default();
    let ys: Vec<usize> = spec.forall_vars.iter().map(|y| env.push(y)).collect();
    let zs: Vec<usize> = spec.exists_vars.iter().map(|z| env.push(z)).collect();
    let mut max_slots = env.len();
    let phi = compile_fo(a, &spec.fo_part, &mut env, &mut max_slots)?;
    let mut values = vec![0usize; max_slots];

    let mut count: Count = 0;
    for mask in 0..(1u64 << width) {
        let holds = !exists_assignment(n, &mut values, &ys, &mut |env| {
            !exists_assignment(n, env, &zs, &mut |env| {
                (mask >> rank(n, env, &zs)) & 1 == 1 && phi.eval(a, env)
            })
        });
        count += Count::from(holds);
    }
    Ok(count)
}
