//! Grounding reductions from the logics to propositional counting, and the
//! encoders that go the other way.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::eval::{compile_fo, CFo, Env, EvalBudget, EvalError};
use crate::logic::{
    ClausePart, FoFormula, Pi2Spec, QsoFormula, Sigma2TwoSat, SoLiteral, SumNormalForm,
    TwoSatClause,
};
use crate::model::{all_tuples, tuple_rank, tuple_space, Structure, StructureBuilder};
use crate::propcount::{Disj2SatFormula, Lit, MonotoneCnf, PropError, TwoSatConjunct};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Prop(#[from] PropError),
    #[error("second-order variable `{0}` is not declared in the normal form")]
    UnknownSoVariable(String),
    #[error("reduction needs {0} propositional variables, more than a literal can address")]
    TooManyVariables(u64),
    #[error("cannot encode: {0}")]
    Encode(String),
}

/// Ground second-order atom `X(ā)` and its propositional variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomEntry {
    pub var: u32,
    pub so_var: String,
    pub tuple: Vec<usize>,
}

/// Selector for term `term` under first-order sum assignment `assignment`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectorEntry {
    pub var: u32,
    pub term: usize,
    pub assignment: Vec<usize>,
}

/// Variable numbering of a reduction output. Atoms come first, ordered by
/// second-order variable and then lexicographically by tuple; selectors last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomTable {
    pub atoms: Vec<AtomEntry>,
    pub selectors: Vec<SelectorEntry>,
}

impl AtomTable {
    pub fn num_vars(&self) -> u32 {
        (self.atoms.len() + self.selectors.len()) as u32
    }

    pub fn atom_var(&self, so_var: &str, tuple: &[usize]) -> Option<u32> {
        self.atoms
            .iter()
            .find(|e| e.so_var == so_var && e.tuple == tuple)
            .map(|e| e.var)
    }
}

struct AtomBlock {
    name: String,
    first: u64,
}

enum GroundPart {
    Fo(CFo),
    So {
        positive: bool,
        first: u64,
        args: Vec<usize>,
    },
}

struct GroundClause {
    parts: Vec<GroundPart>,
    /// Universally quantified slots the clause actually mentions.
    forall_slots: Vec<usize>,
}

fn slot_rank(n: usize, env: &[usize], slots: &[usize]) -> u64 {
    slots.iter().fold(0u64, |acc, &s| acc * n as u64 + env[s] as u64)
}

fn clause_slots(clause: &TwoSatClause, env: &Env) -> Result<BTreeSet<usize>, EvalError> {
    let mut out = BTreeSet::new();
    for p in clause.parts() {
        let names = match p {
            ClausePart::So(l) => l.args.clone(),
            ClausePart::Fo(f) => f.free_vars(),
        };
        for x in names {
            out.insert(env.lookup(&x)?);
        }
    }
    Ok(out)
}

fn canonical(mut lits: Vec<Lit>) -> Vec<Lit> {
    lits.sort_by_key(|&l| (l.unsigned_abs(), l > 0));
    lits.dedup();
    lits
}

/// Grounds a normal form over `a` into a disjunction of 2SAT conjuncts with
/// the same number of models as the formula's value.
///
/// One disjunct is emitted per term, sum assignment `ā` and existential
/// assignment `b̄`. Clauses containing a true first-order part are dropped and
/// false parts removed; a clause left with no literal is realized as
/// `s ∧ ¬s` on the group's selector `s`. Atoms that occur nowhere get a
/// tautology clause in every disjunct, and each disjunct pins the selectors
/// to its own group.
pub fn reduce_qso_to_d2s(
    nf: &SumNormalForm,
    a: &Structure,
    budget: &EvalBudget,
) -> Result<(Disj2SatFormula, AtomTable), ReductionError> {
    let n = a.universe_size();
    if n == 0 {
        return Err(EvalError::EmptyUniverse.into());
    }

    let mut blocks = Vec::with_capacity(nf.so_vars.len());
    let mut atoms = Vec::new();
    let mut next: u64 = 1;
    for (x, k) in &nf.so_vars {
        let width = tuple_space(n, *k).ok_or(EvalError::Overflow)? as u64;
        if next + width > i32::MAX as u64 {
            return Err(ReductionError::TooManyVariables(next + width));
        }
        blocks.push(AtomBlock {
            name: x.clone(),
            first: next,
        });
        for t in all_tuples(n, *k) {
            atoms.push(AtomEntry {
                var: next as u32,
                so_var: x.clone(),
                tuple: t,
            });
            next += 1;
        }
    }
    let num_atoms = next - 1;

    let mut groups: u64 = 0;
    for t in &nf.terms {
        budget.check_fo(
            n,
            t.fo_sum_vars.len() + t.exists_vars.len() + t.forall_vars.len(),
        )?;
        groups += tuple_space(n, t.fo_sum_vars.len()).ok_or(EvalError::Overflow)? as u64;
    }
    let total = num_atoms + groups;
    if total > i32::MAX as u64 {
        return Err(ReductionError::TooManyVariables(total));
    }

    let mut selectors = Vec::new();
    let mut ground: Vec<(u32, Vec<Vec<Lit>>)> = Vec::new();
    let mut used = vec![false; num_atoms as usize + 1];

    for (ti, term) in nf.terms.iter().enumerate() {
        let mut env = Env::default();
        let sums: Vec<usize> = term.fo_sum_vars.iter().map(|x| env.push(x)).collect();
        let exists: Vec<usize> = term.exists_vars.iter().map(|x| env.push(x)).collect();
        let forall_start = env.len();
        for x in &term.forall_vars {
            env.push(x);
        }
        let mut max_slots = env.len();

        let mut clauses = Vec::with_capacity(term.clauses.len());
        for clause in &term.clauses {
            let forall_slots = clause_slots(clause, &env)?
                .into_iter()
                .filter(|&s| s >= forall_start)
                .collect();
            let mut parts = Vec::with_capacity(3);
            for p in clause.parts() {
                parts.push(match p {
                    ClausePart::Fo(f) => GroundPart::Fo(compile_fo(a, f, &mut env, &mut max_slots)?),
                    ClausePart::So(lit) => {
                        let block = blocks
                            .iter()
                            .find(|b| b.name == lit.var)
                            .ok_or_else(|| ReductionError::UnknownSoVariable(lit.var.clone()))?;
                        let arity = nf
                            .so_vars
                            .iter()
                            .find(|(x, _)| *x == lit.var)
                            .map(|(_, k)| *k)
                            .unwrap_or(0);
                        if arity != lit.args.len() {
                            return Err(EvalError::ArityMismatch {
                                name: lit.var.clone(),
                                expected: arity,
                                got: lit.args.len(),
                            }
                            .into());
                        }
                        GroundPart::So {
                            positive: lit.positive,
                            first: block.first,
                            args: lit
                                .args
                                .iter()
                                .map(|x| env.lookup(x))
                                .collect::<Result<_, _>>()?,
                        }
                    }
                });
            }
            clauses.push(GroundClause {
                parts,
                forall_slots,
            });
        }

        let mut values = vec![0usize; max_slots];
        for sum_tuple in all_tuples(n, sums.len()) {
            for (&s, &e) in sums.iter().zip(&sum_tuple) {
                values[s] = e;
            }
            let selector = (num_atoms + 1 + selectors.len() as u64) as u32;
            selectors.push(SelectorEntry {
                var: selector,
                term: ti,
                assignment: sum_tuple,
            });
            for ex_tuple in all_tuples(n, exists.len()) {
                for (&s, &e) in exists.iter().zip(&ex_tuple) {
                    values[s] = e;
                }
                let mut out: Vec<Vec<Lit>> = Vec::new();
                let mut seen: HashSet<Vec<Lit>> = HashSet::new();
                for gc in &clauses {
                    for fa_tuple in all_tuples(n, gc.forall_slots.len()) {
                        for (&s, &e) in gc.forall_slots.iter().zip(&fa_tuple) {
                            values[s] = e;
                        }
                        let mut lits = Vec::with_capacity(2);
                        let mut satisfied = false;
                        for p in &gc.parts {
                            match p {
                                GroundPart::Fo(f) => {
                                    if f.eval(a, &mut values) {
                                        satisfied = true;
                                        break;
                                    }
                                }
                                GroundPart::So {
                                    positive,
                                    first,
                                    args,
                                } => {
                                    let var = (first + slot_rank(n, &values, args)) as Lit;
                                    lits.push(if *positive { var } else { -var });
                                }
                            }
                        }
                        if satisfied {
                            continue;
                        }
                        let sel = selector as Lit;
                        let emitted: Vec<Vec<Lit>> = if lits.is_empty() {
                            vec![vec![sel], vec![-sel]]
                        } else {
                            for &l in &lits {
                                used[l.unsigned_abs() as usize] = true;
                            }
                            vec![canonical(lits)]
                        };
                        for c in emitted {
                            if seen.insert(c.clone()) {
                                out.push(c);
                            }
                        }
                    }
                }
                ground.push((selector, out));
            }
        }
    }

    let tautologies: Vec<Vec<Lit>> = (1..=num_atoms as Lit)
        .filter(|&v| !used[v as usize])
        .map(|v| vec![-v, v])
        .collect();
    let first_selector = num_atoms as Lit + 1;
    let last_selector = total as Lit;
    let disjuncts = ground
        .into_iter()
        .map(|(sel, mut clauses)| {
            clauses.extend(tautologies.iter().cloned());
            for s in first_selector..=last_selector {
                clauses.push(vec![if s == sel as Lit { s } else { -s }]);
            }
            TwoSatConjunct::new(clauses)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let formula = Disj2SatFormula::new(total as u32, disjuncts)?;
    Ok((formula, AtomTable { atoms, selectors }))
}

/// Outcome of the product reduction: the formula has no satisfying relation,
/// or its count is `count(cnf) · 2^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductResult {
    Unsatisfiable,
    Reduced {
        cnf: MonotoneCnf,
        /// Tuples no clause mentions, free in every model.
        exponent: u64,
        /// Tuple of each CNF variable, in variable order.
        atoms: Vec<Vec<usize>>,
    },
}

/// Grounds `∀ȳ ∃z̄ (φ ∧ X(z̄))` to a monotone CNF: one clause per `ā`, holding
/// `X(b̄)` for each `b̄` with `φ(ā,b̄)` true.
pub fn reduce_pi2_to_monotone(
    spec: &Pi2Spec,
    a: &Structure,
    budget: &EvalBudget,
) -> Result<ProductResult, ReductionError> {
    let n = a.universe_size();
    if n == 0 {
        return Err(EvalError::EmptyUniverse.into());
    }
    budget.check_fo(n, spec.forall_vars.len() + spec.exists_vars.len())?;
    let space = tuple_space(n, spec.arity).ok_or(EvalError::Overflow)? as u64;
    if space > i32::MAX as u64 {
        return Err(ReductionError::TooManyVariables(space));
    }

    let mut env = Env::default();
    let ys: Vec<usize> = spec.forall_vars.iter().map(|y| env.push(y)).collect();
    let zs: Vec<usize> = spec.exists_vars.iter().map(|z| env.push(z)).collect();
    let mut max_slots = env.len();
    let phi = compile_fo(a, &spec.fo_part, &mut env, &mut max_slots)?;
    let mut values = vec![0usize; max_slots];

    let mut clauses: Vec<Vec<u64>> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for y_tuple in all_tuples(n, ys.len()) {
        for (&s, &e) in ys.iter().zip(&y_tuple) {
            values[s] = e;
        }
        let mut clause = Vec::new();
        for z_tuple in all_tuples(n, zs.len()) {
            for (&s, &e) in zs.iter().zip(&z_tuple) {
                values[s] = e;
            }
            if phi.eval(a, &mut values) {
                clause.push(tuple_rank(n, &z_tuple) as u64);
            }
        }
        if clause.is_empty() {
            return Ok(ProductResult::Unsatisfiable);
        }
        clause.sort_unstable();
        clause.dedup();
        if seen.insert(clause.clone()) {
            clauses.push(clause);
        }
    }

    let surviving: BTreeSet<u64> = clauses.iter().flatten().copied().collect();
    let index: BTreeMap<u64, u32> = surviving
        .iter()
        .enumerate()
        .map(|(i, &r)| (r, i as u32 + 1))
        .collect();
    let cnf = MonotoneCnf::new(
        surviving.len() as u32,
        clauses
            .iter()
            .map(|c| c.iter().map(|r| index[r]).collect())
            .collect(),
    )?;
    let atoms = surviving
        .iter()
        .map(|&r| crate::model::tuple_unrank(n, spec.arity, r as usize))
        .collect();
    Ok(ProductResult::Reduced {
        cnf,
        exponent: space - surviving.len() as u64,
        atoms,
    })
}

fn so(positive: bool, var: &str, args: &[&str]) -> ClausePart {
    ClausePart::So(if positive {
        SoLiteral::pos(var, args)
    } else {
        SoLiteral::neg(var, args)
    })
}

fn fo(f: FoFormula) -> ClausePart {
    ClausePart::Fo(f)
}

fn clause(parts: Vec<ClausePart>) -> TwoSatClause {
    TwoSatClause::from_parts(parts).expect("encoder clauses have at most two literals")
}

/// Encodes a disjunction of 2SAT conjuncts as a structure and a sentence
/// `ΣT.ψ(T)` whose value is the formula's model count.
///
/// Elements are the variables, then the clauses, then the disjuncts.
/// `C1..C4(c,x,y)` give the clause's sign pattern (`x∨y`, `¬x∨y`, `x∨¬y`,
/// `¬x∨¬y`), `D(d,c)` membership, and the unary `Var`, `Disj` mark element
/// kinds: `Var(x) ∨ ¬T(x)` keeps `T` inside the variables and `Disj(d)`
/// makes `d` a disjunct. A unit clause `l` is `l∨l`; the empty clause
/// carries both `C1(c,x,x)` and `C4(c,x,x)` for the first variable.
pub fn encode_d2s_as_qso(f: &Disj2SatFormula) -> Result<(Structure, QsoFormula), ReductionError> {
    let v = f.num_vars() as usize;
    if v == 0 {
        return Err(ReductionError::Encode(
            "the formula declares no variables".into(),
        ));
    }
    let num_clauses: usize = f.disjuncts().iter().map(|d| d.clauses().len()).sum();
    let mut b = StructureBuilder::new(v + num_clauses + f.disjuncts().len());
    for r in ["C1", "C2", "C3", "C4"] {
        b.relation(r, 3).map_err(|e| ReductionError::Encode(e.to_string()))?;
    }
    b.relation("D", 2).map_err(|e| ReductionError::Encode(e.to_string()))?;
    b.relation("Var", 1).map_err(|e| ReductionError::Encode(e.to_string()))?;
    b.relation("Disj", 1).map_err(|e| ReductionError::Encode(e.to_string()))?;

    let add = |b: &mut StructureBuilder, r: &str, t: &[usize]| {
        b.tuple(r, t).expect("encoder tuples are in range");
    };
    for x in 0..v {
        add(&mut b, "Var", &[x]);
    }
    let mut c = v;
    for (di, d) in f.disjuncts().iter().enumerate() {
        let delem = v + num_clauses + di;
        add(&mut b, "Disj", &[delem]);
        for cl in d.clauses() {
            add(&mut b, "D", &[delem, c]);
            let elem = |l: Lit| l.unsigned_abs() as usize - 1;
            match cl.as_slice() {
                [] => {
                    add(&mut b, "C1", &[c, 0, 0]);
                    add(&mut b, "C4", &[c, 0, 0]);
                }
                [l] => {
                    let r = if *l > 0 { "C1" } else { "C4" };
                    add(&mut b, r, &[c, elem(*l), elem(*l)]);
                }
                [x, y] => {
                    let r = match (*x > 0, *y > 0) {
                        (true, true) => "C1",
                        (false, true) => "C2",
                        (true, false) => "C3",
                        (false, false) => "C4",
                    };
                    add(&mut b, r, &[c, elem(*x), elem(*y)]);
                }
                _ => unreachable!("2SAT clauses have at most two literals"),
            }
            c += 1;
        }
    }

    let guard = |r: &str| {
        FoFormula::or(
            FoFormula::not(FoFormula::atom("D", &["d", "c"])),
            FoFormula::not(FoFormula::atom(r, &["c", "x", "y"])),
        )
    };
    let clauses = vec![
        clause(vec![fo(FoFormula::atom("Disj", &["d"]))]),
        clause(vec![
            fo(FoFormula::atom("Var", &["x"])),
            so(false, "T", &["x"]),
        ]),
        clause(vec![fo(guard("C1")), so(true, "T", &["x"]), so(true, "T", &["y"])]),
        clause(vec![fo(guard("C2")), so(false, "T", &["x"]), so(true, "T", &["y"])]),
        clause(vec![fo(guard("C3")), so(true, "T", &["x"]), so(false, "T", &["y"])]),
        clause(vec![fo(guard("C4")), so(false, "T", &["x"]), so(false, "T", &["y"])]),
    ];
    let psi = QsoFormula::sum_so(
        "T",
        1,
        QsoFormula::Base(Sigma2TwoSat {
            exists_vars: vec!["d".into()],
            forall_vars: vec!["c".into(), "x".into(), "y".into()],
            clauses,
        }),
    );
    Ok((b.build(), psi))
}

/// Encodes a monotone CNF over the clauses-then-variables universe with
/// `C(c,x)` (variable `x` occurs in clause `c`) and `IsClause`. Returns the
/// structure, the spec `∀c∃x ((¬IsClause(c) ∨ C(c,x)) ∧ T(x))`, and `m` with
/// `pi2_count = count · 2^m`.
pub fn encode_monotone_as_pi2(f: &MonotoneCnf) -> Result<(Structure, Pi2Spec, u32), ReductionError> {
    let m = f.clauses().len();
    if m == 0 {
        return Err(ReductionError::Encode(
            "a CNF without clauses has no exact correction factor".into(),
        ));
    }
    let mut b = StructureBuilder::new(m + f.num_vars() as usize);
    b.relation("C", 2).map_err(|e| ReductionError::Encode(e.to_string()))?;
    b.relation("IsClause", 1)
        .map_err(|e| ReductionError::Encode(e.to_string()))?;
    for (ci, c) in f.clauses().iter().enumerate() {
        b.tuple("IsClause", &[ci]).expect("in range");
        for &x in c {
            b.tuple("C", &[ci, m + x as usize - 1]).expect("in range");
        }
    }
    let spec = Pi2Spec {
        so_var: "T".into(),
        arity: 1,
        forall_vars: vec!["c".into()],
        exists_vars: vec!["x".into()],
        fo_part: FoFormula::or(
            FoFormula::not(FoFormula::atom("IsClause", &["c"])),
            FoFormula::atom("C", &["c", "x"]),
        ),
    };
    Ok((b.build(), spec, m as u32))
}

/// An undirected graph on vertices `0..vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, ReductionError> {
        if let Some(&(u, v)) = edges.iter().find(|(u, v)| *u >= vertices || *v >= vertices) {
            return Err(ReductionError::Encode(format!(
                "edge ({u},{v}) outside 0..{vertices}"
            )));
        }
        Ok(Graph { vertices, edges })
    }

    /// DIMACS `p edge n m` with 1-based `e u v` lines; `c` lines are comments.
    pub fn parse_dimacs(text: &str) -> Result<Self, ReductionError> {
        let bad = |line: usize, msg: &str| ReductionError::Encode(format!("line {line}: {msg}"));
        let mut header = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let words: Vec<&str> = raw.split_whitespace().collect();
            match words.as_slice() {
                [] | ["c", ..] => {}
                ["p", "edge", n, m] if header.is_none() => {
                    let n: usize = n.parse().map_err(|_| bad(i + 1, "bad vertex count"))?;
                    let m: usize = m.parse().map_err(|_| bad(i + 1, "bad edge count"))?;
                    header = Some((n, m));
                }
                ["e", u, v] if header.is_some() => {
                    let u: usize = u.parse().map_err(|_| bad(i + 1, "bad vertex"))?;
                    let v: usize = v.parse().map_err(|_| bad(i + 1, "bad vertex"))?;
                    if u == 0 || v == 0 {
                        return Err(bad(i + 1, "vertices are numbered from 1"));
                    }
                    edges.push((u - 1, v - 1));
                }
                _ => return Err(bad(i + 1, "expected `p edge n m` or `e u v`")),
            }
        }
        let (n, m) = header.ok_or_else(|| bad(0, "missing `p edge` header"))?;
        if edges.len() != m {
            return Err(bad(0, &format!("header declares {m} edge(s), found {}", edges.len())));
        }
        Graph::new(n, edges)
    }

    /// Number of vertex subsets touching every edge, by enumeration.
    pub fn count_vertex_covers(&self) -> u128 {
        assert!(self.vertices < 64, "enumeration limited to 63 vertices");
        (0u64..1 << self.vertices)
            .filter(|s| {
                self.edges
                    .iter()
                    .all(|&(u, v)| (s >> u) & 1 == 1 || (s >> v) & 1 == 1)
            })
            .count() as u128
    }
}

/// Encodes vertex-cover counting over the vertices-then-edges universe with
/// `E` (adjacency, both directions), `End(y,x)` (vertex `y` is an endpoint of
/// edge `x`) and `IsEdge`. Returns the structure, the spec
/// `∀x∃y ((¬IsEdge(x) ∨ End(y,x)) ∧ VC(y))`, and `|E|` with
/// `pi2_count = #VC · 2^|E|`.
pub fn encode_vc(g: &Graph) -> Result<(Structure, Pi2Spec, u32), ReductionError> {
    if g.edges.is_empty() {
        return Err(ReductionError::Encode(
            "an edgeless graph has no exact correction factor".into(),
        ));
    }
    let n = g.vertices;
    let mut b = StructureBuilder::new(n + g.edges.len());
    for (r, k) in [("E", 2), ("End", 2), ("IsEdge", 1)] {
        b.relation(r, k).map_err(|e| ReductionError::Encode(e.to_string()))?;
    }
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        let e = n + i;
        b.tuple("E", &[u, v]).expect("in range");
        b.tuple("E", &[v, u]).expect("in range");
        b.tuple("End", &[u, e]).expect("in range");
        b.tuple("End", &[v, e]).expect("in range");
        b.tuple("IsEdge", &[e]).expect("in range");
    }
    let spec = Pi2Spec {
        so_var: "VC".into(),
        arity: 1,
        forall_vars: vec!["x".into()],
        exists_vars: vec!["y".into()],
        fo_part: FoFormula::or(
            FoFormula::not(FoFormula::atom("IsEdge", &["x"])),
            FoFormula::atom("End", &["y", "x"]),
        ),
    };
    Ok((b.build(), spec, g.edges.len() as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{pi2_count, qso_eval};
    use crate::logic::{normalize_qso, parse_qso_sentence};
    use crate::propcount::{count_bruteforce, count_monotone_bruteforce};

    fn empty(n: usize) -> Structure {
        StructureBuilder::new(n).build()
    }

    fn reduce_count(src: &str, a: &Structure) -> (u128, u128, Disj2SatFormula) {
        let alpha = parse_qso_sentence(src, a.vocabulary()).unwrap();
        let b = EvalBudget::default();
        let nf = normalize_qso(&alpha).unwrap();
        let (f, _) = reduce_qso_to_d2s(&nf, a, &b).unwrap();
        (
            count_bruteforce(&f).unwrap().count,
            qso_eval(a, &alpha, &b).unwrap(),
            f,
        )
    }

    #[test]
    fn full_relation_example() {
        let a = empty(2);
        let (c, v, f) = reduce_count("sum X:1 . forall u . [ X(u) | bot | bot ]", &a);
        assert_eq!((c, v), (1, 1));
        assert_eq!(f.num_vars(), 3);
    }

    #[test]
    fn vacuous_clause_example() {
        let (c, v, f) = reduce_count("sum X:1 . [ top ]", &empty(2));
        assert_eq!((c, v), (4, 4));
        assert_eq!(
            f.disjuncts()[0].clauses(),
            &[vec![-1, 1], vec![-2, 2], vec![3]]
        );
    }

    #[test]
    fn falsum_uses_selector_pair() {
        let (c, v, f) = reduce_count("sum X:1 . sumfo x . [ bot ]", &empty(2));
        assert_eq!((c, v), (0, 0));
        assert_eq!(f.disjuncts().len(), 2);
        assert!(f.disjuncts()[0].clauses().contains(&vec![3]));
        assert!(f.disjuncts()[0].clauses().contains(&vec![-3]));
    }

    #[test]
    fn mixed_terms() {
        let a = crate::model::parse_structure(
            "structure\nuniverse 3\nrel E 2\n0 1\n1 2\nend\nend",
        )
        .unwrap();
        for src in [
            "2 + sum X:1 . forall u w . [ ~X(u) | ~X(w) | {~E(u,w)} ]",
            "sumfo x . sum Y:1 . exists z . forall u . [ Y(u) | ~Y(x) | {E(x,z)} ]",
            "sum X:2 . forall u w . [ ~X(u,w) | {E(u,w)} ] + sumfo x . [ {exists y . E(x,y)} ]",
        ] {
            let (c, v, _) = reduce_count(src, &a);
            assert_eq!(c, v, "{src}");
        }
    }

    #[test]
    fn product_examples() {
        let b = EvalBudget::default();
        let mono = MonotoneCnf::new(2, vec![vec![1, 2]]).unwrap();
        let (s, spec, m) = encode_monotone_as_pi2(&mono).unwrap();
        assert_eq!((m, pi2_count(&s, &spec, &b).unwrap()), (1, 6));
        match reduce_pi2_to_monotone(&spec, &s, &b).unwrap() {
            ProductResult::Reduced { cnf, exponent, .. } => {
                let c = count_monotone_bruteforce(&cnf).unwrap().count;
                assert_eq!(c << exponent, 6);
            }
            ProductResult::Unsatisfiable => panic!("satisfiable"),
        }
        let units = MonotoneCnf::new(2, vec![vec![1], vec![2]]).unwrap();
        let (s, spec, _) = encode_monotone_as_pi2(&units).unwrap();
        assert_eq!(pi2_count(&s, &spec, &b).unwrap(), 4);

        let bot = Pi2Spec {
            fo_part: FoFormula::Bottom,
            ..spec
        };
        assert_eq!(
            reduce_pi2_to_monotone(&bot, &s, &b).unwrap(),
            ProductResult::Unsatisfiable
        );
    }

    #[test]
    fn vertex_covers() {
        let b = EvalBudget::default();
        for (g, pi2, vc) in [
            (Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap(), 32, 4),
            (Graph::new(3, vec![(0, 1), (1, 2)]).unwrap(), 20, 5),
            (Graph::new(2, vec![(0, 1)]).unwrap(), 6, 3),
        ] {
            let (s, spec, e) = encode_vc(&g).unwrap();
            let p = pi2_count(&s, &spec, &b).unwrap();
            assert_eq!(p, pi2);
            assert_eq!(p >> e, vc);
            assert_eq!(g.count_vertex_covers(), vc);
            match reduce_pi2_to_monotone(&spec, &s, &b).unwrap() {
                ProductResult::Reduced { cnf, exponent, .. } => {
                    assert_eq!(count_monotone_bruteforce(&cnf).unwrap().count << exponent, pi2)
                }
                ProductResult::Unsatisfiable => panic!(),
            }
        }
        assert!(encode_vc(&Graph::new(2, vec![]).unwrap()).is_err());
        let g = Graph::parse_dimacs("c tri\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g.count_vertex_covers(), 4);
    }

    #[test]
    fn d2s_encoding() {
        let b = EvalBudget::default();
        let f = |v, ds: Vec<Vec<Vec<Lit>>>| {
            Disj2SatFormula::new(
                v,
                ds.into_iter().map(|d| TwoSatConjunct::new(d).unwrap()).collect(),
            )
            .unwrap()
        };
        let cases = [
            f(2, vec![vec![vec![1, 2]]]),
            f(2, vec![vec![]]),
            f(2, vec![vec![vec![1], vec![-1]]]),
            f(2, vec![vec![vec![]], vec![vec![-2, 1]]]),
            f(1, vec![]),
        ];
        for phi in cases {
            let (s, psi) = encode_d2s_as_qso(&phi).unwrap();
            assert_eq!(
                qso_eval(&s, &psi, &b).unwrap(),
                count_bruteforce(&phi).unwrap().count,
                "{phi:?}"
            );
        }
        assert!(encode_d2s_as_qso(&f(0, vec![])).is_err());
        let (s, _) = encode_d2s_as_qso(&f(2, vec![vec![vec![1, 2]]])).unwrap();
        assert_eq!(s.universe_size(), 4);
    }
}
