//! Propositional side: the `d2s` and DIMACS formats, polynomial 2SAT
//! decisions, and exact model counters.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::eval::Count;

/// Largest number of free variables the brute-force counter will enumerate.
pub const BRUTEFORCE_MAX_VARS: u32 = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("literal {lit} out of range for {num_vars} variable(s)")]
    LiteralOutOfRange { lit: i64, num_vars: u32 },
    #[error("clause with {0} literals; at most 2 allowed")]
    ClauseTooLong(usize),
    #[error("monotone clause contains negative literal {0}")]
    NegativeLiteral(i64),
    #[error("monotone clause is empty")]
    EmptyMonotoneClause,
    #[error("variable {var} is not free in a formula over {num_vars} variable(s)")]
    VariableNotFree { var: u32, num_vars: u32 },
    #[error("{free} free variables exceed the brute-force guard of {limit}")]
    TooManyVariables { free: u32, limit: u32 },
    #[error("restricted formula cannot be serialized")]
    Restricted,
}

/// A propositional literal: `v` or `-v` for variable `v ≥ 1`.
pub type Lit = i32;

#[inline]
fn var_of(l: Lit) -> u32 {
    l.unsigned_abs()
}

/// A conjunction of clauses with at most two literals each. An empty clause
/// is false; an empty conjunction is true.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TwoSatConjunct {
    clauses: Vec<Vec<Lit>>,
}

impl TwoSatConjunct {
    /// Literals are sorted by variable (negative first) and repeated
    /// literals merged, so `x ∨ x` is stored as the unit clause `x`.
    pub fn new(clauses: Vec<Vec<Lit>>) -> Result<Self, PropError> {
        let mut out = Vec::with_capacity(clauses.len());
        for mut c in clauses {
            if let Some(&bad) = c.iter().find(|&&l| l == 0) {
                return Err(PropError::LiteralOutOfRange {
                    lit: i64::from(bad),
                    num_vars: 0,
                });
            }
            c.sort_by_key(|&l| (var_of(l), l > 0));
            c.dedup();
            if c.len() > 2 {
                return Err(PropError::ClauseTooLong(c.len()));
            }
            out.push(c);
        }
        Ok(TwoSatConjunct { clauses: out })
    }

    pub fn tautology() -> Self {
        Self::default()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    fn max_var(&self) -> u32 {
        self.clauses
            .iter()
            .flatten()
            .map(|&l| var_of(l))
            .max()
            .unwrap_or(0)
    }
}

/// A disjunction of 2SAT conjuncts over the declared variables `1..=V`.
/// Restriction removes variables from the free set; counting ranges over free
/// variables only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Disj2SatFormula {
    num_vars: u32,
    disjuncts: Vec<TwoSatConjunct>,
    eliminated: BTreeSet<u32>,
}

impl Disj2SatFormula {
    pub fn new(num_vars: u32, disjuncts: Vec<TwoSatConjunct>) -> Result<Self, PropError> {
        for d in &disjuncts {
            if let Some(&l) = d.clauses.iter().flatten().find(|&&l| var_of(l) > num_vars) {
                return Err(PropError::LiteralOutOfRange {
                    lit: i64::from(l),
                    num_vars,
                });
            }
        }
        Ok(Disj2SatFormula {
            num_vars,
            disjuncts,
            eliminated: BTreeSet::new(),
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn disjuncts(&self) -> &[TwoSatConjunct] {
        &self.disjuncts
    }

    pub fn is_free(&self, var: u32) -> bool {
        (1..=self.num_vars).contains(&var) && !self.eliminated.contains(&var)
    }

    /// Free variables in ascending order.
    pub fn free_vars(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=self.num_vars).filter(|v| !self.eliminated.contains(v))
    }

    pub fn num_free(&self) -> u32 {
        self.num_vars - self.eliminated.len() as u32
    }

    /// Truth under an assignment of the variables `1..=V`.
    pub fn satisfied_by(&self, value: impl Fn(u32) -> bool) -> bool {
        self.disjuncts.iter().any(|d| {
            d.clauses
                .iter()
                .all(|c| c.iter().any(|&l| value(var_of(l)) == (l > 0)))
        })
    }
}

/// A CNF whose literals are all positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneCnf {
    num_vars: u32,
    clauses: Vec<Vec<u32>>,
}

impl MonotoneCnf {
    /// Literals within a clause are sorted and deduplicated.
    pub fn new(num_vars: u32, clauses: Vec<Vec<u32>>) -> Result<Self, PropError> {
        let mut out = Vec::with_capacity(clauses.len());
        for mut c in clauses {
            if c.is_empty() {
                return Err(PropError::EmptyMonotoneClause);
            }
            if let Some(&v) = c.iter().find(|&&v| v == 0 || v > num_vars) {
                return Err(PropError::LiteralOutOfRange {
                    lit: i64::from(v),
                    num_vars,
                });
            }
            c.sort_unstable();
            c.dedup();
            out.push(c);
        }
        Ok(MonotoneCnf {
            num_vars,
            clauses: out,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<u32>] {
        &self.clauses
    }
}

// ---- formats ----

fn parse_err(line: usize, msg: impl Into<String>) -> PropError {
    PropError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('c')).then_some((i + 1, t))
    })
}

fn parse_ints<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>, PropError> {
    s.split_whitespace()
        .map(|w| {
            w.parse()
                .map_err(|_| parse_err(line, format!("expected integer, found `{w}`")))
        })
        .collect()
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    kind: &str,
) -> Result<(u32, usize), PropError> {
    let (line, text) = lines
        .next()
        .ok_or_else(|| parse_err(0, format!("missing `p {kind}` header")))?;
    let words: Vec<&str> = text.split_whitespace().collect();
    if words.len() != 4 || words[0] != "p" || words[1] != kind {
        return Err(parse_err(line, format!("expected `p {kind} <vars> <count>`")));
    }
    let v = words[2]
        .parse()
        .map_err(|_| parse_err(line, "bad variable count"))?;
    let k = words[3].parse().map_err(|_| parse_err(line, "bad count"))?;
    Ok((v, k))
}

/// Parses the `p d2s V k` format. Comment lines start with `c`.
pub fn parse_d2s(text: &str) -> Result<Disj2SatFormula, PropError> {
    let mut lines = content_lines(text);
    let (num_vars, k) = parse_header(&mut lines, "d2s")?;
    let mut disjuncts = Vec::with_capacity(k);
    for _ in 0..k {
        let (line, head) = lines
            .next()
            .ok_or_else(|| parse_err(0, "missing disjunct block"))?;
        let words: Vec<&str> = head.split_whitespace().collect();
        let m: usize = match words.as_slice() {
            ["d", m] => m.parse().map_err(|_| parse_err(line, "bad clause count"))?,
            _ => return Err(parse_err(line, "expected `d <clauses>`")),
        };
        let mut clauses = Vec::with_capacity(m);
        for _ in 0..m {
            let (line, text) = lines
                .next()
                .ok_or_else(|| parse_err(0, "missing clause line"))?;
            let mut lits: Vec<i64> = parse_ints(line, text)?;
            if lits.pop() != Some(0) || lits.contains(&0) {
                return Err(parse_err(line, "clause must end with a single 0"));
            }
            if lits.len() > 2 {
                return Err(parse_err(line, "clause has more than 2 literals"));
            }
            let mut clause = Vec::with_capacity(lits.len());
            for l in lits {
                if l.unsigned_abs() > u64::from(num_vars) {
                    return Err(parse_err(
                        line,
                        format!("literal {l} out of range 1..={num_vars}"),
                    ));
                }
                clause.push(l as Lit);
            }
            clauses.push(clause);
        }
        disjuncts.push(TwoSatConjunct::new(clauses)?);
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing content"));
    }
    Disj2SatFormula::new(num_vars, disjuncts)
}

/// Canonical text: disjuncts and clauses in order, literals ascending by
/// variable, unit clauses written as `l l 0`, the empty clause as `0`.
pub fn serialize_d2s(f: &Disj2SatFormula) -> Result<String, PropError> {
    if !f.eliminated.is_empty() {
        return Err(PropError::Restricted);
    }
    let mut out = format!("p d2s {} {}\n", f.num_vars, f.disjuncts.len());
    for d in &f.disjuncts {
        let _ = writeln!(out, "d {}", d.clauses.len());
        for c in &d.clauses {
            match c.as_slice() {
                [] => out.push_str("0\n"),
                [l] => {
                    let _ = writeln!(out, "{l} {l} 0");
                }
                [a, b] => {
                    let _ = writeln!(out, "{a} {b} 0");
                }
                _ => unreachable!("clause width checked on construction"),
            }
        }
    }
    Ok(out)
}

/// Parses DIMACS `p cnf V m`, rejecting negative literals. Clauses may span
/// lines; each ends with `0`.
pub fn parse_dimacs_monotone(text: &str) -> Result<MonotoneCnf, PropError> {
    let mut lines = content_lines(text);
    let (num_vars, m) = parse_header(&mut lines, "cnf")?;
    let mut clauses = Vec::with_capacity(m);
    let mut current = Vec::new();
    let mut last_line = 0;
    for (line, text) in lines {
        last_line = line;
        for l in parse_ints::<i64>(line, text)? {
            if l == 0 {
                if current.is_empty() {
                    return Err(parse_err(line, "empty clause"));
                }
                clauses.push(std::mem::take(&mut current));
            } else if l < 0 {
                return Err(PropError::NegativeLiteral(l));
            } else if l > i64::from(num_vars) {
                return Err(parse_err(
                    line,
                    format!("literal {l} out of range 1..={num_vars}"),
                ));
            } else {
                current.push(l as u32);
            }
        }
    }
    if !current.is_empty() {
        return Err(parse_err(last_line, "clause not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(parse_err(
            last_line,
            format!("header declares {m} clause(s), found {}", clauses.len()),
        ));
    }
    MonotoneCnf::new(num_vars, clauses)
}

pub fn serialize_dimacs(f: &MonotoneCnf) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for v in c {
            let _ = write!(out, "{v} ");
        }
        out.push_str("0\n");
    }
    out
}

// ---- satisfiability ----

#[inline]
fn node(l: Lit) -> usize {
    2 * (var_of(l) as usize - 1) + usize::from(l < 0)
}

/// Iterative Tarjan; returns the component id of every node.
fn scc(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut comp = vec![UNSEEN; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge == 0 && index[v] == UNSEEN {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adj[v].get(*edge) {
                *edge += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                while let Some(w) = stack.pop() {
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// Decides a 2SAT conjunct by strongly connected components of the
/// implication graph. Unit clause `l` is `l ∨ l`; the empty clause is false.
pub fn sat2_satisfiable(conj: &TwoSatConjunct, num_vars: u32) -> bool {
    let vars = num_vars.max(conj.max_var()) as usize;
    let mut adj = vec![Vec::new(); 2 * vars];
    for c in &conj.clauses {
        let (a, b) = match c.as_slice() {
            [] => return false,
            [a] => (*a, *a),
            [a, b] => (*a, *b),
            _ => unreachable!(),
        };
        adj[node(-a)].push(node(b));
        adj[node(-b)].push(node(a));
    }
    let comp = scc(&adj);
    (0..vars).all(|v| comp[2 * v] != comp[2 * v + 1])
}

pub fn d2s_satisfiable(f: &Disj2SatFormula) -> bool {
    f.disjuncts.iter().any(|d| sat2_satisfiable(d, f.num_vars))
}

// ---- counting ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Brute,
    Selfreduce,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub count: Count,
    pub method: CountMethod,
    /// Recursion nodes; only set by the self-reduction counter.
    pub nodes_explored: Option<u64>,
    pub elapsed: Duration,
}

/// Lane masks for the six variables that vary inside a 64-bit word.
const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Counts assignments to `positions.len()` bits satisfying the disjunction of
/// CNFs. Literals are given as (bit position, polarity).
fn count_sliced(num_bits: u32, disjuncts: &[Vec<Vec<(usize, bool)>>]) -> Count {
    let low_bits = num_bits.min(6);
    let lane_mask = if low_bits == 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << low_bits)) - 1
    };
    let words = 1u64 << (num_bits - low_bits);
    let mut values = [0u64; BRUTEFORCE_MAX_VARS as usize];
    values[..6].copy_from_slice(&LANE_PATTERNS);
    let mut total: Count = 0;
    for w in 0..words {
        for (j, v) in values.iter_mut().enumerate().take(num_bits as usize).skip(6) {
            *v = if (w >> (j - 6)) & 1 == 1 { u64::MAX } else { 0 };
        }
        let mut acc = 0u64;
        for d in disjuncts {
            let mut conj = lane_mask & !acc;
            for c in d {
                if conj == 0 {
                    break;
                }
                let mut clause = 0u64;
                for &(pos, positive) in c {
                    clause |= if positive { values[pos] } else { !values[pos] };
                }
                conj &= clause;
            }
            acc |= conj;
            if acc == lane_mask {
                break;
            }
        }
        total += Count::from(acc.count_ones());
    }
    total
}

fn guard(free: u32) -> Result<(), PropError> {
    if free > BRUTEFORCE_MAX_VARS {
        return Err(PropError::TooManyVariables {
            free,
            limit: BRUTEFORCE_MAX_VARS,
        });
    }
    Ok(())
}

/// Exact count by enumerating every assignment of the free variables,
/// 64 at a time.
pub fn count_bruteforce(f: &Disj2SatFormula) -> Result<CountReport, PropError> {
    let start = Instant::now();
    guard(f.num_free())?;
    let mut position = vec![usize::MAX; f.num_vars as usize + 1];
    for (i, v) in f.free_vars().enumerate() {
        position[v as usize] = i;
    }
    let disjuncts: Vec<Vec<Vec<(usize, bool)>>> = f
        .disjuncts
        .iter()
        .map(|d| {
            d.clauses
                .iter()
                .map(|c| c.iter().map(|&l| (position[var_of(l) as usize], l > 0)).collect())
                .collect()
        })
        .collect();
    Ok(CountReport {
        count: count_sliced(f.num_free(), &disjuncts),
        method: CountMethod::Brute,
        nodes_explored: None,
        elapsed: start.elapsed(),
    })
}

pub fn count_monotone_bruteforce(f: &MonotoneCnf) -> Result<CountReport, PropError> {
    let start = Instant::now();
    guard(f.num_vars)?;
    let cnf: Vec<Vec<(usize, bool)>> = f
        .clauses
        .iter()
        .map(|c| c.iter().map(|&v| (v as usize - 1, true)).collect())
        .collect();
    Ok(CountReport {
        count: count_sliced(f.num_vars, &[cnf]),
        method: CountMethod::Brute,
        nodes_explored: None,
        elapsed: start.elapsed(),
    })
}

/// Fixes `var` to `value`: satisfied clauses vanish, falsified literals are
/// removed (possibly leaving the empty clause), and `var` leaves the free set.
pub fn restrict(f: &Disj2SatFormula, var: u32, value: bool) -> Result<Disj2SatFormula, PropError> {
    if !f.is_free(var) {
        return Err(PropError::VariableNotFree {
            var,
            num_vars: f.num_vars,
        });
    }
    let disjuncts = f
        .disjuncts
        .iter()
        .map(|d| TwoSatConjunct {
            clauses: d
                .clauses
                .iter()
                .filter(|c| !c.iter().any(|&l| var_of(l) == var && (l > 0) == value))
                .map(|c| c.iter().copied().filter(|&l| var_of(l) != var).collect())
                .collect(),
        })
        .collect();
    let mut eliminated = f.eliminated.clone();
    eliminated.insert(var);
    Ok(Disj2SatFormula {
        num_vars: f.num_vars,
        disjuncts,
        eliminated,
    })
}

/// Exact count by self-reduction on the lowest free variable, never entering
/// an unsatisfiable branch. Visits at most `(V+1)·count` nodes, or one node
/// when the count is zero.
pub fn count_selfreduce(f: &Disj2SatFormula) -> CountReport {
    fn go(f: &Disj2SatFormula, nodes: &mut u64) -> Count {
        *nodes += 1;
        let Some(var) = f.free_vars().next() else {
            return 1;
        };
        let mut total = 0;
        for value in [false, true] {
            let child = restrict(f, var, value).expect("branch variable is free");
            if d2s_satisfiable(&child) {
                total += go(&child, nodes);
            }
        }
        total
    }

    let start = Instant::now();
    let mut nodes = 0;
    let count = if d2s_satisfiable(f) {
        go(f, &mut nodes)
    } else {
        nodes = 1;
        0
    };
    CountReport {
        count,
        method: CountMethod::Selfreduce,
        nodes_explored: Some(nodes),
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conj(clauses: &[&[Lit]]) -> TwoSatConjunct {
        TwoSatConjunct::new(clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    fn d2s(v: u32, ds: &[&[&[Lit]]]) -> Disj2SatFormula {
        Disj2SatFormula::new(v, ds.iter().map(|d| conj(d)).collect()).unwrap()
    }

    // Independent oracle: evaluate every assignment literally.
    fn naive_count(f: &Disj2SatFormula) -> Count {
        let free: Vec<u32> = f.free_vars().collect();
        (0u64..1 << free.len())
            .filter(|m| {
                let val = |l: Lit| {
                    let i = free.iter().position(|&v| v == var_of(l)).unwrap();
                    ((m >> i) & 1 == 1) == (l > 0)
                };
                f.disjuncts()
                    .iter()
                    .any(|d| d.clauses().iter().all(|c| c.iter().any(|&l| val(l))))
            })
            .count() as Count
    }

    #[test]
    fn sat2_examples() {
        assert!(!sat2_satisfiable(&conj(&[&[1, 1], &[-1, -1]]), 1));
        assert!(sat2_satisfiable(&conj(&[&[1, 2], &[-1, 2]]), 2));
        assert!(!sat2_satisfiable(&conj(&[&[]]), 2));
        assert!(sat2_satisfiable(&conj(&[]), 0));
        assert!(!sat2_satisfiable(
            &conj(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]),
            2
        ));
    }

    #[test]
    fn counts() {
        assert_eq!(count_bruteforce(&d2s(2, &[&[&[1, 2]]])).unwrap().count, 3);
        assert_eq!(count_bruteforce(&d2s(2, &[&[]])).unwrap().count, 4);
        assert_eq!(count_bruteforce(&d2s(2, &[])).unwrap().count, 0);
        let m = MonotoneCnf::new(3, vec![vec![1, 2], vec![3]]).unwrap();
        assert_eq!(count_monotone_bruteforce(&m).unwrap().count, 3);
        let big = d2s(9, &[&[&[1, -9]], &[&[7, 8], &[-2, 3]]]);
        assert_eq!(count_bruteforce(&big).unwrap().count, naive_count(&big));
        assert!(!d2s_satisfiable(&d2s(2, &[])));
        let by_eval = (0u32..4)
            .filter(|m| d2s(2, &[&[&[1, 2]]]).satisfied_by(|v| (m >> (v - 1)) & 1 == 1))
            .count();
        assert_eq!(by_eval, 3);
        assert!(d2s_satisfiable(&d2s(2, &[&[&[]], &[]])));
    }

    #[test]
    fn guard_triggers() {
        let f = d2s(27, &[&[]]);
        assert!(matches!(
            count_bruteforce(&f),
            Err(PropError::TooManyVariables { free: 27, .. })
        ));
        let r = restrict(&f, 1, true).unwrap();
        assert_eq!(count_bruteforce(&r).unwrap().count, 1 << 26);
    }

    #[test]
    fn restriction() {
        let f = d2s(2, &[&[&[1, 2]]]);
        let r = restrict(&f, 1, true).unwrap();
        assert!(r.disjuncts()[0].clauses().is_empty());
        let r0 = restrict(&f, 1, false).unwrap();
        assert_eq!(r0.disjuncts()[0].clauses(), &[vec![2]]);
        assert_eq!(count_bruteforce(&r0).unwrap().count, 1);
        let t = restrict(&d2s(2, &[&[]]), 2, false).unwrap();
        assert!(t.disjuncts()[0].clauses().is_empty());
        assert!(matches!(
            restrict(&r, 1, false),
            Err(PropError::VariableNotFree { var: 1, .. })
        ));
        assert!(restrict(&f, 3, false).is_err());
        let r00 = restrict(&r0, 2, false).unwrap();
        assert_eq!(r00.disjuncts()[0].clauses(), &[Vec::<Lit>::new()]);
    }

    #[test]
    fn selfreduce_examples() {
        let r = count_selfreduce(&d2s(2, &[&[&[1, 2]]]));
        assert_eq!(r.count, 3);
        assert!(r.nodes_explored.unwrap() <= 2 * 3 * 3);
        let u = count_selfreduce(&d2s(3, &[&[&[1, 1], &[-1, -1]]]));
        assert_eq!((u.count, u.nodes_explored), (0, Some(1)));
    }

    #[test]
    fn d2s_format() {
        let text = "c example\np d2s 3 2\nd 2\n2 -1 0\n3 3 0\nd 1\n0\n";
        let f = parse_d2s(text).unwrap();
        assert_eq!(f.disjuncts()[0].clauses(), &[vec![-1, 2], vec![3]]);
        assert_eq!(
            serialize_d2s(&f).unwrap(),
            "p d2s 3 2\nd 2\n-1 2 0\n3 3 0\nd 1\n0\n"
        );
        assert_eq!(parse_d2s(&serialize_d2s(&f).unwrap()).unwrap(), f);
        for bad in [
            "p d2s 2 1\nd 1\n1 2 3 0\n",
            "p d2s 2 1\nd 1\n1 5 0\n",
            "p d2s 2 1\nd 1\n1 2\n",
            "p d2s 2 2\nd 0\n",
            "p d2s 2 0\nd 0\n",
            "p cnf 2 0\n",
        ] {
            assert!(parse_d2s(bad).is_err(), "{bad}");
        }
        let r = restrict(&f, 1, true).unwrap();
        assert_eq!(serialize_d2s(&r), Err(PropError::Restricted));
    }

    #[test]
    fn dimacs_format() {
        let f = parse_dimacs_monotone("c hi\np cnf 3 2\n2 1 0 3\n0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, 2], vec![3]]);
        assert_eq!(serialize_dimacs(&f), "p cnf 3 2\n1 2 0\n3 0\n");
        assert_eq!(
            parse_dimacs_monotone("p cnf 2 1\n1 -2 0\n"),
            Err(PropError::NegativeLiteral(-2))
        );
        assert!(parse_dimacs_monotone("p cnf 2 2\n1 0\n").is_err());
        assert!(parse_dimacs_monotone("p cnf 2 1\n0\n").is_err());
    }
}
