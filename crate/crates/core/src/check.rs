//! Random instance generators and the oracle-comparison suites built on them.
//!
//! Every trial draws its instance from `ChaCha8Rng::seed_from_u64(s)` where
//! `s = derive_seed(seed, trial)`, so a failure is replayed from `s` alone.
//!
//! Distributions:
//!
//! * [`random_structure`]: universe size 1 with probability 1/10, otherwise
//!   uniform in `2..=max_n`; vocabulary
//!   `R:1, E:2`, every tuple present with probability 1/2.
//! * [`random_fo`]: atoms `R(v)`, `E(v,w)`, `v = w`, `top`, `bot` over the
//!   variables in scope, combined with `~ | & ->` and inner quantifiers up
//!   to the given depth.
//! * [`random_qso`]: a tree of depth ≤ 3 whose nodes are a constant in
//!   `0..=2` (1/12), `+` (2/12), `sum X:1` or `sum Y:2` (4/12), `sumfo`
//!   (2/12, at most two per path) or a base formula (3/12); base formulas have
//!   ≤ 1 existential, ≤ 2 universal variables and 1–3 clauses of up to two
//!   second-order literals. Resampled until its reduction needs ≤ 22
//!   propositional variables on the given universe.
//! * [`random_pi2`]: `X` of arity 1 (2/3) or 2, ≤ 2 universal variables and
//!   a first-order part of depth ≤ 2.
//! * [`random_d2s`]: `V` uniform in `1..=max_vars`, 0–3 disjuncts with
//!   `V/2..=2V` clauses each; clause width 2 (80%), 1 (16%) or 0 (4%).
//! * [`random_conjunct`]: one such conjunct.
//! * [`random_monotone`]: `V` uniform in `1..=max_vars`, 1–4 nonempty clauses
//!   with each variable present with probability 1/2.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approx::{
    check_mr, derive_seed, fpras_rp1, miller_rabin_witness_count, CountingSampler, MrCheck,
};
use crate::eval::{pi2_count, qso_eval, EvalBudget};
use crate::logic::{
    normalize_qso, ClausePart, FoFormula, Pi2Spec, QsoFormula, Sigma2TwoSat, SoLiteral,
    TwoSatClause,
};
use crate::model::{all_tuples, serialize_structure, Structure, StructureBuilder};
use crate::propcount::{
    count_bruteforce, count_monotone_bruteforce, count_selfreduce, serialize_d2s,
    serialize_dimacs, Disj2SatFormula, Lit, MonotoneCnf, TwoSatConjunct,
};
use crate::reductions::{
    encode_d2s_as_qso, encode_monotone_as_pi2, reduce_pi2_to_monotone, reduce_qso_to_d2s,
    ProductResult,
};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

pub fn trial_rng(trial_seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed)
}

pub fn random_structure(rng: &mut impl Rng, max_n: usize) -> Structure {
    let n = if max_n == 1 || rng.gen_bool(0.1) {
        1
    } else {
        rng.gen_range(2..=max_n)
    };
    let mut b = StructureBuilder::new(n);
    for (r, k) in [("R", 1), ("E", 2)] {
        b.relation(r, k).expect("fixed vocabulary");
        for t in all_tuples(n, k) {
            if rng.gen_bool(0.5) {
                b.tuple(r, &t).expect("in range");
            }
        }
    }
    b.build()
}

fn pick<'a>(rng: &mut impl Rng, vars: &'a [String]) -> &'a str {
    &vars[rng.gen_range(0..vars.len())]
}

pub fn random_fo(rng: &mut impl Rng, vars: &[String], depth: usize) -> FoFormula {
    if depth == 0 || vars.is_empty() || rng.gen_bool(0.4) {
        if vars.is_empty() {
            return if rng.gen_bool(0.5) {
                FoFormula::Top
            } else {
                FoFormula::Bottom
            };
        }
        return match rng.gen_range(0..20) {
            0 => FoFormula::Top,
            1 => FoFormula::Bottom,
            2..=8 => FoFormula::atom("R", &[pick(rng, vars)]),
            9..=16 => FoFormula::atom("E", &[pick(rng, vars), pick(rng, vars)]),
            _ => FoFormula::Eq(pick(rng, vars).into(), pick(rng, vars).into()),
        };
    }
    match rng.gen_range(0..10) {
        0..=1 => FoFormula::not(random_fo(rng, vars, depth - 1)),
        2..=4 => FoFormula::or(random_fo(rng, vars, depth - 1), random_fo(rng, vars, depth - 1)),
        5..=6 => FoFormula::and(random_fo(rng, vars, depth - 1), random_fo(rng, vars, depth - 1)),
        7 => FoFormula::Implies(
            Box::new(random_fo(rng, vars, depth - 1)),
            Box::new(random_fo(rng, vars, depth - 1)),
        ),
        _ => {
            let z = format!("z{}", vars.len());
            let mut inner = vars.to_vec();
            inner.push(z.clone());
            let body = random_fo(rng, &inner, depth - 1);
            if rng.gen_bool(0.5) {
                FoFormula::exists(&z, body)
            } else {
                FoFormula::forall(&z, body)
            }
        }
    }
}

const SO_POOL: [(&str, usize); 2] = [("X", 1), ("Y", 2)];

fn random_clause_part(rng: &mut impl Rng, scope: &[String]) -> ClausePart {
    ClausePart::Fo(match rng.gen_range(0..10) {
        0..=1 => FoFormula::Bottom,
        2 => FoFormula::Top,
        _ => random_fo(rng, scope, 1),
    })
}

fn random_base(rng: &mut impl Rng, so: &[(String, usize)], fo: &[String]) -> QsoFormula {
    let mut scope = fo.to_vec();
    let mut exists_vars = Vec::new();
    let mut forall_vars = Vec::new();
    for _ in 0..rng.gen_range(0..=1) {
        let y = format!("y{}", scope.len());
        scope.push(y.clone());
        exists_vars.push(y);
    }
    for _ in 0..rng.gen_range(0..=2) {
        let u = format!("u{}", scope.len());
        scope.push(u.clone());
        forall_vars.push(u);
    }
    let clauses = (0..rng.gen_range(1..=3))
        .map(|_| {
            let lits = if so.is_empty() || scope.is_empty() {
                0
            } else {
                match rng.gen_range(0..10) {
                    0..=2 => 0,
                    3..=6 => 1,
                    _ => 2,
                }
            };
            let mut parts = Vec::with_capacity(3);
            for _ in 0..lits {
                let (x, k) = &so[rng.gen_range(0..so.len())];
                let args: Vec<String> = (0..*k).map(|_| pick(rng, &scope).to_string()).collect();
                parts.push(ClausePart::So(SoLiteral {
                    positive: rng.gen_bool(0.5),
                    var: x.clone(),
                    args,
                }));
            }
            while parts.len() < 3 {
                parts.push(random_clause_part(rng, &scope));
            }
            let i = rng.gen_range(0..3);
            parts.swap(0, i);
            TwoSatClause::from_parts(parts).expect("at most two literals")
        })
        .collect();
    QsoFormula::Base(Sigma2TwoSat {
        exists_vars,
        forall_vars,
        clauses,
    })
}

fn random_qso_tree(
    rng: &mut impl Rng,
    depth: usize,
    so: &mut Vec<(String, usize)>,
    fo: &mut Vec<String>,
) -> QsoFormula {
    let choice = if depth == 0 { 11 } else { rng.gen_range(0..12) };
    match choice {
        0 => QsoFormula::Const(rng.gen_range(0..=2)),
        1..=2 => QsoFormula::plus(
            random_qso_tree(rng, depth - 1, so, fo),
            random_qso_tree(rng, depth - 1, so, fo),
        ),
        3..=6 => {
            let free: Vec<_> = SO_POOL
                .iter()
                .filter(|(x, _)| !so.iter().any(|(y, _)| y == x))
                .collect();
            if free.is_empty() {
                return random_base(rng, so, fo);
            }
            let (x, k) = *free[rng.gen_range(0..free.len())];
            so.push((x.to_string(), k));
            let body = random_qso_tree(rng, depth - 1, so, fo);
            so.pop();
            QsoFormula::sum_so(x, k, body)
        }
        7..=8 if fo.len() < 2 => {
            let x = format!("x{}", fo.len());
            fo.push(x.clone());
            let body = random_qso_tree(rng, depth - 1, so, fo);
            fo.pop();
            QsoFormula::sum_fo(&x, body)
        }
        _ => random_base(rng, so, fo),
    }
}

/// Number of propositional variables the parsimonious reduction emits.
pub fn reduction_size(alpha: &QsoFormula, n: usize) -> Option<u64> {
    let nf = normalize_qso(alpha).ok()?;
    let atoms: u64 = nf.so_vars.iter().map(|(_, k)| (n as u64).pow(*k as u32)).sum();
    let groups: u64 = nf
        .terms
        .iter()
        .map(|t| (n as u64).pow(t.fo_sum_vars.len() as u32))
        .sum();
    Some(atoms + groups)
}

pub fn random_qso(rng: &mut impl Rng, n: usize, max_vars: u64) -> QsoFormula {
    loop {
        let alpha = random_qso_tree(rng, 3, &mut Vec::new(), &mut Vec::new());
        if reduction_size(&alpha, n).is_some_and(|v| v <= max_vars) {
            return alpha;
        }
    }
}

pub fn random_pi2(rng: &mut impl Rng) -> Pi2Spec {
    let arity = if rng.gen_bool(2.0 / 3.0) { 1 } else { 2 };
    let forall_vars: Vec<String> = (0..rng.gen_range(0..=2)).map(|i| format!("y{i}")).collect();
    let exists_vars: Vec<String> = (0..arity).map(|i| format!("w{i}")).collect();
    let scope: Vec<String> = forall_vars.iter().chain(&exists_vars).cloned().collect();
    let fo_part = random_fo(rng, &scope, 2);
    Pi2Spec {
        so_var: "X".into(),
        arity,
        forall_vars,
        exists_vars,
        fo_part,
    }
}

pub fn random_conjunct(rng: &mut impl Rng, num_vars: u32) -> TwoSatConjunct {
    let lo = (num_vars / 2) as usize;
    let hi = 2 * num_vars as usize;
    let clauses = (0..rng.gen_range(lo..=hi))
        .map(|_| {
            let width = match rng.gen_range(0..100) {
                0..=3 => 0,
                4..=19 => 1,
                _ => 2,
            };
            (0..width)
                .map(|_| {
                    let v = rng.gen_range(1..=num_vars) as Lit;
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    TwoSatConjunct::new(clauses).expect("generated clauses are well formed")
}

pub fn random_d2s(rng: &mut impl Rng, max_vars: u32) -> Disj2SatFormula {
    let v = rng.gen_range(1..=max_vars);
    let k = rng.gen_range(0..=3);
    let disjuncts = (0..k).map(|_| random_conjunct(rng, v)).collect();
    Disj2SatFormula::new(v, disjuncts).expect("literals in range")
}

pub fn random_monotone(rng: &mut impl Rng, max_vars: u32) -> MonotoneCnf {
    let v = rng.gen_range(1..=max_vars);
    let clauses = (0..rng.gen_range(1..=4))
        .map(|_| loop {
            let c: Vec<u32> = (1..=v).filter(|_| rng.gen_bool(0.5)).collect();
            if !c.is_empty() {
                break c;
            }
        })
        .collect();
    MonotoneCnf::new(v, clauses).expect("literals in range")
}

// ---- suites ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Parsimony,
    Product,
    Roundtrip,
    Selfreduce,
    Estimator,
    Mr,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Parsimony,
        Suite::Product,
        Suite::Roundtrip,
        Suite::Selfreduce,
        Suite::Estimator,
        Suite::Mr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Parsimony => "parsimony",
            Suite::Product => "product",
            Suite::Roundtrip => "roundtrip",
            Suite::Selfreduce => "selfreduce",
            Suite::Estimator => "estimator",
            Suite::Mr => "mr",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: u64,
    pub trial_seed: u64,
    pub instance: String,
    pub detail: String,
    pub replay: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: u64,
    pub seed: u64,
    pub failures: u64,
    pub failure_details: Vec<Failure>,
}

/// Instance text and mismatch description of a failing trial.
type TrialResult = Result<(), (String, String)>;

fn parsimony_trial(seed: u64) -> TrialResult {
    let mut rng = trial_rng(seed);
    let a = random_structure(&mut rng, 3);
    let alpha = random_qso(&mut rng, a.universe_size(), 22);
    let instance = || format!("{}\n---\n{}", serialize_structure(&a), alpha);
    let budget = EvalBudget::default();
    let outcome = (|| {
        let expected = qso_eval(&a, &alpha, &budget).map_err(|e| e.to_string())?;
        let nf = normalize_qso(&alpha).map_err(|e| e.to_string())?;
        let (f, _) = reduce_qso_to_d2s(&nf, &a, &budget).map_err(|e| e.to_string())?;
        let got = count_bruteforce(&f).map_err(|e| e.to_string())?.count;
        if got == expected {
            Ok(())
        } else {
            Err(format!("qso_eval = {expected}, #Disj2Sat = {got}"))
        }
    })();
    outcome.map_err(|d| (instance(), d))
}

fn product_check(a: &Structure, spec: &Pi2Spec) -> Result<(), String> {
    let budget = EvalBudget::default();
    let expected = pi2_count(a, spec, &budget).map_err(|e| e.to_string())?;
    match reduce_pi2_to_monotone(spec, a, &budget).map_err(|e| e.to_string())? {
        ProductResult::Unsatisfiable if expected == 0 => Ok(()),
        ProductResult::Unsatisfiable => Err(format!("Unsatisfiable but pi2_count = {expected}")),
        ProductResult::Reduced { cnf, exponent, .. } => {
            let c = count_monotone_bruteforce(&cnf).map_err(|e| e.to_string())?.count;
            if c << exponent == expected {
                Ok(())
            } else {
                Err(format!(
                    "pi2_count = {expected}, count·2^n(A) = {c}·2^{exponent}"
                ))
            }
        }
    }
}

fn product_trial(seed: u64) -> TrialResult {
    let mut rng = trial_rng(seed);
    let a = random_structure(&mut rng, 3);
    let spec = random_pi2(&mut rng);
    product_check(&a, &spec)
        .map_err(|d| (format!("{}\n---\n{}", serialize_structure(&a), spec), d))
}

/// Universe size of the d2s encoding.
fn encoded_size(f: &Disj2SatFormula) -> usize {
    f.num_vars() as usize
        + f.disjuncts().len()
        + f.disjuncts().iter().map(|d| d.clauses().len()).sum::<usize>()
}

/// Random formula for the encoder round trip: `V ≤ 4` and an encoding
/// universe of at most 10 elements.
pub fn random_small_d2s(rng: &mut impl Rng) -> Disj2SatFormula {
    loop {
        let v = rng.gen_range(1..=4u32);
        let k = rng.gen_range(0..=2);
        let disjuncts = (0..k)
            .map(|_| {
                let mut c = random_conjunct(rng, v);
                while c.clauses().len() > 3 {
                    c = random_conjunct(rng, v);
                }
                c
            })
            .collect();
        let f = Disj2SatFormula::new(v, disjuncts).expect("literals in range");
        if encoded_size(&f) <= 10 {
            return f;
        }
    }
}

fn roundtrip_trial(seed: u64) -> TrialResult {
    let mut rng = trial_rng(seed);
    let budget = EvalBudget::default();
    let phi = random_small_d2s(&mut rng);
    let mono = random_monotone(&mut rng, 4);
    let instance = || {
        format!(
            "{}---\n{}",
            serialize_d2s(&phi).expect("unrestricted"),
            serialize_dimacs(&mono)
        )
    };
    let outcome = (|| {
        let (s, psi) = encode_d2s_as_qso(&phi).map_err(|e| e.to_string())?;
        let value = qso_eval(&s, &psi, &budget).map_err(|e| e.to_string())?;
        let count = count_bruteforce(&phi).map_err(|e| e.to_string())?.count;
        if value != count {
            return Err(format!("#Disj2Sat = {count}, encoded value = {value}"));
        }
        let (s, spec, m) = encode_monotone_as_pi2(&mono).map_err(|e| e.to_string())?;
        let p = pi2_count(&s, &spec, &budget).map_err(|e| e.to_string())?;
        let c = count_monotone_bruteforce(&mono).map_err(|e| e.to_string())?.count;
        if p != c << m {
            return Err(format!("#MonotoneSat = {c}, pi2_count = {p}, m = {m}"));
        }
        product_check(&s, &spec).map_err(|d| format!("product on encoder output: {d}"))
    })();
    outcome.map_err(|d| (instance(), d))
}

fn selfreduce_trial(seed: u64) -> TrialResult {
    let mut rng = trial_rng(seed);
    let f = random_d2s(&mut rng, 14);
    let outcome = (|| {
        let brute = count_bruteforce(&f).map_err(|e| e.to_string())?.count;
        let r = count_selfreduce(&f);
        let nodes = r.nodes_explored.unwrap_or(0);
        if r.count != brute {
            return Err(format!("self-reduction {} vs brute force {brute}", r.count));
        }
        let v = u128::from(f.num_vars());
        let ok = if brute == 0 {
            nodes == 1
        } else {
            u128::from(nodes) <= 2 * (v + 1) * brute
        };
        if ok {
            Ok(())
        } else {
            Err(format!("{nodes} nodes for count {brute}"))
        }
    })();
    outcome.map_err(|d| (serialize_d2s(&f).expect("unrestricted"), d))
}

/// Samplers with known acceptance fraction 0.55, 0.75 and 1.
pub fn estimator_samplers() -> Vec<CountingSampler> {
    [(20, 11), (8, 6), (16, 16)]
        .into_iter()
        .map(|(n, acc)| CountingSampler::prefix(n, acc, true).expect("valid sampler"))
        .collect()
}

pub const ESTIMATOR_PARAMS: [(f64, f64); 2] = [(0.2, 0.1), (0.1, 0.05)];

/// Empirical failure rate of `(1-ε)acc ≤ estimate ≤ (1+ε)acc` over `seeds`.
pub fn estimator_failure_rate(
    s: &CountingSampler,
    epsilon: f64,
    delta: f64,
    seeds: impl Iterator<Item = u64>,
) -> f64 {
    let acc = s.acceptance_count() as f64;
    let (mut runs, mut bad) = (0u64, 0u64);
    for seed in seeds {
        let e = fpras_rp1(s, epsilon, delta, seed)
            .expect("valid parameters")
            .estimate;
        runs += 1;
        if e < (1.0 - epsilon) * acc || e > (1.0 + epsilon) * acc {
            bad += 1;
        }
    }
    bad as f64 / runs.max(1) as f64
}

fn estimator_suite(trials: u64, seed: u64) -> Vec<Failure> {
    let mut failures = Vec::new();
    for (si, s) in estimator_samplers().iter().enumerate() {
        for (pi, &(eps, delta)) in ESTIMATOR_PARAMS.iter().enumerate() {
            let config = (si * ESTIMATOR_PARAMS.len() + pi) as u64;
            let seeds = (0..trials).map(|t| derive_seed(seed, config * trials + t));
            let rate = estimator_failure_rate(s, eps, delta, seeds);
            if rate > delta + 0.05 {
                failures.push(Failure {
                    trial: config,
                    trial_seed: seed,
                    instance: format!(
                        "N={} acc={} eps={eps} delta={delta}",
                        s.domain_size(),
                        s.acceptance_count()
                    ),
                    detail: format!("failure rate {rate} > {}", delta + 0.05),
                    replay: format!(
                        "qsocount check --suite estimator --trials {trials} --seed {seed}"
                    ),
                });
            }
        }
    }
    failures
}

/// Trial-division primality, the oracle for the Miller–Rabin suite.
pub fn is_prime_slow(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn mr_check(n: u64) -> Result<(), String> {
    let (count, sampler) = miller_rabin_witness_count(n).map_err(|e| e.to_string())?;
    if is_prime_slow(n) {
        if count != 0 {
            return Err(format!("prime {n} has {count} witnesses"));
        }
    } else if 2 * count < n {
        return Err(format!("composite {n} has only {count} witnesses"));
    }
    match check_mr(&sampler).map_err(|e| e.to_string())? {
        MrCheck::Holds { .. } => Ok(()),
        MrCheck::Violated { accepted, .. } => Err(format!("promise violated with {accepted}")),
    }
}

/// Random odd modulus in `3..100_000` for the Miller–Rabin suite.
fn mr_trial(seed: u64) -> TrialResult {
    let n = trial_rng(seed).gen_range(1..50_000u64) * 2 + 1;
    mr_check(n).map_err(|d| (format!("n = {n}"), d))
}

fn trial_fn(suite: Suite) -> Option<fn(u64) -> TrialResult> {
    Some(match suite {
        Suite::Parsimony => parsimony_trial,
        Suite::Product => product_trial,
        Suite::Roundtrip => roundtrip_trial,
        Suite::Selfreduce => selfreduce_trial,
        Suite::Mr => mr_trial,
        Suite::Estimator => return None,
    })
}

fn failure(suite: Suite, trial: u64, trial_seed: u64, instance: String, detail: String) -> Failure {
    Failure {
        trial,
        trial_seed,
        instance,
        detail,
        replay: format!("qsocount check --suite {} --replay {trial_seed}", suite.name()),
    }
}

/// Runs `trials` seeded trials of a suite. The estimator suite uses `trials`
/// seeds per configuration; the Miller–Rabin suite also checks every odd
/// modulus in `3..=2001` exhaustively.
pub fn run_suite(suite: Suite, trials: u64, seed: u64) -> SuiteReport {
    let mut details = Vec::new();
    match trial_fn(suite) {
        Some(f) => {
            if suite == Suite::Mr {
                for n in (3..=2001).step_by(2) {
                    if let Err(d) = mr_check(n) {
                        details.push(failure(suite, 0, seed, format!("n = {n}"), d));
                    }
                }
            }
            for t in 0..trials {
                let s = derive_seed(seed, t);
                if let Err((instance, detail)) = f(s) {
                    details.push(failure(suite, t, s, instance, detail));
                }
            }
        }
        None => details = estimator_suite(trials, seed),
    }
    SuiteReport {
        suite,
        trials,
        seed,
        failures: details.len() as u64,
        failure_details: details,
    }
}

/// Re-runs the single trial drawn from `trial_seed`.
pub fn replay(suite: Suite, trial_seed: u64) -> SuiteReport {
    let details = match trial_fn(suite) {
        Some(f) => f(trial_seed)
            .err()
            .map(|(i, d)| failure(suite, 0, trial_seed, i, d))
            .into_iter()
            .collect(),
        None => estimator_suite(200, trial_seed),
    };
    SuiteReport {
        suite,
        trials: 1,
        seed: trial_seed,
        failures: details.len() as u64,
        failure_details: details,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{check_sentence, parse_qso_sentence};
    use crate::model::Vocabulary;

    #[test]
    fn generated_formulas_are_valid_and_reparse() {
        let mut vocab = Vocabulary::new();
        vocab.add("R", 1).unwrap();
        vocab.add("E", 2).unwrap();
        let mut rng = trial_rng(3);
        for _ in 0..200 {
            let alpha = random_qso(&mut rng, 3, 22);
            check_sentence(&alpha).unwrap();
            assert_eq!(parse_qso_sentence(&alpha.to_string(), &vocab).unwrap(), alpha);
            let spec = random_pi2(&mut rng);
            spec.validate(&vocab).unwrap();
        }
    }

    #[test]
    fn small_suites_pass() {
        for s in Suite::ALL {
            let trials = if s == Suite::Estimator { 20 } else { 15 };
            let r = run_suite(s, trials, 11);
            if s != Suite::Estimator {
                assert_eq!(r.failures, 0, "{:?}", r.failure_details);
            }
        }
    }

    #[test]
    fn replay_reproduces_trial() {
        let r = replay(Suite::Selfreduce, derive_seed(5, 2));
        assert_eq!(r.failures, 0);
        assert_eq!(Suite::from_name("mr"), Some(Suite::Mr));
        assert!(Suite::from_name("nope").is_none());
    }
}
