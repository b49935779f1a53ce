//! `qsocount`: evaluate, reduce, encode, count, estimate and self-check.
//!
//! Every command prints one JSON object on stdout. Exit code 0 on success,
//! 1 on a domain error (message on stderr), 2 on a usage error.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use qsocount::approx::{
    estimate_count, fpras_rp1, machine_from_fp, miller_rabin_sampler, CountingSampler,
    EstimateParams,
};
use qsocount::check::{replay, run_suite, Suite, DEFAULT_SEED};
use qsocount::eval::{fo_eval, pi2_count, qso_eval, EvalBudget};
use qsocount::logic::{
    normalize_qso, parse_fo, parse_pi2, parse_qso_sentence, parse_rh, rh_to_qso,
};
use qsocount::model::{parse_structure, serialize_structure, FoAssignment, Structure};
use qsocount::propcount::{
    count_bruteforce, count_monotone_bruteforce, count_selfreduce, parse_d2s,
    parse_dimacs_monotone, serialize_d2s, serialize_dimacs, CountReport, MonotoneCnf,
};
use qsocount::reductions::{
    encode_d2s_as_qso, encode_monotone_as_pi2, encode_vc, reduce_pi2_to_monotone,
    reduce_qso_to_d2s, Graph, ProductResult,
};

#[derive(Parser)]
#[command(name = "qsocount", version, about = "Counting with quantitative second-order logic")]
struct Cli {
    /// Accepted for compatibility; JSON is the only output mode.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Largest total exponent of second-order enumerations.
    #[arg(long, default_value_t = EvalBudget::default().max_so_exponent)]
    max_so_exponent: u32,
    /// Largest first-order expansion of one base formula.
    #[arg(long, default_value_t = EvalBudget::default().max_fo_expansion)]
    max_fo_expansion: u64,
}

impl BudgetArgs {
    fn budget(self) -> EvalBudget {
        EvalBudget {
            max_so_exponent: self.max_so_exponent,
            max_fo_expansion: self.max_fo_expansion,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Value of a formula on a structure.
    Eval {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Auto)]
        kind: Kind,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Ground a formula into a propositional counting instance.
    Reduce {
        #[command(subcommand)]
        target: ReduceTarget,
    },
    /// Encode a counting instance as a structure and formula.
    Encode {
        #[arg(value_enum)]
        source: EncodeSource,
        input: PathBuf,
        /// Output prefix; writes `<prefix>.fst` and `<prefix>.qso` or `<prefix>.pi2`.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Exact model count of a d2s or monotone DIMACS file.
    Count {
        #[arg(long, value_enum, default_value_t = Method::Brute)]
        method: Method,
        file: PathBuf,
    },
    /// Sampling estimate of an acceptance count.
    Estimate {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        source: EstimateSource,
        /// Lower bound on the acceptance fraction, used with `--d2s`.
        #[arg(long, default_value_t = 0.5)]
        p_lower_bound: f64,
    },
    /// Run a randomized oracle-comparison suite.
    Check {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Re-run the single trial with this trial seed.
        #[arg(long, conflicts_with_all = ["trials", "seed"])]
        replay: Option<u64>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct EstimateSource {
    /// Sampler accepting exactly this many of the next power of two.
    #[arg(long)]
    fp: Option<u64>,
    /// Sampler over bases `1..N-1` accepting Miller–Rabin witnesses.
    #[arg(long)]
    miller_rabin: Option<u64>,
    /// Sampler over all assignments accepting the satisfying ones.
    #[arg(long)]
    d2s: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ReduceTarget {
    /// QSO sentence to a disjunction of 2SAT formulas.
    D2s {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        formula: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Single-variable Π₂ spec to a monotone CNF and a power of two.
    Monotone {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Auto,
    Fo,
    Qso,
    Pi2,
    Rh,
}

#[derive(ValueEnum, Clone, Copy)]
enum EncodeSource {
    /// Graph in DIMACS `p edge` format.
    Vc,
    /// Monotone CNF in DIMACS `p cnf` format.
    Mono,
    /// Disjunction of 2SAT formulas in `p d2s` format.
    D2s,
}

#[derive(ValueEnum, Clone, Copy)]
enum Method {
    Brute,
    Selfreduce,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite `{s}`; expected one of {}", names.join(", "))
    })
}

/// A domain error tagged with the module that raised it.
struct Failure {
    module: &'static str,
    msg: String,
}

trait Tag<T> {
    fn tag(self, module: &'static str) -> Result<T, Failure>;
}

impl<T, E: Display> Tag<T> for Result<T, E> {
    fn tag(self, module: &'static str) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            module,
            msg: e.to_string(),
        })
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        module: "io",
        msg: format!("{}: {e}", path.display()),
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure {
        module: "io",
        msg: format!("{}: {e}", path.display()),
    })
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn load_structure(path: &Path) -> Result<Structure, Failure> {
    parse_structure(&read(path)?).tag("model")
}

fn first_word(text: &str) -> &str {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split(|c: char| !c.is_alphanumeric()).next())
        .unwrap_or("")
}

fn to_json(value: &impl Serialize) -> serde_json::Value {
    serde_json::to_value(value).expect("serializable output")
}

fn count_json(r: &CountReport) -> serde_json::Value {
    json!({
        "count": r.count,
        "method": r.method,
        "nodes_explored": r.nodes_explored,
        "elapsed_ms": r.elapsed.as_secs_f64() * 1e3,
    })
}

fn eval_cmd(structure: &Path, formula: &Path, kind: Kind, budget: EvalBudget) -> Result<serde_json::Value, Failure> {
    let a = load_structure(structure)?;
    let text = read(formula)?;
    let vocab = a.vocabulary();
    let kind = match kind {
        Kind::Auto => match first_word(&text) {
            "pivar" => Kind::Pi2,
            "rh" => Kind::Rh,
            _ => Kind::Qso,
        },
        k => k,
    };
    let value = match kind {
        Kind::Fo => {
            let phi = parse_fo(&text, vocab).tag("logic")?;
            u128::from(fo_eval(&a, &phi, &FoAssignment::new()).tag("eval")?)
        }
        Kind::Pi2 => pi2_count(&a, &parse_pi2(&text, vocab).tag("logic")?, &budget).tag("eval")?,
        Kind::Rh => {
            let alpha = rh_to_qso(&parse_rh(&text, vocab).tag("logic")?).tag("logic")?;
            qso_eval(&a, &alpha, &budget).tag("eval")?
        }
        Kind::Qso | Kind::Auto => {
            qso_eval(&a, &parse_qso_sentence(&text, vocab).tag("logic")?, &budget).tag("eval")?
        }
    };
    Ok(json!({ "value": value }))
}

fn reduce_cmd(target: &ReduceTarget) -> Result<serde_json::Value, Failure> {
    match target {
        ReduceTarget::D2s {
            structure,
            formula,
            output,
            budget,
        } => {
            let a = load_structure(structure)?;
            let alpha = parse_qso_sentence(&read(formula)?, a.vocabulary()).tag("logic")?;
            let nf = normalize_qso(&alpha).tag("logic")?;
            let (f, table) = reduce_qso_to_d2s(&nf, &a, &budget.budget()).tag("reductions")?;
            let sidecar = with_suffix(output, ".json");
            write(output, &serialize_d2s(&f).tag("propcount")?)?;
            write(&sidecar, &(serde_json::to_string_pretty(&table).expect("serializable") + "\n"))?;
            Ok(json!({
                "output": output,
                "sidecar": sidecar,
                "num_vars": f.num_vars(),
                "disjuncts": f.disjuncts().len(),
                "selectors": table.selectors.len(),
            }))
        }
        ReduceTarget::Monotone {
            structure,
            spec,
            output,
            budget,
        } => {
            let a = load_structure(structure)?;
            let spec = parse_pi2(&read(spec)?, a.vocabulary()).tag("logic")?;
            let sidecar = with_suffix(output, ".json");
            let result = reduce_pi2_to_monotone(&spec, &a, &budget.budget()).tag("reductions")?;
            let (meta, num_vars, clauses) = match &result {
                ProductResult::Unsatisfiable => (
                    json!({ "unsatisfiable": true, "exponent": null, "atoms": [] }),
                    None,
                    None,
                ),
                ProductResult::Reduced {
                    cnf,
                    exponent,
                    atoms,
                } => {
                    write(output, &serialize_dimacs(cnf))?;
                    (
                        json!({ "unsatisfiable": false, "exponent": exponent, "atoms": atoms }),
                        Some(cnf.num_vars()),
                        Some(cnf.clauses().len()),
                    )
                }
            };
            write(&sidecar, &(serde_json::to_string_pretty(&meta).expect("serializable") + "\n"))?;
            Ok(json!({
                "output": if num_vars.is_some() { Some(output) } else { None },
                "sidecar": sidecar,
                "unsatisfiable": matches!(result, ProductResult::Unsatisfiable),
                "exponent": meta["exponent"],
                "num_vars": num_vars,
                "clauses": clauses,
            }))
        }
    }
}

fn encode_cmd(source: EncodeSource, input: &Path, prefix: &Path) -> Result<serde_json::Value, Failure> {
    let text = read(input)?;
    let structure_path = with_suffix(prefix, ".fst");
    let (structure, formula_text, formula_path, exponent) = match source {
        EncodeSource::D2s => {
            let f = parse_d2s(&text).tag("propcount")?;
            let (s, psi) = encode_d2s_as_qso(&f).tag("reductions")?;
            (s, psi.to_string(), with_suffix(prefix, ".qso"), 0)
        }
        EncodeSource::Mono => {
            let f = parse_dimacs_monotone(&text).tag("propcount")?;
            let (s, spec, m) = encode_monotone_as_pi2(&f).tag("reductions")?;
            (s, spec.to_string(), with_suffix(prefix, ".pi2"), m)
        }
        EncodeSource::Vc => {
            let g = Graph::parse_dimacs(&text).tag("reductions")?;
            let (s, spec, e) = encode_vc(&g).tag("reductions")?;
            (s, spec.to_string(), with_suffix(prefix, ".pi2"), e)
        }
    };
    write(&structure_path, &(serialize_structure(&structure) + "\n"))?;
    write(&formula_path, &(formula_text + "\n"))?;
    Ok(json!({
        "structure": structure_path,
        "formula": formula_path,
        "universe_size": structure.universe_size(),
        "correction_exponent": exponent,
    }))
}

fn count_cmd(method: Method, file: &Path) -> Result<serde_json::Value, Failure> {
    let text = read(file)?;
    let report = if text.lines().any(|l| l.trim_start().starts_with("p cnf")) {
        let f: MonotoneCnf = parse_dimacs_monotone(&text).tag("propcount")?;
        match method {
            Method::Brute => count_monotone_bruteforce(&f).tag("propcount")?,
            Method::Selfreduce => {
                return Err(Failure {
                    module: "propcount",
                    msg: "self-reduction counts d2s files; use --method brute for CNF".into(),
                })
            }
        }
    } else {
        let f = parse_d2s(&text).tag("propcount")?;
        match method {
            Method::Brute => count_bruteforce(&f).tag("propcount")?,
            Method::Selfreduce => count_selfreduce(&f),
        }
    };
    Ok(count_json(&report))
}

fn estimate_cmd(
    eps: f64,
    delta: f64,
    seed: u64,
    source: &EstimateSource,
    p_lower_bound: f64,
) -> Result<serde_json::Value, Failure> {
    let (sampler, estimate) = if let Some(v) = source.fp {
        let s = machine_from_fp(v);
        let e = fpras_rp1(&s, eps, delta, seed).tag("approx")?;
        (s, e)
    } else if let Some(n) = source.miller_rabin {
        let s = miller_rabin_sampler(n).tag("approx")?;
        let e = fpras_rp1(&s, eps, delta, seed).tag("approx")?;
        (s, e)
    } else {
        let path = source.d2s.as_ref().expect("clap enforces one source");
        let f = parse_d2s(&read(path)?).tag("propcount")?;
        if f.num_vars() > 63 {
            return Err(Failure {
                module: "approx",
                msg: format!("{} variables exceed the 63-bit sample space", f.num_vars()),
            });
        }
        let s = CountingSampler::new(1u64 << f.num_vars(), false, move |i| {
            f.satisfied_by(|v| (i >> (v - 1)) & 1 == 1)
        })
        .tag("approx")?;
        let params = EstimateParams::new(eps, delta, p_lower_bound, seed).tag("approx")?;
        let e = estimate_count(&s, &params).tag("approx")?;
        (s, e)
    };
    Ok(json!({
        "estimate": estimate.estimate,
        "m": estimate.samples,
        "domain_size": estimate.domain_size,
        "promised_mr": sampler.promised_mr(),
        "seed": seed,
    }))
}

fn default_trials(suite: Suite) -> u64 {
    match suite {
        Suite::Parsimony | Suite::Product | Suite::Selfreduce => 500,
        Suite::Roundtrip | Suite::Estimator => 200,
        Suite::Mr => 100,
    }
}

fn run(cli: Cli) -> Result<serde_json::Value, Failure> {
    match &cli.command {
        Command::Eval {
            structure,
            formula,
            kind,
            budget,
        } => eval_cmd(structure, formula, *kind, budget.budget()),
        Command::Reduce { target } => reduce_cmd(target),
        Command::Encode {
            source,
            input,
            output,
        } => encode_cmd(*source, input, output),
        Command::Count { method, file } => count_cmd(*method, file),
        Command::Estimate {
            eps,
            delta,
            seed,
            source,
            p_lower_bound,
        } => estimate_cmd(*eps, *delta, *seed, source, *p_lower_bound),
        Command::Check {
            suite,
            trials,
            seed,
            replay: replay_seed,
        } => Ok(to_json(&match replay_seed {
            Some(s) => replay(*suite, *s),
            None => run_suite(*suite, trials.unwrap_or(default_trials(*suite)), *seed),
        })),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error[{}]: {}", f.module, f.msg);
            ExitCode::from(1)
        }
    }
}
