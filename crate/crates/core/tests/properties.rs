use proptest::prelude::*;
use qsocount::check::{
    random_d2s, random_monotone, random_pi2, random_qso, random_structure, trial_rng,
};
use qsocount::eval::{pi2_count, qso_eval, EvalBudget};
use qsocount::logic::{check_sentence, normalize_qso, parse_qso_sentence, QsoFormula};
use qsocount::model::{parse_structure, serialize_structure, Vocabulary};
use qsocount::propcount::{
    count_bruteforce, count_monotone_bruteforce, count_selfreduce, d2s_satisfiable,
    parse_d2s, parse_dimacs_monotone, restrict, serialize_d2s, serialize_dimacs,
    Disj2SatFormula, MonotoneCnf,
};
use qsocount::reductions::{
    encode_vc, reduce_pi2_to_monotone, reduce_qso_to_d2s, Graph, ProductResult,
};

fn vocab() -> Vocabulary {
    let mut v = Vocabulary::new();
    v.add("R", 1).unwrap();
    v.add("E", 2).unwrap();
    v
}

// Counts by evaluating every clause literal by literal on every assignment.
fn naive_d2s(f: &Disj2SatFormula) -> u128 {
    let v = f.num_vars();
    (0u64..1 << v)
        .filter(|bits| {
            f.disjuncts().iter().any(|d| {
                d.clauses().iter().all(|c| {
                    c.iter().any(|&l| {
                        let val = bits >> (l.unsigned_abs() - 1) & 1 == 1;
                        if l > 0 { val } else { !val }
                    })
                })
            })
        })
        .count() as u128
}

fn naive_monotone(f: &MonotoneCnf) -> u128 {
    (0u64..1 << f.num_vars())
        .filter(|bits| {
            f.clauses()
                .iter()
                .all(|c| c.iter().any(|&x| bits >> (x - 1) & 1 == 1))
        })
        .count() as u128
}

fn naive_vertex_covers(g: &Graph) -> u128 {
    (0u64..1 << g.vertices)
        .filter(|s| g.edges.iter().all(|&(u, v)| s >> u & 1 == 1 || s >> v & 1 == 1))
        .count() as u128
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn structure_round_trip(seed in any::<u64>()) {
        let a = random_structure(&mut trial_rng(seed), 4);
        let text = serialize_structure(&a);
        let b = parse_structure(&text).unwrap();
        prop_assert_eq!(serialize_structure(&b), text);
        prop_assert_eq!(b, a);
    }

    #[test]
    fn d2s_text_round_trip(seed in any::<u64>()) {
        let f = random_d2s(&mut trial_rng(seed), 12);
        let text = serialize_d2s(&f).unwrap();
        let g = parse_d2s(&text).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(serialize_d2s(&g).unwrap(), text);
    }

    #[test]
    fn dimacs_round_trip(seed in any::<u64>()) {
        let f = random_monotone(&mut trial_rng(seed), 12);
        let g = parse_dimacs_monotone(&serialize_dimacs(&f)).unwrap();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn qso_display_reparses(seed in any::<u64>()) {
        let alpha = random_qso(&mut trial_rng(seed), 3, 22);
        prop_assert!(check_sentence(&alpha).is_ok());
        prop_assert_eq!(parse_qso_sentence(&alpha.to_string(), &vocab()).unwrap(), alpha);
    }

    #[test]
    fn counters_agree_with_naive(seed in any::<u64>()) {
        let f = random_d2s(&mut trial_rng(seed), 12);
        let expected = naive_d2s(&f);
        prop_assert_eq!(count_bruteforce(&f).unwrap().count, expected);
        prop_assert_eq!(count_selfreduce(&f).count, expected);
        prop_assert_eq!(d2s_satisfiable(&f), expected > 0);
    }

    #[test]
    fn restriction_splits_the_count(seed in any::<u64>(), pick in any::<u32>()) {
        let f = random_d2s(&mut trial_rng(seed), 10);
        let v = pick % f.num_vars() + 1;
        let lo = count_bruteforce(&restrict(&f, v, false).unwrap()).unwrap().count;
        let hi = count_bruteforce(&restrict(&f, v, true).unwrap()).unwrap().count;
        prop_assert_eq!(lo + hi, naive_d2s(&f));
    }

    #[test]
    fn sum_is_additive(seed in any::<u64>()) {
        let mut rng = trial_rng(seed);
        let a = random_structure(&mut rng, 3);
        let n = a.universe_size();
        let alpha = random_qso(&mut rng, n, 16);
        let beta = random_qso(&mut rng, n, 16);
        let budget = EvalBudget::default();
        let both = qso_eval(&a, &QsoFormula::plus(alpha.clone(), beta.clone()), &budget).unwrap();
        let sum = qso_eval(&a, &alpha, &budget).unwrap() + qso_eval(&a, &beta, &budget).unwrap();
        prop_assert_eq!(both, sum);
    }

    #[test]
    fn reduction_preserves_value(seed in any::<u64>()) {
        let mut rng = trial_rng(seed);
        let a = random_structure(&mut rng, 3);
        let alpha = random_qso(&mut rng, a.universe_size(), 18);
        let budget = EvalBudget::default();
        let nf = normalize_qso(&alpha).unwrap();
        let (f, table) = reduce_qso_to_d2s(&nf, &a, &budget).unwrap();
        prop_assert_eq!(table.num_vars(), f.num_vars());
        prop_assert_eq!(naive_d2s(&f), qso_eval(&a, &alpha, &budget).unwrap());
    }

    #[test]
    fn product_reduction_factors(seed in any::<u64>()) {
        let mut rng = trial_rng(seed);
        let a = random_structure(&mut rng, 3);
        let spec = random_pi2(&mut rng);
        let budget = EvalBudget::default();
        let expected = pi2_count(&a, &spec, &budget).unwrap();
        match reduce_pi2_to_monotone(&spec, &a, &budget).unwrap() {
            ProductResult::Unsatisfiable => prop_assert_eq!(expected, 0),
            ProductResult::Reduced { cnf, exponent, atoms } => {
                prop_assert_eq!(atoms.len() as u32, cnf.num_vars());
                let count = naive_monotone(&cnf);
                prop_assert_eq!(count, count_monotone_bruteforce(&cnf).unwrap().count);
                prop_assert_eq!(count << exponent, expected);
            }
        }
    }

    #[test]
    fn vertex_cover_encoding(
        vertices in 1usize..5,
        raw in proptest::collection::vec((0usize..5, 0usize..5), 1..5),
    ) {
        let edges: Vec<_> = raw.into_iter().map(|(u, v)| (u % vertices, v % vertices)).collect();
        let g = Graph::new(vertices, edges).unwrap();
        let expected = naive_vertex_covers(&g);
        prop_assert_eq!(g.count_vertex_covers(), expected);
        let (a, spec, correction) = encode_vc(&g).unwrap();
        let value = pi2_count(&a, &spec, &EvalBudget::default()).unwrap();
        prop_assert_eq!(value, expected << correction);
    }
}
