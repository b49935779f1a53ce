//! Sum-of-terms normal form and the restricted-Horn embedding.

use std::collections::BTreeSet;

use super::{
    check_sentence, ClausePart, FoFormula, LogicError, QsoFormula, RhPi1Formula, Sigma2TwoSat,
    SoLiteral, TwoSatClause,
};

/// `Σᵢ ΣX̄. Σx̄ᵢ. ∃ȳᵢ ∀z̄ᵢ ⋀ⱼ Cⱼⁱ` with one second-order prefix `X̄` shared by
/// every term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumNormalForm {
    pub so_vars: Vec<(String, usize)>,
    pub terms: Vec<NormalTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalTerm {
    pub fo_sum_vars: Vec<String>,
    pub exists_vars: Vec<String>,
    pub forall_vars: Vec<String>,
    pub clauses: Vec<TwoSatClause>,
}

impl SumNormalForm {
    /// Rebuilds an ordinary QSO sentence with the same value.
    pub fn to_qso(&self) -> QsoFormula {
        let mut terms = self.terms.iter().map(|t| {
            let base = QsoFormula::Base(Sigma2TwoSat {
                exists_vars: t.exists_vars.clone(),
                forall_vars: t.forall_vars.clone(),
                clauses: t.clauses.clone(),
            });
            let body = t
                .fo_sum_vars
                .iter()
                .rev()
                .fold(base, |acc, x| QsoFormula::sum_fo(x, acc));
            self.so_vars
                .iter()
                .rev()
                .fold(body, |acc, (x, k)| QsoFormula::sum_so(x, *k, acc))
        });
        match terms.next() {
            None => QsoFormula::Const(0),
            Some(first) => terms.fold(first, QsoFormula::plus),
        }
    }
}

enum Leaf<'a> {
    Base(&'a Sigma2TwoSat),
    Unit,
}

struct FlatTerm<'a> {
    so_prefix: Vec<(String, usize)>,
    fo_prefix: Vec<String>,
    leaf: Leaf<'a>,
}

fn flatten<'a>(
    alpha: &'a QsoFormula,
    so_prefix: &mut Vec<(String, usize)>,
    fo_prefix: &mut Vec<String>,
    out: &mut Vec<FlatTerm<'a>>,
) {
    match alpha {
        QsoFormula::Plus(a, b) => {
            flatten(a, so_prefix, fo_prefix, out);
            flatten(b, so_prefix, fo_prefix, out);
        }
        QsoFormula::SumSo(x, k, body) => {
            so_prefix.push((x.clone(), *k));
            flatten(body, so_prefix, fo_prefix, out);
            so_prefix.pop();
        }
        QsoFormula::SumFo(x, body) => {
            fo_prefix.push(x.clone());
            flatten(body, so_prefix, fo_prefix, out);
            fo_prefix.pop();
        }
        QsoFormula::Const(s) => {
            for _ in 0..*s {
                out.push(FlatTerm {
                    so_prefix: so_prefix.clone(),
                    fo_prefix: fo_prefix.clone(),
                    leaf: Leaf::Unit,
                });
            }
        }
        QsoFormula::Base(b) => out.push(FlatTerm {
            so_prefix: so_prefix.clone(),
            fo_prefix: fo_prefix.clone(),
            leaf: Leaf::Base(b),
        }),
    }
}

fn so_names(alpha: &QsoFormula, out: &mut BTreeSet<String>) {
    match alpha {
        QsoFormula::Const(_) => {}
        QsoFormula::Plus(a, b) => {
            so_names(a, out);
            so_names(b, out);
        }
        QsoFormula::SumFo(_, body) => so_names(body, out),
        QsoFormula::SumSo(x, _, body) => {
            out.insert(x.clone());
            so_names(body, out);
        }
        QsoFormula::Base(b) => {
            for c in &b.clauses {
                for p in c.parts() {
                    match p {
                        ClausePart::So(l) => {
                            out.insert(l.var.clone());
                        }
                        ClausePart::Fo(f) => f.relations(out),
                    }
                }
            }
        }
    }
}

fn fresh(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded name supply")
}

fn full_relation_clause(var: &str, args: &[String]) -> TwoSatClause {
    TwoSatClause::new([
        ClausePart::So(SoLiteral {
            positive: true,
            var: var.to_string(),
            args: args.to_vec(),
        }),
        ClausePart::Fo(FoFormula::Bottom),
        ClausePart::Fo(FoFormula::Bottom),
    ])
    .expect("one literal is a valid clause")
}

/// Brings a sentence into sum-of-terms normal form.
///
/// `+` is flattened and distributed out of binders, second-order sums are
/// hoisted in front of first-order ones, each constant `s` becomes `s` copies
/// of the unit term `ΣF.∀u F(u)` (exactly one satisfying relation), and
/// every term is padded to the shared second-order prefix with `∀ū X(ū)` for
/// each variable it does not bind.
pub fn normalize_qso(alpha: &QsoFormula) -> Result<SumNormalForm, LogicError> {
    check_sentence(alpha).map_err(LogicError::FreeVariables)?;

    let mut flat = Vec::new();
    flatten(alpha, &mut Vec::new(), &mut Vec::new(), &mut flat);

    let mut taken = BTreeSet::new();
    so_names(alpha, &mut taken);
    let unit_var = flat
        .iter()
        .any(|t| matches!(t.leaf, Leaf::Unit))
        .then(|| fresh("F", &taken));

    let mut so_vars: Vec<(String, usize)> = Vec::new();
    let mut register = |x: &str, k: usize| -> Result<(), LogicError> {
        match so_vars.iter().find(|(v, _)| v == x) {
            Some((_, a)) if *a != k => Err(LogicError::NotNormalizable(format!(
                "second-order variable `{x}` is bound with arities {a} and {k} in different terms; rename one of them"
            ))),
            Some(_) => Ok(()),
            None => {
                so_vars.push((x.to_string(), k));
                Ok(())
            }
        }
    };
    for t in &flat {
        for (i, (x, _)) in t.so_prefix.iter().enumerate() {
            if t.so_prefix[..i].iter().any(|(y, _)| y == x) {
                return Err(LogicError::NotNormalizable(format!(
                    "second-order variable `{x}` is bound twice on one path"
                )));
            }
        }
        for (x, k) in &t.so_prefix {
            register(x, *k)?;
        }
        if matches!(t.leaf, Leaf::Unit) {
            register(unit_var.as_deref().expect("unit variable"), 1)?;
        }
    }

    let terms = flat
        .into_iter()
        .map(|t| {
            let (exists_vars, mut forall_vars, mut clauses) = match t.leaf {
                Leaf::Base(b) => (b.exists_vars.clone(), b.forall_vars.clone(), b.clauses.clone()),
                Leaf::Unit => (Vec::new(), Vec::new(), Vec::new()),
            };
            let mut own: Vec<&str> = t.so_prefix.iter().map(|(x, _)| x.as_str()).collect();

            let mut fo_taken: BTreeSet<String> = t.fo_prefix.iter().cloned().collect();
            fo_taken.extend(exists_vars.iter().cloned());
            fo_taken.extend(forall_vars.iter().cloned());
            for c in &clauses {
                for p in c.parts() {
                    match p {
                        ClausePart::So(l) => fo_taken.extend(l.args.iter().cloned()),
                        ClausePart::Fo(f) => f.all_vars(&mut fo_taken),
                    }
                }
            }
            let fresh_vars = |r: usize, fo_taken: &mut BTreeSet<String>| -> Vec<String> {
                (0..r)
                    .map(|_| {
                        let u = fresh("u", fo_taken);
                        fo_taken.insert(u.clone());
                        u
                    })
                    .collect()
            };

            if let (Leaf::Unit, Some(f)) = (&t.leaf, &unit_var) {
                let us = fresh_vars(1, &mut fo_taken);
                forall_vars.extend(us.iter().cloned());
                clauses.push(full_relation_clause(f, &us));
                own.push(f);
            }
            for (x, k) in &so_vars {
                if !own.contains(&x.as_str()) {
                    let us = fresh_vars(*k, &mut fo_taken);
                    forall_vars.extend(us.iter().cloned());
                    clauses.push(full_relation_clause(x, &us));
                }
            }
            NormalTerm {
                fo_sum_vars: t.fo_prefix,
                exists_vars,
                forall_vars,
                clauses,
            }
        })
        .collect();

    Ok(SumNormalForm { so_vars, terms })
}

/// Embeds a restricted-Horn Π₁ counting formula as `ΣX̄.Σx̄.∃∅∀ȳ ⋀ clauses`.
///
/// Each clause becomes `[ fold(fo literals) | negative literal | positive literal ]`
/// with ⊥ in the missing slots.
pub fn rh_to_qso(rho: &RhPi1Formula) -> Result<QsoFormula, LogicError> {
    let clauses = rho
        .clauses
        .iter()
        .map(|c| {
            if c.pos_so.as_ref().is_some_and(|l| !l.positive)
                || c.neg_so.as_ref().is_some_and(|l| l.positive)
            {
                return Err(LogicError::RestrictedHorn(
                    "literal polarity does not match its slot".into(),
                ));
            }
            let slot = |l: &Option<SoLiteral>| match l {
                Some(l) => ClausePart::So(l.clone()),
                None => ClausePart::Fo(FoFormula::Bottom),
            };
            TwoSatClause::new([
                ClausePart::Fo(FoFormula::disjoin(c.fo_literals.iter().cloned())),
                slot(&c.neg_so),
                slot(&c.pos_so),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let base = QsoFormula::Base(Sigma2TwoSat {
        exists_vars: Vec::new(),
        forall_vars: rho.forall_vars.clone(),
        clauses,
    });
    let body = rho
        .count_vars
        .iter()
        .rev()
        .fold(base, |acc, x| QsoFormula::sum_fo(x, acc));
    Ok(rho
        .so_vars
        .iter()
        .rev()
        .fold(body, |acc, (x, k)| QsoFormula::sum_so(x, *k, acc)))
}
