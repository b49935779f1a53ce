//! Canonical pretty-printing. Output parses back to the same AST.

use std::fmt::{self, Display, Formatter};

use super::{
    ClausePart, FoFormula, Pi2Spec, QsoFormula, RhClause, RhPi1Formula, Sigma2TwoSat, SoLiteral,
    TwoSatClause,
};

const PREC_QUANT: u8 = 0;
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

fn write_fo(f: &mut Formatter<'_>, phi: &FoFormula, ctx: u8) -> fmt::Result {
    use FoFormula::*;
    let own = match phi {
        Exists(..) | Forall(..) => PREC_QUANT,
        Implies(..) => PREC_IMPLIES,
        Or(..) => PREC_OR,
        And(..) => PREC_AND,
        _ => PREC_UNARY,
    };
    let paren = own < ctx;
    if paren {
        f.write_str("(")?;
    }
    match phi {
        Eq(a, b) => write!(f, "{a} = {b}")?,
        Atom(r, vs) => write!(f, "{r}({})", vs.join(","))?,
        Top => f.write_str("top")?,
        Bottom => f.write_str("bot")?,
        Not(g) => {
            f.write_str("~")?;
            write_fo(f, g, PREC_UNARY)?;
        }
        Or(a, b) => {
            write_fo(f, a, PREC_OR)?;
            f.write_str(" | ")?;
            write_fo(f, b, PREC_OR + 1)?;
        }
        And(a, b) => {
            write_fo(f, a, PREC_AND)?;
            f.write_str(" & ")?;
            write_fo(f, b, PREC_AND + 1)?;
        }
        Implies(a, b) => {
            write_fo(f, a, PREC_IMPLIES + 1)?;
            f.write_str(" -> ")?;
            write_fo(f, b, PREC_IMPLIES)?;
        }
        Exists(x, g) => {
            write!(f, "exists {x} . ")?;
            write_fo(f, g, PREC_QUANT)?;
        }
        Forall(x, g) => {
            write!(f, "forall {x} . ")?;
            write_fo(f, g, PREC_QUANT)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl Display for FoFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_fo(f, self, PREC_QUANT)
    }
}

impl Display for SoLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}({})", self.var, self.args.join(","))
    }
}

impl Display for ClausePart {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            ClausePart::So(l) => l.fmt(f),
            ClausePart::Fo(FoFormula::Top) => f.write_str("top"),
            ClausePart::Fo(FoFormula::Bottom) => f.write_str("bot"),
            ClausePart::Fo(phi) => write!(f, "{{ {phi} }}"),
        }
    }
}

impl Display for TwoSatClause {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.parts();
        write!(f, "{a} | {b} | {c}")
    }
}

fn write_clause_block<T: Display>(f: &mut Formatter<'_>, clauses: &[T]) -> fmt::Result {
    if clauses.is_empty() {
        return f.write_str("[ ]");
    }
    f.write_str("[ ")?;
    for (i, c) in clauses.iter().enumerate() {
        if i > 0 {
            f.write_str(" ; ")?;
        }
        c.fmt(f)?;
    }
    f.write_str(" ]")
}

fn write_vars(f: &mut Formatter<'_>, kw: &str, vars: &[String]) -> fmt::Result {
    f.write_str(kw)?;
    for v in vars {
        write!(f, " {v}")?;
    }
    f.write_str(" . ")
}

impl Display for Sigma2TwoSat {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_vars(f, "exists", &self.exists_vars)?;
        write_vars(f, "forall", &self.forall_vars)?;
        write_clause_block(f, &self.clauses)
    }
}

fn write_qso(f: &mut Formatter<'_>, alpha: &QsoFormula, ctx: u8) -> fmt::Result {
    match alpha {
        QsoFormula::Base(b) => b.fmt(f),
        QsoFormula::Const(s) => write!(f, "{s}"),
        QsoFormula::Plus(a, b) => {
            if ctx > 1 {
                f.write_str("(")?;
            }
            write_qso(f, a, 1)?;
            f.write_str(" + ")?;
            write_qso(f, b, 2)?;
            if ctx > 1 {
                f.write_str(")")?;
            }
            Ok(())
        }
        QsoFormula::SumFo(..) | QsoFormula::SumSo(..) => {
            if ctx > 0 {
                f.write_str("(")?;
            }
            match alpha {
                QsoFormula::SumFo(x, body) => {
                    write!(f, "sumfo {x} . ")?;
                    write_qso(f, body, 0)?;
                }
                QsoFormula::SumSo(x, k, body) => {
                    write!(f, "sum {x}:{k} . ")?;
                    write_qso(f, body, 0)?;
                }
                _ => unreachable!(),
            }
            if ctx > 0 {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl Display for QsoFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_qso(f, self, 0)
    }
}

impl Display for Pi2Spec {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "pivar {}:{} . ", self.so_var, self.arity)?;
        write_vars(f, "forall", &self.forall_vars)?;
        write_vars(f, "exists", &self.exists_vars)?;
        write!(
            f,
            "{{ {} }} & {}({})",
            self.fo_part,
            self.so_var,
            self.exists_vars.join(",")
        )
    }
}

impl Display for RhClause {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .fo_literals
            .iter()
            .map(|phi| ClausePart::Fo(phi.clone()).to_string())
            .chain(self.neg_so.iter().map(|l| l.to_string()))
            .chain(self.pos_so.iter().map(|l| l.to_string()))
            .collect();
        if parts.is_empty() {
            f.write_str("bot")
        } else {
            f.write_str(&parts.join(" | "))
        }
    }
}

impl Display for RhPi1Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("rh")?;
        for (x, k) in &self.so_vars {
            write!(f, " {x}:{k}")?;
        }
        f.write_str(" . ")?;
        write_vars(f, "count", &self.count_vars)?;
        write_vars(f, "forall", &self.forall_vars)?;
        write_clause_block(f, &self.clauses)
    }
}

#[cfg(test)]
mod tests {
    use crate::logic::{parse_fo, parse_qso};
    use crate::model::Vocabulary;

    #[test]
    fn reprint_is_stable() {
        let mut v = Vocabulary::new();
        v.add("E", 2).unwrap();
        v.add("R", 1).unwrap();
        for src in [
            "sum X:1 . sumfo x . exists y . forall z . [ X(x) | { E(x,y) & ~R(z) } | ~X(z) ; top | bot | bot ]",
            "(sumfo x . [ { R(x) } ]) + 3 + (2 + exists . forall . [ ])",
            "sumfo x . (sumfo y . [ { x = y } ]) + [ top ]",
        ] {
            let a = parse_qso(src, &v).unwrap();
            let printed = a.to_string();
            assert_eq!(parse_qso(&printed, &v).unwrap(), a, "{printed}");
        }
        for src in [
            "(exists x . R(x)) & R(y)",
            "~(forall x . R(x) -> R(x)) | (R(y) -> R(y)) -> bot",
            "R(x) | (R(y) | R(z))",
        ] {
            let a = parse_fo(src, &v).unwrap();
            assert_eq!(parse_fo(&a.to_string(), &v).unwrap(), a, "{a}");
        }
    }
}
