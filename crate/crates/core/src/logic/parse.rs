//! Recursive-descent parser for the formula surface syntax.

use super::{
    check_sentence, validate_qso, ClausePart, FoFormula, LogicError, Pi2Spec, QsoFormula,
    RhClause, RhPi1Formula, Sigma2TwoSat, SoLiteral, TwoSatClause,
};
use crate::model::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Bar,
    Amp,
    Tilde,
    Arrow,
    Equals,
    Dot,
    Colon,
    Semi,
    Comma,
    Plus,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", symbol(other)),
        }
    }
}

fn symbol(t: &Tok) -> &'static str {
    match t {
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        Tok::LBrack => "[",
        Tok::RBrack => "]",
        Tok::Bar => "|",
        Tok::Amp => "&",
        Tok::Tilde => "~",
        Tok::Arrow => "->",
        Tok::Equals => "=",
        Tok::Dot => ".",
        Tok::Colon => ":",
        Tok::Semi => ";",
        Tok::Comma => ",",
        Tok::Plus => "+",
        _ => "?",
    }
}

const KEYWORDS: &[&str] = &[
    "exists", "forall", "top", "bot", "sum", "sumfo", "pivar", "rh", "count",
];

struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, LogicError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().map_err(|_| LogicError::Syntax {
                line: tl,
                col: tc,
                msg: format!("integer literal `{s}` out of range"),
            })?)
        } else {
            let (tok, width) = match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                '[' => (Tok::LBrack, 1),
                ']' => (Tok::RBrack, 1),
                '|' => (Tok::Bar, 1),
                '&' => (Tok::Amp, 1),
                '~' => (Tok::Tilde, 1),
                '=' => (Tok::Equals, 1),
                '.' => (Tok::Dot, 1),
                ':' => (Tok::Colon, 1),
                ';' => (Tok::Semi, 1),
                ',' => (Tok::Comma, 1),
                '+' => (Tok::Plus, 1),
                '-' if chars.get(i + 1) == Some(&'>') => (Tok::Arrow, 2),
                _ => {
                    return Err(LogicError::Syntax {
                        line: tl,
                        col: tc,
                        msg: format!("unexpected character `{c}`"),
                    })
                }
            };
            advance(width, &mut i);
            tok
        };
        out.push(Token {
            tok,
            line: tl,
            col: tc,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, LogicError>;

impl Parser {
    fn new(text: &str) -> PResult<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(LogicError::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            ))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`, found {}", self.peek().describe()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected identifier, found {}", other.describe())),
        }
    }

    fn int(&mut self) -> PResult<u64> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            other => self.error(format!("expected integer, found {}", other.describe())),
        }
    }

    /// Identifiers up to (and consuming) the next `.`.
    fn var_list(&mut self) -> PResult<Vec<String>> {
        let mut vars = Vec::new();
        while *self.peek() != Tok::Dot {
            vars.push(self.ident()?);
        }
        self.bump();
        Ok(vars)
    }

    fn args(&mut self) -> PResult<Vec<String>> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.ident()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.ident()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn end(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(format!("unexpected trailing {}", self.peek().describe()))
        }
    }

    // ---- first-order formulas ----

    fn fo(&mut self) -> PResult<FoFormula> {
        let lhs = self.fo_or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.fo()?;
            return Ok(FoFormula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn fo_or(&mut self) -> PResult<FoFormula> {
        let mut lhs = self.fo_and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            lhs = FoFormula::or(lhs, self.fo_and()?);
        }
        Ok(lhs)
    }

    fn fo_and(&mut self) -> PResult<FoFormula> {
        let mut lhs = self.fo_unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = FoFormula::and(lhs, self.fo_unary()?);
        }
        Ok(lhs)
    }

    fn fo_unary(&mut self) -> PResult<FoFormula> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(FoFormula::not(self.fo_unary()?));
        }
        for (kw, exists) in [("exists", true), ("forall", false)] {
            if self.is_keyword(kw) {
                self.bump();
                let vars = self.var_list()?;
                if vars.is_empty() {
                    return self.error("quantifier needs at least one variable");
                }
                let body = self.fo()?;
                return Ok(vars.iter().rev().fold(body, |acc, x| {
                    if exists {
                        FoFormula::exists(x, acc)
                    } else {
                        FoFormula::forall(x, acc)
                    }
                }));
            }
        }
        self.fo_primary()
    }

    fn fo_primary(&mut self) -> PResult<FoFormula> {
        if self.is_keyword("top") {
            self.bump();
            return Ok(FoFormula::Top);
        }
        if self.is_keyword("bot") {
            self.bump();
            return Ok(FoFormula::Bottom);
        }
        if *self.peek() == Tok::LParen {
            self.bump();
            let f = self.fo()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        let name = self.ident()?;
        match self.peek() {
            Tok::LParen => Ok(FoFormula::Atom(name, self.args()?)),
            Tok::Equals => {
                self.bump();
                Ok(FoFormula::Eq(name, self.ident()?))
            }
            other => self.error(format!(
                "expected `(` or `=` after `{name}`, found {}",
                other.describe()
            )),
        }
    }

    // ---- clauses ----

    fn entry(&mut self) -> PResult<ClausePart> {
        match self.peek() {
            Tok::LBrace => {
                self.bump();
                let f = self.fo()?;
                self.expect(Tok::RBrace)?;
                Ok(ClausePart::Fo(f))
            }
            Tok::Tilde => {
                self.bump();
                let var = self.ident()?;
                Ok(ClausePart::So(SoLiteral {
                    positive: false,
                    var,
                    args: self.args()?,
                }))
            }
            _ if self.is_keyword("top") => {
                self.bump();
                Ok(ClausePart::Fo(FoFormula::Top))
            }
            _ if self.is_keyword("bot") => {
                self.bump();
                Ok(ClausePart::Fo(FoFormula::Bottom))
            }
            _ => {
                let var = self.ident()?;
                Ok(ClausePart::So(SoLiteral {
                    positive: true,
                    var,
                    args: self.args()?,
                }))
            }
        }
    }

    /// `[ e | e | e ; ... ]` as raw entry lists.
    fn clause_block(&mut self) -> PResult<Vec<Vec<ClausePart>>> {
        self.expect(Tok::LBrack)?;
        let mut clauses = Vec::new();
        if *self.peek() == Tok::RBrack {
            self.bump();
            return Ok(clauses);
        }
        loop {
            let mut entries = vec![self.entry()?];
            while *self.peek() == Tok::Bar {
                self.bump();
                entries.push(self.entry()?);
            }
            clauses.push(entries);
            match self.bump() {
                Tok::Semi => continue,
                Tok::RBrack => break,
                _ => {
                    self.pos -= 1;
                    return self.error(format!(
                        "expected `|`, `;` or `]`, found {}",
                        self.peek().describe()
                    ));
                }
            }
        }
        Ok(clauses)
    }

    // ---- quantitative formulas ----

    fn qso(&mut self) -> PResult<QsoFormula> {
        let mut lhs = self.qso_term()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            lhs = QsoFormula::plus(lhs, self.qso_term()?);
        }
        Ok(lhs)
    }

    fn qso_term(&mut self) -> PResult<QsoFormula> {
        if self.is_keyword("sum") {
            self.bump();
            let var = self.ident()?;
            self.expect(Tok::Colon)?;
            let arity = self.int()? as usize;
            self.expect(Tok::Dot)?;
            return Ok(QsoFormula::sum_so(&var, arity, self.qso()?));
        }
        if self.is_keyword("sumfo") {
            self.bump();
            let var = self.ident()?;
            self.expect(Tok::Dot)?;
            return Ok(QsoFormula::sum_fo(&var, self.qso()?));
        }
        match self.peek() {
            Tok::Int(_) => Ok(QsoFormula::Const(self.int()?)),
            Tok::LParen => {
                self.bump();
                let f = self.qso()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => Ok(QsoFormula::Base(self.base()?)),
        }
    }

    fn base(&mut self) -> PResult<Sigma2TwoSat> {
        let mut exists_vars = Vec::new();
        let mut forall_vars = Vec::new();
        if self.is_keyword("exists") {
            self.bump();
            exists_vars = self.var_list()?;
        }
        if self.is_keyword("forall") {
            self.bump();
            forall_vars = self.var_list()?;
        }
        if *self.peek() != Tok::LBrack {
            return self.error(format!(
                "expected a quantitative term, found {}",
                self.peek().describe()
            ));
        }
        let clauses = self
            .clause_block()?
            .into_iter()
            .map(TwoSatClause::from_parts)
            .collect::<Result<_, _>>()?;
        Ok(Sigma2TwoSat {
            exists_vars,
            forall_vars,
            clauses,
        })
    }

    fn pi2(&mut self) -> PResult<Pi2Spec> {
        self.expect_keyword("pivar")?;
        let so_var = self.ident()?;
        self.expect(Tok::Colon)?;
        let arity = self.int()? as usize;
        self.expect(Tok::Dot)?;
        self.expect_keyword("forall")?;
        let forall_vars = self.var_list()?;
        self.expect_keyword("exists")?;
        let exists_vars = self.var_list()?;
        self.expect(Tok::LBrace)?;
        let fo_part = self.fo()?;
        self.expect(Tok::RBrace)?;
        self.expect(Tok::Amp)?;
        let applied = self.ident()?;
        let args = self.args()?;
        if applied != so_var {
            return Err(LogicError::Pi2Shape(format!(
                "matrix must apply `{so_var}`, found `{applied}`"
            )));
        }
        if args != exists_vars {
            return Err(LogicError::Pi2Shape(format!(
                "`{so_var}` must be applied to the existential variables in order"
            )));
        }
        Ok(Pi2Spec {
            so_var,
            arity,
            forall_vars,
            exists_vars,
            fo_part,
        })
    }

    fn rh(&mut self) -> PResult<RhPi1Formula> {
        self.expect_keyword("rh")?;
        let mut so_vars = Vec::new();
        while *self.peek() != Tok::Dot {
            let var = self.ident()?;
            self.expect(Tok::Colon)?;
            so_vars.push((var, self.int()? as usize));
        }
        self.bump();
        self.expect_keyword("count")?;
        let count_vars = self.var_list()?;
        self.expect_keyword("forall")?;
        let forall_vars = self.var_list()?;
        let clauses = self
            .clause_block()?
            .into_iter()
            .map(RhClause::from_parts)
            .collect::<Result<_, _>>()?;
        Ok(RhPi1Formula {
            so_vars,
            count_vars,
            forall_vars,
            clauses,
        })
    }
}

/// Parses a first-order formula and checks it against `vocab`. Free
/// variables are allowed.
pub fn parse_fo(text: &str, vocab: &Vocabulary) -> Result<FoFormula, LogicError> {
    let mut p = Parser::new(text)?;
    let f = p.fo()?;
    p.end()?;
    f.check(vocab, &mut Vec::new())?;
    Ok(f)
}

/// Parses a quantitative formula; free variables are allowed (see
/// [`parse_qso_sentence`]).
pub fn parse_qso(text: &str, vocab: &Vocabulary) -> Result<QsoFormula, LogicError> {
    let mut p = Parser::new(text)?;
    let f = p.qso()?;
    p.end()?;
    validate_qso(&f, vocab)?;
    Ok(f)
}

/// Parses a quantitative sentence, rejecting free variables.
pub fn parse_qso_sentence(text: &str, vocab: &Vocabulary) -> Result<QsoFormula, LogicError> {
    let f = parse_qso(text, vocab)?;
    check_sentence(&f).map_err(LogicError::FreeVariables)?;
    Ok(f)
}

pub fn parse_pi2(text: &str, vocab: &Vocabulary) -> Result<Pi2Spec, LogicError> {
    let mut p = Parser::new(text)?;
    let spec = p.pi2()?;
    p.end()?;
    spec.validate(vocab)?;
    Ok(spec)
}

pub fn parse_rh(text: &str, vocab: &Vocabulary) -> Result<RhPi1Formula, LogicError> {
    let mut p = Parser::new(text)?;
    let f = p.rh()?;
    p.end()?;
    f.validate(vocab)?;
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaKind {
    Fo,
    Qso,
    Pi2,
    Rh,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedFormula {
    Fo(FoFormula),
    Qso(QsoFormula),
    Pi2(Pi2Spec),
    Rh(RhPi1Formula),
}

/// Dispatches on `kind`; quantitative formulas must be sentences.
pub fn parse_formula(
    text: &str,
    kind: FormulaKind,
    vocab: &Vocabulary,
) -> Result<ParsedFormula, LogicError> {
    Ok(match kind {
        FormulaKind::Fo => ParsedFormula::Fo(parse_fo(text, vocab)?),
        FormulaKind::Qso => ParsedFormula::Qso(parse_qso_sentence(text, vocab)?),
        FormulaKind::Pi2 => ParsedFormula::Pi2(parse_pi2(text, vocab)?),
        FormulaKind::Rh => ParsedFormula::Rh(parse_rh(text, vocab)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::FreeVar;

    fn vocab(symbols: &[(&str, usize)]) -> Vocabulary {
        let mut v = Vocabulary::new();
        for (n, a) in symbols {
            v.add(n, *a).unwrap();
        }
        v
    }

    #[test]
    fn single_clause_sentence() {
        let f = parse_qso_sentence("sum T:1 . exists . forall u . [ T(u) | bot | bot ]", &Vocabulary::new())
            .unwrap();
        let QsoFormula::SumSo(name, 1, body) = &f else {
            panic!("expected SumSo, got {f:?}")
        };
        assert_eq!(name, "T");
        let QsoFormula::Base(base) = body.as_ref() else {
            panic!()
        };
        assert!(base.exists_vars.is_empty());
        assert_eq!(base.forall_vars, vec!["u"]);
        assert_eq!(base.clauses.len(), 1);
    }

    #[test]
    fn three_so_literals_rejected() {
        let err = parse_qso(
            "sum T:1 . sum S:1 . sum R:1 . forall u . [ T(u) | S(u) | R(u) ]",
            &Vocabulary::new(),
        )
        .unwrap_err();
        assert!(matches!(err, LogicError::ClauseShape(_)), "{err:?}");
        assert!(matches!(
            parse_qso("forall u . [ T(u) | S(u) | R(u) | bot ]", &Vocabulary::new()),
            Err(LogicError::ClauseShape(_))
        ));
    }

    #[test]
    fn monotone_spec() {
        let v = vocab(&[("C", 2)]);
        let spec = parse_pi2("pivar T:1 . forall c . exists x . { C(c,x) } & T(x)", &v).unwrap();
        assert_eq!(spec.arity, 1);
        assert_eq!(spec.forall_vars, vec!["c"]);
        assert_eq!(spec.exists_vars, vec!["x"]);
        assert_eq!(spec.fo_part, FoFormula::atom("C", &["c", "x"]));
    }

    #[test]
    fn pi2_shape_errors() {
        let v = vocab(&[("C", 2)]);
        assert!(matches!(
            parse_pi2("pivar T:1 . forall c . exists x . { C(c,x) } & S(x)", &v),
            Err(LogicError::Pi2Shape(_))
        ));
        assert!(matches!(
            parse_pi2("pivar T:1 . forall c . exists x . { C(c,x) } & T(c)", &v),
            Err(LogicError::Pi2Shape(_))
        ));
        assert!(matches!(
            parse_pi2("pivar T:2 . forall c . exists x . { C(c,x) } & T(x)", &v),
            Err(LogicError::Pi2Shape(_))
        ));
        assert!(matches!(
            parse_pi2("pivar T:1 . forall c . exists x . { C(c,w) } & T(x)", &v),
            Err(LogicError::FreeVariables(_))
        ));
    }

    #[test]
    fn vocabulary_errors() {
        let v = vocab(&[("E", 2)]);
        assert_eq!(
            parse_qso("forall x . [ {R(x)} ]", &v),
            Err(LogicError::UnknownRelation("R".into()))
        );
        assert!(matches!(
            parse_qso("forall x . [ {E(x)} ]", &v),
            Err(LogicError::ArityMismatch { .. })
        ));
        assert!(matches!(
            parse_qso("sum X:2 . forall x . [ X(x) ]", &v),
            Err(LogicError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn shadowing_rejected() {
        let v = vocab(&[("E", 2)]);
        assert_eq!(
            parse_qso("sumfo x . forall x . [ top ]", &v),
            Err(LogicError::Shadowed("x".into()))
        );
        assert_eq!(
            parse_qso("sum X:1 . sum X:1 . [ top ]", &v),
            Err(LogicError::Shadowed("X".into()))
        );
        assert_eq!(
            parse_qso("sum E:1 . [ top ]", &v),
            Err(LogicError::Shadowed("E".into()))
        );
        assert_eq!(
            parse_qso("forall x . [ { exists x . E(x,x) } ]", &v),
            Err(LogicError::Shadowed("x".into()))
        );
        // siblings may reuse names
        assert!(parse_qso("(sumfo x . [ top ]) + sumfo x . [ top ]", &v).is_ok());
    }

    #[test]
    fn free_variables_in_sentence() {
        let err = parse_qso_sentence("[ {x = y} ]", &Vocabulary::new()).unwrap_err();
        assert_eq!(
            err,
            LogicError::FreeVariables(vec![FreeVar::Fo("x".into()), FreeVar::Fo("y".into())])
        );
        assert!(parse_qso("[ {x = y} ]", &Vocabulary::new()).is_ok());
        assert!(matches!(
            parse_qso_sentence("forall u . [ X(u) ]", &Vocabulary::new()),
            Err(LogicError::FreeVariables(_))
        ));
    }

    #[test]
    fn fo_precedence() {
        let v = vocab(&[("R", 1)]);
        let f = parse_fo("R(x) | R(y) & ~R(z) -> top", &v).unwrap();
        let expected = FoFormula::Implies(
            Box::new(FoFormula::or(
                FoFormula::atom("R", &["x"]),
                FoFormula::and(
                    FoFormula::atom("R", &["y"]),
                    FoFormula::not(FoFormula::atom("R", &["z"])),
                ),
            )),
            Box::new(FoFormula::Top),
        );
        assert_eq!(f, expected);
        let g = parse_fo("exists x y . R(x) | x = y", &v).unwrap();
        assert_eq!(
            g,
            FoFormula::exists(
                "x",
                FoFormula::exists(
                    "y",
                    FoFormula::or(FoFormula::atom("R", &["x"]), FoFormula::Eq("x".into(), "y".into()))
                )
            )
        );
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_qso("sum X:1 .\n  forall u . [ X(u) |  ]", &Vocabulary::new()).unwrap_err();
        assert!(matches!(err, LogicError::Syntax { line: 2, .. }), "{err:?}");
        assert!(parse_qso("3 +", &Vocabulary::new()).is_err());
        assert!(parse_qso("3 4", &Vocabulary::new()).is_err());
    }

    #[test]
    fn rh_formula() {
        let v = vocab(&[("E", 2)]);
        let f = parse_rh(
            "rh X:1 . count . forall y1 y2 . [ {~E(y1,y2)} | ~X(y1) | X(y2) ]",
            &v,
        )
        .unwrap();
        assert_eq!(f.clauses.len(), 1);
        assert_eq!(f.clauses[0].pos_so, Some(SoLiteral::pos("X", &["y2"])));
        assert_eq!(f.clauses[0].neg_so, Some(SoLiteral::neg("X", &["y1"])));
        assert!(matches!(
            parse_rh("rh X:1 . count . forall y . [ X(y) | X(y) ]", &v),
            Err(LogicError::RestrictedHorn(_))
        ));
        assert!(matches!(
            parse_rh("rh X:1 . count . forall y . [ Y(y) ]", &v),
            Err(LogicError::FreeVariables(_))
        ));
    }
}
