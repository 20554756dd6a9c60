//! Text syntax for conjunctive queries:
//!
//! ```text
//! q(c) :- Winner(plurality, "Oct-5", c), Supports(c, "pro-choice"), a > 65.
//! ```
//!
//! Variables start with a lowercase letter; string constants are quoted;
//! integers may be negative. `%` and `#` start line comments.

use std::collections::BTreeSet;

use super::ast::{Atom, CmpOp, ConjunctiveQuery, Term, WinnerAtom};
use crate::error::{Error, Result};
use crate::model::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Dot,
    Turnstile,
    Cmp(CmpOp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Int(v) => format!("integer {v}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Turnstile => "`:-`".into(),
            Tok::Cmp(op) => format!("`{}`", op.symbol()),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn err(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            pos: Pos { line: 1, column: 1 },
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '%' || c == '#' {
                while matches!(self.chars.peek(), Some(&c) if c != '\n') {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Pos)>> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let start = self.pos;
            let Some(c) = self.bump() else {
                out.push((Tok::Eof, start));
                return Ok(out);
            };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ':' => {
                    if self.bump() != Some('-') {
                        return Err(err(start, "expected `:-`"));
                    }
                    Tok::Turnstile
                }
                '=' => Tok::Cmp(CmpOp::Eq),
                '≤' => Tok::Cmp(CmpOp::Le),
                '≥' => Tok::Cmp(CmpOp::Ge),
                '≠' => Tok::Cmp(CmpOp::Ne),
                '<' => match self.chars.peek() {
                    Some('=') => {
                        self.bump();
                        Tok::Cmp(CmpOp::Le)
                    }
                    Some('>') => {
                        self.bump();
                        Tok::Cmp(CmpOp::Ne)
                    }
                    _ => Tok::Cmp(CmpOp::Lt),
                },
                '>' => {
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::Cmp(CmpOp::Ge)
                    } else {
                        Tok::Cmp(CmpOp::Gt)
                    }
                }
                '!' => {
                    if self.bump() != Some('=') {
                        return Err(err(start, "expected `!=`"));
                    }
                    Tok::Cmp(CmpOp::Ne)
                }
                '"' => Tok::Str(self.string(start)?),
                '-' | '0'..='9' => {
                    let mut digits = String::from(c);
                    while let Some(&d) = self.chars.peek() {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        digits.push(d);
                        self.bump();
                    }
                    if digits == "-" {
                        return Err(err(start, "expected a digit after `-`"));
                    }
                    let v = digits
                        .parse()
                        .map_err(|_| err(start, format!("integer `{digits}` out of range")))?;
                    Tok::Int(v)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut id = String::from(c);
                    while let Some(&d) = self.chars.peek() {
                        if !(d.is_ascii_alphanumeric() || d == '_') {
                            break;
                        }
                        id.push(d);
                        self.bump();
                    }
                    Tok::Ident(id)
                }
                other => return Err(err(start, format!("unexpected character `{other}`"))),
            };
            out.push((tok, start));
        }
    }

    fn string(&mut self, start: Pos) -> Result<String> {
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(err(start, "unterminated string")),
                Some('"') => return Ok(s),
                Some('\\') => {
                    let at = self.pos;
                    match self.bump() {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        _ => return Err(err(at, "unknown escape")),
                    }
                }
                Some(c) => s.push(c),
            }
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let (tok, pos) = self.next();
        if tok == want {
            Ok(())
        } else {
            Err(err(pos, format!("expected {}, found {}", want.describe(), tok.describe())))
        }
    }

    fn variable(&mut self) -> Result<String> {
        match self.next() {
            (Tok::Ident(id), pos) => {
                if id.starts_with(|c: char| c.is_ascii_lowercase()) {
                    Ok(id)
                } else {
                    Err(err(pos, format!("`{id}` is not a variable (variables start lowercase)")))
                }
            }
            (tok, pos) => Err(err(pos, format!("expected a variable, found {}", tok.describe()))),
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.next() {
            (Tok::Ident(id), pos) => {
                if id.starts_with(|c: char| c.is_ascii_lowercase()) {
                    Ok(Term::Var(id))
                } else {
                    Err(err(
                        pos,
                        format!("`{id}` is neither a variable nor a constant; quote string constants"),
                    ))
                }
            }
            (Tok::Str(s), _) => Ok(Term::Const(Scalar::str(s))),
            (Tok::Int(v), _) => Ok(Term::Const(Scalar::Int(v))),
            (tok, pos) => Err(err(pos, format!("expected a term, found {}", tok.describe()))),
        }
    }

    fn query(&mut self) -> Result<ConjunctiveQuery> {
        let name = match self.next() {
            (Tok::Ident(id), _) => id,
            (tok, pos) => return Err(err(pos, format!("expected a query name, found {}", tok.describe()))),
        };
        self.expect(Tok::LParen)?;
        let mut head = Vec::new();
        if self.peek() != &Tok::RParen {
            head.push(self.variable()?);
            while self.peek() == &Tok::Comma {
                self.next();
                head.push(self.variable()?);
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Turnstile)?;
        let mut body = vec![self.atom()?];
        while self.peek() == &Tok::Comma {
            self.next();
            body.push(self.atom()?);
        }
        self.expect(Tok::Dot)?;
        if self.peek() != &Tok::Eof {
            return Err(err(self.pos(), format!("unexpected {} after the query", self.peek().describe())));
        }
        Ok(ConjunctiveQuery { name, head, body })
    }

    fn atom(&mut self) -> Result<Atom> {
        if let (Tok::Ident(name), Tok::LParen) = (self.peek().clone(), self.peek2()) {
            let pos = self.pos();
            self.next();
            self.next();
            if name == "Winner" {
                return self.winner(pos);
            }
            let mut terms = vec![self.term()?];
            while self.peek() == &Tok::Comma {
                self.next();
                terms.push(self.term()?);
            }
            self.expect(Tok::RParen)?;
            return Ok(Atom::Ordinary {
                relation: name,
                terms,
            });
        }
        let left = self.term()?;
        let op = match self.next() {
            (Tok::Cmp(op), _) => op,
            (tok, pos) => {
                return Err(err(pos, format!("expected a comparison operator, found {}", tok.describe())))
            }
        };
        let right = self.term()?;
        Ok(Atom::Comparison { left, op, right })
    }

    fn winner(&mut self, start: Pos) -> Result<Atom> {
        let rule = match self.next() {
            (Tok::Ident(id), _) | (Tok::Str(id), _) => id,
            (tok, pos) => return Err(err(pos, format!("expected a rule name, found {}", tok.describe()))),
        };
        self.expect(Tok::Comma)?;
        let election = match self.next() {
            (Tok::Str(s), _) => Scalar::str(s),
            (Tok::Int(v), _) => Scalar::Int(v),
            (tok, pos) => {
                return Err(err(
                    pos,
                    format!("the election of a Winner atom must be a constant, found {}", tok.describe()),
                ))
            }
        };
        self.expect(Tok::Comma)?;
        let candidate = self.term()?;
        if self.peek() != &Tok::RParen {
            return Err(err(start, "Winner takes exactly 3 terms"));
        }
        self.next();
        Ok(Atom::Winner(WinnerAtom {
            rule,
            election,
            candidate,
        }))
    }
}

/// Head variables and comparison variables must occur in an ordinary or
/// Winner atom.
pub(crate) fn check_safety(q: &ConjunctiveQuery) -> Result<()> {
    let bound: BTreeSet<&str> = q
        .body
        .iter()
        .filter(|a| !matches!(a, Atom::Comparison { .. }))
        .flat_map(Atom::variables)
        .collect();
    for v in &q.head {
        if !bound.contains(v.as_str()) {
            return Err(Error::Safety(format!(
                "head variable `{v}` does not occur in a relational or Winner atom"
            )));
        }
    }
    for a in &q.body {
        if let Atom::Comparison { .. } = a {
            for v in a.variables() {
                if !bound.contains(v) {
                    return Err(Error::Safety(format!(
                        "comparison variable `{v}` does not occur in a relational or Winner atom"
                    )));
                }
            }
        }
    }
    Ok(())
}

pub fn parse_query(text: &str) -> Result<ConjunctiveQuery> {
    let toks = Lexer::new(text).tokens()?;
    let q = Parser { toks, at: 0 }.query()?;
    check_safety(&q)?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q1_shape() {
        let q = parse_query(include_str!("../../../../data/q1.pq")).unwrap();
        assert!(q.is_boolean());
        assert_eq!(q.winner_atoms().count(), 1);
        assert_eq!(q.body.len(), 2);
        assert_eq!(
            q.to_string(),
            r#"q1() :- Winner(plurality, "Oct-5", c), Supports(c, "pro-choice")."#
        );
    }

    #[test]
    fn q3_shape() {
        let q = parse_query(include_str!("../../../../data/q3.pq")).unwrap();
        let w: Vec<_> = q.winner_atoms().map(|w| w.candidate.clone()).collect();
        assert_eq!(w, [Term::var("c"), Term::var("d")]);
        assert!(q.variables().contains("i"));
    }

    #[test]
    fn unsafe_head() {
        assert!(matches!(
            parse_query(r#"q(c) :- Winner(plurality, "e", d)."#),
            Err(Error::Safety(_))
        ));
        assert!(matches!(
            parse_query(r#"q() :- R(x), y > 3."#),
            Err(Error::Safety(_))
        ));
    }

    #[test]
    fn error_positions() {
        match parse_query("q() :- R(x),\n  S(Ann).") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("{other:?}"),
        }
        match parse_query("q() :- R(x)") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 12)),
            other => panic!("{other:?}"),
        }
        assert!(parse_query(r#"q() :- Winner(plurality, e, c)."#).is_err());
        assert!(parse_query(r#"q() :- Winner(plurality, "e")."#).is_err());
        assert!(parse_query(r#"q() :- Winner(plurality, "e", c, d)."#).is_err());
        assert!(parse_query(r#"q() :- R(x). extra"#).is_err());
        assert!(parse_query(r#"q() :- R("unterminated)."#).is_err());
    }

    #[test]
    fn comparisons_comments_and_negatives() {
        let q = parse_query("# header\nq(x) :- R(x, y), y >= -3, x != \"a\", y ≤ 10. % done").unwrap();
        assert_eq!(q.to_string(), r#"q(x) :- R(x, y), y >= -3, x != "a", y <= 10."#);
        let q = parse_query(r#"q() :- Winner("2-approval", 7, "a\"b")."#).unwrap();
        assert_eq!(q.to_string(), r#"q() :- Winner("2-approval", 7, "a\"b")."#);
    }
}
