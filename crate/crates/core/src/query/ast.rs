use std::collections::BTreeSet;
use std::fmt;

use crate::model::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(Scalar),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn string(s: impl AsRef<str>) -> Self {
        Term::Const(Scalar::str(s))
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }

    /// Integers compare numerically and strings lexicographically. An
    /// integer and a string are only ever unequal.
    pub fn holds(self, l: &Scalar, r: &Scalar) -> bool {
        use std::cmp::Ordering::*;
        let ord = match (l, r) {
            (Scalar::Int(a), Scalar::Int(b)) => a.cmp(b),
            (Scalar::Str(a), Scalar::Str(b)) => a.cmp(b),
            _ => return self == CmpOp::Ne,
        };
        match self {
            CmpOp::Lt => ord == Less,
            CmpOp::Le => ord != Greater,
            CmpOp::Eq => ord == Equal,
            CmpOp::Ne => ord != Equal,
            CmpOp::Ge => ord != Less,
            CmpOp::Gt => ord == Greater,
        }
    }
}

/// `Winner(rule, election, candidate)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WinnerAtom {
    /// The rule as written in the query.
    pub rule: String,
    pub election: Scalar,
    pub candidate: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Ordinary { relation: String, terms: Vec<Term> },
    Winner(WinnerAtom),
    Comparison { left: Term, op: CmpOp, right: Term },
}

impl Atom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Ordinary { terms, .. } => terms.iter().collect(),
            Atom::Winner(w) => vec![&w.candidate],
            Atom::Comparison { left, right, .. } => vec![left, right],
        }
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        self.terms().into_iter().filter_map(Term::as_var).collect()
    }
}

/// `name(head) :- body.`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConjunctiveQuery {
    pub name: String,
    pub head: Vec<String>,
    pub body: Vec<Atom>,
}

impl ConjunctiveQuery {
    pub fn is_boolean(&self) -> bool {
        self.head.is_empty()
    }

    pub fn winner_atoms(&self) -> impl Iterator<Item = &WinnerAtom> {
        self.body.iter().filter_map(|a| match a {
            Atom::Winner(w) => Some(w),
            _ => None,
        })
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        self.body.iter().flat_map(Atom::variables).collect()
    }
}

pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn write_scalar(f: &mut fmt::Formatter<'_>, s: &Scalar) -> fmt::Result {
    match s {
        Scalar::Int(v) => write!(f, "{v}"),
        Scalar::Str(s) => f.write_str(&quote(s)),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write_scalar(f, c),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Ordinary { relation, terms } => {
                write!(f, "{relation}(")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            Atom::Winner(w) => {
                f.write_str("Winner(")?;
                if is_identifier(&w.rule) {
                    f.write_str(&w.rule)?;
                } else {
                    f.write_str(&quote(&w.rule))?;
                }
                f.write_str(", ")?;
                write_scalar(f, &w.election)?;
                write!(f, ", {})", w.candidate)
            }
            Atom::Comparison { left, op, right } => write!(f, "{left} {} {right}", op.symbol()),
        }
    }
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) :- ", self.name, self.head.join(", "))?;
        for (i, a) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(".")
    }
}
