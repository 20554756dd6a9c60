use thiserror::Error;

use crate::model::Candidate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{context}: preferences form a cycle: {}", fmt_cycle(.cycle))]
    Cycle { context: String, cycle: Vec<Candidate> },

    #[error("{context}: unknown candidate `{candidate}`")]
    UnknownCandidate { context: String, candidate: String },

    #[error("duplicate candidate `{0}`")]
    DuplicateCandidate(String),

    #[error("duplicate voter `{0}`")]
    DuplicateVoter(String),

    #[error("empty identifier: {0}")]
    EmptyIdentifier(String),

    #[error("unknown election `{0}`")]
    UnknownElection(String),

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("relation `{relation}` has {expected} columns but is used with {found} terms")]
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },

    #[error("election `{election}`: the order of voter `{voter}` is not total")]
    IncompleteProfile { election: String, voter: String },

    #[error("more than {cap} completions; raise the cap or use a tractable method")]
    CapExceeded { cap: u64 },

    #[error("unknown scoring rule `{0}`")]
    UnknownRule(String),

    #[error("malformed score table: {0}")]
    MalformedScoreTable(String),

    #[error("rule `{rule}` has no scoring vector for {m} candidates")]
    MissingScoreVector { rule: String, m: usize },

    #[error("rule `{rule}` is not non-increasing for {m} candidates: {vector:?}")]
    NonMonotoneRule {
        rule: String,
        m: usize,
        vector: Vec<u64>,
    },

    #[error("rule `{rule}` is constant for {m} candidates; a strict rule is required")]
    NonStrictRule { rule: String, m: usize },

    #[error("the polynomial method supports only plurality, not `{0}`")]
    UnsupportedPolyRule(String),

    #[error("query is outside the polynomial fragment: {0}")]
    NotTractable(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsafe query: {0}")]
    Safety(String),

    #[error("query must be Boolean (empty head), found {0} head variables")]
    NotBoolean(usize),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("instance too large for exhaustive search: {size} > {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("invalid database file: {0}")]
    Format(String),

    #[error("{0}")]
    Io(String),
}

fn fmt_cycle(cycle: &[Candidate]) -> String {
    let mut parts: Vec<&str> = cycle.iter().map(Candidate::as_str).collect();
    if let Some(first) = cycle.first() {
        parts.push(first.as_str());
    }
    parts.join(" > ")
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
