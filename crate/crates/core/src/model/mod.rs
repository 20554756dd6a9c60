//! The data model: candidates, voters, orders, profiles and the
//! preference database that ties them to ordinary relations.

mod database;
mod order;
mod profile;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use database::{
    profile_from_ballots, validate_database, Ballot, Diagnostic, DiagnosticKind, ElectionData,
    Location, OrdinaryRelation, PreferenceDatabase,
};
pub use order::{build_partial_order, maximal_elements, PartialOrder, TotalOrder};
pub use profile::{CompleteProfile, PartialProfile};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(id: impl AsRef<str>) -> Self {
                $name(Arc::from(id.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(Arc::from(s))
            }
        }
    };
}

string_id!(
    /// A candidate (alternative) of an election, identified by an opaque id.
    Candidate
);
string_id!(
    /// A voter, identified by an opaque id.
    Voter
);

/// A database value: a string or an integer.
///
/// Integers order before strings; within a kind the order is numeric
/// respectively lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Str(Arc<str>),
}

impl Scalar {
    pub fn str(s: impl AsRef<str>) -> Self {
        Scalar::Str(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Scalar::Str(s) => Some(s),
            Scalar::Int(_) => None,
        }
    }
}

impl From<&Candidate> for Scalar {
    fn from(c: &Candidate) -> Self {
        Scalar::Str(c.0.clone())
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Int(v)
    }
}

impl From<&str> for Scalar {
    fn from(s: &str) -> Self {
        Scalar::str(s)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Str(s) => f.write_str(s),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Str(s) => write!(f, "{:?}", &**s),
        }
    }
}

/// The candidate universe of one election, sorted by id.
///
/// Orders and profiles refer to candidates by their index in this set, so
/// index order coincides with lexicographic id order.
#[derive(Clone, PartialEq, Eq)]
pub struct CandidateSet {
    ids: Vec<Candidate>,
    index: HashMap<Candidate, usize>,
}

impl CandidateSet {
    pub fn new<I>(candidates: I) -> Result<Arc<Self>>
    where
        I: IntoIterator,
        I::Item: Into<Candidate>,
    {
        let mut ids: Vec<Candidate> = candidates.into_iter().map(Into::into).collect();
        ids.sort();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateCandidate(w[0].to_string()));
            }
        }
        if ids.iter().any(|c| c.as_str().is_empty()) {
            return Err(Error::EmptyIdentifier("candidate".into()));
        }
        let index = ids.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(Arc::new(CandidateSet { ids, index }))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, idx: usize) -> &Candidate {
        &self.ids[idx]
    }

    pub fn index_of(&self, c: &Candidate) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn index_of_str(&self, id: &str) -> Option<usize> {
        self.index.get(&Candidate::new(id)).copied()
    }

    pub fn contains(&self, c: &Candidate) -> bool {
        self.index.contains_key(c)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Candidate> {
        self.ids.iter()
    }

    pub fn as_slice(&self) -> &[Candidate] {
        &self.ids
    }
}

impl fmt::Debug for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ids.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a CandidateSet {
    type Item = &'a Candidate;
    type IntoIter = std::slice::Iter<'a, Candidate>;

    fn into_iter(self) -> Self::IntoIter {
        self.ids.iter()
    }
}
