use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Candidate, CandidateSet, PartialOrder, PartialProfile, Scalar, Voter};
use crate::error::{Error, Result};

/// A named table of scalar tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdinaryRelation {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Scalar>>,
}

impl OrdinaryRelation {
    /// Builds a relation, rejecting rows of the wrong width and dropping
    /// duplicate rows.
    pub fn new(
        name: impl Into<String>,
        columns: Vec<String>,
        rows: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        let name = name.into();
        if let Some(bad) = rows.iter().find(|r| r.len() != columns.len()) {
            return Err(Error::ArityMismatch {
                relation: name,
                expected: columns.len(),
                found: bad.len(),
            });
        }
        let mut seen = BTreeSet::new();
        let rows = rows.into_iter().filter(|r| seen.insert(r.clone())).collect();
        Ok(OrdinaryRelation {
            name,
            columns,
            rows,
        })
    }

    pub fn arity(&self) -> usize {
        self.columns.len()
    }
}

/// One voter's stated pairwise preferences in one election.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ballot {
    pub voter: Voter,
    #[serde(default)]
    pub prefers: Vec<(Candidate, Candidate)>,
}

/// The declared candidates and voters of an election and its ballot rows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectionData {
    pub candidates: Vec<Candidate>,
    #[serde(default)]
    pub voters: Vec<Voter>,
    #[serde(default)]
    pub ballots: Vec<Ballot>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationFile {
    columns: Vec<String>,
    #[serde(default)]
    rows: Vec<Vec<Scalar>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatabaseFile {
    #[serde(default)]
    relations: BTreeMap<String, RelationFile>,
    #[serde(default)]
    elections: BTreeMap<String, ElectionData>,
}

/// Ordinary relations plus, per election, candidates and (partial) ballots.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PreferenceDatabase {
    relations: BTreeMap<String, OrdinaryRelation>,
    elections: BTreeMap<String, ElectionData>,
}

impl PreferenceDatabase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses the JSON database format. Structural problems (duplicate rows,
    /// ballot cycles, ...) are left for [`validate_database`].
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: DatabaseFile = serde_json::from_str(text)?;
        let relations = file
            .relations
            .into_iter()
            .map(|(name, r)| {
                let rel = OrdinaryRelation {
                    name: name.clone(),
                    columns: r.columns,
                    rows: r.rows,
                };
                (name, rel)
            })
            .collect();
        Ok(PreferenceDatabase {
            relations,
            elections: file.elections,
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        let file = DatabaseFile {
            relations: self
                .relations
                .iter()
                .map(|(name, r)| {
                    let rf = RelationFile {
                        columns: r.columns.clone(),
                        rows: r.rows.clone(),
                    };
                    (name.clone(), rf)
                })
                .collect(),
            elections: self.elections.clone(),
        };
        serde_json::to_string_pretty(&file).expect("database serializes")
    }

    pub fn insert_relation(&mut self, relation: OrdinaryRelation) {
        self.relations.insert(relation.name.clone(), relation);
    }

    pub fn insert_election(&mut self, id: impl Into<String>, data: ElectionData) {
        self.elections.insert(id.into(), data);
    }

    pub fn relation(&self, name: &str) -> Option<&OrdinaryRelation> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = &OrdinaryRelation> {
        self.relations.values()
    }

    pub fn election(&self, id: &str) -> Option<&ElectionData> {
        self.elections.get(id)
    }

    pub fn elections(&self) -> impl Iterator<Item = (&str, &ElectionData)> {
        self.elections.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn candidate_set(&self, election: &str) -> Result<Arc<CandidateSet>> {
        let data = self
            .election(election)
            .ok_or_else(|| Error::UnknownElection(election.to_string()))?;
        CandidateSet::new(data.candidates.iter().cloned())
    }

    /// Every scalar in a relation plus every candidate id.
    pub fn active_domain(&self) -> BTreeSet<Scalar> {
        let mut dom: BTreeSet<Scalar> = self
            .relations
            .values()
            .flat_map(|r| r.rows.iter().flatten().cloned())
            .collect();
        for data in self.elections.values() {
            dom.extend(data.candidates.iter().map(Scalar::from));
        }
        dom
    }
}

/// Groups the ballot rows of `election` by voter and builds every voter's
/// partial order. Declared voters without ballot rows get the empty order.
/// Voters appear sorted by id.
pub fn profile_from_ballots(db: &PreferenceDatabase, election: &str) -> Result<PartialProfile> {
    let data = db
        .election(election)
        .ok_or_else(|| Error::UnknownElection(election.to_string()))?;
    let candidates = CandidateSet::new(data.candidates.iter().cloned())?;

    let mut grouped: BTreeMap<&Voter, Vec<(usize, usize)>> = BTreeMap::new();
    for v in &data.voters {
        grouped.entry(v).or_default();
    }
    for ballot in &data.ballots {
        let context = || format!("election `{election}`, voter `{}`", ballot.voter);
        let pairs = grouped.entry(&ballot.voter).or_default();
        for (a, b) in &ballot.prefers {
            let lookup = |c: &Candidate| {
                candidates.index_of(c).ok_or_else(|| Error::UnknownCandidate {
                    context: context(),
                    candidate: c.to_string(),
                })
            };
            pairs.push((lookup(a)?, lookup(b)?));
        }
    }

    let mut entries = Vec::with_capacity(grouped.len());
    for (voter, pairs) in grouped {
        if voter.as_str().is_empty() {
            return Err(Error::EmptyIdentifier(format!("voter in election `{election}`")));
        }
        let order = PartialOrder::from_index_pairs(candidates.clone(), pairs).map_err(|e| match e {
            Error::Cycle { cycle, .. } => Error::Cycle {
                context: format!("election `{election}`, voter `{voter}`"),
                cycle,
            },
            other => other,
        })?;
        entries.push((voter.clone(), order));
    }
    PartialProfile::new(election, candidates, entries)
}

/// Where a [`Diagnostic`] applies.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub election: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub voter: Option<String>,
}

impl Location {
    fn relation(name: &str) -> Self {
        Location {
            relation: Some(name.to_string()),
            ..Default::default()
        }
    }

    fn election(id: &str) -> Self {
        Location {
            election: Some(id.to_string()),
            ..Default::default()
        }
    }

    fn voter(election: &str, voter: &Voter) -> Self {
        Location {
            election: Some(election.to_string()),
            voter: Some(voter.to_string()),
            ..Default::default()
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(r) = &self.relation {
            parts.push(format!("relation {r}"));
        }
        if let Some(e) = &self.election {
            parts.push(format!("election {e}"));
        }
        if let Some(v) = &self.voter {
            parts.push(format!("voter {v}"));
        }
        f.write_str(&parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagnosticKind {
    DuplicateRow { row: Vec<Scalar> },
    ArityMismatch { expected: usize, found: usize },
    DuplicateColumn { column: String },
    ReservedRelationName,
    EmptyIdentifier { what: String },
    DuplicateCandidate { candidate: Candidate },
    DuplicateVoter { voter: Voter },
    UnknownCandidate { candidate: Candidate },
    Cycle { cycle: Vec<Candidate> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub location: Location,
    #[serde(flatten)]
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.location)?;
        match &self.kind {
            DiagnosticKind::DuplicateRow { row } => write!(f, "duplicate row {row:?}"),
            DiagnosticKind::ArityMismatch { expected, found } => {
                write!(f, "row has {found} values, expected {expected}")
            }
            DiagnosticKind::DuplicateColumn { column } => write!(f, "duplicate column `{column}`"),
            DiagnosticKind::ReservedRelationName => f.write_str("`Winner` is a reserved name"),
            DiagnosticKind::EmptyIdentifier { what } => write!(f, "empty {what} id"),
            DiagnosticKind::DuplicateCandidate { candidate } => {
                write!(f, "duplicate candidate `{candidate}`")
            }
            DiagnosticKind::DuplicateVoter { voter } => write!(f, "duplicate voter `{voter}`"),
            DiagnosticKind::UnknownCandidate { candidate } => {
                write!(f, "unknown candidate `{candidate}`")
            }
            DiagnosticKind::Cycle { cycle } => {
                let names: Vec<&str> = cycle.iter().map(Candidate::as_str).collect();
                write!(f, "preference cycle {}", names.join(" > "))
            }
        }
    }
}

/// Checks every structural invariant of `db`; an empty result means the
/// database is well formed.
pub fn validate_database(db: &PreferenceDatabase) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut push = |location: Location, kind: DiagnosticKind| out.push(Diagnostic { location, kind });

    for rel in db.relations() {
        let loc = || Location::relation(&rel.name);
        if rel.name == "Winner" {
            push(loc(), DiagnosticKind::ReservedRelationName);
        }
        let mut cols = BTreeSet::new();
        for c in &rel.columns {
            if !cols.insert(c) {
                push(loc(), DiagnosticKind::DuplicateColumn { column: c.clone() });
            }
        }
        let mut rows = BTreeSet::new();
        for row in &rel.rows {
            if row.len() != rel.columns.len() {
                push(
                    loc(),
                    DiagnosticKind::ArityMismatch {
                        expected: rel.columns.len(),
                        found: row.len(),
                    },
                );
            } else if !rows.insert(row) {
                push(loc(), DiagnosticKind::DuplicateRow { row: row.clone() });
            }
        }
    }

    for (id, data) in db.elections() {
        let mut known = BTreeMap::new();
        for c in &data.candidates {
            if c.as_str().is_empty() {
                push(
                    Location::election(id),
                    DiagnosticKind::EmptyIdentifier {
                        what: "candidate".into(),
                    },
                );
            }
            if known.insert(c.clone(), known.len()).is_some() {
                push(
                    Location::election(id),
                    DiagnosticKind::DuplicateCandidate {
                        candidate: c.clone(),
                    },
                );
            }
        }
        let mut declared = BTreeSet::new();
        for v in &data.voters {
            if v.as_str().is_empty() {
                push(
                    Location::election(id),
                    DiagnosticKind::EmptyIdentifier {
                        what: "voter".into(),
                    },
                );
            }
            if !declared.insert(v) {
                push(
                    Location::election(id),
                    DiagnosticKind::DuplicateVoter { voter: v.clone() },
                );
            }
        }

        let Ok(set) = CandidateSet::new(known.keys().cloned()) else {
            continue;
        };
        let mut grouped: BTreeMap<&Voter, Vec<(usize, usize)>> = BTreeMap::new();
        for ballot in &data.ballots {
            if ballot.voter.as_str().is_empty() {
                push(
                    Location::election(id),
                    DiagnosticKind::EmptyIdentifier {
                        what: "voter".into(),
                    },
                );
            }
            let pairs = grouped.entry(&ballot.voter).or_default();
            for (a, b) in &ballot.prefers {
                let mut resolve = |c: &Candidate| {
                    let idx = set.index_of(c);
                    if idx.is_none() {
                        push(
                            Location::voter(id, &ballot.voter),
                            DiagnosticKind::UnknownCandidate { candidate: c.clone() },
                        );
                    }
                    idx
                };
                let (ia, ib) = (resolve(a), resolve(b));
                if let (Some(ia), Some(ib)) = (ia, ib) {
                    pairs.push((ia, ib));
                }
            }
        }
        for (voter, pairs) in grouped {
            if let Err(Error::Cycle { cycle, .. }) = PartialOrder::from_index_pairs(set.clone(), pairs) {
                push(Location::voter(id, voter), DiagnosticKind::Cycle { cycle });
            }
        }
    }
    out
}
