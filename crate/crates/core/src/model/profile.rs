use std::collections::BTreeSet;
use std::sync::Arc;

use super::{CandidateSet, PartialOrder, TotalOrder, Voter};
use crate::error::{Error, Result};

/// The (partial) preferences of every voter of one election.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialProfile {
    election: String,
    candidates: Arc<CandidateSet>,
    entries: Vec<(Voter, PartialOrder)>,
}

impl PartialProfile {
    pub fn new(
        election: impl Into<String>,
        candidates: Arc<CandidateSet>,
        entries: Vec<(Voter, PartialOrder)>,
    ) -> Result<Self> {
        check_entries(&candidates, entries.iter().map(|(v, p)| (v, p.candidates())))?;
        Ok(PartialProfile {
            election: election.into(),
            candidates,
            entries,
        })
    }

    pub fn election(&self) -> &str {
        &self.election
    }

    pub fn candidates(&self) -> &Arc<CandidateSet> {
        &self.candidates
    }

    pub fn entries(&self) -> &[(Voter, PartialOrder)] {
        &self.entries
    }

    pub fn orders(&self) -> impl Iterator<Item = &PartialOrder> {
        self.entries.iter().map(|(_, p)| p)
    }

    pub fn voter_count(&self) -> usize {
        self.entries.len()
    }

    /// The profile itself as a complete one, if every order is total.
    pub fn as_complete(&self) -> Option<CompleteProfile> {
        let entries = self
            .entries
            .iter()
            .map(|(v, p)| p.as_total().map(|t| (v.clone(), t)))
            .collect::<Option<Vec<_>>>()?;
        Some(CompleteProfile {
            election: self.election.clone(),
            candidates: self.candidates.clone(),
            entries,
        })
    }
}

/// Total rankings for every voter of one election.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteProfile {
    election: String,
    candidates: Arc<CandidateSet>,
    entries: Vec<(Voter, TotalOrder)>,
}

impl CompleteProfile {
    pub fn new(
        election: impl Into<String>,
        candidates: Arc<CandidateSet>,
        entries: Vec<(Voter, TotalOrder)>,
    ) -> Result<Self> {
        check_entries(&candidates, entries.iter().map(|(v, t)| (v, t.candidates())))?;
        Ok(CompleteProfile {
            election: election.into(),
            candidates,
            entries,
        })
    }

    pub(crate) fn from_parts_unchecked(
        election: String,
        candidates: Arc<CandidateSet>,
        entries: Vec<(Voter, TotalOrder)>,
    ) -> Self {
        CompleteProfile {
            election,
            candidates,
            entries,
        }
    }

    pub fn election(&self) -> &str {
        &self.election
    }

    pub fn candidates(&self) -> &Arc<CandidateSet> {
        &self.candidates
    }

    pub fn entries(&self) -> &[(Voter, TotalOrder)] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [(Voter, TotalOrder)] {
        &mut self.entries
    }

    pub fn voter_count(&self) -> usize {
        self.entries.len()
    }

    /// Whether every ranking extends the matching order of `p`.
    pub fn extends(&self, p: &PartialProfile) -> bool {
        self.entries.len() == p.entries.len()
            && self
                .entries
                .iter()
                .zip(&p.entries)
                .all(|((v, t), (w, o))| v == w && t.extends(o))
    }

    pub fn to_partial(&self) -> PartialProfile {
        PartialProfile {
            election: self.election.clone(),
            candidates: self.candidates.clone(),
            entries: self
                .entries
                .iter()
                .map(|(v, t)| (v.clone(), t.to_partial()))
                .collect(),
        }
    }
}

fn check_entries<'a>(
    candidates: &Arc<CandidateSet>,
    entries: impl Iterator<Item = (&'a Voter, &'a Arc<CandidateSet>)>,
) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (voter, set) in entries {
        if !seen.insert(voter) {
            return Err(Error::DuplicateVoter(voter.to_string()));
        }
        if !(Arc::ptr_eq(set, candidates) || **set == **candidates) {
            return Err(Error::Argument(format!(
                "order of voter `{voter}` is over a different candidate set"
            )));
        }
    }
    Ok(())
}
