//! Positional scoring rules, score tables and winner sets of complete
//! profiles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::completions::PositionBlocks;
use crate::error::{Error, Result};
use crate::model::{Candidate, CandidateSet, CompleteProfile};

type ScoreFn = dyn Fn(usize, usize) -> u64 + Send + Sync;

#[derive(Clone)]
enum Kind {
    Plurality,
    Borda,
    Approval(usize),
    Veto(usize),
    Table(Arc<BTreeMap<usize, Vec<u64>>>),
    Function(Arc<ScoreFn>),
}

/// A positional scoring rule: a map from `(m, position)` to a score,
/// evaluated lazily for each number of candidates `m`.
#[derive(Clone)]
pub struct ScoringRule {
    name: String,
    kind: Kind,
}

impl ScoringRule {
    pub fn plurality() -> Self {
        ScoringRule {
            name: "plurality".into(),
            kind: Kind::Plurality,
        }
    }

    pub fn borda() -> Self {
        ScoringRule {
            name: "borda".into(),
            kind: Kind::Borda,
        }
    }

    /// Top `k` positions score 1, the rest 0.
    pub fn approval(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::UnknownRule("approval:0".into()));
        }
        Ok(ScoringRule {
            name: format!("approval:{k}"),
            kind: Kind::Approval(k),
        })
    }

    /// Bottom `k` positions score 0, the rest 1.
    pub fn veto(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::UnknownRule("veto:0".into()));
        }
        Ok(ScoringRule {
            name: format!("veto:{k}"),
            kind: Kind::Veto(k),
        })
    }

    /// A rule given by explicit vectors, one per supported `m`.
    pub fn from_table(name: impl Into<String>, table: BTreeMap<usize, Vec<u64>>) -> Result<Self> {
        let name = name.into();
        for (&m, v) in &table {
            if v.len() != m {
                return Err(Error::MalformedScoreTable(format!(
                    "row {m} has {} entries",
                    v.len()
                )));
            }
            if v.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::MalformedScoreTable(format!(
                    "row {m} is not non-increasing: {v:?}"
                )));
            }
        }
        Ok(ScoringRule {
            name,
            kind: Kind::Table(Arc::new(table)),
        })
    }

    /// A rule given by an arbitrary function of `(m, position)`; positions
    /// are 1-based. Monotonicity is checked whenever a vector is requested.
    pub fn from_fn(
        name: impl Into<String>,
        f: impl Fn(usize, usize) -> u64 + Send + Sync + 'static,
    ) -> Self {
        ScoringRule {
            name: name.into(),
            kind: Kind::Function(Arc::new(f)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Whether the rule is plurality for every `m` (this includes
    /// `approval:1`).
    pub fn is_plurality(&self) -> bool {
        matches!(self.kind, Kind::Plurality | Kind::Approval(1))
    }

    /// The scoring vector for `m` candidates, validated to be
    /// non-increasing.
    pub fn vector(&self, m: usize) -> Result<Vec<u64>> {
        let v: Vec<u64> = match &self.kind {
            Kind::Plurality => (1..=m).map(|s| u64::from(s == 1)).collect(),
            Kind::Borda => (1..=m).map(|s| (m - s) as u64).collect(),
            Kind::Approval(k) => (1..=m).map(|s| u64::from(s <= *k)).collect(),
            Kind::Veto(k) => (1..=m).map(|s| u64::from(s + k <= m)).collect(),
            Kind::Table(t) => t.get(&m).cloned().ok_or_else(|| Error::MissingScoreVector {
                rule: self.name.clone(),
                m,
            })?,
            Kind::Function(f) => (1..=m).map(|s| f(m, s)).collect(),
        };
        if v.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NonMonotoneRule {
                rule: self.name.clone(),
                m,
                vector: v,
            });
        }
        Ok(v)
    }

    /// Score of position `s` (1-based) among `m` candidates.
    pub fn score(&self, m: usize, s: usize) -> Result<u64> {
        if s == 0 || s > m {
            return Err(Error::Argument(format!("position {s} out of 1..={m}")));
        }
        Ok(self.vector(m)?[s - 1])
    }
}

impl fmt::Debug for ScoringRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScoringRule({})", self.name)
    }
}

impl fmt::Display for ScoringRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Resolves a builtin rule name: `plurality`, `borda`, `approval:k`,
/// `veto:k`, plus the aliases `k-approval`, `k-veto` and `veto`.
/// Matching is case-insensitive.
pub fn builtin_rule(spec: &str) -> Result<ScoringRule> {
    let s = spec.trim().to_ascii_lowercase();
    let unknown = || Error::UnknownRule(spec.to_string());
    let parse_k = |k: &str| k.parse::<usize>().map_err(|_| unknown());
    match s.as_str() {
        "plurality" => return Ok(ScoringRule::plurality()),
        "borda" => return Ok(ScoringRule::borda()),
        "veto" | "antiplurality" => return ScoringRule::veto(1),
        _ => {}
    }
    if let Some(k) = s.strip_prefix("approval:") {
        return ScoringRule::approval(parse_k(k)?).map_err(|_| unknown());
    }
    if let Some(k) = s.strip_prefix("veto:") {
        return ScoringRule::veto(parse_k(k)?).map_err(|_| unknown());
    }
    if let Some(k) = s.strip_suffix("-approval") {
        return ScoringRule::approval(parse_k(k)?).map_err(|_| unknown());
    }
    if let Some(k) = s.strip_suffix("-veto") {
        return ScoringRule::veto(parse_k(k)?).map_err(|_| unknown());
    }
    Err(unknown())
}

/// Canonical name of a builtin rule spec, if it is one.
pub fn canonical_rule_name(spec: &str) -> Option<String> {
    builtin_rule(spec).ok().map(|r| r.name)
}

/// Parses the score-table format: one `m: a_1 a_2 ... a_m` line per
/// supported number of candidates. Blank lines and `#` comments are
/// ignored.
pub fn parse_score_table(name: &str, text: &str) -> Result<ScoringRule> {
    let mut table = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::MalformedScoreTable(format!("line {}: {msg}", no + 1));
        let (m, rest) = line.split_once(':').ok_or_else(|| bad("expected `m: a_1 ... a_m`"))?;
        let m: usize = m.trim().parse().map_err(|_| bad("bad candidate count"))?;
        if m == 0 {
            return Err(bad("candidate count must be positive"));
        }
        let row = rest
            .split_whitespace()
            .map(|t| t.parse::<u64>().map_err(|_| bad(&format!("bad score `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if table.insert(m, row).is_some() {
            return Err(bad(&format!("duplicate row for m = {m}")));
        }
    }
    ScoringRule::from_table(name, table)
}

/// Loads a score table from a file; the rule is named after the file stem.
pub fn load_score_table(path: impl AsRef<Path>) -> Result<ScoringRule> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "table".into());
    parse_score_table(&name, &text)
}

/// Rules known by name: every builtin plus registered custom rules.
#[derive(Clone, Debug, Default)]
pub struct RuleRegistry {
    custom: BTreeMap<String, ScoringRule>,
}

impl RuleRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a custom rule under its own name. Builtin names are
    /// reserved.
    pub fn register(&mut self, rule: ScoringRule) -> Result<()> {
        if builtin_rule(&rule.name).is_ok() {
            return Err(Error::Argument(format!(
                "`{}` is a builtin rule name",
                rule.name
            )));
        }
        self.custom.insert(rule.name.clone(), rule);
        Ok(())
    }

    pub fn resolve(&self, spec: &str) -> Result<ScoringRule> {
        builtin_rule(spec).or_else(|e| self.custom.get(spec).cloned().ok_or(e))
    }

    /// The key identifying a rule spec: canonical name for builtins, the
    /// name itself for custom rules.
    pub fn key(&self, spec: &str) -> Result<String> {
        self.resolve(spec).map(|r| r.name)
    }
}

/// Per-candidate totals of one complete profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreTable {
    election: String,
    candidates: Arc<CandidateSet>,
    totals: Vec<u64>,
}

impl ScoreTable {
    pub fn election(&self) -> &str {
        &self.election
    }

    pub fn get(&self, c: &Candidate) -> Option<u64> {
        self.candidates.index_of(c).map(|i| self.totals[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Candidate, u64)> {
        self.candidates.iter().zip(self.totals.iter().copied())
    }

    pub fn totals(&self) -> &[u64] {
        &self.totals
    }

    pub fn to_map(&self) -> BTreeMap<Candidate, u64> {
        self.iter().map(|(c, s)| (c.clone(), s)).collect()
    }
}

pub(crate) fn totals_with(vector: &[u64], profile: &CompleteProfile) -> Vec<u64> {
    let mut totals = vec![0u64; profile.candidates().len()];
    for (_, t) in profile.entries() {
        for (pos, &c) in t.ranking_indices().iter().enumerate() {
            totals[c as usize] += vector[pos];
        }
    }
    totals
}

pub(crate) fn argmax(totals: &[u64]) -> Vec<usize> {
    let best = totals.iter().copied().max().unwrap_or(0);
    (0..totals.len()).filter(|&i| totals[i] == best).collect()
}

pub fn candidate_scores(rule: &ScoringRule, profile: &CompleteProfile) -> Result<ScoreTable> {
    let vector = rule.vector(profile.candidates().len())?;
    Ok(ScoreTable {
        election: profile.election().to_string(),
        candidates: profile.candidates().clone(),
        totals: totals_with(&vector, profile),
    })
}

/// The co-winners: every candidate with maximum total score.
pub fn winners(rule: &ScoringRule, profile: &CompleteProfile) -> Result<BTreeSet<Candidate>> {
    let vector = rule.vector(profile.candidates().len())?;
    let set = profile.candidates();
    Ok(argmax(&totals_with(&vector, profile))
        .into_iter()
        .map(|i| set.get(i).clone())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleProperties {
    pub is_trivial: bool,
    pub is_strict: bool,
    /// Least position `d` whose score exceeds that of `d + 1`.
    pub strict_gap_d: Option<usize>,
}

pub fn rule_properties(rule: &ScoringRule, m: usize) -> Result<RuleProperties> {
    if m == 0 {
        return Err(Error::Argument("rule properties need m >= 1".into()));
    }
    let v = rule.vector(m)?;
    let is_trivial = v[0] == v[m - 1];
    Ok(RuleProperties {
        is_trivial,
        is_strict: !is_trivial,
        strict_gap_d: (0..m - 1).find(|&i| v[i] > v[i + 1]).map(|i| i + 1),
    })
}

/// The coarsest partition of positions into blocks that every rule scores
/// uniformly.
pub fn score_blocks<'a>(
    rules: impl IntoIterator<Item = &'a ScoringRule>,
    m: usize,
) -> Result<PositionBlocks> {
    let mut cuts = BTreeSet::new();
    for rule in rules {
        let v = rule.vector(m)?;
        cuts.extend((1..m).filter(|&s| v[s - 1] != v[s]));
    }
    Ok(PositionBlocks::from_cuts(m, cuts))
}
