//! Necessary and possible winners, and the necessary-intersection test for
//! plurality.

mod matching;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::completions::{profile_classes, CompletionStream};
use crate::error::{Error, Result};
use crate::model::{Candidate, CandidateSet, CompleteProfile, PartialProfile};
use crate::scoring::{argmax, score_blocks, totals_with, ScoringRule};

pub use matching::{max_bipartite_matching, BipartiteGraph};
pub(crate) use matching::capacitated_matching;

/// How an answer should be computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Poly,
    Brute,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "poly" => Ok(Method::Poly),
            "brute" => Ok(Method::Brute),
            _ => Err(Error::Argument(format!("unknown method `{s}`"))),
        }
    }
}

/// How an answer was actually computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodUsed {
    Poly,
    Brute,
}

impl fmt::Display for MethodUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodUsed::Poly => "poly",
            MethodUsed::Brute => "brute",
        })
    }
}

/// Maximum plurality score each candidate can reach in some completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxScores {
    candidates: std::sync::Arc<CandidateSet>,
    scores: Vec<u64>,
}

impl MaxScores {
    pub fn get(&self, c: &Candidate) -> Option<u64> {
        self.candidates.index_of(c).map(|i| self.scores[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Candidate, u64)> {
        self.candidates.iter().zip(self.scores.iter().copied())
    }

    pub(crate) fn as_slice(&self) -> &[u64] {
        &self.scores
    }
}

/// For every candidate, the number of voters that may rank it first.
pub fn max_attainable_plurality_scores(p: &PartialProfile) -> MaxScores {
    let mut scores = vec![0u64; p.candidates().len()];
    for order in p.orders() {
        for c in order.maximal_indices() {
            scores[c] += 1;
        }
    }
    MaxScores {
        candidates: p.candidates().clone(),
        scores,
    }
}

/// The matching instance behind the necessary-intersection test: the
/// necessary supporters of a party `A` on the left and `m_q - 1` slots per
/// party member on the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportGraph {
    /// Indices (into the profile) of voters whose maximal set lies in `A`.
    pub supporters: Vec<usize>,
    /// Party members, as candidate indices, in index order.
    pub party: Vec<usize>,
    /// Slots per party member.
    pub slots: usize,
    /// For each supporter, the positions in `party` of its maximal elements.
    adj: Vec<Vec<u32>>,
}

impl SupportGraph {
    fn build(maxes: &[Vec<usize>], in_party: &[bool], slots: usize) -> Self {
        let party: Vec<usize> = (0..in_party.len()).filter(|&c| in_party[c]).collect();
        let mut pos = vec![u32::MAX; in_party.len()];
        for (i, &c) in party.iter().enumerate() {
            pos[c] = i as u32;
        }
        let mut supporters = Vec::new();
        let mut adj = Vec::new();
        for (v, max) in maxes.iter().enumerate() {
            if max.iter().all(|&c| in_party[c]) {
                supporters.push(v);
                adj.push(max.iter().map(|&c| pos[c]).collect());
            }
        }
        SupportGraph {
            supporters,
            party,
            slots,
            adj,
        }
    }

    /// The graph with every slot `(a, j)` as its own right node, numbered
    /// `position_of(a) * slots + j`.
    pub fn expand(&self) -> BipartiteGraph {
        let mut g = BipartiteGraph::new(self.supporters.len(), self.party.len() * self.slots);
        for (l, adj) in self.adj.iter().enumerate() {
            for &a in adj {
                for j in 0..self.slots {
                    g.add_edge(l, a as usize * self.slots + j);
                }
            }
        }
        g
    }

    /// Size of a maximum matching, computed without expanding slots.
    pub fn max_matching(&self) -> usize {
        capacitated_matching(&self.adj, &vec![self.slots; self.party.len()])
    }
}

fn party_mask(p: &PartialProfile, party: &BTreeSet<Candidate>) -> Result<Vec<bool>> {
    let set = p.candidates();
    let mut mask = vec![false; set.len()];
    for c in party {
        let i = set.index_of(c).ok_or_else(|| Error::UnknownCandidate {
            context: format!("election `{}`", p.election()),
            candidate: c.to_string(),
        })?;
        mask[i] = true;
    }
    Ok(mask)
}

/// Whether every plurality winner set of every completion of `p` meets
/// `party`.
pub fn necessary_intersection_plurality(
    p: &PartialProfile,
    party: &BTreeSet<Candidate>,
) -> Result<bool> {
    necessary_intersection_with_pivot(p, party, None)
}

/// As [`necessary_intersection_plurality`], optionally forcing the choice
/// of the outside candidate `c_q` among the maximizers of `m`.
pub fn necessary_intersection_with_pivot(
    p: &PartialProfile,
    party: &BTreeSet<Candidate>,
    pivot: Option<&Candidate>,
) -> Result<bool> {
    let mask = party_mask(p, party)?;
    let m = mask.len();
    let members = mask.iter().filter(|&&b| b).count();
    if members == m {
        return match pivot {
            Some(c) => Err(Error::Argument(format!("`{c}` is not outside the party"))),
            None => Ok(true),
        };
    }
    let maxes: Vec<Vec<usize>> = p.orders().map(|o| o.maximal_indices()).collect();
    let mut scores = vec![0u64; m];
    for max in &maxes {
        for &c in max {
            scores[c] += 1;
        }
    }
    let best = (0..m).filter(|&c| !mask[c]).map(|c| scores[c]).max().unwrap_or(0);
    let q = match pivot {
        Some(c) => {
            let q = p.candidates().index_of(c).ok_or_else(|| Error::UnknownCandidate {
                context: format!("election `{}`", p.election()),
                candidate: c.to_string(),
            })?;
            if mask[q] || scores[q] != best {
                return Err(Error::Argument(format!(
                    "`{c}` is not a maximizer outside the party"
                )));
            }
            q
        }
        None => (0..m).find(|&c| !mask[c] && scores[c] == best).expect("outside non-empty"),
    };
    if members == 0 {
        return Ok(false);
    }
    let m_q = scores[q] as usize;
    if m_q == 0 {
        // No voter can rank an outside candidate first. Either every voter
        // ranks a party member first, or there are no voters and everyone
        // ties; both ways the party meets the winners.
        return Ok(true);
    }
    let g = SupportGraph::build(&maxes, &mask, m_q - 1);
    Ok(g.max_matching() < g.supporters.len())
}

/// The support graph used for `party`, with the default choice of `c_q`.
/// `None` when a degenerate case decides the answer without a graph.
pub fn support_graph(p: &PartialProfile, party: &BTreeSet<Candidate>) -> Result<Option<SupportGraph>> {
    let mask = party_mask(p, party)?;
    let members = mask.iter().filter(|&&b| b).count();
    if members == 0 || members == mask.len() {
        return Ok(None);
    }
    let maxes: Vec<Vec<usize>> = p.orders().map(|o| o.maximal_indices()).collect();
    let scores = max_attainable_plurality_scores(p);
    let m_q = (0..mask.len())
        .filter(|&c| !mask[c])
        .map(|c| scores.as_slice()[c])
        .max()
        .unwrap_or(0) as usize;
    if m_q == 0 {
        return Ok(None);
    }
    Ok(Some(SupportGraph::build(&maxes, &mask, m_q - 1)))
}

/// Moves `c` to the top of every ranking whose source order has `c` among
/// its maximal elements. The result still completes `p`.
pub fn promote_to_top(p: &PartialProfile, t: &CompleteProfile, c: &Candidate) -> Result<CompleteProfile> {
    if !t.extends(p) {
        return Err(Error::Argument("profile does not complete the partial profile".into()));
    }
    let idx = p.candidates().index_of(c).ok_or_else(|| Error::UnknownCandidate {
        context: format!("election `{}`", p.election()),
        candidate: c.to_string(),
    })? as u32;
    let mut out = t.clone();
    for ((_, order), (_, total)) in p.entries().iter().zip(out.entries_mut()) {
        if order.maximal_indices().contains(&(idx as usize)) {
            let mut ranking = total.ranking_indices().to_vec();
            ranking.retain(|&x| x != idx);
            ranking.insert(0, idx);
            *total = crate::model::TotalOrder::from_indices(p.candidates().clone(), ranking);
        }
    }
    Ok(out)
}

/// Winner set result of [`necessary_winners`] / [`possible_winners`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinnersOutcome {
    pub winners: BTreeSet<Candidate>,
    pub method: MethodUsed,
    /// Profiles enumerated by the brute path (one per score class).
    pub completions_examined: Option<u64>,
}

fn choose_method(rule: &ScoringRule, method: Method) -> Result<MethodUsed> {
    match method {
        Method::Poly if !rule.is_plurality() => Err(Error::UnsupportedPolyRule(rule.name().into())),
        Method::Poly => Ok(MethodUsed::Poly),
        Method::Brute => Ok(MethodUsed::Brute),
        Method::Auto if rule.is_plurality() => Ok(MethodUsed::Poly),
        Method::Auto => Ok(MethodUsed::Brute),
    }
}

fn classes(rule: &ScoringRule, p: &PartialProfile, cap: u64) -> Result<(Vec<u64>, CompletionStream)> {
    let m = p.candidates().len();
    let vector = rule.vector(m)?;
    let blocks = score_blocks([rule], m)?;
    Ok((vector, profile_classes(p, &blocks, cap)?))
}

fn to_candidates(set: &CandidateSet, idx: impl IntoIterator<Item = usize>) -> BTreeSet<Candidate> {
    idx.into_iter().map(|i| set.get(i).clone()).collect()
}

/// Candidates that win in every completion of `p`.
pub fn necessary_winners(
    rule: &ScoringRule,
    p: &PartialProfile,
    method: Method,
    cap: u64,
) -> Result<WinnersOutcome> {
    let set = p.candidates().clone();
    match choose_method(rule, method)? {
        MethodUsed::Poly => {
            let mut winners = BTreeSet::new();
            for c in set.iter() {
                if necessary_intersection_plurality(p, &BTreeSet::from([c.clone()]))? {
                    winners.insert(c.clone());
                }
            }
            Ok(WinnersOutcome {
                winners,
                method: MethodUsed::Poly,
                completions_examined: None,
            })
        }
        MethodUsed::Brute => {
            let (vector, mut stream) = classes(rule, p, cap)?;
            let mut alive = vec![true; set.len()];
            let mut examined = 0;
            while let Some(t) = stream.advance() {
                examined += 1;
                let win = argmax(&totals_with(&vector, t));
                let mut next = vec![false; set.len()];
                for w in win {
                    next[w] = alive[w];
                }
                alive = next;
            }
            Ok(WinnersOutcome {
                winners: to_candidates(&set, (0..set.len()).filter(|&i| alive[i])),
                method: MethodUsed::Brute,
                completions_examined: Some(examined),
            })
        }
    }
}

/// Whether `c` (a candidate index) wins some plurality completion of a
/// profile whose voters have maximal sets `maxes`.
fn plurality_possible(maxes: &[Vec<usize>], m: usize, c: usize) -> bool {
    let m_c = maxes.iter().filter(|max| max.contains(&c)).count();
    let rest: Vec<Vec<u32>> = maxes
        .iter()
        .filter(|max| !max.contains(&c))
        .map(|max| max.iter().map(|&d| d as u32).collect())
        .collect();
    if rest.is_empty() {
        return true;
    }
    let mut caps = vec![m_c; m];
    caps[c] = 0;
    capacitated_matching(&rest, &caps) == rest.len()
}

/// Candidates that win in some completion of `p`.
pub fn possible_winners(
    rule: &ScoringRule,
    p: &PartialProfile,
    method: Method,
    cap: u64,
) -> Result<WinnersOutcome> {
    let set = p.candidates().clone();
    match choose_method(rule, method)? {
        MethodUsed::Poly => {
            let maxes: Vec<Vec<usize>> = p.orders().map(|o| o.maximal_indices()).collect();
            let winners = (0..set.len()).filter(|&c| plurality_possible(&maxes, set.len(), c));
            Ok(WinnersOutcome {
                winners: to_candidates(&set, winners),
                method: MethodUsed::Poly,
                completions_examined: None,
            })
        }
        MethodUsed::Brute => {
            let (vector, mut stream) = classes(rule, p, cap)?;
            let mut seen = vec![false; set.len()];
            let mut examined = 0;
            while let Some(t) = stream.advance() {
                examined += 1;
                for w in argmax(&totals_with(&vector, t)) {
                    seen[w] = true;
                }
            }
            Ok(WinnersOutcome {
                winners: to_candidates(&set, (0..set.len()).filter(|&i| seen[i])),
                method: MethodUsed::Brute,
                completions_examined: Some(examined),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completions::{profile_completions, DEFAULT_CAP};
    use crate::model::{profile_from_ballots, PreferenceDatabase};
    use crate::scoring::builtin_rule;

    fn fig1() -> PartialProfile {
        let db = PreferenceDatabase::from_json_str(include_str!("../../../../data/fig1.json")).unwrap();
        profile_from_ballots(&db, "Oct-5").unwrap()
    }

    fn names(set: &BTreeSet<Candidate>) -> Vec<&str> {
        set.iter().map(Candidate::as_str).collect()
    }

    fn party(list: &[&str]) -> BTreeSet<Candidate> {
        list.iter().map(|&s| Candidate::new(s)).collect()
    }

    #[test]
    fn max_scores_on_fig1() {
        let s = max_attainable_plurality_scores(&fig1());
        let got: Vec<(&str, u64)> = s.iter().map(|(c, v)| (c.as_str(), v)).collect();
        assert_eq!(got, [("Clinton", 2), ("Johnson", 1), ("Trump", 1)]);
    }

    #[test]
    fn max_scores_agree_with_completion_maxima() {
        let p = fig1();
        let rule = builtin_rule("plurality").unwrap();
        let mut best = [0u64; 3];
        for t in profile_completions(&p, 100).unwrap() {
            let table = crate::scoring::candidate_scores(&rule, &t).unwrap();
            for (b, s) in best.iter_mut().zip(table.totals()) {
                *b = (*b).max(*s);
            }
        }
        let s = max_attainable_plurality_scores(&p);
        assert_eq!(s.as_slice(), best);
    }

    #[test]
    fn necessary_intersection_on_fig1() {
        let p = fig1();
        assert!(necessary_intersection_plurality(&p, &party(&["Clinton", "Johnson"])).unwrap());
        assert!(!necessary_intersection_plurality(&p, &party(&["Trump"])).unwrap());
        assert!(!necessary_intersection_plurality(&p, &party(&[])).unwrap());
        assert!(necessary_intersection_plurality(&p, &party(&["Clinton", "Johnson", "Trump"])).unwrap());
        assert!(matches!(
            necessary_intersection_plurality(&p, &party(&["Stein"])),
            Err(Error::UnknownCandidate { .. })
        ));
    }

    #[test]
    fn winners_on_fig1() {
        let p = fig1();
        let borda = builtin_rule("borda").unwrap();
        let plur = builtin_rule("plurality").unwrap();
        let nw = necessary_winners(&borda, &p, Method::Auto, DEFAULT_CAP).unwrap();
        assert_eq!(names(&nw.winners), ["Clinton"]);
        assert_eq!(nw.method, MethodUsed::Brute);
        assert_eq!(nw.completions_examined, Some(4));
        for method in [Method::Poly, Method::Brute] {
            let nw = necessary_winners(&plur, &p, method, DEFAULT_CAP).unwrap();
            assert!(nw.winners.is_empty());
            let pw = possible_winners(&plur, &p, method, DEFAULT_CAP).unwrap();
            assert_eq!(names(&pw.winners), ["Clinton", "Johnson", "Trump"]);
        }
        assert!(matches!(
            necessary_winners(&borda, &p, Method::Poly, DEFAULT_CAP),
            Err(Error::UnsupportedPolyRule(_))
        ));
    }

    #[test]
    fn zero_voters_everyone_ties() {
        let set = CandidateSet::new(["a", "b"]).unwrap();
        let p = PartialProfile::new("e", set, vec![]).unwrap();
        let plur = builtin_rule("plurality").unwrap();
        for method in [Method::Poly, Method::Brute] {
            assert_eq!(necessary_winners(&plur, &p, method, 10).unwrap().winners.len(), 2);
            assert_eq!(possible_winners(&plur, &p, method, 10).unwrap().winners.len(), 2);
        }
        assert!(necessary_intersection_plurality(&p, &party(&["a"])).unwrap());
    }

    #[test]
    fn expanded_graph_matches_capacitated() {
        let p = fig1();
        let g = support_graph(&p, &party(&["Clinton", "Johnson"])).unwrap().unwrap();
        // m_q = 1 (Trump), so there are no slots and Ann cannot be matched.
        assert_eq!(g.slots, 0);
        assert_eq!(g.supporters, vec![0]);
        assert_eq!(max_bipartite_matching(&g.expand()), g.max_matching());
    }
}
