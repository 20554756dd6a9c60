use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{Candidate, CandidateSet};
use crate::error::{Error, Result};

/// A strict partial order over the candidates of one election.
///
/// The order is kept as a deduplicated, acyclic set of generating pairs
/// (better, worse) over candidate indices, in compressed adjacency form.
/// It denotes the transitive closure of those pairs: [`strict_pairs`],
/// [`prefers`] and equality all work on the closure, so two orders built
/// from different generators of the same relation compare equal.
///
/// [`strict_pairs`]: PartialOrder::strict_pairs
/// [`prefers`]: PartialOrder::prefers
#[derive(Clone)]
pub struct PartialOrder {
    candidates: Arc<CandidateSet>,
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl PartialOrder {
    /// The order without any strict pair.
    pub fn empty(candidates: Arc<CandidateSet>) -> Self {
        let m = candidates.len();
        PartialOrder {
            candidates,
            offsets: vec![0; m + 1],
            targets: Vec::new(),
        }
    }

    /// Builds the order generated by `pairs`, each meaning "first is preferred
    /// to second".
    pub fn build(candidates: Arc<CandidateSet>, pairs: &[(Candidate, Candidate)]) -> Result<Self> {
        let mut idx = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let ia = resolve(&candidates, a)?;
            let ib = resolve(&candidates, b)?;
            idx.push((ia, ib));
        }
        Self::from_index_pairs(candidates, idx)
    }

    pub fn from_index_pairs<I>(candidates: Arc<CandidateSet>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let m = candidates.len();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for (a, b) in pairs {
            assert!(a < m && b < m, "candidate index out of range");
            if a == b {
                return Err(Error::Cycle {
                    context: String::new(),
                    cycle: vec![candidates.get(a).clone()],
                });
            }
            edges.push((a as u32, b as u32));
        }
        edges.sort_unstable();
        edges.dedup();

        let mut offsets = vec![0u32; m + 1];
        for &(a, _) in &edges {
            offsets[a as usize + 1] += 1;
        }
        for i in 0..m {
            offsets[i + 1] += offsets[i];
        }
        let targets = edges.iter().map(|&(_, b)| b).collect();
        let order = PartialOrder {
            candidates,
            offsets,
            targets,
        };
        if let Some(cycle) = order.find_cycle() {
            return Err(Error::Cycle {
                context: String::new(),
                cycle: cycle
                    .into_iter()
                    .map(|i| order.candidates.get(i).clone())
                    .collect(),
            });
        }
        Ok(order)
    }

    pub fn candidates(&self) -> &Arc<CandidateSet> {
        &self.candidates
    }

    /// Number of candidates.
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub(crate) fn successors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub(crate) fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.len()];
        for &t in &self.targets {
            deg[t as usize] += 1;
        }
        deg
    }

    pub(crate) fn predecessors(&self) -> Vec<Vec<u32>> {
        let mut preds = vec![Vec::new(); self.len()];
        for a in 0..self.len() {
            for &b in self.successors(a) {
                preds[b as usize].push(a as u32);
            }
        }
        preds
    }

    /// Indices of the candidates not dominated by any other candidate.
    pub fn maximal_indices(&self) -> Vec<usize> {
        self.in_degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn maximal_elements(&self) -> BTreeSet<Candidate> {
        self.maximal_indices()
            .into_iter()
            .map(|i| self.candidates.get(i).clone())
            .collect()
    }

    /// Whether `a` is strictly preferred to `b` (in the closure).
    pub fn prefers(&self, a: &Candidate, b: &Candidate) -> bool {
        match (self.candidates.index_of(a), self.candidates.index_of(b)) {
            (Some(a), Some(b)) => self.reaches(a, b),
            _ => false,
        }
    }

    pub(crate) fn reaches(&self, from: usize, to: usize) -> bool {
        if from == to {
            return false;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(x) = stack.pop() {
            for &y in self.successors(x) {
                let y = y as usize;
                if y == to {
                    return true;
                }
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    /// The transitive closure as sorted index pairs.
    pub fn strict_index_pairs(&self) -> Vec<(usize, usize)> {
        let m = self.len();
        let mut out = Vec::new();
        let mut seen = vec![usize::MAX; m];
        let mut stack = Vec::new();
        for a in 0..m {
            let mut below = Vec::new();
            stack.push(a);
            while let Some(x) = stack.pop() {
                for &y in self.successors(x) {
                    let y = y as usize;
                    if seen[y] != a {
                        seen[y] = a;
                        below.push(y);
                        stack.push(y);
                    }
                }
            }
            below.sort_unstable();
            out.extend(below.into_iter().map(|b| (a, b)));
        }
        out
    }

    /// The transitive closure as (preferred, less-preferred) pairs.
    pub fn strict_pairs(&self) -> BTreeSet<(Candidate, Candidate)> {
        self.strict_index_pairs()
            .into_iter()
            .map(|(a, b)| (self.candidates.get(a).clone(), self.candidates.get(b).clone()))
            .collect()
    }

    /// A topological order that always picks the smallest available index.
    pub(crate) fn topological_order(&self) -> Vec<u32> {
        let mut deg = self.in_degrees();
        let mut ready: BTreeSet<u32> = (0..self.len() as u32)
            .filter(|&i| deg[i as usize] == 0)
            .collect();
        let mut out = Vec::with_capacity(self.len());
        while let Some(x) = ready.pop_first() {
            out.push(x);
            for &y in self.successors(x as usize) {
                deg[y as usize] -= 1;
                if deg[y as usize] == 0 {
                    ready.insert(y);
                }
            }
        }
        out
    }

    /// The unique linear extension, if the order is total.
    pub fn as_total(&self) -> Option<TotalOrder> {
        let mut deg = self.in_degrees();
        let mut ready: Vec<u32> = (0..self.len() as u32)
            .filter(|&i| deg[i as usize] == 0)
            .collect();
        let mut ranking = Vec::with_capacity(self.len());
        while let Some(x) = ready.pop() {
            if !ready.is_empty() {
                return None;
            }
            ranking.push(x);
            for &y in self.successors(x as usize) {
                deg[y as usize] -= 1;
                if deg[y as usize] == 0 {
                    ready.push(y);
                }
            }
        }
        Some(TotalOrder::from_indices(self.candidates.clone(), ranking))
    }

    pub fn is_total(&self) -> bool {
        self.as_total().is_some()
    }

    fn find_cycle(&self) -> Option<Vec<usize>> {
        let m = self.len();
        let mut deg = self.in_degrees();
        let mut queue: Vec<usize> = (0..m).filter(|&i| deg[i] == 0).collect();
        let mut done = vec![false; m];
        while let Some(x) = queue.pop() {
            done[x] = true;
            for &y in self.successors(x) {
                deg[y as usize] -= 1;
                if deg[y as usize] == 0 {
                    queue.push(y as usize);
                }
            }
        }
        let start = (0..m).find(|&i| !done[i])?;
        // Every unfinished node keeps an unfinished predecessor, so walking
        // backwards must revisit a node.
        let preds = self.predecessors();
        let mut pos = vec![usize::MAX; m];
        let mut walk = Vec::new();
        let mut x = start;
        while pos[x] == usize::MAX {
            pos[x] = walk.len();
            walk.push(x);
            x = preds[x]
                .iter()
                .map(|&p| p as usize)
                .find(|&p| !done[p])
                .expect("unfinished node without unfinished predecessor");
        }
        let mut cycle = walk[pos[x]..].to_vec();
        cycle.reverse();
        let min_at = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
        cycle.rotate_left(min_at);
        Some(cycle)
    }
}

fn resolve(candidates: &CandidateSet, c: &Candidate) -> Result<usize> {
    candidates
        .index_of(c)
        .ok_or_else(|| Error::UnknownCandidate {
            context: String::new(),
            candidate: c.to_string(),
        })
}

impl PartialEq for PartialOrder {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.candidates, &other.candidates) || self.candidates == other.candidates)
            && self.strict_index_pairs() == other.strict_index_pairs()
    }
}

impl Eq for PartialOrder {}

impl fmt::Debug for PartialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialOrder")
            .field("candidates", &self.candidates)
            .field("strict_pairs", &self.strict_pairs())
            .finish()
    }
}

/// Builds the closure of `pairs` over a fresh candidate set.
pub fn build_partial_order<I>(candidates: I, pairs: &[(Candidate, Candidate)]) -> Result<PartialOrder>
where
    I: IntoIterator,
    I::Item: Into<Candidate>,
{
    PartialOrder::build(CandidateSet::new(candidates)?, pairs)
}

pub fn maximal_elements(p: &PartialOrder) -> BTreeSet<Candidate> {
    p.maximal_elements()
}

/// A ranking of all candidates of an election, most preferred first.
#[derive(Clone)]
pub struct TotalOrder {
    candidates: Arc<CandidateSet>,
    ranking: Vec<u32>,
}

impl TotalOrder {
    pub fn from_ranking(candidates: Arc<CandidateSet>, ranking: &[Candidate]) -> Result<Self> {
        if ranking.len() != candidates.len() {
            return Err(Error::Argument(format!(
                "ranking has {} entries for {} candidates",
                ranking.len(),
                candidates.len()
            )));
        }
        let mut seen = vec![false; candidates.len()];
        let mut idx = Vec::with_capacity(ranking.len());
        for c in ranking {
            let i = resolve(&candidates, c)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Argument(format!("ranking repeats `{c}`")));
            }
            idx.push(i as u32);
        }
        Ok(TotalOrder {
            candidates,
            ranking: idx,
        })
    }

    pub(crate) fn from_indices(candidates: Arc<CandidateSet>, ranking: Vec<u32>) -> Self {
        debug_assert_eq!(ranking.len(), candidates.len());
        TotalOrder {
            candidates,
            ranking,
        }
    }

    pub fn candidates(&self) -> &Arc<CandidateSet> {
        &self.candidates
    }

    pub fn ranking(&self) -> Vec<Candidate> {
        self.ranking
            .iter()
            .map(|&i| self.candidates.get(i as usize).clone())
            .collect()
    }

    pub fn ranking_indices(&self) -> &[u32] {
        &self.ranking
    }

    pub fn top(&self) -> Option<&Candidate> {
        self.ranking
            .first()
            .map(|&i| self.candidates.get(i as usize))
    }

    /// 1-based position of `c`, or `None` for a foreign candidate.
    pub fn position(&self, c: &Candidate) -> Option<usize> {
        let i = self.candidates.index_of(c)? as u32;
        self.ranking.iter().position(|&x| x == i).map(|p| p + 1)
    }

    /// Whether this ranking contains every strict pair of `p`.
    pub fn extends(&self, p: &PartialOrder) -> bool {
        if !(Arc::ptr_eq(&self.candidates, p.candidates()) || *self.candidates == **p.candidates()) {
            return false;
        }
        let mut pos = vec![0usize; self.ranking.len()];
        for (k, &i) in self.ranking.iter().enumerate() {
            pos[i as usize] = k;
        }
        (0..p.len()).all(|a| p.successors(a).iter().all(|&b| pos[a] < pos[b as usize]))
    }

    pub fn to_partial(&self) -> PartialOrder {
        let pairs = self
            .ranking
            .windows(2)
            .map(|w| (w[0] as usize, w[1] as usize));
        PartialOrder::from_index_pairs(self.candidates.clone(), pairs)
            .expect("a ranking is acyclic")
    }
}

impl PartialEq for TotalOrder {
    fn eq(&self, other: &Self) -> bool {
        self.ranking() == other.ranking()
    }
}

impl Eq for TotalOrder {}

impl fmt::Display for TotalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &i) in self.ranking.iter().enumerate() {
            if k > 0 {
                f.write_str(" > ")?;
            }
            write!(f, "{}", self.candidates.get(i as usize))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TotalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TotalOrder({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Candidate {
        Candidate::new(s)
    }

    fn pairs(list: &[(&str, &str)]) -> Vec<(Candidate, Candidate)> {
        list.iter().map(|&(a, b)| (c(a), c(b))).collect()
    }

    #[test]
    fn ann_order_closure_adds_nothing() {
        let p = build_partial_order(
            ["Clinton", "Johnson", "Trump"],
            &pairs(&[("Clinton", "Trump"), ("Johnson", "Trump")]),
        )
        .unwrap();
        let expected: BTreeSet<_> = pairs(&[("Clinton", "Trump"), ("Johnson", "Trump")])
            .into_iter()
            .collect();
        assert_eq!(p.strict_pairs(), expected);
        assert_eq!(
            p.maximal_elements(),
            [c("Clinton"), c("Johnson")].into_iter().collect()
        );
    }

    #[test]
    fn chain_closes_transitively() {
        let p = build_partial_order(["a", "b", "c"], &pairs(&[("a", "b"), ("b", "c")])).unwrap();
        let expected: BTreeSet<_> = pairs(&[("a", "b"), ("b", "c"), ("a", "c")])
            .into_iter()
            .collect();
        assert_eq!(p.strict_pairs(), expected);
        assert!(p.prefers(&c("a"), &c("c")));
        assert!(!p.prefers(&c("c"), &c("a")));
        assert_eq!(p.maximal_elements(), [c("a")].into_iter().collect());
        assert!(p.is_total());
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = build_partial_order(["a", "b"], &pairs(&[("a", "b"), ("b", "a")])).unwrap_err();
        match err {
            Error::Cycle { cycle, .. } => assert_eq!(cycle, vec![c("a"), c("b")]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_pair_is_a_cycle() {
        let err = build_partial_order(["a", "b"], &pairs(&[("a", "a")])).unwrap_err();
        assert!(matches!(err, Error::Cycle { .. }));
    }

    #[test]
    fn longer_cycle_is_named() {
        let err = build_partial_order(
            ["a", "b", "c", "d"],
            &pairs(&[("d", "a"), ("a", "b"), ("b", "c"), ("c", "a")]),
        )
        .unwrap_err();
        match err {
            Error::Cycle { cycle, .. } => assert_eq!(cycle, vec![c("a"), c("b"), c("c")]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_candidate_is_rejected() {
        let err = build_partial_order(["a", "b"], &pairs(&[("a", "z")])).unwrap_err();
        assert!(matches!(err, Error::UnknownCandidate { candidate, .. } if candidate == "z"));
    }

    #[test]
    fn empty_order_keeps_every_candidate_maximal() {
        let p = build_partial_order(["a", "b", "c"], &[]).unwrap();
        assert_eq!(p.maximal_elements().len(), 3);
        assert!(!p.is_total());
    }

    #[test]
    fn equality_is_on_the_closure() {
        let a = build_partial_order(["a", "b", "c"], &pairs(&[("a", "b"), ("b", "c")])).unwrap();
        let b = build_partial_order(
            ["a", "b", "c"],
            &pairs(&[("a", "b"), ("b", "c"), ("a", "c")]),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn total_order_round_trip() {
        let set = CandidateSet::new(["a", "b", "c"]).unwrap();
        let t = TotalOrder::from_ranking(set.clone(), &[c("b"), c("a"), c("c")]).unwrap();
        assert_eq!(t.to_string(), "b > a > c");
        assert_eq!(t.position(&c("c")), Some(3));
        assert_eq!(t.to_partial().as_total().unwrap(), t);
        assert!(TotalOrder::from_ranking(set, &[c("a"), c("a"), c("c")]).is_err());
    }
}
