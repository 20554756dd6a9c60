//! Enumeration of completions: linear extensions of partial orders and
//! entrywise completions of partial profiles.
//!
//! Besides plain completions, profiles can be enumerated up to score
//! equivalence. A [`PositionBlocks`] partition groups ranking positions
//! that receive equal scores under every rule of interest; two rankings that
//! put the same candidates into the same blocks are indistinguishable to
//! those rules, so only one representative per class is produced.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{CandidateSet, CompleteProfile, PartialOrder, PartialProfile, TotalOrder};

/// Default bound on the number of completions any brute-force routine may
/// examine.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// All linear extensions of a partial order, in lexicographic order of
/// candidate ids (the choice at each position is the smallest available id).
pub fn linear_extensions(p: &PartialOrder) -> LinearExtensions<'_> {
    LinearExtensions {
        order: p,
        indeg: p.in_degrees(),
        placed: vec![false; p.len()],
        prefix: Vec::with_capacity(p.len()),
        started: false,
        finished: false,
    }
}

pub struct LinearExtensions<'a> {
    order: &'a PartialOrder,
    indeg: Vec<u32>,
    placed: Vec<bool>,
    prefix: Vec<u32>,
    started: bool,
    finished: bool,
}

impl LinearExtensions<'_> {
    fn place(&mut self, x: usize) {
        self.placed[x] = true;
        self.prefix.push(x as u32);
        for &y in self.order.successors(x) {
            self.indeg[y as usize] -= 1;
        }
    }

    fn unplace(&mut self, x: usize) {
        self.placed[x] = false;
        for &y in self.order.successors(x) {
            self.indeg[y as usize] += 1;
        }
    }

    fn available_from(&self, start: usize) -> Option<usize> {
        (start..self.placed.len()).find(|&y| !self.placed[y] && self.indeg[y] == 0)
    }

    fn descend(&mut self) {
        while self.prefix.len() < self.placed.len() {
            let y = self
                .available_from(0)
                .expect("acyclic order always has an available candidate");
            self.place(y);
        }
    }

    fn current(&self) -> TotalOrder {
        TotalOrder::from_indices(self.order.candidates().clone(), self.prefix.clone())
    }
}

impl Iterator for LinearExtensions<'_> {
    type Item = TotalOrder;

    fn next(&mut self) -> Option<TotalOrder> {
        if self.finished {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend();
            return Some(self.current());
        }
        while let Some(x) = self.prefix.pop() {
            let x = x as usize;
            self.unplace(x);
            if let Some(y) = self.available_from(x + 1) {
                self.place(y);
                self.descend();
                return Some(self.current());
            }
        }
        self.finished = true;
        None
    }
}

/// A partition of ranking positions `1..=m` into consecutive blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionBlocks(Vec<usize>);

impl PositionBlocks {
    /// Every position on its own: classes coincide with completions.
    pub fn singletons(m: usize) -> Self {
        PositionBlocks(vec![1; m])
    }

    pub fn from_sizes(sizes: Vec<usize>) -> Self {
        assert!(sizes.iter().all(|&s| s > 0), "empty position block");
        PositionBlocks(sizes)
    }

    /// Blocks delimited by the given cut points: a cut `s` separates
    /// positions `s` and `s + 1`.
    pub fn from_cuts(m: usize, cuts: impl IntoIterator<Item = usize>) -> Self {
        let mut cuts: Vec<usize> = cuts.into_iter().filter(|&s| s > 0 && s < m).collect();
        cuts.sort_unstable();
        cuts.dedup();
        let mut sizes = Vec::with_capacity(cuts.len() + 1);
        let mut last = 0;
        for s in cuts.into_iter().chain(std::iter::once(m)) {
            if s > last {
                sizes.push(s - last);
            }
            last = s;
        }
        PositionBlocks(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    fn is_singletons(&self) -> bool {
        self.0.iter().all(|&s| s == 1)
    }
}

/// Calls `emit` with one representative ranking per block class of `p`,
/// stopping early once `emit` returns `false`.
pub(crate) fn for_each_block_class(
    p: &PartialOrder,
    blocks: &PositionBlocks,
    mut emit: impl FnMut(&[u32]) -> bool,
) {
    assert_eq!(blocks.total(), p.len(), "blocks must cover every position");
    let mut walker = BlockWalker {
        topo: p.topological_order(),
        preds: p.predecessors(),
        placed: vec![false; p.len()],
        chosen: vec![false; p.len()],
        ranking: Vec::with_capacity(p.len()),
        sizes: blocks.sizes(),
        stop: false,
    };
    walker.block(0, &mut emit);
}

struct BlockWalker<'a> {
    topo: Vec<u32>,
    preds: Vec<Vec<u32>>,
    placed: Vec<bool>,
    chosen: Vec<bool>,
    ranking: Vec<u32>,
    sizes: &'a [usize],
    stop: bool,
}

impl BlockWalker<'_> {
    fn block(&mut self, b: usize, emit: &mut impl FnMut(&[u32]) -> bool) {
        if self.stop {
            return;
        }
        if b == self.sizes.len() {
            if !emit(&self.ranking) {
                self.stop = true;
            }
            return;
        }
        // free[t]: unplaced candidates among topo[t..]
        let n = self.topo.len();
        let mut free = vec![0usize; n + 1];
        for t in (0..n).rev() {
            free[t] = free[t + 1] + usize::from(!self.placed[self.topo[t] as usize]);
        }
        let start = self.ranking.len();
        self.choose(b, 0, self.sizes[b], start, &free, emit);
    }

    fn choose(
        &mut self,
        b: usize,
        t: usize,
        need: usize,
        start: usize,
        free: &[usize],
        emit: &mut impl FnMut(&[u32]) -> bool,
    ) {
        if self.stop {
            return;
        }
        if need == 0 {
            let members: Vec<u32> = self.ranking[start..].to_vec();
            for &x in &members {
                self.chosen[x as usize] = false;
                self.placed[x as usize] = true;
            }
            self.block(b + 1, emit);
            for &x in &members {
                self.placed[x as usize] = false;
                self.chosen[x as usize] = true;
            }
            return;
        }
        if free[t] < need {
            return;
        }
        let x = self.topo[t] as usize;
        if !self.placed[x] {
            let ready = self.preds[x]
                .iter()
                .all(|&q| self.placed[q as usize] || self.chosen[q as usize]);
            if ready {
                self.chosen[x] = true;
                self.ranking.push(x as u32);
                self.choose(b, t + 1, need - 1, start, free, emit);
                self.ranking.pop();
                self.chosen[x] = false;
            }
        }
        self.choose(b, t + 1, need, start, free, emit);
    }
}

/// Up to `limit + 1` rankings of one voter; more than `limit` means the
/// budget is blown.
fn voter_choices(p: &PartialOrder, blocks: &PositionBlocks, limit: u64) -> Vec<TotalOrder> {
    let take = limit.saturating_add(1).min(usize::MAX as u64) as usize;
    if blocks.is_singletons() {
        return linear_extensions(p).take(take).collect();
    }
    let mut out = Vec::new();
    for_each_block_class(p, blocks, |r| {
        out.push(TotalOrder::from_indices(p.candidates().clone(), r.to_vec()));
        out.len() < take
    });
    out
}

/// Entrywise completions (or block-class representatives) of a profile.
///
/// The first voter varies slowest. The stream knows its length up front,
/// having already checked it against the cap.
pub struct CompletionStream {
    current: CompleteProfile,
    choices: Vec<Vec<TotalOrder>>,
    digits: Vec<usize>,
    started: bool,
    finished: bool,
    total: u64,
}

impl CompletionStream {
    fn new(p: &PartialProfile, blocks: &PositionBlocks, cap: u64) -> Result<Self> {
        if cap == 0 {
            return Err(Error::Argument("completion cap must be positive".into()));
        }
        let mut product: u64 = 1;
        let mut choices = Vec::with_capacity(p.voter_count());
        for order in p.orders() {
            let limit = cap / product;
            let list = voter_choices(order, blocks, limit);
            if list.len() as u64 > limit {
                return Err(Error::CapExceeded { cap });
            }
            product *= list.len() as u64;
            choices.push(list);
        }
        let entries = p
            .entries()
            .iter()
            .zip(&choices)
            .map(|((v, _), c)| (v.clone(), c[0].clone()))
            .collect();
        Ok(CompletionStream {
            current: CompleteProfile::from_parts_unchecked(
                p.election().to_string(),
                p.candidates().clone(),
                entries,
            ),
            digits: vec![0; choices.len()],
            choices,
            started: false,
            finished: false,
            total: product,
        })
    }

    /// Number of profiles the stream yields in total.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn candidates(&self) -> &Arc<CandidateSet> {
        self.current.candidates()
    }

    /// Moves to the next completion and lends it out.
    pub fn advance(&mut self) -> Option<&CompleteProfile> {
        if self.finished {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.choices[i].len() {
                self.current.entries_mut()[i].1 = self.choices[i][self.digits[i]].clone();
                return Some(&self.current);
            }
            self.digits[i] = 0;
            self.current.entries_mut()[i].1 = self.choices[i][0].clone();
        }
        self.finished = true;
        None
    }

    /// The completion most recently returned by [`advance`](Self::advance).
    pub fn current(&self) -> Option<&CompleteProfile> {
        (self.started && !self.finished).then_some(&self.current)
    }

    /// Rewinds to before the first completion.
    pub fn reset(&mut self) {
        for (i, d) in self.digits.iter_mut().enumerate() {
            if *d != 0 {
                *d = 0;
                self.current.entries_mut()[i].1 = self.choices[i][0].clone();
            }
        }
        self.started = false;
        self.finished = false;
    }
}

impl Iterator for CompletionStream {
    type Item = CompleteProfile;

    fn next(&mut self) -> Option<CompleteProfile> {
        self.advance().cloned()
    }
}

/// Every completion of `p`; fails up front with [`Error::CapExceeded`] when
/// there are more than `cap`.
pub fn profile_completions(p: &PartialProfile, cap: u64) -> Result<CompletionStream> {
    CompletionStream::new(p, &PositionBlocks::singletons(p.candidates().len()), cap)
}

/// One representative completion per block class of `p`.
pub fn profile_classes(
    p: &PartialProfile,
    blocks: &PositionBlocks,
    cap: u64,
) -> Result<CompletionStream> {
    if blocks.total() != p.candidates().len() {
        return Err(Error::Argument(format!(
            "position blocks cover {} positions, election has {} candidates",
            blocks.total(),
            p.candidates().len()
        )));
    }
    CompletionStream::new(p, blocks, cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionCount {
    Exact(u64),
    Overflow,
}

/// Number of completions of `p`, counted by enumeration, or `Overflow` past
/// `cap`.
pub fn count_completions(p: &PartialProfile, cap: u64) -> CompletionCount {
    let mut product: u64 = 1;
    for order in p.orders() {
        let limit = cap / product;
        let n = linear_extensions(order)
            .take(limit.saturating_add(1).min(usize::MAX as u64) as usize)
            .count() as u64;
        if n > limit {
            return CompletionCount::Overflow;
        }
        product *= n;
    }
    CompletionCount::Exact(product)
}
