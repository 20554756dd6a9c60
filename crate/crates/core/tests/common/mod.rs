#![allow(dead_code)]

use std::collections::BTreeSet;

use prefdb_core::completions::profile_completions;
use prefdb_core::generators::{Graph, Literal, ThreeDnf};
use prefdb_core::model::{
    Candidate, CandidateSet, CompleteProfile, PartialOrder, PartialProfile, PreferenceDatabase,
    Voter,
};
use proptest::test_runner::Config;
use rand::seq::SliceRandom;
use rand::Rng;

/// Property-test settings without on-disk failure persistence.
pub fn cases(n: u32) -> Config {
    Config {
        cases: n,
        failure_persistence: None,
        ..Config::default()
    }
}

pub const FIG1: &str = include_str!("../../../../data/fig1.json");

pub fn fig1() -> PreferenceDatabase {
    PreferenceDatabase::from_json_str(FIG1).unwrap()
}

pub fn data(name: &str) -> String {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn names(set: &BTreeSet<Candidate>) -> Vec<&str> {
    set.iter().map(Candidate::as_str).collect()
}

pub fn party(list: &[&str]) -> BTreeSet<Candidate> {
    list.iter().map(|&s| Candidate::new(s)).collect()
}

/// A random partial order: a hidden random ranking with each compatible
/// pair kept with probability `density`.
pub fn random_order(rng: &mut impl Rng, set: &std::sync::Arc<CandidateSet>, density: f64) -> PartialOrder {
    let mut idx: Vec<usize> = (0..set.len()).collect();
    idx.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if rng.gen_bool(density) {
                pairs.push((set.get(idx[i]).clone(), set.get(idx[j]).clone()));
            }
        }
    }
    PartialOrder::build(set.clone(), &pairs).unwrap()
}

/// Up to `max_c` candidates (at least one) and up to `max_v` voters.
pub fn random_profile(rng: &mut impl Rng, max_c: usize, max_v: usize) -> PartialProfile {
    let m = rng.gen_range(1..=max_c);
    let n = rng.gen_range(0..=max_v);
    let set = CandidateSet::new((0..m).map(|i| format!("c{i}"))).unwrap();
    let density = rng.gen_range(0.0..1.0);
    let entries = (0..n)
        .map(|i| (Voter::new(format!("v{i}")), random_order(rng, &set, density)))
        .collect();
    PartialProfile::new("e", set, entries).unwrap()
}

pub fn random_party(rng: &mut impl Rng, p: &PartialProfile) -> BTreeSet<Candidate> {
    p.candidates()
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect()
}

/// Scores computed directly from the scoring vector, independent of the
/// library's scoring module.
pub fn oracle_scores(vector: &[u64], t: &CompleteProfile) -> Vec<(Candidate, u64)> {
    let mut out: Vec<(Candidate, u64)> = t.candidates().iter().map(|c| (c.clone(), 0)).collect();
    for (_, order) in t.entries() {
        for (pos, c) in order.ranking().iter().enumerate() {
            let slot = out.iter_mut().find(|(d, _)| d == c).unwrap();
            slot.1 += vector[pos];
        }
    }
    out
}

pub fn oracle_winners(vector: &[u64], t: &CompleteProfile) -> BTreeSet<Candidate> {
    let scores = oracle_scores(vector, t);
    let best = scores.iter().map(|(_, s)| *s).max().unwrap_or(0);
    scores.into_iter().filter(|(_, s)| *s == best).map(|(c, _)| c).collect()
}

pub fn plurality_vector(m: usize) -> Vec<u64> {
    (0..m).map(|i| u64::from(i == 0)).collect()
}

pub fn borda_vector(m: usize) -> Vec<u64> {
    (0..m).map(|i| (m - 1 - i) as u64).collect()
}

pub fn approval_vector(k: usize, m: usize) -> Vec<u64> {
    (0..m).map(|i| u64::from(i < k)).collect()
}

/// Every completion, fully enumerated.
pub fn all_completions(p: &PartialProfile) -> Vec<CompleteProfile> {
    profile_completions(p, 10_000_000).unwrap().collect()
}

/// Necessary intersection by enumeration.
pub fn oracle_necessary_intersection(p: &PartialProfile, party: &BTreeSet<Candidate>) -> bool {
    let v = plurality_vector(p.candidates().len());
    all_completions(p)
        .iter()
        .all(|t| !oracle_winners(&v, t).is_disjoint(party))
}

pub fn oracle_possible_winners(vector: &[u64], p: &PartialProfile) -> BTreeSet<Candidate> {
    all_completions(p)
        .iter()
        .flat_map(|t| oracle_winners(vector, t))
        .collect()
}

pub fn oracle_necessary_winners(vector: &[u64], p: &PartialProfile) -> BTreeSet<Candidate> {
    let mut out: BTreeSet<Candidate> = p.candidates().iter().cloned().collect();
    for t in all_completions(p) {
        let w = oracle_winners(vector, &t);
        out.retain(|c| w.contains(c));
    }
    out
}

/// Graph over nodes `n0..n{count}` with the edges selected by `mask` over
/// the pairs in lexicographic order.
pub fn graph_from_mask(count: usize, mask: u64) -> Graph {
    let nodes: Vec<String> = (0..count).map(|i| format!("n{i}")).collect();
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..count {
        for j in i + 1..count {
            if mask & (1 << bit) != 0 {
                edges.push((nodes[i].clone(), nodes[j].clone()));
            }
            bit += 1;
        }
    }
    Graph::new(nodes, edges).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, count: usize) -> Graph {
    let pairs = count * (count - 1) / 2;
    graph_from_mask(count, rng.gen_range(0..1u64 << pairs))
}

pub fn random_dnf(rng: &mut impl Rng, max_vars: usize) -> ThreeDnf {
    let vars = rng.gen_range(1..=max_vars);
    let k = rng.gen_range(1..=2 * (1 << vars));
    let disjuncts = (0..k)
        .map(|_| {
            [0; 3].map(|_| Literal {
                var: rng.gen_range(1..=vars),
                positive: rng.gen_bool(0.5),
            })
        })
        .collect();
    ThreeDnf::new(vars, disjuncts).unwrap()
}

/// Truth-table tautology check written independently of the library.
pub fn truth_table_tautology(phi: &ThreeDnf) -> bool {
    (0..1u32 << phi.vars()).all(|bits| {
        phi.disjuncts().iter().any(|d| {
            d.iter()
                .all(|l| ((bits >> (l.var - 1)) & 1 == 1) == l.positive)
        })
    })
}

/// Independent-set check written independently of the library.
pub fn has_independent_set(g: &Graph, k: usize) -> bool {
    let nodes: Vec<&String> = g.nodes().iter().collect();
    let n = nodes.len();
    (0u32..1 << n).any(|s| {
        s.count_ones() as usize == k
            && g.edges().iter().all(|(a, b)| {
                let ia = nodes.iter().position(|x| *x == a).unwrap();
                let ib = nodes.iter().position(|x| *x == b).unwrap();
                s & (1 << ia) == 0 || s & (1 << ib) == 0
            })
    })
}
