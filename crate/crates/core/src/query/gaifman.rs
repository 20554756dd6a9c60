use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::{Atom, ConjunctiveQuery, WinnerAtom};
use crate::scoring::{builtin_rule, canonical_rule_name};

/// Variables of a query, adjacent when they share an ordinary atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaifmanGraph {
    pub nodes: BTreeSet<String>,
    /// Unordered pairs, stored with the smaller name first.
    pub edges: BTreeSet<(String, String)>,
}

impl GaifmanGraph {
    /// Connected components, each sorted, listed by smallest member.
    pub fn components(&self) -> Vec<BTreeSet<String>> {
        let names: Vec<&String> = self.nodes.iter().collect();
        let index: BTreeMap<&str, usize> =
            names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut uf = UnionFind::new(names.len());
        for (a, b) in &self.edges {
            uf.union(index[a.as_str()], index[b.as_str()]);
        }
        let mut groups: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().insert((*n).clone());
        }
        let mut out: Vec<_> = groups.into_values().collect();
        out.sort();
        out
    }
}

pub fn gaifman_graph(q: &ConjunctiveQuery) -> GaifmanGraph {
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for atom in &q.body {
        let vars = atom.variables();
        nodes.extend(vars.iter().map(|v| v.to_string()));
        if let Atom::Ordinary { .. } = atom {
            for a in &vars {
                for b in &vars {
                    if a < b {
                        edges.insert((a.to_string(), b.to_string()));
                    }
                }
            }
        }
    }
    GaifmanGraph { nodes, edges }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    TractablePlurality,
    RequiresBruteForce,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::TractablePlurality => "tractable-plurality",
            Verdict::RequiresBruteForce => "requires-brute-force",
        })
    }
}

/// Atoms of one Gaifman component. Ground atoms form components of their
/// own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryComponent {
    pub variables: BTreeSet<String>,
    /// Indices into the query body.
    pub atoms: Vec<usize>,
    /// Distinct Winner atoms of the component.
    pub winner_atoms: Vec<WinnerAtom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryClassification {
    pub components: Vec<QueryComponent>,
    /// Comparison atoms whose variables lie in different components.
    pub spanning_comparisons: Vec<usize>,
    pub verdict: Verdict,
    pub reason: String,
}

/// Two Winner atoms are identical when they agree on election and
/// candidate term and name the same rule.
pub(crate) fn same_winner(a: &WinnerAtom, b: &WinnerAtom) -> bool {
    let key = |w: &WinnerAtom| canonical_rule_name(&w.rule).unwrap_or_else(|| w.rule.clone());
    a.election == b.election && a.candidate == b.candidate && key(a) == key(b)
}

pub(crate) fn is_plurality_name(rule: &str) -> bool {
    builtin_rule(rule).map(|r| r.is_plurality()).unwrap_or(false)
}

pub fn classify_query(q: &ConjunctiveQuery) -> QueryClassification {
    let comps = gaifman_graph(q).components();
    let comp_of: BTreeMap<&str, usize> = comps
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |v| (v.as_str(), i)))
        .collect();

    let mut by_var: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    let mut ground: Vec<usize> = Vec::new();
    let mut spanning = Vec::new();
    for (i, atom) in q.body.iter().enumerate() {
        let owners: BTreeSet<usize> = atom.variables().iter().map(|v| comp_of[v]).collect();
        match owners.len() {
            0 => ground.push(i),
            1 => by_var[*owners.first().unwrap()].push(i),
            _ => spanning.push(i),
        }
    }

    let mut components: Vec<QueryComponent> = comps
        .into_iter()
        .zip(by_var)
        .map(|(variables, atoms)| QueryComponent {
            variables,
            atoms,
            winner_atoms: Vec::new(),
        })
        .chain(ground.into_iter().map(|i| QueryComponent {
            variables: BTreeSet::new(),
            atoms: vec![i],
            winner_atoms: Vec::new(),
        }))
        .filter(|c| !c.atoms.is_empty())
        .collect();
    components.sort_by_key(|c| c.atoms[0]);
    for c in &mut components {
        for &i in &c.atoms {
            if let Atom::Winner(w) = &q.body[i] {
                if !c.winner_atoms.iter().any(|x| same_winner(x, w)) {
                    c.winner_atoms.push(w.clone());
                }
            }
        }
    }

    let (verdict, reason) = verdict(q, &components, &spanning);
    QueryClassification {
        components,
        spanning_comparisons: spanning,
        verdict,
        reason,
    }
}

fn verdict(q: &ConjunctiveQuery, components: &[QueryComponent], spanning: &[usize]) -> (Verdict, String) {
    let brute = |r: String| (Verdict::RequiresBruteForce, r);
    if let Some(w) = q.winner_atoms().find(|w| !is_plurality_name(&w.rule)) {
        return brute(format!("{} does not use plurality", Atom::Winner(w.clone())));
    }
    for c in components {
        if c.winner_atoms.len() > 1 {
            let atoms: Vec<String> = c
                .winner_atoms
                .iter()
                .map(|w| Atom::Winner(w.clone()).to_string())
                .collect();
            let vars: Vec<&str> = c.variables.iter().map(String::as_str).collect();
            return brute(format!(
                "Winner atoms {} are connected through {{{}}}",
                atoms.join(" and "),
                vars.join(", ")
            ));
        }
    }
    if let Some(&i) = spanning.first() {
        return brute(format!("comparison `{}` links separate components", q.body[i]));
    }
    let n = components.iter().filter(|c| !c.winner_atoms.is_empty()).count();
    (
        Verdict::TractablePlurality,
        format!("{n} plurality Winner atom(s), pairwise disconnected"),
    )
}
