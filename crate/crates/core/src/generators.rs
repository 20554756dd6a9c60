//! Instance factories for the two hardness reductions, with exhaustive
//! ground-truth oracles.
//!
//! * [`gen_qh_instance`] turns a graph and a number `k` into a database on
//!   which the query `q_h` is necessary iff the graph has no independent set
//!   of size `k`.
//! * [`gen_tautology_instance`] turns a 3-DNF formula and a strict scoring
//!   rule into a database on which the query `q3w` is necessary iff the
//!   formula is a tautology.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    Ballot, Candidate, CompleteProfile, ElectionData, OrdinaryRelation, PreferenceDatabase, Scalar,
    Voter,
};
use crate::query::{Atom, ConjunctiveQuery, Term, WinnerAtom};
use crate::scoring::{rule_properties, ScoringRule};

/// Largest input the oracles accept.
pub const ORACLE_LIMIT: usize = 20;

/// An undirected simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    nodes: BTreeSet<String>,
    edges: BTreeSet<(String, String)>,
}

impl Graph {
    pub fn new<N, E>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: Into<String>,
        E: IntoIterator<Item = (String, String)>,
    {
        let nodes: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        if let Some(n) = nodes.iter().find(|n| n.is_empty() || n.contains(char::is_whitespace)) {
            return Err(Error::Argument(format!("invalid node name {n:?}")));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for x in [&a, &b] {
                if !nodes.contains(x) {
                    return Err(Error::Argument(format!("edge references unknown node `{x}`")));
                }
            }
            if a == b {
                return Err(Error::Argument(format!("self-loop on `{a}`")));
            }
            set.insert(if a < b { (a, b) } else { (b, a) });
        }
        Ok(Graph { nodes, edges: set })
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(String, String)> {
        &self.edges
    }

    pub fn adjacent(&self, a: &str, b: &str) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges
            .iter()
            .any(|(x, y)| x == key.0 && y == key.1)
    }
}

impl FromStr for Graph {
    type Err = Error;

    /// Edge-list text: one `u v` pair per line. A line with a single name
    /// declares an isolated node; `#` starts a comment.
    fn from_str(text: &str) -> Result<Self> {
        let mut nodes = BTreeSet::new();
        let mut edges = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts[..] {
                [] => {}
                [u] => {
                    nodes.insert(u.to_string());
                }
                [u, v] => {
                    nodes.insert(u.to_string());
                    nodes.insert(v.to_string());
                    edges.push((u.to_string(), v.to_string()));
                }
                _ => {
                    return Err(Error::Format(format!(
                        "graph line {}: expected `u v`, found {line:?}",
                        no + 1
                    )))
                }
            }
        }
        Graph::new(nodes, edges)
    }
}

/// A literal `x_i` or `¬x_i`, written `xi` / `!xi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn candidate_id(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "!x{}", self.var)
        }
    }
}

impl FromStr for Literal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (positive, rest) = match s.strip_prefix('!') {
            Some(r) => (false, r),
            None => (true, s),
        };
        let var = rest
            .strip_prefix('x')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&v| v >= 1)
            .ok_or_else(|| Error::Format(format!("invalid literal `{s}`; expected `x3` or `!x3`")))?;
        Ok(Literal { var, positive })
    }
}

/// A 3-DNF formula over `x_1 .. x_vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeDnf {
    vars: usize,
    disjuncts: Vec<[Literal; 3]>,
}

impl ThreeDnf {
    pub fn new(vars: usize, disjuncts: Vec<[Literal; 3]>) -> Result<Self> {
        if vars == 0 {
            return Err(Error::Argument("a formula needs at least one variable".into()));
        }
        if let Some(l) = disjuncts.iter().flatten().find(|l| l.var == 0 || l.var > vars) {
            return Err(Error::Argument(format!("literal `{l}` is outside x1..x{vars}")));
        }
        Ok(ThreeDnf { vars, disjuncts })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn disjuncts(&self) -> &[[Literal; 3]] {
        &self.disjuncts
    }

    /// Value under `assignment[i - 1]` for `x_i`.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.disjuncts
            .iter()
            .any(|d| d.iter().all(|l| assignment[l.var - 1] == l.positive))
    }
}

impl FromStr for ThreeDnf {
    type Err = Error;

    /// One disjunct per line, three literals separated by whitespace or
    /// commas. The variable count is the largest index used.
    fn from_str(text: &str) -> Result<Self> {
        let mut disjuncts = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lits = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(Literal::from_str)
                .collect::<Result<Vec<_>>>()?;
            let d: [Literal; 3] = lits.try_into().map_err(|v: Vec<Literal>| {
                Error::Format(format!("line {}: expected 3 literals, found {}", no + 1, v.len()))
            })?;
            disjuncts.push(d);
        }
        let vars = disjuncts.iter().flatten().map(|l| l.var).max().unwrap_or(0);
        ThreeDnf::new(vars, disjuncts)
    }
}

impl fmt::Display for ThreeDnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.disjuncts {
            writeln!(f, "{} {} {}", d[0], d[1], d[2])?;
        }
        Ok(())
    }
}

fn ballot(voter: &str, pairs: impl IntoIterator<Item = (String, String)>) -> Ballot {
    Ballot {
        voter: Voter::new(voter),
        prefers: pairs
            .into_iter()
            .map(|(a, b)| (Candidate::new(a), Candidate::new(b)))
            .collect(),
    }
}

fn chain(order: &[String]) -> Vec<(String, String)> {
    order.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

fn winner(rule: &str, election: &str, var: &str) -> Atom {
    Atom::Winner(WinnerAtom {
        rule: rule.to_string(),
        election: Scalar::str(election),
        candidate: Term::var(var),
    })
}

pub const QH_ELECTION: &str = "elec";
pub const TAUTOLOGY_ELECTION: &str = "e";

/// Candidate `⟨u, i⟩` of a `q_h` instance.
pub fn qh_candidate(u: &str, i: usize) -> String {
    format!("{u}@{i}")
}

/// The `q_h` instance for graph `g` and independent-set size `k`.
pub fn gen_qh_instance(g: &Graph, k: usize) -> Result<(PreferenceDatabase, ConjunctiveQuery)> {
    if k == 0 || k > g.nodes.len() {
        return Err(Error::Argument(format!(
            "k must be in 1..={} (the number of nodes), got {k}",
            g.nodes.len()
        )));
    }
    let candidates: Vec<Candidate> = (1..=k)
        .flat_map(|i| g.nodes.iter().map(move |u| Candidate::new(qh_candidate(u, i))))
        .collect();
    let ballots = (1..=k)
        .map(|i| {
            let mut pairs = Vec::new();
            for u in &g.nodes {
                for j in (1..=k).filter(|&j| j != i) {
                    for w in &g.nodes {
                        pairs.push((qh_candidate(u, i), qh_candidate(w, j)));
                    }
                }
            }
            ballot(&format!("v{i}"), pairs)
        })
        .collect();
    let mut rows = Vec::new();
    for i in 1..=k {
        for j in 1..=k {
            for u in &g.nodes {
                for w in &g.nodes {
                    let related = if u == w { i != j } else { g.adjacent(u, w) };
                    if related {
                        rows.push(vec![Scalar::str(qh_candidate(u, i)), Scalar::str(qh_candidate(w, j))]);
                    }
                }
            }
        }
    }
    let mut db = PreferenceDatabase::new();
    db.insert_relation(OrdinaryRelation::new("R", vec!["left".into(), "right".into()], rows)?);
    db.insert_election(
        QH_ELECTION,
        ElectionData {
            candidates,
            voters: (1..=k).map(|i| Voter::new(format!("v{i}"))).collect(),
            ballots,
        },
    );
    let query = ConjunctiveQuery {
        name: "q_h".into(),
        head: vec![],
        body: vec![
            winner("plurality", QH_ELECTION, "c"),
            Atom::Ordinary {
                relation: "R".into(),
                terms: vec![Term::var("c"), Term::var("d")],
            },
            winner("plurality", QH_ELECTION, "d"),
        ],
    };
    Ok((db, query))
}

/// Shape of a generated tautology instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TautologyInfo {
    pub ell: usize,
    pub m: usize,
    pub d: usize,
    pub voters: usize,
}

pub fn tautology_info(phi: &ThreeDnf, rule: &ScoringRule) -> Result<TautologyInfo> {
    let ell = phi.vars;
    let m = 2 * ell + 1;
    let d = rule_properties(rule, m)?
        .strict_gap_d
        .ok_or_else(|| Error::NonStrictRule {
            rule: rule.name().to_string(),
            m,
        })?;
    Ok(TautologyInfo {
        ell,
        m,
        d,
        voters: ell * (m - 2) + m - 1,
    })
}

fn lit_ids(ell: usize) -> Vec<String> {
    (1..=ell)
        .flat_map(|i| [Literal::pos(i).to_string(), Literal::neg(i).to_string()])
        .collect()
}

/// `rest` with `first, second` inserted at positions `d` and `d + 1`
/// (1-based).
fn with_pair(rest: &[String], d: usize, first: &str, second: &str) -> Vec<String> {
    let mut v = rest[..d - 1].to_vec();
    v.push(first.to_string());
    v.push(second.to_string());
    v.extend_from_slice(&rest[d - 1..]);
    v
}

/// The voters of the tautology construction, as (voter id, ranking). For
/// the partial voters `v_i` the ranking is `c^i`, from which the pair
/// `x_i > ¬x_i` is dropped.
pub fn tautology_rankings(ell: usize, d: usize) -> Vec<(String, Vec<String>)> {
    let m = 2 * ell + 1;
    let lits = lit_ids(ell);
    let mut out = Vec::new();
    for i in 1..=ell {
        let (xi, nxi) = (Literal::pos(i).to_string(), Literal::neg(i).to_string());
        // The remaining m - 2 candidates of c^i: x0, then the other literals
        // in variable order.
        let rest: Vec<String> = std::iter::once("x0".to_string())
            .chain(lits.iter().filter(|l| **l != xi && **l != nxi).cloned())
            .collect();
        for j in 1..=m - 3 {
            let mut shifted = rest.clone();
            shifted.rotate_left(j % rest.len());
            let order = if j % 2 == 1 {
                with_pair(&shifted, d, &xi, &nxi)
            } else {
                with_pair(&shifted, d, &nxi, &xi)
            };
            out.push((format!("v{i}^{j}"), order));
        }
        out.push((format!("v{i}"), with_pair(&rest, d, &xi, &nxi)));
    }
    for j in 1..=m - 1 {
        let mut order = lits.clone();
        order.rotate_left(j % lits.len());
        order.push("x0".into());
        out.push((format!("u{j}"), order));
    }
    out
}

/// The `q3w` instance for formula `phi` under a strict rule.
pub fn gen_tautology_instance(
    phi: &ThreeDnf,
    rule: &ScoringRule,
) -> Result<(PreferenceDatabase, ConjunctiveQuery)> {
    let info = tautology_info(phi, rule)?;
    let mut ballots = Vec::new();
    let mut voters = Vec::new();
    for (voter, order) in tautology_rankings(info.ell, info.d) {
        let pairs = match voter.strip_prefix('v').filter(|r| !r.contains('^')) {
            Some(i) => {
                // Partial voter: drop only the link between x_i and ¬x_i.
                let i: usize = i.parse().expect("generated id");
                let (xi, nxi) = (Literal::pos(i).to_string(), Literal::neg(i).to_string());
                let d = info.d;
                let mut pairs: Vec<(String, String)> =
                    chain(&order).into_iter().filter(|(a, b)| !(a == &xi && b == &nxi)).collect();
                if d >= 2 {
                    pairs.push((order[d - 2].clone(), nxi.clone()));
                }
                if d + 1 < order.len() {
                    pairs.push((xi.clone(), order[d + 1].clone()));
                }
                pairs
            }
            None => chain(&order),
        };
        voters.push(Voter::new(&voter));
        ballots.push(ballot(&voter, pairs));
    }
    let rows = phi
        .disjuncts
        .iter()
        .map(|d| d.iter().map(|l| Scalar::str(l.to_string())).collect())
        .collect();
    let mut db = PreferenceDatabase::new();
    db.insert_relation(OrdinaryRelation::new(
        "R",
        vec!["first".into(), "second".into(), "third".into()],
        rows,
    )?);
    let mut candidates = vec![Candidate::new("x0")];
    candidates.extend(lit_ids(info.ell).into_iter().map(Candidate::new));
    db.insert_election(
        TAUTOLOGY_ELECTION,
        ElectionData {
            candidates,
            voters,
            ballots,
        },
    );
    let r = rule.name();
    let query = ConjunctiveQuery {
        name: "q3w".into(),
        head: vec![],
        body: vec![
            winner(r, TAUTOLOGY_ELECTION, "x1"),
            winner(r, TAUTOLOGY_ELECTION, "x2"),
            winner(r, TAUTOLOGY_ELECTION, "x3"),
            Atom::Ordinary {
                relation: "R".into(),
                terms: vec![Term::var("x1"), Term::var("x2"), Term::var("x3")],
            },
        ],
    };
    Ok((db, query))
}

/// The literals a completion of a tautology instance selects: `x_i` when
/// voter `v_i` ranks it above `¬x_i`, else `¬x_i`.
pub fn selected_literals(completion: &CompleteProfile) -> Result<Vec<Literal>> {
    let m = completion.candidates().len();
    if m % 2 == 0 {
        return Err(Error::Argument("not a tautology instance (even candidate count)".into()));
    }
    let ell = (m - 1) / 2;
    (1..=ell)
        .map(|i| {
            let voter = Voter::new(format!("v{i}"));
            let (_, t) = completion
                .entries()
                .iter()
                .find(|(v, _)| *v == voter)
                .ok_or_else(|| Error::Argument(format!("missing voter `{voter}`")))?;
            let pos = |l: Literal| {
                t.position(&Candidate::new(l.to_string()))
                    .ok_or_else(|| Error::Argument(format!("missing candidate `{l}`")))
            };
            Ok(if pos(Literal::pos(i))? < pos(Literal::neg(i))? {
                Literal::pos(i)
            } else {
                Literal::neg(i)
            })
        })
        .collect()
}

/// Whether `g` has an independent set of exactly `k` nodes.
pub fn oracle_independent_set(g: &Graph, k: usize) -> Result<bool> {
    let n = g.nodes.len();
    if n > ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            size: n,
            limit: ORACLE_LIMIT,
        });
    }
    if k == 0 {
        return Ok(true);
    }
    let names: Vec<&String> = g.nodes.iter().collect();
    let mut adj = vec![0u32; n];
    for (a, b) in &g.edges {
        let (i, j) = (
            names.iter().position(|x| *x == a).unwrap(),
            names.iter().position(|x| *x == b).unwrap(),
        );
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    Ok((0u32..1 << n).any(|s| {
        s.count_ones() as usize == k && (0..n).all(|i| s & (1 << i) == 0 || adj[i] & s == 0)
    }))
}

/// Whether `phi` holds under every assignment.
pub fn oracle_tautology(phi: &ThreeDnf) -> Result<bool> {
    if phi.vars > ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            size: phi.vars,
            limit: ORACLE_LIMIT,
        });
    }
    let mut a = vec![false; phi.vars];
    Ok((0u32..1 << phi.vars).all(|bits| {
        for (i, x) in a.iter_mut().enumerate() {
            *x = bits & (1 << i) != 0;
        }
        phi.eval(&a)
    }))
}
