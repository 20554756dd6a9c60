//! Backtracking join evaluation of conjunctive queries.

use std::collections::{BTreeSet, HashMap};

use super::ast::{Atom, CmpOp, ConjunctiveQuery, Term, WinnerAtom};
use crate::error::{Error, Result};
use crate::model::{profile_from_ballots, PreferenceDatabase, Scalar};
use crate::scoring::{winners, RuleRegistry, ScoringRule};

/// One distinct `(rule, election)` pair used by Winner atoms.
#[derive(Clone, Debug)]
pub(crate) struct WinnerKey {
    pub rule: ScoringRule,
    pub election: String,
}

pub(crate) fn election_id(s: &Scalar) -> String {
    s.to_string()
}

#[derive(Clone, Debug)]
enum Slot {
    Var(usize),
    Const(Scalar),
}

#[derive(Clone, Debug)]
enum Step<'a> {
    Rel { rows: &'a [Vec<Scalar>], slots: Vec<Slot> },
    Member { set: usize, slot: Slot },
    Cmp { left: Slot, op: CmpOp, right: Slot },
}

/// A query body bound to a database, with Winner atoms turned into
/// membership tests against externally supplied sets (one per
/// [`WinnerKey`]).
#[derive(Clone, Debug)]
pub(crate) struct Compiled<'a> {
    steps: Vec<Step<'a>>,
    var_count: usize,
    head: Vec<usize>,
    pub keys: Vec<WinnerKey>,
}

impl<'a> Compiled<'a> {
    pub fn new(
        atoms: &[Atom],
        head: &[String],
        db: &'a PreferenceDatabase,
        rules: &RuleRegistry,
    ) -> Result<Self> {
        let mut vars: HashMap<&str, usize> = HashMap::new();
        let mut keys: Vec<WinnerKey> = Vec::new();
        let mut raw = Vec::with_capacity(atoms.len());
        for atom in atoms {
            raw.push(match atom {
                Atom::Ordinary { relation, terms } => {
                    let rel = db
                        .relation(relation)
                        .ok_or_else(|| Error::UnknownRelation(relation.clone()))?;
                    if rel.arity() != terms.len() {
                        return Err(Error::ArityMismatch {
                            relation: relation.clone(),
                            expected: rel.arity(),
                            found: terms.len(),
                        });
                    }
                    Step::Rel {
                        rows: &rel.rows,
                        slots: terms.iter().map(|t| slot(t, &mut vars)).collect(),
                    }
                }
                Atom::Winner(w) => {
                    let idx = winner_key_index(&mut keys, w, db, rules)?;
                    Step::Member {
                        set: idx,
                        slot: slot(&w.candidate, &mut vars),
                    }
                }
                Atom::Comparison { left, op, right } => Step::Cmp {
                    left: slot(left, &mut vars),
                    op: *op,
                    right: slot(right, &mut vars),
                },
            });
        }
        let head = head
            .iter()
            .map(|h| {
                vars.get(h.as_str())
                    .copied()
                    .ok_or_else(|| Error::Safety(format!("head variable `{h}` does not occur in the body")))
            })
            .collect::<Result<Vec<_>>>()?;
        let var_count = vars.len();
        Ok(Compiled {
            steps: plan(raw, var_count),
            var_count,
            head,
            keys,
        })
    }

    /// Calls `f` with the head tuple of every satisfying assignment (with
    /// repetitions) until it returns `false`.
    pub fn run(&self, sets: &[BTreeSet<Scalar>], f: &mut dyn FnMut(Vec<Scalar>) -> bool) {
        assert_eq!(sets.len(), self.keys.len());
        let mut env: Vec<Option<Scalar>> = vec![None; self.var_count];
        self.step(0, sets, &mut env, f);
    }

    pub fn exists(&self, sets: &[BTreeSet<Scalar>]) -> bool {
        let mut found = false;
        self.run(sets, &mut |_| {
            found = true;
            false
        });
        found
    }

    pub fn answers(&self, sets: &[BTreeSet<Scalar>]) -> BTreeSet<Vec<Scalar>> {
        let mut out = BTreeSet::new();
        self.run(sets, &mut |t| {
            out.insert(t);
            true
        });
        out
    }

    fn step(
        &self,
        i: usize,
        sets: &[BTreeSet<Scalar>],
        env: &mut Vec<Option<Scalar>>,
        f: &mut dyn FnMut(Vec<Scalar>) -> bool,
    ) -> bool {
        let Some(step) = self.steps.get(i) else {
            let tuple = self
                .head
                .iter()
                .map(|&v| env[v].clone().expect("head bound"))
                .collect();
            return f(tuple);
        };
        match step {
            Step::Cmp { left, op, right } => {
                let l = value(left, env).expect("comparison planned after binding");
                let r = value(right, env).expect("comparison planned after binding");
                !op.holds(l, r) || self.step(i + 1, sets, env, f)
            }
            Step::Member { set, slot } => match value(slot, env) {
                Some(v) => !sets[*set].contains(v) || self.step(i + 1, sets, env, f),
                None => {
                    let Slot::Var(x) = slot else { unreachable!() };
                    for v in &sets[*set] {
                        env[*x] = Some(v.clone());
                        if !self.step(i + 1, sets, env, f) {
                            env[*x] = None;
                            return false;
                        }
                    }
                    env[*x] = None;
                    true
                }
            },
            Step::Rel { rows, slots } => {
                let mut fresh: Vec<usize> = Vec::with_capacity(slots.len());
                for row in rows.iter() {
                    let mut ok = true;
                    for (s, v) in slots.iter().zip(row) {
                        match s {
                            Slot::Const(c) => ok = c == v,
                            Slot::Var(x) => match &env[*x] {
                                Some(b) => ok = b == v,
                                None => {
                                    env[*x] = Some(v.clone());
                                    fresh.push(*x);
                                }
                            },
                        }
                        if !ok {
                            break;
                        }
                    }
                    let go_on = !ok || self.step(i + 1, sets, env, f);
                    for x in fresh.drain(..) {
                        env[x] = None;
                    }
                    if !go_on {
                        return false;
                    }
                }
                true
            }
        }
    }
}

fn slot<'q>(t: &'q Term, vars: &mut HashMap<&'q str, usize>) -> Slot {
    match t {
        Term::Const(c) => Slot::Const(c.clone()),
        Term::Var(v) => {
            let n = vars.len();
            Slot::Var(*vars.entry(v.as_str()).or_insert(n))
        }
    }
}

fn value<'e>(s: &'e Slot, env: &'e [Option<Scalar>]) -> Option<&'e Scalar> {
    match s {
        Slot::Const(c) => Some(c),
        Slot::Var(x) => env[*x].as_ref(),
    }
}

fn winner_key_index(
    keys: &mut Vec<WinnerKey>,
    w: &WinnerAtom,
    db: &PreferenceDatabase,
    rules: &RuleRegistry,
) -> Result<usize> {
    let rule = rules.resolve(&w.rule)?;
    let election = election_id(&w.election);
    if db.election(&election).is_none() {
        return Err(Error::UnknownElection(election));
    }
    if let Some(i) = keys
        .iter()
        .position(|k| k.rule.name() == rule.name() && k.election == election)
    {
        return Ok(i);
    }
    keys.push(WinnerKey { rule, election });
    Ok(keys.len() - 1)
}

/// Static greedy order: comparisons as soon as both sides are bound, else
/// the atom with the most bound terms (earliest on ties).
fn plan(mut pending: Vec<Step<'_>>, var_count: usize) -> Vec<Step<'_>> {
    let mut bound = vec![false; var_count];
    let is_bound = |s: &Slot, bound: &[bool]| match s {
        Slot::Const(_) => true,
        Slot::Var(x) => bound[*x],
    };
    let mut out = Vec::with_capacity(pending.len());
    while !pending.is_empty() {
        let ready_cmp = pending.iter().position(|s| match s {
            Step::Cmp { left, right, .. } => is_bound(left, &bound) && is_bound(right, &bound),
            _ => false,
        });
        let pick = ready_cmp.unwrap_or_else(|| {
            let score = |s: &Step<'_>| match s {
                Step::Rel { slots, .. } => Some(slots.iter().filter(|x| is_bound(x, &bound)).count()),
                Step::Member { slot, .. } => Some(usize::from(is_bound(slot, &bound))),
                Step::Cmp { .. } => None,
            };
            let mut best: Option<(usize, usize)> = None;
            for (i, s) in pending.iter().enumerate() {
                if let Some(sc) = score(s) {
                    if best.map_or(true, |(_, b)| sc > b) {
                        best = Some((i, sc));
                    }
                }
            }
            best.expect("safe queries bind every comparison variable").0
        });
        let step = pending.remove(pick);
        let mark = |s: &Slot, bound: &mut [bool]| {
            if let Slot::Var(x) = s {
                bound[*x] = true;
            }
        };
        match &step {
            Step::Rel { slots, .. } => slots.iter().for_each(|s| mark(s, &mut bound)),
            Step::Member { slot, .. } => mark(slot, &mut bound),
            Step::Cmp { .. } => {}
        }
        out.push(step);
    }
    out
}

/// Winner sets of `keys` on the database itself, which must hold only total
/// orders for the elections involved.
pub(crate) fn complete_winner_sets(
    keys: &[WinnerKey],
    db: &PreferenceDatabase,
) -> Result<Vec<BTreeSet<Scalar>>> {
    keys.iter()
        .map(|k| {
            let p = profile_from_ballots(db, &k.election)?;
            let t = p.as_complete().ok_or_else(|| {
                let voter = p
                    .entries()
                    .iter()
                    .find(|(_, o)| !o.is_total())
                    .map(|(v, _)| v.to_string())
                    .unwrap_or_default();
                Error::IncompleteProfile {
                    election: k.election.clone(),
                    voter,
                }
            })?;
            Ok(winners(&k.rule, &t)?.iter().map(Scalar::from).collect())
        })
        .collect()
}

/// Candidate sets of the elections of `keys`: the Winner atoms relaxed to
/// "is a candidate of the election".
pub(crate) fn candidate_sets(
    keys: &[WinnerKey],
    db: &PreferenceDatabase,
) -> Result<Vec<BTreeSet<Scalar>>> {
    keys.iter()
        .map(|k| Ok(db.candidate_set(&k.election)?.iter().map(Scalar::from).collect()))
        .collect()
}

/// Evaluates `q` on a database whose preferences are complete: Winner
/// atoms hold for the co-winners of the (single) completed profile.
pub fn evaluate_cq(
    q: &ConjunctiveQuery,
    db: &PreferenceDatabase,
    rules: &RuleRegistry,
) -> Result<BTreeSet<Vec<Scalar>>> {
    let c = Compiled::new(&q.body, &q.head, db, rules)?;
    let sets = complete_winner_sets(&c.keys, db)?;
    Ok(c.answers(&sets))
}
