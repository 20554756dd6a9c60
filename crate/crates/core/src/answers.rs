//! Necessary and possible answers of conjunctive queries over preference
//! databases.
//!
//! Two routes exist. The polynomial route decomposes a query into Gaifman
//! components and reduces each component with a plurality Winner atom to a
//! necessary-intersection (or possible-winner) test. The brute-force route
//! enumerates completions of every election the query mentions, one per
//! score class of the rules in use, and evaluates the query on each.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::completions::{profile_classes, CompletionStream, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::model::{profile_from_ballots, Candidate, PreferenceDatabase, Scalar};
use crate::query::eval::{candidate_sets, election_id, Compiled, WinnerKey};
use crate::query::{
    check_safety, classify_query, is_plurality_name, same_winner, Atom, ConjunctiveQuery, Term,
    Verdict, WinnerAtom,
};
use crate::scoring::{argmax, score_blocks, totals_with, RuleRegistry};
use crate::winners::{necessary_intersection_plurality, possible_winners, Method, MethodUsed};

#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub method: Method,
    pub cap: u64,
    pub rules: RuleRegistry,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            method: Method::Auto,
            cap: DEFAULT_CAP,
            rules: RuleRegistry::new(),
        }
    }
}

impl EvalOptions {
    pub fn with_method(method: Method) -> Self {
        EvalOptions {
            method,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnswerMode {
    Necessary,
    Possible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Answer {
    Boolean(bool),
    Tuples(Vec<Vec<Scalar>>),
}

impl Answer {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Answer::Boolean(b) => Some(*b),
            Answer::Tuples(_) => None,
        }
    }

    pub fn as_tuples(&self) -> Option<&[Vec<Scalar>]> {
        match self {
            Answer::Tuples(t) => Some(t),
            Answer::Boolean(_) => None,
        }
    }
}

/// Completions examined by the brute-force route; not applicable to the
/// polynomial one. Serialized as a number or the string `"n/a"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Examined {
    Count(u64),
    NotApplicable,
}

impl Serialize for Examined {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Examined::Count(n) => s.serialize_u64(*n),
            Examined::NotApplicable => s.serialize_str("n/a"),
        }
    }
}

impl<'de> Deserialize<'de> for Examined {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(n) => Ok(Examined::Count(n)),
            Raw::Text(t) if t == "n/a" => Ok(Examined::NotApplicable),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("unexpected `{t}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerReport {
    pub mode: AnswerMode,
    pub head: Vec<String>,
    pub answer: Answer,
    pub method_used: MethodUsed,
    pub completions_examined: Examined,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// How head tuples are enumerated before deciding each one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grounding {
    /// Every tuple over the active domain.
    ActiveDomain,
    /// Only tuples produced when each Winner atom is weakened to "is a
    /// candidate of the election". Any tuple outside this set fails in every
    /// completion, so the answers are the same.
    Relaxed,
}

// ---------------------------------------------------------------------------
// Worlds: joint completions of the elections a query mentions.

struct KeyCtx {
    stream: usize,
    vector: Vec<u64>,
    ids: Vec<Scalar>,
}

struct Worlds {
    streams: Vec<CompletionStream>,
    ctx: Vec<KeyCtx>,
    started: bool,
    examined: u64,
}

impl Worlds {
    fn new(keys: &[WinnerKey], db: &PreferenceDatabase, cap: u64) -> Result<Self> {
        let mut elections: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, k) in keys.iter().enumerate() {
            elections.entry(k.election.as_str()).or_default().push(i);
        }
        let mut streams = Vec::new();
        let mut ctx: Vec<Option<KeyCtx>> = (0..keys.len()).map(|_| None).collect();
        let mut product: u64 = 1;
        for (election, idx) in elections {
            let p = profile_from_ballots(db, election)?;
            let m = p.candidates().len();
            let blocks = score_blocks(idx.iter().map(|&i| &keys[i].rule), m)?;
            let budget = cap / product;
            if budget == 0 {
                return Err(Error::CapExceeded { cap });
            }
            let stream = profile_classes(&p, &blocks, budget).map_err(|e| match e {
                Error::CapExceeded { .. } => Error::CapExceeded { cap },
                e => e,
            })?;
            product *= stream.total();
            let ids: Vec<Scalar> = p.candidates().iter().map(Scalar::from).collect();
            for &i in &idx {
                ctx[i] = Some(KeyCtx {
                    stream: streams.len(),
                    vector: keys[i].rule.vector(m)?,
                    ids: ids.clone(),
                });
            }
            streams.push(stream);
        }
        Ok(Worlds {
            streams,
            ctx: ctx.into_iter().map(|c| c.expect("every key has an election")).collect(),
            started: false,
            examined: 0,
        })
    }

    fn advance(&mut self) -> bool {
        let moved = if !self.started {
            self.started = true;
            self.streams.iter_mut().all(|s| s.advance().is_some())
        } else {
            let mut moved = false;
            for s in self.streams.iter_mut().rev() {
                if s.advance().is_some() {
                    moved = true;
                    break;
                }
                s.reset();
                s.advance();
            }
            moved
        };
        if moved {
            self.examined += 1;
        }
        moved
    }

    fn winner_sets(&self) -> Vec<BTreeSet<Scalar>> {
        self.ctx
            .iter()
            .map(|k| {
                let t = self.streams[k.stream].current().expect("world started");
                argmax(&totals_with(&k.vector, t))
                    .into_iter()
                    .map(|i| k.ids[i].clone())
                    .collect()
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Boolean queries.

fn require_boolean(q: &ConjunctiveQuery) -> Result<()> {
    if q.is_boolean() {
        Ok(())
    } else {
        Err(Error::NotBoolean(q.head.len()))
    }
}

fn brute_boolean(
    q: &ConjunctiveQuery,
    db: &PreferenceDatabase,
    mode: AnswerMode,
    opts: &EvalOptions,
) -> Result<(bool, u64)> {
    let compiled = Compiled::new(&q.body, &[], db, &opts.rules)?;
    let mut worlds = Worlds::new(&compiled.keys, db, opts.cap)?;
    while worlds.advance() {
        let holds = compiled.exists(&worlds.winner_sets());
        match mode {
            AnswerMode::Necessary if !holds => return Ok((false, worlds.examined)),
            AnswerMode::Possible if holds => return Ok((true, worlds.examined)),
            _ => {}
        }
    }
    Ok((mode == AnswerMode::Necessary, worlds.examined))
}

/// The candidates `c` of the Winner atom's election for which the other
/// atoms are satisfiable with the Winner candidate set to `c`. `atoms` must
/// contain exactly one distinct Winner atom.
pub fn winner_restriction_set(
    atoms: &[Atom],
    db: &PreferenceDatabase,
    rules: &RuleRegistry,
) -> Result<BTreeSet<Candidate>> {
    let mut distinct: Vec<&WinnerAtom> = Vec::new();
    for a in atoms {
        if let Atom::Winner(w) = a {
            if !distinct.iter().any(|x| same_winner(x, w)) {
                distinct.push(w);
            }
        }
    }
    let [w] = distinct[..] else {
        return Err(Error::Argument(format!(
            "expected exactly one distinct Winner atom, found {}",
            distinct.len()
        )));
    };
    let (head, fixed) = match &w.candidate {
        Term::Var(x) => (vec![x.clone()], None),
        Term::Const(c) => (vec![], Some(c.clone())),
    };
    let compiled = Compiled::new(atoms, &head, db, rules)?;
    let sets = candidate_sets(&compiled.keys, db)?;
    let set = db.candidate_set(&election_id(&w.election))?;
    let to_candidate = |s: &Scalar| s.as_str().map(Candidate::new).filter(|c| set.contains(c));
    Ok(match fixed {
        None => compiled
            .answers(&sets)
            .iter()
            .filter_map(|t| to_candidate(&t[0]))
            .collect(),
        Some(c) => match to_candidate(&c) {
            Some(c) if compiled.exists(&sets) => BTreeSet::from([c]),
            _ => BTreeSet::new(),
        },
    })
}

fn component_atoms(q: &ConjunctiveQuery, idx: &[usize]) -> Vec<Atom> {
    idx.iter().map(|&i| q.body[i].clone()).collect()
}

fn poly_necessary(q: &ConjunctiveQuery, db: &PreferenceDatabase, rules: &RuleRegistry) -> Result<bool> {
    let cls = classify_query(q);
    // Validate every atom up front so that errors do not depend on which
    // component fails first.
    Compiled::new(&q.body, &[], db, rules)?;
    for comp in &cls.components {
        let atoms = component_atoms(q, &comp.atoms);
        let holds = match comp.winner_atoms.first() {
            None => Compiled::new(&atoms, &[], db, rules)?.exists(&[]),
            Some(w) => {
                let party = winner_restriction_set(&atoms, db, rules)?;
                let p = profile_from_ballots(db, &election_id(&w.election))?;
                necessary_intersection_plurality(&p, &party)?
            }
        };
        if !holds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the narrow polynomial possibility rule applies: at most one
/// distinct Winner atom, plurality, and no comparison across components.
fn possible_poly_applies(q: &ConjunctiveQuery) -> std::result::Result<(), String> {
    let cls = classify_query(q);
    if let Some(&i) = cls.spanning_comparisons.first() {
        return Err(format!("comparison `{}` links separate components", q.body[i]));
    }
    let mut distinct: Vec<&WinnerAtom> = Vec::new();
    for w in q.winner_atoms() {
        if !is_plurality_name(&w.rule) {
            return Err(format!("{} does not use plurality", Atom::Winner(w.clone())));
        }
        if !distinct.iter().any(|x| same_winner(x, w)) {
            distinct.push(w);
        }
    }
    if distinct.len() > 1 {
        return Err(format!(
            "{} distinct Winner atoms; the polynomial possibility test handles one",
            distinct.len()
        ));
    }
    Ok(())
}

fn poly_possible(q: &ConjunctiveQuery, db: &PreferenceDatabase, opts: &EvalOptions) -> Result<bool> {
    let compiled = Compiled::new(&q.body, &[], db, &opts.rules)?;
    let Some(w) = q.winner_atoms().next() else {
        return Ok(compiled.exists(&[]));
    };
    let party = winner_restriction_set(&q.body, db, &opts.rules)?;
    if party.is_empty() {
        return Ok(false);
    }
    let p = profile_from_ballots(db, &election_id(&w.election))?;
    let rule = opts.rules.resolve(&w.rule)?;
    let pw = possible_winners(&rule, &p, Method::Poly, opts.cap)?;
    Ok(!pw.winners.is_disjoint(&party))
}

fn hard_shape_warning(q: &ConjunctiveQuery, reason: &str) -> Vec<String> {
    if q.winner_atoms().next().is_some() {
        vec![format!("{reason}; deciding by enumerating completions")]
    } else {
        Vec::new()
    }
}

fn boolean(
    q: &ConjunctiveQuery,
    db: &PreferenceDatabase,
    mode: AnswerMode,
    opts: &EvalOptions,
) -> Result<AnswerReport> {
    require_boolean(q)?;
    let tractable = match mode {
        AnswerMode::Necessary => {
            let cls = classify_query(q);
            match cls.verdict {
                Verdict::TractablePlurality => Ok(()),
                Verdict::RequiresBruteForce => Err(cls.reason),
            }
        }
        AnswerMode::Possible => possible_poly_applies(q),
    };
    let mut warnings = Vec::new();
    let use_poly = match (opts.method, &tractable) {
        (Method::Brute, _) => false,
        (_, Ok(())) => true,
        (Method::Poly, Err(reason)) => return Err(Error::NotTractable(reason.clone())),
        (Method::Auto, Err(reason)) => {
            warnings = hard_shape_warning(q, reason);
            false
        }
    };
    let (answer, method_used, examined) = if use_poly {
        let value = match mode {
            AnswerMode::Necessary => poly_necessary(q, db, &opts.rules)?,
            AnswerMode::Possible => poly_possible(q, db, opts)?,
        };
        (value, MethodUsed::Poly, Examined::NotApplicable)
    } else {
        let (value, n) = brute_boolean(q, db, mode, opts)?;
        (value, MethodUsed::Brute, Examined::Count(n))
    };
    Ok(AnswerReport {
        mode,
        head: Vec::new(),
        answer: Answer::Boolean(answer),
        method_used,
        completions_examined: examined,
        warnings,
    })
}

/// Whether a Boolean query holds in every completion of the database.
pub fn necessary_boolean(
    q: &ConjunctiveQuery,
    db: &PreferenceDatabase,
    opts: &EvalOptions,
) -> Result<AnswerReport> {
    boolean(q, db, AnswerMode::Necessary, opts)
}

/// Whether a Boolean query holds in some completion of the database.
pub fn possible_boolean(
    q: &ConjunctiveQuery,
    db: &PreferenceDatabase,
    opts: &EvalOptions,
) -> Result<AnswerReport> {
    boolean(q, db, AnswerMode::Possible, opts)
}

// ---------------------------------------------------------------------------
// Queries with head variables.

/// `q` with its head variables replaced by the constants of `tuple`.
pub fn instantiate(q: &ConjunctiveQuery, tuple: &[Scalar]) -> ConjunctiveQuery {
    let subst: BTreeMap<&str, &Scalar> = q.head.iter().map(String::as_str).zip(tuple).collect();
    let term = |t: &Term| match t {
        Term::Var(v) => subst
            .get(v.as_str())
            .map(|&c| Term::Const(c.clone()))
            .unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
    };
    let body = q
        .body
        .iter()
        .map(|a| match a {
            Atom::Ordinary { relation, terms } => Atom::Ordinary {
                relation: relation.clone(),
                terms: terms.iter().map(term).collect(),
            },
            Atom::Winner(w) => Atom::Winner(WinnerAtom {
                rule: w.rule.clone(),
                election: w.election.clone(),
                candidate: term(&w.candidate),
            }),
            Atom::Comparison { left, op, right } => Atom::Comparison {
                left: term(left),
                op: *op,
                right: term(right),
            },
        })
        .collect();
    ConjunctiveQuery {
        name: q.name.clone(),
        head: Vec::new(),
        body,
    }
}

fn ground_tuples(
    q: &ConjunctiveQuery,
    db: &PreferenceDatabase,
    grounding: Grounding,
    rules: &RuleRegistry,
) -> Result<Vec<Vec<Scalar>>> {
    let compiled = Compiled::new(&q.body, &q.head, db, rules)?;
    Ok(match grounding {
        Grounding::Relaxed => compiled
            .answers(&candidate_sets(&compiled.keys, db)?)
            .into_iter()
            .collect(),
        Grounding::ActiveDomain => {
            let dom: Vec<Scalar> = db.active_domain().into_iter().collect();
            let k = q.head.len();
            let total = dom.len().checked_pow(k as u32).unwrap_or(usize::MAX);
            if total > 10_000_000 {
                return Err(Error::SizeLimit {
                    size: total,
                    limit: 10_000_000,
                });
            }
            let mut out = Vec::with_capacity(total);
            let mut digits = vec![0usize; k];
            if dom.is_empty() && k > 0 {
                return Ok(out);
            }
            loop {
                out.push(digits.iter().map(|&d| dom[d].clone()).collect());
                let mut i = k;
                loop {
                    if i == 0 {
                        return Ok(out);
                    }
                    i -= 1;
                    digits[i] += 1;
                    if digits[i] < dom.len() {
                        break;
                    }
                    digits[i] = 0;
                }
            }
        }
    })
}

/// Decides each ground instantiation of the head separately.
pub fn answers_by_grounding(
    q: &ConjunctiveQuery,
    db: &PreferenceDatabase,
    mode: AnswerMode,
    grounding: Grounding,
    opts: &EvalOptions,
) -> Result<AnswerReport> {
    check_safety(q)?;
    let mut tuples = Vec::new();
    let mut poly = true;
    let mut examined = 0;
    let mut warnings = BTreeSet::new();
    for t in ground_tuples(q, db, grounding, &opts.rules)? {
        let r = boolean(&instantiate(q, &t), db, mode, opts)?;
        if r.method_used == MethodUsed::Brute {
            poly = false;
        }
        if let Examined::Count(n) = r.completions_examined {
            examined += n;
        }
        warnings.extend(r.warnings);
        if r.answer.as_bool() == Some(true) {
            tuples.push(t);
        }
    }
    Ok(AnswerReport {
        mode,
        head: q.head.clone(),
        answer: Answer::Tuples(tuples),
        method_used: if poly { MethodUsed::Poly } else { MethodUsed::Brute },
        completions_examined: if poly {
            Examined::NotApplicable
        } else {
            Examined::Count(examined)
        },
        warnings: warnings.into_iter().collect(),
    })
}

/// Evaluates the query once per completion and intersects (necessary) or
/// unites (possible) the answer relations.
pub fn answers_by_worlds(
    q: &ConjunctiveQuery,
    db: &PreferenceDatabase,
    mode: AnswerMode,
    opts: &EvalOptions,
) -> Result<AnswerReport> {
    let compiled = Compiled::new(&q.body, &q.head, db, &opts.rules)?;
    let mut worlds = Worlds::new(&compiled.keys, db, opts.cap)?;
    let mut acc: Option<BTreeSet<Vec<Scalar>>> = None;
    while worlds.advance() {
        let here = compiled.answers(&worlds.winner_sets());
        acc = Some(match (acc, mode) {
            (None, _) => here,
            (Some(a), AnswerMode::Necessary) => a.intersection(&here).cloned().collect(),
            (Some(mut a), AnswerMode::Possible) => {
                a.extend(here);
                a
            }
        });
        if mode == AnswerMode::Necessary && acc.as_ref().is_some_and(BTreeSet::is_empty) {
            break;
        }
    }
    Ok(AnswerReport {
        mode,
        head: q.head.clone(),
        answer: Answer::Tuples(acc.unwrap_or_default().into_iter().collect()),
        method_used: MethodUsed::Brute,
        completions_examined: Examined::Count(worlds.examined),
        warnings: Vec::new(),
    })
}

fn answers(
    q: &ConjunctiveQuery,
    db: &PreferenceDatabase,
    mode: AnswerMode,
    opts: &EvalOptions,
) -> Result<AnswerReport> {
    if q.is_boolean() {
        return boolean(q, db, mode, opts);
    }
    check_safety(q)?;
    if opts.method == Method::Brute {
        return answers_by_worlds(q, db, mode, opts);
    }
    let tuples = ground_tuples(q, db, Grounding::Relaxed, &opts.rules)?;
    let mut blocker = None;
    for t in &tuples {
        let g = instantiate(q, t);
        let check = match mode {
            AnswerMode::Necessary => {
                let cls = classify_query(&g);
                match cls.verdict {
                    Verdict::TractablePlurality => Ok(()),
                    Verdict::RequiresBruteForce => Err(cls.reason),
                }
            }
            AnswerMode::Possible => possible_poly_applies(&g),
        };
        if let Err(reason) = check {
            blocker = Some(reason);
            break;
        }
    }
    match (blocker, opts.method) {
        (None, _) => answers_by_grounding(q, db, mode, Grounding::Relaxed, opts),
        (Some(reason), Method::Poly) => Err(Error::NotTractable(reason)),
        (Some(reason), _) => {
            let mut r = answers_by_worlds(q, db, mode, opts)?;
            r.warnings = hard_shape_warning(q, &reason);
            Ok(r)
        }
    }
}

/// Head tuples that are answers in every completion. Boolean queries are
/// decided as by [`necessary_boolean`].
pub fn necessary_answers(
    q: &ConjunctiveQuery,
    db: &PreferenceDatabase,
    opts: &EvalOptions,
) -> Result<AnswerReport> {
    answers(q, db, AnswerMode::Necessary, opts)
}

/// Head tuples that are answers in some completion.
pub fn possible_answers(
    q: &ConjunctiveQuery,
    db: &PreferenceDatabase,
    opts: &EvalOptions,
) -> Result<AnswerReport> {
    answers(q, db, AnswerMode::Possible, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;

    fn fig1() -> PreferenceDatabase {
        PreferenceDatabase::from_json_str(include_str!("../../../data/fig1.json")).unwrap()
    }

    fn q(text: &str) -> ConjunctiveQuery {
        parse_query(text).unwrap()
    }

    #[test]
    fn q1_component_restriction() {
        let q1 = q(include_str!("../../../data/q1.pq"));
        let a = winner_restriction_set(&q1.body, &fig1(), &RuleRegistry::new()).unwrap();
        let names: Vec<&str> = a.iter().map(Candidate::as_str).collect();
        assert_eq!(names, ["Clinton", "Johnson"]);
        let lone = q(r#"q() :- Winner(plurality, "Oct-5", c)."#);
        assert_eq!(winner_restriction_set(&lone.body, &fig1(), &RuleRegistry::new()).unwrap().len(), 3);
        let none = q(r#"q() :- Winner(plurality, "Oct-5", c), Supports(c, "flat-earth")."#);
        assert!(winner_restriction_set(&none.body, &fig1(), &RuleRegistry::new()).unwrap().is_empty());
    }

    #[test]
    fn q1_necessary_and_possible() {
        let db = fig1();
        let q1 = q(include_str!("../../../data/q1.pq"));
        let r = necessary_boolean(&q1, &db, &EvalOptions::default()).unwrap();
        assert_eq!((r.answer.as_bool(), r.method_used), (Some(true), MethodUsed::Poly));
        let r = necessary_boolean(&q1, &db, &EvalOptions::with_method(Method::Brute)).unwrap();
        assert_eq!(r.answer.as_bool(), Some(true));
        assert_eq!(r.completions_examined, Examined::Count(4));
        let r = possible_boolean(&q1, &db, &EvalOptions::default()).unwrap();
        assert_eq!((r.answer.as_bool(), r.method_used), (Some(true), MethodUsed::Poly));
    }

    #[test]
    fn q3_needs_brute_force() {
        let db = fig1();
        let q3 = q(include_str!("../../../data/q3.pq"));
        let r = necessary_boolean(&q3, &db, &EvalOptions::default()).unwrap();
        assert_eq!(r.method_used, MethodUsed::Brute);
        assert_eq!(r.warnings.len(), 1);
        assert!(matches!(
            necessary_boolean(&q3, &db, &EvalOptions::with_method(Method::Poly)),
            Err(Error::NotTractable(_))
        ));
    }

    #[test]
    fn head_answers() {
        let db = fig1();
        let w = q(include_str!("../../../data/winners.pq"));
        let opts = EvalOptions::default();
        let nec = necessary_answers(&w, &db, &opts).unwrap();
        assert_eq!(nec.answer, Answer::Tuples(vec![]));
        assert_eq!(nec.method_used, MethodUsed::Poly);
        let pos = possible_answers(&w, &db, &opts).unwrap();
        assert_eq!(pos.answer.as_tuples().unwrap().len(), 3);
        let b = q(r#"q(c) :- Winner("Borda", "Oct-5", c)."#);
        let nec = necessary_answers(&b, &db, &opts).unwrap();
        assert_eq!(nec.answer, Answer::Tuples(vec![vec![Scalar::str("Clinton")]]));
        assert_eq!(nec.method_used, MethodUsed::Brute);
    }

    #[test]
    fn unknown_election_is_an_error_on_every_path() {
        let db = fig1();
        let bad = q(r#"q() :- Winner(plurality, "Nov-8", c)."#);
        for m in [Method::Auto, Method::Poly, Method::Brute] {
            assert!(matches!(
                necessary_boolean(&bad, &db, &EvalOptions::with_method(m)),
                Err(Error::UnknownElection(_))
            ));
            assert!(matches!(
                possible_boolean(&bad, &db, &EvalOptions::with_method(m)),
                Err(Error::UnknownElection(_))
            ));
        }
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = necessary_answers(
            &q(include_str!("../../../data/winners.pq")),
            &fig1(),
            &EvalOptions::with_method(Method::Brute),
        )
        .unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<AnswerReport>(&text).unwrap(), r);
        let p = necessary_boolean(&q(include_str!("../../../data/q1.pq")), &fig1(), &EvalOptions::default())
            .unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains(r#""completions_examined":"n/a""#));
        assert_eq!(serde_json::from_str::<AnswerReport>(&text).unwrap(), p);
    }

    #[test]
    fn non_boolean_rejected_by_boolean_entry_points() {
        let w = q(include_str!("../../../data/winners.pq"));
        assert!(matches!(
            necessary_boolean(&w, &fig1(), &EvalOptions::default()),
            Err(Error::NotBoolean(1))
        ));
    }
}
