mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{all_completions, borda_vector, data, fig1, oracle_winners, plurality_vector};
use prefdb_core::model::{
    profile_from_ballots, Ballot, CompleteProfile, ElectionData, PreferenceDatabase, Scalar,
};
use prefdb_core::query::{
    classify_query, evaluate_cq, gaifman_graph, parse_query, Atom, CmpOp, ConjunctiveQuery, Term,
    Verdict, WinnerAtom,
};
use prefdb_core::scoring::RuleRegistry;
use proptest::prelude::*;

const VARS: [&str; 4] = ["x", "y", "z", "w"];

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => (0..VARS.len()).prop_map(|i| Term::var(VARS[i])),
        1 => (-5i64..100).prop_map(|v| Term::Const(Scalar::Int(v))),
        1 => "[a-zA-Z \"\\\\-]{0,6}".prop_map(Term::string),
    ]
}

fn relational_atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (0..3usize, prop::collection::vec(term(), 1..4)).prop_map(|(r, terms)| Atom::Ordinary {
            relation: ["R", "S", "Cand"][r].to_string(),
            terms,
        }),
        (0..4usize, term()).prop_map(|(r, candidate)| Atom::Winner(WinnerAtom {
            rule: ["plurality", "borda", "2-approval", "approval:2"][r].to_string(),
            election: Scalar::str("Oct-5"),
            candidate,
        })),
    ]
}

fn query() -> impl Strategy<Value = ConjunctiveQuery> {
    (prop::collection::vec(relational_atom(), 1..5), any::<u64>()).prop_map(|(mut body, bits)| {
        let bound: Vec<String> = {
            let set: BTreeSet<&str> = body.iter().flat_map(Atom::variables).collect();
            set.into_iter().map(String::from).collect()
        };
        let ops = [CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ne, CmpOp::Ge, CmpOp::Gt];
        if bound.len() >= 2 && bits & 1 == 1 {
            body.push(Atom::Comparison {
                left: Term::var(&bound[0]),
                op: ops[(bits >> 1) as usize % 6],
                right: Term::var(&bound[1]),
            });
        }
        let head = bound.iter().enumerate().filter(|(i, _)| bits >> (8 + i) & 1 == 1);
        ConjunctiveQuery {
            name: "q".into(),
            head: head.map(|(_, v)| v.clone()).collect(),
            body,
        }
    })
}

fn rename(q: &ConjunctiveQuery, map: &BTreeMap<&str, String>) -> ConjunctiveQuery {
    let t = |t: &Term| match t {
        Term::Var(v) => Term::var(&map[v.as_str()]),
        c => c.clone(),
    };
    ConjunctiveQuery {
        name: q.name.clone(),
        head: q.head.iter().map(|v| map[v.as_str()].clone()).collect(),
        body: q
            .body
            .iter()
            .map(|a| match a {
                Atom::Ordinary { relation, terms } => Atom::Ordinary {
                    relation: relation.clone(),
                    terms: terms.iter().map(t).collect(),
                },
                Atom::Winner(w) => Atom::Winner(WinnerAtom {
                    candidate: t(&w.candidate),
                    ..w.clone()
                }),
                Atom::Comparison { left, op, right } => Atom::Comparison {
                    left: t(left),
                    op: *op,
                    right: t(right),
                },
            })
            .collect(),
    }
}

proptest! {
    #![proptest_config(common::cases(256))]

    #[test]
    fn print_parse_round_trip(q in query()) {
        let text = q.to_string();
        let back = parse_query(&text).unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn gaifman_ignores_atom_order(q in query(), rot in 0usize..5) {
        let mut r = q.clone();
        let n = r.body.len();
        r.body.rotate_left(rot % n);
        r.body.reverse();
        let (a, b) = (gaifman_graph(&q), gaifman_graph(&r));
        prop_assert_eq!(a.edges.len(), b.edges.len());
        prop_assert_eq!(a.components(), b.components());
        prop_assert_eq!(classify_query(&q).verdict, classify_query(&r).verdict);
    }

    #[test]
    fn classification_ignores_variable_names(q in query(), shift in 1usize..4) {
        let map: BTreeMap<&str, String> = VARS
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, format!("v{}", (i + shift) % VARS.len())))
            .collect();
        let r = rename(&q, &map);
        let (a, b) = (classify_query(&q), classify_query(&r));
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.components.len(), b.components.len());
        prop_assert_eq!(a.spanning_comparisons, b.spanning_comparisons);
    }
}

/// The example database with its ballots replaced by one completion.
fn completed_db(db: &PreferenceDatabase, t: &CompleteProfile) -> PreferenceDatabase {
    let mut out = db.clone();
    let data = db.election(t.election()).unwrap();
    let ballots = t
        .entries()
        .iter()
        .map(|(v, o)| Ballot {
            voter: v.clone(),
            prefers: o.ranking().windows(2).map(|w| (w[0].clone(), w[1].clone())).collect(),
        })
        .collect();
    out.insert_election(
        t.election(),
        ElectionData {
            ballots,
            ..data.clone()
        },
    );
    out
}

/// Nested-loop evaluation over the active domain.
fn naive_eval(q: &ConjunctiveQuery, db: &PreferenceDatabase, t: &CompleteProfile) -> BTreeSet<Vec<Scalar>> {
    let m = t.candidates().len();
    let win = |rule: &str| -> BTreeSet<Scalar> {
        let v = match rule {
            "plurality" => plurality_vector(m),
            "borda" | "Borda" => borda_vector(m),
            "2-approval" | "approval:2" => common::approval_vector(2, m),
            other => panic!("rule {other}"),
        };
        oracle_winners(&v, t).iter().map(Scalar::from).collect()
    };
    let vars: Vec<&str> = q.variables().into_iter().collect();
    let mut dom: BTreeSet<Scalar> = db.active_domain();
    dom.extend(t.candidates().iter().map(Scalar::from));
    let dom: Vec<Scalar> = dom.into_iter().collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let val = |term: &Term| match term {
            Term::Var(v) => dom[idx[vars.iter().position(|x| x == v).unwrap()]].clone(),
            Term::Const(c) => c.clone(),
        };
        let ok = q.body.iter().all(|a| match a {
            Atom::Ordinary { relation, terms } => db.relation(relation).is_some_and(|r| {
                r.rows.iter().any(|row| row.len() == terms.len() && terms.iter().zip(row).all(|(t, c)| val(t) == *c))
            }),
            Atom::Winner(w) => win(&w.rule).contains(&val(&w.candidate)),
            Atom::Comparison { left, op, right } => op.holds(&val(left), &val(right)),
        });
        if ok {
            out.insert(q.head.iter().map(|h| val(&Term::var(h))).collect());
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < dom.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn evaluation_matches_nested_loops() {
    let db = fig1();
    let p = profile_from_ballots(&db, "Oct-5").unwrap();
    let texts = [
        data("q1.pq"),
        data("q2.pq"),
        data("q3.pq"),
        data("winners.pq"),
        r#"q(c, d) :- Winner(plurality, "Oct-5", c), Winner(borda, "Oct-5", d), c != d."#.into(),
        r#"q(c, i) :- Winner(plurality, "Oct-5", c), Supports(c, i), Opposes(d, i), c < d."#.into(),
    ];
    for t in all_completions(&p) {
        let complete = completed_db(&db, &t);
        for text in &texts {
            let q = parse_query(text).unwrap();
            let got = evaluate_cq(&q, &complete, &RuleRegistry::new()).unwrap();
            assert_eq!(got, naive_eval(&q, &complete, &t), "{q}");
        }
    }
}

#[test]
fn fig1_queries_classify() {
    let verdict = |name: &str| classify_query(&parse_query(&data(name)).unwrap()).verdict;
    assert_eq!(verdict("q1.pq"), Verdict::TractablePlurality);
    assert_eq!(verdict("q2.pq"), Verdict::RequiresBruteForce);
    assert_eq!(verdict("q3.pq"), Verdict::RequiresBruteForce);
    assert_eq!(verdict("q4.pq"), Verdict::TractablePlurality);
    assert_eq!(verdict("winners.pq"), Verdict::TractablePlurality);
}

#[test]
fn evaluation_rejects_partial_profiles() {
    let q = parse_query(&data("q1.pq")).unwrap();
    assert!(evaluate_cq(&q, &fig1(), &RuleRegistry::new()).is_err());
}
