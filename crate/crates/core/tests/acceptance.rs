//! The acceptance criteria, one pass/fail line each.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use prefdb_core::answers::{necessary_boolean, EvalOptions, Examined};
use prefdb_core::completions::{count_completions, profile_completions, CompletionCount};
use prefdb_core::generators::{gen_qh_instance, gen_tautology_instance, selected_literals};
use prefdb_core::model::{
    profile_from_ballots, Ballot, Candidate, ElectionData, OrdinaryRelation, PreferenceDatabase,
    Scalar, Voter,
};
use prefdb_core::query::{classify_query, parse_query, Verdict};
use prefdb_core::scoring::{candidate_scores, winners, ScoringRule};
use prefdb_core::winners::{
    necessary_intersection_plurality, necessary_winners, possible_winners, Method, MethodUsed,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(id: usize, title: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = f();
    let took = start.elapsed();
    let result = result.and_then(|()| {
        ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
    });
    // Straight to the process stdout so the lines survive libtest's capture.
    let mut out = std::io::stdout().lock();
    let _ = match &result {
        Ok(()) => writeln!(out, "criterion {id}: PASS  {title} ({took:.2?})"),
        Err(e) => writeln!(out, "criterion {id}: FAIL  {title} ({took:.2?}): {e}"),
    };
    result.is_ok()
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn fig1_golden() -> Outcome {
    let db = fig1();
    let p = profile_from_ballots(&db, "Oct-5").map_err(|e| e.to_string())?;
    ensure(count_completions(&p, 100) == CompletionCount::Exact(4), || "count is not 4".into())?;
    // (plurality, Borda) for Clinton, Johnson, Trump in B1..B4.
    let scores = [
        [(2, 4), (0, 1), (0, 1)],
        [(1, 3), (0, 1), (1, 2)],
        [(1, 3), (1, 2), (0, 1)],
        [(0, 2), (1, 2), (1, 2)],
    ];
    let wins: [&[&str]; 4] = [
        &["Clinton"],
        &["Clinton", "Trump"],
        &["Clinton", "Johnson"],
        &["Johnson", "Trump"],
    ];
    let all: Vec<_> = profile_completions(&p, 100).map_err(|e| e.to_string())?.collect();
    ensure(all.len() == 4, || format!("{} completions enumerated", all.len()))?;
    for (k, t) in all.iter().enumerate() {
        let pl = candidate_scores(&ScoringRule::plurality(), t).unwrap();
        let bo = candidate_scores(&ScoringRule::borda(), t).unwrap();
        for (j, c) in ["Clinton", "Johnson", "Trump"].iter().enumerate() {
            let c = Candidate::new(c);
            let got = (pl.get(&c).unwrap(), bo.get(&c).unwrap());
            ensure(got == scores[k][j], || format!("B{} {c}: {got:?}", k + 1))?;
        }
        let w = winners(&ScoringRule::plurality(), t).unwrap();
        ensure(names(&w) == wins[k], || format!("B{} winners {w:?}", k + 1))?;
    }
    Ok(())
}

fn winner_reproduction() -> Outcome {
    let p = profile_from_ballots(&fig1(), "Oct-5").map_err(|e| e.to_string())?;
    let cap = 1000;
    let nw_borda = necessary_winners(&ScoringRule::borda(), &p, Method::Auto, cap).unwrap().winners;
    let nw_pl = necessary_winners(&ScoringRule::plurality(), &p, Method::Auto, cap).unwrap().winners;
    let pw_pl = possible_winners(&ScoringRule::plurality(), &p, Method::Auto, cap).unwrap().winners;
    ensure(names(&nw_borda) == ["Clinton"], || format!("NW(Borda) = {nw_borda:?}"))?;
    ensure(nw_pl.is_empty(), || format!("NW(plurality) = {nw_pl:?}"))?;
    ensure(names(&pw_pl) == ["Clinton", "Johnson", "Trump"], || format!("PW(plurality) = {pw_pl:?}"))
}

fn q1_necessity() -> Outcome {
    let db = fig1();
    let q = parse_query(&data("q1.pq")).map_err(|e| e.to_string())?;
    let r = necessary_boolean(&q, &db, &EvalOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.answer.as_bool() == Some(true), || "q1 is not necessary".into())?;
    ensure(r.method_used == MethodUsed::Poly, || format!("method {}", r.method_used))?;
    ensure(r.completions_examined == Examined::NotApplicable, || "completions counted".into())?;
    let p = profile_from_ballots(&db, "Oct-5").unwrap();
    let nw = necessary_winners(&ScoringRule::plurality(), &p, Method::Poly, 1000).unwrap().winners;
    let pro_choice: BTreeSet<Candidate> = db
        .relation("Supports")
        .unwrap()
        .rows
        .iter()
        .filter(|r| r[1] == Scalar::str("pro-choice"))
        .map(|r| Candidate::new(r[0].to_string()))
        .collect();
    ensure(nw.is_disjoint(&pro_choice), || format!("NW meets pro-choice: {nw:?}"))
}

fn intersection_vs_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xA11CE);
    for i in 0..1000 {
        let p = random_profile(&mut rng, 4, 4);
        let a = random_party(&mut rng, &p);
        let got = necessary_intersection_plurality(&p, &a).map_err(|e| e.to_string())?;
        let want = oracle_necessary_intersection(&p, &a);
        ensure(got == want, || format!("instance {i}: poly {got}, oracle {want}, party {a:?}, {p:?}"))?;
    }
    Ok(())
}

fn possible_poly_vs_brute() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xB0B);
    let r = ScoringRule::plurality();
    for i in 0..500 {
        let p = random_profile(&mut rng, 4, 4);
        let poly = possible_winners(&r, &p, Method::Poly, 1 << 20).unwrap().winners;
        let brute = possible_winners(&r, &p, Method::Brute, 1 << 20).unwrap().winners;
        ensure(poly == brute, || format!("instance {i}: poly {poly:?}, brute {brute:?}, {p:?}"))?;
    }
    Ok(())
}

fn qh_fidelity() -> Outcome {
    let opts = EvalOptions::with_method(Method::Brute);
    let check = |g: &prefdb_core::generators::Graph, k: usize| -> Outcome {
        let (db, q) = gen_qh_instance(g, k).map_err(|e| e.to_string())?;
        let na = necessary_boolean(&q, &db, &opts).map_err(|e| e.to_string())?.answer.as_bool().unwrap();
        let is = has_independent_set(g, k);
        ensure(na == !is, || format!("k={k} edges {:?}: NA {na}, independent set {is}", g.edges()))
    };
    for n in 1..=4 {
        for mask in 0..1u64 << (n * (n - 1) / 2) {
            let g = graph_from_mask(n, mask);
            for k in [2, 3].into_iter().filter(|&k| k <= n) {
                check(&g, k)?;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x6);
    for _ in 0..200 {
        let n = rng.gen_range(5..=6);
        let g = random_graph(&mut rng, n);
        check(&g, rng.gen_range(2..=3))?;
    }
    Ok(())
}

fn tautology_fidelity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x3D9F);
    let rules: [(ScoringRule, fn(usize) -> Vec<u64>); 3] = [
        (ScoringRule::plurality(), plurality_vector),
        (ScoringRule::borda(), borda_vector),
        (ScoringRule::approval(2).unwrap(), |m| approval_vector(2, m)),
    ];
    let x0 = Candidate::new("x0");
    for _ in 0..100 {
        let phi = random_dnf(&mut rng, 4);
        let taut = truth_table_tautology(&phi);
        for (rule, vector) in &rules {
            let (db, q) = gen_tautology_instance(&phi, rule).map_err(|e| e.to_string())?;
            let p = profile_from_ballots(&db, "e").unwrap();
            let v = vector(p.candidates().len());
            let mut seen = 0u64;
            for t in profile_completions(&p, 1 << 20).unwrap() {
                let w = oracle_winners(&v, &t);
                let sel: BTreeSet<Candidate> = selected_literals(&t)
                    .unwrap()
                    .iter()
                    .map(|l| Candidate::new(l.to_string()))
                    .collect();
                ensure(w == sel && !w.contains(&x0), || {
                    format!("{phi:?} under {}: winners {w:?}, selected {sel:?}", rule.name())
                })?;
                seen += 1;
            }
            ensure(seen == 1 << phi.vars(), || format!("{seen} completions for {} variables", phi.vars()))?;
            let na = necessary_boolean(&q, &db, &EvalOptions::default())
                .map_err(|e| e.to_string())?
                .answer
                .as_bool()
                .unwrap();
            ensure(na == taut, || format!("{phi:?} under {}: NA {na}, tautology {taut}", rule.name()))?;
        }
    }
    Ok(())
}

fn classification() -> Outcome {
    let verdict = |text: &str| parse_query(text).map(|q| classify_query(&q).verdict);
    let g = "a b".parse().unwrap();
    let (_, qh) = gen_qh_instance(&g, 2).map_err(|e| e.to_string())?;
    let got = [
        verdict(&data("q1.pq")).map_err(|e| e.to_string())?,
        verdict(&data("q4.pq")).map_err(|e| e.to_string())?,
        verdict(&data("q3.pq")).map_err(|e| e.to_string())?,
        classify_query(&qh).verdict,
    ];
    use Verdict::*;
    let want = [TractablePlurality, TractablePlurality, RequiresBruteForce, RequiresBruteForce];
    ensure(got == want, || format!("{got:?}"))
}

/// Every voter splits the candidates into `width` random chains.
fn scale_database(m: usize, n: usize, width: usize, rng: &mut impl Rng) -> PreferenceDatabase {
    let candidates: Vec<Candidate> = (0..m).map(|i| Candidate::new(format!("c{i:04}"))).collect();
    let voters: Vec<Voter> = (0..n).map(|i| Voter::new(format!("v{i:05}"))).collect();
    let mut ballots = Vec::with_capacity(n);
    let mut order = candidates.clone();
    for v in &voters {
        order.shuffle(rng);
        let mut prefers = Vec::with_capacity(m);
        for chain in order.chunks(m.div_ceil(width)) {
            prefers.extend(chain.windows(2).map(|w| (w[0].clone(), w[1].clone())));
        }
        ballots.push(Ballot { voter: v.clone(), prefers });
    }
    let rows = candidates
        .iter()
        .filter(|_| rng.gen_bool(0.01))
        .map(|c| vec![Scalar::from(c), Scalar::str("x")])
        .collect();
    let mut db = PreferenceDatabase::new();
    db.insert_relation(OrdinaryRelation::new("Tag", vec!["cand".into(), "tag".into()], rows).unwrap());
    db.insert_election("big", ElectionData { candidates, voters, ballots });
    db
}

fn scale() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let db = scale_database(1000, 10_000, 4, &mut rng);
    let q = parse_query(r#"big() :- Winner(plurality, "big", c), Tag(c, "x")."#).unwrap();
    let start = Instant::now();
    let r = necessary_boolean(&q, &db, &EvalOptions::default()).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(r.method_used == MethodUsed::Poly, || format!("method {}", r.method_used))?;
    ensure(took < secs(10), || format!("necessary_boolean took {took:.2?}"))
}

#[test]
fn acceptance() {
    let results = [
        run(1, "example database: completions, score tables and winners", secs(1), fig1_golden),
        run(2, "necessary/possible winners on the example database", secs(1), winner_reproduction),
        run(3, "q1 necessary via poly path, NW(plurality) misses pro-choice", secs(1), q1_necessity),
        run(4, "necessary intersection vs enumeration, 1000 instances", secs(60), intersection_vs_oracle),
        run(5, "plurality possible winners poly vs brute, 500 instances", secs(60), possible_poly_vs_brute),
        run(6, "q_h necessity vs independent set", secs(120), qh_fidelity),
        run(7, "tautology instances: winners and necessity", secs(120), tautology_fidelity),
        run(8, "classification of q1, q4, q3, q_h", secs(1), classification),
        // The limit covers the necessary_boolean call; building the instance is extra.
        run(9, "scale: 1000 candidates, 10000 voters", secs(120), scale),
    ];
    let failed: Vec<usize> = (1..=results.len()).filter(|&i| !results[i - 1]).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
