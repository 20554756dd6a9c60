//! Necessary and possible answers of conjunctive queries over relational
//! databases whose preference part is incomplete.
//!
//! A [`PreferenceDatabase`] holds ordinary relations and, per election, a
//! partial ranking for every voter. Queries may contain
//! `Winner(rule, election, c)` atoms. An answer is *necessary* when it holds
//! in every completion of the voters' rankings and *possible* when it holds
//! in some completion.
//!
//! ```
//! use prefdb_core::{necessary_boolean, parse_query, EvalOptions, PreferenceDatabase};
//!
//! let db = PreferenceDatabase::from_json_str(r#"{
//!   "relations": {"Green": {"columns": ["cand"], "rows": [["a"], ["b"]]}},
//!   "elections": {"e": {"candidates": ["a", "b", "c"],
//!     "ballots": [{"voter": "v", "prefers": [["a", "c"], ["b", "c"]]}]}}
//! }"#).unwrap();
//! let q = parse_query(r#"q() :- Winner(plurality, "e", x), Green(x)."#).unwrap();
//! let report = necessary_boolean(&q, &db, &EvalOptions::default()).unwrap();
//! assert_eq!(report.answer.as_bool(), Some(true));
//! ```

pub mod answers;
pub mod completions;
pub mod error;
pub mod generators;
pub mod model;
pub mod query;
pub mod scoring;
pub mod winners;

pub use answers::{
    necessary_answers, necessary_boolean, possible_answers, possible_boolean,
    winner_restriction_set, Answer, AnswerMode, AnswerReport, EvalOptions, Examined,
};
pub use completions::{
    count_completions, linear_extensions, profile_classes, profile_completions, CompletionCount,
    CompletionStream, PositionBlocks, DEFAULT_CAP,
};
pub use error::{Error, Result};
pub use model::{
    build_partial_order, maximal_elements, profile_from_ballots, validate_database, Candidate,
    CandidateSet, CompleteProfile, Diagnostic, DiagnosticKind, PartialOrder, PartialProfile,
    PreferenceDatabase, Scalar, TotalOrder, Voter,
};
pub use query::{classify_query, evaluate_cq, gaifman_graph, parse_query, ConjunctiveQuery, Verdict};
pub use scoring::{
    builtin_rule, candidate_scores, rule_properties, winners, RuleRegistry, ScoreTable, ScoringRule,
};
pub use winners::{
    max_attainable_plurality_scores, max_bipartite_matching, necessary_intersection_plurality,
    necessary_winners, possible_winners, Method, MethodUsed,
};
