//! Conjunctive queries with Winner atoms: syntax, evaluation over complete
//! databases, and the Gaifman-graph classification.

mod ast;
pub(crate) mod eval;
mod gaifman;
mod parser;

pub use ast::{Atom, CmpOp, ConjunctiveQuery, Term, WinnerAtom};
pub use eval::evaluate_cq;
pub use gaifman::{
    classify_query, gaifman_graph, GaifmanGraph, QueryClassification, QueryComponent, Verdict,
};
pub use parser::parse_query;

pub(crate) use gaifman::{is_plurality_name, same_winner};
pub(crate) use parser::check_safety;
