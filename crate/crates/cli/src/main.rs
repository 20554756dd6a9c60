//! `prefdb`: command-line front end for preference databases.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prefdb_core::answers::{
    necessary_answers, possible_answers, Answer, AnswerReport, EvalOptions, Examined,
};
use prefdb_core::completions::{count_completions, profile_completions, CompletionCount};
use prefdb_core::generators::{
    gen_qh_instance, gen_tautology_instance, oracle_independent_set, oracle_tautology, Graph,
    ThreeDnf,
};
use prefdb_core::model::{profile_from_ballots, validate_database, PreferenceDatabase, Scalar};
use prefdb_core::query::{classify_query, evaluate_cq, parse_query, ConjunctiveQuery, Verdict};
use prefdb_core::scoring::{load_score_table, RuleRegistry};
use prefdb_core::winners::{necessary_winners, possible_winners, Method};
use prefdb_core::{Error, DEFAULT_CAP};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "prefdb", version, about = "Query databases of partial preferences")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Maximum number of completions a brute-force run may enumerate.
    #[arg(long, global = true, env = "PREFDB_CAP", default_value_t = DEFAULT_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,

    /// Score-table file defining a custom rule named after the file stem.
    #[arg(long = "score-table", global = true, value_name = "FILE")]
    score_tables: Vec<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Poly,
    Brute,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Poly => Method::Poly,
            MethodArg::Brute => Method::Brute,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Necessary,
    Possible,
}

#[derive(Subcommand)]
enum Command {
    /// Check a database file for structural problems.
    Validate {
        #[arg(long)]
        db: PathBuf,
    },
    /// List or count the completions of an election's profile.
    Completions {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        election: String,
        /// Print only the number of completions.
        #[arg(long)]
        count: bool,
    },
    /// Necessary or possible winners of an election.
    Winners {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        election: String,
        #[arg(long)]
        rule: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Necessary answers of a query.
    Necessary(QueryArgs),
    /// Possible answers of a query.
    Possible(QueryArgs),
    /// Evaluate a query on a database whose preferences are complete.
    Query {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        query: PathBuf,
    },
    /// Write a hardness instance with its expected answer.
    #[command(subcommand)]
    Generate(Generate),
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    db: PathBuf,
    #[arg(long)]
    query: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
}

#[derive(Subcommand)]
enum Generate {
    /// Independent-set instance for the two-winner query.
    Qh {
        /// Edge list, one `u v` pair per line; a lone name declares a node.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tautology instance for the three-winner query.
    Tautology {
        /// One disjunct per line, literals written `x3` or `!x3`.
        #[arg(long)]
        dnf: PathBuf,
        #[arg(long)]
        rule: String,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedPolyRule(_) | Error::NotTractable(_) => Failure::Usage(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            if let Some(hint) = hint(&e) {
                eprintln!("hint: {hint}");
            }
            ExitCode::from(1)
        }
    }
}

fn hint(e: &Error) -> Option<&'static str> {
    match e {
        Error::CapExceeded { .. } => Some("raise --cap (or PREFDB_CAP), or use a query the poly method handles"),
        Error::NonStrictRule { .. } => Some("pick a rule whose first and last scores differ, e.g. plurality or borda"),
        Error::SizeLimit { .. } => Some("the ground-truth oracle is exhaustive; use a smaller input"),
        _ => None,
    }
}

fn run(cli: &Cli) -> Outcome {
    let mut rules = RuleRegistry::new();
    for path in &cli.score_tables {
        rules.register(load_score_table(path)?)?;
    }
    let opts = |method: MethodArg| EvalOptions {
        method: method.into(),
        cap: cli.cap,
        rules: rules.clone(),
    };
    match &cli.command {
        Command::Validate { db } => validate(cli.format, db),
        Command::Completions { db, election, count } => {
            completions(cli.format, &load_db(db)?, election, *count, cli.cap)
        }
        Command::Winners { db, election, rule, mode, method } => {
            let rule = rules.resolve(rule)?;
            if matches!(method, MethodArg::Poly) && !rule.is_plurality() {
                return Err(Failure::Usage(format!(
                    "--method poly supports only plurality, not `{}`",
                    rule.name()
                )));
            }
            let p = profile_from_ballots(&load_db(db)?, election)?;
            let out = match mode {
                Mode::Necessary => necessary_winners(&rule, &p, (*method).into(), cli.cap)?,
                Mode::Possible => possible_winners(&rule, &p, (*method).into(), cli.cap)?,
            };
            let winners: Vec<&str> = out.winners.iter().map(|c| c.as_str()).collect();
            let examined = out.completions_examined.map_or(Examined::NotApplicable, Examined::Count);
            Ok(match cli.format {
                Format::Json => json_line(&json!({
                    "election": election,
                    "rule": rule.name(),
                    "mode": mode,
                    "winners": winners,
                    "method_used": out.method,
                    "completions_examined": examined,
                })),
                Format::Text => {
                    if let Examined::Count(n) = examined {
                        eprintln!("method: {}, completions examined: {n}", out.method);
                    }
                    if winners.is_empty() {
                        "(none)\n".to_string()
                    } else {
                        format!("{}\n", winners.join(", "))
                    }
                }
            })
        }
        Command::Necessary(args) | Command::Possible(args) => {
            let db = load_db(&args.db)?;
            let q = load_query(&args.query)?;
            if matches!(args.method, MethodArg::Poly) && classify_query(&q).verdict != Verdict::TractablePlurality {
                return Err(Failure::Usage(format!(
                    "--method poly does not apply: {}",
                    classify_query(&q).reason
                )));
            }
            let opts = opts(args.method);
            let report = if matches!(cli.command, Command::Necessary(_)) {
                necessary_answers(&q, &db, &opts)?
            } else {
                possible_answers(&q, &db, &opts)?
            };
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(match cli.format {
                Format::Json => json_line(&report),
                Format::Text => answer_text(&report),
            })
        }
        Command::Query { db, query } => {
            let db = load_db(db)?;
            let q = load_query(query)?;
            let rows = evaluate_cq(&q, &db, &rules)?;
            let answer = if q.is_boolean() {
                Answer::Boolean(!rows.is_empty())
            } else {
                Answer::Tuples(rows.into_iter().collect())
            };
            Ok(match cli.format {
                Format::Json => json_line(&json!({ "head": q.head, "answer": answer })),
                Format::Text => match &answer {
                    Answer::Boolean(b) => format!("{b}\n"),
                    Answer::Tuples(t) => tuples_text(t),
                },
            })
        }
        Command::Generate(g) => generate(cli.format, g, &rules),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(Error::Io(format!("{}: {e}", path.display()))))
}

fn load_db(path: &Path) -> Result<PreferenceDatabase, Failure> {
    Ok(PreferenceDatabase::from_json_str(&read(path)?)?)
}

fn load_query(path: &Path) -> Result<ConjunctiveQuery, Failure> {
    Ok(parse_query(&read(path)?)?)
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn tuples_text(tuples: &[Vec<Scalar>]) -> String {
    let mut out = String::new();
    for t in tuples {
        let cells: Vec<String> = t.iter().map(Scalar::to_string).collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

fn method_note(r: &AnswerReport) -> String {
    match r.completions_examined {
        Examined::Count(n) => format!("method: {}, completions examined: {n}", r.method_used),
        Examined::NotApplicable => format!("method: {}", r.method_used),
    }
}

fn answer_text(r: &AnswerReport) -> String {
    match &r.answer {
        Answer::Boolean(b) => format!("{b} ({})\n", method_note(r)),
        Answer::Tuples(t) => {
            let mut out = tuples_text(t);
            let _ = writeln!(out, "({} answers; {})", t.len(), method_note(r));
            out
        }
    }
}

fn validate(format: Format, path: &Path) -> Outcome {
    let db = load_db(path)?;
    let diags = validate_database(&db);
    let out = match format {
        Format::Json => json_line(&json!({ "valid": diags.is_empty(), "diagnostics": diags })),
        Format::Text if diags.is_empty() => "ok\n".to_string(),
        Format::Text => diags.iter().map(|d| format!("{d}\n")).collect(),
    };
    if diags.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Domain(Error::Format(format!("{} problem(s) found", diags.len()))))
    }
}

fn completions(format: Format, db: &PreferenceDatabase, election: &str, count: bool, cap: u64) -> Outcome {
    let p = profile_from_ballots(db, election)?;
    if count {
        return Ok(match (count_completions(&p, u64::MAX), format) {
            (CompletionCount::Exact(n), Format::Text) => format!("{n}\n"),
            (CompletionCount::Exact(n), Format::Json) => json_line(&json!({ "count": n })),
            (CompletionCount::Overflow, Format::Text) => format!("more than {}\n", u64::MAX),
            (CompletionCount::Overflow, Format::Json) => json_line(&json!({ "count": null })),
        });
    }
    let stream = profile_completions(&p, cap)?;
    let mut text = String::new();
    let mut all = Vec::new();
    for (k, t) in stream.enumerate() {
        match format {
            Format::Text => {
                let _ = writeln!(text, "completion {}", k + 1);
                for (v, o) in t.entries() {
                    let _ = writeln!(text, "  {v}: {o}");
                }
            }
            Format::Json => all.push(
                t.entries()
                    .iter()
                    .map(|(v, o)| json!({ "voter": v, "ranking": o.ranking() }))
                    .collect::<Vec<_>>(),
            ),
        }
    }
    Ok(match format {
        Format::Text => text,
        Format::Json => json_line(&all),
    })
}

fn write_instance(out: &Path, db: &PreferenceDatabase, q: &ConjunctiveQuery, manifest: serde_json::Value) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Domain(Error::Io(format!("{}: {e}", out.display())));
    fs::create_dir_all(out).map_err(io)?;
    fs::write(out.join("db.json"), db.to_json_string()).map_err(io)?;
    fs::write(out.join("query.pq"), format!("{q}\n")).map_err(io)?;
    fs::write(out.join("manifest.json"), json_line(&manifest)).map_err(io)?;
    Ok(())
}

fn generate(format: Format, g: &Generate, rules: &RuleRegistry) -> Outcome {
    let (out, manifest) = match g {
        Generate::Qh { graph, k, out } => {
            let graph: Graph = read(graph)?.parse()?;
            let n = graph.nodes().len();
            if *k == 0 || *k > n {
                return Err(Failure::Usage(format!("--k must be between 1 and the node count {n}, got {k}")));
            }
            let expected = !oracle_independent_set(&graph, *k)?;
            let (db, q) = gen_qh_instance(&graph, *k)?;
            let manifest = json!({
                "kind": "qh",
                "nodes": n,
                "edges": graph.edges().len(),
                "k": k,
                "mode": "necessary",
                "expected": expected,
            });
            write_instance(out, &db, &q, manifest.clone())?;
            (out, manifest)
        }
        Generate::Tautology { dnf, rule, out } => {
            let phi: ThreeDnf = read(dnf)?.parse()?;
            let rule = rules.resolve(rule)?;
            let (db, q) = gen_tautology_instance(&phi, &rule)?;
            let info = prefdb_core::generators::tautology_info(&phi, &rule)?;
            let expected = oracle_tautology(&phi)?;
            let manifest = json!({
                "kind": "tautology",
                "rule": rule.name(),
                "ell": info.ell,
                "m": info.m,
                "d": info.d,
                "voters": info.voters,
                "disjuncts": phi.disjuncts().len(),
                "mode": "necessary",
                "expected": expected,
            });
            write_instance(out, &db, &q, manifest.clone())?;
            (out, manifest)
        }
    };
    Ok(match format {
        Format::Json => json_line(&manifest),
        Format::Text => {
            let files: Vec<String> = ["db.json", "manifest.json", "query.pq"]
                .iter()
                .map(|f| out.join(f).display().to_string())
                .collect();
            format!("expected: {}\n{}\n", manifest["expected"], files.join("\n"))
        }
    })
}
