use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use liegrade::counterexample::{run_full_report, summarize};
use liegrade::semigroup::RewriteSystem;
use liegrade::{
    associative_closure, bfs_oracle, decide_with, lie_closure, relation_set, verify_grading,
    AlgebraFile, DecideError, Decision, FormatError, GradingError, GradingFile, Limits,
    OracleResult, RelationSet, RelationsFile,
};

const EXIT_NOT_EMBEDDABLE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INVALID_GRADING: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "liegrade",
    version,
    about = "Exact Lie grading verification and semigroup embeddability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Associative,
    Lie,
}

#[derive(Subcommand)]
enum Command {
    /// Rebuild the nine-dimensional counterexample and check every claim.
    PaperDemo {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check that a decomposition of an algebra is a Lie grading.
    VerifyGrading {
        algebra: PathBuf,
        grading: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Decide whether the labels embed into an abelian semigroup with (P).
    ///
    /// INPUT is a relations file, or an algebra file followed by a grading file.
    Decide {
        input: PathBuf,
        grading: Option<PathBuf>,
        /// Degree bound for the brute-force oracle.
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        /// Print the collision chain.
        #[arg(long)]
        certificate: bool,
        /// Also run the brute-force oracle and report agreement.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = Limits::default().max_rules)]
        max_rules: usize,
        #[arg(long, default_value_t = Limits::default().max_vectors)]
        max_vectors: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Span of the algebra generated by the operators of an operator file.
    Closure {
        operators: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Self {
            code,
            message: message.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Grading(GradingError::Invalid(report)) => Failure::new(
                EXIT_INVALID_GRADING,
                format!("invalid grading: {} violation(s)", report.violations.len()),
            ),
            e => Failure::new(EXIT_INPUT, e),
        }
    }
}

impl From<DecideError> for Failure {
    fn from(e: DecideError) -> Self {
        match e {
            DecideError::ResourceLimit { .. } => Failure::new(EXIT_RESOURCE, e),
            e => Failure::new(70, format!("internal error: {e}")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((output, code)) => {
            print!("{output}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(String, u8), Failure> {
    match command {
        Command::PaperDemo { format } => paper_demo(format),
        Command::VerifyGrading {
            algebra,
            grading,
            format,
        } => verify(&algebra, &grading, format),
        Command::Decide {
            input,
            grading,
            max_degree,
            certificate,
            oracle,
            max_rules,
            max_vectors,
            format,
        } => {
            let relations = load_relations(&input, grading.as_deref())?;
            let limits = Limits {
                max_rules,
                max_vectors,
            };
            let oracle = oracle.then_some(max_degree);
            decide(&relations, limits, oracle, certificate, format)
        }
        Command::Closure {
            operators,
            kind,
            format,
        } => closure(&operators, kind, format),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn paper_demo(format: Format) -> Result<(String, u8), Failure> {
    let report = run_full_report();
    let code = if report.all_passed() { 0 } else { 1 };
    let out = match format {
        Format::Text => report.render_text(),
        Format::Json => json_text(&serde_json::to_value(&report).expect("serializable")),
    };
    Ok((out, code))
}

fn verify(algebra: &Path, grading: &Path, format: Format) -> Result<(String, u8), Failure> {
    let l = AlgebraFile::parse(&read(algebra)?)?.to_algebra()?;
    let g = GradingFile::parse(&read(grading)?)?.to_grading(&l)?;
    let report = verify_grading(&g);
    let code = if report.valid {
        0
    } else {
        EXIT_INVALID_GRADING
    };
    let out = match format {
        Format::Json => json_text(&serde_json::to_value(&report).expect("serializable")),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "valid: {}", report.valid).unwrap();
            writeln!(s, "components: {}", report.components).unwrap();
            if report.valid {
                writeln!(s, "relations: {}", report.relation_count).unwrap();
            }
            for v in &report.violations {
                writeln!(s, "violation {v}").unwrap();
            }
            s
        }
    };
    Ok((out, code))
}

fn load_relations(input: &Path, grading: Option<&Path>) -> Result<RelationSet, Failure> {
    let text = read(input)?;
    match grading {
        None => Ok(RelationsFile::parse(&text)?.to_relations()?),
        Some(gpath) => {
            let l = AlgebraFile::parse(&text)?.to_algebra()?;
            let g = GradingFile::parse(&read(gpath)?)?.to_grading(&l)?;
            relation_set(&g).map_err(|e| Failure::from(FormatError::from(e)))
        }
    }
}

fn decide(
    relations: &RelationSet,
    limits: Limits,
    oracle_degree: Option<u32>,
    show_certificate: bool,
    format: Format,
) -> Result<(String, u8), Failure> {
    let outcome = decide_with(relations, limits)?;
    let oracle = oracle_degree
        .map(|d| bfs_oracle(relations, d, limits.max_vectors))
        .transpose()?;
    let decision = &outcome.decision;
    let labels = relations.labels();
    let code = if decision.is_embeddable() {
        0
    } else {
        EXIT_NOT_EMBEDDABLE
    };
    let agreement = oracle.as_ref().map(|o| oracle_agrees(decision, o));

    let out = match format {
        Format::Json => {
            let mut v = json!({
                "verdict": decision.verdict(),
                "labels": labels,
                "relations": relations.named_triples().collect::<Vec<_>>(),
                "rules": rule_lines(&outcome.system, labels),
            });
            match decision {
                Decision::Embeddable { normal_forms } => {
                    v["normal_forms"] = normal_form_table(labels, normal_forms);
                }
                Decision::NotEmbeddable { collisions, .. } => {
                    v["collisions"] = json!(collisions
                        .iter()
                        .map(|c| c.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>())
                        .collect::<Vec<_>>());
                    if show_certificate {
                        v["certificate"] = serde_json::to_value(summarize(relations, decision))
                            .expect("serializable");
                    }
                }
            }
            if let Some(o) = &oracle {
                v["oracle"] = json!({
                    "result": o,
                    "agrees": agreement,
                });
            }
            json_text(&v)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "verdict: {}", decision.verdict()).unwrap();
            writeln!(s, "labels: {}", labels.len()).unwrap();
            writeln!(s, "relations: {}", relations.triples().len()).unwrap();
            writeln!(s, "rules: {}", outcome.system.rules().len()).unwrap();
            match decision {
                Decision::Embeddable { normal_forms } => {
                    writeln!(s, "normal forms:").unwrap();
                    for (l, nf) in labels.iter().zip(normal_forms) {
                        writeln!(s, "  {l} -> {}", nf.render(labels)).unwrap();
                    }
                }
                Decision::NotEmbeddable { collisions, .. } => {
                    for c in collisions {
                        let names: Vec<_> = c.iter().map(|&i| labels[i].as_str()).collect();
                        writeln!(s, "collision: {}", names.join(" = ")).unwrap();
                    }
                    if show_certificate {
                        let summary = summarize(relations, decision);
                        writeln!(s, "certificate:").unwrap();
                        for line in summary.certificate_text.lines() {
                            writeln!(s, "  {line}").unwrap();
                        }
                        for line in summary.certificate_brackets.lines() {
                            writeln!(s, "  {line}").unwrap();
                        }
                    }
                }
            }
            if let Some(o) = &oracle {
                writeln!(s, "{}", oracle_line(o, labels)).unwrap();
                let verdict = if agreement == Some(true) { "yes" } else { "NO" };
                writeln!(s, "oracle agrees: {verdict}").unwrap();
            }
            s
        }
    };
    Ok((out, code))
}

fn rule_lines(system: &RewriteSystem, labels: &[String]) -> Vec<String> {
    system.rules().iter().map(|r| r.render(labels)).collect()
}

fn normal_form_table(labels: &[String], nfs: &[liegrade::ExponentVector]) -> Value {
    Value::Array(
        labels
            .iter()
            .zip(nfs)
            .map(|(l, nf)| json!({"label": l, "normal_form": nf.render(labels)}))
            .collect(),
    )
}

/// The oracle only ever proves collisions, so it agrees unless it merges a
/// pair the completion keeps apart, or finds nothing where the completion
/// claims a collision it could have seen within its bound.
fn oracle_agrees(decision: &Decision, oracle: &OracleResult) -> bool {
    match (decision, oracle) {
        (Decision::Embeddable { .. }, o) => !o.found_collision(),
        (Decision::NotEmbeddable { collisions, .. }, OracleResult::Collision { pairs, .. }) => {
            pairs
                .iter()
                .all(|&(a, b)| collisions.iter().any(|c| c.contains(&a) && c.contains(&b)))
        }
        (Decision::NotEmbeddable { .. }, OracleResult::NoCollision { .. }) => true,
    }
}

fn oracle_line(o: &OracleResult, labels: &[String]) -> String {
    match o {
        OracleResult::Collision {
            pairs,
            max_degree,
            vectors,
        } => {
            let pairs: Vec<_> = pairs
                .iter()
                .map(|&(a, b)| format!("{} ~ {}", labels[a], labels[b]))
                .collect();
            format!(
                "oracle (degree {max_degree}, {vectors} vectors): collision {}",
                pairs.join(", ")
            )
        }
        OracleResult::NoCollision {
            max_degree,
            vectors,
        } => {
            format!("oracle (degree {max_degree}, {vectors} vectors): no collision (inconclusive)")
        }
    }
}

fn closure(path: &Path, kind: Kind, format: Format) -> Result<(String, u8), Failure> {
    let ops = AlgebraFile::parse(&read(path)?)?.operators()?;
    let span = match kind {
        Kind::Associative => associative_closure(&ops),
        Kind::Lie => lie_closure(&ops),
    }
    .map_err(|e| Failure::new(EXIT_INPUT, e))?;
    let out = match format {
        Format::Json => json_text(&json!({
            "kind": span.kind(),
            "dimension": span.dim(),
            "words": span.words(),
        })),
        Format::Text => format!(
            "dimension: {}\nwords: {}\n",
            span.dim(),
            span.words().join(", ")
        ),
    };
    Ok((out, 0))
}
