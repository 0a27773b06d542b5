//! The `sncheck` command line.
//!
//! Exit codes: 0 executable, compliant or clean; 2 parse or usage error;
//! 3 breach or interference; 4 inexecutable; 5 vacuous assumptions.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::compliance::{self, ComplianceVerdict, ContentDiff, PermKind};
use crate::kernel::BSet;
use crate::noninterference::{
    self, CommentOwnership, NiConfig, NiVerdict, Observation, PurgeMode, TraceOp,
};
use crate::policy_lang::ast::{BlockKind, Check};
use crate::policy_lang::{parse, resolve, BoundScenario, Names, Sort};
use crate::smt_emit::{self, Dialect};
use crate::snstate::SnState;
use crate::vcgen::{self, Env, ExecOutcome, StepFailure, DEFAULT_MAX_ENVS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BREACH: i32 = 3;
pub const EXIT_INEXECUTABLE: i32 = 4;
pub const EXIT_VACUOUS: i32 = 5;

/// Version of the `--json` report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "sncheck",
    version,
    about = "Check social-network privacy policies"
)]
pub struct Cli {
    /// Universe size, overriding the file's `universe` header (1..=16).
    #[arg(long, global = true)]
    pub universe: Option<usize>,
    /// Print a machine-readable report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Upper bound on enumerated list environments.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ENVS)]
    pub max_envs: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommentOwnershipArg {
    PrsMembers,
    OwnerOnly,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that policies can run to completion.
    Check {
        file: PathBuf,
        /// Policy to check; defaults to the file's `check executable` lines.
        #[arg(long)]
        policy: Option<String>,
        /// Print the final state under the least environment.
        #[arg(long)]
        dump_state: bool,
    },
    /// Check that a new policy grants nothing the old one withholds.
    Compare {
        file: PathBuf,
        #[arg(long, requires = "new")]
        old: Option<String>,
        #[arg(long, requires = "old")]
        new: Option<String>,
    },
    /// Check whether one person's operations change what another observes.
    Noninterf {
        file: PathBuf,
        /// The person whose operations are purged.
        #[arg(long)]
        actor: String,
        /// The person whose observation is compared.
        #[arg(long)]
        observer: String,
        /// Trace block to use; defaults to the first one.
        #[arg(long)]
        trace: Option<String>,
        #[arg(long, value_enum, default_value = "prs-members")]
        comment_ownership: CommentOwnershipArg,
        /// Purge only the newest run of the actor's operations.
        #[arg(long)]
        strict_purge: bool,
    },
    /// Emit the SMT verification-condition script of a policy.
    EmitSmt {
        file: PathBuf,
        #[arg(long)]
        policy: String,
        #[arg(long, value_enum, default_value = "smtlib2")]
        dialect: Dialect,
        /// Output file instead of standard output.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn load(path: &Path, universe: Option<usize>) -> Result<BoundScenario, Failure> {
    let src =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let sc = parse(&src).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    resolve(&sc, universe).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn policy_index(b: &BoundScenario, name: &str, kind: BlockKind) -> Result<usize, Failure> {
    let i = b.policy_index(name).map_err(|e| usage(e.to_string()))?;
    if b.policies[i].kind != kind {
        return Err(usage(format!(
            "`{name}` is not a {} block",
            kind_word(kind)
        )));
    }
    Ok(i)
}

fn kind_word(kind: BlockKind) -> &'static str {
    match kind {
        BlockKind::Policy => "policy",
        BlockKind::Trace => "trace",
    }
}

/// Human and JSON renderings of one result.
struct Outcome {
    code: i32,
    text: String,
    json: Value,
}

fn set(names: &Names, sort: Sort, s: BSet) -> String {
    names.render_set(sort, s)
}

fn env_text(names: &Names, env: &Env) -> String {
    if env.bindings.is_empty() {
        return "(no list memberships)".into();
    }
    env.bindings
        .iter()
        .map(|(l, m)| {
            format!(
                "{} = {}",
                names.name(Sort::List, *l),
                set(names, Sort::Person, *m)
            )
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn env_json(names: &Names, env: &Env) -> Value {
    let map: serde_json::Map<String, Value> = env
        .bindings
        .iter()
        .map(|(l, m)| {
            (
                names.name(Sort::List, *l),
                names_json(names, Sort::Person, *m),
            )
        })
        .collect();
    Value::Object(map)
}

fn names_json(names: &Names, sort: Sort, s: BSet) -> Value {
    Value::Array(
        s.iter()
            .map(|e| Value::String(names.name(sort, e)))
            .collect(),
    )
}

fn pairs_text(names: &Names, dom: Sort, ran: Sort, r: &crate::kernel::BRel) -> String {
    let items: Vec<String> = r
        .pairs()
        .map(|(d, x)| format!("({}, {})", names.name(dom, d), names.name(ran, x)))
        .collect();
    format!("{{{}}}", items.join(", "))
}

fn pairs_json(names: &Names, dom: Sort, ran: Sort, r: &crate::kernel::BRel) -> Value {
    Value::Array(
        r.pairs()
            .map(|(d, x)| json!([names.name(dom, d), names.name(ran, x)]))
            .collect(),
    )
}

const FIELD_SORTS: [(Sort, Sort); 8] = [
    (Sort::Content, Sort::Person),
    (Sort::Content, Sort::Person),
    (Sort::Content, Sort::Person),
    (Sort::Content, Sort::Person),
    (Sort::List, Sort::Person),
    (Sort::List, Sort::Person),
    (Sort::List, Sort::List),
    (Sort::List, Sort::List),
];

fn relations(s: &SnState) -> [&crate::kernel::BRel; 8] {
    [
        &s.owner,
        &s.pages,
        &s.viewp,
        &s.editp,
        &s.listpe,
        &s.listow,
        &s.policies,
        &s.disjointness,
    ]
}

fn state_text(names: &Names, s: &SnState) -> String {
    let fields = crate::snstate::FIELD_NAMES;
    let mut lines = vec![
        format!(
            "  {:<12} = {}",
            fields[0],
            set(names, Sort::Person, s.persons)
        ),
        format!(
            "  {:<12} = {}",
            fields[1],
            set(names, Sort::Content, s.contents)
        ),
    ];
    for (k, r) in relations(s).iter().enumerate() {
        let (d, x) = FIELD_SORTS[k];
        lines.push(format!(
            "  {:<12} = {}",
            fields[k + 2],
            pairs_text(names, d, x, r)
        ));
    }
    lines.join("\n")
}

fn state_json(names: &Names, s: &SnState) -> Value {
    let fields = crate::snstate::FIELD_NAMES;
    let mut map = serde_json::Map::new();
    map.insert(fields[0].into(), names_json(names, Sort::Person, s.persons));
    map.insert(
        fields[1].into(),
        names_json(names, Sort::Content, s.contents),
    );
    for (k, r) in relations(s).iter().enumerate() {
        let (d, x) = FIELD_SORTS[k];
        map.insert(fields[k + 2].into(), pairs_json(names, d, x, r));
    }
    Value::Object(map)
}

fn failure_text(f: &StepFailure) -> String {
    format!(
        "step {} `{}` (call {}): {}",
        f.step + 1,
        f.instruction,
        f.call,
        f.error
    )
}

fn failure_json(f: &StepFailure) -> Value {
    json!({
        "step": f.step + 1,
        "instruction": f.instruction,
        "call": f.call,
        "guard": f.error.guard(),
        "message": f.error.to_string(),
    })
}

fn check_one(b: &BoundScenario, policy: usize, cap: u64, dump: bool) -> Result<Outcome, Failure> {
    let name = &b.policies[policy].name;
    let names = &b.names;
    let outcome = vcgen::check_all(b, policy, cap).map_err(|e| usage(e.to_string()))?;
    Ok(match outcome {
        ExecOutcome::Executable {
            envs,
            example,
            final_state,
        } => {
            let mut text = format!("check {name}: EXECUTABLE under all {envs} environment(s)");
            let mut j = json!({
                "policy": name,
                "verdict": "executable",
                "environments": envs,
                "least_environment": env_json(names, &example),
            });
            if dump {
                text.push_str(&format!(
                    "\n  least environment: {}\n{}",
                    env_text(names, &example),
                    state_text(names, &final_state)
                ));
                j["final_state"] = state_json(names, &final_state);
            }
            Outcome {
                code: EXIT_OK,
                text,
                json: j,
            }
        }
        ExecOutcome::Inexecutable { env, failure } => Outcome {
            code: EXIT_INEXECUTABLE,
            text: format!(
                "check {name}: INEXECUTABLE\n  environment: {}\n  {}",
                env_text(names, &env),
                failure_text(&failure)
            ),
            json: json!({
                "policy": name,
                "verdict": "inexecutable",
                "environment": env_json(names, &env),
                "failure": failure_json(&failure),
            }),
        },
        ExecOutcome::Vacuous => Outcome {
            code: EXIT_VACUOUS,
            text: format!("check {name}: VACUOUS (no environment satisfies the assumptions)"),
            json: json!({ "policy": name, "verdict": "vacuous" }),
        },
        ExecOutcome::BoundExceeded(e) => return Err(bound_exceeded(e)),
    })
}

fn bound_exceeded(e: vcgen::BoundExceeded) -> Failure {
    usage(format!(
        "{} candidate environments exceed --max-envs {}",
        e.candidates, e.cap
    ))
}

fn diff_table(names: &Names, diff: &[ContentDiff]) -> String {
    let header = [
        "content",
        "view (old)",
        "view (new)",
        "edit (old)",
        "edit (new)",
    ];
    let rows: Vec<[String; 5]> = diff
        .iter()
        .map(|d| {
            [
                names.name(Sort::Content, d.content),
                set(names, Sort::Person, d.view_old),
                set(names, Sort::Person, d.view_new),
                set(names, Sort::Person, d.edit_old),
                set(names, Sort::Person, d.edit_new),
            ]
        })
        .collect();
    let width = |k: usize| {
        rows.iter()
            .map(|r| r[k].chars().count())
            .chain([header[k].len()])
            .max()
            .unwrap_or(0)
    };
    let widths: Vec<usize> = (0..5).map(width).collect();
    let line = |cells: [&str; 5]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("  {}", padded.join("  ").trim_end())
    };
    let mut out = vec![line(header)];
    for r in &rows {
        out.push(line([&r[0], &r[1], &r[2], &r[3], &r[4]]));
    }
    out.join("\n")
}

fn diff_json(names: &Names, diff: &[ContentDiff]) -> Value {
    Value::Array(
        diff.iter()
            .map(|d| {
                json!({
                    "content": names.name(Sort::Content, d.content),
                    "view_old": names_json(names, Sort::Person, d.view_old),
                    "view_new": names_json(names, Sort::Person, d.view_new),
                    "edit_old": names_json(names, Sort::Person, d.edit_old),
                    "edit_new": names_json(names, Sort::Person, d.edit_new),
                })
            })
            .collect(),
    )
}

fn compare_one(b: &BoundScenario, old: usize, new: usize, cap: u64) -> Result<Outcome, Failure> {
    let names = &b.names;
    let (o, n) = (&b.policies[old].name, &b.policies[new].name);
    let head = format!("compare {o} -> {n}");
    let verdict = compliance::compare(b, old, new, cap).map_err(|e| usage(e.to_string()))?;
    let base = json!({ "old": o, "new": n });
    let with = |mut j: Value, extra: Value| {
        if let (Value::Object(a), Value::Object(b)) = (&mut j, extra) {
            a.extend(b);
        }
        j
    };
    Ok(match verdict {
        ComplianceVerdict::Compliant { envs, env, diff } => Outcome {
            code: EXIT_OK,
            text: format!(
                "{head}: COMPLIANT under all {envs} environment(s)\n  least environment: {}\n{}",
                env_text(names, &env),
                diff_table(names, &diff)
            ),
            json: with(
                base,
                json!({
                    "verdict": "compliant",
                    "environments": envs,
                    "least_environment": env_json(names, &env),
                    "contents": diff_json(names, &diff),
                }),
            ),
        },
        ComplianceVerdict::Breach { witness, diff } => {
            let kind = match witness.kind {
                PermKind::View => "view",
                PermKind::Edit => "edit",
            };
            let person = names.name(Sort::Person, witness.person);
            let content = names.name(Sort::Content, witness.content);
            Outcome {
                code: EXIT_BREACH,
                text: format!(
                    "{head}: BREACH\n  environment: {}\n  witness: {person} gains {kind} permission on {content}\n{}",
                    env_text(names, &witness.env),
                    diff_table(names, &diff)
                ),
                json: with(
                    base,
                    json!({
                        "verdict": "breach",
                        "witness": {
                            "environment": env_json(names, &witness.env),
                            "content": content,
                            "person": person,
                            "permission": kind,
                        },
                        "contents": diff_json(names, &diff),
                    }),
                ),
            }
        }
        ComplianceVerdict::Inexecutable {
            policy,
            env,
            failure,
        } => Outcome {
            code: EXIT_INEXECUTABLE,
            text: format!(
                "{head}: INEXECUTABLE ({policy})\n  environment: {}\n  {}",
                env_text(names, &env),
                failure_text(&failure)
            ),
            json: with(
                base,
                json!({
                    "verdict": "inexecutable",
                    "policy": policy,
                    "environment": env_json(names, &env),
                    "failure": failure_json(&failure),
                }),
            ),
        },
        ComplianceVerdict::Vacuous => Outcome {
            code: EXIT_VACUOUS,
            text: format!("{head}: VACUOUS (no environment satisfies the assumptions)"),
            json: with(base, json!({ "verdict": "vacuous" })),
        },
        ComplianceVerdict::BoundExceeded(e) => return Err(bound_exceeded(e)),
    })
}

fn observation_text(names: &Names, o: &Observation) -> String {
    format!(
        "view {} edit {}",
        pairs_text(names, Sort::Content, Sort::Person, &o.view),
        pairs_text(names, Sort::Content, Sort::Person, &o.edit)
    )
}

fn observation_json(names: &Names, o: &Observation) -> Value {
    json!({
        "view": pairs_json(names, Sort::Content, Sort::Person, &o.view),
        "edit": pairs_json(names, Sort::Content, Sort::Person, &o.edit),
    })
}

fn purged_text(ops: &[TraceOp], purged: &[usize]) -> String {
    if purged.is_empty() {
        return "  purged: nothing".into();
    }
    let lines: Vec<String> = purged
        .iter()
        .map(|i| format!("    {}. {}", i + 1, ops[*i].source))
        .collect();
    format!("  purged:\n{}", lines.join("\n"))
}

fn trace_failure_json(f: &noninterference::TraceFailure) -> Value {
    json!({
        "step": f.index + 1,
        "instruction": f.source,
        "call": f.call,
        "guard": f.error.guard(),
        "message": f.error.to_string(),
    })
}

struct NiArgs<'a> {
    trace: Option<&'a str>,
    actor: &'a str,
    observer: &'a str,
    cfg: NiConfig,
}

fn noninterf(b: &BoundScenario, a: NiArgs<'_>) -> Result<Outcome, Failure> {
    let names = &b.names;
    let idx = match a.trace {
        Some(t) => policy_index(b, t, BlockKind::Trace)?,
        None => b
            .policies
            .iter()
            .position(|p| p.kind == BlockKind::Trace)
            .ok_or_else(|| usage("the file has no trace block"))?,
    };
    let person = |n: &str| {
        names
            .id(Sort::Person, n)
            .ok_or_else(|| usage(format!("unknown person `{n}`")))
    };
    let (t, u) = (person(a.actor)?, person(a.observer)?);
    let name = &b.policies[idx].name;
    let head = format!(
        "noninterf {name}: actor {} observer {}",
        a.actor, a.observer
    );
    let base = json!({
        "trace": name,
        "actor": a.actor,
        "observer": a.observer,
        "comment_ownership": a.cfg.comment_ownership,
        "purge": a.cfg.purge,
    });
    let with = |extra: Value| {
        let mut j = base.clone();
        if let (Value::Object(x), Value::Object(y)) = (&mut j, extra) {
            x.extend(y);
        }
        j
    };
    let Some((initial, ops, _)) =
        noninterference::trace_ops(b, idx).map_err(|e| usage(e.to_string()))?
    else {
        return Ok(Outcome {
            code: EXIT_VACUOUS,
            text: format!("{head}: VACUOUS (no environment satisfies the assumptions)"),
            json: with(json!({ "verdict": "vacuous" })),
        });
    };
    let verdict = noninterference::check_noninterference(initial, ops.clone(), t, u, a.cfg);
    let sources: Vec<Value> = ops
        .iter()
        .map(|o| Value::String(o.source.clone()))
        .collect();
    Ok(match verdict {
        NiVerdict::Clean {
            observation,
            purged,
        } => Outcome {
            code: EXIT_OK,
            text: format!(
                "{head}: CLEAN\n{}\n  observation: {}",
                purged_text(&ops, &purged),
                observation_text(names, &observation)
            ),
            json: with(json!({
                "verdict": "clean",
                "operations": sources,
                "purged": purged.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "observation": observation_json(names, &observation),
            })),
        },
        NiVerdict::Interferes {
            original,
            purged_observation,
            purged,
            view_diff,
            edit_diff,
        } => Outcome {
            code: EXIT_BREACH,
            text: format!(
                "{head}: INTERFERES\n{}\n  observation:        {}\n  purged observation: {}\n  difference:         view {} edit {}",
                purged_text(&ops, &purged),
                observation_text(names, &original),
                observation_text(names, &purged_observation),
                pairs_text(names, Sort::Content, Sort::Person, &view_diff),
                pairs_text(names, Sort::Content, Sort::Person, &edit_diff),
            ),
            json: with(json!({
                "verdict": "interferes",
                "operations": sources,
                "purged": purged.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "observation": observation_json(names, &original),
                "purged_observation": observation_json(names, &purged_observation),
                "difference": {
                    "view": pairs_json(names, Sort::Content, Sort::Person, &view_diff),
                    "edit": pairs_json(names, Sort::Content, Sort::Person, &edit_diff),
                },
            })),
        },
        NiVerdict::Inexecutable { failure } => Outcome {
            code: EXIT_INEXECUTABLE,
            text: format!(
                "{head}: INEXECUTABLE trace\n  step {} `{}`: {}",
                failure.index + 1,
                failure.source,
                failure.error
            ),
            json: with(json!({
                "verdict": "inexecutable",
                "operations": sources,
                "failure": trace_failure_json(&failure),
            })),
        },
        NiVerdict::PurgedInexecutable { purged, failure } => Outcome {
            code: EXIT_INEXECUTABLE,
            text: format!(
                "{head}: PURGED TRACE INEXECUTABLE\n{}\n  purged step {} `{}`: {}",
                purged_text(&ops, &purged),
                failure.index + 1,
                failure.source,
                failure.error
            ),
            json: with(json!({
                "verdict": "purged_inexecutable",
                "operations": sources,
                "purged": purged.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "failure": trace_failure_json(&failure),
            })),
        },
    })
}

/// Runs every outcome; the exit code is the first nonzero one.
fn combine(outcomes: Vec<Outcome>) -> (i32, String, Vec<Value>) {
    let code = outcomes
        .iter()
        .map(|o| o.code)
        .find(|c| *c != 0)
        .unwrap_or(EXIT_OK);
    let text = outcomes
        .iter()
        .map(|o| o.text.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    (code, text, outcomes.into_iter().map(|o| o.json).collect())
}

fn execute(cli: &Cli) -> Result<(i32, String, Value), Failure> {
    let cap = cli.max_envs;
    match &cli.command {
        Command::Check {
            file,
            policy,
            dump_state,
        } => {
            let b = load(file, cli.universe)?;
            let targets: Vec<usize> = match policy {
                Some(p) => vec![policy_index(&b, p, BlockKind::Policy)?],
                None => {
                    let listed: Vec<&String> = b
                        .checks
                        .iter()
                        .filter_map(|c| match c {
                            Check::Executable(p) => Some(p),
                            Check::Compare { .. } => None,
                        })
                        .collect();
                    if listed.is_empty() {
                        (0..b.policies.len())
                            .filter(|i| b.policies[*i].kind == BlockKind::Policy)
                            .collect()
                    } else {
                        listed
                            .into_iter()
                            .map(|p| policy_index(&b, p, BlockKind::Policy))
                            .collect::<Result<_, _>>()?
                    }
                }
            };
            let outcomes = targets
                .into_iter()
                .map(|p| check_one(&b, p, cap, *dump_state))
                .collect::<Result<Vec<_>, _>>()?;
            let (code, text, results) = combine(outcomes);
            Ok((code, text, json!({ "file": file, "results": results })))
        }
        Command::Compare { file, old, new } => {
            let b = load(file, cli.universe)?;
            let pairs: Vec<(usize, usize)> = match (old, new) {
                (Some(o), Some(n)) => vec![(
                    policy_index(&b, o, BlockKind::Policy)?,
                    policy_index(&b, n, BlockKind::Policy)?,
                )],
                _ => {
                    let listed: Vec<(usize, usize)> = b
                        .checks
                        .iter()
                        .filter_map(|c| match c {
                            Check::Compare { old, new } => Some((old, new)),
                            Check::Executable(_) => None,
                        })
                        .map(|(o, n)| {
                            Ok((
                                policy_index(&b, o, BlockKind::Policy)?,
                                policy_index(&b, n, BlockKind::Policy)?,
                            ))
                        })
                        .collect::<Result<_, Failure>>()?;
                    if listed.is_empty() {
                        return Err(usage(
                            "give --old and --new, or list `check compare` lines in the file",
                        ));
                    }
                    listed
                }
            };
            let outcomes = pairs
                .into_iter()
                .map(|(o, n)| compare_one(&b, o, n, cap))
                .collect::<Result<Vec<_>, _>>()?;
            let (code, text, results) = combine(outcomes);
            Ok((code, text, json!({ "file": file, "results": results })))
        }
        Command::Noninterf {
            file,
            actor,
            observer,
            trace,
            comment_ownership,
            strict_purge,
        } => {
            let b = load(file, cli.universe)?;
            let cfg = NiConfig {
                comment_ownership: match comment_ownership {
                    CommentOwnershipArg::PrsMembers => CommentOwnership::PrsMembers,
                    CommentOwnershipArg::OwnerOnly => CommentOwnership::OwnerOnly,
                },
                purge: if *strict_purge {
                    PurgeMode::StopAtFirst
                } else {
                    PurgeMode::KeepAndContinue
                },
            };
            let o = noninterf(
                &b,
                NiArgs {
                    trace: trace.as_deref(),
                    actor,
                    observer,
                    cfg,
                },
            )?;
            Ok((o.code, o.text, json!({ "file": file, "results": [o.json] })))
        }
        Command::EmitSmt {
            file,
            policy,
            dialect,
            output,
        } => {
            let b = load(file, cli.universe)?;
            let p = policy_index(&b, policy, BlockKind::Policy)?;
            let script =
                smt_emit::emit_vc_script(&b, p, *dialect).map_err(|e| usage(e.to_string()))?;
            match output {
                Some(path) => {
                    std::fs::write(path, &script)
                        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    Ok((
                        EXIT_OK,
                        format!("wrote {}", path.display()),
                        json!({ "file": file, "policy": policy, "dialect": dialect, "output": path }),
                    ))
                }
                None if cli.json => Ok((
                    EXIT_OK,
                    String::new(),
                    json!({ "file": file, "policy": policy, "dialect": dialect, "script": script }),
                )),
                None => Ok((EXIT_OK, script.trim_end().to_string(), Value::Null)),
            }
        }
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Compare { .. } => "compare",
        Command::Noninterf { .. } => "noninterf",
        Command::EmitSmt { .. } => "emit-smt",
    }
}

/// Parses `args` (program name first), runs the subcommand, and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let start = Instant::now();
    let result = execute(&cli);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    let (code, text, details, error) = match result {
        Ok((code, text, details)) => (code, text, details, None),
        Err(f) => (f.code, String::new(), Value::Null, Some(f.message)),
    };
    if cli.json {
        let mut report = json!({
            "schema": SCHEMA_VERSION,
            "subcommand": subcommand_name(&cli.command),
            "exit_code": code,
            "elapsed_ms": elapsed_ms,
        });
        if let Value::Object(d) = details {
            report.as_object_mut().expect("object").extend(d);
        }
        if let Some(msg) = error {
            report["error"] = Value::String(msg);
        }
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
    } else {
        if let Some(msg) = error {
            let _ = writeln!(err, "error: {msg}");
        }
        if !text.is_empty() {
            let _ = writeln!(out, "{text}");
        }
    }
    code
}
