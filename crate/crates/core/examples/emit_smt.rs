//! Prints the SMT-LIB2 script whose satisfiability decides executability of
//! CommentPolicy. Pipe it to a solver, e.g. `| z3 -in`.

use sncheck::policy_lang::{parse, resolve};
use sncheck::smt_emit::{emit_vc_script, Dialect};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/scenarios/comment_breach.snp"
    );
    let b = resolve(&parse(&std::fs::read_to_string(path)?)?, None)?;
    let dialect = match std::env::args().nth(1).as_deref() {
        Some("yices1") => Dialect::Yices1,
        _ => Dialect::Smtlib2,
    };
    print!(
        "{}",
        emit_vc_script(&b, b.policy_index("CommentPolicy")?, dialect)?
    );
    Ok(())
}
