//! Runs the shipped trace and asks, for every ordered pair of people,
//! whether the first one's actions change what the second one observes.

use sncheck::noninterference::{check_noninterference, trace_ops, CommentOwnership, NiConfig};
use sncheck::policy_lang::{parse, resolve, Sort};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/scenarios/comment_trace.snt"
    );
    let b = resolve(&parse(&std::fs::read_to_string(path)?)?, None)?;
    let (initial, ops, failure) = trace_ops(&b, 0)?.expect("no assumptions");
    assert!(failure.is_none());
    for op in &ops {
        println!("  {}", op.source);
    }

    for ownership in [CommentOwnership::PrsMembers, CommentOwnership::OwnerOnly] {
        let cfg = NiConfig {
            comment_ownership: ownership,
            ..NiConfig::default()
        };
        println!("\ncomment ownership {ownership:?}");
        for t in b.all_persons().iter() {
            for u in b.all_persons().iter().filter(|u| *u != t) {
                let verdict = check_noninterference(initial, ops.clone(), t, u, cfg);
                let name = |p| b.names.name(Sort::Person, p);
                let word = if verdict.interferes() {
                    "INTERFERES"
                } else {
                    "clean"
                };
                println!("  {} -> {}: {word}", name(t), name(u));
            }
        }
    }
    Ok(())
}
