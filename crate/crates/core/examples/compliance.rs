//! Runs every `check compare` of the shipped scenarios and reports whether
//! the new policy leaks permissions the old one withholds.

use sncheck::compliance::{self, ComplianceVerdict};
use sncheck::policy_lang::ast::Check;
use sncheck::policy_lang::{parse, resolve, Sort};
use sncheck::vcgen::DEFAULT_MAX_ENVS;

const FILES: [&str; 5] = [
    "comment_breach.snp",
    "restricted_union.snp",
    "public_reset.snp",
    "plugin_edit.snp",
    "fixed_lists.snp",
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenarios");
    for file in FILES {
        let src = std::fs::read_to_string(format!("{dir}/{file}"))?;
        let b = resolve(&parse(&src)?, None)?;
        for check in &b.checks {
            let Check::Compare { old, new } = check else {
                continue;
            };
            let verdict = compliance::compare(
                &b,
                b.policy_index(old)?,
                b.policy_index(new)?,
                DEFAULT_MAX_ENVS,
            )?;
            let summary = match &verdict {
                ComplianceVerdict::Compliant { envs, .. } => {
                    format!("COMPLIANT over {envs} environment(s)")
                }
                ComplianceVerdict::Breach { witness, .. } => format!(
                    "BREACH: {} gains {:?} permission on {}",
                    b.names.name(Sort::Person, witness.person),
                    witness.kind,
                    b.names.name(Sort::Content, witness.content),
                ),
                other => format!("{other:?}"),
            };
            println!("{file:<22} {new} against {old}: {summary}");
        }
    }
    Ok(())
}
