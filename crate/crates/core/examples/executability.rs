//! Checks each policy of a scenario for executability and, for a failing
//! one, shows where its chain of verification conditions breaks.

use sncheck::policy_lang::{parse, resolve};
use sncheck::vcgen::{self, EnvSpace, ExecOutcome, DEFAULT_MAX_ENVS};

const SRC: &str = "
person ann, ben;

policy Share() {
  create-account(ann, pic);
  create-list(fam, ann);
  add-to-list(fam, ben);
  transmit-to-list(pic, fam);
}

policy Broken() {
  create-account(ann, pic);
  transmit-to-list(pic, fam);
}
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b = resolve(&parse(SRC)?, None)?;
    for (i, p) in b.policies.iter().enumerate() {
        match vcgen::check_all(&b, i, DEFAULT_MAX_ENVS)? {
            ExecOutcome::Executable { envs, .. } => {
                println!("{}: executable under {envs} environment(s)", p.name)
            }
            ExecOutcome::Inexecutable { failure, .. } => {
                println!(
                    "{}: fails at step {}: {}",
                    p.name, failure.step, failure.call
                );
                println!("    {}", failure.error);
            }
            other => println!("{}: {other:?}", p.name),
        }
    }

    // The same question asked step by step for the failing policy.
    let env = EnvSpace::new(&b)
        .iter(DEFAULT_MAX_ENVS)?
        .next()
        .expect("no assumptions");
    let plan = vcgen::plan(&b, b.policy_index("Broken")?, &env)?;
    let chain = vcgen::reduce(&plan);
    println!(
        "\nBroken: first failing step {:?}",
        chain.verdict.failing_step()
    );
    println!(
        "literal reading agrees: {}",
        vcgen::literal(&plan) == chain.verdict
    );
    Ok(())
}
