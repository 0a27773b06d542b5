//! Parses a scenario file, prints it back in canonical form and lists what
//! the resolver assigned to each name.
//!
//! Usage: `cargo run --example parse_scenario [FILE]`

use sncheck::policy_lang::{parse, resolve, Sort};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/examples/scenarios/comment_breach.snp"
        )
        .into()
    });
    let src = std::fs::read_to_string(&path)?;
    let scenario = parse(&src)?;
    print!("{scenario}");

    let b = resolve(&scenario, None)?;
    println!("\n// universe of {} elements per sort", b.universe.size());
    for (sort, label) in [
        (Sort::Person, "person"),
        (Sort::Content, "content"),
        (Sort::List, "list"),
    ] {
        let names: Vec<String> = b
            .universe
            .elems()
            .take(b.names.count(sort))
            .map(|e| format!("{}={e}", b.names.name(sort, e)))
            .collect();
        println!("// {label}: {}", names.join(" "));
    }
    Ok(())
}
