//! Canonical source layout: one item per line, sections separated by blank
//! lines, instructions indented by two spaces.

use std::fmt;

use super::ast::*;

fn comma_list(f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
    for (i, n) in names.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str(n)?;
    }
    Ok(())
}

fn set_literal(f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
    f.write_str("{")?;
    comma_list(f, names)?;
    f.write_str("}")
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::Name(n) => f.write_str(n),
            SetExpr::Union(a, b) => write!(f, "union({a}, {b})"),
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assumption::Subset(a, b) => write!(f, "assume {a} subset-of {b};"),
            Assumption::Equal(a, b) => write!(f, "assume {a} = {b};"),
            Assumption::NotSubset(a, b) => write!(f, "assume not subset-of({a}, {b});"),
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Name(n) => f.write_str(n),
            Arg::Set(names) => set_literal(f, names),
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(actor) = &self.actor {
            write!(f, "{actor}: ")?;
        }
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = match self.kind {
            BlockKind::Policy => "policy",
            BlockKind::Trace => "trace",
        };
        write!(f, "{kw} {}", self.name)?;
        if let Some(after) = &self.after {
            write!(f, " after {after}")?;
        }
        if self.body.is_empty() {
            return f.write_str(" {}");
        }
        f.write_str(" {\n")?;
        for instr in &self.body {
            writeln!(f, "  {instr};")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Executable(p) => write!(f, "check executable {p};"),
            Check::Compare { old, new } => write!(f, "check compare {old} {new};"),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut sections: Vec<Vec<String>> = Vec::new();
        if let Some(n) = self.universe {
            sections.push(vec![format!("universe {n};")]);
        }
        let mut heads: Vec<String> = self
            .decls
            .iter()
            .map(|d| format!("{} {};", d.sort.keyword(), d.names.join(", ")))
            .collect();
        heads.extend(
            self.members
                .iter()
                .map(|m| format!("members {} = {{{}}};", m.list, m.persons.join(", "))),
        );
        sections.push(heads);
        sections.push(self.assumptions.iter().map(|a| a.to_string()).collect());
        for p in &self.policies {
            sections.push(vec![p.to_string()]);
        }
        sections.push(self.checks.iter().map(|c| c.to_string()).collect());
        let text = sections
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(|s| s.join("\n"))
            .collect::<Vec<_>>()
            .join("\n\n");
        writeln!(f, "{text}")
    }
}
