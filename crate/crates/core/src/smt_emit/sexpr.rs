//! A small S-expression layer with one printer per output dialect.

use std::fmt::Write;

use super::Dialect;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SortRef {
    Bool,
    Named(&'static str),
}

impl SortRef {
    fn render(&self, d: Dialect) -> &'static str {
        match (self, d) {
            (SortRef::Bool, Dialect::Smtlib2) => "Bool",
            (SortRef::Bool, Dialect::Yices1) => "bool",
            (SortRef::Named(n), _) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sx {
    Sym(String),
    /// Bit-vector literal, least significant bit first.
    Bits(Vec<bool>),
    Bool(bool),
    App(&'static str, Vec<Sx>),
    Call(String, Vec<Sx>),
    Extract(usize, usize, Box<Sx>),
}

pub fn sym(s: impl Into<String>) -> Sx {
    Sx::Sym(s.into())
}

pub fn app(head: &'static str, args: Vec<Sx>) -> Sx {
    Sx::App(head, args)
}

pub fn call(head: impl Into<String>, args: Vec<Sx>) -> Sx {
    Sx::Call(head.into(), args)
}

pub fn extract(hi: usize, lo: usize, x: Sx) -> Sx {
    Sx::Extract(hi, lo, Box::new(x))
}

pub fn zero(width: usize) -> Sx {
    Sx::Bits(vec![false; width])
}

pub fn one_hot(width: usize, i: usize) -> Sx {
    let mut bits = vec![false; width];
    bits[i] = true;
    Sx::Bits(bits)
}

/// `and` over `xs`, `true` when empty.
pub fn and(mut xs: Vec<Sx>) -> Sx {
    match xs.len() {
        0 => Sx::Bool(true),
        1 => xs.pop().expect("one element"),
        _ => app("and", xs),
    }
}

/// Right-nested binary application, e.g. `concat` or `bvor`.
pub fn fold_right(head: &'static str, mut xs: Vec<Sx>) -> Sx {
    let last = xs.pop().expect("nonempty");
    xs.into_iter()
        .rev()
        .fold(last, |acc, x| app(head, vec![x, acc]))
}

/// Right-nested binary calls of a prelude function.
pub fn fold_right_call(head: &str, mut xs: Vec<Sx>) -> Sx {
    let last = xs.pop().expect("nonempty");
    xs.into_iter()
        .rev()
        .fold(last, |acc, x| call(head, vec![x, acc]))
}

fn head_name(head: &'static str, d: Dialect) -> &'static str {
    match d {
        Dialect::Smtlib2 => head,
        Dialect::Yices1 => match head {
            "bvand" => "bv-and",
            "bvor" => "bv-or",
            "bvnot" => "bv-not",
            "concat" => "bv-concat",
            "ite" => "if",
            other => other,
        },
    }
}

fn bits_literal(bits: &[bool], d: Dialect) -> String {
    let w = bits.len();
    let value =
        |range: std::ops::Range<usize>| range.rev().fold(0u64, |acc, i| acc << 1 | bits[i] as u64);
    match d {
        Dialect::Smtlib2 if w.is_multiple_of(4) => {
            let mut s = String::from("#x");
            for k in (0..w / 4).rev() {
                let nibble = value(4 * k..4 * k + 4);
                write!(s, "{nibble:x}").expect("write to String");
            }
            s
        }
        Dialect::Smtlib2 => {
            let digits: String = bits
                .iter()
                .rev()
                .map(|b| if *b { '1' } else { '0' })
                .collect();
            format!("#b{digits}")
        }
        Dialect::Yices1 if w <= 64 => format!("(mk-bv {w} {})", value(0..w)),
        Dialect::Yices1 => {
            let digits: String = bits
                .iter()
                .rev()
                .map(|b| if *b { '1' } else { '0' })
                .collect();
            format!("0b{digits}")
        }
    }
}

impl Sx {
    pub fn render(&self, d: Dialect) -> String {
        let mut out = String::new();
        self.write(&mut out, d);
        out
    }

    fn write(&self, out: &mut String, d: Dialect) {
        match self {
            Sx::Sym(s) => out.push_str(s),
            Sx::Bits(bits) => out.push_str(&bits_literal(bits, d)),
            Sx::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Sx::App(head, args) => write_list(out, head_name(head, d), args, d),
            Sx::Call(head, args) => write_list(out, head, args, d),
            Sx::Extract(hi, lo, x) => {
                match d {
                    Dialect::Smtlib2 => write!(out, "((_ extract {hi} {lo}) "),
                    Dialect::Yices1 => write!(out, "(bv-extract {hi} {lo} "),
                }
                .expect("write to String");
                x.write(out, d);
                out.push(')');
            }
        }
    }
}

fn write_list(out: &mut String, head: &str, args: &[Sx], d: Dialect) {
    out.push('(');
    out.push_str(head);
    for a in args {
        out.push(' ');
        a.write(out, d);
    }
    out.push(')');
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cmd {
    Comment(String),
    Blank,
    SetLogic,
    DefineSort(&'static str, usize),
    DefineFun {
        name: String,
        params: Vec<(String, SortRef)>,
        ret: SortRef,
        body: Sx,
    },
    DeclareConst(String, SortRef),
    Assert(Sx),
    CheckSat,
}

impl Cmd {
    pub fn define(name: impl Into<String>, ret: SortRef, body: Sx) -> Cmd {
        Cmd::DefineFun {
            name: name.into(),
            params: vec![],
            ret,
            body,
        }
    }

    pub fn render(&self, d: Dialect) -> String {
        match (self, d) {
            (Cmd::Comment(c), _) => format!("; {c}"),
            (Cmd::Blank, _) => String::new(),
            (Cmd::SetLogic, Dialect::Smtlib2) => "(set-logic QF_BV)".into(),
            (Cmd::SetLogic, Dialect::Yices1) => String::new(),
            (Cmd::DefineSort(name, w), Dialect::Smtlib2) => {
                format!("(define-sort {name} () (_ BitVec {w}))")
            }
            (Cmd::DefineSort(name, w), Dialect::Yices1) => {
                format!("(define-type {name} (bitvector {w}))")
            }
            (
                Cmd::DefineFun {
                    name,
                    params,
                    ret,
                    body,
                },
                Dialect::Smtlib2,
            ) => {
                let ps: Vec<String> = params
                    .iter()
                    .map(|(p, s)| format!("({p} {})", s.render(d)))
                    .collect();
                let sep = if params.is_empty() { " " } else { "\n  " };
                format!(
                    "(define-fun {name} ({}) {}{sep}{})",
                    ps.join(" "),
                    ret.render(d),
                    body.render(d)
                )
            }
            (
                Cmd::DefineFun {
                    name,
                    params,
                    ret,
                    body,
                },
                Dialect::Yices1,
            ) => {
                if params.is_empty() {
                    return format!("(define {name}::{} {})", ret.render(d), body.render(d));
                }
                let sorts: Vec<&str> = params.iter().map(|(_, s)| s.render(d)).collect();
                let ps: Vec<String> = params
                    .iter()
                    .map(|(p, s)| format!("{p}::{}", s.render(d)))
                    .collect();
                format!(
                    "(define {name}::(-> {} {})\n (lambda ({}) {}))",
                    sorts.join(" "),
                    ret.render(d),
                    ps.join(" "),
                    body.render(d)
                )
            }
            (Cmd::DeclareConst(name, sort), Dialect::Smtlib2) => {
                format!("(declare-fun {name} () {})", sort.render(d))
            }
            (Cmd::DeclareConst(name, sort), Dialect::Yices1) => {
                format!("(define {name}::{})", sort.render(d))
            }
            (Cmd::Assert(x), _) => format!("(assert {})", x.render(d)),
            (Cmd::CheckSat, Dialect::Smtlib2) => "(check-sat)".into(),
            (Cmd::CheckSat, Dialect::Yices1) => "(check)".into(),
        }
    }
}

/// Renders commands one per line, skipping those without output in `d`.
pub fn render_all(cmds: &[Cmd], d: Dialect) -> String {
    let mut out = String::new();
    for c in cmds {
        if matches!(c, Cmd::SetLogic) && d == Dialect::Yices1 {
            continue;
        }
        out.push_str(&c.render(d));
        out.push('\n');
    }
    out
}
