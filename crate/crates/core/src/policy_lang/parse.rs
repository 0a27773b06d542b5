//! Lexer and recursive-descent parser for scenario (`.snp`) and trace
//! (`.snt`) files.
//!
//! ```text
//! scenario   ::= header? decl* members* assumption* block+ check*
//! header     ::= "universe" NUMBER ";"
//! decl       ::= ("person" | "content" | "list") IDENT ("," IDENT)* ";"
//! members    ::= "members" IDENT "=" set ";"
//! assumption ::= "assume" setexpr ("subset-of" | "=") setexpr ";"
//!              | "assume" "not" "subset-of" "(" IDENT "," IDENT ")" ";"
//! setexpr    ::= IDENT | "union" "(" setexpr "," setexpr ")"
//! block      ::= ("policy" | "trace") IDENT ("(" ")")? ("after" IDENT)?
//!                "{" (instr ";")* "}"
//! instr      ::= (IDENT ":")? IDENT "(" (arg ("," arg)*)? ")"
//! arg        ::= IDENT | set
//! set        ::= "{" (IDENT ("," IDENT)*)? "}"
//! check      ::= "check" "executable" IDENT ";"
//!              | "check" "compare" IDENT IDENT ";"
//! ```
//!
//! Keywords are contextual. `//` starts a comment that runs to end of line.

use std::fmt;

use thiserror::Error;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(usize),
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "`{n}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '/' {
            bump(&mut chars);
            if chars.peek() != Some(&'/') {
                return Err(ParseError {
                    line: start_line,
                    column: start_col,
                    expected: "`//` comment".into(),
                    found: "`/`".into(),
                });
            }
            while chars.peek().is_some_and(|c| *c != '\n') {
                bump(&mut chars);
            }
        } else if is_ident_start(c) {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| is_ident_char(*c)) {
                s.push(bump(&mut chars).expect("peeked"));
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: start_line,
                column: start_col,
            });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(bump(&mut chars).expect("peeked"));
            }
            let n = s.parse().map_err(|_| ParseError {
                line: start_line,
                column: start_col,
                expected: "a small number".into(),
                found: format!("`{s}`"),
            })?;
            out.push(Spanned {
                tok: Tok::Number(n),
                line: start_line,
                column: start_col,
            });
        } else if "{}(),;:=".contains(c) {
            bump(&mut chars);
            out.push(Spanned {
                tok: Tok::Punct(c),
                line: start_line,
                column: start_col,
            });
        } else {
            return Err(ParseError {
                line: start_line,
                column: start_col,
                expected: "a token".into(),
                found: format!("`{c}`"),
            });
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            expected: expected.into(),
            found: t.tok.to_string(),
        }
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn punct(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Punct(c) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!("`{c}`")))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.peek_keyword(kw) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!("`{kw}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => Err(self.error(what)),
        }
    }

    fn scenario(&mut self) -> Result<Scenario, ParseError> {
        let mut sc = Scenario {
            universe: self.header()?,
            ..Scenario::default()
        };
        while let Some(sort) = self.decl_keyword() {
            self.advance();
            let mut names = vec![self.ident("a name")?];
            while self.eat_punct(',') {
                names.push(self.ident("a name")?);
            }
            self.punct(';')?;
            sc.decls.push(Decl { sort, names });
        }
        while self.peek_keyword("members") {
            self.advance();
            let list = self.ident("a list name")?;
            self.punct('=')?;
            let persons = self.set()?;
            self.punct(';')?;
            sc.members.push(MembersFact { list, persons });
        }
        while self.peek_keyword("assume") {
            sc.assumptions.push(self.assumption()?);
        }
        while self.peek_keyword("policy") || self.peek_keyword("trace") {
            sc.policies.push(self.block()?);
        }
        if sc.policies.is_empty() {
            return Err(self.error("`policy`"));
        }
        while self.peek_keyword("check") {
            sc.checks.push(self.check()?);
        }
        if *self.peek() != Tok::Eof {
            return Err(self.error("`check` or end of input"));
        }
        Ok(sc)
    }

    fn header(&mut self) -> Result<Option<usize>, ParseError> {
        if !self.peek_keyword("universe") {
            return Ok(None);
        }
        self.advance();
        let n = match self.peek() {
            Tok::Number(n) => *n,
            _ => return Err(self.error("a universe size")),
        };
        self.advance();
        self.punct(';')?;
        Ok(Some(n))
    }

    fn decl_keyword(&self) -> Option<Sort> {
        match self.peek() {
            Tok::Ident(s) if s == "person" => Some(Sort::Person),
            Tok::Ident(s) if s == "content" => Some(Sort::Content),
            Tok::Ident(s) if s == "list" => Some(Sort::List),
            _ => None,
        }
    }

    fn set(&mut self) -> Result<Vec<String>, ParseError> {
        self.punct('{')?;
        let mut names = Vec::new();
        if !self.eat_punct('}') {
            names.push(self.ident("a name")?);
            while self.eat_punct(',') {
                names.push(self.ident("a name")?);
            }
            self.punct('}')?;
        }
        Ok(names)
    }

    fn assumption(&mut self) -> Result<Assumption, ParseError> {
        self.keyword("assume")?;
        if self.peek_keyword("not") {
            self.advance();
            self.keyword("subset-of")?;
            self.punct('(')?;
            let a = self.ident("a name")?;
            self.punct(',')?;
            let b = self.ident("a name")?;
            self.punct(')')?;
            self.punct(';')?;
            return Ok(Assumption::NotSubset(a, b));
        }
        let lhs = self.setexpr()?;
        let a = if self.peek_keyword("subset-of") {
            self.advance();
            Assumption::Subset(lhs, self.setexpr()?)
        } else if self.eat_punct('=') {
            Assumption::Equal(lhs, self.setexpr()?)
        } else {
            return Err(self.error("`subset-of` or `=`"));
        };
        self.punct(';')?;
        Ok(a)
    }

    fn setexpr(&mut self) -> Result<SetExpr, ParseError> {
        let name = self.ident("a set expression")?;
        if name == "union" && *self.peek() == Tok::Punct('(') {
            self.advance();
            let a = self.setexpr()?;
            self.punct(',')?;
            let b = self.setexpr()?;
            self.punct(')')?;
            return Ok(SetExpr::Union(Box::new(a), Box::new(b)));
        }
        Ok(SetExpr::Name(name))
    }

    fn block(&mut self) -> Result<Policy, ParseError> {
        let kind = if self.peek_keyword("trace") {
            BlockKind::Trace
        } else {
            BlockKind::Policy
        };
        self.advance();
        let name = self.ident("a policy name")?;
        if self.eat_punct('(') {
            self.punct(')')?;
        }
        let after = if self.peek_keyword("after") {
            self.advance();
            Some(self.ident("a policy name")?)
        } else {
            None
        };
        self.punct('{')?;
        let mut body = Vec::new();
        while !self.eat_punct('}') {
            body.push(self.instr()?);
            self.punct(';')?;
        }
        Ok(Policy {
            kind,
            name,
            after,
            body,
        })
    }

    fn instr(&mut self) -> Result<Instr, ParseError> {
        let first = self.ident("an instruction or `}`")?;
        let (actor, name) = if self.eat_punct(':') {
            (Some(first), self.ident("an instruction")?)
        } else {
            (None, first)
        };
        self.punct('(')?;
        let mut args = Vec::new();
        if !self.eat_punct(')') {
            args.push(self.arg()?);
            while self.eat_punct(',') {
                args.push(self.arg()?);
            }
            self.punct(')')?;
        }
        Ok(Instr { actor, name, args })
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        match self.peek() {
            Tok::Punct('{') => Ok(Arg::Set(self.set()?)),
            Tok::Ident(_) => Ok(Arg::Name(self.ident("an argument")?)),
            _ => Err(self.error("an argument")),
        }
    }

    fn check(&mut self) -> Result<Check, ParseError> {
        self.keyword("check")?;
        let c = if self.peek_keyword("executable") {
            self.advance();
            Check::Executable(self.ident("a policy name")?)
        } else if self.peek_keyword("compare") {
            self.advance();
            let old = self.ident("a policy name")?;
            let new = self.ident("a policy name")?;
            Check::Compare { old, new }
        } else {
            return Err(self.error("`executable` or `compare`"));
        };
        self.punct(';')?;
        Ok(c)
    }
}

/// Parses a scenario or trace file.
pub fn parse(src: &str) -> Result<Scenario, ParseError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0 }.scenario()
}
