//! A ground evaluator for the QF_BV fragment the emitter produces.
//!
//! Declared constants get their values from a caller-supplied model, from
//! a pinning definition `(define-fun q () Bool (= x rhs))`, or from a
//! defining assertion `(assert (= x rhs))`. The script is satisfied by that
//! model when every assertion evaluates to true.

use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

pub fn parse_all(src: &str) -> Result<Vec<Sexp>, String> {
    let mut tokens = Vec::new();
    for line in src.lines() {
        let line = line.split(';').next().unwrap_or("");
        let spaced = line.replace('(', " ( ").replace(')', " ) ");
        tokens.extend(spaced.split_whitespace().map(String::from));
    }
    let mut pos = 0;
    let mut out = Vec::new();
    while pos < tokens.len() {
        out.push(parse_one(&tokens, &mut pos)?);
    }
    Ok(out)
}

fn parse_one(tokens: &[String], pos: &mut usize) -> Result<Sexp, String> {
    let tok = tokens.get(*pos).ok_or("unexpected end of input")?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(parse_one(tokens, pos)?),
                    None => return Err("unbalanced parenthesis".into()),
                }
            }
        }
        ")" => Err("unexpected `)`".into()),
        atom => Ok(Sexp::Atom(atom.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    /// Least significant bit first.
    Bv(Vec<bool>),
}

impl Value {
    pub fn as_bool(&self) -> Result<bool, String> {
        match self {
            Value::Bool(b) => Ok(*b),
            Value::Bv(_) => Err("expected a Boolean".into()),
        }
    }

    pub fn as_bv(&self) -> Result<&[bool], String> {
        match self {
            Value::Bv(b) => Ok(b),
            Value::Bool(_) => Err("expected a bit-vector".into()),
        }
    }

    pub fn from_mask(mask: u64, width: usize) -> Value {
        Value::Bv((0..width).map(|i| mask >> i & 1 == 1).collect())
    }
}

/// Raised when a value depends on a constant the model does not fix yet.
const UNASSIGNED: &str = "unassigned constant";

struct Func {
    params: Vec<String>,
    body: Sexp,
}

#[derive(Default)]
pub struct Evaluator {
    funcs: HashMap<String, Func>,
    declared: HashMap<String, ()>,
    model: HashMap<String, Value>,
    asserts: Vec<Sexp>,
    check_sat: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub satisfied: bool,
    pub model: HashMap<String, Value>,
    /// Indices of assertions that evaluated to false.
    pub false_asserts: Vec<usize>,
}

fn atom(x: &Sexp) -> Result<&str, String> {
    match x {
        Sexp::Atom(a) => Ok(a),
        Sexp::List(_) => Err(format!("expected an atom, found {x:?}")),
    }
}

fn literal(tok: &str) -> Option<Value> {
    if let Some(hex) = tok.strip_prefix("#x") {
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for ch in hex.chars().rev() {
            let v = ch.to_digit(16)?;
            bits.extend((0..4).map(|i| v >> i & 1 == 1));
        }
        return Some(Value::Bv(bits));
    }
    if let Some(bin) = tok.strip_prefix("#b") {
        return Some(Value::Bv(bin.chars().rev().map(|c| c == '1').collect()));
    }
    match tok {
        "true" => Some(Value::Bool(true)),
        "false" => Some(Value::Bool(false)),
        _ => None,
    }
}

fn bitwise(args: &[Value], f: impl Fn(bool, bool) -> bool) -> Result<Value, String> {
    let mut acc = args[0].as_bv()?.to_vec();
    for a in &args[1..] {
        let b = a.as_bv()?;
        if b.len() != acc.len() {
            return Err(format!("width mismatch {} vs {}", acc.len(), b.len()));
        }
        for (x, y) in acc.iter_mut().zip(b) {
            *x = f(*x, *y);
        }
    }
    Ok(Value::Bv(acc))
}

impl Evaluator {
    pub fn new(model: HashMap<String, Value>) -> Self {
        Evaluator {
            model,
            ..Evaluator::default()
        }
    }

    pub fn run(src: &str, model: HashMap<String, Value>) -> Result<Outcome, String> {
        let mut ev = Evaluator::new(model);
        for cmd in parse_all(src)? {
            ev.command(&cmd)?;
        }
        ev.finish()
    }

    fn command(&mut self, cmd: &Sexp) -> Result<(), String> {
        let Sexp::List(items) = cmd else {
            return Err(format!("stray atom {cmd:?}"));
        };
        let head = atom(&items[0])?;
        match head {
            "set-logic" | "define-sort" | "set-option" => Ok(()),
            "check-sat" => {
                self.check_sat = true;
                Ok(())
            }
            "declare-fun" | "declare-const" => {
                let name = atom(&items[1])?.to_string();
                self.declared.insert(name, ());
                Ok(())
            }
            "define-fun" => {
                let name = atom(&items[1])?.to_string();
                let Sexp::List(params) = &items[2] else {
                    return Err("malformed parameter list".into());
                };
                let params = params
                    .iter()
                    .map(|p| match p {
                        Sexp::List(pair) => atom(&pair[0]).map(String::from),
                        _ => Err("malformed parameter".into()),
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                let body = items[4].clone();
                if params.is_empty() {
                    self.pin(&body)?;
                }
                self.funcs.insert(name, Func { params, body });
                Ok(())
            }
            "assert" => {
                self.asserts.push(items[1].clone());
                Ok(())
            }
            other => Err(format!("unsupported command `{other}`")),
        }
    }

    /// `(= x rhs)` with `x` declared and not yet fixed fixes `x := rhs`.
    fn pin(&mut self, body: &Sexp) -> Result<bool, String> {
        let Sexp::List(items) = body else {
            return Ok(false);
        };
        if items.len() != 3 || items[0] != Sexp::Atom("=".into()) {
            return Ok(false);
        }
        let Sexp::Atom(x) = &items[1] else {
            return Ok(false);
        };
        if !self.declared.contains_key(x) || self.model.contains_key(x) {
            return Ok(false);
        }
        match self.eval(&items[2], &HashMap::new()) {
            Ok(v) => {
                self.model.insert(x.clone(), v);
                Ok(true)
            }
            Err(e) if e == UNASSIGNED => Ok(false),
            Err(e) => Err(e),
        }
    }

    fn finish(mut self) -> Result<Outcome, String> {
        if !self.check_sat {
            return Err("no check-sat".into());
        }
        // Defining assertions may depend on each other; settle them to a fixpoint.
        loop {
            let mut progress = false;
            for a in self.asserts.clone() {
                progress |= self.pin(&a)?;
            }
            if !progress {
                break;
            }
        }
        let mut false_asserts = Vec::new();
        for (i, a) in self.asserts.iter().enumerate() {
            if !self.eval(a, &HashMap::new())?.as_bool()? {
                false_asserts.push(i);
            }
        }
        Ok(Outcome {
            satisfied: false_asserts.is_empty(),
            model: self.model,
            false_asserts,
        })
    }

    pub fn eval(&self, x: &Sexp, scope: &HashMap<String, Value>) -> Result<Value, String> {
        match x {
            Sexp::Atom(a) => self.symbol(a, scope),
            Sexp::List(items) => {
                if let Sexp::List(head) = &items[0] {
                    // ((_ extract hi lo) x)
                    if head.len() == 4 && atom(&head[1])? == "extract" {
                        let hi: usize = atom(&head[2])?.parse().map_err(|_| "bad index")?;
                        let lo: usize = atom(&head[3])?.parse().map_err(|_| "bad index")?;
                        let v = self.eval(&items[1], scope)?;
                        let bits = v.as_bv()?;
                        if hi >= bits.len() || lo > hi {
                            return Err(format!("extract {hi} {lo} out of width {}", bits.len()));
                        }
                        return Ok(Value::Bv(bits[lo..=hi].to_vec()));
                    }
                    return Err(format!("unsupported indexed head {head:?}"));
                }
                let head = atom(&items[0])?;
                let args = &items[1..];
                match head {
                    "ite" => {
                        let c = self.eval(&args[0], scope)?.as_bool()?;
                        self.eval(&args[if c { 1 } else { 2 }], scope)
                    }
                    "and" => {
                        for a in args {
                            if !self.eval(a, scope)?.as_bool()? {
                                return Ok(Value::Bool(false));
                            }
                        }
                        Ok(Value::Bool(true))
                    }
                    "or" => {
                        for a in args {
                            if self.eval(a, scope)?.as_bool()? {
                                return Ok(Value::Bool(true));
                            }
                        }
                        Ok(Value::Bool(false))
                    }
                    "=>" => {
                        if !self.eval(&args[0], scope)?.as_bool()? {
                            return Ok(Value::Bool(true));
                        }
                        self.eval(&args[1], scope)
                    }
                    _ => {
                        let vals = args
                            .iter()
                            .map(|a| self.eval(a, scope))
                            .collect::<Result<Vec<_>, _>>()?;
                        self.apply(head, vals)
                    }
                }
            }
        }
    }

    fn symbol(&self, a: &str, scope: &HashMap<String, Value>) -> Result<Value, String> {
        if let Some(v) = scope.get(a) {
            return Ok(v.clone());
        }
        if let Some(v) = literal(a) {
            return Ok(v);
        }
        if let Some(v) = self.model.get(a) {
            return Ok(v.clone());
        }
        if let Some(f) = self.funcs.get(a) {
            if f.params.is_empty() {
                return self.eval(&f.body, &HashMap::new());
            }
        }
        if self.declared.contains_key(a) {
            return Err(UNASSIGNED.into());
        }
        Err(format!("unknown symbol `{a}`"))
    }

    fn apply(&self, head: &str, vals: Vec<Value>) -> Result<Value, String> {
        match head {
            "not" => Ok(Value::Bool(!vals[0].as_bool()?)),
            "=" => Ok(Value::Bool(vals.windows(2).all(|w| w[0] == w[1]))),
            "distinct" => Ok(Value::Bool(vals[0] != vals[1])),
            "bvand" => bitwise(&vals, |x, y| x && y),
            "bvor" => bitwise(&vals, |x, y| x || y),
            "bvxor" => bitwise(&vals, |x, y| x != y),
            "bvnot" => Ok(Value::Bv(vals[0].as_bv()?.iter().map(|b| !b).collect())),
            "concat" => {
                let mut bits = vals[1].as_bv()?.to_vec();
                bits.extend_from_slice(vals[0].as_bv()?);
                Ok(Value::Bv(bits))
            }
            _ => {
                let f = self
                    .funcs
                    .get(head)
                    .ok_or_else(|| format!("unknown function `{head}`"))?;
                if f.params.len() != vals.len() {
                    return Err(format!(
                        "`{head}` takes {} arguments, got {}",
                        f.params.len(),
                        vals.len()
                    ));
                }
                let scope: HashMap<String, Value> = f.params.iter().cloned().zip(vals).collect();
                self.eval(&f.body, &scope)
            }
        }
    }
}
