//! Unresolved syntax trees. Names are kept as written; ids are assigned by
//! [`super::resolve`].

use serde::Serialize;

/// Entity sorts. Each sort has its own id space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sort {
    Person,
    Content,
    List,
}

impl Sort {
    pub fn keyword(self) -> &'static str {
        match self {
            Sort::Person => "person",
            Sort::Content => "content",
            Sort::List => "list",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decl {
    pub sort: Sort,
    pub names: Vec<String>,
}

/// `members l = {a, b};` fixes the membership of list `l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembersFact {
    pub list: String,
    pub persons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SetExpr {
    /// A list, or a person standing for its singleton.
    Name(String),
    Union(Box<SetExpr>, Box<SetExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Assumption {
    Subset(SetExpr, SetExpr),
    Equal(SetExpr, SetExpr),
    NotSubset(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Arg {
    Name(String),
    Set(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instr {
    pub actor: Option<String>,
    pub name: String,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Policy,
    Trace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Policy {
    pub kind: BlockKind,
    pub name: String,
    /// Policy whose effects form the starting context, see
    /// [`crate::vcgen`].
    pub after: Option<String>,
    pub body: Vec<Instr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Check {
    Executable(String),
    Compare { old: String, new: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Scenario {
    pub universe: Option<usize>,
    pub decls: Vec<Decl>,
    pub members: Vec<MembersFact>,
    pub assumptions: Vec<Assumption>,
    pub policies: Vec<Policy>,
    pub checks: Vec<Check>,
}

impl Scenario {
    pub fn policy(&self, name: &str) -> Option<&Policy> {
        self.policies.iter().find(|p| p.name == name)
    }
}
