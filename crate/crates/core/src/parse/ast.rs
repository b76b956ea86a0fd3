//! Syntax tree produced by the parser, before template expansion.

/// An index expression inside `[ ]`: a literal, a replicator variable, or
/// `literal + var` / `literal - var` (enough for references like `sem[3-j]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexExpr {
    Lit(i64),
    Var(String),
    LitPlusVar(i64, String),
    LitMinusVar(i64, String),
}

impl IndexExpr {
    pub fn render(&self) -> String {
        match self {
            IndexExpr::Lit(n) => n.to_string(),
            IndexExpr::Var(v) => v.clone(),
            IndexExpr::LitPlusVar(n, v) => format!("{n}+{v}"),
            IndexExpr::LitMinusVar(n, v) => format!("{n}-{v}"),
        }
    }
}

/// A possibly indexed name occurrence, e.g. `sem`, `sem[1]`, `sem[3-j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub base: String,
    pub index: Option<IndexExpr>,
    pub line: u32,
    pub col: u32,
}

impl Name {
    pub fn render(&self) -> String {
        match &self.index {
            None => self.base.clone(),
            Some(i) => format!("{}[{}]", self.base, i.render()),
        }
    }
}

/// A dotted literal: two parts denote a server state, three parts a message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub parts: Vec<Name>,
}

/// `<j=lo..hi>` prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replicator {
    pub var: String,
    pub lo: i64,
    pub hi: i64,
    pub line: u32,
    pub col: u32,
}

/// One action rule `{in, in} -> {out, ...}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleAst {
    pub replicator: Option<Replicator>,
    pub inputs: Vec<Literal>,
    pub outputs: Vec<Literal>,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PopulationKind {
    Agents,
    Servers,
}

/// A formal parameter: scalar (`A`) or array (`sem[2]`, slots 1..=2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalDecl {
    pub base: String,
    pub arity: Option<i64>,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalGroup {
    pub kind: PopulationKind,
    pub entries: Vec<FormalDecl>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateKind {
    Server,
    Agent,
}

/// A `server: ... end;` or `agent: ... end;` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateAst {
    pub kind: TemplateKind,
    /// Full name as written; flat sources may use indexed names (`sem[1]`).
    pub name: String,
    pub formals: Vec<FormalGroup>,
    pub services: Vec<String>,
    pub states: Vec<String>,
    pub rules: Vec<RuleAst>,
    pub line: u32,
    pub col: u32,
}

/// One entry of an `agents:`/`servers:` instance declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceEntry {
    pub base: String,
    pub arity: Option<i64>,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDecl {
    pub kind: PopulationKind,
    pub entries: Vec<InstanceEntry>,
}

/// One entry of the `init -> { ... }.` clause. The head name may carry an
/// actual-parameter list, in which case the entry binds an instance and
/// names its initial state (servers) or initial service (agents).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitEntry {
    pub replicator: Option<Replicator>,
    pub parts: Vec<Name>,
    pub actuals: Option<Vec<Name>>,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceAst {
    pub templates: Vec<TemplateAst>,
    pub instances: Vec<InstanceDecl>,
    pub init: Vec<InitEntry>,
}
