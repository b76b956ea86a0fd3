//! Recursive-descent parser for the textual notation.
//!
//! Separators are deliberately forgiving: stray or repeated commas and
//! semicolons between sections, rules and init entries are skipped, since
//! hand-written sources tend to carry them.

use super::ast::*;
use super::lexer::{lex, Spanned, Tok};
use super::ParseError;

pub(crate) fn parse_text(text: &str) -> Result<SourceAst, ParseError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.source()
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn peek2(&self) -> &Spanned {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos.min(self.toks.len() - 1)].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError::new(t.line, t.col, message)
    }

    fn expect(&mut self, want: &Tok, expected: &str) -> Result<Spanned, ParseError> {
        if &self.peek().tok == want {
            Ok(self.next())
        } else {
            Err(self.err_here(format!(
                "expected {expected}, found {}",
                self.peek().tok.describe()
            )))
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if &self.peek().tok == want {
            self.next();
            true
        } else {
            false
        }
    }

    fn at_ident(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == word)
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek().tok, Tok::Comma | Tok::Semi) {
            self.next();
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(String, u32, u32), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(s) => {
                self.next();
                Ok((s, t.line, t.col))
            }
            other => Err(ParseError::new(
                t.line,
                t.col,
                format!("expected {expected}, found {}", other.describe()),
            )),
        }
    }

    fn int(&mut self, expected: &str) -> Result<i64, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            other => Err(ParseError::new(
                t.line,
                t.col,
                format!("expected {expected}, found {}", other.describe()),
            )),
        }
    }

    /// True when the upcoming ident begins a top-level clause.
    fn at_keyword_clause(&self) -> bool {
        if let Tok::Ident(s) = &self.peek().tok {
            match s.as_str() {
                "server" | "agent" | "agents" | "servers" => {
                    matches!(self.peek2().tok, Tok::Colon)
                }
                "init" => matches!(self.peek2().tok, Tok::Arrow),
                _ => false,
            }
        } else {
            false
        }
    }

    fn source(&mut self) -> Result<SourceAst, ParseError> {
        let mut ast = SourceAst::default();
        let mut init_seen = false;
        loop {
            self.skip_separators();
            match &self.peek().tok {
                Tok::Eof => break,
                Tok::Ident(word) => match word.as_str() {
                    "server" => ast.templates.push(self.template(TemplateKind::Server)?),
                    "agent" => ast.templates.push(self.template(TemplateKind::Agent)?),
                    "agents" => ast.instances.push(self.instance_decl(PopulationKind::Agents)?),
                    "servers" => ast.instances.push(self.instance_decl(PopulationKind::Servers)?),
                    "init" => {
                        if init_seen {
                            return Err(self.err_here("duplicate init clause"));
                        }
                        init_seen = true;
                        ast.init = self.init_clause()?;
                    }
                    other => {
                        return Err(self.err_here(format!(
                            "unknown keyword `{other}` (expected server, agent, agents, servers or init)"
                        )))
                    }
                },
                other => {
                    return Err(self.err_here(format!(
                        "expected a clause keyword, found {}",
                        other.describe()
                    )))
                }
            }
        }
        if !init_seen {
            return Err(self.err_here("missing init clause"));
        }
        for (i, t) in ast.templates.iter().enumerate() {
            if ast.templates[..i].iter().any(|u| u.name == t.name) {
                return Err(ParseError::new(
                    t.line,
                    t.col,
                    format!("duplicate template name `{}`", t.name),
                ));
            }
        }
        Ok(ast)
    }

    fn template(&mut self, kind: TemplateKind) -> Result<TemplateAst, ParseError> {
        let (_, line, col) = self.ident("template keyword")?;
        self.expect(&Tok::Colon, "`:`")?;
        let name = self.template_name()?;
        let mut formals = Vec::new();
        if self.eat(&Tok::LParen) {
            formals = self.formal_groups()?;
            self.expect(&Tok::RParen, "`)`")?;
        }
        self.skip_separators();

        let mut services: Option<Vec<String>> = None;
        let mut states: Option<Vec<String>> = None;
        let mut rules: Option<Vec<RuleAst>> = None;
        loop {
            self.skip_separators();
            if self.at_ident("services") {
                if services.is_some() {
                    return Err(self.err_here("duplicate services section"));
                }
                self.next();
                services = Some(self.brace_name_list()?);
            } else if self.at_ident("states") {
                if states.is_some() {
                    return Err(self.err_here("duplicate states section"));
                }
                self.next();
                states = Some(self.brace_name_list()?);
            } else if self.at_ident("actions") {
                if rules.is_some() {
                    return Err(self.err_here("duplicate actions section"));
                }
                self.next();
                rules = Some(self.rules()?);
            } else if self.at_ident("end") {
                self.next();
                self.eat(&Tok::Semi);
                break;
            } else {
                return Err(self.err_here(format!(
                    "expected services, states, actions or end, found {}",
                    self.peek().tok.describe()
                )));
            }
        }

        Ok(TemplateAst {
            kind,
            name,
            formals,
            services: services.unwrap_or_default(),
            states: states.unwrap_or_default(),
            rules: rules.unwrap_or_default(),
            line,
            col,
        })
    }

    /// Template names are plain or carry a literal index (flat sources use
    /// instance names such as `sem[1]` as template names).
    fn template_name(&mut self) -> Result<String, ParseError> {
        let (base, line, col) = self.ident("template name")?;
        if self.eat(&Tok::LBracket) {
            let n = match self.peek().tok {
                Tok::Int(n) => {
                    self.next();
                    n
                }
                _ => {
                    return Err(ParseError::new(
                        line,
                        col,
                        "template name index must be an integer literal",
                    ))
                }
            };
            self.expect(&Tok::RBracket, "`]`")?;
            Ok(format!("{base}[{n}]"))
        } else {
            Ok(base)
        }
    }

    fn formal_groups(&mut self) -> Result<Vec<FormalGroup>, ParseError> {
        let mut groups = Vec::new();
        loop {
            let (word, line, col) = self.ident("`agents` or `servers`")?;
            let kind = match word.as_str() {
                "agents" => PopulationKind::Agents,
                "servers" => PopulationKind::Servers,
                other => {
                    return Err(ParseError::new(
                        line,
                        col,
                        format!("expected `agents` or `servers`, found `{other}`"),
                    ))
                }
            };
            self.eat(&Tok::Colon);
            let mut entries = Vec::new();
            loop {
                let (base, line, col) = self.ident("formal parameter name")?;
                let arity = if self.eat(&Tok::LBracket) {
                    let n = self.int("array arity")?;
                    self.expect(&Tok::RBracket, "`]`")?;
                    Some(n)
                } else {
                    None
                };
                entries.push(FormalDecl {
                    base,
                    arity,
                    line,
                    col,
                });
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            groups.push(FormalGroup { kind, entries });
            if !self.eat(&Tok::Semi) {
                break;
            }
        }
        Ok(groups)
    }

    fn brace_name_list(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect(&Tok::LBrace, "`{`")?;
        let mut names = Vec::new();
        loop {
            self.skip_separators();
            if self.eat(&Tok::RBrace) {
                break;
            }
            let (name, line, col) = self.ident("name")?;
            if names.contains(&name) {
                return Err(ParseError::new(
                    line,
                    col,
                    format!("duplicate name `{name}`"),
                ));
            }
            names.push(name);
        }
        Ok(names)
    }

    fn rules(&mut self) -> Result<Vec<RuleAst>, ParseError> {
        let mut rules = Vec::new();
        loop {
            self.skip_separators();
            if self.at_ident("end") || matches!(self.peek().tok, Tok::Eof) {
                break;
            }
            rules.push(self.rule()?);
        }
        Ok(rules)
    }

    fn rule(&mut self) -> Result<RuleAst, ParseError> {
        let at = self.peek().clone();
        let replicator = self.maybe_replicator()?;
        self.expect(&Tok::LBrace, "`{` opening an action's input set")?;
        let inputs = self.literal_list()?;
        self.expect(&Tok::Arrow, "`->`")?;
        self.expect(&Tok::LBrace, "`{` opening an action's output set")?;
        let outputs = self.literal_list()?;
        Ok(RuleAst {
            replicator,
            inputs,
            outputs,
            line: at.line,
            col: at.col,
        })
    }

    fn maybe_replicator(&mut self) -> Result<Option<Replicator>, ParseError> {
        if !matches!(self.peek().tok, Tok::Lt) {
            return Ok(None);
        }
        let at = self.next();
        let (var, ..) = self.ident("replicator variable")?;
        self.expect(&Tok::Assign, "`=`")?;
        let lo = self.int("range start")?;
        self.expect(&Tok::DotDot, "`..`")?;
        let hi = self.int("range end")?;
        self.expect(&Tok::Gt, "`>`")?;
        Ok(Some(Replicator {
            var,
            lo,
            hi,
            line: at.line,
            col: at.col,
        }))
    }

    /// Comma-separated dotted literals up to the closing `}`.
    fn literal_list(&mut self) -> Result<Vec<Literal>, ParseError> {
        let mut items = Vec::new();
        loop {
            self.skip_separators();
            if self.eat(&Tok::RBrace) {
                break;
            }
            items.push(self.literal()?);
        }
        Ok(items)
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let first = self.name()?;
        let (line, col) = (first.line, first.col);
        let mut parts = vec![first];
        while self.eat(&Tok::Dot) {
            parts.push(self.name()?);
        }
        if parts.len() < 2 || parts.len() > 3 {
            return Err(ParseError::new(
                line,
                col,
                "a literal has two (server.state) or three (agent.server.service) dotted parts",
            ));
        }
        Ok(Literal { parts })
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        let (base, line, col) = self.ident("name")?;
        let index = if self.eat(&Tok::LBracket) {
            let expr = self.index_expr()?;
            self.expect(&Tok::RBracket, "`]`")?;
            Some(expr)
        } else {
            None
        };
        Ok(Name {
            base,
            index,
            line,
            col,
        })
    }

    fn index_expr(&mut self) -> Result<IndexExpr, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.next();
                if self.eat(&Tok::Plus) {
                    let (v, ..) = self.ident("index variable")?;
                    Ok(IndexExpr::LitPlusVar(n, v))
                } else if self.eat(&Tok::Minus) {
                    let (v, ..) = self.ident("index variable")?;
                    Ok(IndexExpr::LitMinusVar(n, v))
                } else {
                    Ok(IndexExpr::Lit(n))
                }
            }
            Tok::Ident(v) => {
                self.next();
                Ok(IndexExpr::Var(v))
            }
            other => Err(self.err_here(format!(
                "expected an index expression, found {}",
                other.describe()
            ))),
        }
    }

    fn instance_decl(&mut self, kind: PopulationKind) -> Result<InstanceDecl, ParseError> {
        self.next(); // keyword
        self.expect(&Tok::Colon, "`:`")?;
        let mut entries = Vec::new();
        loop {
            self.skip_separators();
            if matches!(self.peek().tok, Tok::Eof) || self.at_keyword_clause() {
                break;
            }
            let (base, line, col) = self.ident("instance name")?;
            let arity = if self.eat(&Tok::LBracket) {
                let n = self.int("array size")?;
                self.expect(&Tok::RBracket, "`]`")?;
                Some(n)
            } else {
                None
            };
            entries.push(InstanceEntry {
                base,
                arity,
                line,
                col,
            });
        }
        if entries.is_empty() {
            return Err(self.err_here("empty instance declaration"));
        }
        Ok(InstanceDecl { kind, entries })
    }

    fn init_clause(&mut self) -> Result<Vec<InitEntry>, ParseError> {
        self.next(); // `init`
        self.expect(&Tok::Arrow, "`->`")?;
        self.expect(&Tok::LBrace, "`{`")?;
        let mut entries = Vec::new();
        loop {
            self.skip_separators();
            if self.eat(&Tok::RBrace) {
                break;
            }
            entries.push(self.init_entry()?);
        }
        self.eat(&Tok::Dot);
        Ok(entries)
    }

    fn init_entry(&mut self) -> Result<InitEntry, ParseError> {
        let at = self.peek().clone();
        let replicator = self.maybe_replicator()?;
        let head = self.name()?;
        let actuals = if self.eat(&Tok::LParen) {
            let mut actuals = Vec::new();
            loop {
                self.skip_separators();
                if self.eat(&Tok::RParen) {
                    break;
                }
                actuals.push(self.name()?);
            }
            Some(actuals)
        } else {
            None
        };
        let mut parts = vec![head];
        while self.eat(&Tok::Dot) {
            parts.push(self.name()?);
        }
        if parts.len() < 2 && actuals.is_none() || parts.len() > 3 {
            return Err(ParseError::new(
                at.line,
                at.col,
                "an init entry is a message (agent.server.service), an initial state (server.state) \
                 or an instance binding (instance(actuals).item)",
            ));
        }
        if actuals.is_some() && parts.len() != 2 {
            return Err(ParseError::new(
                at.line,
                at.col,
                "an instance binding names exactly one initial item, e.g. `sem[1](A[1]).up`",
            ));
        }
        Ok(InitEntry {
            replicator,
            parts,
            actuals,
            line: at.line,
            col: at.col,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_template() {
        let ast =
            parse_text("server: x services {s} states {q} end;\n servers: x;\n init -> { x.q }.")
                .unwrap();
        assert_eq!(ast.templates.len(), 1);
        assert_eq!(ast.templates[0].name, "x");
        assert!(ast.templates[0].rules.is_empty());
        assert_eq!(ast.init.len(), 1);
    }

    #[test]
    fn parses_replicated_rule() {
        let src = "server: sem (agents A[2]; servers proc[2]),\n\
                   services {wait}, states {up, down},\n\
                   actions <j=1..2>{A[j].sem.wait, sem.up} -> {A[j].proc[j].ok_wait, sem.down},\n\
                   end;\n\
                   agents: A[2]; servers: sem;\n\
                   init -> { <j=1..2>A[j].sem.wait, sem(A[1],A[2],proc[1],proc[2]).up }.";
        let ast = parse_text(src).unwrap();
        let t = &ast.templates[0];
        assert_eq!(t.formals.len(), 2);
        assert_eq!(t.formals[0].entries[0].arity, Some(2));
        assert_eq!(t.rules.len(), 1);
        assert!(t.rules[0].replicator.is_some());
        assert_eq!(t.rules[0].inputs.len(), 2);
        let init = &ast.init;
        assert!(init[0].replicator.is_some());
        assert!(init[1].actuals.is_some());
    }

    #[test]
    fn tolerates_redundant_separators() {
        let src = "servers: s;;\n agents: A,;\n init -> { A.s.go,; s.q,, }.";
        let ast = parse_text(src).unwrap();
        assert_eq!(ast.instances.len(), 2);
        assert_eq!(ast.init.len(), 2);
    }

    #[test]
    fn error_carries_position() {
        let err = parse_text("server: x\n  bogus {s}\nend;").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn unknown_keyword_rejected() {
        let err = parse_text("module: x end;").unwrap_err();
        assert!(err.to_string().contains("unknown keyword"));
    }

    #[test]
    fn duplicate_template_rejected() {
        let err = parse_text("server: x end; server: x end; init -> { x.q }.").unwrap_err();
        assert!(err.to_string().contains("duplicate template name"));
    }

    #[test]
    fn missing_init_rejected() {
        let err = parse_text("server: x end;").unwrap_err();
        assert!(err.to_string().contains("missing init clause"));
    }
}
