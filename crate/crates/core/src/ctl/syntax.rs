//! Textual formula syntax for the command line.
//!
//! ```text
//! formula  := or ('->' formula)?
//! or       := and (('|' | '||') and)*
//! and      := unary (('&' | '&&') unary)*
//! unary    := '!' unary
//!           | ('EF'|'AF'|'EG'|'AG'|'EX'|'AX') unary
//!           | 'E' '[' formula 'U' formula ']'
//!           | 'A' '[' formula 'U' formula ']'
//!           | atom | '(' formula ')'
//! atom     := 'true' | 'false' | 'terminal'
//!           | ('pending'|'enabled') '(' ('agent'|'server') ':' name ')'
//! ```

use thiserror::Error;

use super::Formula;
use crate::model::SystemSpec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaParseError {
    #[error("formula syntax error at offset {at}: {message}")]
    Syntax { at: usize, message: String },
    #[error("unknown agent `{0}` in formula")]
    UnknownAgent(String),
    #[error("unknown server `{0}` in formula")]
    UnknownServer(String),
}

pub fn parse_formula(text: &str, spec: &SystemSpec) -> Result<Formula, FormulaParseError> {
    let mut p = P {
        text: text.as_bytes(),
        pos: 0,
        spec,
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

struct P<'a> {
    text: &'a [u8],
    pos: usize,
    spec: &'a SystemSpec,
}

impl<'a> P<'a> {
    fn err(&self, message: impl Into<String>) -> FormulaParseError {
        FormulaParseError::Syntax {
            at: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn peek_word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        while end < self.text.len()
            && (self.text[end].is_ascii_alphanumeric() || self.text[end] == b'_')
        {
            end += 1;
        }
        if end == start {
            None
        } else {
            Some(std::str::from_utf8(&self.text[start..end]).unwrap())
        }
    }

    fn take_word(&mut self) -> Option<&'a str> {
        let w = self.peek_word()?;
        self.pos += w.len();
        Some(w)
    }

    fn formula(&mut self) -> Result<Formula, FormulaParseError> {
        let lhs = self.or_expr()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<Formula, FormulaParseError> {
        let mut lhs = self.and_expr()?;
        loop {
            self.skip_ws();
            if self.eat("||") || self.eat("|") {
                lhs = lhs.or(self.and_expr()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn and_expr(&mut self) -> Result<Formula, FormulaParseError> {
        let mut lhs = self.unary()?;
        loop {
            self.skip_ws();
            if self.eat("&&") || self.eat("&") {
                lhs = lhs.and(self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Formula, FormulaParseError> {
        self.skip_ws();
        if self.eat("!") {
            return Ok(self.unary()?.not());
        }
        match self.peek_word() {
            Some("EF") => {
                self.take_word();
                Ok(self.unary()?.ef())
            }
            Some("AF") => {
                self.take_word();
                Ok(self.unary()?.af())
            }
            Some("EG") => {
                self.take_word();
                Ok(self.unary()?.eg())
            }
            Some("AG") => {
                self.take_word();
                Ok(self.unary()?.ag())
            }
            Some("EX") => {
                self.take_word();
                Ok(self.unary()?.ex())
            }
            Some("AX") => {
                self.take_word();
                Ok(self.unary()?.ax())
            }
            Some("E") => {
                self.take_word();
                self.until_tail(true)
            }
            Some("A") => {
                self.take_word();
                self.until_tail(false)
            }
            _ => self.primary(),
        }
    }

    fn until_tail(&mut self, existential: bool) -> Result<Formula, FormulaParseError> {
        if !self.eat("[") {
            return Err(self.err("expected `[` after path quantifier"));
        }
        let lhs = self.formula()?;
        match self.take_word() {
            Some("U") => {}
            _ => return Err(self.err("expected `U` in until formula")),
        }
        let rhs = self.formula()?;
        if !self.eat("]") {
            return Err(self.err("expected `]` closing until formula"));
        }
        Ok(if existential {
            lhs.eu(rhs)
        } else {
            lhs.au(rhs)
        })
    }

    fn primary(&mut self) -> Result<Formula, FormulaParseError> {
        self.skip_ws();
        if self.eat("(") {
            let f = self.formula()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(f);
        }
        match self.take_word() {
            Some("true") => Ok(Formula::True),
            Some("false") => Ok(Formula::False),
            Some("terminal") => Ok(Formula::Terminal),
            Some(kind @ ("pending" | "enabled")) => self.atom_tail(kind),
            Some(other) => Err(self.err(format!("unexpected word `{other}`"))),
            None => Err(self.err("expected a formula")),
        }
    }

    fn atom_tail(&mut self, kind: &str) -> Result<Formula, FormulaParseError> {
        if !self.eat("(") {
            return Err(self.err(format!("expected `(` after `{kind}`")));
        }
        let target = match self.take_word() {
            Some(w @ ("agent" | "server")) => w,
            _ => return Err(self.err("expected `agent` or `server`")),
        };
        if !self.eat(":") {
            return Err(self.err("expected `:`"));
        }
        let name = self.instance_name()?;
        if !self.eat(")") {
            return Err(self.err("expected `)` closing atom"));
        }
        match (kind, target) {
            ("pending", "agent") => {
                let a = self
                    .spec
                    .agent_by_name(&name)
                    .ok_or(FormulaParseError::UnknownAgent(name))?;
                Ok(Formula::PendingAgent(a))
            }
            ("pending", "server") => {
                let s = self
                    .spec
                    .server_by_name(&name)
                    .ok_or(FormulaParseError::UnknownServer(name))?;
                Ok(Formula::PendingAtServer(s))
            }
            ("enabled", "agent") => {
                let a = self
                    .spec
                    .agent_by_name(&name)
                    .ok_or(FormulaParseError::UnknownAgent(name))?;
                Ok(Formula::EnabledAgentAction(a))
            }
            _ => {
                let s = self
                    .spec
                    .server_by_name(&name)
                    .ok_or(FormulaParseError::UnknownServer(name))?;
                Ok(Formula::EnabledServerAction(s))
            }
        }
    }

    fn instance_name(&mut self) -> Result<String, FormulaParseError> {
        let base = self
            .take_word()
            .ok_or_else(|| self.err("expected an instance name"))?
            .to_string();
        self.skip_ws();
        if self.pos < self.text.len() && self.text[self.pos] == b'[' {
            self.pos += 1;
            let start = self.pos;
            while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos || self.pos >= self.text.len() || self.text[self.pos] != b']' {
                return Err(self.err("expected `[<integer>]` index"));
            }
            let idx = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
            self.pos += 1;
            Ok(format!("{base}[{idx}]"))
        } else {
            Ok(base)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SpecBuilder;

    fn spec() -> SystemSpec {
        let mut b = SpecBuilder::new();
        b.add_server("sem[1]", &["up"], &["wait"], "up").unwrap();
        b.add_agent("A[1]", "sem[1]", "wait").unwrap();
        b.finish().unwrap()
    }

    #[test]
    fn parses_detector_shapes() {
        let spec = spec();
        let f = parse_formula("EF (pending(agent:A[1]) & AG !enabled(agent:A[1]))", &spec).unwrap();
        let a = spec.agent_by_name("A[1]").unwrap();
        assert_eq!(
            f,
            Formula::PendingAgent(a)
                .and(Formula::EnabledAgentAction(a).not().ag())
                .ef()
        );
    }

    #[test]
    fn parses_until_and_boolean_forms() {
        let spec = spec();
        let f = parse_formula("E[true U terminal] | A[true U false]", &spec).unwrap();
        assert_eq!(
            f,
            Formula::True
                .eu(Formula::Terminal)
                .or(Formula::True.au(Formula::False))
        );
        let g = parse_formula("pending(server:sem[1]) -> EX true", &spec).unwrap();
        assert!(matches!(g, Formula::Implies(..)));
    }

    #[test]
    fn unknown_identifier_is_reported() {
        let spec = spec();
        assert_eq!(
            parse_formula("pending(agent:nobody)", &spec),
            Err(FormulaParseError::UnknownAgent("nobody".into()))
        );
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let spec = spec();
        let err = parse_formula("EF (", &spec).unwrap_err();
        assert!(matches!(err, FormulaParseError::Syntax { .. }));
    }
}
