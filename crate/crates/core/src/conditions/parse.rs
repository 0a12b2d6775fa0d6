use alloc::format;
use alloc::string::{String, ToString};

use super::{Condition, Literal, Op, Term};
use crate::error::{Error, Result};

/// Parses `true` or `literal (& literal)*` where a literal is `term (=|!=) term`
/// and a term is `0`, `1` or `v<k>` with `k >= 1`. Whitespace between tokens
/// is ignored.
pub fn parse_condition(text: &str) -> Result<Condition> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    if p.rest().starts_with("true") {
        p.pos += 4;
        p.skip_ws();
        return if p.at_end() {
            Ok(Condition::top())
        } else {
            Err(p.error("unexpected input after `true`"))
        };
    }
    let mut cond = Condition::top();
    loop {
        cond.push(p.literal()?);
        p.skip_ws();
        if p.at_end() {
            return Ok(cond);
        }
        p.expect("&")?;
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn literal(&mut self) -> Result<Literal> {
        let lhs = self.term()?;
        self.skip_ws();
        let op = if self.rest().starts_with("!=") {
            self.pos += 2;
            Op::Neq
        } else if self.rest().starts_with('=') {
            self.pos += 1;
            Op::Eq
        } else {
            return Err(self.error("expected `=` or `!=`"));
        };
        let rhs = self.term()?;
        Ok(Literal::new(lhs, op, rhs))
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        let start = self.pos;
        match self.rest().chars().next() {
            Some('0') => {
                self.pos += 1;
                Ok(Term::ZERO)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Term::ONE)
            }
            Some('v') => {
                self.pos += 1;
                let digits = self
                    .rest()
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(self.rest().len());
                if digits == 0 {
                    return Err(self.error("expected a variable index after `v`"));
                }
                let text = &self.rest()[..digits];
                let index: usize = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("variable index `{text}` out of range"),
                })?;
                if index == 0 {
                    return Err(Error::Syntax {
                        offset: start,
                        message: "variable indices start at 1".to_string(),
                    });
                }
                self.pos += digits;
                Ok(Term::Var(index))
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`, expected a term"))),
            None => Err(self.error("unexpected end of input, expected a term")),
        }
    }
}
