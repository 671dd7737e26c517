//! Infix expressions: `+ - * /`, integer powers `^k`, parentheses, unary
//! minus and single-argument calls like `sqrt(3+alpha)`. Used by the DSL
//! and for proof claims.

use thiserror::Error;

use super::{Field, RatFunc, Rational};

/// How identifiers and calls are interpreted.
pub struct ExprContext<'a, S> {
    pub ident: &'a dyn Fn(&str) -> Option<S>,
    pub call: &'a dyn Fn(&str, S) -> Result<S, String>,
}

/// Parses `text` over any field.
pub fn parse_expr<S: Field>(text: &str, ctx: &ExprContext<'_, S>) -> Result<S, ExprError> {
    let mut p = ExprParser { src: text.as_bytes(), pos: 0, ctx };
    let v = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(v)
}

fn no_calls<S>(name: &str, _: S) -> Result<S, String> {
    Err(format!("unknown function '{name}'"))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct ExprError {
    /// Byte offset into the parsed text.
    pub offset: usize,
    pub message: String,
}

/// Parses `text`; identifiers are accepted when `allowed` says so.
pub fn parse_ratfunc(text: &str, allowed: &dyn Fn(&str) -> bool) -> Result<RatFunc, ExprError> {
    let ident = |name: &str| allowed(name).then(|| RatFunc::var(name));
    parse_expr(text, &ExprContext { ident: &ident, call: &no_calls })
}

/// Identifier characters after the first: letters, digits, `_` and `'`.
pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

struct ExprParser<'a, S> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a ExprContext<'a, S>,
}

impl<S: Field> ExprParser<'_, S> {
    fn error(&self, message: String) -> ExprError {
        ExprError {
            offset: self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<S, ExprError> {
        let mut acc = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if c == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<S, ExprError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                acc * rhs
            } else {
                acc.checked_div(&rhs).map_err(|_| ExprError {
                    offset: at,
                    message: "division by zero".into(),
                })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<S, ExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<S, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        let e: u32 = digits
            .parse()
            .map_err(|_| ExprError {
                offset: start,
                message: "expected a non-negative integer exponent".into(),
            })?;
        Ok((0..e).fold(S::one(), |acc, _| acc * base.clone()))
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && f(self.src[self.pos] as char) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<S, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let n: num_bigint::BigInt = digits.parse().expect("digits");
                Ok(S::from_rational(&Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name = self.take_while(is_ident_char);
                if self.peek() == Some(b'(') {
                    let arg = self.atom()?;
                    return (self.ctx.call)(&name, arg).map_err(|message| ExprError { offset: start, message });
                }
                (self.ctx.ident)(&name).ok_or_else(|| ExprError {
                    offset: start,
                    message: format!("unknown identifier '{name}'"),
                })
            }
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of expression".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Poly;

    fn any(_: &str) -> bool {
        true
    }

    #[test]
    fn parses_and_normalizes() {
        let v = parse_ratfunc("l2_2*(1 - (1+alpha')/(1+alpha))", &any).unwrap();
        let num = &Poly::var("l2_2") * &(&Poly::var("alpha") - &Poly::var("alpha'"));
        let den = &Poly::from_int(1) + &Poly::var("alpha");
        assert_eq!(v, RatFunc::new(num, den).unwrap());
        assert_eq!(parse_ratfunc("-2^3 + 1/2", &any).unwrap(), parse_ratfunc("-15/2", &any).unwrap());
    }

    #[test]
    fn reports_offsets() {
        let e = parse_ratfunc("1 + (a * ", &any).unwrap_err();
        assert_eq!(e.offset, 9);
        let e = parse_ratfunc("x / (y - y)", &any).unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse_ratfunc("beta + 1", &|s| s == "alpha").unwrap_err();
        assert_eq!(e.offset, 0);
    }
}
