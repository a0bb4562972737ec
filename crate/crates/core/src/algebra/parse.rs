//! Text grammar shared by expressions, forms, multivectors and operators.
//!
//! ```text
//! sum    := wedge (('+' | '-') wedge)*
//! wedge  := term ('/\' term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | ident | ident '(' sum (',' sum)* ')' | '(' sum ')'
//! ident  := '@'? [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! The parser only builds an [`Ast`]; each consumer decides which node kinds
//! it accepts (`d(x0)` and `/\` for forms, `@x0` for multivectors, `d2(x0)`
//! for operators).

use std::sync::Arc;

use num_bigint::BigInt;

use super::context::Context;
use super::expr::RatExpr;
use super::poly::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Num(Scalar),
    Sym(String, usize),
    Call(String, Vec<Ast>, usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i32),
    Wedge(Box<Ast>, Box<Ast>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    Wedge,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((Tok::Num(n), start));
        } else if c.is_ascii_alphabetic() || c == '@' {
            let start = i;
            i += 1;
            if c == '@' && !(i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic()) {
                return Err(Error::Parse {
                    pos: start,
                    msg: "`@` must be followed by a coordinate name".into(),
                });
            }
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if c == '/' && i + 1 < bytes.len() && bytes[i + 1] == b'\\' {
            out.push((Tok::Wedge, i));
            i += 2;
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == &Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn sum(&mut self) -> Result<Ast> {
        let mut lhs = self.wedge()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.wedge()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.wedge()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn wedge(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        while self.peek() == &Tok::Wedge {
            self.bump();
            lhs = Ast::Wedge(Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Ast::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let neg = if self.peek() == &Tok::Op('-') {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Tok::Num(n) => {
                let e: i32 = n.try_into().map_err(|_| Error::Parse {
                    pos: self.pos(),
                    msg: "exponent too large".into(),
                })?;
                Ok(Ast::Pow(Box::new(base), if neg { -e } else { e }))
            }
            _ => self.error("expected an integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(Ast::Num(Scalar::from_integer(n))),
            Tok::Ident(name) => {
                if self.peek() == &Tok::Op('(') {
                    self.bump();
                    let mut args = vec![self.sum()?];
                    while self.peek() == &Tok::Op(',') {
                        self.bump();
                        args.push(self.sum()?);
                    }
                    self.expect(')')?;
                    Ok(Ast::Call(name, args, pos))
                } else {
                    Ok(Ast::Sym(name, pos))
                }
            }
            Tok::Op('(') => {
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::End => Err(Error::Parse {
                pos,
                msg: "unexpected end of input".into(),
            }),
            t => Err(Error::Parse {
                pos,
                msg: format!("unexpected token {t:?}"),
            }),
        }
    }
}

pub fn parse_ast(text: &str) -> Result<Ast> {
    let mut lx = Lexer {
        toks: lex(text)?,
        at: 0,
    };
    let ast = lx.sum()?;
    if lx.peek() != &Tok::End {
        return lx.error("trailing input");
    }
    Ok(ast)
}

/// Parse a scalar expression in `ctx`.
pub fn parse_expr(text: &str, ctx: &Arc<Context>) -> Result<RatExpr> {
    eval_scalar(&parse_ast(text)?, ctx)
}

/// Evaluate an AST that contains no calls, wedges or `@` symbols.
pub fn eval_scalar(ast: &Ast, ctx: &Arc<Context>) -> Result<RatExpr> {
    eval_with(ast, ctx, &mut |node| match node {
        Ast::Call(name, _, pos) => Err(Error::Parse {
            pos: *pos,
            msg: format!("`{name}(...)` is not allowed in a scalar expression"),
        }),
        _ => Err(Error::Parse {
            pos: 0,
            msg: "wedge is not allowed in a scalar expression".into(),
        }),
    })
}

/// Evaluate scalar structure, delegating calls and wedges to `leaf`.
pub fn eval_with(ast: &Ast, ctx: &Arc<Context>, leaf: &mut dyn FnMut(&Ast) -> Result<RatExpr>) -> Result<RatExpr> {
    Ok(match ast {
        Ast::Num(n) => RatExpr::from_scalar(n.clone(), ctx),
        Ast::Sym(name, pos) => {
            if name.starts_with('@') {
                return Err(Error::Parse {
                    pos: *pos,
                    msg: format!("`{name}` is not allowed in a scalar expression"),
                });
            }
            RatExpr::var(ctx, name)?
        }
        Ast::Neg(a) => -eval_with(a, ctx, leaf)?,
        Ast::Add(a, b) => eval_with(a, ctx, leaf)?.try_add(&eval_with(b, ctx, leaf)?)?,
        Ast::Sub(a, b) => eval_with(a, ctx, leaf)?.try_sub(&eval_with(b, ctx, leaf)?)?,
        Ast::Mul(a, b) => eval_with(a, ctx, leaf)?.try_mul(&eval_with(b, ctx, leaf)?)?,
        Ast::Div(a, b) => eval_with(a, ctx, leaf)?.checked_div(&eval_with(b, ctx, leaf)?)?,
        Ast::Pow(a, e) => eval_with(a, ctx, leaf)?.pow(*e)?,
        Ast::Call(..) | Ast::Wedge(..) => leaf(ast)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_unary_minus() {
        let ctx = Context::free(&["x", "y"], &[]);
        let e = parse_expr("-x^2 + 2*x*y/4 - (y)", &ctx).unwrap();
        assert_eq!(e.to_string(), "-x^2 + 1/2*x*y - y");
    }

    #[test]
    fn rationals_and_negative_powers() {
        let ctx = Context::free(&["m"], &[]);
        assert_eq!(parse_expr("3/4", &ctx).unwrap().to_string(), "3/4");
        assert_eq!(parse_expr("m^-2", &ctx).unwrap().to_string(), "1/m^2");
    }

    #[test]
    fn reports_position() {
        let ctx = Context::free(&["x"], &[]);
        match parse_expr("x + $", &ctx) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("x +", &ctx), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("z", &ctx), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn form_syntax_parses_to_ast() {
        let ast = parse_ast("x*d(y) /\\ d(x) + @x").unwrap();
        assert!(matches!(ast, Ast::Add(..)));
    }

    #[test]
    fn display_round_trips() {
        let ctx = Context::free(&["x0", "x1", "p0", "p1", "m"], &[]);
        for text in ["(x0*p1 - x1*p0)/m^2", "-1/3*x0^2*m + 7", "x0/(x1*m^2 + 1)", "0"] {
            let e = parse_expr(text, &ctx).unwrap();
            let again = parse_expr(&e.to_string(), &ctx).unwrap();
            assert_eq!(e, again, "{text}");
        }
    }
}
