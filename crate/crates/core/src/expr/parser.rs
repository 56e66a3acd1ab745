//! Tokenizer and Pratt parser for Hurst expressions.

use super::{BinOp, Expr, Func};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(BinOp),
    Minus,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number `{v}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(op) => format!("operator `{}`", op.symbol()),
            Tok::Minus => "operator `-`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Op(BinOp::Add)),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Op(BinOp::Mul)),
            b'/' => Some(Tok::Op(BinOp::Div)),
            b'^' => Some(Tok::Op(BinOp::Pow)),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, offset: start });
            i += 1;
            continue;
        }
        if c == b'<' || c == b'>' {
            let eq = bytes.get(i + 1) == Some(&b'=');
            let op = match (c, eq) {
                (b'<', false) => BinOp::Lt,
                (b'<', true) => BinOp::Le,
                (_, false) => BinOp::Gt,
                (_, true) => BinOp::Ge,
            };
            i += 1 + eq as usize;
            out.push(Token {
                tok: Tok::Op(op),
                offset: start,
            });
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 = text
                .parse()
                .map_err(|_| err(start, format!("malformed number `{text}`")))?;
            if !v.is_finite() {
                return Err(err(start, format!("number `{text}` out of range")));
            }
            out.push(Token {
                tok: Tok::Num(v),
                offset: start,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                offset: start,
            });
            continue;
        }
        let ch = src[start..].chars().next().unwrap();
        let op = match ch {
            '≤' => Some(BinOp::Le),
            '≥' => Some(BinOp::Ge),
            _ => None,
        };
        match op {
            Some(op) => {
                out.push(Token {
                    tok: Tok::Op(op),
                    offset: start,
                });
                i += ch.len_utf8();
            }
            None => return Err(err(start, format!("unexpected character `{ch}`"))),
        }
    }
    out.push(Token {
        tok: Tok::End,
        offset: src.len(),
    });
    Ok(out)
}

/// Binding powers: (left, right) for infix operators.
fn infix_power(op: BinOp) -> (u8, u8) {
    match op {
        BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => (1, 2),
        BinOp::Add | BinOp::Sub => (3, 4),
        BinOp::Mul | BinOp::Div => (5, 6),
        BinOp::Pow => (9, 8),
    }
}

const PREFIX_MINUS: u8 = 7;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let t = self.next();
        if t.tok == want {
            Ok(())
        } else {
            Err(err(t.offset, format!("expected {what}")))
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr> {
        let tok = self.next();
        let mut lhs = match tok.tok {
            Tok::Num(v) => Expr::Const(v),
            Tok::Minus => Expr::Neg(Box::new(self.expr(PREFIX_MINUS)?)),
            Tok::LParen => {
                let e = self.expr(0)?;
                self.expect(Tok::RParen, "`)`")?;
                e
            }
            Tok::Ident(name) => match name.as_str() {
                "t" => Expr::Var,
                "pi" => Expr::Pi,
                _ => match Func::from_name(&name) {
                    Some(f) => self.call(f)?,
                    None if self.peek().tok == Tok::LParen => {
                        return Err(err(tok.offset, format!("unknown function `{name}`")))
                    }
                    None => return Err(err(tok.offset, format!("unknown identifier `{name}`"))),
                },
            },
            Tok::End => return Err(err(tok.offset, "unexpected end of input")),
            other => return Err(err(tok.offset, format!("unexpected {}", other.describe()))),
        };
        loop {
            let op = match self.peek().tok {
                Tok::Op(op) => op,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            let (lbp, rbp) = infix_power(op);
            if lbp < min_bp {
                break;
            }
            self.next();
            let rhs = self.expr(rbp)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn call(&mut self, f: Func) -> Result<Expr> {
        self.expect(Tok::LParen, &format!("`(` after `{}`", f.name()))?;
        let mut args = Vec::with_capacity(f.arity());
        for i in 0..f.arity() {
            if i > 0 {
                let t = self.next();
                if t.tok != Tok::Comma {
                    return Err(err(
                        t.offset,
                        format!("`{}` takes {} arguments", f.name(), f.arity()),
                    ));
                }
            }
            args.push(self.expr(0)?);
        }
        let t = self.next();
        match t.tok {
            Tok::RParen => Ok(Expr::Call(f, args)),
            Tok::Comma => Err(err(
                t.offset,
                format!("`{}` takes {} argument(s)", f.name(), f.arity()),
            )),
            _ => Err(err(t.offset, "expected `)`")),
        }
    }
}

/// Parse an expression, reporting the byte offset of the first error.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        tokens: tokenize(src)?,
        pos: 0,
    };
    let e = p.expr(0)?;
    let t = p.next();
    if t.tok != Tok::End {
        return Err(err(t.offset, "unexpected trailing input"));
    }
    Ok(e)
}
