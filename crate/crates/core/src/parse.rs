//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr      = term , { ( "+" | "-" ) , term } ;
//! term      = unary , { ( "*" | "/" ) , unary } ;
//! unary     = "-" , unary | power ;
//! power     = primary , [ "^" , unary ] ;            (* right-associative *)
//! primary   = number | "x" | "pi" | "e"
//!           | func , "(" , expr , ")"
//!           | "(" , expr , ")"
//!           | piecewise ;
//! func      = "abs" | "exp" | "ln" | "sqrt" ;
//! piecewise = "piecewise" , "{" , branch , { ";" , branch } , [ ";" ] , "}" ;
//! branch    = "[" , expr , "," , expr , ( ")" | "]" ) , ":" , expr ;
//! number    = digits , [ "." , [ digits ] ] , [ exponent ]
//!           | "." , digits , [ exponent ] ;
//! exponent  = ( "e" | "E" ) , [ "+" | "-" ] , digits ;
//! ```
//!
//! Guard bounds must be constant expressions. All guards except the last are
//! half-open `[lo,hi)`; the last is closed `[lo,hi]`. Whitespace is ignored and
//! identifiers are case-sensitive.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{BinaryOp, Expr, FunctionExpr, Piece, UnaryOp};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

const OPERAND: &[&str] = &["number", "identifier", "(", "-"];

fn syntax(offset: usize, expected: &[&'static str], message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        expected: expected.to_vec(),
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit()
            || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit))
        {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            // Exponent only when digits follow; otherwise `e` is the constant.
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
            let lit = &text[start..i];
            let value: f64 = lit
                .parse()
                .map_err(|_| syntax(start, &["number"], "malformed numeric literal"))?;
            out.push(Token {
                tok: Tok::Num(value),
                offset: start,
            });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                offset: start,
            });
        } else if b"+-*/^(){}[],;:".contains(&c) {
            out.push(Token {
                tok: Tok::Sym(c as char),
                offset: i,
            });
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(syntax(
                i,
                &[],
                alloc::format!("unexpected character `{ch}`"),
            ));
        }
    }
    out.push(Token {
        tok: Tok::End,
        offset: text.len(),
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, expected: &'static str) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let t = self.peek();
            Err(syntax(t.offset, &[expected], describe(&t.tok)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym('+') => BinaryOp::Add,
                Tok::Sym('-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym('*') => BinaryOp::Mul,
                Tok::Sym('/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Unary(UnaryOp::Neg, Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat('^') {
            let exp = self.unary()?;
            Ok(Expr::Binary(BinaryOp::Pow, Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')', ")")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::Var),
                "pi" => Ok(Expr::Const(core::f64::consts::PI)),
                "e" => Ok(Expr::Const(core::f64::consts::E)),
                "abs" | "exp" | "ln" | "sqrt" => {
                    let op = match name.as_str() {
                        "abs" => UnaryOp::Abs,
                        "exp" => UnaryOp::Exp,
                        "ln" => UnaryOp::Ln,
                        _ => UnaryOp::Sqrt,
                    };
                    self.expect('(', "(")?;
                    let arg = self.expr()?;
                    self.expect(')', ")")?;
                    Ok(Expr::Unary(op, Box::new(arg)))
                }
                "piecewise" => self.piecewise(),
                _ => Err(Error::UnknownIdentifier {
                    name,
                    offset: t.offset,
                }),
            },
            other => Err(syntax(t.offset, OPERAND, describe(&other))),
        }
    }

    fn piecewise(&mut self) -> Result<Expr> {
        self.expect('{', "{")?;
        let mut pieces = Vec::new();
        loop {
            let start = self.peek().offset;
            self.expect('[', "[")?;
            let lo = self.constant_bound()?;
            self.expect(',', ",")?;
            let hi = self.constant_bound()?;
            let close_at = self.peek().offset;
            let closed = if self.eat(']') {
                true
            } else if self.eat(')') {
                false
            } else {
                let t = self.peek();
                return Err(syntax(t.offset, &[")", "]"], describe(&t.tok)));
            };
            self.expect(':', ":")?;
            let body = self.expr()?;
            if !(lo < hi) {
                return Err(syntax(start, &[], "piecewise guard needs lo < hi"));
            }
            if let Some((prev, _)) = pieces.last() {
                let prev: &Piece = prev;
                if prev.hi != lo {
                    return Err(syntax(start, &[], "piecewise guards must be contiguous"));
                }
            }
            pieces.push((
                Piece {
                    lo,
                    hi,
                    closed,
                    body,
                },
                close_at,
            ));
            let more = self.eat(';');
            if self.eat('}') {
                break;
            }
            if !more {
                let t = self.peek();
                return Err(syntax(t.offset, &[";", "}"], describe(&t.tok)));
            }
        }
        let n = pieces.len();
        for (i, (p, at)) in pieces.iter().enumerate() {
            let last = i + 1 == n;
            if p.closed != last {
                let msg = if last {
                    "last piecewise guard must be closed `]`"
                } else {
                    "only the last piecewise guard may be closed"
                };
                return Err(syntax(*at, &[if last { "]" } else { ")" }], msg));
            }
        }
        Ok(Expr::Piecewise(
            pieces.into_iter().map(|(p, _)| p).collect(),
        ))
    }

    fn constant_bound(&mut self) -> Result<f64> {
        let at = self.peek().offset;
        let e = FunctionExpr::new(self.expr()?)?;
        if !e.is_constant() {
            return Err(syntax(at, &["constant"], "piecewise bound depends on x"));
        }
        e.evaluate(0.0)
            .map_err(|_| syntax(at, &["constant"], "piecewise bound is not finite"))
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(v) => alloc::format!("unexpected number {v}"),
        Tok::Ident(s) => alloc::format!("unexpected identifier `{s}`"),
        Tok::Sym(c) => alloc::format!("unexpected `{c}`"),
        Tok::End => "unexpected end of input".to_string(),
    }
}

/// Parses `text` into a [`FunctionExpr`].
pub fn parse(text: &str) -> Result<FunctionExpr> {
    let toks = lex(text)?;
    if toks.len() == 1 {
        return Err(syntax(0, OPERAND, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0 };
    let root = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(syntax(
            t.offset,
            &["+", "-", "*", "/", "^", "end of input"],
            describe(&t.tok),
        ));
    }
    FunctionExpr::new(root)
}
