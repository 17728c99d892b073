//! A one-variable expression language used to define map endpoints and
//! integrands.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right associative
//! primary := number | var | func '(' expr (',' expr)* ')' | '(' expr ')'
//! func    := abs | min | max | sqrt | ln | exp
//! ```
//!
//! `-x^2` parses as `-(x^2)` and `2^-1` as `2^(-1)`.

use std::fmt;

use thiserror::Error;

use crate::error::{Error as CrateError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: expected {expected}, found {found}")]
pub struct ParseError {
    /// Byte offset into the source.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Abs,
    Min,
    Max,
    Sqrt,
    Ln,
    Exp,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            "sqrt" => Func::Sqrt,
            "ln" => Func::Ln,
            "exp" => Func::Exp,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
            Func::Exp => "exp",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Num(f64),
    Var,
    Neg(Box<ExprNode>),
    Bin(BinOp, Box<ExprNode>, Box<ExprNode>),
    Call(Func, Vec<ExprNode>),
}

const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

impl ExprNode {
    fn precedence(&self) -> u8 {
        match self {
            ExprNode::Bin(op, _, _) => op.precedence(),
            ExprNode::Neg(_) => PREC_NEG,
            ExprNode::Num(_) | ExprNode::Var | ExprNode::Call(..) => PREC_ATOM,
        }
    }

    fn write(&self, var: &str, out: &mut String) {
        match self {
            ExprNode::Num(v) => out.push_str(&v.to_string()),
            ExprNode::Var => out.push_str(var),
            ExprNode::Neg(inner) => {
                out.push('-');
                inner.write_wrapped(var, out, inner.precedence() < PREC_NEG);
            }
            ExprNode::Bin(op, lhs, rhs) => {
                let p = op.precedence();
                let (wrap_l, wrap_r) = match op {
                    BinOp::Pow => (lhs.precedence() <= p, rhs.precedence() < PREC_NEG),
                    _ => (lhs.precedence() < p, rhs.precedence() <= p),
                };
                lhs.write_wrapped(var, out, wrap_l);
                match op {
                    BinOp::Add | BinOp::Sub => {
                        out.push(' ');
                        out.push_str(op.symbol());
                        out.push(' ');
                    }
                    _ => out.push_str(op.symbol()),
                }
                rhs.write_wrapped(var, out, wrap_r);
            }
            ExprNode::Call(func, args) => {
                out.push_str(func.name());
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    a.write(var, out);
                }
                out.push(')');
            }
        }
    }

    fn write_wrapped(&self, var: &str, out: &mut String, wrap: bool) {
        if wrap {
            out.push('(');
        }
        self.write(var, out);
        if wrap {
            out.push(')');
        }
    }

    fn eval<S: Scalar>(&self, x: S, var: &str) -> Result<S> {
        let fail = |node: &ExprNode, reason: &str| CrateError::Eval {
            subexpr: node.render(var),
            reason: reason.to_string(),
        };
        let value = match self {
            ExprNode::Num(v) => S::lit(*v),
            ExprNode::Var => x,
            ExprNode::Neg(inner) => -inner.eval(x, var)?,
            ExprNode::Bin(op, lhs, rhs) => {
                let a = lhs.eval(x, var)?;
                let b = rhs.eval(x, var)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == S::zero() {
                            return Err(fail(self, "division by zero"));
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
            ExprNode::Call(func, args) => {
                let a = args[0].eval(x, var)?;
                match func {
                    Func::Abs => a.abs(),
                    Func::Min => a.min(args[1].eval(x, var)?),
                    Func::Max => a.max(args[1].eval(x, var)?),
                    Func::Sqrt => {
                        if a < S::zero() {
                            return Err(fail(self, "square root of a negative number"));
                        }
                        a.sqrt()
                    }
                    Func::Ln => {
                        if a <= S::zero() {
                            return Err(fail(self, "logarithm of a nonpositive number"));
                        }
                        a.ln()
                    }
                    Func::Exp => a.exp(),
                }
            }
        };
        if value.is_nan() {
            return Err(fail(self, "result is NaN"));
        }
        if value.is_infinite() {
            return Err(fail(self, "result is not finite"));
        }
        Ok(value)
    }

    fn render(&self, var: &str) -> String {
        let mut s = String::new();
        self.write(var, &mut s);
        s
    }
}

/// Parsed expression in a single named variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    var: String,
    root: ExprNode,
}

impl Expr {
    /// Parses `src` with `var` as the only admissible identifier besides the
    /// built-in function names.
    pub fn parse(src: &str, var: &str) -> Result<Self, ParseError> {
        let tokens = lex(src)?;
        let mut p = Parser {
            tokens: &tokens,
            pos: 0,
            var,
            end: src.len(),
        };
        let root = p.expr()?;
        if let Some(tok) = p.peek() {
            return Err(ParseError {
                position: tok.pos,
                expected: "operator or end of input".into(),
                found: tok.kind.describe(),
            });
        }
        Ok(Self {
            var: var.to_string(),
            root,
        })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn root(&self) -> &ExprNode {
        &self.root
    }

    pub fn eval<S: Scalar>(&self, x: S) -> Result<S> {
        self.root.eval(x, &self.var)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.root.render(&self.var))
    }
}

pub fn parse_expr(src: &str, var: &str) -> Result<Expr, ParseError> {
    Expr::parse(src, var)
}

pub fn eval_expr<S: Scalar>(ast: &Expr, x: S) -> Result<S> {
    ast.eval(x)
}

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

impl TokKind {
    fn describe(&self) -> String {
        match self {
            TokKind::Num(v) => format!("number {v}"),
            TokKind::Ident(s) => format!("identifier `{s}`"),
            TokKind::Op(c) => format!("`{c}`"),
            TokKind::LParen => "`(`".into(),
            TokKind::RParen => "`)`".into(),
            TokKind::Comma => "`,`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokKind,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = match c {
            '+' | '-' | '*' | '/' | '^' => {
                i += 1;
                TokKind::Op(c)
            }
            '(' => {
                i += 1;
                TokKind::LParen
            }
            ')' => {
                i += 1;
                TokKind::RParen
            }
            ',' => {
                i += 1;
                TokKind::Comma
            }
            '0'..='9' | '.' => {
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
                let v: f64 = text.parse().map_err(|_| ParseError {
                    position: start,
                    expected: "number".into(),
                    found: format!("`{text}`"),
                })?;
                TokKind::Num(v)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                TokKind::Ident(src[start..i].to_string())
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or(c);
                return Err(ParseError {
                    position: start,
                    expected: "operand or operator".into(),
                    found: format!("`{ch}`"),
                });
            }
        };
        out.push(Token { kind, pos: start });
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    var: &'a str,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self) -> Option<char> {
        match self.peek() {
            Some(Token {
                kind: TokKind::Op(c),
                ..
            }) => Some(*c),
            _ => None,
        }
    }

    fn error_here(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(tok) => ParseError {
                position: tok.pos,
                expected: expected.into(),
                found: tok.kind.describe(),
            },
            None => ParseError {
                position: self.end,
                expected: expected.into(),
                found: "end of input".into(),
            },
        }
    }

    fn expect(&mut self, kind: TokKind, expected: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(tok) if tok.kind == kind => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error_here(expected)),
        }
    }

    fn expr(&mut self) -> Result<ExprNode, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = ExprNode::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ExprNode, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = ExprNode::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ExprNode, ParseError> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(ExprNode::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprNode, ParseError> {
        let base = self.primary()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(ExprNode::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<ExprNode, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error_here("operand"));
        };
        match tok.kind {
            TokKind::Num(v) => {
                self.pos += 1;
                Ok(ExprNode::Num(v))
            }
            TokKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(TokKind::RParen, "`)`")?;
                Ok(inner)
            }
            TokKind::Ident(name) if name == self.var => {
                self.pos += 1;
                Ok(ExprNode::Var)
            }
            TokKind::Ident(name) => {
                let Some(func) = Func::from_name(&name) else {
                    return Err(ParseError {
                        position: tok.pos,
                        expected: format!("variable `{}` or a function name", self.var),
                        found: format!("identifier `{name}`"),
                    });
                };
                self.pos += 1;
                self.expect(TokKind::LParen, "`(` after function name")?;
                let mut args = vec![self.expr()?];
                while self.peek().map(|t| &t.kind) == Some(&TokKind::Comma) {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                if args.len() != func.arity() {
                    return Err(ParseError {
                        position: tok.pos,
                        expected: format!("{} argument(s) to `{}`", func.arity(), func.name()),
                        found: format!("{} argument(s)", args.len()),
                    });
                }
                self.expect(TokKind::RParen, "`)`")?;
                Ok(ExprNode::Call(func, args))
            }
            _ => Err(self.error_here("operand")),
        }
    }
}
