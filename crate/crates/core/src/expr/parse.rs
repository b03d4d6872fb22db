use std::fmt;

use super::{ArithOp, BitOp, BoolExpr, CmpOp, NumExpr};

/// Syntax error with a 0-based byte offset into the parsed text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {}: {message}", .offset + 1)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    StarStar,
    Slash,
    Percent,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Assign,
    Arrow,
    Equals,
    EqEq,
    Ge,
    Gt,
    Le,
    Lt,
    AndAnd,
    OrOr,
    Bang,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Int(n) => return write!(f, "`{n}`"),
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::StarStar => "**",
            Tok::Slash => "/",
            Tok::Percent => "%",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Assign => ":=",
            Tok::Arrow => "->",
            Tok::Equals => "=",
            Tok::EqEq => "==",
            Tok::Ge => ">=",
            Tok::Gt => ">",
            Tok::Le => "<=",
            Tok::Lt => "<",
            Tok::AndAnd => "&&",
            Tok::OrOr => "||",
            Tok::Bang => "!",
            Tok::Eof => return write!(f, "end of input"),
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

const FUNCTIONS: [&str; 5] = ["NOT", "OR", "AND", "XOR", "INT"];

fn is_reserved(name: &str) -> bool {
    name == "true" || name == "false" || FUNCTIONS.contains(&name)
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |s: &[u8]| bytes[i..].starts_with(s);
        let (tok, len) = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits = &text[start..i];
            let n = digits
                .parse::<u64>()
                .map_err(|_| ParseError::new(start, format!("integer literal `{digits}` out of range")))?;
            out.push(Token { tok: Tok::Int(n), offset: start });
            continue;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(text[start..i].to_string()), offset: start });
            continue;
        } else if two(b"**") {
            (Tok::StarStar, 2)
        } else if two(b"==") {
            (Tok::EqEq, 2)
        } else if two(b">=") {
            (Tok::Ge, 2)
        } else if two(b"<=") {
            (Tok::Le, 2)
        } else if two(b"&&") {
            (Tok::AndAnd, 2)
        } else if two(b"||") {
            (Tok::OrOr, 2)
        } else if two(b":=") {
            (Tok::Assign, 2)
        } else if two(b"->") {
            (Tok::Arrow, 2)
        } else {
            let tok = match c {
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'/' => Tok::Slash,
                b'%' => Tok::Percent,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'{' => Tok::LBrace,
                b'}' => Tok::RBrace,
                b',' => Tok::Comma,
                b':' => Tok::Colon,
                b'=' => Tok::Equals,
                b'>' => Tok::Gt,
                b'<' => Tok::Lt,
                b'!' => Tok::Bang,
                _ => {
                    let ch = text[start..].chars().next().unwrap_or('?');
                    return Err(ParseError::new(start, format!("unexpected character `{ch}`")));
                }
            };
            (tok, 1)
        };
        out.push(Token { tok, offset: start });
        i += len;
    }
    out.push(Token { tok: Tok::Eof, offset: text.len() });
    Ok(out)
}

type PResult<T> = Result<T, ParseError>;

/// Recursive-descent parser over a token stream. The model-file reader drives
/// it directly so that expressions embedded in a line share one lexer.
pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(text: &str) -> PResult<Self> {
        Ok(Parser { tokens: lex(text)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    pub fn offset(&self) -> usize {
        self.tokens[self.pos].offset
    }

    pub fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.offset(), message)
    }

    pub fn expect(&mut self, tok: &Tok) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    pub fn expect_eof(&self) -> PResult<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => Err(self.error(format!("unexpected {t}"))),
        }
    }

    /// Identifier that is not a reserved word.
    pub fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(name) if !is_reserved(name) => {
                let name = name.clone();
                self.bump();
                Ok(name)
            }
            t => Err(self.error(format!("expected identifier, found {t}"))),
        }
    }

    pub fn num(&mut self) -> PResult<NumExpr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = NumExpr::arith(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> PResult<NumExpr> {
        let mut lhs = self.pow()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                Tok::Percent => ArithOp::Rem,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = NumExpr::arith(op, lhs, self.pow()?);
        }
    }

    fn pow(&mut self) -> PResult<NumExpr> {
        let base = self.unary()?;
        if self.eat(&Tok::StarStar) {
            let exp = self.pow()?;
            return Ok(NumExpr::arith(ArithOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn unary(&mut self) -> PResult<NumExpr> {
        if *self.peek() != Tok::Minus {
            return self.primary();
        }
        self.bump();
        if let Tok::Int(n) = *self.peek() {
            let at = self.offset();
            self.bump();
            let v = i64::try_from(-(n as i128))
                .map_err(|_| ParseError::new(at, format!("integer literal `-{n}` out of range")))?;
            return Ok(NumExpr::Const(v));
        }
        Ok(NumExpr::Neg(Box::new(self.unary()?)))
    }

    fn primary(&mut self) -> PResult<NumExpr> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => i64::try_from(n)
                .map(NumExpr::Const)
                .map_err(|_| ParseError::new(at, format!("integer literal `{n}` out of range"))),
            Tok::LParen => {
                let e = self.num()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) if *self.peek() == Tok::LParen => self.call(&name, at),
            Tok::Ident(name) if is_reserved(&name) => {
                Err(ParseError::new(at, format!("`{name}` cannot be used as a numeric operand")))
            }
            Tok::Ident(name) => Ok(NumExpr::Var(name)),
            t => Err(ParseError::new(at, format!("expected numeric expression, found {t}"))),
        }
    }

    fn call(&mut self, name: &str, at: usize) -> PResult<NumExpr> {
        self.expect(&Tok::LParen)?;
        let e = match name {
            "NOT" => NumExpr::Not(Box::new(self.num()?)),
            "INT" => NumExpr::Int(Box::new(self.boolean()?)),
            "OR" | "AND" | "XOR" => {
                let op = match name {
                    "OR" => BitOp::Or,
                    "AND" => BitOp::And,
                    _ => BitOp::Xor,
                };
                let l = self.num()?;
                self.expect(&Tok::Comma)?;
                let r = self.num()?;
                NumExpr::bit(op, l, r)
            }
            _ => return Err(ParseError::new(at, format!("unknown function `{name}`"))),
        };
        self.expect(&Tok::RParen)?;
        Ok(e)
    }

    pub fn boolean(&mut self) -> PResult<BoolExpr> {
        let mut lhs = self.conj()?;
        while self.eat(&Tok::OrOr) {
            lhs = BoolExpr::or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> PResult<BoolExpr> {
        let mut lhs = self.negation()?;
        while self.eat(&Tok::AndAnd) {
            lhs = BoolExpr::and(lhs, self.negation()?);
        }
        Ok(lhs)
    }

    fn negation(&mut self) -> PResult<BoolExpr> {
        if self.eat(&Tok::Bang) {
            return Ok(BoolExpr::Not(Box::new(self.negation()?)));
        }
        self.bool_atom()
    }

    fn peek_cmp(&self) -> Option<CmpOp> {
        Some(match self.peek() {
            Tok::EqEq => CmpOp::Eq,
            Tok::Ge => CmpOp::Ge,
            Tok::Gt => CmpOp::Gt,
            Tok::Le => CmpOp::Le,
            Tok::Lt => CmpOp::Lt,
            _ => return None,
        })
    }

    // A parenthesis or identifier can open either a comparison or a Boolean
    // operand, so try the comparison first and fall back.
    fn bool_atom(&mut self) -> PResult<BoolExpr> {
        match self.peek() {
            Tok::Ident(s) if s == "true" => {
                self.bump();
                return Ok(BoolExpr::True);
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                return Ok(BoolExpr::False);
            }
            _ => {}
        }
        let start = self.pos;
        let num_err = match self.num() {
            Ok(lhs) => {
                if let Some(op) = self.peek_cmp() {
                    self.bump();
                    let rhs = self.num()?;
                    return Ok(BoolExpr::cmp(op, lhs, rhs));
                }
                match lhs {
                    NumExpr::Var(name) if self.pos == start + 1 => return Ok(BoolExpr::Var(name)),
                    _ => self.error(format!("expected comparison operator, found {}", self.peek())),
                }
            }
            Err(e) => e,
        };
        let end = self.pos;
        self.pos = start;
        if *self.peek() == Tok::LParen {
            self.bump();
            let inner = self.boolean().and_then(|b| self.expect(&Tok::RParen).map(|_| b));
            return match inner {
                Ok(b) => Ok(b),
                Err(e) if e.offset >= num_err.offset => Err(e),
                Err(_) => {
                    self.pos = end;
                    Err(num_err)
                }
            };
        }
        Err(num_err)
    }
}

pub fn parse_numeric(text: &str) -> Result<NumExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.num()?;
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_boolean(text: &str) -> Result<BoolExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.boolean()?;
    p.expect_eof()?;
    Ok(e)
}
