//! Prefix s-expression syntax for oracle expressions, e.g.
//! `(* (^ x1 2) x2)` or `(sin (+ x1 x2))`. Every parse error carries the
//! byte offset it was detected at.

use std::str::FromStr;

use num::{BigRational, Zero};

use crate::error::{Error, Result};
use crate::oracle::Expr;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Token<'a> {
    Open(usize),
    Close(usize),
    Atom(usize, &'a str),
}

impl Token<'_> {
    fn position(&self) -> usize {
        match self {
            Token::Open(p) | Token::Close(p) | Token::Atom(p, _) => *p,
        }
    }
}

fn tokenize(input: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                tokens.push(Token::Open(i));
                i += 1;
            }
            b')' => {
                tokens.push(Token::Close(i));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len()
                    && !bytes[i].is_ascii_whitespace()
                    && bytes[i] != b'('
                    && bytes[i] != b')'
                {
                    i += 1;
                }
                tokens.push(Token::Atom(start, &input[start..i]));
            }
        }
    }
    tokens
}

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

fn parse_atom(position: usize, text: &str) -> Result<Expr> {
    if let Some(rest) = text.strip_prefix('x') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            let v: usize = rest
                .parse()
                .map_err(|_| err(position, format!("variable index \"{rest}\" too large")))?;
            if v == 0 {
                return Err(err(position, "variable indices start at x1"));
            }
            return Ok(Expr::var(v));
        }
    }
    if let Some((_, denom)) = text.split_once('/') {
        // Reject zero denominators before they reach rational parsing.
        if denom.trim_start_matches('-').bytes().all(|b| b == b'0')
            && denom.bytes().any(|b| b == b'0')
        {
            return Err(err(position, "zero denominator"));
        }
    }
    match BigRational::from_str(text) {
        Ok(q) => {
            if q.denom().is_zero() {
                Err(err(position, "zero denominator"))
            } else {
                Ok(Expr::constant(q))
            }
        }
        Err(_) => Err(err(
            position,
            format!("\"{text}\" is neither a variable nor a rational literal"),
        )),
    }
}

struct Parser<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    input_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        match self.next() {
            None => Err(err(self.input_len, "unexpected end of input")),
            Some(Token::Close(p)) => Err(err(p, "unexpected \")\"")),
            Some(Token::Atom(p, text)) => parse_atom(p, text),
            Some(Token::Open(_)) => self.parse_form(),
        }
    }

    fn parse_form(&mut self) -> Result<Expr> {
        let (head_pos, head) = match self.next() {
            Some(Token::Atom(p, text)) => (p, text),
            Some(t) => return Err(err(t.position(), "expected an operator after \"(\"")),
            None => return Err(err(self.input_len, "unexpected end of input")),
        };
        let mut args = Vec::new();
        loop {
            match self.peek() {
                Some(Token::Close(_)) => {
                    self.pos += 1;
                    break;
                }
                None => return Err(err(self.input_len, "missing \")\"")),
                _ => args.push(self.parse_expr()?),
            }
        }
        let arity = args.len();
        match head {
            "+" => {
                if arity < 2 {
                    return Err(err(head_pos, "\"+\" needs at least two arguments"));
                }
                let mut it = args.into_iter();
                let first = it.next().expect("arity checked");
                Ok(it.fold(first, Expr::sum))
            }
            "*" => {
                if arity < 2 {
                    return Err(err(head_pos, "\"*\" needs at least two arguments"));
                }
                let mut it = args.into_iter();
                let first = it.next().expect("arity checked");
                Ok(it.fold(first, Expr::product))
            }
            "-" => match arity {
                0 => Err(err(head_pos, "\"-\" needs arguments")),
                1 => Ok(Expr::negate(args.into_iter().next().expect("one arg"))),
                _ => {
                    let mut it = args.into_iter();
                    let first = it.next().expect("arity checked");
                    Ok(it.fold(first, |acc, x| Expr::sum(acc, Expr::negate(x))))
                }
            },
            "^" => {
                if arity != 2 {
                    return Err(err(head_pos, "\"^\" needs exactly two arguments"));
                }
                let mut it = args.into_iter();
                let base = it.next().expect("arity checked");
                let exponent = match it.next().expect("arity checked") {
                    Expr::Const(q) => q,
                    _ => return Err(err(head_pos, "exponent must be an integer literal")),
                };
                if !exponent.is_integer() {
                    return Err(err(head_pos, "exponent must be an integer literal"));
                }
                let n = exponent.to_integer();
                use num::ToPrimitive;
                match n.to_u32() {
                    Some(k) if k >= 1 => Ok(Expr::int_power(base, k)),
                    _ => Err(err(head_pos, "exponent must be a positive integer")),
                }
            }
            "sin" | "cos" | "exp" => {
                if arity != 1 {
                    return Err(err(
                        head_pos,
                        format!("\"{head}\" needs exactly one argument"),
                    ));
                }
                let arg = args.into_iter().next().expect("arity checked");
                Ok(match head {
                    "sin" => Expr::sin(arg),
                    "cos" => Expr::cos(arg),
                    _ => Expr::exp(arg),
                })
            }
            _ => Err(err(head_pos, format!("unknown operator \"{head}\""))),
        }
    }
}

/// Parses one expression; trailing input is an error.
pub fn parse_expr(input: &str) -> Result<Expr> {
    let mut parser = Parser {
        tokens: tokenize(input),
        pos: 0,
        input_len: input.len(),
    };
    let expr = parser.parse_expr()?;
    if let Some(t) = parser.peek() {
        return Err(err(t.position(), "trailing input after expression"));
    }
    Ok(expr)
}
