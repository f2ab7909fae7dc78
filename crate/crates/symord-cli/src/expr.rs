//! Parser for polynomial expressions in the variables `x1..xn`.
//!
//! Grammar (no polynomial division, no floating literals):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' nat]
//! atom   := rational | variable | '(' expr ')'
//! rational := nat ['/' nat]
//! variable := 'x' nat
//! ```
//!
//! Errors carry the byte position and what was expected there.

use symord_core::rat::Rat;
use symord_core::weyl::Polynomial;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("parse error at byte {pos}: expected {expected}, found {found}")]
    Unexpected {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("variable x{var} out of range 1..={n} at byte {pos}")]
    VariableOutOfRange { var: usize, n: usize, pos: usize },
    #[error("exponent {0} too large (limit {1})")]
    ExponentTooLarge(u64, u32),
    #[error("zero denominator in rational at byte {0}")]
    ZeroDenominator(usize),
}

const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(u64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Token, usize)>, ExprError> {
    let bytes = src.as_bytes();
    let mut pos = 0;
    let mut out = Vec::new();
    let number = |bytes: &[u8], pos: &mut usize| -> u64 {
        let mut v: u64 = 0;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            v = v.saturating_mul(10).saturating_add((bytes[*pos] - b'0') as u64);
            *pos += 1;
        }
        v
    };
    while pos < bytes.len() {
        if bytes[pos].is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let tok = match bytes[pos] {
            b'+' => {
                pos += 1;
                Token::Plus
            }
            b'-' => {
                pos += 1;
                Token::Minus
            }
            b'*' => {
                pos += 1;
                Token::Star
            }
            b'^' => {
                pos += 1;
                Token::Caret
            }
            b'/' => {
                pos += 1;
                Token::Slash
            }
            b'(' => {
                pos += 1;
                Token::LParen
            }
            b')' => {
                pos += 1;
                Token::RParen
            }
            b'x' => {
                pos += 1;
                if pos >= bytes.len() || !bytes[pos].is_ascii_digit() {
                    return Err(ExprError::Unexpected {
                        pos,
                        expected: "variable index after `x`".to_string(),
                        found: if pos >= bytes.len() {
                            "end of input".to_string()
                        } else {
                            format!("`{}`", bytes[pos] as char)
                        },
                    });
                }
                Token::Var(number(bytes, &mut pos) as usize)
            }
            c if c.is_ascii_digit() => Token::Number(number(bytes, &mut pos)),
            c => {
                return Err(ExprError::Unexpected {
                    pos: start,
                    expected: "number, variable, operator or parenthesis".to_string(),
                    found: format!("`{}`", c as char),
                })
            }
        };
        out.push((tok, start));
    }
    Ok(out)
}

struct TokenStream {
    tokens: Vec<(Token, usize)>,
    index: usize,
    end: usize,
}

impl TokenStream {
    fn peek(&self) -> Option<&(Token, usize)> {
        self.tokens.get(self.index)
    }

    fn next(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.index).cloned();
        if t.is_some() {
            self.index += 1;
        }
        t
    }
}

/// The abstract syntax of a polynomial expression.
#[derive(Debug, Clone, PartialEq)]
pub enum PolynomialExpr {
    Rational(Rat),
    Var(usize),
    Neg(Box<PolynomialExpr>),
    Add(Box<PolynomialExpr>, Box<PolynomialExpr>),
    Sub(Box<PolynomialExpr>, Box<PolynomialExpr>),
    Mul(Box<PolynomialExpr>, Box<PolynomialExpr>),
    Pow(Box<PolynomialExpr>, u32),
}

struct Parser {
    tokens: TokenStream,
    n: usize,
}

impl Parser {
    fn unexpected(&self, got: Option<(Token, usize)>, expected: &str) -> ExprError {
        match got {
            Some((tok, pos)) => ExprError::Unexpected {
                pos,
                expected: expected.to_string(),
                found: describe(&tok),
            },
            None => ExprError::Unexpected {
                pos: self.tokens.end,
                expected: expected.to_string(),
                found: "end of input".to_string(),
            },
        }
    }

    fn expr(&mut self) -> Result<PolynomialExpr, ExprError> {
        let mut node = if matches!(self.tokens.peek(), Some((Token::Minus, _))) {
            self.tokens.next();
            PolynomialExpr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.tokens.peek() {
                Some((Token::Plus, _)) => {
                    self.tokens.next();
                    node = PolynomialExpr::Add(Box::new(node), Box::new(self.term()?));
                }
                Some((Token::Minus, _)) => {
                    self.tokens.next();
                    node = PolynomialExpr::Sub(Box::new(node), Box::new(self.term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<PolynomialExpr, ExprError> {
        let mut node = self.factor()?;
        while matches!(self.tokens.peek(), Some((Token::Star, _))) {
            self.tokens.next();
            node = PolynomialExpr::Mul(Box::new(node), Box::new(self.factor()?));
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<PolynomialExpr, ExprError> {
        let base = self.atom()?;
        if matches!(self.tokens.peek(), Some((Token::Caret, _))) {
            self.tokens.next();
            match self.tokens.next() {
                Some((Token::Number(e), _)) => {
                    if e > MAX_EXPONENT as u64 {
                        return Err(ExprError::ExponentTooLarge(e, MAX_EXPONENT));
                    }
                    Ok(PolynomialExpr::Pow(Box::new(base), e as u32))
                }
                other => Err(self.unexpected(other, "nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<PolynomialExpr, ExprError> {
        match self.tokens.next() {
            Some((Token::Number(p), _)) => {
                // an optional `/ q` makes a rational literal
                if matches!(self.tokens.peek(), Some((Token::Slash, _))) {
                    self.tokens.next();
                    match self.tokens.next() {
                        Some((Token::Number(q), qpos)) => {
                            if q == 0 {
                                return Err(ExprError::ZeroDenominator(qpos));
                            }
                            Ok(PolynomialExpr::Rational(Rat::new(
                                (p as i64).into(),
                                (q as i64).into(),
                            )))
                        }
                        other => Err(self.unexpected(other, "denominator")),
                    }
                } else {
                    Ok(PolynomialExpr::Rational(Rat::from_integer(
                        (p as i64).into(),
                    )))
                }
            }
            Some((Token::Var(v), pos)) => {
                if v < 1 || v > self.n {
                    return Err(ExprError::VariableOutOfRange { var: v, n: self.n, pos });
                }
                Ok(PolynomialExpr::Var(v))
            }
            Some((Token::LParen, _)) => {
                let inner = self.expr()?;
                match self.tokens.next() {
                    Some((Token::RParen, _)) => Ok(inner),
                    other => Err(self.unexpected(other, "closing parenthesis")),
                }
            }
            other => Err(self.unexpected(other, "number, variable or `(`")),
        }
    }
}

fn describe(tok: &Token) -> String {
    match tok {
        Token::Number(v) => format!("number `{v}`"),
        Token::Var(v) => format!("variable `x{v}`"),
        Token::Plus => "`+`".to_string(),
        Token::Minus => "`-`".to_string(),
        Token::Star => "`*`".to_string(),
        Token::Caret => "`^`".to_string(),
        Token::Slash => "`/`".to_string(),
        Token::LParen => "`(`".to_string(),
        Token::RParen => "`)`".to_string(),
    }
}

/// Parses an expression into its syntax tree.
pub fn parse_expr(text: &str, n: usize) -> Result<PolynomialExpr, ExprError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens: TokenStream {
            tokens,
            index: 0,
            end: text.len(),
        },
        n,
    };
    let node = parser.expr()?;
    match parser.tokens.next() {
        None => Ok(node),
        got => Err(parser.unexpected(got, "end of input")),
    }
}

fn eval(node: &PolynomialExpr, n: usize) -> Polynomial {
    match node {
        PolynomialExpr::Rational(c) => Polynomial::constant(n, c.clone()),
        PolynomialExpr::Var(v) => Polynomial::var(n, *v),
        PolynomialExpr::Neg(inner) => eval(inner, n).neg(),
        PolynomialExpr::Add(a, b) => eval(a, n).add(&eval(b, n)),
        PolynomialExpr::Sub(a, b) => eval(a, n).sub(&eval(b, n)),
        PolynomialExpr::Mul(a, b) => eval(a, n).mul(&eval(b, n)),
        PolynomialExpr::Pow(a, e) => eval(a, n).pow(*e),
    }
}

/// Parses and expands an expression into an exact polynomial.
pub fn parse_polynomial(text: &str, n: usize) -> Result<Polynomial, ExprError> {
    Ok(eval(&parse_expr(text, n)?, n))
}
