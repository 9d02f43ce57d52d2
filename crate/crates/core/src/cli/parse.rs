//! Operator expressions and ideal files.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | name | '(' expr ')'
//! ```
//!
//! Products are evaluated left to right in the operator algebra, so
//! `Dx*x` reads as `x*Dx + 1`. Juxtaposition is not multiplication.

use num_bigint::BigInt;

use crate::arith::{RatFunc, Scalar};
use crate::error::{Error, Result};
use crate::ore::{op_mul, OreOperator};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str, line: usize, first_column: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let syntax = |column: usize, message: String| Error::Syntax { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let column = first_column + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(digits.parse().expect("ascii digits")),
                line,
                column,
            });
            continue;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Name(chars[start..i].iter().collect()),
                line,
                column,
            });
            continue;
        } else {
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(syntax(column, format!("unexpected character `{c}`"))),
            }
        };
        out.push(Token { tok, line, column });
        i += 1;
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: first_column + chars.len(),
    });
    Ok(out)
}

/// Variable or derivation named by an identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symbol {
    Var(usize),
    Der(usize),
}

/// Index named by `x`, `y`, `yK`, `Dx`, `Dy`, `DyK`, ignoring arity.
fn symbol_index(name: &str) -> Option<Symbol> {
    let (der, rest) = match name.strip_prefix('D') {
        Some(r) => (true, r),
        None => (false, name),
    };
    let idx = match rest {
        "x" => 0,
        "y" => 1,
        _ => {
            let digits = rest.strip_prefix('y')?;
            if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) || digits.starts_with('0') {
                return None;
            }
            digits.parse().ok()?
        }
    };
    Some(if der { Symbol::Der(idx) } else { Symbol::Var(idx) })
}

/// Highest y-index mentioned in `text`, at least 1.
pub fn infer_nvars(text: &str) -> usize {
    text.split(|c: char| !c.is_ascii_alphanumeric())
        .filter_map(symbol_index)
        .map(|s| match s {
            Symbol::Var(i) | Symbol::Der(i) => i,
        })
        .max()
        .unwrap_or(1)
        .max(1)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, t: &Token, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<OreOperator> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<OreOperator> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    acc = op_mul(&acc, &self.unary()?);
                }
                Tok::Slash => {
                    let slash = self.next();
                    let rhs = self.unary()?;
                    acc = self.divide(&acc, &rhs, &slash)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn divide(&self, lhs: &OreOperator, rhs: &OreOperator, at: &Token) -> Result<OreOperator> {
        let Some(den) = rhs.as_coeff() else {
            return Err(self.error(at, "divisor must be a coefficient"));
        };
        if den.is_zero() {
            return Err(self.error(at, "division by zero"));
        }
        if let Some(num) = lhs.as_coeff() {
            return Ok(OreOperator::from_coeff(num.div(&den)?));
        }
        match den.constant_value() {
            Some(c) => Ok(lhs.scale(&c.recip())),
            None => Err(self.error(at, "only coefficients may be divided by a non-constant")),
        }
    }

    fn unary(&mut self) -> Result<OreOperator> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<OreOperator> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        let Tok::Int(k) = &t.tok else {
            return Err(self.error(&t, "exponent must be a nonnegative integer"));
        };
        let k: u32 = k.try_into().map_err(|_| self.error(&t, "exponent too large"))?;
        Ok(base.pow(k))
    }

    fn atom(&mut self) -> Result<OreOperator> {
        let t = self.next();
        match &t.tok {
            Tok::Int(v) => Ok(OreOperator::from_coeff(RatFunc::constant(
                self.nvars,
                Scalar::from_integer(v.clone()),
            ))),
            Tok::Name(name) => self.symbol(name, &t),
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.next();
                if close.tok != Tok::RParen {
                    return Err(self.error(&close, "expected `)`"));
                }
                Ok(e)
            }
            Tok::End => Err(self.error(&t, "unexpected end of expression")),
            other => Err(self.error(&t, format!("unexpected token {other:?}"))),
        }
    }

    fn symbol(&self, name: &str, t: &Token) -> Result<OreOperator> {
        let Some(sym) = symbol_index(name) else {
            return Err(self.error(t, format!("unknown name `{name}`")));
        };
        let idx = match sym {
            Symbol::Var(i) | Symbol::Der(i) => i,
        };
        let alias = name == "y" || name == "Dy";
        if idx > self.nvars || (alias && self.nvars != 1) {
            return Err(Error::Arity {
                name: name.to_string(),
                nvars: self.nvars,
                line: t.line,
                column: t.column,
            });
        }
        Ok(match sym {
            Symbol::Var(i) => OreOperator::variable(self.nvars, i),
            Symbol::Der(i) => OreOperator::derivation(self.nvars, i),
        })
    }
}

fn parse_at(text: &str, nvars: usize, line: usize, first_column: usize) -> Result<OreOperator> {
    let toks = tokenize(text, line, first_column)?;
    let mut p = Parser { toks, pos: 0, nvars };
    let op = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return Err(p.error(&t, "unexpected trailing input"));
    }
    Ok(op)
}

/// Parses a single operator in the algebra with `nvars` y-variables.
pub fn parse_operator(text: &str, nvars: usize) -> Result<OreOperator> {
    parse_at(text, nvars, 1, 1)
}

/// A list of operators: one expression per line or `;`-separated segment,
/// `#` comments, and an optional `#nvars n` directive.
#[derive(Debug, Clone)]
pub struct IdealFile {
    pub nvars: usize,
    pub operators: Vec<OreOperator>,
}

impl IdealFile {
    pub fn parse(text: &str) -> Result<IdealFile> {
        let mut nvars = None;
        for (ln, line) in text.lines().enumerate() {
            let Some(rest) = line.trim().strip_prefix("#nvars") else {
                continue;
            };
            let value = rest.trim();
            let n: usize = value.parse().map_err(|_| Error::Syntax {
                line: ln + 1,
                column: 1,
                message: format!("bad #nvars value `{value}`"),
            })?;
            if n == 0 {
                return Err(Error::Syntax {
                    line: ln + 1,
                    column: 1,
                    message: "#nvars must be at least 1".into(),
                });
            }
            nvars = Some(n);
        }
        let body: String = text
            .lines()
            .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
            .collect::<Vec<_>>()
            .join("\n");
        let nvars = nvars.unwrap_or_else(|| infer_nvars(&body));
        let mut operators = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            if line.trim_start().starts_with('#') {
                continue;
            }
            let mut offset = 0;
            for segment in line.split(';') {
                if !segment.trim().is_empty() {
                    operators.push(parse_at(segment, nvars, ln + 1, offset + 1)?);
                }
                offset += segment.chars().count() + 1;
            }
        }
        if operators.is_empty() {
            return Err(Error::Syntax {
                line: 1,
                column: 1,
                message: "no operators in input".into(),
            });
        }
        Ok(IdealFile { nvars, operators })
    }
}
