//! Recursive-descent parser for polynomial expressions in `x, y, z, t`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | imaginary | 'i' | var | '(' expr ')'
//! ```
//!
//! Numbers are decimal with an optional exponent (`1.5e-3`); a trailing `i`
//! written directly after the digits makes the literal imaginary (`2i`).
//! Juxtaposition is rejected: `2x` and `x y` are syntax errors.

use rug::Float;

use super::CubicIoError;
use crate::multipoly::MultiPoly;
use crate::numerics::BigComplex;

const MAX_EXPONENT: u32 = 32;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num { text: String, imaginary: bool },
    Var(usize),
    ImagUnit,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num { text, imaginary } => {
                format!("number '{text}{}'", if *imaginary { "i" } else { "" })
            }
            Tok::Var(i) => format!("variable '{}'", ["x", "y", "z", "t"][*i]),
            Tok::ImagUnit => "'i'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

/// Token with its 1-based character column.
type Spanned = (Tok, usize);

fn syntax(position: usize, message: impl Into<String>) -> CubicIoError {
    CubicIoError::Syntax {
        position,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>, CubicIoError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            'x' => Some(Tok::Var(0)),
            'y' => Some(Tok::Var(1)),
            'z' => Some(Tok::Var(2)),
            't' => Some(Tok::Var(3)),
            'i' => Some(Tok::ImagUnit),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((tok, pos));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let mantissa: String = chars[start..i].iter().collect();
            if !mantissa.chars().any(|d| d.is_ascii_digit()) {
                return Err(syntax(pos, "malformed number"));
            }
            let mut text = mantissa;
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                let digits_start = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == digits_start {
                    return Err(syntax(i + 1, "exponent needs digits"));
                }
                text.extend(&chars[i..j]);
                i = j;
            }
            let imaginary = i < chars.len() && chars[i] == 'i';
            if imaginary {
                i += 1;
            }
            out.push((Tok::Num { text, imaginary }, pos));
            continue;
        }
        return Err(syntax(pos, format!("unexpected character '{c}'")));
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    prec: u32,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<MultiPoly, CubicIoError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, CubicIoError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, CubicIoError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, CubicIoError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (tok, col) = self.bump();
        let exponent = match tok {
            Tok::Num {
                ref text,
                imaginary: false,
            } if text.chars().all(|c| c.is_ascii_digit()) => text
                .parse::<u32>()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| syntax(col, format!("exponent must be at most {MAX_EXPONENT}")))?,
            other => {
                return Err(syntax(
                    col,
                    format!("expected a non-negative integer exponent, found {}", other.describe()),
                ))
            }
        };
        Ok(base.pow(exponent))
    }

    fn atom(&mut self) -> Result<MultiPoly, CubicIoError> {
        let (tok, col) = self.bump();
        match tok {
            Tok::Num { text, imaginary } => {
                let parsed = Float::parse(&text).map_err(|_| syntax(col, "malformed number"))?;
                let value = Float::with_val(self.prec, parsed);
                let zero = Float::with_val(self.prec, 0);
                let c = if imaginary {
                    BigComplex::from_floats(zero, value)
                } else {
                    BigComplex::from_floats(value, zero)
                };
                Ok(MultiPoly::constant(4, c))
            }
            Tok::ImagUnit => Ok(MultiPoly::constant(4, BigComplex::i(self.prec))),
            Tok::Var(i) => Ok(MultiPoly::var(4, i, self.prec)),
            Tok::LParen => {
                let inner = self.expr()?;
                let (close, ccol) = self.bump();
                if close != Tok::RParen {
                    return Err(syntax(ccol, format!("expected ')', found {}", close.describe())));
                }
                Ok(inner)
            }
            other => Err(syntax(col, format!("unexpected {}", other.describe()))),
        }
    }
}

/// Parses and expands an expression into a polynomial in `(x, y, z, t)`.
pub fn parse_expression(text: &str, prec: u32) -> Result<MultiPoly, CubicIoError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0, prec };
    let poly = parser.expr()?;
    if *parser.peek() != Tok::End {
        let col = parser.column();
        let found = parser.peek().describe();
        return Err(syntax(
            col,
            format!("unexpected {found} (implicit multiplication is not allowed)"),
        ));
    }
    Ok(poly)
}
