//! Text syntax for Laurent polynomials.
//!
//! ```text
//! poly    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := number ['/' number] | 'i' | '(' literal ')' | var ['^' exp]
//! literal := ['+'|'-'] part (('+'|'-') part)*       part := number ['/' number] | 'i'
//! exp     := ['-'|'+'] integer | '(' ['-'|'+'] integer ')'
//! ```
//!
//! A number may carry a trailing `i` (`2i`, `3/4i`) to make it imaginary.
//! Juxtaposition is not multiplication; `2 z1` is an error.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::gaussian::GaussianRational;
use crate::laurent::{Exponent, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected {
        expected: &'static str,
        found: String,
    },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("exponents must be integers")]
    NonIntegerExponent,
    #[error("decimal literals are not exact; write a fraction a/b")]
    DecimalCoefficient,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("exponent out of range")]
    ExponentOverflow,
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num {
        digits: BigInt,
        imag: bool,
        decimal: bool,
    },
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s:?}"),
            Tok::Num { digits, .. } => write!(f, "number {digits}"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().unwrap_or('\0');
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: BigInt = text[start..i].parse().expect("ascii digits");
                let mut decimal = false;
                if i < bytes.len() && bytes[i] == b'.' {
                    decimal = true;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // A trailing `i` not followed by an identifier character marks
                // an imaginary literal.
                let mut imag = false;
                if i < bytes.len()
                    && bytes[i] == b'i'
                    && !bytes
                        .get(i + 1)
                        .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                {
                    imag = true;
                    i += 1;
                }
                out.push((
                    start,
                    Tok::Num {
                        digits,
                        imag,
                        decimal,
                    },
                ));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(ParseError {
                    pos: start,
                    kind: ParseErrorKind::UnexpectedChar(other),
                })
            }
        };
        out.push((start, tok));
        i += c.len_utf8();
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            pos: self.pos(),
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        self.err(ParseErrorKind::Unexpected {
            expected,
            found: self.peek().to_string(),
        })
    }

    fn poly(&mut self) -> Result<LaurentPoly, ParseError> {
        let dim = self.vars.len();
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let (exp, c) = self.term()?;
            terms.push((exp, if negate { -c } else { c }));
            negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                Tok::End => break,
                _ => return Err(self.unexpected("'+', '-', '*' or end of input")),
            };
            self.bump();
        }
        Ok(LaurentPoly::from_terms(dim, terms).expect("exponents have the declared length"))
    }

    fn term(&mut self) -> Result<(Exponent, GaussianRational), ParseError> {
        let mut exp = vec![0i64; self.vars.len()];
        let mut coeff = GaussianRational::one();
        loop {
            match self.peek().clone() {
                Tok::Num { .. } => coeff = &coeff * &self.rational_literal()?,
                Tok::LParen => {
                    self.bump();
                    coeff = &coeff * &self.paren_literal()?;
                }
                Tok::Ident(name) if name == "i" => {
                    self.bump();
                    coeff = &coeff * &GaussianRational::i();
                }
                Tok::Ident(name) => {
                    let pos = self.pos();
                    let axis = self
                        .vars
                        .iter()
                        .position(|v| *v == name)
                        .ok_or(ParseError {
                            pos,
                            kind: ParseErrorKind::UnknownVariable(name),
                        })?;
                    self.bump();
                    let e = if *self.peek() == Tok::Caret {
                        self.bump();
                        self.exponent()?
                    } else {
                        1
                    };
                    exp[axis] = exp[axis].checked_add(e).ok_or(ParseError {
                        pos,
                        kind: ParseErrorKind::ExponentOverflow,
                    })?;
                }
                _ => return Err(self.unexpected("a coefficient or variable")),
            }
            if *self.peek() != Tok::Star {
                return Ok((Exponent::new(exp), coeff));
            }
            self.bump();
        }
    }

    /// `number ['/' number]`, imaginary if either number carries `i`.
    fn rational_literal(&mut self) -> Result<GaussianRational, ParseError> {
        let pos = self.pos();
        let Tok::Num {
            digits: num,
            imag: imag_n,
            decimal,
        } = self.bump()
        else {
            unreachable!("caller checked for a number")
        };
        if decimal {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::DecimalCoefficient,
            });
        }
        let (den, imag_d) = if *self.peek() == Tok::Slash && !imag_n {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Tok::Num { decimal: true, .. } => {
                    return Err(ParseError {
                        pos,
                        kind: ParseErrorKind::DecimalCoefficient,
                    })
                }
                Tok::Num { digits, imag, .. } => (digits, imag),
                _ => {
                    self.at -= 1;
                    return Err(self.unexpected("a denominator"));
                }
            }
        } else {
            (BigInt::one(), false)
        };
        if den.is_zero() {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::ZeroDenominator,
            });
        }
        let q = BigRational::new(num, den);
        Ok(if imag_n || imag_d {
            GaussianRational::imag(q)
        } else {
            GaussianRational::real(q)
        })
    }

    /// Body of `( literal )`; the opening paren is already consumed.
    fn paren_literal(&mut self) -> Result<GaussianRational, ParseError> {
        let mut sum = GaussianRational::zero();
        let mut negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let part = match self.peek() {
                Tok::Num { .. } => self.rational_literal()?,
                Tok::Ident(s) if s == "i" => {
                    self.bump();
                    GaussianRational::i()
                }
                Tok::Ident(_) => {
                    return Err(
                        self.unexpected("a numeric literal (parentheses hold coefficients only)")
                    )
                }
                _ => return Err(self.unexpected("a numeric literal")),
            };
            sum = if negate { &sum - &part } else { &sum + &part };
            negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                Tok::RParen => {
                    self.bump();
                    return Ok(sum);
                }
                _ => return Err(self.unexpected("'+', '-' or ')'")),
            };
            self.bump();
        }
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let pos = self.pos();
        let value = match self.bump() {
            Tok::Num { decimal: true, .. } | Tok::Num { imag: true, .. } => {
                return Err(ParseError {
                    pos,
                    kind: ParseErrorKind::NonIntegerExponent,
                })
            }
            Tok::Num { digits, .. } => digits,
            _ => {
                self.at -= 1;
                return Err(self.unexpected("an integer exponent"));
            }
        };
        if *self.peek() == Tok::Slash {
            return Err(self.err(ParseErrorKind::NonIntegerExponent));
        }
        if paren {
            if *self.peek() != Tok::RParen {
                return Err(self.unexpected("')'"));
            }
            self.bump();
        }
        let value = if negative { -value } else { value };
        value.to_i64().ok_or(ParseError {
            pos,
            kind: ParseErrorKind::ExponentOverflow,
        })
    }
}

/// Checks that `name` can be used as a variable.
pub fn validate_var_name(name: &str) -> Result<(), ParseError> {
    let mut chars = name.chars();
    let ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "i";
    if ok {
        Ok(())
    } else {
        Err(ParseError {
            pos: 0,
            kind: ParseErrorKind::InvalidVariable(name.to_string()),
        })
    }
}

/// Parses `text` as a Laurent polynomial in the ordered variables `vars`.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<LaurentPoly, ParseError> {
    for v in vars {
        validate_var_name(v)?;
    }
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, vars };
    p.poly()
}

/// Parses a single exact coefficient such as `-3/4`, `2i` or `(1/2-i)`.
pub fn parse_coefficient(text: &str) -> Result<GaussianRational, ParseError> {
    let p = parse_poly(text, &[])?;
    Ok(p.constant_term())
}

/// `[prefix1, ..., prefixN]`.
pub fn default_vars(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Canonical text form; terms appear in graded order and the output parses
/// back to the same polynomial.
pub fn format_poly(p: &LaurentPoly, vars: &[String]) -> String {
    assert_eq!(vars.len(), p.dim(), "one name per variable");
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (exp, c)) in p.terms().enumerate() {
        let negative =
            c.re().is_negative() && c.is_real() || c.re().is_zero() && c.im().is_negative();
        let magnitude = if negative { -c } else { c.clone() };
        match (idx, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mono = format_monomial(exp, vars);
        if mono.is_empty() {
            out.push_str(&magnitude.to_string());
        } else if magnitude.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{magnitude}*{mono}"));
        }
    }
    out
}

fn format_monomial(exp: &Exponent, vars: &[String]) -> String {
    exp.entries()
        .iter()
        .zip(vars)
        .filter(|(e, _)| **e != 0)
        .map(|(e, v)| {
            if *e == 1 {
                v.clone()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}
