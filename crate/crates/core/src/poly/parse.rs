//! Text grammar for polynomials.
//!
//! ```text
//! poly    := [sign] term (sign term)*
//! term    := coeff ["*"] [monomial] | monomial
//! monomial:= factor ("*" factor)*
//! factor  := var ["^" ["-"] digits]
//! var     := "z"                      (univariate)
//!          | "x" digits               (multivariate, x1 .. xN)
//! sign    := "+" | "-" | "−"
//! ```
//!
//! Whitespace is insignificant. Like terms are summed.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;

use super::laurent::MultiLaurentPoly;
use super::univariate::{UnivariateIntPoly, MAX_EXPONENT};
use crate::error::{Error, Result};

const MAX_VARIABLES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseMode {
    Univariate,
    Multivariate,
}

/// Result of [`parse_poly`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedPoly {
    Univariate(UnivariateIntPoly),
    Multivariate(MultiLaurentPoly),
}

pub fn parse_poly(text: &str, mode: ParseMode) -> Result<ParsedPoly> {
    Ok(match mode {
        ParseMode::Univariate => ParsedPoly::Univariate(parse_univariate(text)?),
        ParseMode::Multivariate => ParsedPoly::Multivariate(parse_multivariate(text)?),
    })
}

pub fn parse_univariate(text: &str) -> Result<UnivariateIntPoly> {
    let terms = Parser::new(text, ParseMode::Univariate).parse()?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let e = t.exps.get(&0).copied().unwrap_or(0);
        if e < 0 {
            return Err(Error::Parse {
                offset: t.offset,
                message: "negative exponent in univariate polynomial".into(),
            });
        }
        out.push((e as u64, t.coeff));
    }
    UnivariateIntPoly::from_terms(out)
}

/// Parses a Laurent polynomial in `x1 .. xN`; the variable count is the
/// largest index that appears (at least 1).
pub fn parse_multivariate(text: &str) -> Result<MultiLaurentPoly> {
    let terms = Parser::new(text, ParseMode::Multivariate).parse()?;
    let num_vars = terms
        .iter()
        .flat_map(|t| t.exps.keys().copied())
        .max()
        .map_or(1, |v| v + 1);
    MultiLaurentPoly::from_terms(
        num_vars,
        terms.into_iter().map(|t| {
            let mut j = vec![0i64; num_vars];
            for (v, e) in t.exps {
                j[v] = e;
            }
            (j, t.coeff)
        }),
    )
}

impl FromStr for UnivariateIntPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_univariate(s)
    }
}

impl FromStr for MultiLaurentPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_multivariate(s)
    }
}

struct RawTerm {
    offset: usize,
    coeff: BigInt,
    exps: BTreeMap<usize, i64>,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    mode: ParseMode,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, mode: ParseMode) -> Self {
        Self { src, pos: 0, mode }
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn is_sign(c: char) -> bool {
        matches!(c, '+' | '-' | '\u{2212}')
    }

    fn parse(mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let Some(c) = self.peek() else {
                if first {
                    return self.err(self.pos, "empty polynomial");
                }
                break;
            };
            let start = self.pos;
            let negative = if Self::is_sign(c) {
                self.bump();
                c != '+'
            } else if first {
                false
            } else {
                return self.err(start, format!("expected '+' or '-', found '{c}'"));
            };
            first = false;
            let mut term = self.term()?;
            term.offset = start;
            if negative {
                term.coeff = -term.coeff;
            }
            terms.push(term);
        }
        Ok(terms)
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if len == 0 {
            return self.err(start, "expected digits");
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn term(&mut self) -> Result<RawTerm> {
        let offset = self.pos;
        let mut coeff = BigInt::from(1);
        let mut exps = BTreeMap::new();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                coeff = BigInt::from_str(self.digits()?).expect("digits");
                match self.peek() {
                    Some('*') => {
                        self.bump();
                        self.factor(&mut exps)?;
                    }
                    Some(c) if c.is_ascii_alphabetic() => self.factor(&mut exps)?,
                    _ => {
                        return Ok(RawTerm {
                            offset,
                            coeff,
                            exps,
                        })
                    }
                }
            }
            Some(c) if c.is_ascii_alphabetic() => self.factor(&mut exps)?,
            Some(c) => return self.err(self.pos, format!("unexpected '{c}'")),
            None => return self.err(self.pos, "unexpected end of input"),
        }
        while self.peek() == Some('*') {
            self.bump();
            self.factor(&mut exps)?;
        }
        exps.retain(|_, e| *e != 0);
        Ok(RawTerm {
            offset,
            coeff,
            exps,
        })
    }

    fn factor(&mut self, exps: &mut BTreeMap<usize, i64>) -> Result<()> {
        self.skip_ws();
        let start = self.pos;
        let var = match (self.mode, self.bump()) {
            (ParseMode::Univariate, Some('z')) => 0,
            (ParseMode::Multivariate, Some('x')) => {
                let idx_at = self.pos;
                let idx: usize = self.digits()?.parse().map_err(|_| Error::Parse {
                    offset: idx_at,
                    message: "variable index too large".into(),
                })?;
                if idx == 0 {
                    return self.err(idx_at, "variables are numbered from x1");
                }
                if idx > MAX_VARIABLES {
                    return self.err(
                        idx_at,
                        format!("at most {MAX_VARIABLES} variables are supported"),
                    );
                }
                idx - 1
            }
            (ParseMode::Univariate, _) => return self.err(start, "expected variable 'z'"),
            (ParseMode::Multivariate, _) => return self.err(start, "expected variable 'x<N>'"),
        };
        let mut e: i128 = 1;
        if self.peek() == Some('^') {
            self.bump();
            let neg = matches!(self.peek(), Some('-' | '\u{2212}'));
            if neg {
                self.bump();
            }
            let d = self.digits()?;
            let mag: i128 = d.parse().unwrap_or(i128::MAX);
            e = if neg { -mag } else { mag };
        }
        let total = (exps.get(&var).copied().unwrap_or(0) as i128).saturating_add(e);
        if total.unsigned_abs() > MAX_EXPONENT as u128 {
            return Err(Error::ExponentOverflow);
        }
        exps.insert(var, total as i64);
        Ok(())
    }
}
