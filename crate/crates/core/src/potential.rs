//! Potentials as exact rational functions: parsing, homogeneity validation,
//! derivatives, and the one-variable projective restriction for n = 2.

use crate::multipoly::MultiPoly;
use crate::ratfunc::{RatFunc, RatFuncError};
use crate::rational::GaussianRational;
use num::complex::Complex64;
use num::BigInt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PotentialError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("not homogeneous: monomial degrees {0} and {1} disagree")]
    NotHomogeneous(i64, i64),
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("{0}")]
    Algebra(#[from] RatFuncError),
}

/// A homogeneous potential with its validated degree.
#[derive(Clone, PartialEq, Debug)]
pub struct Potential {
    pub expr: RatFunc,
    pub degree: i64,
    pub varnames: Vec<String>,
}

/// Gradient as exact rational functions, one per coordinate.
#[derive(Clone, PartialEq, Debug)]
pub struct Gradient(pub Vec<RatFunc>);

/// Symmetric Hessian of exact rational functions.
#[derive(Clone, PartialEq, Debug)]
pub struct Hessian(pub Vec<Vec<RatFunc>>);

impl Potential {
    /// Validates homogeneity; on failure reports two disagreeing degrees.
    pub fn from_ratfunc(expr: RatFunc, varnames: Vec<String>) -> Result<Self, PotentialError> {
        assert_eq!(expr.nvars(), varnames.len());
        match expr.homogeneous_degree() {
            Some(degree) => Ok(Potential {
                expr,
                degree,
                varnames,
            }),
            None => {
                let witness = |p: &MultiPoly| -> Option<(i64, i64)> {
                    let mut degs = p.terms().map(|(m, _)| m.total_degree() as i64);
                    let first = degs.next()?;
                    degs.find(|&d| d != first).map(|d| (first, d))
                };
                let (a, b) = witness(expr.num())
                    .or_else(|| witness(expr.den()))
                    .unwrap_or((0, 0));
                Err(PotentialError::NotHomogeneous(a, b))
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.expr.nvars()
    }

    pub fn gradient(&self) -> Gradient {
        Gradient(
            (0..self.nvars())
                .map(|i| self.expr.derivative(i))
                .collect(),
        )
    }

    pub fn hessian(&self) -> Hessian {
        let grad = self.gradient();
        let mut rows: Vec<Vec<RatFunc>> = Vec::with_capacity(self.nvars());
        for i in 0..self.nvars() {
            let mut row = Vec::with_capacity(self.nvars());
            for j in 0..self.nvars() {
                if j < i {
                    let prior: &RatFunc = &rows[j][i];
                    row.push(prior.clone());
                } else {
                    row.push(grad.0[i].derivative(j));
                }
            }
            rows.push(row);
        }
        Hessian(rows)
    }

    /// v(z) = V(1, z) for two-variable potentials.
    pub fn restrict_projective(&self) -> Result<RatFunc, PotentialError> {
        assert_eq!(self.nvars(), 2, "projective restriction needs two variables");
        let sub = self
            .expr
            .substitute(0, &GaussianRational::one())
            .map_err(PotentialError::Algebra)?;
        let num = sub.num().project(&[1]).expect("variable one eliminated");
        let den = sub.den().project(&[1]).expect("variable one eliminated");
        RatFunc::new(num, den).map_err(PotentialError::Algebra)
    }

    pub fn grad_eval_complex(&self, grad: &Gradient, point: &[Complex64]) -> Option<Vec<Complex64>> {
        grad.0
            .iter()
            .map(|g| g.eval_complex(point).ok())
            .collect()
    }

    pub fn display(&self) -> String {
        let names: Vec<&str> = self.varnames.iter().map(|s| s.as_str()).collect();
        self.expr.display_with(&names)
    }
}

impl Hessian {
    pub fn eval_complex(&self, point: &[Complex64]) -> Option<Vec<Vec<Complex64>>> {
        self.0
            .iter()
            .map(|row| row.iter().map(|f| f.eval_complex(point).ok()).collect())
            .collect()
    }
}

/// Parses an expression over the named variables into a [`Potential`].
///
/// Grammar: `+ - * /`, `^` with an integer exponent, parentheses, integer
/// literals, and `i` as the imaginary unit unless `i` is a declared variable.
pub fn parse_potential(text: &str, vars: &[&str]) -> Result<Potential, PotentialError> {
    let expr = parse_expression(text, vars)?;
    Potential::from_ratfunc(expr, vars.iter().map(|s| s.to_string()).collect())
}

/// Expression parser shared by potentials and parametric families.
pub fn parse_expression(text: &str, vars: &[&str]) -> Result<RatFunc, PotentialError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        vars,
        text_len: text.len(),
    };
    let e = p.expr()?;
    if p.pos < p.tokens.len() {
        return Err(PotentialError::Syntax {
            pos: p.tokens[p.pos].1,
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, PotentialError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: BigInt = text[start..i].parse().expect("digit run");
                out.push((Tok::Int(lit), start));
            }
            _ if b.is_ascii_alphabetic() || b == b'_' || b == b'$' => {
                let start = i;
                i += 1;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(PotentialError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [&'a str],
    text_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.text_len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), PotentialError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(PotentialError::Syntax {
                pos: self.here(),
                msg: format!("expected {}", what),
            })
        }
    }

    fn expr(&mut self) -> Result<RatFunc, PotentialError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, PotentialError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    let at = self.here();
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.checked_div(&rhs).map_err(|_| PotentialError::Syntax {
                        pos: at,
                        msg: "division by zero".into(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc, PotentialError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            let at = self.here();
            self.pos += 1;
            let negative = if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = match self.bump() {
                Some(Tok::Int(n)) => n,
                _ => {
                    return Err(PotentialError::Syntax {
                        pos: at,
                        msg: "expected integer exponent after `^`".into(),
                    })
                }
            };
            let e: i32 = e.try_into().map_err(|_| PotentialError::Syntax {
                pos: at,
                msg: "exponent too large".into(),
            })?;
            let e = if negative { -e } else { e };
            return base.pow(e).map_err(|_| PotentialError::Syntax {
                pos: at,
                msg: "zero raised to a negative power".into(),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc, PotentialError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(RatFunc::constant(
                self.vars.len(),
                GaussianRational::from_bigint(n),
            )),
            Some(Tok::Ident(name)) => {
                if let Some(idx) = self.vars.iter().position(|v| *v == name) {
                    Ok(RatFunc::var(self.vars.len(), idx))
                } else if name == "i" {
                    Ok(RatFunc::constant(self.vars.len(), GaussianRational::i()))
                } else {
                    Err(PotentialError::UnknownVariable { pos: at, name })
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "closing parenthesis")?;
                Ok(e)
            }
            _ => Err(PotentialError::Syntax {
                pos: at,
                msg: "expected a value".into(),
            }),
        }
    }
}

/// One corpus entry: `name ; comma-separated vars ; expression`.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub vars: Vec<String>,
    pub expression: String,
    pub potential: Potential,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: expected `name ; vars ; expression`")]
    Shape { line: usize },
    #[error("line {line}: {err}")]
    Entry { line: usize, err: PotentialError },
}

/// Parses a corpus file; `#` starts a comment, blank lines are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let parts: Vec<&str> = body.splitn(3, ';').map(|s| s.trim()).collect();
        if parts.len() != 3 || parts.iter().any(|p| p.is_empty()) {
            return Err(CorpusError::Shape { line });
        }
        let vars: Vec<String> = parts[1].split(',').map(|s| s.trim().to_string()).collect();
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let potential = parse_potential(parts[2], &var_refs)
            .map_err(|err| CorpusError::Entry { line, err })?;
        out.push(CorpusEntry {
            name: parts[0].to_string(),
            vars,
            expression: parts[2].to_string(),
            potential,
        });
    }
    Ok(out)
}
