//! Polynomial expressions in ordered monomials, e.g. `x1*x3 + x2*x3^2*k`.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := primary ('^' int)*
//! primary:= 'x' int | number [i|j|k] | i | j | k | '(' literal ')'
//! ```
//!
//! Variables in a term must be nondecreasing. Real constants may appear
//! anywhere in a term; a non-real constant is a right coefficient and may
//! only follow the variables.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::quaternion::{parse_quaternion, parse_rational, QRat, Quaternion};
use crate::stem::{from_ordered_monomials, OrderedMonomial, StemFunction};
use crate::tensoralgebra::check_arity;

#[derive(Clone, Debug, PartialEq)]
pub struct Expression {
    arity: usize,
    monomials: Vec<OrderedMonomial>,
}

impl Expression {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn monomials(&self) -> &[OrderedMonomial] {
        &self.monomials
    }

    pub fn to_stem(&self) -> Result<StemFunction> {
        from_ordered_monomials(&self.monomials, self.arity)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.monomials.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Var(usize),
    Int(u32),
    Const(QRat),
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn unit(c: char) -> Option<QRat> {
    match c {
        'i' => Some(QRat::i()),
        'j' => Some(QRat::j()),
        'k' => Some(QRat::k()),
        _ => None,
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((pos, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((pos, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            'x' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(syntax(pos, "expected a variable index after 'x'"));
                }
                let text: String = chars[start..i].iter().map(|c| c.1).collect();
                let idx = text.parse().map_err(|_| syntax(pos, "variable index too large"))?;
                out.push((pos, Tok::Var(idx)));
            }
            '(' => {
                let mut depth = 0;
                let mut j = i;
                while j < chars.len() {
                    match chars[j].1 {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    j += 1;
                }
                if j == chars.len() {
                    return Err(syntax(pos, "unclosed '('"));
                }
                let end = chars[j].0;
                let q = parse_quaternion(&src[pos..=end]).map_err(|e| match e {
                    Error::Syntax { position, message } => syntax(pos + position, message),
                    other => other,
                })?;
                out.push((pos, Tok::Const(q)));
                i = j + 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.' || chars[i].1 == '/') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().map(|c| c.1).collect();
                let suffix = chars.get(i).and_then(|c| unit(c.1));
                if let Some(u) = suffix {
                    i += 1;
                    let r = parse_rational(&text).ok_or_else(|| syntax(pos, format!("invalid number '{text}'")))?;
                    out.push((pos, Tok::Const(u.scale(&r))));
                } else if let Ok(n) = text.parse::<u32>() {
                    out.push((pos, Tok::Int(n)));
                } else {
                    let r = parse_rational(&text).ok_or_else(|| syntax(pos, format!("invalid number '{text}'")))?;
                    out.push((pos, Tok::Const(Quaternion::from_real(r))));
                }
            }
            c => match unit(c) {
                Some(u) => {
                    out.push((pos, Tok::Const(u)));
                    i += 1;
                }
                None => return Err(syntax(pos, format!("unexpected character '{c}'"))),
            },
        }
    }
    Ok(out)
}

enum Factor {
    Var(usize, u32),
    Const(QRat),
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    arity: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |t| t.0)
    }

    fn factor(&mut self) -> Result<Factor> {
        let at = self.offset();
        let mut f = match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Var(v))) => {
                if v == 0 || v > self.arity {
                    return Err(Error::IndexOutOfRange {
                        index: v,
                        arity: self.arity,
                    });
                }
                Factor::Var(v, 1)
            }
            Some((_, Tok::Int(n))) => Factor::Const(QRat::from_ints(n as i64, 0, 0, 0)),
            Some((_, Tok::Const(q))) => Factor::Const(q),
            _ => return Err(syntax(at, "expected a variable or a constant")),
        };
        self.pos += 1;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Int(e)) => *e,
                _ => return Err(syntax(self.offset(), "expected an integer exponent")),
            };
            self.pos += 1;
            f = match f {
                Factor::Var(v, p) => Factor::Var(v, p * e),
                Factor::Const(q) => Factor::Const(q.pow(e)),
            };
        }
        Ok(f)
    }

    fn term(&mut self, negative: bool) -> Result<OrderedMonomial> {
        let start = self.offset();
        let mut vars: Vec<usize> = Vec::new();
        let mut real = QRat::one();
        let mut right = QRat::one();
        let mut ordered = true;
        loop {
            match self.factor()? {
                Factor::Var(v, p) => {
                    if !right.is_real() || vars.last().is_some_and(|&last| last > v) {
                        ordered = false;
                    }
                    vars.extend(std::iter::repeat_n(v, p as usize));
                }
                Factor::Const(q) if q.is_real() => real = &real * &q,
                Factor::Const(q) => right = &right * &q,
            }
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        if !ordered {
            let end = self.offset();
            return Err(Error::NonOrderedMonomial {
                term: self.src[start..end].trim().to_string(),
            });
        }
        let mut coeff = &real * &right;
        if negative {
            coeff = -coeff;
        }
        Ok(OrderedMonomial { vars, coeff })
    }

    fn expr(&mut self) -> Result<Vec<OrderedMonomial>> {
        let mut terms = Vec::new();
        let mut negative = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negative = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            terms.push(self.term(negative)?);
            match self.peek() {
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                None => break,
                Some(_) => return Err(syntax(self.offset(), "expected '+', '-' or '*'")),
            }
            self.pos += 1;
        }
        Ok(terms)
    }
}

/// Parses `source` as a polynomial in `x1..xn`, merging equal monomials.
pub fn parse(source: &str, n: usize) -> Result<Expression> {
    check_arity(n)?;
    let toks = lex(source)?;
    if toks.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser {
        src: source,
        toks,
        pos: 0,
        arity: n,
    };
    let terms = p.expr()?;
    let mut merged: BTreeMap<Vec<usize>, QRat> = BTreeMap::new();
    for t in terms {
        let slot = merged.entry(t.vars).or_insert_with(QRat::zero);
        *slot += &t.coeff;
    }
    let monomials = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(vars, coeff)| OrderedMonomial { vars, coeff })
        .collect();
    Ok(Expression { arity: n, monomials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    use crate::quaternion::Rational;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn parses_the_example() {
        let e = parse("x1*x3 + x2*x3^2*k", 3).unwrap();
        assert_eq!(
            e.monomials(),
            &[
                OrderedMonomial {
                    vars: vec![1, 3],
                    coeff: QRat::one()
                },
                OrderedMonomial {
                    vars: vec![2, 3, 3],
                    coeff: QRat::k()
                },
            ]
        );
        assert_eq!(e.to_string(), "x1*x3 + x2*x3^2*(k)");
    }

    #[test]
    fn constants() {
        let e = parse("k", 1).unwrap();
        assert_eq!(e.monomials().len(), 1);
        assert!(e.monomials()[0].vars.is_empty());
        assert_eq!(e.monomials()[0].coeff, QRat::k());
        let e = parse("2*x1*(1+i) - 1/2*x1*i", 1).unwrap();
        assert_eq!(e.monomials()[0].coeff, QRat::new(r(2, 1), r(3, 2), r(0, 1), r(0, 1)));
        let e = parse("x1*(0,1,0,0)*2j", 1).unwrap();
        assert_eq!(e.monomials()[0].coeff, QRat::from_ints(0, 0, 0, 2));
        assert!(parse("x1 - x1", 1).unwrap().monomials().is_empty());
        assert_eq!(parse("-x1^2^2", 1).unwrap().monomials()[0].vars, vec![1; 4]);
    }

    #[test]
    fn order_errors() {
        assert_eq!(
            parse("x2*x1", 2),
            Err(Error::NonOrderedMonomial { term: "x2*x1".into() })
        );
        assert!(matches!(parse("x1 + k*x1", 1), Err(Error::NonOrderedMonomial { .. })));
        assert!(parse("2*x1", 1).is_ok());
        assert!(matches!(parse("x3", 2), Err(Error::IndexOutOfRange { index: 3, arity: 2 })));
    }

    #[test]
    fn syntax_errors() {
        for (src, at) in [("", 0), ("x1 +", 4), ("x1 x2", 3), ("x", 0), ("x1^k", 3), ("x1 ? 2", 3), ("(1+i", 0)] {
            match parse(src, 2) {
                Err(Error::Syntax { position, .. }) => assert_eq!(position, at, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    fn small_expr() -> impl Strategy<Value = String> {
        let term = (prop::collection::vec(1usize..=3, 0..4), -3i64..=3, -2i64..=2, 0usize..3).prop_map(|(mut v, a, b, u)| {
            v.sort();
            let mut parts: Vec<String> = v.iter().map(|x| format!("x{x}")).collect();
            parts.push(format!("({a}{b:+}{})", ["i", "j", "k"][u]));
            parts.join("*")
        });
        prop::collection::vec(term, 1..4).prop_map(|ts| ts.join(" - "))
    }

    proptest! {
        #[test]
        fn print_parse_is_idempotent(src in small_expr()) {
            let e = parse(&src, 3).unwrap();
            let again = parse(&e.to_string(), 3).unwrap();
            prop_assert_eq!(again, e);
        }
    }
}
