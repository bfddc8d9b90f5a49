//! Polynomials in the central real variables `a1..an, b1..bn` (the real and
//! imaginary parts of `z_h = a_h + i b_h`) with exact quaternion
//! coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors (`n` exponents
//! for the `a`'s followed by `n` for the `b`'s), so iteration order is
//! lexicographic and equality is structural. Coefficients are stored on the
//! left of the monomial; the variables are central so this is bookkeeping
//! only.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::quaternion::{QRat, Rational, QF};
use crate::tensoralgebra::Coefficient;

/// One of the `2n` polynomial variables, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    /// Real part `a_h` of `z_h`.
    Alpha(usize),
    /// Imaginary part `b_h` of `z_h`.
    Beta(usize),
}

impl Var {
    fn slot(self, arity: usize) -> usize {
        match self {
            Var::Alpha(h) => h - 1,
            Var::Beta(h) => arity + h - 1,
        }
    }

    fn index(self) -> usize {
        match self {
            Var::Alpha(h) | Var::Beta(h) => h,
        }
    }
}

pub type Exponents = Vec<u32>;

/// A single stored term; `coeff` is never zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub exponents: Exponents,
    pub coeff: QRat,
}

/// Behaviour of a polynomial under `b_h ↦ -b_h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// The zero polynomial, which is both even and odd.
    Zero,
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn is_even(self) -> bool {
        matches!(self, Parity::Zero | Parity::Even)
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Parity::Zero | Parity::Odd)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QPolynomial {
    arity: usize,
    terms: BTreeMap<Exponents, QRat>,
}

fn check_var(var: Var, arity: usize) -> Result<()> {
    let h = var.index();
    if h == 0 || h > arity {
        Err(Error::IndexOutOfRange { index: h, arity })
    } else {
        Ok(())
    }
}

impl QPolynomial {
    pub fn zero(arity: usize) -> Self {
        QPolynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: QRat) -> Self {
        let mut p = QPolynomial::zero(arity);
        p.add_term(vec![0; 2 * arity], c);
        p
    }

    /// The polynomial consisting of the single variable `var`.
    pub fn var(arity: usize, var: Var) -> Result<Self> {
        check_var(var, arity)?;
        let mut e = vec![0; 2 * arity];
        e[var.slot(arity)] = 1;
        let mut p = QPolynomial::zero(arity);
        p.add_term(e, QRat::one());
        Ok(p)
    }

    pub fn alpha(arity: usize, h: usize) -> Result<Self> {
        QPolynomial::var(arity, Var::Alpha(h))
    }

    pub fn beta(arity: usize, h: usize) -> Result<Self> {
        QPolynomial::var(arity, Var::Beta(h))
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut p = QPolynomial::zero(arity);
        for m in terms {
            if m.exponents.len() != 2 * arity {
                return Err(Error::ArityMismatch {
                    left: arity,
                    right: m.exponents.len() / 2,
                });
            }
            p.add_term(m.exponents, m.coeff);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &QRat)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms
            .iter()
            .map(|(e, c)| Monomial {
                exponents: e.clone(),
                coeff: c.clone(),
            })
            .collect()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn exponent_of(exponents: &Exponents, var: Var, arity: usize) -> u32 {
        exponents[var.slot(arity)]
    }

    fn add_term(&mut self, e: Exponents, c: QRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn same_arity(&self, other: &Self) -> Result<()> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QPolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Product with coefficients multiplied in written order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = QPolynomial::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    /// `c · p`.
    pub fn scale_left(&self, c: &QRat) -> Self {
        self.map_coeffs(|x| c * x)
    }

    /// `p · c`.
    pub fn scale_right(&self, c: &QRat) -> Self {
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_real(&self, r: &Rational) -> Self {
        self.map_coeffs(|x| x.scale(r))
    }

    fn map_coeffs(&self, mut f: impl FnMut(&QRat) -> QRat) -> Self {
        let mut out = QPolynomial::zero(self.arity);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Formal partial derivative.
    pub fn diff(&self, var: Var) -> Self {
        if check_var(var, self.arity).is_err() {
            return QPolynomial::zero(self.arity);
        }
        let slot = var.slot(self.arity);
        let mut out = QPolynomial::zero(self.arity);
        for (e, c) in &self.terms {
            let p = e[slot];
            if p == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[slot] -= 1;
            out.add_term(e2, c.scale(&Rational::from_integer(BigInt::from(p))));
        }
        out
    }

    /// Exact quotient by `b_h`; fails if some term has no `b_h` factor.
    pub fn div_beta(&self, h: usize) -> Result<Self> {
        check_var(Var::Beta(h), self.arity)?;
        let slot = Var::Beta(h).slot(self.arity);
        let mut out = QPolynomial::zero(self.arity);
        for (e, c) in &self.terms {
            if e[slot] == 0 {
                return Err(Error::NotDivisible { variable: h });
            }
            let mut e2 = e.clone();
            e2[slot] -= 1;
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// `b_h · p`.
    pub fn mul_beta(&self, h: usize) -> Result<Self> {
        check_var(Var::Beta(h), self.arity)?;
        let slot = Var::Beta(h).slot(self.arity);
        let mut out = QPolynomial::zero(self.arity);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[slot] += 1;
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    pub fn beta_parity(&self, h: usize) -> Parity {
        if self.terms.is_empty() {
            return Parity::Zero;
        }
        let slot = Var::Beta(h).slot(self.arity);
        let (mut even, mut odd) = (false, false);
        for e in self.terms.keys() {
            if e[slot] % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (true, false) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::Mixed,
        }
    }

    /// Whether some term contains `var` with positive exponent.
    pub fn depends_on(&self, var: Var) -> bool {
        let slot = var.slot(self.arity);
        self.terms.keys().any(|e| e[slot] > 0)
    }

    /// Substitutes `point = (a1..an, b1..bn)`.
    pub fn eval(&self, point: &[f64]) -> QF {
        assert_eq!(point.len(), 2 * self.arity, "point must have 2n coordinates");
        self.to_float().eval(point)
    }

    /// Largest absolute rational coefficient component.
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(QRat::max_abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn to_float(&self) -> FloatPolynomial {
        FloatPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.to_float()))
                .collect(),
        }
    }
}

pub fn poly_add(p: &QPolynomial, q: &QPolynomial) -> Result<QPolynomial> {
    p.add(q)
}

pub fn poly_mul(p: &QPolynomial, q: &QPolynomial) -> Result<QPolynomial> {
    p.mul(q)
}

pub fn poly_scale(p: &QPolynomial, c: &QRat) -> QPolynomial {
    p.scale_left(c)
}

pub fn poly_diff(p: &QPolynomial, var: Var) -> QPolynomial {
    p.diff(var)
}

pub fn poly_div_beta(p: &QPolynomial, h: usize) -> Result<QPolynomial> {
    p.div_beta(h)
}

pub fn poly_eval(p: &QPolynomial, point: &[f64]) -> QF {
    p.eval(point)
}

pub fn poly_beta_parity(p: &QPolynomial, h: usize) -> Parity {
    p.beta_parity(h)
}

impl Coefficient for QPolynomial {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        debug_assert_eq!(self.arity, other.arity);
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    fn negated(&self) -> Self {
        self.neg()
    }

    fn product(&self, other: &Self) -> Self {
        self.mul(other).expect("polynomial arity is fixed by the enclosing multivector")
    }
}

impl fmt::Display for QPolynomial {
    /// Canonical rendering, e.g. `a1*a3 + (k)*a2*a3^2 + (-k)*a2*b3^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let n = self.arity;
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            for (slot, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let name = if slot < n {
                    format!("a{}", slot + 1)
                } else {
                    format!("b{}", slot - n + 1)
                };
                factors.push(if p == 1 { name } else { format!("{name}^{p}") });
            }
            if factors.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_real() && c.w.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "({c})*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Float image of a [`QPolynomial`] for repeated evaluation.
#[derive(Clone, Debug)]
pub struct FloatPolynomial {
    terms: Vec<(Exponents, QF)>,
}

impl FloatPolynomial {
    pub fn eval(&self, point: &[f64]) -> QF {
        let mut acc = QF::zero();
        for (e, c) in &self.terms {
            let mut m = 1.0;
            for (x, &p) in point.iter().zip(e) {
                if p > 0 {
                    m *= x.powi(p as i32);
                }
            }
            acc += &c.scale(&m);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
