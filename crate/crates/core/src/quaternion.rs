//! Quaternions over an arbitrary real scalar ring.
//!
//! Two flavors are used throughout the crate: [`QRat`] with exact
//! arbitrary-precision rational components for the symbolic layer, and
//! [`QF`] with `f64` components for evaluation and stencils. Conversion goes
//! from exact to float only.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Quaternion with exact rational components.
pub type QRat = Quaternion<Rational>;

/// Quaternion with double-precision components.
pub type QF = Quaternion<f64>;

/// A commutative real scalar ring usable as quaternion components.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + for<'a> Add<&'a T, Output = T>
        + for<'a> Sub<&'a T, Output = T>
        + for<'a> Mul<&'a T, Output = T>
{
}

/// `w + x i + y j + z k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Quaternion<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn from_real(w: T) -> Self {
        Quaternion::new(w, T::zero(), T::zero(), T::zero())
    }

    pub fn zero() -> Self {
        Quaternion::from_real(T::zero())
    }

    pub fn one() -> Self {
        Quaternion::from_real(T::one())
    }

    pub fn i() -> Self {
        Quaternion::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Quaternion::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Quaternion::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn real(&self) -> T {
        self.w.clone()
    }

    /// Imaginary part as a pure quaternion.
    pub fn imag(&self) -> Self {
        Quaternion::new(T::zero(), self.x.clone(), self.y.clone(), self.z.clone())
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(
            self.w.clone(),
            -self.x.clone(),
            -self.y.clone(),
            -self.z.clone(),
        )
    }

    /// `w² + x² + y² + z²`.
    pub fn norm_sqr(&self) -> T {
        self.w.clone() * &self.w
            + &(self.x.clone() * &self.x)
            + &(self.y.clone() * &self.y)
            + &(self.z.clone() * &self.z)
    }

    /// Multiplies every component by a real scalar.
    pub fn scale(&self, s: &T) -> Self {
        Quaternion::new(
            self.w.clone() * s,
            self.x.clone() * s,
            self.y.clone() * s,
            self.z.clone() * s,
        )
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Quaternion::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn components(&self) -> [T; 4] {
        [
            self.w.clone(),
            self.x.clone(),
            self.y.clone(),
            self.z.clone(),
        ]
    }
}

impl<T: Scalar + Div<Output = T>> Quaternion<T> {
    /// Multiplicative inverse `conj(q) / |q|²`.
    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let c = self.conj();
        Ok(Quaternion::new(
            c.w / n.clone(),
            c.x / n.clone(),
            c.y / n.clone(),
            c.z / n,
        ))
    }
}

/// Hamilton product.
pub fn qmul<T: Scalar>(a: &Quaternion<T>, b: &Quaternion<T>) -> Quaternion<T> {
    let w = a.w.clone() * &b.w - &(a.x.clone() * &b.x) - &(a.y.clone() * &b.y) - &(a.z.clone() * &b.z);
    let x = a.w.clone() * &b.x + &(a.x.clone() * &b.w) + &(a.y.clone() * &b.z) - &(a.z.clone() * &b.y);
    let y = a.w.clone() * &b.y - &(a.x.clone() * &b.z) + &(a.y.clone() * &b.w) + &(a.z.clone() * &b.x);
    let z = a.w.clone() * &b.z + &(a.x.clone() * &b.y) - &(a.y.clone() * &b.x) + &(a.z.clone() * &b.w);
    Quaternion { w, x, y, z }
}

pub fn qconj<T: Scalar>(a: &Quaternion<T>) -> Quaternion<T> {
    a.conj()
}

pub fn qinv<T: Scalar + Div<Output = T>>(a: &Quaternion<T>) -> Result<Quaternion<T>> {
    a.inv()
}

impl<T: Scalar> Mul<&Quaternion<T>> for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, rhs: &Quaternion<T>) -> Quaternion<T> {
        qmul(self, rhs)
    }
}

impl<T: Scalar> Mul for Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, rhs: Quaternion<T>) -> Quaternion<T> {
        qmul(&self, &rhs)
    }
}

impl<T: Scalar> Add<&Quaternion<T>> for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, rhs: &Quaternion<T>) -> Quaternion<T> {
        Quaternion::new(
            self.w.clone() + &rhs.w,
            self.x.clone() + &rhs.x,
            self.y.clone() + &rhs.y,
            self.z.clone() + &rhs.z,
        )
    }
}

impl<T: Scalar> Add for Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, rhs: Quaternion<T>) -> Quaternion<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub<&Quaternion<T>> for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, rhs: &Quaternion<T>) -> Quaternion<T> {
        Quaternion::new(
            self.w.clone() - &rhs.w,
            self.x.clone() - &rhs.x,
            self.y.clone() - &rhs.y,
            self.z.clone() - &rhs.z,
        )
    }
}

impl<T: Scalar> Sub for Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, rhs: Quaternion<T>) -> Quaternion<T> {
        &self - &rhs
    }
}

impl<T: Scalar> AddAssign<&Quaternion<T>> for Quaternion<T> {
    fn add_assign(&mut self, rhs: &Quaternion<T>) {
        *self = &*self + rhs;
    }
}

impl<T: Scalar> SubAssign<&Quaternion<T>> for Quaternion<T> {
    fn sub_assign(&mut self, rhs: &Quaternion<T>) {
        *self = &*self - rhs;
    }
}

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Quaternion<T> {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl<T: Scalar> Neg for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Quaternion<T> {
        -self.clone()
    }
}

impl QRat {
    pub fn from_ints(w: i64, x: i64, y: i64, z: i64) -> Self {
        let r = |v: i64| Rational::from_integer(BigInt::from(v));
        Quaternion::new(r(w), r(x), r(y), r(z))
    }

    pub fn to_float(&self) -> QF {
        let f = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
        Quaternion::new(f(&self.w), f(&self.x), f(&self.y), f(&self.z))
    }

    /// Largest absolute component, used as an exact residual magnitude.
    pub fn max_abs(&self) -> Rational {
        [&self.w, &self.x, &self.y, &self.z]
            .into_iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Polar-style decomposition `x = alpha + unit * beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImaginaryDecomposition {
    pub alpha: f64,
    pub beta: f64,
    pub unit: QF,
}

impl ImaginaryDecomposition {
    pub fn reconstruct(&self) -> QF {
        &QF::from_real(self.alpha) + &self.unit.scale(&self.beta)
    }
}

impl QF {
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn decompose(&self) -> ImaginaryDecomposition {
        decompose(self)
    }

    /// Whether this is a pure imaginary quaternion of unit norm, within `tol`.
    pub fn is_imaginary_unit(&self, tol: f64) -> bool {
        self.w.abs() <= tol && (self.norm_sqr() - 1.0).abs() <= tol
    }
}

/// Splits `x` into real part, imaginary norm and imaginary direction.
///
/// At real points the direction defaults to `i`.
pub fn decompose(x: &QF) -> ImaginaryDecomposition {
    let im = x.imag();
    let beta = im.norm();
    let unit = if beta > 0.0 {
        im.scale(&(1.0 / beta))
    } else {
        QF::i()
    };
    ImaginaryDecomposition {
        alpha: x.w,
        beta,
        unit,
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QRat {
    /// Literal form `a+bi+cj+dk`, omitting zero components.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            (&self.w, ""),
            (&self.x, "i"),
            (&self.y, "j"),
            (&self.z, "k"),
        ];
        let mut out = String::new();
        for (c, unit) in parts {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if !(mag.is_one() && !unit.is_empty()) {
                out.push_str(&fmt_rational(&mag));
            }
            out.push_str(unit);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Display for QF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.w, self.x, self.y, self.z)
    }
}

/// Parses `12`, `-3/4`, `0.125` or `2.5/3` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let mut value = parse_decimal(num)?;
    if let Some(d) = den {
        let d = parse_decimal(d)?;
        if d.is_zero() {
            return None;
        }
        value /= d;
    }
    Some(if neg { -value } else { value })
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = num::pow(BigInt::from(10), frac_part.len());
    Some(Rational::new(numer, denom))
}

/// Parses a quaternion literal: `a+bi+cj+dk` (any subset of terms, any
/// order) or the tuple form `(a,b,c,d)`.
pub fn parse_quaternion(src: &str) -> Result<QRat> {
    let trimmed = src.trim();
    if let Some(inner) = trimmed.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        if inner.contains(',') {
            return parse_tuple(inner);
        }
        return parse_quaternion(inner);
    }
    parse_sum(src)
}

fn parse_tuple(inner: &str) -> Result<QRat> {
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::Syntax {
            position: 0,
            message: format!("tuple needs 4 components, found {}", parts.len()),
        });
    }
    let mut comps = Vec::with_capacity(4);
    for p in parts {
        comps.push(parse_rational(p).ok_or_else(|| Error::Syntax {
            position: 0,
            message: format!("invalid number '{}'", p.trim()),
        })?);
    }
    let mut it = comps.into_iter();
    Ok(Quaternion::new(
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    ))
}

fn parse_sum(src: &str) -> Result<QRat> {
    let chars: Vec<(usize, char)> = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Syntax {
            position: 0,
            message: "empty quaternion literal".into(),
        });
    }
    let mut acc = QRat::zero();
    let mut idx = 0;
    while idx < chars.len() {
        let start = chars[idx].0;
        let mut negative = false;
        if chars[idx].1 == '+' || chars[idx].1 == '-' {
            negative = chars[idx].1 == '-';
            idx += 1;
        } else if idx > 0 {
            return Err(Error::Syntax {
                position: start,
                message: "expected '+' or '-'".into(),
            });
        }
        let mut number = String::new();
        while idx < chars.len() && (chars[idx].1.is_ascii_digit() || chars[idx].1 == '.' || chars[idx].1 == '/') {
            number.push(chars[idx].1);
            idx += 1;
        }
        let mut unit = QRat::one();
        let mut has_unit = false;
        if idx < chars.len() {
            let u = match chars[idx].1 {
                'i' => Some(QRat::i()),
                'j' => Some(QRat::j()),
                'k' => Some(QRat::k()),
                _ => None,
            };
            if let Some(u) = u {
                unit = u;
                has_unit = true;
                idx += 1;
            }
        }
        if number.is_empty() && !has_unit {
            return Err(Error::Syntax {
                position: chars.get(idx).map_or(src.len(), |c| c.0),
                message: "expected a number or one of i, j, k".into(),
            });
        }
        let coeff = if number.is_empty() {
            Rational::one()
        } else {
            parse_rational(&number).ok_or_else(|| Error::Syntax {
                position: start,
                message: format!("invalid number '{number}'"),
            })?
        };
        let term = unit.scale(&coeff);
        if negative {
            acc -= &term;
        } else {
            acc += &term;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: i64, x: i64, y: i64, z: i64) -> QRat {
        QRat::from_ints(w, x, y, z)
    }

    fn half(n: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(2))
    }

    #[test]
    fn hamilton_relations() {
        let (i, j, k) = (QRat::i(), QRat::j(), QRat::k());
        let m1 = q(-1, 0, 0, 0);
        assert_eq!(&i * &i, m1);
        assert_eq!(&j * &j, m1);
        assert_eq!(&k * &k, m1);
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &k, i);
        assert_eq!(&k * &i, j);
        assert_eq!(&j * &i, -k.clone());
    }

    #[test]
    fn qmul_examples() {
        let p = q(3, -1, 2, 5);
        assert_eq!(qmul(&p, &QRat::one()), p);
        // (1+i)(1+j) = 1 + j + i + ij
        assert_eq!(qmul(&q(1, 1, 0, 0), &q(1, 0, 1, 0)), q(1, 1, 1, 1));
    }

    #[test]
    fn qconj_examples() {
        assert_eq!(qconj(&q(1, 2, 0, 0)), q(1, -2, 0, 0));
        assert_eq!(qconj(&q(3, 0, 0, 0)), q(3, 0, 0, 0));
        let ij = &QRat::i() * &QRat::j();
        assert_eq!(qconj(&ij), -QRat::k());
        assert_eq!(qconj(&ij), &qconj(&QRat::j()) * &qconj(&QRat::i()));
    }

    #[test]
    fn qinv_examples() {
        assert_eq!(qinv(&QRat::i()).unwrap(), -QRat::i());
        assert_eq!(
            qinv(&q(2, 0, 0, 0)).unwrap(),
            QRat::from_real(half(1))
        );
        let quarter = Rational::new(BigInt::from(1), BigInt::from(4));
        assert_eq!(
            qinv(&q(1, 1, 1, 1)).unwrap(),
            q(1, -1, -1, -1).scale(&quarter)
        );
        assert_eq!(qinv(&QRat::zero()), Err(Error::ZeroDivisor));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&QF::new(1.0, 2.0, 0.0, 0.0));
        assert_eq!((d.alpha, d.beta, d.unit), (1.0, 2.0, QF::i()));
        let d = decompose(&QF::from_real(3.0));
        assert_eq!((d.alpha, d.beta, d.unit), (3.0, 0.0, QF::i()));
        let d = decompose(&QF::new(1.0, 1.0, 1.0, 1.0));
        let s = 3f64.sqrt();
        assert_eq!(d.alpha, 1.0);
        assert!((d.beta - s).abs() < 1e-15);
        let expected = QF::new(0.0, 1.0 / s, 1.0 / s, 1.0 / s);
        assert!((&d.unit - &expected).max_abs() < 1e-15);
        assert!(d.unit.is_imaginary_unit(1e-14));
    }

    #[test]
    fn display_and_parse_literal() {
        let p = Quaternion::new(Rational::one(), Rational::from_integer(2.into()), Rational::zero(), -half(3));
        assert_eq!(p.to_string(), "1+2i-3/2k");
        assert_eq!(parse_quaternion("1+2i-3/2k").unwrap(), p);
        assert_eq!(parse_quaternion("(1, 2, 0, -1.5)").unwrap(), p);
        assert_eq!(parse_quaternion("-k").unwrap(), -QRat::k());
        assert_eq!(parse_quaternion("0.5j + 0.5j").unwrap(), QRat::j());
        assert_eq!(QRat::zero().to_string(), "0");
        assert!(parse_quaternion("1+").is_err());
        assert!(parse_quaternion("2x").is_err());
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("0.125"), Some(Rational::new(1.into(), 8.into())));
        assert_eq!(parse_rational("-3/4"), Some(Rational::new((-3).into(), 4.into())));
        assert_eq!(parse_rational("7"), Some(Rational::from_integer(7.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("."), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_q() -> impl Strategy<Value = QRat> {
            (-20i64..20, -20i64..20, -20i64..20, -20i64..20)
                .prop_map(|(a, b, c, d)| QRat::from_ints(a, b, c, d))
        }

        fn arb_qf() -> impl Strategy<Value = QF> {
            (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0)
                .prop_map(|(a, b, c, d)| QF::new(a, b, c, d))
        }

        proptest! {
            #[test]
            fn associative_exact(a in arb_q(), b in arb_q(), c in arb_q()) {
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            }

            #[test]
            fn conj_is_anti_homomorphism(a in arb_q(), b in arb_q()) {
                prop_assert_eq!(qconj(&(&a * &b)), &qconj(&b) * &qconj(&a));
            }

            #[test]
            fn conj_times_self_is_norm(a in arb_q()) {
                prop_assert_eq!(&a.conj() * &a, QRat::from_real(a.norm_sqr()));
            }

            #[test]
            fn inverse_is_exact(a in arb_q()) {
                prop_assume!(!a.is_zero());
                prop_assert_eq!(&a * &a.inv().unwrap(), QRat::one());
            }

            #[test]
            fn decompose_reconstructs(x in arb_qf()) {
                let d = decompose(&x);
                prop_assert!(d.beta >= 0.0);
                prop_assert!((&d.reconstruct() - &x).max_abs() <= 4.0 * f64::EPSILON * x.norm().max(1.0));
            }

            #[test]
            fn units_square_to_minus_one(x in arb_qf()) {
                let im = x.imag();
                prop_assume!(im.norm() > 1e-6);
                let u = im.scale(&(1.0 / im.norm()));
                prop_assert!((&(&u * &u) - &QF::from_real(-1.0)).max_abs() < 1e-14);
            }
        }
    }
}
