//! Stem functions `F = Σ_K e_K F_K` with polynomial components.
//!
//! A map `F` into `H ⊗ R^(2^n)` is a stem function when each component is
//! even in `b_h` for `h ∉ K` and odd in `b_h` for `h ∈ K`. For polynomial
//! components this parity law is a purely syntactic condition on exponents,
//! which is what [`validate_stem`] checks.

use std::fmt;

use num::{BigInt, Zero};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::{Parity, QPolynomial, Var};
use crate::quaternion::{QRat, Rational};
use crate::tensoralgebra::{apply_j, check_arity, mv_product, Multivector, SubsetIndex};

#[derive(Clone, Debug, PartialEq)]
pub struct StemFunction {
    mv: Multivector<QPolynomial>,
}

/// A component breaking the parity law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub component: SubsetIndex,
    pub variable: usize,
    pub parity: Parity,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wanted = if self.component.contains(self.variable) {
            "odd"
        } else {
            "even"
        };
        write!(
            f,
            "component {} must be {wanted} in b{} but is {:?}",
            self.component, self.variable, self.parity
        )
    }
}

fn check_index(h: usize, n: usize) -> Result<()> {
    if h == 0 || h > n {
        Err(Error::IndexOutOfRange { index: h, arity: n })
    } else {
        Ok(())
    }
}

fn check_subset(set: SubsetIndex, n: usize) -> Result<()> {
    if set.fits(n) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            index: set.max_element().unwrap_or(0),
            arity: n,
        })
    }
}

fn half() -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(2))
}

impl StemFunction {
    pub fn zero(n: usize) -> Result<Self> {
        Ok(StemFunction {
            mv: Multivector::zero(n)?,
        })
    }

    pub fn from_components(n: usize, components: impl IntoIterator<Item = (SubsetIndex, QPolynomial)>) -> Result<Self> {
        let components: Vec<_> = components.into_iter().collect();
        for (_, p) in &components {
            if p.arity() != n {
                return Err(Error::ArityMismatch {
                    left: n,
                    right: p.arity(),
                });
            }
        }
        Ok(StemFunction {
            mv: Multivector::from_terms(n, components)?,
        })
    }

    pub fn from_multivector(mv: Multivector<QPolynomial>) -> Self {
        StemFunction { mv }
    }

    pub fn as_multivector(&self) -> &Multivector<QPolynomial> {
        &self.mv
    }

    pub fn arity(&self) -> usize {
        self.mv.arity()
    }

    /// `F_K`, the zero polynomial when not stored.
    pub fn component(&self, k: SubsetIndex) -> QPolynomial {
        self.mv
            .get(k)
            .cloned()
            .unwrap_or_else(|| QPolynomial::zero(self.arity()))
    }

    /// Nonzero components in lexicographic subset order.
    pub fn components(&self) -> impl Iterator<Item = (SubsetIndex, &QPolynomial)> {
        self.mv.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.mv.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(StemFunction {
            mv: self.mv.add(&other.mv)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(StemFunction {
            mv: self.mv.sub(&other.mv)?,
        })
    }

    pub fn neg(&self) -> Self {
        StemFunction { mv: self.mv.neg() }
    }

    /// Multiplies every component on the right by `c`.
    pub fn scale_right(&self, c: &QRat) -> Self {
        StemFunction {
            mv: self.mv.map_terms(|k, p| Some((k, p.scale_right(c)))),
        }
    }

    pub fn scale_real(&self, r: &Rational) -> Self {
        StemFunction {
            mv: self.mv.map_terms(|k, p| Some((k, p.scale_real(r)))),
        }
    }

    /// Componentwise formal derivative.
    pub fn partial(&self, var: Var) -> Self {
        StemFunction {
            mv: self.mv.map_terms(|k, p| Some((k, p.diff(var)))),
        }
    }

    /// Largest absolute coefficient component over all components; zero iff
    /// the stem is zero.
    pub fn max_abs_coeff(&self) -> Rational {
        self.mv
            .iter()
            .map(|(_, p)| p.max_abs_coeff())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// JSON dump `{ "arity": n, "components": { "{1,3}": "...", ... } }`
    /// listing all `2^n` components.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(StemDump(self)).expect("stem dump is always serializable")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&StemDump(self)).expect("stem dump is always serializable")
    }
}

/// Serializes a stem with components in subset order.
pub struct StemDump<'a>(pub &'a StemFunction);

struct ComponentMap<'a>(&'a StemFunction);

impl Serialize for ComponentMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.0.arity();
        let mut map = serializer.serialize_map(Some(1 << n))?;
        for k in SubsetIndex::all(n) {
            map.serialize_entry(&k.to_string(), &self.0.component(k).to_string())?;
        }
        map.end()
    }
}

impl Serialize for StemDump<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("arity", &self.0.arity())?;
        map.serialize_entry("components", &ComponentMap(self.0))?;
        map.end()
    }
}

impl fmt::Display for StemFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .components()
            .map(|(k, p)| format!("e{k}[{p}]"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Lists every `(K, h)` where `F_K` has the wrong parity in `b_h`.
pub fn validate_stem(f: &StemFunction) -> Vec<Violation> {
    let n = f.arity();
    let mut out = Vec::new();
    for (k, p) in f.components() {
        for h in 1..=n {
            let parity = p.beta_parity(h);
            let ok = if k.contains(h) {
                parity.is_odd()
            } else {
                parity.is_even()
            };
            if !ok {
                out.push(Violation {
                    component: k,
                    variable: h,
                    parity,
                });
            }
        }
    }
    out
}

impl StemFunction {
    pub fn is_valid(&self) -> bool {
        validate_stem(self).is_empty()
    }
}

/// `X_h = e_∅ a_h + e_{h} b_h`, the stem of the coordinate `x_h`.
pub fn coordinate_stem(h: usize, n: usize) -> Result<StemFunction> {
    check_arity(n)?;
    check_index(h, n)?;
    StemFunction::from_components(
        n,
        [
            (SubsetIndex::EMPTY, QPolynomial::alpha(n, h)?),
            (SubsetIndex::singleton(h), QPolynomial::beta(n, h)?),
        ],
    )
}

/// `Im(Z_h) = e_{h} b_h`, the stem of `Im(x_h)`.
pub fn imaginary_part_stem(h: usize, n: usize) -> Result<StemFunction> {
    check_arity(n)?;
    check_index(h, n)?;
    StemFunction::from_components(n, [(SubsetIndex::singleton(h), QPolynomial::beta(n, h)?)])
}

/// `e_∅ a_h - e_{h} b_h`, the stem of the conjugate coordinate.
pub fn conj_coordinate_stem(h: usize, n: usize) -> Result<StemFunction> {
    check_arity(n)?;
    check_index(h, n)?;
    StemFunction::from_components(
        n,
        [
            (SubsetIndex::EMPTY, QPolynomial::alpha(n, h)?),
            (SubsetIndex::singleton(h), QPolynomial::beta(n, h)?.neg()),
        ],
    )
}

/// `e_∅ q`.
pub fn const_stem(q: QRat, n: usize) -> Result<StemFunction> {
    StemFunction::from_components(n, [(SubsetIndex::EMPTY, QPolynomial::constant(n, q))])
}

/// `F ⊗ G`, componentwise `(F⊗G)_L = Σ_{HΔK=L} (-1)^{|H∩K|} F_H G_K`.
pub fn stem_tensor(f: &StemFunction, g: &StemFunction) -> Result<StemFunction> {
    Ok(StemFunction {
        mv: mv_product(&f.mv, &g.mv)?,
    })
}

/// A product `x_{v1} · … · x_{vk} · coeff` with nondecreasing indices.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedMonomial {
    pub vars: Vec<usize>,
    pub coeff: QRat,
}

impl OrderedMonomial {
    pub fn new(vars: Vec<usize>, coeff: QRat) -> Result<Self> {
        let m = OrderedMonomial { vars, coeff };
        if m.is_ordered() {
            Ok(m)
        } else {
            Err(Error::NonOrderedMonomial { term: m.to_string() })
        }
    }

    pub fn is_ordered(&self) -> bool {
        self.vars.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }
}

impl fmt::Display for OrderedMonomial {
    /// `x1*x3^2*(k)`; the coefficient is omitted when it is 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.vars.len() {
            let v = self.vars[i];
            let mut run = 1;
            while i + run < self.vars.len() && self.vars[i + run] == v {
                run += 1;
            }
            factors.push(if run == 1 {
                format!("x{v}")
            } else {
                format!("x{v}^{run}")
            });
            i += run;
        }
        let unit = self.coeff == QRat::one();
        if !unit || factors.is_empty() {
            factors.push(format!("({})", self.coeff));
        }
        f.write_str(&factors.join("*"))
    }
}

/// Sums `(X_{v1} ⊗ … ⊗ X_{vk}) ⊗ const(coeff)` over the terms, associating
/// left to right.
pub fn from_ordered_monomials(terms: &[OrderedMonomial], n: usize) -> Result<StemFunction> {
    check_arity(n)?;
    let mut acc = StemFunction::zero(n)?;
    for t in terms {
        if !t.is_ordered() {
            return Err(Error::NonOrderedMonomial { term: t.to_string() });
        }
        for &v in &t.vars {
            check_index(v, n)?;
        }
        let mut prod = const_stem(QRat::one(), n)?;
        for &v in &t.vars {
            prod = stem_tensor(&prod, &coordinate_stem(v, n)?)?;
        }
        let term = stem_tensor(&prod, &const_stem(t.coeff.clone(), n)?)?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

fn cauchy_riemann(f: &StemFunction, h: usize, conjugate: bool) -> Result<StemFunction> {
    check_index(h, f.arity())?;
    let da = f.partial(Var::Alpha(h));
    let jdb = StemFunction {
        mv: apply_j(h, &f.partial(Var::Beta(h)).mv)?,
    };
    let sum = if conjugate { da.add(&jdb)? } else { da.sub(&jdb)? };
    Ok(sum.scale_real(&half()))
}

/// `∂_h F = ½(∂F/∂a_h − J_h ∂F/∂b_h)`.
pub fn d_h(f: &StemFunction, h: usize) -> Result<StemFunction> {
    cauchy_riemann(f, h, false)
}

/// `∂̄_h F = ½(∂F/∂a_h + J_h ∂F/∂b_h)`.
pub fn dbar_h(f: &StemFunction, h: usize) -> Result<StemFunction> {
    cauchy_riemann(f, h, true)
}

/// Checks the componentwise Cauchy-Riemann system in `z_h`:
/// `∂F_K/∂a_h = ∂F_{K∪{h}}/∂b_h` and `∂F_K/∂b_h = −∂F_{K∪{h}}/∂a_h` for
/// every `K` not containing `h`.
pub fn satisfies_cauchy_riemann(f: &StemFunction, h: usize) -> Result<bool> {
    let n = f.arity();
    check_index(h, n)?;
    for k in SubsetIndex::all(n).into_iter().filter(|k| !k.contains(h)) {
        let fk = f.component(k);
        let fkh = f.component(k.with(h));
        if fk.diff(Var::Alpha(h)) != fkh.diff(Var::Beta(h)) {
            return Ok(false);
        }
        if fk.diff(Var::Beta(h)) != fkh.diff(Var::Alpha(h)).neg() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `F°_H = Σ_{K ⊂ H^c} e_K F_K`.
pub fn spherical_value_stem(f: &StemFunction, set: SubsetIndex) -> Result<StemFunction> {
    check_subset(set, f.arity())?;
    Ok(StemFunction {
        mv: f.mv.filter(|k| k.is_disjoint(set)),
    })
}

/// `F'_H = b_H^{-1} Σ_{K ⊂ H^c} e_K F_{K∪H}`, dividing one `b_h` at a time.
pub fn spherical_derivative_stem(f: &StemFunction, set: SubsetIndex) -> Result<StemFunction> {
    check_subset(set, f.arity())?;
    let mv = f.mv.try_map_terms(|k, p| {
        if !set.is_subset_of(k) {
            return Ok(None);
        }
        let mut q = p.clone();
        for h in set.elements() {
            q = q.div_beta(h)?;
        }
        Ok(Some((k.minus(set), q)))
    })?;
    Ok(StemFunction { mv })
}

/// Single-variable shorthand for [`spherical_value_stem`].
pub fn spherical_value_h(f: &StemFunction, h: usize) -> Result<StemFunction> {
    check_index(h, f.arity())?;
    spherical_value_stem(f, SubsetIndex::singleton(h))
}

/// Single-variable shorthand for [`spherical_derivative_stem`].
pub fn spherical_derivative_h(f: &StemFunction, h: usize) -> Result<StemFunction> {
    check_index(h, f.arity())?;
    spherical_derivative_stem(f, SubsetIndex::singleton(h))
}
