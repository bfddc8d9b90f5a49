//! Subset-indexed tensor algebra `H ⊗ R^(2^n)`.
//!
//! Basis elements `e_K` are indexed by subsets `K ⊂ {1..n}` stored as bit
//! sets. The Δ-product multiplies basis elements by
//! `e_H ⊗ e_K = (-1)^{|H∩K|} e_{HΔK}`; coefficients multiply in whatever
//! ring implements [`Coefficient`], so the same machinery serves plain
//! quaternion multivectors and stem functions with polynomial components.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quaternion::{QRat, Quaternion, Scalar, QF};

/// Largest supported number of variables.
pub const MAX_ARITY: usize = 12;

/// Tolerance used when checking float imaginary units.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// A subset of `{1..n}`; bit `h-1` is set iff `h` belongs to the subset.
///
/// Ordering is lexicographic on the ascending element lists, so
/// `{} < {1} < {1,2} < {1,3} < {2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SubsetIndex(u32);

impl SubsetIndex {
    pub const EMPTY: SubsetIndex = SubsetIndex(0);

    pub fn from_bits(bits: u32) -> Self {
        SubsetIndex(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// `{h}`, with `h` 1-based.
    pub fn singleton(h: usize) -> Self {
        debug_assert!((1..=32).contains(&h));
        SubsetIndex(1 << (h - 1))
    }

    pub fn from_elements(elements: &[usize]) -> Self {
        elements
            .iter()
            .fold(SubsetIndex::EMPTY, |acc, &h| acc.with(h))
    }

    /// `{lo, lo+1, ..., hi}`; empty when `lo > hi`.
    pub fn interval(lo: usize, hi: usize) -> Self {
        (lo.max(1)..=hi).fold(SubsetIndex::EMPTY, |acc, h| acc.with(h))
    }

    /// `{1..n}`.
    pub fn full(n: usize) -> Self {
        SubsetIndex::interval(1, n)
    }

    pub fn contains(self, h: usize) -> bool {
        h >= 1 && self.0 & (1 << (h - 1)) != 0
    }

    pub fn with(self, h: usize) -> Self {
        self.union(SubsetIndex::singleton(h))
    }

    pub fn without(self, h: usize) -> Self {
        SubsetIndex(self.0 & !SubsetIndex::singleton(h).0)
    }

    pub fn union(self, other: Self) -> Self {
        SubsetIndex(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SubsetIndex(self.0 & other.0)
    }

    pub fn sym_diff(self, other: Self) -> Self {
        SubsetIndex(self.0 ^ other.0)
    }

    /// `self \ other`.
    pub fn minus(self, other: Self) -> Self {
        SubsetIndex(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Largest element, if any.
    pub fn max_element(self) -> Option<usize> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros() as usize)
    }

    /// Smallest element, if any.
    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (1..=32).filter(move |&h| bits & (1 << (h - 1)) != 0)
    }

    /// Whether every element is at most `n`.
    pub fn fits(self, n: usize) -> bool {
        n >= 32 || self.0 >> n == 0
    }

    /// All `2^n` subsets of `{1..n}` in lexicographic order.
    pub fn all(n: usize) -> Vec<SubsetIndex> {
        let mut v: Vec<SubsetIndex> = (0..1u32 << n).map(SubsetIndex).collect();
        v.sort();
        v
    }

    /// All subsets of `self`, including `{}` and `self`.
    pub fn subsets(self) -> Vec<SubsetIndex> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = self.0;
        loop {
            out.push(SubsetIndex(sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.0;
        }
        out.sort();
        out
    }
}

impl Ord for SubsetIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements().cmp(other.elements())
    }
}

impl PartialOrd for SubsetIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().map(|h| h.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SubsetIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Syntax {
                position: 0,
                message: format!("subset must be written as {{a,b,...}}: '{s}'"),
            })?;
        let mut set = SubsetIndex::EMPTY;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let h: usize = part.parse().map_err(|_| Error::Syntax {
                position: 0,
                message: format!("invalid subset element '{part}'"),
            })?;
            if h == 0 || h > 32 {
                return Err(Error::IndexOutOfRange { index: h, arity: 32 });
            }
            set = set.with(h);
        }
        Ok(set)
    }
}

impl Serialize for SubsetIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `e_H ⊗ e_K = sign · e_{HΔK}` with `sign = (-1)^{|H∩K|}`.
pub fn delta_basis_product(h: SubsetIndex, k: SubsetIndex) -> (i8, SubsetIndex) {
    let sign = if h.intersection(k).len().is_multiple_of(2) { 1 } else { -1 };
    (sign, h.sym_diff(k))
}

/// Ring operations needed on multivector coefficients.
///
/// Products are taken in the written order `self · other`.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn negated(&self) -> Self;
    fn product(&self, other: &Self) -> Self;
}

impl<T: Scalar> Coefficient for Quaternion<T> {
    fn is_zero(&self) -> bool {
        Quaternion::is_zero(self)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn negated(&self) -> Self {
        -self
    }

    fn product(&self, other: &Self) -> Self {
        self * other
    }
}

/// Sparse element `Σ_K e_K a_K` of `A ⊗ R^(2^n)`; absent keys are zero.
#[derive(Clone, Debug)]
pub struct Multivector<C> {
    arity: usize,
    coeffs: BTreeMap<SubsetIndex, C>,
}

pub fn check_arity(n: usize) -> Result<()> {
    if n > MAX_ARITY {
        Err(Error::ArityTooLarge(n))
    } else {
        Ok(())
    }
}

impl<C: Coefficient> Multivector<C> {
    pub fn zero(arity: usize) -> Result<Self> {
        check_arity(arity)?;
        Ok(Multivector {
            arity,
            coeffs: BTreeMap::new(),
        })
    }

    /// Builds from `(K, a_K)` pairs, summing repeated keys and dropping zeros.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (SubsetIndex, C)>) -> Result<Self> {
        let mut mv = Multivector::zero(arity)?;
        for (k, c) in terms {
            if !k.fits(arity) {
                return Err(Error::IndexOutOfRange {
                    index: k.max_element().unwrap_or(0),
                    arity,
                });
            }
            mv.accumulate(k, &c);
        }
        mv.prune();
        Ok(mv)
    }

    /// `e_K · c`.
    pub fn basis(arity: usize, k: SubsetIndex, c: C) -> Result<Self> {
        Multivector::from_terms(arity, [(k, c)])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, k: SubsetIndex) -> Option<&C> {
        self.coeffs.get(&k)
    }

    /// Nonzero coefficients in lexicographic subset order.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetIndex, &C)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Coefficient::is_zero)
    }

    pub fn support(&self) -> Vec<SubsetIndex> {
        self.iter().filter(|(_, c)| !c.is_zero()).map(|(k, _)| k).collect()
    }

    fn accumulate(&mut self, k: SubsetIndex, c: &C) {
        match self.coeffs.entry(k) {
            Entry::Occupied(mut e) => e.get_mut().add_assign_ref(c),
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    /// Keeps only the components whose index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(SubsetIndex) -> bool) -> Self {
        Multivector {
            arity: self.arity,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| keep(**k))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Applies `f` to each component, re-indexing with the returned key.
    pub fn map_terms(&self, mut f: impl FnMut(SubsetIndex, &C) -> Option<(SubsetIndex, C)>) -> Self {
        let mut out = Multivector {
            arity: self.arity,
            coeffs: BTreeMap::new(),
        };
        for (k, c) in &self.coeffs {
            if let Some((k2, c2)) = f(*k, c) {
                out.accumulate(k2, &c2);
            }
        }
        out.prune();
        out
    }

    pub fn try_map_terms(
        &self,
        mut f: impl FnMut(SubsetIndex, &C) -> Result<Option<(SubsetIndex, C)>>,
    ) -> Result<Self> {
        let mut out = Multivector {
            arity: self.arity,
            coeffs: BTreeMap::new(),
        };
        for (k, c) in &self.coeffs {
            if let Some((k2, c2)) = f(*k, c)? {
                out.accumulate(k2, &c2);
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_arity(self.arity, other.arity)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.accumulate(*k, c);
        }
        out.prune();
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map_terms(|k, c| Some((k, c.negated())))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }
}

fn same_arity(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ArityMismatch { left: a, right: b })
    }
}

impl<C: Coefficient> PartialEq for Multivector<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.arity != other.arity {
            return false;
        }
        let lhs = self.coeffs.iter().filter(|(_, c)| !c.is_zero());
        let rhs = other.coeffs.iter().filter(|(_, c)| !c.is_zero());
        lhs.eq(rhs)
    }
}

/// `a ⊗ b = Σ_{H,K} (-1)^{|H∩K|} e_{HΔK} a_H b_K`.
pub fn mv_product<C: Coefficient>(a: &Multivector<C>, b: &Multivector<C>) -> Result<Multivector<C>> {
    same_arity(a.arity, b.arity)?;
    let mut out = Multivector {
        arity: a.arity,
        coeffs: BTreeMap::new(),
    };
    for (h, ah) in &a.coeffs {
        for (k, bk) in &b.coeffs {
            let (sign, l) = delta_basis_product(*h, *k);
            let p = ah.product(bk);
            if sign < 0 {
                out.accumulate(l, &p.negated());
            } else {
                out.accumulate(l, &p);
            }
        }
    }
    out.prune();
    Ok(out)
}

/// Complex structure `J_h`: `e_K ↦ e_{K∪{h}}` if `h ∉ K`, `-e_{K\{h}}` otherwise.
pub fn apply_j<C: Coefficient>(h: usize, a: &Multivector<C>) -> Result<Multivector<C>> {
    if h == 0 || h > a.arity {
        return Err(Error::IndexOutOfRange {
            index: h,
            arity: a.arity,
        });
    }
    Ok(a.map_terms(|k, c| {
        if k.contains(h) {
            Some((k.without(h), c.negated()))
        } else {
            Some((k.with(h), c.clone()))
        }
    }))
}

/// Ordered product `J_{k1} · … · J_{kp}` with `k1 < … < kp`; `1` for `{}`.
pub fn ordered_unit_product<T: Scalar>(units: &[Quaternion<T>], k: SubsetIndex) -> Quaternion<T> {
    k.elements()
        .fold(Quaternion::one(), |acc, h| &acc * &units[h - 1])
}

fn realize<T: Scalar>(units: &[Quaternion<T>], a: &Multivector<Quaternion<T>>) -> Quaternion<T> {
    let mut acc = Quaternion::zero();
    for (k, ak) in a.iter() {
        acc += &(&ordered_unit_product(units, k) * ak);
    }
    acc
}

/// `Φ_{J_1..J_n}(Σ e_K a_K) = Σ J_K · a_K` in the float flavor.
pub fn phi_map(units: &[QF], a: &Multivector<QF>) -> Result<QF> {
    same_arity(a.arity, units.len())?;
    if let Some(pos) = units.iter().position(|u| !u.is_imaginary_unit(UNIT_TOLERANCE)) {
        return Err(Error::NotAUnit { position: pos + 1 });
    }
    Ok(realize(units, a))
}

/// Exact-flavor `Φ`; units must be pure with norm exactly 1.
pub fn phi_map_exact(units: &[QRat], a: &Multivector<QRat>) -> Result<QRat> {
    same_arity(a.arity, units.len())?;
    if let Some(pos) = units
        .iter()
        .position(|u| !num::Zero::is_zero(&u.w) || !num::One::is_one(&u.norm_sqr()))
    {
        return Err(Error::NotAUnit { position: pos + 1 });
    }
    Ok(realize(units, a))
}
