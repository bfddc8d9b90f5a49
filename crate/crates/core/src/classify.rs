//! Structural membership tests for the classes `S_H`, `SR_H`, `S_{c,H}` and
//! slice regularity. Everything here is exact: a component is zero or not.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::polyring::Var;
use crate::stem::{dbar_h, spherical_derivative_stem, spherical_value_stem, StemFunction};
use crate::tensoralgebra::SubsetIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    /// `F_K != 0` with `h ∈ K` and `K` meeting `{1..h-1}`.
    NotSlice,
    /// `(∂̄_h F)_K != 0`.
    NotHolomorphic,
    /// `F_K != 0` with `K` meeting `H`.
    NotCircular,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::NotSlice => "component mixes x_h with an earlier variable",
            Reason::NotHolomorphic => "dbar_h component is nonzero",
            Reason::NotCircular => "component contains h",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Witness {
    pub component: SubsetIndex,
    pub variable: usize,
    pub reason: Reason,
}

/// Outcome of a membership test. Witnesses are sorted, least component first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

impl Membership {
    fn from_witnesses(mut witnesses: Vec<Witness>) -> Self {
        witnesses.sort();
        witnesses.dedup();
        Membership {
            holds: witnesses.is_empty(),
            witnesses,
        }
    }

    pub fn first_witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

fn check_set(f: &StemFunction, set: SubsetIndex) -> Result<()> {
    if set.fits(f.arity()) {
        Ok(())
    } else {
        Err(crate::Error::IndexOutOfRange {
            index: set.max_element().unwrap_or(0),
            arity: f.arity(),
        })
    }
}

fn slice_witnesses(f: &StemFunction, set: SubsetIndex) -> Vec<Witness> {
    let mut out = Vec::new();
    for h in set.elements() {
        let earlier = SubsetIndex::interval(1, h - 1);
        for (k, _) in f.components() {
            if k.contains(h) && !k.is_disjoint(earlier) {
                out.push(Witness {
                    component: k,
                    variable: h,
                    reason: Reason::NotSlice,
                });
            }
        }
    }
    out
}

fn holomorphic_witnesses(f: &StemFunction, set: SubsetIndex) -> Result<Vec<Witness>> {
    let mut out = Vec::new();
    for h in set.elements() {
        for (k, _) in dbar_h(f, h)?.components() {
            out.push(Witness {
                component: k,
                variable: h,
                reason: Reason::NotHolomorphic,
            });
        }
    }
    Ok(out)
}

/// `f ∈ S_H`: for every `h ∈ H`, `F_{P∪{h}∪Q} = 0` whenever `P ⊂ {1..h-1}`
/// is nonempty and `Q ⊂ {h+1..n}`.
pub fn is_slice_wrt(f: &StemFunction, set: SubsetIndex) -> Result<Membership> {
    check_set(f, set)?;
    Ok(Membership::from_witnesses(slice_witnesses(f, set)))
}

/// `f ∈ SR_H = S_H ∩ ker ∂̄_h for h ∈ H`.
pub fn is_slice_regular_wrt(f: &StemFunction, set: SubsetIndex) -> Result<Membership> {
    check_set(f, set)?;
    let mut w = slice_witnesses(f, set);
    w.extend(holomorphic_witnesses(f, set)?);
    Ok(Membership::from_witnesses(w))
}

/// `f ∈ S_{c,H}`: only components with `K ⊂ H^c` survive.
pub fn is_circular_wrt(f: &StemFunction, set: SubsetIndex) -> Result<Membership> {
    check_set(f, set)?;
    let w = f
        .components()
        .filter(|(k, _)| !k.is_disjoint(set))
        .map(|(k, _)| Witness {
            component: k,
            variable: k.intersection(set).min_element().unwrap_or(0),
            reason: Reason::NotCircular,
        })
        .collect();
    Ok(Membership::from_witnesses(w))
}

/// `∂̄_h F = 0` for every `h`.
pub fn is_slice_regular(f: &StemFunction) -> bool {
    let n = f.arity();
    (1..=n).all(|h| dbar_h(f, h).map(|d| d.is_zero()).unwrap_or(false))
}

/// True when no component depends on `a_h` or `b_h`.
pub fn is_locally_constant_in(f: &StemFunction, h: usize) -> bool {
    f.components()
        .all(|(_, p)| !p.depends_on(Var::Alpha(h)) && !p.depends_on(Var::Beta(h)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariableReport {
    pub variable: usize,
    pub slice_wrt: bool,
    pub slice_regular_wrt: bool,
    pub circular_wrt: bool,
    /// `p = min {h}^c`, absent when `{h}` is the whole index set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    /// Whether the spherical value and derivative in `x_h` are slice in `x_p`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spherical_value_slice_wrt_p: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spherical_derivative_slice_wrt_p: Option<bool>,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub arity: usize,
    pub slice_regular: bool,
    pub variables: Vec<VariableReport>,
}

impl ClassificationReport {
    pub fn variable(&self, h: usize) -> Option<&VariableReport> {
        self.variables.iter().find(|v| v.variable == h)
    }
}

pub fn classify(f: &StemFunction) -> Result<ClassificationReport> {
    let n = f.arity();
    let mut variables = Vec::with_capacity(n);
    for h in 1..=n {
        let single = SubsetIndex::singleton(h);
        let slice = is_slice_wrt(f, single)?;
        let regular = is_slice_regular_wrt(f, single)?;
        let circular = is_circular_wrt(f, single)?;
        let p = SubsetIndex::full(n).minus(single).min_element();
        let (value_p, derivative_p) = match p {
            Some(p) => {
                let at = SubsetIndex::singleton(p);
                let v = is_slice_wrt(&spherical_value_stem(f, single)?, at)?.holds;
                let d = match spherical_derivative_stem(f, single) {
                    Ok(d) => Some(is_slice_wrt(&d, at)?.holds),
                    Err(_) => None,
                };
                (Some(v), d)
            }
            None => (None, None),
        };
        let mut witnesses = regular.witnesses.clone();
        witnesses.extend(circular.witnesses.iter().cloned());
        witnesses.sort();
        variables.push(VariableReport {
            variable: h,
            slice_wrt: slice.holds,
            slice_regular_wrt: regular.holds,
            circular_wrt: circular.holds,
            p,
            spherical_value_slice_wrt_p: value_p,
            spherical_derivative_slice_wrt_p: derivative_p,
            witnesses,
        });
    }
    Ok(ClassificationReport {
        arity: n,
        slice_regular: is_slice_regular(f),
        variables,
    })
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "arity {}, slice regular: {}", self.arity, self.slice_regular)?;
        for v in &self.variables {
            write!(
                f,
                "x{}: slice {}, slice regular {}, circular {}",
                v.variable, v.slice_wrt, v.slice_regular_wrt, v.circular_wrt
            )?;
            if let Some(w) = v.witnesses.first() {
                write!(f, " (first witness {} in x{}: {})", w.component, w.variable, w.reason)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
