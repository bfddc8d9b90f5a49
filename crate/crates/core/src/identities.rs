//! Exact stem-level identities. Each `*_defect` returns the difference of the
//! two sides, which is the zero stem whenever the identity holds.

use crate::classify::{is_circular_wrt, is_slice_regular_wrt, is_slice_wrt};
use crate::error::{Error, Result};
use crate::stem::{
    dbar_h, imaginary_part_stem, spherical_derivative_h, spherical_derivative_stem, spherical_value_h, stem_tensor,
    StemFunction,
};
use crate::tensoralgebra::SubsetIndex;

/// `F − (F°_h + Im(Z_h) ⊗ F'_h)`.
pub fn decomposition_defect(f: &StemFunction, h: usize) -> Result<StemFunction> {
    let value = spherical_value_h(f, h)?;
    let derivative = spherical_derivative_h(f, h)?;
    let im = imaginary_part_stem(h, f.arity())?;
    f.sub(&value.add(&stem_tensor(&im, &derivative)?)?)
}

/// `(F⊗G)'_h − (F'_h ⊗ G°_h + F°_h ⊗ G'_h)`.
pub fn leibniz_defect(f: &StemFunction, g: &StemFunction, h: usize) -> Result<StemFunction> {
    let lhs = spherical_derivative_h(&stem_tensor(f, g)?, h)?;
    let a = stem_tensor(&spherical_derivative_h(f, h)?, &spherical_value_h(g, h)?)?;
    let b = stem_tensor(&spherical_value_h(f, h)?, &spherical_derivative_h(g, h)?)?;
    lhs.sub(&a.add(&b)?)
}

/// `(F'_i)'_j − (F'_j)'_i`.
pub fn commutation_defect(f: &StemFunction, i: usize, j: usize) -> Result<StemFunction> {
    let ij = spherical_derivative_h(&spherical_derivative_h(f, i)?, j)?;
    let ji = spherical_derivative_h(&spherical_derivative_h(f, j)?, i)?;
    ij.sub(&ji)
}

/// `(F°_h)°_h − F°_h`.
pub fn idempotence_defect(f: &StemFunction, h: usize) -> Result<StemFunction> {
    let v = spherical_value_h(f, h)?;
    spherical_value_h(&v, h)?.sub(&v)
}

/// `(F'_h)'_h`.
pub fn annihilation_defect(f: &StemFunction, h: usize) -> Result<StemFunction> {
    spherical_derivative_h(&spherical_derivative_h(f, h)?, h)
}

/// `∂̄_t (F'_h)` for `h != t`, given `∂̄_t F = 0`.
pub fn regularity_preservation_defect(f: &StemFunction, h: usize, t: usize) -> Result<StemFunction> {
    if h == t {
        return Err(Error::HypothesisViolated("variables must differ".into()));
    }
    if !dbar_h(f, t)?.is_zero() {
        return Err(Error::HypothesisViolated(format!("stem is not holomorphic in z{t}")));
    }
    dbar_h(&spherical_derivative_h(f, h)?, t)
}

/// `F'_H` when `h ∈ H`, `H` meets `{1..h-1}` and `F ∈ S_h`.
pub fn vanishing_defect(f: &StemFunction, h: usize, set: SubsetIndex) -> Result<StemFunction> {
    if !set.contains(h) || set.is_disjoint(SubsetIndex::interval(1, h - 1)) {
        return Err(Error::HypothesisViolated(format!(
            "need x{h} in {set} together with an earlier variable"
        )));
    }
    if !is_slice_wrt(f, SubsetIndex::singleton(h))?.holds {
        return Err(Error::HypothesisViolated(format!("function is not slice in x{h}")));
    }
    spherical_derivative_stem(f, set)
}

/// `F ⊗ G ∈ S_{c,H}` for `F, G ∈ S_{c,H}`; `Ok(false)` means a counterexample.
pub fn circular_product_closed(f: &StemFunction, g: &StemFunction, set: SubsetIndex) -> Result<bool> {
    if !is_circular_wrt(f, set)?.holds || !is_circular_wrt(g, set)?.holds {
        return Err(Error::HypothesisViolated(format!("factors must be circular in {set}")));
    }
    Ok(is_circular_wrt(&stem_tensor(f, g)?, set)?.holds)
}

/// For slice regular `F`: `F ∈ S_h` iff `F ∈ SR_h`.
pub fn slice_regular_corollary_holds(f: &StemFunction, h: usize) -> Result<bool> {
    let set = SubsetIndex::singleton(h);
    Ok(is_slice_wrt(f, set)?.holds == is_slice_regular_wrt(f, set)?.holds)
}
