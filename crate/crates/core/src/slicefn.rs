//! Slice functions `f = I(F)` on `H^n`, evaluated in double precision.

use std::fmt;
use std::str::FromStr;

use num::complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classify::is_slice_wrt;
use crate::error::{Error, Result};
use crate::polyring::FloatPolynomial;
use crate::quaternion::{decompose, QF};
use crate::sampling::{sample_unit, SamplePlan};
use crate::stem::{stem_tensor, StemFunction};
use crate::tensoralgebra::{ordered_unit_product, SubsetIndex};

/// A point `(x_1, …, x_n)` of `H^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointHn(Vec<[f64; 4]>);

impl PointHn {
    pub fn new(coords: Vec<QF>) -> Self {
        PointHn(coords.iter().map(|q| q.components()).collect())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Coordinate `x_h`, 1-based.
    pub fn coord(&self, h: usize) -> QF {
        let [w, x, y, z] = self.0[h - 1];
        QF::new(w, x, y, z)
    }

    pub fn coords(&self) -> Vec<QF> {
        (1..=self.arity()).map(|h| self.coord(h)).collect()
    }

    /// The point with `x_h` replaced by `q`.
    pub fn with_coord(&self, h: usize, q: &QF) -> Self {
        let mut out = self.clone();
        out.0[h - 1] = q.components();
        out
    }

    /// `x̄^h`: the point with `x_h` conjugated.
    pub fn conj_at(&self, h: usize) -> Self {
        self.with_coord(h, &self.coord(h).conj())
    }
}

impl FromStr for PointHn {
    type Err = Error;

    /// Semicolon-separated 4-tuples, `"(0,1,0,0);(0,0,1,0)"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut coords = Vec::new();
        let mut offset = 0;
        for part in s.split(';') {
            let t = part.trim();
            let syntax = |message: &str| Error::Syntax {
                position: offset,
                message: message.to_string(),
            };
            let inner = t
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| syntax("expected a 4-tuple in parentheses"))?;
            let vals: Vec<f64> = inner
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| syntax("tuple entries must be real numbers"))?;
            if vals.len() != 4 {
                return Err(syntax("tuple must have exactly 4 entries"));
            }
            coords.push([vals[0], vals[1], vals[2], vals[3]]);
            offset += part.len() + 1;
        }
        Ok(PointHn(coords))
    }
}

impl fmt::Display for PointHn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(|q| q.to_string()).collect();
        f.write_str(&parts.join(";"))
    }
}

/// Real coordinates `(a, b)` and units `J` of a point, one per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposed {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub units: Vec<QF>,
}

impl Decomposed {
    pub fn of(x: &PointHn) -> Self {
        let mut alphas = Vec::with_capacity(x.arity());
        let mut betas = Vec::with_capacity(x.arity());
        let mut units = Vec::with_capacity(x.arity());
        for q in x.coords() {
            let d = decompose(&q);
            alphas.push(d.alpha);
            betas.push(d.beta);
            units.push(d.unit);
        }
        Decomposed { alphas, betas, units }
    }

    /// Switches to the other representation `(−b_h, −J_h)` of `x_h`.
    pub fn flipped(&self, h: usize) -> Self {
        let mut out = self.clone();
        out.betas[h - 1] = -out.betas[h - 1];
        out.units[h - 1] = -&out.units[h - 1];
        out
    }

    fn real_point(&self) -> Vec<f64> {
        self.alphas.iter().chain(&self.betas).copied().collect()
    }
}

/// `f = I(F)` with the components compiled to floats.
#[derive(Clone, Debug)]
pub struct SliceFunction {
    stem: StemFunction,
    compiled: Vec<(SubsetIndex, FloatPolynomial)>,
}

impl SliceFunction {
    pub fn new(stem: StemFunction) -> Self {
        let compiled = stem.components().map(|(k, p)| (k, p.to_float())).collect();
        SliceFunction { stem, compiled }
    }

    pub fn stem(&self) -> &StemFunction {
        &self.stem
    }

    pub fn arity(&self) -> usize {
        self.stem.arity()
    }

    fn check_point(&self, x: &PointHn) -> Result<()> {
        if x.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                left: self.arity(),
                right: x.arity(),
            });
        }
        Ok(())
    }

    /// `Σ_K J_K F_K(a, b)` for an explicit decomposition.
    pub fn evaluate_decomposed(&self, d: &Decomposed) -> QF {
        let point = d.real_point();
        let mut acc = QF::zero();
        for (k, p) in &self.compiled {
            acc += &(&ordered_unit_product(&d.units, *k) * &p.eval(&point));
        }
        acc
    }

    pub fn evaluate(&self, x: &PointHn) -> Result<QF> {
        self.check_point(x)?;
        Ok(self.evaluate_decomposed(&Decomposed::of(x)))
    }

    /// `f°_{s,h}(x) = ½(f(x) + f(x̄^h))`.
    pub fn spherical_value_pointwise(&self, h: usize, x: &PointHn) -> Result<QF> {
        self.check_variable(h)?;
        let sum = &self.evaluate(x)? + &self.evaluate(&x.conj_at(h))?;
        Ok(sum.scale(&0.5))
    }

    /// `[2 Im x_h]^{-1} (f(x) − f(x̄^h))`. Off `S_h` this is only a raw
    /// quotient and need not match the stem-level derivative.
    pub fn spherical_derivative_pointwise(&self, h: usize, x: &PointHn) -> Result<QF> {
        self.check_variable(h)?;
        let im = x.coord(h).imag();
        if im.is_zero() {
            return Err(Error::RealFiber { variable: h });
        }
        let diff = &self.evaluate(x)? - &self.evaluate(&x.conj_at(h))?;
        Ok(&im.scale(&2.0).inv()? * &diff)
    }

    fn check_variable(&self, h: usize) -> Result<()> {
        if h == 0 || h > self.arity() {
            Err(Error::IndexOutOfRange {
                index: h,
                arity: self.arity(),
            })
        } else {
            Ok(())
        }
    }

    /// The restriction `f^y_h` through its one-variable stem `G^y_h`.
    pub fn restrict(&self, h: usize, y: &PointHn) -> Result<OneVarRestriction> {
        self.check_variable(h)?;
        self.check_point(y)?;
        let m = is_slice_wrt(&self.stem, SubsetIndex::singleton(h))?;
        if let Some(w) = m.first_witness() {
            return Err(Error::NotSliceInVariable {
                variable: h,
                witness: w.component,
            });
        }
        Ok(OneVarRestriction {
            base: Decomposed::of(y),
            h,
            compiled: self.compiled.clone(),
        })
    }

    /// `x ↦ f(y_1, …, x, …, y_n)` by direct evaluation, defined for any `f`.
    pub fn raw_restriction(&self, h: usize, y: &PointHn) -> Result<RawRestriction<'_>> {
        self.check_variable(h)?;
        self.check_point(y)?;
        Ok(RawRestriction {
            f: self,
            h,
            base: y.clone(),
        })
    }
}

pub fn evaluate(f: &StemFunction, x: &PointHn) -> Result<QF> {
    SliceFunction::new(f.clone()).evaluate(x)
}

/// `f ⊙ g = I(F ⊗ G)`.
pub fn slice_product(f: &SliceFunction, g: &SliceFunction) -> Result<SliceFunction> {
    Ok(SliceFunction::new(stem_tensor(f.stem(), g.stem())?))
}

/// A quaternionic function of one quaternionic variable.
pub trait OneVarFunction {
    fn eval(&self, x: &QF) -> QF;
}

/// `f^y_h` given by the pair `(G^y_{1,h}, G^y_{2,h})`.
#[derive(Clone, Debug)]
pub struct OneVarRestriction {
    base: Decomposed,
    h: usize,
    compiled: Vec<(SubsetIndex, FloatPolynomial)>,
}

impl OneVarRestriction {
    pub fn variable(&self) -> usize {
        self.h
    }

    fn at(&self, w: Complex64) -> Decomposed {
        let mut d = self.base.clone();
        d.alphas[self.h - 1] = w.re;
        d.betas[self.h - 1] = w.im;
        d
    }

    fn sum(&self, w: Complex64, containing_h: bool) -> QF {
        let d = self.at(w);
        let point = d.real_point();
        let mut acc = QF::zero();
        for (k, p) in &self.compiled {
            if k.contains(self.h) != containing_h {
                continue;
            }
            let k = k.without(self.h);
            acc += &(&ordered_unit_product(&d.units, k) * &p.eval(&point));
        }
        acc
    }

    /// `G^y_{1,h}(w) = Σ_{h∉K} J_K F_K(z', w, z'')`.
    pub fn component1(&self, w: Complex64) -> QF {
        self.sum(w, false)
    }

    /// `G^y_{2,h}(w) = Σ_{Q ⊂ {h+1..n}} J_Q F_{{h}∪Q}(z', w, z'')`.
    pub fn component2(&self, w: Complex64) -> QF {
        self.sum(w, true)
    }
}

impl OneVarFunction for OneVarRestriction {
    fn eval(&self, x: &QF) -> QF {
        let d = decompose(x);
        let w = Complex64::new(d.alpha, d.beta);
        &self.component1(w) + &(&d.unit * &self.component2(w))
    }
}

/// `x ↦ f(y)` with `y_h = x`.
#[derive(Clone, Debug)]
pub struct RawRestriction<'a> {
    f: &'a SliceFunction,
    h: usize,
    base: PointHn,
}

impl OneVarFunction for RawRestriction<'_> {
    fn eval(&self, x: &QF) -> QF {
        self.f.evaluate_decomposed(&Decomposed::of(&self.base.with_coord(self.h, x)))
    }
}

impl<F: Fn(&QF) -> QF> OneVarFunction for F {
    fn eval(&self, x: &QF) -> QF {
        self(x)
    }
}

/// A sample `(a, b, I, J)` for the one-variable representation formula.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationSample {
    pub alpha: f64,
    pub beta: f64,
    pub i_unit: QF,
    pub j_unit: QF,
}

pub fn representation_samples(plan: &SamplePlan) -> Vec<RepresentationSample> {
    let mut rng = plan.rng();
    (0..plan.count)
        .map(|_| RepresentationSample {
            alpha: rng.gen_range(-plan.bound..=plan.bound),
            beta: rng.gen_range(plan.min_imag..=plan.bound),
            i_unit: sample_unit(&mut rng),
            j_unit: sample_unit(&mut rng),
        })
        .collect()
}

/// Largest `|f(a+Ib) − ½(f(a+Jb)+f(a−Jb)) + (IJ/2)(f(a+Jb)−f(a−Jb))|`.
pub fn onevar_representation_check<F: OneVarFunction + ?Sized>(f: &F, samples: &[RepresentationSample]) -> f64 {
    samples
        .iter()
        .map(|s| {
            let at = |u: &QF, b: f64| &QF::from_real(s.alpha) + &u.scale(&b);
            let lhs = f.eval(&at(&s.i_unit, s.beta));
            let plus = f.eval(&at(&s.j_unit, s.beta));
            let minus = f.eval(&at(&s.j_unit, -s.beta));
            let ij = &s.i_unit * &s.j_unit;
            let rhs = &(&plus + &minus).scale(&0.5) - &(&ij * &(&plus - &minus)).scale(&0.5);
            (&lhs - &rhs).norm()
        })
        .fold(0.0, f64::max)
}
