//! Central-difference Cauchy-Riemann-Fueter operators in one quaternionic
//! variable and numeric checks of the identities they satisfy on slice
//! functions.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::classify::is_slice_regular_wrt;
use crate::error::{Error, Result};
use crate::quaternion::QF;
use crate::sampling::SamplePlan;
use crate::slicefn::{PointHn, SliceFunction};
use crate::stem::{dbar_h, spherical_derivative_h, StemFunction};
use crate::tensoralgebra::SubsetIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StencilOrder {
    Second,
    Fourth,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StencilConfig {
    pub step: f64,
    pub order: StencilOrder,
    pub tolerance: f64,
}

impl StencilConfig {
    pub fn new(step: f64, order: StencilOrder, tolerance: f64) -> Result<Self> {
        let cfg = StencilConfig { step, order, tolerance };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Default for first derivatives: step 1e-4, second order.
    pub fn first_derivative() -> Self {
        StencilConfig {
            step: 1e-4,
            order: StencilOrder::Second,
            tolerance: 1e-5,
        }
    }

    /// Default for Laplacians: step 1e-3, second order.
    pub fn laplacian() -> Self {
        StencilConfig {
            step: 1e-3,
            order: StencilOrder::Second,
            tolerance: 1e-4,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidConfig(format!("step must be positive, got {}", self.step)));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Two stencils applied one inside the other, with a shared tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NestedConfig {
    pub outer: StencilConfig,
    pub inner: StencilConfig,
    pub tolerance: f64,
}

impl NestedConfig {
    /// Outer first derivative at 1e-2, inner fourth-order Laplacian at 1e-3.
    pub fn fueter() -> Self {
        NestedConfig {
            outer: StencilConfig {
                step: 1e-2,
                order: StencilOrder::Second,
                tolerance: 1e-2,
            },
            inner: StencilConfig {
                step: 1e-3,
                order: StencilOrder::Fourth,
                tolerance: 1e-2,
            },
            tolerance: 1e-2,
        }
    }

    /// `4 ∂(∂̄ f)` against `Δ_h f`.
    pub fn factorization() -> Self {
        NestedConfig {
            outer: StencilConfig {
                step: 1e-2,
                order: StencilOrder::Fourth,
                tolerance: 1e-3,
            },
            inner: StencilConfig {
                step: 1e-3,
                order: StencilOrder::Fourth,
                tolerance: 1e-3,
            },
            tolerance: 1e-3,
        }
    }

    /// `Δ_h f` (outer) against `−4 ∂ f'_{s,h}` (inner).
    pub fn laplacian_lemma() -> Self {
        NestedConfig {
            outer: StencilConfig {
                step: 1e-3,
                order: StencilOrder::Fourth,
                tolerance: 1e-4,
            },
            inner: StencilConfig::first_derivative(),
            tolerance: 1e-4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.outer.validate()?;
        self.inner.validate()?;
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// A deterministic map `H^n → H`.
#[derive(Clone)]
pub struct BlackBoxField {
    arity: usize,
    eval: Arc<dyn Fn(&PointHn) -> QF + Send + Sync>,
}

impl fmt::Debug for BlackBoxField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlackBoxField").field("arity", &self.arity).finish_non_exhaustive()
    }
}

impl BlackBoxField {
    pub fn new(arity: usize, eval: impl Fn(&PointHn) -> QF + Send + Sync + 'static) -> Self {
        BlackBoxField {
            arity,
            eval: Arc::new(eval),
        }
    }

    pub fn from_slice(f: SliceFunction) -> Self {
        let n = f.arity();
        BlackBoxField::new(n, move |x| f.evaluate(x).expect("arity checked by the field"))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, x: &PointHn) -> QF {
        (self.eval)(x)
    }

    fn check(&self, h: usize, x: &PointHn) -> Result<()> {
        if x.arity() != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: x.arity(),
            });
        }
        if h == 0 || h > self.arity {
            return Err(Error::IndexOutOfRange {
                index: h,
                arity: self.arity,
            });
        }
        Ok(())
    }
}

fn shifted(x: &PointHn, h: usize, c: usize, t: f64) -> PointHn {
    let mut comps = x.coord(h).components();
    comps[c] += t;
    let [w, i, j, k] = comps;
    x.with_coord(h, &QF::new(w, i, j, k))
}

fn check_step(x: &PointHn, h: usize, cfg: &StencilConfig) -> Result<()> {
    cfg.validate()?;
    let scale = x.coord(h).max_abs();
    if cfg.step <= 64.0 * f64::EPSILON * scale.max(1.0) {
        return Err(Error::DegenerateStep { step: cfg.step, scale });
    }
    Ok(())
}

/// `∂f/∂t` along real coordinate `c` (0..4) of `x_h`.
fn partial(f: &BlackBoxField, h: usize, c: usize, x: &PointHn, cfg: &StencilConfig) -> QF {
    let s = cfg.step;
    let at = |t: f64| f.eval(&shifted(x, h, c, t));
    match cfg.order {
        StencilOrder::Second => (&at(s) - &at(-s)).scale(&(0.5 / s)),
        StencilOrder::Fourth => {
            let num = &(&at(s) - &at(-s)).scale(&8.0) - &(&at(2.0 * s) - &at(-2.0 * s));
            num.scale(&(1.0 / (12.0 * s)))
        }
    }
}

fn second_partial(f: &BlackBoxField, h: usize, c: usize, x: &PointHn, cfg: &StencilConfig) -> QF {
    let s = cfg.step;
    let at = |t: f64| f.eval(&shifted(x, h, c, t));
    let mid = f.eval(x);
    match cfg.order {
        StencilOrder::Second => (&(&at(s) + &at(-s)) - &mid.scale(&2.0)).scale(&(1.0 / (s * s))),
        StencilOrder::Fourth => {
            let near = (&at(s) + &at(-s)).scale(&16.0);
            let far = &at(2.0 * s) + &at(-2.0 * s);
            (&(&near - &far) - &mid.scale(&30.0)).scale(&(1.0 / (12.0 * s * s)))
        }
    }
}

fn crf(f: &BlackBoxField, h: usize, x: &PointHn, cfg: &StencilConfig, sign: f64) -> Result<QF> {
    f.check(h, x)?;
    check_step(x, h, cfg)?;
    let units = [QF::i(), QF::j(), QF::k()];
    let mut acc = partial(f, h, 0, x, cfg);
    for (c, u) in units.iter().enumerate() {
        acc += &(&u.scale(&sign) * &partial(f, h, c + 1, x, cfg));
    }
    Ok(acc.scale(&0.5))
}

/// `∂̄_{x_h} f = ½(∂_a + i∂_b + j∂_c + k∂_d) f`.
pub fn crf_dbar(f: &BlackBoxField, h: usize, x: &PointHn, cfg: &StencilConfig) -> Result<QF> {
    crf(f, h, x, cfg, 1.0)
}

/// `∂_{x_h} f = ½(∂_a − i∂_b − j∂_c − k∂_d) f`.
pub fn crf_d(f: &BlackBoxField, h: usize, x: &PointHn, cfg: &StencilConfig) -> Result<QF> {
    crf(f, h, x, cfg, -1.0)
}

/// Sum of the four pure second partials in the coordinates of `x_h`.
pub fn laplacian_h(f: &BlackBoxField, h: usize, x: &PointHn, cfg: &StencilConfig) -> Result<QF> {
    f.check(h, x)?;
    check_step(x, h, cfg)?;
    let mut acc = QF::zero();
    for c in 0..4 {
        acc += &second_partial(f, h, c, x, cfg);
    }
    Ok(acc)
}

/// Field `x ↦ op(f, x)`; errors inside the closure become NaN so that they
/// surface as a failing residual.
fn lift(
    f: &BlackBoxField,
    op: fn(&BlackBoxField, usize, &PointHn, &StencilConfig) -> Result<QF>,
    h: usize,
    cfg: StencilConfig,
) -> BlackBoxField {
    let inner = f.clone();
    BlackBoxField::new(f.arity(), move |x| {
        op(&inner, h, x, &cfg).unwrap_or_else(|_| QF::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub statement: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: u64,
}

impl VerificationReport {
    pub fn new(theorem: &str, statement: &str, samples: usize, max_residual: f64, tolerance: f64, seed: u64) -> Self {
        VerificationReport {
            theorem: theorem.to_string(),
            statement: statement.to_string(),
            samples,
            max_residual,
            tolerance,
            pass: max_residual.is_finite() && max_residual <= tolerance,
            seed,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}]: {} ({} samples, max residual {:.3e}, tolerance {:.1e}, seed {})",
            self.theorem,
            self.statement,
            if self.pass { "PASS" } else { "FAIL" },
            self.samples,
            self.max_residual,
            self.tolerance,
            self.seed
        )
    }
}

fn sweep(plan: &SamplePlan, h: usize, n: usize, mut residual: impl FnMut(&PointHn) -> Result<f64>) -> Result<(usize, f64)> {
    let pts = plan.clone().targeting(h).points(n)?;
    let mut worst: f64 = 0.0;
    for x in &pts {
        let r = residual(x)?;
        // NaN must not be swallowed by max
        worst = if r.is_nan() || worst.is_nan() { f64::NAN } else { worst.max(r) };
    }
    Ok((pts.len(), worst))
}

fn require_slice_regular_in(f: &StemFunction, h: usize) -> Result<()> {
    let m = is_slice_regular_wrt(f, SubsetIndex::singleton(h))?;
    match m.first_witness() {
        None => Ok(()),
        Some(w) => Err(Error::HypothesisViolated(format!(
            "function is not slice regular in x{h} (component {}: {})",
            w.component, w.reason
        ))),
    }
}

fn fields(f: &StemFunction, h: usize) -> Result<(BlackBoxField, BlackBoxField)> {
    let d = spherical_derivative_h(f, h)?;
    Ok((
        BlackBoxField::from_slice(SliceFunction::new(f.clone())),
        BlackBoxField::from_slice(SliceFunction::new(d)),
    ))
}

/// `|∂̄_{x_h} f + f'_{s,h}|` for `f ∈ SR_h`.
pub fn verify_lemma_dbar(f: &StemFunction, h: usize, plan: &SamplePlan, cfg: &StencilConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    require_slice_regular_in(f, h)?;
    let (field, derivative) = fields(f, h)?;
    let (samples, worst) = sweep(plan, h, f.arity(), |x| {
        Ok((&crf_dbar(&field, h, x, cfg)? + &derivative.eval(x)).norm())
    })?;
    Ok(VerificationReport::new(
        "lemma-dbar",
        "dbar_{x_h} f = -f'_{s,h} on SR_h",
        samples,
        worst,
        cfg.tolerance,
        plan.seed,
    ))
}

/// `|Δ_h f + 4 ∂_{x_h} f'_{s,h}|` for `f ∈ SR_h`.
pub fn verify_lemma_laplacian(f: &StemFunction, h: usize, plan: &SamplePlan, cfg: &NestedConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    require_slice_regular_in(f, h)?;
    let (field, derivative) = fields(f, h)?;
    let (samples, worst) = sweep(plan, h, f.arity(), |x| {
        let lap = laplacian_h(&field, h, x, &cfg.outer)?;
        let d = crf_d(&derivative, h, x, &cfg.inner)?;
        Ok((&lap + &d.scale(&4.0)).norm())
    })?;
    Ok(VerificationReport::new(
        "lemma-laplacian",
        "Delta_h f = -4 d_{x_h} f'_{s,h} on SR_h",
        samples,
        worst,
        cfg.tolerance,
        plan.seed,
    ))
}

/// `|4 ∂_{x_h} ∂̄_{x_h} f − Δ_h f|`; holds for every smooth `f`.
pub fn verify_factorization(f: &StemFunction, h: usize, plan: &SamplePlan, cfg: &NestedConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let field = BlackBoxField::from_slice(SliceFunction::new(f.clone()));
    let (samples, worst) = sweep(plan, h, f.arity(), |x| factorization_residual(&field, h, x, cfg))?;
    Ok(VerificationReport::new(
        "factorization",
        "4 d_{x_h} dbar_{x_h} = Delta_h",
        samples,
        worst,
        cfg.tolerance,
        plan.seed,
    ))
}

/// `|4 ∂(∂̄ f) − Δ_h f|` at one point, for arbitrary fields.
pub fn factorization_residual(f: &BlackBoxField, h: usize, x: &PointHn, cfg: &NestedConfig) -> Result<f64> {
    let dbar = lift(f, crf_dbar, h, cfg.inner);
    let nested = crf_d(&dbar, h, x, &cfg.outer)?.scale(&4.0);
    let lap = laplacian_h(f, h, x, &cfg.inner)?;
    Ok((&nested - &lap).norm())
}

/// `|Δ_h f'_{s,h}|` when `∂̄_h F = 0`.
pub fn verify_harmonicity(f: &StemFunction, h: usize, plan: &SamplePlan, cfg: &StencilConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    if !dbar_h(f, h)?.is_zero() {
        return Err(Error::HypothesisViolated(format!("stem is not holomorphic in z{h}")));
    }
    let (_, derivative) = fields(f, h)?;
    let (samples, worst) = sweep(plan, h, f.arity(), |x| Ok(laplacian_h(&derivative, h, x, cfg)?.norm()))?;
    Ok(VerificationReport::new(
        "harmonicity",
        "Delta_h f'_{s,h} = 0 when dbar_h F = 0",
        samples,
        worst,
        cfg.tolerance,
        plan.seed,
    ))
}

/// `|∂̄_{x_h} Δ_h f|` for `f ∈ SR_h`, with the Laplacian as the inner stencil.
pub fn verify_fueter(f: &StemFunction, h: usize, plan: &SamplePlan, cfg: &NestedConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    require_slice_regular_in(f, h)?;
    let field = BlackBoxField::from_slice(SliceFunction::new(f.clone()));
    let lap = lift(&field, laplacian_h, h, cfg.inner);
    let (samples, worst) = sweep(plan, h, f.arity(), |x| Ok(crf_dbar(&lap, h, x, &cfg.outer)?.norm()))?;
    Ok(VerificationReport::new(
        "fueter",
        "dbar_{x_h} Delta_h f = 0 on SR_h",
        samples,
        worst,
        cfg.tolerance,
        plan.seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::QRat;
    use crate::stem::{conj_coordinate_stem, const_stem, from_ordered_monomials, OrderedMonomial};

    fn coordinate_field(h: usize, n: usize) -> BlackBoxField {
        BlackBoxField::new(n, move |x| x.coord(h))
    }

    fn point() -> PointHn {
        PointHn::new(vec![QF::new(0.3, -0.2, 0.9, 0.1), QF::new(-0.4, 0.5, 0.6, -0.7)])
    }

    fn power(h: usize, e: usize, n: usize) -> StemFunction {
        from_ordered_monomials(&[OrderedMonomial::new(vec![h; e], QRat::one()).unwrap()], n).unwrap()
    }

    fn example() -> StemFunction {
        from_ordered_monomials(
            &[
                OrderedMonomial::new(vec![1, 3], QRat::one()).unwrap(),
                OrderedMonomial::new(vec![2, 3, 3], QRat::k()).unwrap(),
            ],
            3,
        )
        .unwrap()
    }

    #[test]
    fn crf_on_the_coordinate() {
        let cfg = StencilConfig::first_derivative();
        let f = coordinate_field(2, 2);
        assert!((&crf_dbar(&f, 2, &point(), &cfg).unwrap() - &QF::from_real(-1.0)).norm() < 1e-9);
        assert!((&crf_d(&f, 2, &point(), &cfg).unwrap() - &QF::from_real(2.0)).norm() < 1e-9);
        assert!(crf_dbar(&f, 1, &point(), &cfg).unwrap().norm() < 1e-12);
        let c = BlackBoxField::new(2, |_| QF::j());
        assert!(crf_dbar(&c, 1, &point(), &cfg).unwrap().is_zero());
        assert!(crf_d(&c, 2, &point(), &cfg).unwrap().is_zero());
    }

    #[test]
    fn laplacian_examples() {
        let cfg = StencilConfig::laplacian();
        let lin = coordinate_field(1, 2);
        assert!(laplacian_h(&lin, 1, &point(), &cfg).unwrap().norm() < 1e-9);
        let sq = BlackBoxField::new(2, |x| QF::from_real(x.coord(1).norm_sqr()));
        assert!((&laplacian_h(&sq, 1, &point(), &cfg).unwrap() - &QF::from_real(8.0)).norm() < 1e-6);
        let cfg4 = StencilConfig { order: StencilOrder::Fourth, ..cfg };
        assert!((&laplacian_h(&sq, 1, &point(), &cfg4).unwrap() - &QF::from_real(8.0)).norm() < 1e-6);
        let sq = BlackBoxField::from_slice(SliceFunction::new(power(1, 2, 2)));
        assert!(factorization_residual(&sq, 1, &point(), &NestedConfig::factorization()).unwrap() < 1e-6);
    }

    #[test]
    fn bad_steps() {
        let f = coordinate_field(1, 2);
        let tiny = StencilConfig::first_derivative().with_step(1e-18);
        assert!(matches!(crf_dbar(&f, 1, &point(), &tiny), Err(Error::DegenerateStep { .. })));
        let neg = StencilConfig::first_derivative().with_step(-1.0);
        assert!(matches!(crf_d(&f, 1, &point(), &neg), Err(Error::InvalidConfig(_))));
        assert!(StencilConfig::new(1e-3, StencilOrder::Second, 0.0).is_err());
        assert!(matches!(crf_d(&f, 3, &point(), &StencilConfig::first_derivative()), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn lemma_on_the_example() {
        let plan = SamplePlan::new(11).with_count(16);
        let r = verify_lemma_dbar(&example(), 2, &plan, &StencilConfig::first_derivative()).unwrap();
        assert!(r.pass, "{r}");
        let r = verify_lemma_laplacian(&example(), 2, &plan, &NestedConfig::laplacian_lemma()).unwrap();
        assert!(r.pass, "{r}");
        assert!(matches!(
            verify_lemma_dbar(&example(), 3, &plan, &StencilConfig::first_derivative()),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn harmonicity_examples() {
        let plan = SamplePlan::new(3).with_count(16);
        let cfg = StencilConfig::laplacian();
        let r = verify_harmonicity(&power(1, 2, 1), 1, &plan, &cfg).unwrap();
        assert!(r.max_residual < 1e-9);
        assert!(verify_harmonicity(&example(), 2, &plan, &cfg).unwrap().pass);
        assert_eq!(verify_harmonicity(&const_stem(QRat::k(), 2).unwrap(), 1, &plan, &cfg).unwrap().max_residual, 0.0);
        assert!(matches!(
            verify_harmonicity(&conj_coordinate_stem(1, 1).unwrap(), 1, &plan, &cfg),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn fueter_examples() {
        let plan = SamplePlan::new(5).with_count(8);
        let cfg = NestedConfig::fueter();
        assert!(verify_fueter(&example(), 2, &plan, &cfg).unwrap().pass);
        assert_eq!(verify_fueter(&const_stem(QRat::one(), 1).unwrap(), 1, &plan, &cfg).unwrap().max_residual, 0.0);
        assert!(verify_fueter(&power(2, 3, 2), 2, &plan, &cfg).unwrap().pass);
        assert!(matches!(
            verify_fueter(&conj_coordinate_stem(1, 2).unwrap(), 1, &plan, &cfg),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn report_json_shape() {
        let r = VerificationReport::new("fueter", "s", 4, 1e-3, 1e-2, 42);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["pass"], true);
        assert_eq!(v["samples"], 4);
        assert!(!VerificationReport::new("x", "s", 1, f64::NAN, 1.0, 0).pass);
    }
}
