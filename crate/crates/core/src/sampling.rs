//! Seeded sample plans for the oracle and theorem checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quaternion::QF;
use crate::slicefn::PointHn;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_COUNT: usize = 64;

/// Points of `H^n` with components drawn from `[-bound, bound]`, kept only
/// when every `|x_h| <= bound` and, for the target variable, `|Im x_h| >=
/// min_imag`.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePlan {
    pub seed: u64,
    pub count: usize,
    pub bound: f64,
    pub min_imag: f64,
    pub target: Option<usize>,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            seed: DEFAULT_SEED,
            count: DEFAULT_COUNT,
            bound: 2.0,
            min_imag: 0.25,
            target: None,
        }
    }
}

impl SamplePlan {
    pub fn new(seed: u64) -> Self {
        SamplePlan {
            seed,
            ..Self::default()
        }
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    /// Keeps `x_h` away from the real fiber.
    pub fn targeting(mut self, h: usize) -> Self {
        self.target = Some(h);
        self
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.bound.is_nan() || self.bound <= 0.0 {
            return Err(Error::InvalidConfig(format!("bound must be positive, got {}", self.bound)));
        }
        if self.min_imag < 0.0 || self.min_imag >= self.bound {
            return Err(Error::InvalidConfig(format!(
                "min_imag {} must lie in [0, bound)",
                self.min_imag
            )));
        }
        if let Some(h) = self.target {
            if h == 0 || h > n {
                return Err(Error::IndexOutOfRange { index: h, arity: n });
            }
        }
        Ok(())
    }

    pub fn points(&self, n: usize) -> Result<Vec<PointHn>> {
        self.validate(n)?;
        let mut rng = self.rng();
        Ok((0..self.count).map(|_| self.draw_point(&mut rng, n)).collect())
    }

    pub fn draw_point<R: Rng>(&self, rng: &mut R, n: usize) -> PointHn {
        let coords = (1..=n)
            .map(|h| {
                let min_imag = if self.target == Some(h) { self.min_imag } else { 0.0 };
                sample_quaternion(rng, self.bound, min_imag)
            })
            .collect();
        PointHn::new(coords)
    }
}

/// Rejection sample in the ball of radius `bound` with `|Im q| >= min_imag`.
pub fn sample_quaternion<R: Rng>(rng: &mut R, bound: f64, min_imag: f64) -> QF {
    loop {
        let q = QF::new(
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
        );
        if q.norm() <= bound && q.imag().norm() >= min_imag {
            return q;
        }
    }
}

/// Uniform point on the sphere of imaginary units.
pub fn sample_unit<R: Rng>(rng: &mut R) -> QF {
    loop {
        let v = QF::new(
            0.0,
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        let r = v.norm();
        if r > 0.1 && r <= 1.0 {
            return v.scale(&(1.0 / r));
        }
    }
}
