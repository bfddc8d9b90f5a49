#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sliceq::polyring::{Monomial, QPolynomial};
use sliceq::slicefn::PointHn;
use sliceq::stem::{from_ordered_monomials, OrderedMonomial, StemFunction};
use sliceq::{QRat, SubsetIndex, QF};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_quaternion<R: Rng>(rng: &mut R) -> QRat {
    loop {
        let q = QRat::from_ints(
            rng.gen_range(-2..=2),
            rng.gen_range(-2..=2),
            rng.gen_range(-2..=2),
            rng.gen_range(-2..=2),
        );
        if !q.is_zero() {
            return q;
        }
    }
}

/// 1 to 3 ordered monomials of degree at most `max_degree` in `n` variables.
pub fn random_monomials<R: Rng>(rng: &mut R, n: usize, max_degree: usize) -> Vec<OrderedMonomial> {
    let terms = rng.gen_range(1..=3);
    (0..terms)
        .map(|_| {
            let deg = rng.gen_range(0..=max_degree);
            let mut vars: Vec<usize> = (0..deg).map(|_| rng.gen_range(1..=n)).collect();
            vars.sort_unstable();
            OrderedMonomial::new(vars, small_quaternion(rng)).unwrap()
        })
        .collect()
}

/// A random stem from ordered monomials, `n <= 4`, degree `<= 4`.
pub fn random_case<R: Rng>(rng: &mut R) -> (usize, Vec<OrderedMonomial>, StemFunction) {
    let n = rng.gen_range(1..=4);
    let terms = random_monomials(rng, n, 4);
    let stem = from_ordered_monomials(&terms, n).unwrap();
    (n, terms, stem)
}

pub fn random_ordered_stem<R: Rng>(rng: &mut R, n: usize) -> StemFunction {
    from_ordered_monomials(&random_monomials(rng, n, 4), n).unwrap()
}

/// A random stem obeying the parity law but not built from monomials in
/// `x`, so generally neither slice regular nor slice in any later variable.
pub fn random_valid_stem<R: Rng>(rng: &mut R, n: usize) -> StemFunction {
    let mut comps = Vec::new();
    for k in SubsetIndex::all(n) {
        if rng.gen_bool(0.5) {
            continue;
        }
        let terms: Vec<Monomial> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let mut exponents = vec![0u32; 2 * n];
                for h in 1..=n {
                    exponents[h - 1] = rng.gen_range(0..=2);
                    let b: u32 = rng.gen_range(0..=1);
                    exponents[n + h - 1] = 2 * b + u32::from(k.contains(h));
                }
                Monomial {
                    exponents,
                    coeff: small_quaternion(rng),
                }
            })
            .collect();
        comps.push((k, QPolynomial::from_terms(n, terms).unwrap()));
    }
    let f = StemFunction::from_components(n, comps).unwrap();
    assert!(f.is_valid());
    f
}

/// `Σ x_{v1} · … · x_{vk} · c`, multiplied out directly.
pub fn pointwise_oracle(terms: &[OrderedMonomial], x: &PointHn) -> QF {
    let mut acc = QF::zero();
    for t in terms {
        let mut p = QF::one();
        for &v in &t.vars {
            p = &p * &x.coord(v);
        }
        acc += &(&p * &t.coeff.to_float());
    }
    acc
}

pub fn example_terms() -> Vec<OrderedMonomial> {
    vec![
        OrderedMonomial::new(vec![1, 3], QRat::one()).unwrap(),
        OrderedMonomial::new(vec![2, 3, 3], QRat::k()).unwrap(),
    ]
}

pub fn example() -> StemFunction {
    from_ordered_monomials(&example_terms(), 3).unwrap()
}
