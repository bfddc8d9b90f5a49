mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;

use sliceq::classify::{is_circular_wrt, is_locally_constant_in, is_slice_regular, is_slice_regular_wrt, is_slice_wrt};
use sliceq::identities::*;
use sliceq::sampling::SamplePlan;
use sliceq::slicefn::{onevar_representation_check, representation_samples, Decomposed, SliceFunction};
use sliceq::stem::{
    coordinate_stem, dbar_h, spherical_derivative_h, spherical_value_h, spherical_value_stem, stem_tensor,
    validate_stem,
};
use sliceq::SubsetIndex;

fn arity_and_seed() -> impl Strategy<Value = (usize, u64)> {
    (1usize..=3, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_and_derivatives_stay_valid((n, seed) in arity_and_seed()) {
        let mut r = rng(seed);
        let f = random_valid_stem(&mut r, n);
        let g = random_valid_stem(&mut r, n);
        prop_assert!(validate_stem(&stem_tensor(&f, &g).unwrap()).is_empty());
        for h in 1..=n {
            prop_assert!(dbar_h(&f, h).unwrap().is_valid());
            prop_assert!(spherical_derivative_h(&f, h).unwrap().is_valid());
        }
    }

    #[test]
    fn decomposition_on_valid_stems((n, seed) in arity_and_seed()) {
        let f = random_valid_stem(&mut rng(seed), n);
        for h in 1..=n {
            prop_assert!(decomposition_defect(&f, h).unwrap().is_zero());
        }
    }

    #[test]
    fn leibniz_on_valid_stems((n, seed) in arity_and_seed()) {
        let mut r = rng(seed);
        let f = random_valid_stem(&mut r, n);
        let g = random_valid_stem(&mut r, n);
        for h in 1..=n {
            prop_assert!(leibniz_defect(&f, &g, h).unwrap().is_zero());
        }
    }

    #[test]
    fn spherical_operators_on_valid_stems((n, seed) in arity_and_seed()) {
        let f = random_valid_stem(&mut rng(seed), n);
        for i in 1..=n {
            prop_assert!(idempotence_defect(&f, i).unwrap().is_zero());
            prop_assert!(annihilation_defect(&f, i).unwrap().is_zero());
            for j in 1..=n {
                prop_assert!(commutation_defect(&f, i, j).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn circular_stems_form_a_subalgebra((n, seed) in arity_and_seed()) {
        let mut r = rng(seed);
        let set = SubsetIndex::from_bits(r.gen_range(0..(1u32 << n)));
        let f = spherical_value_stem(&random_valid_stem(&mut r, n), set).unwrap();
        let g = spherical_value_stem(&random_valid_stem(&mut r, n), set).unwrap();
        prop_assert!(circular_product_closed(&f, &g, set).unwrap());
    }

    #[test]
    fn ordered_stems_are_slice_regular(seed in any::<u64>()) {
        let (n, _, f) = random_case(&mut rng(seed));
        prop_assert!(f.is_valid());
        prop_assert!(is_slice_regular(&f));
        for h in 1..=n {
            prop_assert!(slice_regular_corollary_holds(&f, h).unwrap());
            for t in (1..=n).filter(|&t| t != h) {
                prop_assert!(regularity_preservation_defect(&f, h, t).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn higher_derivatives_vanish(seed in any::<u64>()) {
        let (n, _, f) = random_case(&mut rng(seed));
        for h in 2..=n {
            if !is_slice_wrt(&f, SubsetIndex::singleton(h)).unwrap().holds {
                continue;
            }
            for bits in 0..(1u32 << n) {
                let set = SubsetIndex::from_bits(bits).with(h);
                if set.is_disjoint(SubsetIndex::interval(1, h - 1)) {
                    continue;
                }
                prop_assert!(vanishing_defect(&f, h, set).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn circular_and_regular_means_constant_in_that_variable((n, seed) in arity_and_seed()) {
        let mut r = rng(seed);
        let h = r.gen_range(1..=n);
        let f = random_ordered_stem(&mut r, n);
        let g = spherical_value_h(&f, h).unwrap();
        for candidate in [f, g] {
            let set = SubsetIndex::singleton(h);
            if is_circular_wrt(&candidate, set).unwrap().holds && is_slice_regular_wrt(&candidate, set).unwrap().holds {
                prop_assert!(is_locally_constant_in(&candidate, h));
            }
        }
    }

    #[test]
    fn evaluation_ignores_the_choice_of_decomposition((n, seed) in arity_and_seed()) {
        let mut r = rng(seed);
        let f = SliceFunction::new(random_valid_stem(&mut r, n));
        let x = SamplePlan::new(seed).draw_point(&mut r, n);
        let d = Decomposed::of(&x);
        let v = f.evaluate_decomposed(&d);
        for h in 1..=n {
            let w = f.evaluate_decomposed(&d.flipped(h));
            prop_assert!((&v - &w).norm() <= 1e-9 * (1.0 + v.norm()));
        }
    }

    #[test]
    fn default_unit_is_irrelevant_on_the_real_fiber((n, seed) in arity_and_seed()) {
        let mut r = rng(seed);
        let f = SliceFunction::new(random_valid_stem(&mut r, n));
        let h = r.gen_range(1..=n);
        let x = SamplePlan::new(seed).draw_point(&mut r, n);
        let x = x.with_coord(h, &sliceq::QF::from_real(x.coord(h).w));
        let d = Decomposed::of(&x);
        let mut other = d.clone();
        other.units[h - 1] = sliceq::sampling::sample_unit(&mut r);
        let (a, b) = (f.evaluate_decomposed(&d), f.evaluate_decomposed(&other));
        prop_assert!((&a - &b).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn pointwise_and_stem_routes_agree((n, seed) in arity_and_seed()) {
        let mut r = rng(seed);
        let f = random_valid_stem(&mut r, n);
        let sf = SliceFunction::new(f.clone());
        let h = r.gen_range(1..=n);
        let x = SamplePlan::new(seed).targeting(h).draw_point(&mut r, n);
        let value = SliceFunction::new(spherical_value_h(&f, h).unwrap()).evaluate(&x).unwrap();
        let pointwise = sf.spherical_value_pointwise(h, &x).unwrap();
        prop_assert!((&value - &pointwise).norm() <= 1e-9 * (1.0 + value.norm()));
        if is_slice_wrt(&f, SubsetIndex::singleton(h)).unwrap().holds {
            let d = SliceFunction::new(spherical_derivative_h(&f, h).unwrap()).evaluate(&x).unwrap();
            let p = sf.spherical_derivative_pointwise(h, &x).unwrap();
            prop_assert!((&d - &p).norm() <= 1e-8 * (1.0 + d.norm()));
        }
    }

    #[test]
    fn structural_and_definitional_sliceness_agree((n, seed) in (2usize..=3, any::<u64>())) {
        let mut r = rng(seed);
        let f = random_valid_stem(&mut r, n);
        let sf = SliceFunction::new(f.clone());
        let plan = SamplePlan::new(seed).with_count(16);
        let samples = representation_samples(&plan);
        for h in 1..=n {
            let slice = is_slice_wrt(&f, SubsetIndex::singleton(h)).unwrap().holds;
            let worst = (0..4)
                .map(|_| {
                    let y = plan.draw_point(&mut r, n);
                    onevar_representation_check(&sf.raw_restriction(h, &y).unwrap(), &samples)
                })
                .fold(0.0, f64::max);
            if slice {
                prop_assert!(worst < 1e-8, "h={} residual {}", h, worst);
            } else {
                prop_assert!(worst > 1e-6, "h={} residual {}", h, worst);
            }
        }
    }
}

#[test]
fn slice_product_is_not_pointwise() {
    let x2 = coordinate_stem(2, 2).unwrap();
    let x1 = coordinate_stem(1, 2).unwrap();
    let p = SliceFunction::new(stem_tensor(&x2, &x1).unwrap());
    let pts = SamplePlan::new(9).with_count(8).points(2).unwrap();
    let worst = pts
        .iter()
        .map(|x| (&p.evaluate(x).unwrap() - &(&x.coord(2) * &x.coord(1))).norm())
        .fold(0.0, f64::max);
    assert!(worst > 0.1);
}
