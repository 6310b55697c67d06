mod common;

use common::instance;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;
use radcount::count::Mode;
use radcount::lab::{degree_bound, fit_counts, smallest_qs};
use radcount::{interpolate, CountOptions, Engine, Error, PolyQ, Quiver, SampleSet, SummandVector};

fn counting_poly() -> impl Strategy<Value = PolyQ> {
    (prop::collection::vec(-3i64..=3, 0..6), 1i64..=3).prop_map(|(cs, lead)| {
        let top = cs.len() as u32;
        cs.iter().enumerate().fold(PolyQ::monomial(BigRational::from_integer(BigInt::from(lead)), top + 3), |acc, (e, &c)| {
            acc + PolyQ::monomial(BigRational::from_integer(BigInt::from(c)), e as u32)
        })
    })
}

proptest! {
    #[test]
    fn interpolation_recovers_polynomials(p in counting_poly(), extra in 0usize..3) {
        let deg = p.degree().unwrap() as usize;
        let bound = deg + extra;
        let qs = smallest_qs(bound + 2);
        let points: Option<Vec<(u32, BigUint)>> = qs.iter().map(|&q| p.eval_count(u64::from(q)).map(|v| (q, v))).collect();
        let points = points.unwrap();
        let fit = interpolate(&SampleSet::new(points, Engine::Brute).unwrap(), bound, Mode::Radical).unwrap();
        prop_assert_eq!(fit.poly(), Some(&p));
    }

    #[test]
    fn radical_fits_respect_the_degree_bound((q, d) in instance(4, 1, 2)) {
        prop_assume!(q.weighted_path_count(&d, false) <= 4);
        let bound = degree_bound(&q, &d, Mode::Radical).unwrap();
        let fit = fit_counts(&q, &d, Mode::Radical, &smallest_qs(bound + 2), Engine::Brute, &CountOptions::with_jobs(2)).unwrap();
        let p = fit.poly().expect("held-out sample agrees");
        prop_assert!(p.degree().unwrap_or(0) as usize <= bound);
        prop_assert!(p.has_integer_coefficients());
    }
}

#[test]
fn too_few_samples() {
    let q = Quiver::linear(2);
    let e = fit_counts(&q, &SummandVector::ones(2), Mode::Radical, &[2, 3], Engine::Brute, &CountOptions::with_jobs(1));
    assert!(matches!(e, Err(Error::InsufficientSamples { need: 4, have: 2 })));
}

#[test]
fn degree_bounds() {
    let ones = SummandVector::ones(3);
    assert_eq!(degree_bound(&Quiver::linear(2), &SummandVector::ones(2), Mode::Radical).unwrap(), 2);
    assert_eq!(degree_bound(&Quiver::linear(3), &ones, Mode::Radical).unwrap(), 5);
    assert_eq!(radcount::lab::pair_space_dim(&Quiver::linear(3), &ones, Mode::Radical).unwrap(), 6);
    assert_eq!(radcount::lab::pair_space_dim(&Quiver::linear(3), &ones, Mode::Overline).unwrap(), 9);
}

#[test]
fn a3_fit_with_holdout() {
    let fit = fit_counts(
        &Quiver::linear(3),
        &SummandVector::ones(3),
        Mode::Radical,
        &[2, 3, 4, 5, 7, 8, 9],
        Engine::Brute,
        &CountOptions::with_jobs(2),
    )
    .unwrap();
    assert_eq!(fit.poly().unwrap().to_string(), "q^5 + q^4 - q^3");
    assert_eq!(fit.holdout.len(), 1);
    assert!(fit.holdout[0].matches());
    assert!(!fit.nonneg());
    assert!(fit.integer());
}
