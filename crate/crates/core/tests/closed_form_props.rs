use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;
use radcount::closed_form::eval_at;
use radcount::{a3_count_poly, count_commuting, gaussian_binomial, CountOptions, PolyQ, Quiver, SummandVector};

fn poly() -> impl Strategy<Value = PolyQ> {
    prop::collection::vec(-4i64..=4, 0..6).prop_map(|cs| {
        cs.iter().enumerate().fold(PolyQ::zero(), |acc, (e, &c)| {
            acc + PolyQ::monomial(BigRational::from_integer(BigInt::from(c)), e as u32)
        })
    })
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * i64::from(n - i) / i64::from(i + 1))
}

proptest! {
    #[test]
    fn evaluation_is_a_ring_map(a in poly(), b in poly(), x in -5i64..=5) {
        let x = BigRational::from_integer(BigInt::from(x));
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        prop_assert_eq!(&a - &a, PolyQ::zero());
        prop_assert_eq!(a.pow(2), &a * &a);
    }

    #[test]
    fn gaussian_binomials(n in 0u32..8, k in 0u32..8) {
        prop_assume!(k <= n);
        let g = gaussian_binomial(n, k).unwrap();
        prop_assert_eq!(&g, &gaussian_binomial(n, n - k).unwrap());
        prop_assert_eq!(g.eval_int(1), BigRational::from_integer(BigInt::from(binomial(n, k))));
        prop_assert!(g.has_nonnegative_coefficients() && g.has_integer_coefficients());
        if k >= 1 && k < n {
            // [n, k] = [n-1, k-1] + q^k [n-1, k]
            let rhs = gaussian_binomial(n - 1, k - 1).unwrap() + &PolyQ::q_pow(k) * &gaussian_binomial(n - 1, k).unwrap();
            prop_assert_eq!(g, rhs);
        }
    }

    #[test]
    fn a3_degree_and_leading_term(l in 1u32..5, d in 1u32..5, m in 1u32..5) {
        let p = a3_count_poly(l, d, m).unwrap();
        prop_assert!(p.has_integer_coefficients());
        // the count is at most q^(2 dim rad) with dim rad = ld + dm + lm
        prop_assert!(p.degree().unwrap() <= 2 * (l * d + d * m + l * m));
        prop_assert_eq!(p, a3_count_poly(m, d, l).unwrap());
    }
}

#[test]
fn a3_formula_matches_brute_force() {
    let a3 = Quiver::linear(3);
    let opts = CountOptions::with_jobs(4);
    for l in 1..=2 {
        for d in 1..=2 {
            for m in 1..=2 {
                let p = a3_count_poly(l, d, m).unwrap();
                for q in [2u32, 3] {
                    let brute = count_commuting(&a3, &SummandVector::new(vec![l, d, m]), q, &opts).unwrap().value;
                    assert_eq!(eval_at(&p, q).unwrap(), brute, "({l},{d},{m}) q={q}");
                }
            }
        }
    }
}

#[test]
fn a3_examples() {
    assert_eq!(a3_count_poly(1, 1, 1).unwrap().to_string(), "q^5 + q^4 - q^3");
    assert_eq!(eval_at(&a3_count_poly(1, 1, 1).unwrap(), 2).unwrap(), BigUint::from(40u32));
    assert!(a3_count_poly(0, 1, 1).is_err());
}
