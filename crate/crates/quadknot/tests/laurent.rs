use num_bigint::BigInt;
use proptest::prelude::*;
use quadknot::laurent::{poly_add, poly_mul, poly_span, poly_substitute_inverse};
use quadknot::LaurentPoly;

fn p(s: &str) -> LaurentPoly {
    s.parse().unwrap()
}

/// `(-A^2 - A^-2)^n` by the binomial theorem, independent of multiplication.
fn loop_power_by_binomial(n: u32) -> LaurentPoly {
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let mut binom: i64 = 1;
    let mut terms = Vec::new();
    for k in 0..=n as i64 {
        terms.push((2 * (n as i64 - k) - 2 * k, sign * binom));
        binom = binom * (n as i64 - k) / (k + 1);
    }
    LaurentPoly::from_terms(terms)
}

#[test]
fn addition_examples() {
    assert!(poly_add(&p("A^2"), &p("-A^2")).is_zero());
    assert_eq!(poly_add(&p("A^2 + A^-2"), &p("A^2")), p("2A^2 + A^-2"));
    assert!(poly_add(&LaurentPoly::loop_factor(), &p("A^2 + A^-2")).is_zero());
}

#[test]
fn multiplication_examples() {
    let l = LaurentPoly::loop_factor();
    assert_eq!(poly_mul(&l, &l), p("A^4 + 2 + A^-4"));
    assert_eq!(poly_mul(&p("3A^5 - A^-1"), &LaurentPoly::one()), p("3A^5 - A^-1"));
    let cube = poly_mul(&poly_mul(&l, &l), &l);
    assert_eq!(cube, loop_power_by_binomial(3));
    assert_eq!(cube, p("-A^6 - 3A^2 - 3A^-2 - A^-6"));
    for n in 0..12 {
        assert_eq!(l.pow(n), loop_power_by_binomial(n), "n = {n}");
    }
}

#[test]
fn span_examples() {
    assert_eq!(poly_span(&p("A^6 + A^-2")), 8);
    assert_eq!(poly_span(&LaurentPoly::one()), 0);
    assert_eq!(poly_span(&LaurentPoly::zero()), 0);
}

#[test]
fn inverse_examples() {
    assert_eq!(poly_substitute_inverse(&p("A^6")), p("A^-6"));
    assert_eq!(poly_substitute_inverse(&p("A^2 + 2A^-4")), p("A^-2 + 2A^4"));
    let l = LaurentPoly::loop_factor();
    assert_eq!(poly_substitute_inverse(&l), l);
}

#[test]
fn rendering_is_sorted_and_parses_back() {
    let cube = LaurentPoly::loop_factor().pow(3);
    assert_eq!(cube.to_string(), "-A^6 - 3A^2 - 3A^-2 - A^-6");
    assert_eq!(p("A - 1 + 2A^-1").to_string(), "A - 1 + 2A^-1");
}

#[test]
fn coefficients_do_not_overflow() {
    // Far beyond 64 bits: (1 + A)^200 has central coefficient C(200, 100).
    let big = p("1 + A").pow(200);
    let mut c = BigInt::from(1);
    for k in 0..100u32 {
        c = c * BigInt::from(200 - k) / BigInt::from(k + 1);
    }
    assert_eq!(big.coeff(100), c);
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-12i64..=12, -50i64..=50), 0..8).prop_map(LaurentPoly::from_terms)
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn span_is_additive(a in poly(), b in poly()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert_eq!(poly_span(&(&a * &b)), poly_span(&a) + poly_span(&b));
    }

    #[test]
    fn inverse_is_a_span_preserving_involution(a in poly()) {
        let inv = poly_substitute_inverse(&a);
        prop_assert_eq!(poly_substitute_inverse(&inv), a.clone());
        prop_assert_eq!(poly_span(&inv), poly_span(&a));
    }

    #[test]
    fn text_round_trips(a in poly()) {
        prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
    }

    #[test]
    fn no_zero_terms_are_stored(a in poly(), b in poly()) {
        let s = &a + &b;
        prop_assert!(s.terms().all(|(_, c)| c != &BigInt::from(0)));
    }
}
