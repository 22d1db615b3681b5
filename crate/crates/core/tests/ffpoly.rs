use std::sync::Arc;

use cremona::ffpoly::{Monomial, MonomialOrder, PolyRing, Polynomial, PrimeField};
use proptest::prelude::*;

fn ring(n: usize) -> Arc<PolyRing> {
    PolyRing::indexed(PrimeField::f7(), "x", n, MonomialOrder::DegRevLex).unwrap()
}

fn parse(r: &Arc<PolyRing>, s: &str) -> Polynomial {
    Polynomial::parse(r, s).unwrap()
}

#[test]
fn difference_of_squares_mod_seven() {
    let r = PolyRing::new(
        PrimeField::f7(),
        vec!["x".into(), "y".into()],
        MonomialOrder::DegRevLex,
    )
    .unwrap();
    let p = parse(&r, "(x+y)*(x-y)");
    assert_eq!(p.to_string(), "x^2+6*y^2");
}

#[test]
fn canonical_text_for_og_quadric() {
    let r = ring(16);
    let p = parse(&r, "x0*x11 + x5*x10 - x6*x9 + x7*x8");
    assert_eq!(p.to_string(), "x7*x8+6*x6*x9+x5*x10+x0*x11");
    assert_eq!(parse(&r, &p.to_string()), p);
}

#[test]
fn text_is_independent_of_active_order() {
    let r = ring(3);
    let lex = r.with_order(MonomialOrder::Lex);
    let a = parse(&r, "x2^3 + x0*x1 + 5");
    let b = parse(&lex, "x2^3 + x0*x1 + 5");
    assert_eq!(a.to_string(), b.to_string());
    assert_eq!(a, b);
    assert_eq!(a.to_string(), "x2^3+x0*x1+5");
}

#[test]
fn zero_and_constants_print() {
    let r = ring(2);
    assert_eq!(parse(&r, "x0 - x0").to_string(), "0");
    assert_eq!(parse(&r, "-1").to_string(), "6");
    assert_eq!(parse(&r, "3*x0^2*x1").to_string(), "3*x0^2*x1");
}

#[test]
fn parse_errors_are_reported() {
    let r = ring(2);
    assert!(Polynomial::parse(&r, "x0 + y").is_err());
    assert!(Polynomial::parse(&r, "x0 +").is_err());
    assert!(Polynomial::parse(&r, "(x0").is_err());
    assert!(Polynomial::parse(&r, "x0 x1").is_err());
}

#[test]
fn ring_header_round_trip() {
    let r = PolyRing::indexed(PrimeField::f7(), "z", 4, MonomialOrder::Block(2)).unwrap();
    let h = cremona::ffpoly::format_ring_header(&r);
    assert_eq!(h, "ring p=7 vars=z0,z1,z2,z3 order=block(2)");
    let back = cremona::ffpoly::parse_ring_header(&h).unwrap();
    assert_eq!(*back, *r);
    assert!(cremona::ffpoly::parse_ring_header("ring p=8 vars=a").is_err());
}

#[test]
fn derivative_and_evaluation() {
    let r = ring(2);
    let p = parse(&r, "x0^7 + 3*x0^2*x1");
    // d/dx0 x0^7 = 7 x0^6 = 0 in characteristic 7
    assert_eq!(p.derivative(0), parse(&r, "6*x0*x1"));
    assert_eq!(p.evaluate(&[2, 3]), (128 + 36) % 7);
}

#[test]
fn exact_division() {
    let r = ring(3);
    let a = parse(&r, "x0^2 - x1*x2 + 3*x0");
    let b = parse(&r, "x1 + 2*x2^2");
    let prod = &a * &b;
    assert_eq!(prod.divide_exact(&b).unwrap(), a);
    assert!((&prod + &Polynomial::one(&r)).divide_exact(&b).is_none());
}

#[test]
fn taylor_detects_multiplicity() {
    let r = ring(3);
    // (x0 - x2)^2 * x1 has multiplicity 2 along x0 = x2 in the chart x2 = 1
    let p = parse(&r, "(x0 - x2)^2 * x1");
    let low = p.taylor_low(&[1, 4, 1], 1);
    assert!(low.is_zero());
    assert!(!p.taylor_low(&[1, 4, 1], 2).is_zero());
    assert!(!p.taylor_low(&[2, 4, 1], 0).is_zero());
}

#[test]
fn linear_substitution_matches_composition() {
    let src = ring(3);
    let dst = PolyRing::indexed(PrimeField::f7(), "z", 2, MonomialOrder::DegRevLex).unwrap();
    let p = parse(&src, "x0*x1 - x2^2");
    // x0 = z0, x1 = z1, x2 = z0 + z1
    let m = vec![vec![1, 0, 1], vec![0, 1, 1]];
    let q = p.substitute_linear(&m, &dst).unwrap();
    assert_eq!(q, parse(&dst, "-z0^2 - z0*z1 - z1^2"));
    assert!(p.substitute_linear(&m[..1], &dst).is_err());
}

fn arb_poly(r: Arc<PolyRing>) -> impl Strategy<Value = Polynomial> {
    let n = r.nvars();
    prop::collection::vec((prop::collection::vec(0u32..3, n), -10i64..10), 0..6).prop_map(
        move |terms| {
            Polynomial::from_terms(
                &r,
                terms
                    .into_iter()
                    .map(|(e, c)| (Monomial::from_exponents(&e), c)),
            )
        },
    )
}

fn three_polys() -> impl Strategy<Value = (Polynomial, Polynomial, Polynomial)> {
    let r = ring(3);
    (arb_poly(r.clone()), arb_poly(r.clone()), arb_poly(r))
}

proptest! {
    #[test]
    fn ring_axioms((a, b, c) in three_polys()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn text_round_trip((a, _, _) in three_polys()) {
        let back = Polynomial::parse(a.ring(), &a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn evaluation_is_a_homomorphism((a, b, _) in three_polys(), pt in prop::collection::vec(0u32..7, 3)) {
        let f = PrimeField::f7();
        prop_assert_eq!((&a * &b).evaluate(&pt), f.mul(a.evaluate(&pt), b.evaluate(&pt)));
        prop_assert_eq!((&a + &b).evaluate(&pt), f.add(a.evaluate(&pt), b.evaluate(&pt)));
    }

    #[test]
    fn substitution_is_a_homomorphism(
        (a, b, _) in three_polys(),
        m in prop::collection::vec(prop::collection::vec(0u32..7, 3), 2),
    ) {
        let dst = PolyRing::indexed(PrimeField::f7(), "z", 2, MonomialOrder::DegRevLex).unwrap();
        let lhs = (&a * &b).substitute_linear(&m, &dst).unwrap();
        let rhs = &a.substitute_linear(&m, &dst).unwrap() * &b.substitute_linear(&m, &dst).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn order_change_preserves_value((a, _, _) in three_polys()) {
        let lex = a.ring().with_order(MonomialOrder::Lex);
        let b = a.with_ring(&lex).unwrap();
        prop_assert_eq!(&b, &a);
        prop_assert!(b.terms().windows(2).all(|w| MonomialOrder::Lex.cmp(&w[0].0, &w[1].0).is_gt()));
    }

    #[test]
    fn derivative_leibniz((a, b, _) in three_polys(), i in 0usize..3) {
        let lhs = (&a * &b).derivative(i);
        let rhs = &(&a.derivative(i) * &b) + &(&a * &b.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }
}
