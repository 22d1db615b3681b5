use cremona::intersect::*;
use proptest::prelude::*;

fn example() -> SurfaceInvariants {
    SurfaceInvariants::example()
}

fn excluded_87() -> SurfaceInvariants {
    SurfaceInvariants {
        n: 4,
        m: 1,
        xi: 4,
        d: 8,
        delta: 7,
        kc: -4,
        k2: -5,
        c2: 5,
        chi: 0,
        g: 3,
    }
}

fn elliptic_scroll() -> SurfaceInvariants {
    SurfaceInvariants {
        n: 3,
        m: 1,
        xi: 2,
        d: 5,
        delta: 0,
        kc: -5,
        k2: 0,
        c2: 0,
        chi: 0,
        g: 1,
    }
}

fn multinomial(a: u32, b: u32, c: u32) -> i128 {
    let fact = |k: u32| (1..=k as i128).product::<i128>();
    fact(a + b + c) / (fact(a) * fact(b) * fact(c))
}

/// `L^a E^b E'^c` for a single double point.
fn monomial_number(s: &SurfaceInvariants, a: u32, b: u32, c: u32) -> i128 {
    let ex = exceptional_numbers();
    let le = [1, 0, -s.d, -5 * s.d - s.kc, e4_from_c2(s)];
    match (a, c) {
        (_, 0) => le[b as usize],
        (0, 1) => ex.e3_ei,
        (0, 2) => ex.e2_ei2,
        (0, 3) => ex.e_ei3,
        (0, 4) => ex.ei4,
        _ => 0,
    }
}

/// `L^k M^(4-k)` by multinomial expansion of `M = nL - mE - 2m sum E'_i`;
/// products of distinct `E'_i` vanish.
fn expand_lk_m(s: &SurfaceInvariants, k: u32) -> i128 {
    let r = 4 - k;
    let mut total = 0;
    for c in 0..=r {
        for b in 0..=r - c {
            let a = r - b - c;
            let coeff = multinomial(a, b, c) * s.n.pow(a) * (-s.m).pow(b) * (-2 * s.m).pow(c);
            let count = if c == 0 { 1 } else { s.delta };
            total += coeff * count * monomial_number(s, a + k, b, c);
        }
    }
    total
}

#[test]
fn exceptional_constants() {
    assert_eq!(exceptional_numbers().as_array(), [0, -4, 2, 0, -1]);
}

#[test]
fn example_numbers() {
    let s = example();
    assert_eq!(le_numbers(&s).unwrap().as_array(), [0, -9, -48, -159]);
    assert_eq!(mixed_numbers(&s).unwrap().as_array(), [4, 7, 4, 1]);
    assert_eq!(xi_formula(&s), 4);
    assert_eq!(m4_formula(&s).unwrap(), 1);
}

#[test]
fn closed_forms_match_the_expansion() {
    for s in [example(), excluded_87(), elliptic_scroll()] {
        assert_eq!(expand_lk_m(&s, 4), 1);
        assert_eq!(expand_lk_m(&s, 3), s.n);
        assert_eq!(expand_lk_m(&s, 2), s.n * s.n - s.m * s.m * s.d);
        assert_eq!(expand_lk_m(&s, 1), xi_formula(&s));
        assert_eq!(expand_lk_m(&s, 0), m4_evaluations(&s).0);
    }
}

#[test]
fn node_terms_cancel_except_in_e4() {
    // the E'_i contributions to M^4 sum to zero, so delta enters only through E^4
    let ex = exceptional_numbers();
    let per_node = 4 * 2 * ex.e3_ei + 6 * 4 * ex.e2_ei2 + 4 * 8 * ex.e_ei3 + 16 * ex.ei4;
    assert_eq!(per_node, 0);
}

#[test]
fn nodes_are_essential_for_birationality() {
    let mut s = example();
    s.delta = 0;
    assert_eq!(m4_evaluations(&s), (-17, -11));
    assert!(matches!(
        m4_formula(&s),
        Err(IntersectError::M4Mismatch { first: -17, second: -11 })
    ));
}

#[test]
fn elliptic_scroll_numbers() {
    let s = elliptic_scroll();
    let le = le_numbers(&s).unwrap();
    assert_eq!(le.le3, -20);
    assert_eq!(le.e4, -50);
    assert_eq!(e4_from_c2(&s), e4_from_k2(&s));
    assert_eq!(double_point_class(&s).unwrap(), DoublePoint { class: 0, nodes: 0 });
}

#[test]
fn degenerate_degree_is_rejected() {
    let mut s = example();
    s.d = 0;
    assert!(matches!(le_numbers(&s), Err(IntersectError::InvalidInvariants(_))));
}

#[test]
fn inverse_degree_formula() {
    let linear = SurfaceInvariants {
        n: 1,
        m: 0,
        xi: 1,
        d: 1,
        delta: 0,
        kc: 0,
        k2: 0,
        c2: 0,
        chi: 0,
        g: 0,
    };
    assert_eq!(xi_formula(&linear), 1);
    assert_eq!(m4_formula(&linear).unwrap(), 1);
    assert_eq!(mixed_numbers(&linear).unwrap().as_array(), [1, 1, 1, 1]);
    // (n, m, xi) = (3, 1, 2) forces KC = 4d - 25
    for d in 1..20 {
        let mut s = elliptic_scroll();
        s.d = d;
        s.kc = 4 * d - 25;
        assert_eq!(xi_formula(&s), 2);
    }
}

#[test]
fn example_is_symmetric_under_swapping_l_and_m() {
    // swapping L and M sends (L^3M, L^2M^2, LM^3, M^4) to (LM^3, L^2M^2, L^3M, L^4)
    let t = mixed_numbers(&example()).unwrap();
    assert_eq!([t.lm3, t.l2m2, t.l3m, 1], t.as_array());
}

#[test]
fn excluded_datum_passes_the_numerical_tests() {
    // (d, delta) = (8, 7) is only ruled out by the geometric argument
    let s = excluded_87();
    s.validate().unwrap();
    assert_eq!(xi_formula(&s), 4);
    assert_eq!(m4_formula(&s).unwrap(), 1);
    assert_eq!(double_point_class(&s).unwrap().nodes, 7);
}

#[test]
fn double_point_formula() {
    assert_eq!(double_point_class(&example()).unwrap(), DoublePoint { class: 6, nodes: 3 });
    let mut s = example();
    s.c2 += 1;
    assert!(matches!(double_point_class(&s), Err(IntersectError::OddDoublePointClass(7))));
}

#[test]
fn e4_expressions_differ_by_the_double_point_defect() {
    // Noether-consistent data with D != 2 delta: the two expressions disagree
    let mut s = example();
    s.delta = 4;
    s.validate().unwrap();
    let dp = double_point_class(&s).unwrap();
    assert_eq!(e4_from_c2(&s) - e4_from_k2(&s), 2 * s.delta - dp.class);
    assert!(matches!(le_numbers(&s), Err(IntersectError::E4Mismatch { .. })));
}

#[test]
fn plocus() {
    let p = plocus_numbers(&example(), 15).unwrap();
    assert_eq!(p.contraction_term, 60);
    assert_eq!(p.exceptional_degree, 15);
    assert_eq!((p.theta_mult, p.secant_degree, p.secant_hits), (4, 1, 4));
    assert!(matches!(
        plocus_numbers(&example(), 14),
        Err(IntersectError::NonIntegral { .. })
    ));
}

/// Invariants satisfying Noether, the genus formula and `D = 2 delta`.
fn consistent_tuple() -> impl Strategy<Value = SurfaceInvariants> {
    (1i128..60, -60i128..60, 0i128..50, -200i128..200, 2i128..10, 1i128..4).prop_map(
        |(d, kc0, delta, c2_base, n, m)| {
            let kc = if (kc0 - d) % 2 == 0 { kc0 } else { kc0 + 1 };
            // K^2 + c2 = d^2 - 10d - 5kc - 2 delta + 2 c2 must be divisible by 12
            let half = (d * d - 10 * d - 5 * kc - 2 * delta) / 2;
            let c2 = c2_base - (c2_base + half).rem_euclid(6);
            let k2 = d * d - 10 * d - 5 * kc + c2 - 2 * delta;
            let mut s = SurfaceInvariants {
                n,
                m,
                xi: 0,
                d,
                delta,
                kc,
                k2,
                c2,
                chi: (k2 + c2) / 12,
                g: (d + kc + 2) / 2,
            };
            s.xi = xi_formula(&s);
            s
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn e4_identity_on_consistent_tuples(s in consistent_tuple()) {
        prop_assert!(s.validate().is_ok());
        prop_assert_eq!(e4_from_c2(&s), e4_from_k2(&s));
        let le = le_numbers(&s).unwrap();
        prop_assert_eq!(le.e4, e4_from_c2(&s));
        prop_assert_eq!(double_point_class(&s).unwrap().nodes, s.delta);
        let (a, b) = m4_evaluations(&s);
        prop_assert_eq!(a, b);
        prop_assert_eq!(expand_lk_m(&s, 0), a);
        prop_assert_eq!(expand_lk_m(&s, 1), s.xi);
    }
}
