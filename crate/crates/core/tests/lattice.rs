use cremona::intersect::{exceptional_numbers, mixed_numbers, SurfaceInvariants};
use cremona::lattice::*;
use num_rational::Ratio;
use proptest::prelude::*;

fn algebraic() -> GramLattice {
    GramLattice::algebraic(12)
}

fn m_squared_constraints() -> ClassConstraints {
    let s = SurfaceInvariants::example();
    ClassConstraints::m_squared(s.n, &mixed_numbers(&s).unwrap(), &exceptional_numbers(), -12)
}

fn h_m_constraints() -> ClassConstraints {
    let m2 = solve_class_decomposition(&m_squared_constraints()).unwrap();
    ClassConstraints::h_m(4, &m2, -12)
}

/// gcd of all k x k minors, by cofactor expansion.
fn determinantal_divisor(a: &IntMatrix, k: usize) -> i128 {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (k - 1..n)
            .flat_map(|last| {
                subsets(last, k - 1).into_iter().map(move |mut s| {
                    s.push(last);
                    s
                })
            })
            .collect()
    }
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
    let mut g = 0;
    for rows in subsets(a.rows(), k) {
        for cols in subsets(a.cols(), k) {
            let sub: Vec<Vec<i128>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| a.get(i, j)).collect())
                .collect();
            g = gcd(g, IntMatrix::from_rows(&sub).det());
        }
    }
    g
}

#[test]
fn smith_examples() {
    assert_eq!(smith_normal_form(&IntMatrix::identity(4)).diagonal(), vec![1; 4]);
    assert_eq!(smith_normal_form(&IntMatrix::diagonal(&[1, -12])).diagonal(), vec![1, 12]);
    assert_eq!(
        smith_normal_form(algebraic().gram()).diagonal(),
        vec![1, 1, 1, 1, 1, 1, 1, 12]
    );
}

#[test]
fn discriminant_groups() {
    let g = discriminant_group(&algebraic()).unwrap();
    assert_eq!(g.invariant_factors, vec![12]);
    let mut expected = vec![Ratio::from_integer(0); 8];
    expected[POLARIZATION] = Ratio::new(-1, 12);
    assert_eq!(g.generators[0], expected);

    let unimodular = GramLattice::new(IntMatrix::identity(8), (0..8).map(|i| format!("e{i}")).collect()).unwrap();
    assert!(discriminant_group(&unimodular).unwrap().is_trivial());

    let two = GramLattice::new(IntMatrix::diagonal(&[2, 2]), vec!["a".into(), "b".into()]).unwrap();
    let g = discriminant_group(&two).unwrap();
    assert_eq!(g.invariant_factors, vec![2, 2]);
    assert_eq!(g.order(), 4);
}

#[test]
fn lattice_validation() {
    let ragged = IntMatrix::from_rows(&[[1, 2], [3, 4]]);
    assert_eq!(GramLattice::new(ragged, vec!["a".into(), "b".into()]), Err(LatticeError::NotSymmetric));
    let singular = IntMatrix::from_rows(&[[1, 1], [1, 1]]);
    assert_eq!(GramLattice::new(singular, vec!["a".into(), "b".into()]), Err(LatticeError::Singular));
}

#[test]
fn m_squared_decomposition() {
    let c = m_squared_constraints();
    assert_eq!(c.a, 7);
    assert_eq!(c.q, QCondition::Each(2));
    assert_eq!(c.f_sum, Affine { p: -12, q: -24 });
    assert_eq!(c.window_polynomial(), [3, 16, 21]);
    assert_eq!(c.search_window(), -3..=-3);
    let v = solve_class_decomposition(&c).unwrap();
    assert_eq!(v.0, [7, -3, 4, 4, 4, 2, 2, 2]);
}

#[test]
fn h_m_decomposition() {
    let c = h_m_constraints();
    assert_eq!(c.a, 36);
    assert_eq!(c.f_sum, Affine { p: -12, q: -132 });
    assert_eq!(c.q, QCondition::Sum(Affine { p: 6, q: 138 }));
    assert_eq!(c.window_polynomial(), [2, 67, 561]);
    assert_eq!(c.search_window(), -17..=-17);
    let v = solve_class_decomposition(&c).unwrap();
    assert_eq!(v.0, [36, -17, 24, 24, 24, 12, 12, 12]);
}

#[test]
fn widened_windows_add_no_solutions() {
    for c in [m_squared_constraints(), h_m_constraints()] {
        let w = c.search_window();
        let wide = c.solutions_in(w.start() - 3..=w.end() + 3);
        assert_eq!(wide, c.solutions_in(w));
        assert_eq!(wide.len(), 1);
    }
}

#[test]
fn perturbed_constraints_have_no_solution() {
    let mut c = m_squared_constraints();
    c.a = 8;
    c.f_sum.q = 4 - 4 * 8;
    assert_eq!(solve_class_decomposition(&c), Err(LatticeError::NoSolution));
    assert!(c.solutions_in(-40..=40).is_empty());
}

#[test]
fn base_change_is_an_isometry() {
    let lat = algebraic();
    let t = full_base_change(&lat).unwrap();
    assert_eq!(t.row(0), &[7, -3, 4, 4, 4, 2, 2, 2]);
    assert_eq!(t.row(1), &[36, -17, 24, 24, 24, 12, 12, 12]);
    assert_eq!(lat.norm(t.row(0)), 1);
    assert_eq!(lat.norm(t.row(1)), -12);
    assert_eq!(t.det().abs(), 1);
    // swapping the roles of the two bases gives the same matrix
    assert_eq!(t.mul(&t), IntMatrix::identity(8));

    let mut bad = t.to_rows();
    bad[2][0] += 1;
    assert!(!lat.is_isometry(&IntMatrix::from_rows(&bad)));
}

#[test]
fn top_rows_match_the_searches() {
    let t = full_base_change(&algebraic()).unwrap();
    assert_eq!(solve_class_decomposition(&m_squared_constraints()).unwrap().0, t.row(0));
    assert_eq!(solve_class_decomposition(&h_m_constraints()).unwrap().0, t.row(1));
}

#[test]
fn discriminant_multiplier_is_seven() {
    let lat = algebraic();
    let t = full_base_change(&lat).unwrap();
    let k = discriminant_action(&lat, &t).unwrap();
    assert_eq!(k, 7);
    assert_eq!(k * k % 12, 1);
    assert_eq!(discriminant_action(&lat, &IntMatrix::identity(8)).unwrap(), 1);

    let group = discriminant_group(&lat).unwrap();
    let negated: Vec<_> = group.generators[0].iter().map(|x| -x).collect();
    assert_eq!(discriminant_action_with(&lat, &t, &negated, 12).unwrap(), 7);
}

#[test]
fn quadric_sign_flips_change_nothing() {
    let lat = algebraic();
    let t = full_base_change(&lat).unwrap();
    let s = IntMatrix::diagonal(&[1, 1, 1, 1, 1, -1, -1, -1]);
    let flipped = s.mul(&t).mul(&s);
    assert!(lat.is_isometry(&flipped));
    assert_eq!(discriminant_action(&lat, &flipped).unwrap(), 7);
}

fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i128..=9, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i128>> = v.chunks(c).map(<[i128]>::to_vec).collect();
            IntMatrix::from_rows(&rows)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_form_is_correct(a in arb_matrix()) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d.clone());
        prop_assert_eq!(snf.u.det().abs(), 1);
        prop_assert_eq!(snf.v.det().abs(), 1);
        prop_assert!(snf.d.is_diagonal());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[0] >= 0);
            if w[0] == 0 {
                prop_assert_eq!(w[1], 0);
            } else {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }
        // products of invariant factors are the determinantal divisors
        if a.rows().min(a.cols()) <= 4 {
            let mut prod = 1;
            for (k, &d) in diag.iter().enumerate() {
                prod *= d;
                prop_assert_eq!(prod, determinantal_divisor(&a, k + 1));
            }
        }
    }
}
