//! Randomized checks of the algebraic identities, with a fixed seed.

use proptest::prelude::*;

use crate::models::Corruption;
use crate::testkit::*;

proptest! {
    #![proptest_config(config())]

    #[test]
    fn exterior_derivative_squares_to_zero(a in form4()) {
        prop_assert!(d_squared_vanishes(&a).unwrap());
    }

    #[test]
    fn pullback_commutes_with_d(
        images in prop::collection::vec(terms(3, 2, 2), 4),
        a in (0usize..=2).prop_flat_map(|k| graded(4, k, 1)),
    ) {
        prop_assert!(pullback_commutes(&images, &a).unwrap());
    }

    #[test]
    fn schouten_graded_jacobi(a in multivector3(), b in multivector3(), c in multivector3()) {
        prop_assert!(schouten_jacobi(&a, &b, &c).unwrap());
    }

    #[test]
    fn schouten_of_bivector_matches_component_formula(lam in graded(3, 2, 2)) {
        prop_assert!(schouten_matches_component_formula(&lam).unwrap());
    }

    #[test]
    fn mass_shell_bracket_is_antisymmetric(f in shell_function(), g in shell_function()) {
        let pair = mass_shell().pair();
        prop_assert!(bracket_antisymmetric(pair, &shell_expr(&f), &shell_expr(&g)).unwrap());
    }

    #[test]
    fn hamiltonian_fields_represent_the_bracket(f in small_shell_function(), g in small_shell_function()) {
        let pair = mass_shell().pair();
        prop_assert!(hamiltonian_homomorphism(pair, &shell_expr(&f), &shell_expr(&g)).unwrap());
    }

    #[test]
    fn first_order_leibniz_rule(f in shell_function(), g in shell_function(), h in shell_function()) {
        let pair = mass_shell().pair();
        prop_assert!(leibniz_defect_vanishes(pair, &shell_expr(&f), &shell_expr(&g), &shell_expr(&h)).unwrap());
    }

    #[test]
    fn operator_commutator_jacobi(a in operator(2, 2), b in operator(2, 2), c in operator(1, 2)) {
        prop_assert!(operator_jacobi(&a, &b, &c).unwrap());
    }

    #[test]
    fn commutator_drops_order(a in operator(3, 2), b in operator(3, 2)) {
        prop_assert!(order_drops(&a, &b).unwrap());
    }

    #[test]
    fn symbol_agrees_with_pulled_back_plane_wave(d in homogeneous_operator(), s in terms(2, 3, 3)) {
        prop_assert!(symbol_pullback(&d, &s).unwrap());
    }

    #[test]
    fn peierls_bracket_is_antisymmetric(geo in geodesic_spec(), a in functional(), b in functional()) {
        prop_assert!(peierls_antisymmetric(&geo, &a, &b).unwrap());
    }

    #[test]
    fn peierls_bracket_is_gauge_independent(
        geo in geodesic_spec(),
        a in functional(),
        b in functional(),
        gauge in (-3i64..=3, -3i64..=3, prop::array::uniform4(-3i64..=3)),
    ) {
        prop_assert!(gauge_independent(&geo, &a, &b, &gauge).unwrap());
    }

    #[test]
    fn theta_is_conserved(geo in geodesic_spec(), j in field_spec()) {
        prop_assert!(theta_conserved(&geo, &j).unwrap());
    }

    #[test]
    fn omega_is_conserved(geo in geodesic_spec(), j1 in field_spec(), j2 in field_spec()) {
        prop_assert!(omega_conserved(&geo, &j1, &j2).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..config() })]

    #[test]
    fn reduction_is_confluent(p in rule_poly(), q in rule_poly()) {
        prop_assert!(reduction_confluent(&p, &q));
    }
}

#[test]
fn mass_shell_bracket_satisfies_jacobi_on_samples() {
    let pair = mass_shell().pair();
    for fs in sample(
        (small_shell_function(), small_shell_function(), small_shell_function()),
        8,
    ) {
        let (f, g, h) = (shell_expr(&fs.0), shell_expr(&fs.1), shell_expr(&fs.2));
        assert!(jacobi_identity(pair, &f, &g, &h).unwrap());
    }
}

#[test]
fn corrupted_tensors_break_verification() {
    for c in [Corruption::Lambda, Corruption::Gamma, Corruption::Theta] {
        let report = mass_shell().corrupted(c).unwrap().verify();
        assert!(!report.all_passed(), "{c:?}");
    }
}

#[test]
fn corrupted_lambda_breaks_jacobi_identity() {
    let bad = mass_shell().corrupted(Corruption::Lambda).unwrap();
    let c = bad.chart();
    let fs: Vec<_> = ["x0", "x1", "x2", "p1", "p2"]
        .iter()
        .map(|n| c.expr(n).unwrap())
        .collect();
    let broken = fs.iter().any(|f| {
        fs.iter()
            .any(|g| fs.iter().any(|h| !jacobi_identity(bad.pair(), f, g, h).unwrap()))
    });
    assert!(broken);
}
