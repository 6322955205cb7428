use proptest::prelude::*;

use super::*;
use crate::groebner::membership_with_cofactors;
use crate::ring::parse_polynomial;
use crate::scalar::{int, rat};
use crate::testutil;

fn xy() -> Arc<GradedRing> {
    testutil::ring(2)
}

fn p(src: &str, r: &Arc<GradedRing>) -> Polynomial {
    parse_polynomial(src, r).unwrap()
}

fn res(g: &Polynomial, dens: &[Polynomial]) -> Polynomial {
    residue_symbol(&ResidueProblem::new(g.clone(), dens.to_vec())).unwrap()
}

/// Jacobian ideals in `x0, x1` with finite quotients.
fn denominators() -> Vec<Vec<&'static str>> {
    vec![
        vec!["3*x0^2", "3*x1^2"],
        vec!["x0^2", "x1^3"],
        vec!["2*x0*x1", "x0^2 + 4*x1^3"],
        vec!["2*x0*x1", "x0^2 + 3*x1^2"],
        vec!["3*x0^2", "4*x1^3"],
        vec!["4*x0^3 + x1^2", "2*x0*x1"],
    ]
}

#[test]
fn one_variable_pure_powers() {
    let r = testutil::ring(1);
    let dens = [p("x0^2", &r)];
    assert!(res(&Polynomial::one(&r), &dens).is_zero());
    assert_eq!(res(&p("x0", &r), &dens), Polynomial::one(&r));
    assert_eq!(res(&p("x0", &r), &[p("3*x0^2", &r)]), p("1/3", &r));
}

#[test]
fn numerator_in_the_ideal_vanishes() {
    let r = xy();
    for dens in denominators() {
        let dens: Vec<Polynomial> = dens.iter().map(|s| p(s, &r)).collect();
        assert!(res(&dens[0], &dens).is_zero());
        assert!(res(&(&dens[1] * &p("x0 + 7", &r)), &dens).is_zero());
    }
}

#[test]
fn hessian_has_residue_equal_to_milnor_number() {
    // res(hess f / ∂f) = μ(f), a classical consequence of the three facts.
    let r = xy();
    let cases = [("x0^3 + x1^3", 4), ("x0^2*x1 + x1^4", 5), ("x0^2*x1 + x1^3", 4), ("x0^3 + x1^4", 6)];
    for (f, mu) in cases {
        let f = p(f, &r);
        let d: Vec<Polynomial> = (0..2).map(|i| f.derivative(i)).collect();
        let h = &(&d[0].derivative(0) * &d[1].derivative(1)) - &(&d[0].derivative(1) * &d[1].derivative(0));
        assert_eq!(res(&h, &d), Polynomial::constant(&r, int(mu)), "{f}");
    }
}

#[test]
fn parameters_ride_along() {
    let r = testutil::ring(1).with_parameters(["c1", "c2"]).unwrap();
    let dens = [p("3*x0^2", &r)];
    let prob = ResidueProblem::over(p("c1*x0 + c2 + c1*c2*x0^2", &r), dens.to_vec(), vec![0]);
    assert_eq!(residue_symbol(&prob).unwrap(), p("1/3*c1", &r));
}

#[test]
fn errors() {
    let r = xy();
    let prob = ResidueProblem::new(Polynomial::one(&r), vec![p("x0", &r)]);
    assert_eq!(residue_symbol(&prob), Err(ResidueError::DenominatorCount { expected: 2, got: 1 }));
    let prob = ResidueProblem::over(Polynomial::one(&r), vec![p("x0 + x1", &r)], vec![0]);
    assert_eq!(residue_symbol(&prob), Err(ResidueError::ForeignDenominator));
    let prob = ResidueProblem::new(Polynomial::one(&r), vec![p("x0*x1", &r), p("x0^2", &r)]);
    assert!(matches!(residue_symbol(&prob), Err(ResidueError::Groebner(GroebnerError::InfiniteQuotient(_)))));
}

#[test]
fn transformation_rule_examples() {
    let r = xy();
    let dens = vec![p("x0^2", &r), p("x1^2", &r)];
    let prob = ResidueProblem::new(p("x0*x1 + 2*x0 + 3", &r), dens.clone());
    assert!(check_transformation_rule(&prob, &PolyMatrix::identity(&r, 2)).unwrap());
    let d = PolyMatrix::from_rows(&r, vec![vec![p("5", &r), p("0", &r)], vec![p("0", &r), p("-1/2", &r)]]);
    assert!(check_transformation_rule(&prob, &d).unwrap());
    let u = PolyMatrix::from_rows(&r, vec![vec![p("1", &r), p("x0 + x1^2", &r)], vec![p("0", &r), p("1", &r)]]);
    assert!(check_transformation_rule(&prob, &u).unwrap());
    assert_eq!(check_transformation_rule(&prob, &PolyMatrix::identity(&r, 3)), Err(ResidueError::Shape));
}

#[test]
fn certificate_choice_does_not_matter() {
    let r = xy();
    for dens in denominators() {
        let dens: Vec<Polynomial> = dens.iter().map(|s| p(s, &r)).collect();
        let a = ResidueContext::new(&r, &dens, &[0, 1]).unwrap();
        // second certificate from degrevlex cofactors of x_i^{d_i + 1}
        let exps: Vec<u32> = a.exponents().iter().map(|d| d + 1).collect();
        let rows: Vec<Vec<Polynomial>> = (0..2)
            .map(|i| {
                let target = Polynomial::monomial(&r, Monomial::var(2, i, exps[i]), int(1));
                membership_with_cofactors(&target, &dens, &MonomialOrder::degrevlex(2)).unwrap()
            })
            .collect();
        let b = ResidueContext::with_matrix(&r, &dens, &[0, 1], &PolyMatrix::from_rows(&r, rows), &exps).unwrap();
        for m in testutil::monomials_of_degree(2, 0)
            .into_iter()
            .chain(testutil::monomials_of_degree(2, 1))
            .chain(testutil::monomials_of_degree(2, 2))
            .chain(testutil::monomials_of_degree(2, 3))
        {
            let g = Polynomial::monomial(&r, m, int(1));
            assert_eq!(a.residue(&g), b.residue(&g));
            assert_eq!(a.residue(&g), a.residue_direct(&g));
            assert_eq!(b.residue(&g), b.residue_direct(&g));
        }
    }
}

#[test]
fn bad_certificate_is_rejected() {
    let r = xy();
    let dens = vec![p("x0^2", &r), p("x1^2", &r)];
    let m = PolyMatrix::identity(&r, 2);
    assert!(ResidueContext::with_matrix(&r, &dens, &[0, 1], &m, &[2, 2]).is_ok());
    assert_eq!(ResidueContext::with_matrix(&r, &dens, &[0, 1], &m, &[2, 3]).err(), Some(ResidueError::Shape));
}

#[test]
fn reduce_preserves_residue() {
    let r = xy().with_parameters(["c"]).unwrap();
    let dens = vec![p("2*x0*x1", &r), p("x0^2 + 3*x1^2", &r)];
    let ctx = ResidueContext::new(&r, &dens, &[0, 1]).unwrap();
    assert_eq!(ctx.quotient_dimension(), 4);
    let g = p("c*x0^3*x1 + x1^3 + c^2*x0^2 - x1^2 + c", &r);
    let red = ctx.reduce(&g);
    assert_eq!(ctx.residue(&red), ctx.residue(&g));
    assert_eq!(ctx.residue_direct(&g), ctx.residue(&g));
    assert_eq!(ctx.reduce(&red), red);
}

fn denominator_index() -> impl Strategy<Value = usize> {
    0..denominators().len()
}

fn dens_of(k: usize, r: &Arc<GradedRing>) -> Vec<Polynomial> {
    denominators()[k].iter().map(|s| p(s, r)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn vanishes_on_the_ideal(
        k in denominator_index(),
        h0 in testutil::polynomial(testutil::ring(2), 3, 4),
        h1 in testutil::polynomial(testutil::ring(2), 3, 4),
    ) {
        let r = h0.ring().clone();
        let dens = dens_of(k, &r);
        let g = &(&h0 * &dens[0]) + &(&h1 * &dens[1]);
        prop_assert!(res(&g, &dens).is_zero());
    }

    #[test]
    fn reads_the_socle_coefficient(
        d0 in 1u32..=4,
        d1 in 1u32..=4,
        g in testutil::polynomial(testutil::ring(2), 7, 8),
    ) {
        let r = g.ring().clone();
        let dens = vec![
            Polynomial::monomial(&r, Monomial::var(2, 0, d0), int(1)),
            Polynomial::monomial(&r, Monomial::var(2, 1, d1), int(1)),
        ];
        let expect = g.coefficient(&Monomial::new(vec![d0 - 1, d1 - 1]));
        prop_assert_eq!(res(&g, &dens), Polynomial::constant(&r, expect));
    }

    #[test]
    fn transformation_rule_holds(
        k in denominator_index(),
        g in testutil::polynomial(testutil::ring(2), 4, 5),
        h in testutil::polynomial(testutil::ring(2), 2, 3),
        a in testutil::nonzero_rational(),
        b in testutil::nonzero_rational(),
        lower in prop::bool::ANY,
    ) {
        let r = g.ring().clone();
        let prob = ResidueProblem::new(g.clone(), dens_of(k, &r));
        let z = Polynomial::zero(&r);
        let rows = if lower {
            vec![vec![Polynomial::constant(&r, a), z], vec![h, Polynomial::constant(&r, b)]]
        } else {
            vec![vec![Polynomial::constant(&r, a), h], vec![z, Polynomial::constant(&r, b)]]
        };
        prop_assert!(check_transformation_rule(&prob, &PolyMatrix::from_rows(&r, rows)).unwrap());
    }

    #[test]
    fn residue_is_linear(
        k in denominator_index(),
        g1 in testutil::polynomial(testutil::ring(2), 4, 5),
        g2 in testutil::polynomial(testutil::ring(2), 4, 5),
        a in testutil::small_rational(),
        b in testutil::small_rational(),
    ) {
        let r = g1.ring().clone();
        let ctx = ResidueContext::new(&r, &dens_of(k, &r), &[0, 1]).unwrap();
        let lhs = ctx.residue(&(&g1.scale(&a) + &g2.scale(&b)));
        let rhs = &ctx.residue(&g1).scale(&a) + &ctx.residue(&g2).scale(&b);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(ctx.residue(&g1), ctx.residue_direct(&g1));
    }
}

#[test]
fn mixed_weights_work_over_machine_rationals() {
    use num_rational::Ratio;
    let r = GradedRing::geometric([("x", rat(1, 2)), ("y", rat(2, 3)), ("z", rat(3, 4))]).unwrap();
    let f: Polynomial<Ratio<i64>> = parse_polynomial("x^4 + y^3 + x*z^2", &r).unwrap();
    let d: Vec<_> = (0..3).map(|i| f.derivative(i)).collect();
    let ctx = ResidueContext::new(&r, &d, &[0, 1, 2]).unwrap();
    assert_eq!(ctx.quotient_dimension(), 10);
}
