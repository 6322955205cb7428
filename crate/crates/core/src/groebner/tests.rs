use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::ring::{parse_polynomial, GradedRing};
use crate::scalar::{int, rat, Rational};
use crate::testutil;

fn ring(names: &[&str]) -> Arc<GradedRing> {
    GradedRing::geometric(names.iter().map(|n| (*n, int(1)))).unwrap()
}

fn polys(r: &Arc<GradedRing>, srcs: &[&str]) -> Vec<Polynomial> {
    srcs.iter().map(|s| parse_polynomial(s, r).unwrap()).collect()
}

fn lead(p: &Polynomial, order: &MonomialOrder) -> (Monomial, Rational) {
    p.terms().iter().max_by(|a, b| order.cmp(&a.0, &b.0)).cloned().unwrap()
}

fn s_poly(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (mf, cf) = lead(f, order);
    let (mg, cg) = lead(g, order);
    let l = mf.lcm(&mg);
    let a = f.mul_monomial(&mf.divide_into(&l).unwrap(), &cf.inverse());
    let b = g.mul_monomial(&mg.divide_into(&l).unwrap(), &cg.inverse());
    &a - &b
}

fn assert_groebner(gb: &GroebnerBasis) {
    let g = gb.generators();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            assert!(gb.normal_form(&s_poly(&g[i], &g[j], gb.order())).is_zero());
        }
    }
    let lms = gb.leading_monomials();
    for (i, a) in lms.iter().enumerate() {
        for (j, b) in lms.iter().enumerate() {
            assert!(i == j || !a.divides(b), "basis is not reduced");
        }
    }
}

fn assert_cofactors(gb: &GroebnerBasis, gens: &[Polynomial]) {
    let r = gb.ring();
    for (g, row) in gb.generators().iter().zip(gb.cofactors().unwrap()) {
        let sum = row.iter().zip(gens).fold(Polynomial::zero(r), |acc, (c, f)| &acc + &(c * f));
        assert_eq!(&sum, g);
    }
}

#[test]
fn principal_ideal_is_made_monic() {
    let r = ring(&["x"]);
    let gb = buchberger(&polys(&r, &["3*x^2"]), &MonomialOrder::degrevlex(1), true);
    assert_eq!(gb.generators(), polys(&r, &["x^2"]).as_slice());
    assert_cofactors(&gb, &polys(&r, &["3*x^2"]));
}

#[test]
fn lex_basis_of_linear_and_square() {
    let r = ring(&["x", "y"]);
    let gens = polys(&r, &["x - y", "y^2"]);
    let gb = buchberger(&gens, &MonomialOrder::lex(2), true);
    assert_eq!(gb.generators().len(), 2);
    assert!(gb.generators().contains(&gens[0]));
    assert!(gb.generators().contains(&gens[1]));
    assert_groebner(&gb);
    assert_cofactors(&gb, &gens);
}

#[test]
fn helper_equation_makes_the_unit_ideal() {
    let r = ring(&["c", "a", "b"]);
    let gens = polys(&r, &["c*a*b + c*b^2 - 1", "a*b + b^2"]);
    let gb = buchberger(&gens, &MonomialOrder::degrevlex(3), true);
    assert!(gb.is_unit());
    assert_cofactors(&gb, &gens);
    assert!(is_unit_ideal(&gens));
}

#[test]
fn normal_forms() {
    let r = ring(&["x"]);
    let gb = buchberger(&polys(&r, &["3*x^2"]), &MonomialOrder::degrevlex(1), false);
    assert!(gb.normal_form(&polys(&r, &["x^3"])[0]).is_zero());
    let p = polys(&r, &["x + 1"]).remove(0);
    assert_eq!(gb.normal_form(&p), p);
    assert_eq!(gb.normal_form(&gb.normal_form(&p)), gb.normal_form(&p));
}

#[test]
fn membership_examples() {
    let r = ring(&["x"]);
    let x3 = polys(&r, &["x^3"]).remove(0);
    let got = membership_with_cofactors(&x3, &polys(&r, &["3*x^2"]), &MonomialOrder::degrevlex(1)).unwrap();
    assert_eq!(got, polys(&r, &["1/3*x"]));
    let one = Polynomial::one(&r);
    assert!(membership_with_cofactors(&one, &polys(&r, &["x"]), &MonomialOrder::degrevlex(1)).is_none());

    let r = ring(&["x", "y"]);
    let p = polys(&r, &["x^2*y"]).remove(0);
    let got = membership_with_cofactors(&p, &polys(&r, &["x^2", "y^2"]), &MonomialOrder::degrevlex(2)).unwrap();
    assert_eq!(got, polys(&r, &["y", "0"]));
}

#[test]
fn quotient_dimensions() {
    let r = ring(&["x"]);
    assert_eq!(is_quotient_finite_dimensional(&polys(&r, &["3*x^2"])), QuotientDimension::Finite(2));
    let r = ring(&["x", "y"]);
    assert_eq!(is_quotient_finite_dimensional(&polys(&r, &["2*x*y", "x^2"])), QuotientDimension::Infinite);
    let r = GradedRing::geometric([("u", rat(2, 5)), ("v", rat(2, 3)), ("w", rat(4, 5))]).unwrap();
    let jac = polys(&r, &["5*u^4 + w^2", "3*v^2", "2*u*w"]);
    // Milnor number of the exceptional unimodal family member: 12
    assert_eq!(is_quotient_finite_dimensional(&jac), QuotientDimension::Finite(12));
}

#[test]
fn pure_power_examples() {
    let r = ring(&["x"]);
    let gens = polys(&r, &["3*x^2"]);
    let c = pure_power_certificate(&gens, 0).unwrap();
    assert_eq!((c.exponent, c.cofactors.clone()), (2, polys(&r, &["1/3"])));
    assert!(c.verify(&gens));

    let r = GradedRing::geometric([("x", rat(1, 2)), ("y", rat(2, 3)), ("z", rat(3, 4))]).unwrap();
    let gens = polys(&r, &["4*x^3 + z^2", "3*y^2", "2*x*z"]);
    let c = pure_power_certificate(&gens, 1).unwrap();
    assert_eq!((c.exponent, c.cofactors.clone()), (2, polys(&r, &["0", "1/3", "0"])));
    for var in 0..3 {
        let c = pure_power_certificate(&gens, var).unwrap();
        assert!(c.verify(&gens), "certificate for variable {var}");
    }
    let z = pure_power_certificate(&gens, 2).unwrap();
    assert_eq!(z.exponent, 3);
}

#[test]
fn pure_power_needs_finite_quotient() {
    let r = ring(&["x", "y"]);
    assert!(matches!(pure_power_certificate(&polys(&r, &["2*x*y", "x^2"]), 1), Err(GroebnerError::InfiniteQuotient(1))));
    assert_eq!(pure_power_certificate::<Rational>(&[], 0), Err(GroebnerError::NoGenerators));
}

#[test]
fn unit_ideal_examples() {
    let r = ring(&["x"]);
    assert!(is_unit_ideal(&polys(&r, &["x", "x - 1"])));
    assert!(!is_unit_ideal(&polys(&r, &["x - 1"])));
}

#[test]
fn quasi_homogeneous_input_gives_quasi_homogeneous_basis() {
    let r = GradedRing::geometric([("x", rat(1, 2)), ("y", rat(2, 3)), ("z", rat(3, 4))]).unwrap();
    let gens = polys(&r, &["4*x^3 + z^2", "3*y^2", "2*x*z"]);
    for order in [MonomialOrder::degrevlex(3), MonomialOrder::lex(3), MonomialOrder::lex_with_last(3, 0)] {
        let gb = buchberger(&gens, &order, false);
        assert_groebner(&gb);
        assert!(gb.generators().iter().all(|g| g.homogeneous_grading().is_some()));
    }
}

#[test]
fn lemma_bound_kills_high_degree_monomials() {
    let r = GradedRing::geometric([("x", rat(1, 2)), ("y", rat(2, 3)), ("z", rat(3, 4))]).unwrap();
    let gens = polys(&r, &["4*x^3 + z^2", "3*y^2", "2*x*z"]);
    let total: u32 = (0..3).map(|i| pure_power_certificate(&gens, i).unwrap().exponent).sum();
    let n = 3 * total + 1;
    let gb = buchberger(&gens, &MonomialOrder::degrevlex(3), false);
    for m in testutil::monomials_of_degree(3, n) {
        assert!(gb.normal_form(&Polynomial::monomial(&r, m, int(1))).is_zero());
    }
}

#[test]
fn limits_are_reported() {
    let r = ring(&["x", "y", "z"]);
    let gens = polys(&r, &["x^3 - y*z^2 + 1", "y^3 - x*z + 2", "z^3 - x*y^2 - 3"]);
    let limits = Limits { max_pairs: 1, ..Limits::default() };
    let err = buchberger_with_limits(&gens, &MonomialOrder::degrevlex(3), false, &limits).unwrap_err();
    assert_eq!(err.kind, LimitKind::Pairs);
    let limits = Limits { max_basis: 3, ..Limits::default() };
    let err = buchberger_with_limits(&gens, &MonomialOrder::degrevlex(3), false, &limits).unwrap_err();
    assert_eq!(err.kind, LimitKind::BasisSize);
}

#[test]
fn zero_ideal() {
    let r = ring(&["x"]);
    let gb = buchberger(&[Polynomial::<Rational>::zero(&r)], &MonomialOrder::degrevlex(1), false);
    assert!(gb.is_empty());
    assert_eq!(gb.normal_form(&Polynomial::var(&r, 0)), Polynomial::var(&r, 0));
    assert!(!is_unit_ideal(&[Polynomial::<Rational>::zero(&r)]));
}

/// `p ∈ span{ m·g : deg(m·g) = deg p }`, decided by Gaussian elimination.
/// Exact for homogeneous generators and homogeneous `p`.
fn in_degree_span(p: &Polynomial, gens: &[Polynomial], n: usize) -> bool {
    let d = p.total_degree();
    let mut vecs: Vec<Polynomial> = Vec::new();
    for g in gens {
        let dg = g.total_degree();
        if dg > d {
            continue;
        }
        for m in testutil::monomials_of_degree(n, d - dg) {
            vecs.push(g.mul_monomial(&m, &int(1)));
        }
    }
    let basis = testutil::monomials_of_degree(n, d);
    let row = |q: &Polynomial| -> Vec<Rational> { basis.iter().map(|m| q.coefficient(m)).collect() };
    let rank = |rows: Vec<Vec<Rational>>| -> usize {
        let mut rows = rows;
        let mut r = 0;
        for c in 0..basis.len() {
            let Some(pv) = (r..rows.len()).find(|&i| rows[i][c] != int(0)) else { continue };
            rows.swap(r, pv);
            let piv = rows[r][c].clone();
            for i in 0..rows.len() {
                if i != r && rows[i][c] != int(0) {
                    let f = &rows[i][c] / &piv;
                    for k in 0..basis.len() {
                        let v = &rows[r][k] * &f;
                        rows[i][k] -= v;
                    }
                }
            }
            r += 1;
        }
        r
    };
    let a: Vec<Vec<Rational>> = vecs.iter().map(row).collect();
    let mut b = a.clone();
    b.push(row(p));
    rank(a) == rank(b)
}

fn homogeneous_ideal(n: usize) -> impl Strategy<Value = Vec<Polynomial>> {
    let r = testutil::ring(n);
    prop::collection::vec(1u32..=3, 1..=3)
        .prop_flat_map(move |degs| degs.into_iter().map(|d| testutil::homogeneous(r.clone(), d)).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn membership_matches_linear_algebra(
        (n, gens, p, mults) in (1usize..=3).prop_flat_map(|n| {
            let r = testutil::ring(n);
            (
                Just(n),
                homogeneous_ideal(n),
                (0u32..=4).prop_flat_map(move |d| testutil::homogeneous(r.clone(), d)),
                prop::bool::ANY,
            )
        })
    ) {
        // half the cases use a guaranteed member of matching degree
        let p = if mults {
            let m = testutil::monomials_of_degree(n, 1);
            &gens[0].mul_monomial(&m[0], &int(2)) - &gens[0].mul_monomial(&m[n - 1], &int(1))
        } else {
            p
        };
        let order = MonomialOrder::degrevlex(n);
        let gb = buchberger(&gens, &order, false);
        let expected = in_degree_span(&p, &gens, n);
        prop_assert_eq!(gb.contains(&p), expected);
        let cof = membership_with_cofactors(&p, &gens, &order);
        prop_assert_eq!(cof.is_some(), expected);
    }

    #[test]
    fn s_polynomials_reduce_to_zero(gens in homogeneous_ideal(3), lex in prop::bool::ANY) {
        let order = if lex { MonomialOrder::lex(3) } else { MonomialOrder::degrevlex(3) };
        let gb = buchberger(&gens, &order, true);
        assert_groebner(&gb);
        assert_cofactors(&gb, &gens);
    }

    #[test]
    fn normal_form_ignores_ideal_multiples(
        gens in homogeneous_ideal(2),
        p in testutil::polynomial(testutil::ring(2), 4, 5),
        q in testutil::polynomial(testutil::ring(2), 2, 3),
        k in 0usize..3,
    ) {
        let gb = buchberger(&gens, &MonomialOrder::degrevlex(2), false);
        prop_assume!(!gb.is_empty());
        let g = &gb.generators()[k % gb.len()];
        prop_assert_eq!(gb.normal_form(&(&p + &(&q * g))), gb.normal_form(&p));
    }

    #[test]
    fn unit_verdict_is_order_independent(
        gens in prop::collection::vec(testutil::polynomial(testutil::ring(2), 2, 3), 1..=3)
    ) {
        let a = buchberger(&gens, &MonomialOrder::lex(2), false).is_unit();
        let b = buchberger(&gens, &MonomialOrder::degrevlex(2), false).is_unit();
        prop_assert_eq!(a, b);
    }
}
