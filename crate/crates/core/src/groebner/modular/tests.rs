use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::groebner::buchberger;
use crate::ring::parse_polynomial;
use crate::scalar::{int, rat};
use crate::testutil;

fn ring(names: &[&str]) -> Arc<GradedRing> {
    GradedRing::geometric(names.iter().map(|n| (*n, int(1)))).unwrap()
}

fn polys(r: &Arc<GradedRing>, srcs: &[&str]) -> Vec<Polynomial<Rational>> {
    srcs.iter().map(|s| parse_polynomial(s, r).unwrap()).collect()
}

fn basis(out: ModularOutcome) -> GroebnerBasis<Rational> {
    match out {
        ModularOutcome::Basis(b) => b,
        other => panic!("expected a basis, got {other:?}"),
    }
}

#[test]
fn first_primes_below_two_to_the_31() {
    assert_eq!(large_primes().take(3).collect::<Vec<_>>(), [2147483647, 2147483629, 2147483587]);
}

#[test]
fn reconstruction_inverts_reduction() {
    let m = BigInt::from(2147483647u64) * BigInt::from(2147483629u64);
    for (n, d) in [(1, 3), (-22, 7), (0, 1), (123456, 654321), (-1, 1)] {
        let q = rat(n, d);
        // n · d⁻¹ mod m
        let dinv = BigInt::from(d).modinv(&m).unwrap();
        let a = (BigInt::from(n) * dinv).mod_floor(&m);
        assert_eq!(rational_reconstruction(&a, &m), Some(q));
    }
    // too large to be determined by a small modulus
    assert_eq!(rational_reconstruction(&BigInt::from(5), &BigInt::from(7)), None);
}

#[test]
fn zp_arithmetic_matches_the_integers_mod_p() {
    with_modulus(101, || {
        let a = Zp::from_rational(&rat(3, 4)).unwrap();
        // 4⁻¹ = 76 mod 101
        assert_eq!(a.value(), 3 * 76 % 101);
        assert_eq!((a * Zp::new(4)).value(), 3);
        assert_eq!((Zp::new(3) - Zp::new(5)).value(), 99);
        assert_eq!((-Zp::new(0)).value(), 0);
        assert!(Zp::from_rational(&rat(1, 202)).is_none());
        assert_eq!(Zp::from_i64(-1).value(), 100);
    });
}

#[test]
fn known_bases_are_recovered() {
    let r = ring(&["x", "y", "z"]);
    let order = MonomialOrder::degrevlex(3);
    let gens = polys(&r, &["x^2 + y*z - 2/3", "x*y - z^2", "y^2 - 5/7*x + z"]);
    let got = basis(modular_groebner(&gens, &order, &Limits::default(), &ModularOptions::default()).unwrap());
    let want = buchberger(&gens, &order, false);
    assert_eq!(got.generators(), want.generators());
    assert_eq!(got.leading_monomials(), want.leading_monomials());
    for g in &gens {
        assert!(got.contains(g));
    }
}

#[test]
fn unit_ideals_vote_unit() {
    let r = ring(&["a", "b"]);
    let gens = polys(&r, &["a^2", "a*b - 1"]);
    let out = modular_groebner(&gens, &MonomialOrder::degrevlex(2), &Limits::default(), &ModularOptions::default()).unwrap();
    assert!(matches!(out, ModularOutcome::UnitModPrimes(2)));
}

#[test]
fn a_prime_in_a_denominator_is_skipped() {
    let r = ring(&["x"]);
    let gens = polys(&r, &["x - 1/2147483647"]);
    let got = basis(modular_groebner(&gens, &MonomialOrder::degrevlex(1), &Limits::default(), &ModularOptions::default()).unwrap());
    assert_eq!(got.generators(), &gens[..]);
}

#[test]
fn exact_check_rejects_non_bases() {
    let r = ring(&["x", "y"]);
    let order = MonomialOrder::degrevlex(2);
    let gens = polys(&r, &["x*y - 1", "x^2 - y"]);
    // generators themselves: not a basis (the S-pair gives y^2 - x)
    assert_eq!(is_groebner_basis_of(&gens, &gens, &order, None), Some(false));
    let gb = buchberger(&gens, &order, false);
    assert_eq!(is_groebner_basis_of(gb.generators(), &gens, &order, None), Some(true));
    // a basis of a smaller ideal does not contain the input
    let small = polys(&r, &["x^2 - y"]);
    assert_eq!(is_groebner_basis_of(&small, &gens, &order, None), Some(false));
    // a basis of a larger ideal does
    let big = polys(&r, &["x", "y"]);
    assert_eq!(is_groebner_basis_of(&big, &polys(&r, &["x*y", "x^2 - y"]), &order, None), Some(true));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn modular_agrees_with_exact(gens in prop::collection::vec(testutil::polynomial(testutil::ring(3), 3, 4), 1..4)) {
        let order = MonomialOrder::degrevlex(3);
        let exact = buchberger(&gens, &order, false);
        let out = modular_groebner(&gens, &order, &Limits::default(), &ModularOptions::default()).unwrap();
        match out {
            ModularOutcome::Basis(b) => {
                prop_assert!(!exact.is_unit());
                prop_assert_eq!(b.generators(), exact.generators());
            }
            ModularOutcome::UnitModPrimes(_) => prop_assert!(exact.is_unit()),
        }
    }

    #[test]
    fn reconstruction_round_trips(n in -10_000i64..10_000, d in 1i64..10_000) {
        let m = BigInt::from(2147483647u64) * BigInt::from(2147483629u64);
        let dinv = BigInt::from(d).modinv(&m).unwrap();
        let a = (BigInt::from(n) * dinv).mod_floor(&m);
        prop_assert_eq!(rational_reconstruction(&a, &m), Some(rat(n, d)));
    }
}
