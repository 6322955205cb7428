//! Shared proptest strategies.

use std::sync::Arc;

use proptest::prelude::*;

use crate::ring::{GradedRing, Monomial, Polynomial};
use crate::scalar::{rat, Rational};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    ((1i64..=5), prop::bool::ANY, 1i64..=3).prop_map(|(n, s, d)| rat(if s { n } else { -n }, d))
}

/// Ring `x0, …, x{n-1}` with unit weights.
pub fn ring(n: usize) -> Arc<GradedRing> {
    GradedRing::geometric((0..n).map(|i| (format!("x{i}"), rat(1, 1)))).unwrap()
}

pub fn monomial(n: usize, max_deg: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max_deg, n).prop_filter("degree bound", move |e| e.iter().sum::<u32>() <= max_deg).prop_map(Monomial::new)
}

pub fn polynomial(ring: Arc<GradedRing>, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let n = ring.nvars();
    prop::collection::vec((monomial(n, max_deg), small_rational()), 0..=max_terms).prop_map(move |t| Polynomial::from_terms(&ring, t))
}

/// All monomials of total degree exactly `d` in `n` variables.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn go(n: usize, k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if k == n - 1 {
            cur[k] = left;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[k] = e;
            go(n, k + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    go(n, 0, d, &mut vec![0; n], &mut out);
    out
}

/// Homogeneous polynomial of degree `d` with at least one nonzero term.
pub fn homogeneous(ring: Arc<GradedRing>, d: u32) -> impl Strategy<Value = Polynomial> {
    let ms = monomials_of_degree(ring.nvars(), d);
    let len = ms.len();
    prop::collection::vec(small_rational(), len)
        .prop_map(move |cs| Polynomial::from_terms(&ring, ms.iter().cloned().zip(cs).collect::<Vec<_>>()))
        .prop_filter("nonzero", |p| !p.is_zero())
}
