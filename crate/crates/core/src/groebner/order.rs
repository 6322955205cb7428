use std::cmp::Ordering;

use crate::ring::Monomial;
use crate::scalar::Rational;

/// A monomial order.
///
/// Permutations list variable indices from largest to smallest; only the
/// listed variables are compared, so a permutation must cover every variable
/// of the ring the order is used with.
#[derive(Debug, Clone, PartialEq)]
pub enum MonomialOrder {
    Lex(Vec<usize>),
    DegRevLex(Vec<usize>),
    /// Weighted degree first, ties broken by the inner order.
    Weighted {
        weights: Vec<Rational>,
        tiebreak: Box<MonomialOrder>,
    },
    /// Block order: compare on the first block, then on the second.
    Elimination {
        first: Vec<usize>,
        first_order: Box<MonomialOrder>,
        second_order: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    /// Lex with `x_0 > x_1 > … > x_{n-1}`.
    pub fn lex(n: usize) -> Self {
        MonomialOrder::Lex((0..n).collect())
    }

    pub fn degrevlex(n: usize) -> Self {
        MonomialOrder::DegRevLex((0..n).collect())
    }

    /// Lex order in which variable `last` is smaller than every other
    /// variable; the others keep their declared order.
    pub fn lex_with_last(n: usize, last: usize) -> Self {
        let mut perm: Vec<usize> = (0..n).filter(|&i| i != last).collect();
        perm.push(last);
        MonomialOrder::Lex(perm)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        match self {
            MonomialOrder::Lex(perm) => {
                for &i in perm {
                    match ea[i].cmp(&eb[i]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::DegRevLex(perm) => {
                let da: u64 = perm.iter().map(|&i| ea[i] as u64).sum();
                let db: u64 = perm.iter().map(|&i| eb[i] as u64).sum();
                match da.cmp(&db) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for &i in perm.iter().rev() {
                    match ea[i].cmp(&eb[i]) {
                        Ordering::Equal => {}
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Weighted { weights, tiebreak } => {
                let w = |e: &[u32]| -> Rational { weights.iter().zip(e).map(|(w, &k)| w * Rational::from_integer(k.into())).sum() };
                match w(ea).cmp(&w(eb)) {
                    Ordering::Equal => tiebreak.cmp(a, b),
                    o => o,
                }
            }
            MonomialOrder::Elimination { first, first_order, second_order } => {
                let n = ea.len();
                let mut mask = vec![false; n];
                for &i in first {
                    mask[i] = true;
                }
                let (a1, a2) = a.select(&mask);
                let (b1, b2) = b.select(&mask);
                match first_order.cmp(&a1, &b1) {
                    Ordering::Equal => second_order.cmp(&a2, &b2),
                    o => o,
                }
            }
        }
    }
}
