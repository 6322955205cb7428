use num_traits::{Signed, Zero};

use super::{GradedRing, Monomial};
use crate::scalar::Rational;

/// All monomials in the geometric variables of `ring` with grading exactly
/// `q`, in lexicographically descending exponent order.
pub fn monomials_of_grading(ring: &GradedRing, q: &Rational) -> Vec<Monomial> {
    monomials_of_grading_in(ring, &ring.geometric_indices(), q)
}

/// As [`monomials_of_grading`], restricted to the listed variables.
pub fn monomials_of_grading_in(ring: &GradedRing, vars: &[usize], q: &Rational) -> Vec<Monomial> {
    let mut out = Vec::new();
    if q.is_negative() {
        return out;
    }
    let mut current = vec![0u32; ring.nvars()];
    recurse(ring, vars, q.clone(), &mut current, &mut out);
    out
}

fn recurse(ring: &GradedRing, vars: &[usize], remaining: Rational, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    let Some((&i, rest)) = vars.split_first() else {
        if remaining.is_zero() {
            out.push(Monomial::new(current.clone()));
        }
        return;
    };
    let w = ring.weight(i);
    let max = (&remaining / w).floor().to_integer();
    let max: u32 = max.try_into().unwrap_or(0);
    for e in (0..=max).rev() {
        current[i] = e;
        let left = &remaining - w * Rational::from_integer(e.into());
        recurse(ring, rest, left, current, out);
    }
    current[i] = 0;
}
