use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::monomial::{degrevlex_cmp, Monomial};
use super::GradedRing;
use crate::scalar::{Field, Rational};

/// Sparse polynomial in canonical form: no zero coefficients, terms sorted
/// in descending degrevlex order of the ring's declared variable order.
#[derive(Clone)]
pub struct Polynomial<C = Rational> {
    ring: Arc<GradedRing>,
    terms: Vec<(Monomial, C)>,
}

impl<C: Field> PartialEq for Polynomial<C> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

pub(crate) fn same_ring(a: &Arc<GradedRing>, b: &Arc<GradedRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<C: Field> Polynomial<C> {
    pub fn zero(ring: &Arc<GradedRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<GradedRing>) -> Self {
        Self::constant(ring, C::one())
    }

    pub fn constant(ring: &Arc<GradedRing>, c: C) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn var(ring: &Arc<GradedRing>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i, 1), C::one())
    }

    pub fn monomial(ring: &Arc<GradedRing>, m: Monomial, c: C) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial length does not match ring");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    /// Canonicalizes arbitrary terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms(ring: &Arc<GradedRing>, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial length does not match ring");
            match acc.get_mut(&m) {
                Some(v) => *v = v.clone() + c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<GradedRing>, acc: HashMap<Monomial, C>) -> Self {
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| degrevlex_cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant term, or zero.
    pub fn constant_term(&self) -> C {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.binary_search_by(|(t, _)| degrevlex_cmp(m, t)).map(|i| self.terms[i].1.clone()).unwrap_or_else(|_| C::zero())
    }

    /// Leading term in the canonical (degrevlex) order.
    pub fn leading_term(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(i)).max().unwrap_or(0)
    }

    /// Variables that occur with a positive exponent.
    pub fn support(&self) -> Vec<usize> {
        let n = self.ring.nvars();
        let mut seen = vec![false; n];
        for (m, _) in &self.terms {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        (0..n).filter(|&i| seen[i]).collect()
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(i) > 0)
    }

    pub fn has_parameters(&self) -> bool {
        self.support().into_iter().any(|i| self.ring.is_parameter(i))
    }

    /// Common grading of all terms, or `None` if the terms disagree or the
    /// polynomial is zero.
    pub fn homogeneous_grading(&self) -> Option<Rational> {
        let mut it = self.terms.iter().map(|(m, _)| self.ring.grading(m));
        let first = it.next()?;
        it.all(|g| g == first).then_some(first)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(t, a)| (t.mul(m), a.clone() * c)).collect();
        // degrevlex is multiplicative, so the order is preserved
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Monic rescaling (leading coefficient one in the canonical order).
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inverse()),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.exponents_mut()[i] = e - 1;
            terms.push((d, c.clone() * &C::from_i64(e as i64)));
        }
        Self::from_terms(&self.ring, terms)
    }

    /// Replaces variable `i` by `value`.
    pub fn substitute(&self, i: usize, value: &Polynomial<C>) -> Self {
        assert!(same_ring(&self.ring, &value.ring));
        if !self.contains_var(i) {
            return self.clone();
        }
        let mut powers: Vec<Polynomial<C>> = vec![Self::one(&self.ring)];
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(i) as usize;
            if e == 0 {
                add_into(&mut acc, m.clone(), c.clone());
                continue;
            }
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.exponents_mut()[i] = 0;
            for (pm, pc) in &powers[e].terms {
                add_into(&mut acc, pm.mul(&rest), pc.clone() * c);
            }
        }
        Self::from_map(&self.ring, acc)
    }

    /// Replaces several variables by constants.
    pub fn evaluate_partial(&self, values: &[(usize, C)]) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m = m.clone();
            let mut c = c.clone();
            for (i, v) in values {
                let e = m.exponent(*i);
                if e > 0 {
                    for _ in 0..e {
                        c = c * v;
                    }
                    m.exponents_mut()[*i] = 0;
                }
            }
            (m, c)
        });
        Self::from_terms(&self.ring, terms.collect::<Vec<_>>())
    }

    /// Moves the polynomial to `target`, matching variables by name.
    /// Returns `None` if a variable in the support is missing from `target`.
    pub fn embed(&self, target: &Arc<GradedRing>) -> Option<Self> {
        if same_ring(&self.ring, target) {
            return Some(Polynomial { ring: target.clone(), terms: self.terms.clone() });
        }
        let map: Vec<Option<usize>> = (0..self.ring.nvars()).map(|i| target.index_of(self.ring.name(i))).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0; target.nvars()];
            for (i, &k) in m.exponents().iter().enumerate() {
                if k > 0 {
                    e[map[i]?] = k;
                }
            }
            terms.push((Monomial::new(e), c.clone()));
        }
        Some(Self::from_terms(target, terms))
    }

    /// Groups terms by their exponents on the variables selected by `mask`.
    /// Each group's coefficient keeps the remaining variables.
    pub fn split(&self, mask: &[bool]) -> Vec<(Monomial, Polynomial<C>)> {
        let mut groups: HashMap<Monomial, Vec<(Monomial, C)>> = HashMap::new();
        let mut order: Vec<Monomial> = Vec::new();
        for (m, c) in &self.terms {
            let (inside, outside) = m.select(mask);
            let entry = groups.entry(inside.clone()).or_insert_with(|| {
                order.push(inside);
                Vec::new()
            });
            entry.push((outside, c.clone()));
        }
        order
            .into_iter()
            .map(|k| {
                let ts = groups.remove(&k).unwrap();
                (k, Polynomial::from_terms(&self.ring, ts))
            })
            .collect()
    }

    pub fn map_coefficients<D: Field>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect::<Vec<_>>())
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial<C>) -> Option<Polynomial<C>> {
        assert!(same_ring(&self.ring, &divisor.ring));
        let (lm, lc) = divisor.leading_term()?.clone();
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, C)> = Vec::new();
        while let Some((m, c)) = rem.leading_term().cloned() {
            let q = lm.divide_into(&m)?;
            let qc = c / &lc;
            rem = &rem - &divisor.mul_monomial(&q, &qc);
            quot.push((q, qc));
        }
        Some(Polynomial::from_terms(&self.ring, quot))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        assert!(same_ring(&self.ring, &other.ring), "polynomials live in different rings");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match degrevlex_cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1.clone() - &b[j].1 } else { a[i].1.clone() + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -t.1.clone() } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    fn product(&self, other: &Self) -> Self {
        assert!(same_ring(&self.ring, &other.ring), "polynomials live in different rings");
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.len() * other.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                add_into(&mut acc, m1.mul(m2), c1.clone() * c2);
            }
        }
        Self::from_map(&self.ring, acc)
    }
}

fn add_into<C: Field>(acc: &mut HashMap<Monomial, C>, m: Monomial, c: C) {
    match acc.get_mut(&m) {
        Some(v) => *v = v.clone() + c,
        None => {
            acc.insert(m, c);
        }
    }
}

impl<C: Field> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Polynomial<C> {
        self.merge(rhs, false)
    }
}

impl<C: Field> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        self.merge(rhs, true)
    }
}

impl<C: Field> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        self.product(rhs)
    }
}

impl<C: Field> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<C: Field> $tr for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $f(self, rhs: Self) -> Polynomial<C> {
                (&self).$f(&rhs)
            }
        }
        impl<C: Field> $tr<&Polynomial<C>> for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $f(self, rhs: &Polynomial<C>) -> Polynomial<C> {
                (&self).$f(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Field> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

impl<C: Field> fmt::Display for Polynomial<C> {
    /// Prints in the input grammar: `-2/3*x^2*y + z - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if mag != "1" || m.is_one() {
                factors.push(mag);
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.ring.name(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<C: Field> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}
