//! Multivariate residue symbols `res(g dx_1∧…∧dx_q / f_1, …, f_q)`.
//!
//! Only three facts are used: the residue vanishes on the ideal `(f)`;
//! against pure powers it is the coefficient of `x^{d−1}`; and
//! `res(g det M / M f) = res(g / f)`, the transformation rule. Variables other than the residue
//! variables (parameters, the other side of a tensor ring) ride along as
//! coefficients.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{GroebnerError, ResidueError};
use crate::groebner::{buchberger, pure_power_certificate, standard_monomials, GroebnerBasis, MonomialOrder};
use crate::matrix::PolyMatrix;
use crate::ring::{GradedRing, Monomial, Polynomial};
use crate::scalar::{Field, Rational};

/// Numerator `g` over denominators `f_1, …, f_q` in the residue variables
/// `vars`; `f_i` pairs with `dx_{vars[i]}`.
#[derive(Debug, Clone)]
pub struct ResidueProblem<C: Field = Rational> {
    pub numerator: Polynomial<C>,
    pub denominators: Vec<Polynomial<C>>,
    pub vars: Vec<usize>,
}

impl<C: Field> ResidueProblem<C> {
    /// Residue over all geometric variables of the numerator's ring.
    pub fn new(numerator: Polynomial<C>, denominators: Vec<Polynomial<C>>) -> Self {
        let vars = numerator.ring().geometric_indices();
        ResidueProblem { numerator, denominators, vars }
    }

    pub fn over(numerator: Polynomial<C>, denominators: Vec<Polynomial<C>>, vars: Vec<usize>) -> Self {
        ResidueProblem { numerator, denominators, vars }
    }
}

pub fn residue_symbol<C: Field>(prob: &ResidueProblem<C>) -> Result<Polynomial<C>, ResidueError> {
    let ctx = ResidueContext::new(prob.numerator.ring(), &prob.denominators, &prob.vars)?;
    Ok(ctx.residue(&prob.numerator))
}

/// Checks the transformation rule for one matrix: `res(g det M / M f) == res(g / f)`.
pub fn check_transformation_rule<C: Field>(prob: &ResidueProblem<C>, m: &PolyMatrix<C>) -> Result<bool, ResidueError> {
    let q = prob.denominators.len();
    if m.rows() != q || m.cols() != q {
        return Err(ResidueError::Shape);
    }
    let ring = prob.numerator.ring();
    let f = PolyMatrix::from_rows(ring, prob.denominators.iter().map(|p| vec![p.clone()]).collect());
    let mf = m.mul(&f);
    let new_dens: Vec<Polynomial<C>> = (0..q).map(|i| mf.get(i, 0).clone()).collect();
    let lhs = residue_symbol(&ResidueProblem::over(&prob.numerator * &m.determinant(), new_dens, prob.vars.clone()))?;
    Ok(lhs == residue_symbol(prob)?)
}

/// Precomputed data for one denominator list: a Gröbner basis of `(f)`, a
/// certificate matrix `M` with `M f = (x_1^{d_1}, …, x_q^{d_q})`, and the
/// residue of every standard monomial.
pub struct ResidueContext<C: Field = Rational> {
    ring: Arc<GradedRing>,
    vars: Vec<usize>,
    mask: Vec<bool>,
    sub: Arc<GradedRing>,
    gb: GroebnerBasis<C>,
    matrix: PolyMatrix<C>,
    exponents: Vec<u32>,
    det: Polynomial<C>,
    standard: HashMap<Monomial, C>,
    cache: Mutex<HashMap<Monomial, Polynomial<C>>>,
}

impl<C: Field> ResidueContext<C> {
    /// Certificates come from the lex-with-`x_i`-last construction.
    pub fn new(ring: &Arc<GradedRing>, denominators: &[Polynomial<C>], vars: &[usize]) -> Result<Self, ResidueError> {
        let (sub, dens) = restrict(ring, denominators, vars)?;
        let mut rows = Vec::with_capacity(vars.len());
        let mut exponents = Vec::with_capacity(vars.len());
        for i in 0..vars.len() {
            let c = pure_power_certificate(&dens, i)?;
            rows.push(c.cofactors);
            exponents.push(c.exponent);
        }
        let matrix = PolyMatrix::from_rows(&sub, rows);
        Self::build(ring, vars, sub, dens, matrix, exponents)
    }

    /// Uses a caller-supplied certificate matrix; fails with
    /// [`ResidueError::Shape`] unless `M f = (x_i^{d_i})_i` holds exactly.
    pub fn with_matrix(
        ring: &Arc<GradedRing>,
        denominators: &[Polynomial<C>],
        vars: &[usize],
        matrix: &PolyMatrix<C>,
        exponents: &[u32],
    ) -> Result<Self, ResidueError> {
        let (sub, dens) = restrict(ring, denominators, vars)?;
        let q = vars.len();
        if matrix.rows() != q || matrix.cols() != q || exponents.len() != q {
            return Err(ResidueError::Shape);
        }
        let m = matrix.map(|p| to_sub(p, vars, &sub));
        for i in 0..q {
            let lhs = (0..q).fold(Polynomial::zero(&sub), |acc, j| &acc + &(m.get(i, j) * &dens[j]));
            if lhs != Polynomial::monomial(&sub, Monomial::var(q, i, exponents[i]), C::one()) {
                return Err(ResidueError::Shape);
            }
        }
        Self::build(ring, vars, sub, dens, m, exponents.to_vec())
    }

    fn build(
        ring: &Arc<GradedRing>,
        vars: &[usize],
        sub: Arc<GradedRing>,
        dens: Vec<Polynomial<C>>,
        matrix: PolyMatrix<C>,
        exponents: Vec<u32>,
    ) -> Result<Self, ResidueError> {
        let q = vars.len();
        let gb = buchberger(&dens, &MonomialOrder::degrevlex(q), false);
        let all: Vec<usize> = (0..q).collect();
        let basis = standard_monomials(&gb, &all).ok_or(GroebnerError::InfiniteQuotient(0))?;
        let det = matrix.determinant();
        let socle = Monomial::new(exponents.iter().map(|d| d - 1).collect());
        let standard = basis
            .into_iter()
            .map(|s| {
                let r = coefficient_of_quotient(&det, &s, &socle);
                (s, r)
            })
            .collect();
        let mut mask = vec![false; ring.nvars()];
        for &v in vars {
            mask[v] = true;
        }
        Ok(ResidueContext {
            ring: ring.clone(),
            vars: vars.to_vec(),
            mask,
            sub,
            gb,
            matrix,
            exponents,
            det,
            standard,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis<C> {
        &self.gb
    }

    /// The certificate matrix over the residue variables.
    pub fn certificate_matrix(&self) -> &PolyMatrix<C> {
        &self.matrix
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn determinant(&self) -> &Polynomial<C> {
        &self.det
    }

    /// `dim_k k[x]/(f)`.
    pub fn quotient_dimension(&self) -> usize {
        self.standard.len()
    }

    /// Normal form modulo `(f)`, taken coefficient-wise in the residue
    /// variables. Agrees with `g` modulo `(f)`, hence has the same residue.
    pub fn reduce(&self, g: &Polynomial<C>) -> Polynomial<C> {
        let mut acc: Vec<(Monomial, C)> = Vec::new();
        for (b, coef) in g.split(&self.mask) {
            let nf = self.reduce_monomial(&b);
            for (s, c) in nf.terms() {
                for (m, a) in coef.terms() {
                    acc.push((m.mul(s), a.clone() * c));
                }
            }
        }
        Polynomial::from_terms(&self.ring, acc)
    }

    /// Normal form of a residue-variable monomial, lifted to the full ring.
    fn reduce_monomial(&self, b: &Monomial) -> Polynomial<C> {
        if let Some(p) = self.cache.lock().unwrap().get(b) {
            return p.clone();
        }
        let local = Polynomial::monomial(&self.sub, self.local(b), C::one());
        let nf = self.lift(&self.gb.normal_form(&local));
        self.cache.lock().unwrap().insert(b.clone(), nf.clone());
        nf
    }

    /// `res(g / f)`: reduce modulo `(f)`, then read off the residues of
    /// standard monomials, each computed through `det M`.
    pub fn residue(&self, g: &Polynomial<C>) -> Polynomial<C> {
        let mut acc: Vec<(Monomial, C)> = Vec::new();
        for (b, coef) in g.split(&self.mask) {
            let nf = self.reduce_monomial(&b);
            let mut r = C::zero();
            for (s, c) in nf.terms() {
                if let Some(v) = self.standard.get(&self.local(s)) {
                    r = r + &(c.clone() * v);
                }
            }
            if !r.is_zero() {
                acc.extend(coef.terms().iter().map(|(m, a)| (m.clone(), a.clone() * &r)));
            }
        }
        Polynomial::from_terms(&self.ring, acc)
    }

    /// `res(g / f)` as the `x^{d−1}` coefficient of `g · det M`, with no
    /// reduction. Slower; kept as an independent route.
    pub fn residue_direct(&self, g: &Polynomial<C>) -> Polynomial<C> {
        let socle = Monomial::new(self.exponents.iter().map(|d| d - 1).collect());
        let det = self.lift(&self.det);
        let prod = g * &det;
        let mut acc = Vec::new();
        for (b, coef) in prod.split(&self.mask) {
            if self.local(&b) == socle {
                acc.extend(coef.terms().iter().cloned());
            }
        }
        Polynomial::from_terms(&self.ring, acc)
    }

    fn local(&self, m: &Monomial) -> Monomial {
        Monomial::new(self.vars.iter().map(|&v| m.exponent(v)).collect())
    }

    fn lift(&self, p: &Polynomial<C>) -> Polynomial<C> {
        let n = self.ring.nvars();
        let terms = p.terms().iter().map(|(m, c)| {
            let mut e = vec![0; n];
            for (k, &v) in self.vars.iter().enumerate() {
                e[v] = m.exponent(k);
            }
            (Monomial::new(e), c.clone())
        });
        Polynomial::from_terms(&self.ring, terms.collect::<Vec<_>>())
    }
}

/// Coefficient of `socle` in `s · det`.
fn coefficient_of_quotient<C: Field>(det: &Polynomial<C>, s: &Monomial, socle: &Monomial) -> C {
    match s.divide_into(socle) {
        Some(rest) => det.coefficient(&rest),
        None => C::zero(),
    }
}

fn to_sub<C: Field>(p: &Polynomial<C>, vars: &[usize], sub: &Arc<GradedRing>) -> Polynomial<C> {
    let terms = p.terms().iter().map(|(m, c)| (Monomial::new(vars.iter().map(|&v| m.exponent(v)).collect()), c.clone()));
    Polynomial::from_terms(sub, terms.collect::<Vec<_>>())
}

fn restrict<C: Field>(
    ring: &Arc<GradedRing>,
    denominators: &[Polynomial<C>],
    vars: &[usize],
) -> Result<(Arc<GradedRing>, Vec<Polynomial<C>>), ResidueError> {
    if denominators.len() != vars.len() {
        return Err(ResidueError::DenominatorCount { expected: vars.len(), got: denominators.len() });
    }
    if vars.is_empty() {
        return Err(GroebnerError::NoGenerators.into());
    }
    let mut inside = vec![false; ring.nvars()];
    for &v in vars {
        inside[v] = true;
    }
    for f in denominators {
        if f.support().into_iter().any(|i| !inside[i]) {
            return Err(ResidueError::ForeignDenominator);
        }
    }
    let sub = ring.restrict(vars);
    let dens = denominators.iter().map(|f| to_sub(f, vars, &sub)).collect();
    Ok((sub, dens))
}

#[cfg(test)]
mod tests;
