use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{GradedRing, Monomial, Polynomial, VariableSpec};
use crate::error::RingError;
use crate::groebner::{is_quotient_finite_dimensional, QuotientDimension};
use crate::matrix::solve_linear;
use crate::scalar::{int, Rational};

/// The common grading `d` of all terms of `p`, double-checked through the
/// Euler identity `Σ (|x_i|/d) x_i ∂_i p = p`.
pub fn quasi_homogeneous_degree(p: &Polynomial) -> Result<Rational, RingError> {
    if p.is_zero() {
        return Err(RingError::ZeroPolynomial);
    }
    if let Some(i) = p.support().into_iter().find(|&i| p.ring().is_parameter(i)) {
        return Err(RingError::ContainsParameter(p.ring().name(i).to_string()));
    }
    let d = p.homogeneous_grading().ok_or(RingError::NotQuasiHomogeneous)?;
    if d.is_zero() || euler_defect(p, &d) != Polynomial::zero(p.ring()) {
        return Err(RingError::NotQuasiHomogeneous);
    }
    Ok(d)
}

/// `Σ (|x_i|/d) x_i ∂_i p − p`; zero iff `p` is quasi-homogeneous of degree `d`.
pub fn euler_defect(p: &Polynomial, d: &Rational) -> Polynomial {
    let ring = p.ring();
    let mut acc = -p.clone();
    for i in ring.geometric_indices() {
        let c = ring.weight(i) / d;
        let term = p.derivative(i).mul_monomial(&Monomial::var(ring.nvars(), i, 1), &c);
        acc = &acc + &term;
    }
    acc
}

/// A validated potential: quasi-homogeneous of degree 2 with a nonzero,
/// finite-dimensional Jacobian algebra. Its ring has geometric variables only.
#[derive(Clone, PartialEq)]
pub struct Potential {
    poly: Polynomial,
    jacobian_dimension: usize,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Potential({} over {:?})", self.poly, self.poly.ring())
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

impl Potential {
    /// Validates `p` and rescales the weights so that the degree is 2.
    pub fn validate(p: &Polynomial) -> Result<Self, RingError> {
        let d = quasi_homogeneous_degree(p)?;
        let src = p.ring();
        let factor = int(2) / &d;
        let vars: Vec<VariableSpec> =
            src.geometric_indices().into_iter().map(|i| VariableSpec::geometric(src.name(i), src.weight(i) * &factor)).collect();
        let ring = GradedRing::new(vars)?;
        let poly = p.embed(&ring).expect("support is geometric");
        let jac: Vec<Polynomial> = (0..ring.nvars()).map(|i| poly.derivative(i)).collect();
        let dim = match is_quotient_finite_dimensional(&jac) {
            QuotientDimension::Infinite => return Err(RingError::InfiniteJacobian),
            QuotientDimension::Finite(0) => return Err(RingError::TrivialJacobian),
            QuotientDimension::Finite(n) => n,
        };
        Ok(Potential { poly, jacobian_dimension: dim })
    }

    /// Parses and validates in one step.
    pub fn parse(src: &str, ring: &Arc<GradedRing>) -> Result<Self, crate::error::Error> {
        let p = super::parse_polynomial(src, ring)?;
        Ok(Self::validate(&p)?)
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        self.poly.ring()
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// Always 2 after validation.
    pub fn degree(&self) -> Rational {
        int(2)
    }

    /// `dim_k Jac f`.
    pub fn jacobian_dimension(&self) -> usize {
        self.jacobian_dimension
    }

    /// `[∂_1 f, …, ∂_n f]` in ring variable order.
    pub fn jacobian_ideal(&self) -> Vec<Polynomial> {
        (0..self.ring().nvars()).map(|i| self.poly.derivative(i)).collect()
    }

    /// `Σ_i (1 − |x_i|)`.
    pub fn central_charge(&self) -> Rational {
        let r = self.ring();
        (0..r.nvars()).map(|i| Rational::one() - r.weight(i)).sum()
    }
}

/// Transpose of an invertible potential `Σ_i Π_j x_j^{A_ij}`: the potential
/// `Σ_i Π_j x_j^{A_ji}` on the same variable names, with weights solving
/// `Aᵀ q = 2`.
///
/// Row `i` of `A` is the monomial matched to variable `i`; the matching
/// maximizes the product of the diagonal exponents, which recovers the usual
/// Fermat/chain/loop labelling.
pub fn berglund_huebsch_transpose(p: &Potential) -> Result<Potential, RingError> {
    let ring = p.ring();
    let n = ring.nvars();
    let terms = p.poly().terms();
    if terms.len() != n {
        return Err(RingError::NotInvertible(format!("{} monomials in {} variables", terms.len(), n)));
    }
    if terms.iter().any(|(_, c)| !c.is_one()) {
        return Err(RingError::NotInvertible("coefficients must all be 1".into()));
    }
    let monos: Vec<&Monomial> = terms.iter().map(|(m, _)| m).collect();
    let perm = best_matching(&monos).ok_or_else(|| RingError::NotInvertible("no monomial matching".into()))?;
    // a[i][j]: exponent of x_j in the monomial matched to x_i
    let a: Vec<Vec<u32>> = (0..n).map(|i| monos[perm[i]].exponents().to_vec()).collect();
    let at: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| int(a[j][i].into())).collect()).collect();
    let q = solve_linear(&at, &vec![int(2); n]).ok_or(RingError::SingularExponentMatrix)?;
    if q.iter().any(|w| w <= &Rational::zero()) {
        return Err(RingError::NotInvertible("transposed weights are not positive".into()));
    }
    let new_ring = GradedRing::geometric((0..n).map(|i| (ring.name(i).to_string(), q[i].clone())))?;
    let poly = Polynomial::from_terms(
        &new_ring,
        (0..n).map(|i| (Monomial::new((0..n).map(|j| a[j][i]).collect()), Rational::one())).collect::<Vec<_>>(),
    );
    Potential::validate(&poly)
}

/// `perm[i]` = index of the monomial assigned to variable `i`.
fn best_matching(monos: &[&Monomial]) -> Option<Vec<usize>> {
    let n = monos.len();
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let score: u64 = (0..n).map(|i| monos[p[i]].exponent(i) as u64).product();
        if score > 0 && best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, p.to_vec()));
        }
    });
    best.map(|(_, p)| p)
}

fn permute(p: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}
