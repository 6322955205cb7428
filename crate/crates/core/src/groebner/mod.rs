//! Gröbner bases and the ideal-theoretic questions answered with them:
//! membership with explicit cofactors, finite-dimensionality of quotients,
//! pure-power certificates and the unit-ideal test.

mod buchberger;
mod modular;
mod order;

pub use buchberger::{buchberger, buchberger_with_limits, GroebnerBasis, LimitExceeded, LimitKind, Limits, RunStats};
pub use modular::{groebner_mod_prime, is_groebner_basis_of, modular_groebner, ModularOptions, ModularOutcome, PrimeImage};
pub use order::MonomialOrder;

#[allow(unused_imports)]
pub(crate) use buchberger::divide;

use crate::error::GroebnerError;
use crate::ring::{Monomial, Polynomial};
use crate::scalar::Field;

/// Dimension of `k[x]/I` as a vector space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientDimension {
    Finite(usize),
    Infinite,
}

/// `Σ_j cofactors[j] · gens[j] = x_var^exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct PurePowerCertificate<C: Field = crate::scalar::Rational> {
    pub var: usize,
    pub exponent: u32,
    pub cofactors: Vec<Polynomial<C>>,
}

impl<C: Field> PurePowerCertificate<C> {
    /// Re-checks the defining identity by multiplication.
    pub fn verify(&self, gens: &[Polynomial<C>]) -> bool {
        let Some(first) = gens.first() else { return false };
        let ring = first.ring();
        let lhs = self.cofactors.iter().zip(gens).fold(Polynomial::zero(ring), |acc, (m, f)| &acc + &(m * f));
        lhs == Polynomial::monomial(ring, Monomial::var(ring.nvars(), self.var, self.exponent), C::one())
    }
}

/// Default order for consistency questions: degrevlex in declared order.
pub fn default_order(nvars: usize) -> MonomialOrder {
    MonomialOrder::degrevlex(nvars)
}

pub fn normal_form<C: Field>(p: &Polynomial<C>, gb: &GroebnerBasis<C>) -> Polynomial<C> {
    gb.normal_form(p)
}

/// Expresses `p` in the generators, or `None` if `p` is not in the ideal.
/// The returned identity `Σ β_j gens_j = p` is verified before returning.
pub fn membership_with_cofactors<C: Field>(p: &Polynomial<C>, gens: &[Polynomial<C>], order: &MonomialOrder) -> Option<Vec<Polynomial<C>>> {
    let ring = p.ring();
    if gens.is_empty() {
        return p.is_zero().then(Vec::new);
    }
    let gb = buchberger(gens, order, true);
    let (rem, quotients) = gb.normal_form_with_quotients(p);
    if !rem.is_zero() {
        return None;
    }
    let cof = gb.cofactors().expect("tracked");
    let mut beta = vec![Polynomial::zero(ring); gens.len()];
    for (q, row) in quotients.iter().zip(cof) {
        if q.is_zero() {
            continue;
        }
        for (b, c) in beta.iter_mut().zip(row) {
            *b = &*b + &(q * c);
        }
    }
    let check = beta.iter().zip(gens).fold(Polynomial::zero(ring), |acc, (b, g)| &acc + &(b * g));
    assert_eq!(&check, p, "cofactor identity failed");
    Some(beta)
}

/// Monomials not divisible by any leading monomial of `gb`, provided the
/// quotient is finite-dimensional.
pub fn standard_monomials<C: Field>(gb: &GroebnerBasis<C>, vars: &[usize]) -> Option<Vec<Monomial>> {
    let n = gb.ring().nvars();
    if gb.is_unit() {
        return Some(Vec::new());
    }
    let lms = gb.leading_monomials();
    let mut bounds = vec![0u32; n];
    for &v in vars {
        bounds[v] = lms
            .iter()
            .filter_map(|m| match m.pure_power_of() {
                Some((i, e)) if i == v => Some(e),
                _ => None,
            })
            .min()?;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    enumerate_box(vars, &bounds, 0, &mut cur, &mut |m| {
        if !lms.iter().any(|l| l.divides(m)) {
            out.push(m.clone());
        }
    });
    Some(out)
}

fn enumerate_box(vars: &[usize], bounds: &[u32], k: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&Monomial)) {
    if k == vars.len() {
        f(&Monomial::new(cur.clone()));
        return;
    }
    let v = vars[k];
    for e in 0..bounds[v] {
        cur[v] = e;
        enumerate_box(vars, bounds, k + 1, cur, f);
    }
    cur[v] = 0;
}

/// Staircase criterion: finite iff every variable has a pure power among the
/// leading monomials of a Gröbner basis.
pub fn is_quotient_finite_dimensional<C: Field>(gens: &[Polynomial<C>]) -> QuotientDimension {
    let Some(first) = gens.iter().find(|g| !g.is_zero()) else {
        return QuotientDimension::Infinite;
    };
    let n = first.ring().nvars();
    let gb = buchberger(gens, &default_order(n), false);
    let vars: Vec<usize> = (0..n).collect();
    match standard_monomials(&gb, &vars) {
        Some(s) => QuotientDimension::Finite(s.len()),
        None => QuotientDimension::Infinite,
    }
}

/// Finds `x_var^d ∈ (gens)` with `d` minimal, together with cofactors.
///
/// Uses a lex Gröbner basis in which `x_var` is the smallest variable: the
/// basis element whose leading monomial is a power of `x_var` involves only
/// `x_var`, and for an ideal supported at the origin it is that power itself.
pub fn pure_power_certificate<C: Field>(gens: &[Polynomial<C>], var: usize) -> Result<PurePowerCertificate<C>, GroebnerError> {
    let first = gens.first().ok_or(GroebnerError::NoGenerators)?;
    let n = first.ring().nvars();
    let order = MonomialOrder::lex_with_last(n, var);
    let gb = buchberger(gens, &order, true);
    let lms = gb.leading_monomials();
    let k = lms
        .iter()
        .position(|m| matches!(m.pure_power_of(), Some((i, _)) if i == var) || m.is_one())
        .ok_or(GroebnerError::InfiniteQuotient(var))?;
    let g = &gb.generators()[k];
    if g.len() != 1 {
        return Err(GroebnerError::NotLocal(var));
    }
    let (m, c) = g.terms()[0].clone();
    let exponent = m.exponent(var);
    let inv = c.inverse();
    let cofactors = gb.cofactors().unwrap()[k].iter().map(|p| p.scale(&inv)).collect();
    Ok(PurePowerCertificate { var, exponent, cofactors })
}

/// True iff `1 ∈ (gens)`, i.e. the system has no common zero over the
/// algebraic closure.
pub fn is_unit_ideal<C: Field>(gens: &[Polynomial<C>]) -> bool {
    let Some(first) = gens.first() else { return false };
    buchberger(gens, &default_order(first.ring().nvars()), false).is_unit()
}

#[cfg(test)]
mod tests;
