//! Gröbner bases over the rationals by computing modulo many primes,
//! lifting with the Chinese remainder theorem and rational reconstruction,
//! and checking the lift exactly.
//!
//! The exact check establishes that the lift `G` is a Gröbner basis and that
//! every generator reduces to zero modulo `G`, so the input ideal is contained
//! in the ideal of `G`. When the primes are lucky, which is the generic case,
//! the two ideals coincide; a consistency verdict never depends on that.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::buchberger::{buchberger_with_limits, sub_scaled, to_sorted, GroebnerBasis, LimitExceeded, LimitKind, Limits, RunStats, Terms};
use super::order::MonomialOrder;
use crate::ring::{GradedRing, Monomial, Polynomial};
use crate::scalar::{large_primes, rational_reconstruction, with_modulus, Field, Rational, Zp};

/// Result of a multi-modular run.
#[derive(Debug, Clone)]
pub enum ModularOutcome {
    /// An exactly checked reduced basis of an ideal containing the input.
    Basis(GroebnerBasis<Rational>),
    /// The basis was `{1}` modulo every prime tried; the input ideal is the
    /// unit ideal unless all of them were unlucky. Not a proof.
    UnitModPrimes(usize),
}

/// Knobs for [`modular_groebner`].
#[derive(Debug, Clone)]
pub struct ModularOptions {
    /// Unit images needed before giving up on a proper ideal.
    pub unit_votes: usize,
    pub max_primes: usize,
}

impl Default for ModularOptions {
    fn default() -> Self {
        ModularOptions { unit_votes: 2, max_primes: 400 }
    }
}

/// A basis modulo one prime: per element, monomials in ring order and the
/// coefficient residues.
struct Image {
    shape: Vec<Vec<Monomial>>,
    coefficients: Vec<Vec<u64>>,
    stats: RunStats,
}

/// Residues of one shape accumulated over several primes.
struct Lift {
    shape: Vec<Vec<Monomial>>,
    residues: Vec<Vec<BigInt>>,
    modulus: BigInt,
    primes: usize,
    last: Option<Vec<Vec<Rational>>>,
}

impl Lift {
    fn absorb(&mut self, p: u64, im: &Image) {
        let pb = BigInt::from(p);
        // x ≡ r (mod M), x ≡ a (mod p): x = r + M·((a − r)·M⁻¹ mod p)
        let m_inv = with_modulus(p, || Zp::from_rational(&Rational::from_integer(self.modulus.clone())).unwrap().inverse().value());
        for (res, coeffs) in self.residues.iter_mut().zip(&im.coefficients) {
            for (r, &a) in res.iter_mut().zip(coeffs) {
                let r_mod = r.mod_floor(&pb);
                let diff = (BigInt::from(a) - r_mod).mod_floor(&pb);
                let t = (diff * BigInt::from(m_inv)).mod_floor(&pb);
                *r += &self.modulus * t;
            }
        }
        self.modulus *= pb;
        self.primes += 1;
    }

    fn reconstruct(&self) -> Option<Vec<Vec<Rational>>> {
        self.residues.iter().map(|res| res.iter().map(|r| rational_reconstruction(r, &self.modulus)).collect()).collect()
    }
}

fn image_mod(gens: &[Polynomial<Rational>], order: &MonomialOrder, limits: &Limits) -> Result<Option<Image>, LimitExceeded> {
    let mut reduced = Vec::with_capacity(gens.len());
    for g in gens {
        let mut terms = Vec::with_capacity(g.len());
        for (m, c) in g.terms() {
            // a prime dividing a denominator is skipped
            let Some(z) = Zp::from_rational(c) else { return Ok(None) };
            terms.push((m.clone(), z));
        }
        reduced.push(Polynomial::from_terms(g.ring(), terms));
    }
    let gb = buchberger_with_limits(&reduced, order, false, limits)?;
    // leading coefficients that vanish mod p change the shape; such primes
    // lose the shape vote below
    let mut shape = Vec::with_capacity(gb.len());
    let mut coefficients = Vec::with_capacity(gb.len());
    for g in gb.generators() {
        shape.push(g.terms().iter().map(|(m, _)| m.clone()).collect());
        coefficients.push(g.terms().iter().map(|(_, c)| c.value()).collect());
    }
    Ok(Some(Image { shape, coefficients, stats: gb.stats().clone() }))
}

/// Reduced basis modulo one prime, as residues.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeImage {
    pub prime: u64,
    /// Per element, terms in ring order with coefficient residues.
    pub elements: Vec<Vec<(Monomial, u64)>>,
}

impl PrimeImage {
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].len() == 1 && self.elements[0][0].0.is_one()
    }

    /// Whether every variable in `vars` has a pure power among the leading
    /// monomials, i.e. the quotient by the image is finite over those
    /// variables.
    pub fn is_zero_dimensional(&self, vars: &[usize], order: &MonomialOrder) -> bool {
        let leads: Vec<&Monomial> = self.elements.iter().filter_map(|e| e.iter().map(|(m, _)| m).max_by(|a, b| order.cmp(a, b))).collect();
        vars.iter().all(|&v| leads.iter().any(|m| matches!(m.pure_power_of(), Some((w, _)) if w == v)))
    }

    /// The residue `a` when `x_var − a` is a basis element.
    pub fn determined(&self, var: usize) -> Option<u64> {
        self.elements.iter().find_map(|e| {
            let linear = e.iter().find(|(m, c)| m.pure_power_of() == Some((var, 1)) && *c == 1)?;
            match e.as_slice() {
                [_] => Some(0),
                [a, b] => {
                    let other = if a.0 == linear.0 { b } else { a };
                    other.0.is_one().then(|| (self.prime - other.1) % self.prime)
                }
                _ => None,
            }
        })
    }
}

/// Reduced Gröbner basis of `gens` modulo `prime`, or `None` when the prime
/// divides a denominator.
pub fn groebner_mod_prime(
    gens: &[Polynomial<Rational>],
    order: &MonomialOrder,
    limits: &Limits,
    prime: u64,
) -> Result<Option<PrimeImage>, LimitExceeded> {
    with_modulus(prime, || image_mod(gens, order, limits)).map(|im| {
        im.map(|im| PrimeImage {
            prime,
            elements: im.shape.into_iter().zip(im.coefficients).map(|(ms, cs)| ms.into_iter().zip(cs).collect()).collect(),
        })
    })
}

/// Computes a Gröbner basis of `gens` over the rationals by the modular
/// method, with the exact check described in the module docs.
///
/// Limits bound each modular run; the wall clock bounds the whole call.
pub fn modular_groebner(
    gens: &[Polynomial<Rational>],
    order: &MonomialOrder,
    limits: &Limits,
    options: &ModularOptions,
) -> Result<ModularOutcome, LimitExceeded> {
    let start = Instant::now();
    let ring = match gens.iter().find(|g| !g.is_zero()) {
        Some(g) => g.ring().clone(),
        None => {
            return Ok(ModularOutcome::Basis(GroebnerBasis::from_verified(
                &GradedRing::new(Vec::new()).unwrap(),
                order,
                Vec::new(),
                gens.len(),
                RunStats::default(),
            )))
        }
    };
    let mut stats = RunStats::default();
    let timed_out = |stats: &RunStats| {
        let mut s = stats.clone();
        s.elapsed = start.elapsed();
        LimitExceeded { kind: LimitKind::Time, stats: s }
    };
    let mut lifts: Vec<Lift> = Vec::new();
    let mut units = 0;
    for p in large_primes().take(options.max_primes) {
        let mut lim = limits.clone();
        if let Some(max) = limits.max_time {
            lim.max_time = Some(max.checked_sub(start.elapsed()).ok_or_else(|| timed_out(&stats))?);
        }
        let image = with_modulus(p, || -> Result<Option<Image>, LimitExceeded> {
            let r = image_mod(gens, order, &lim);
            if let Err(e) = &r {
                return Err(LimitExceeded { kind: e.kind, stats: RunStats { elapsed: start.elapsed(), ..e.stats.clone() } });
            }
            r
        })?;
        let Some(image) = image else { continue };
        stats.pairs_reduced += image.stats.pairs_reduced;
        stats.pairs_skipped += image.stats.pairs_skipped;
        stats.zero_reductions += image.stats.zero_reductions;
        if image.shape.len() == 1 && image.shape[0].len() == 1 && image.shape[0][0].is_one() {
            units += 1;
            if units >= options.unit_votes {
                return Ok(ModularOutcome::UnitModPrimes(units));
            }
            continue;
        }
        let k = match lifts.iter().position(|l| l.shape == image.shape) {
            Some(k) => {
                lifts[k].absorb(p, &image);
                k
            }
            None => {
                let residues = image.coefficients.iter().map(|c| c.iter().map(|&a| BigInt::from(a)).collect()).collect();
                lifts.push(Lift { shape: image.shape, residues, modulus: BigInt::from(p), primes: 1, last: None });
                lifts.len() - 1
            }
        };
        // only the majority shape is worth lifting
        let best = (0..lifts.len()).max_by_key(|&i| (lifts[i].primes, std::cmp::Reverse(i))).unwrap();
        if best != k {
            continue;
        }
        let Some(rec) = lifts[k].reconstruct() else { continue };
        let stable = lifts[k].last.as_ref() == Some(&rec);
        lifts[k].last = Some(rec.clone());
        if !stable {
            continue;
        }
        let candidate: Vec<Polynomial<Rational>> =
            lifts[k].shape.iter().zip(rec).map(|(ms, cs)| Polynomial::from_terms(&ring, ms.iter().cloned().zip(cs))).collect();
        let deadline = limits.max_time.map(|m| start + m);
        match is_groebner_basis_of(&candidate, gens, order, deadline) {
            None => return Err(timed_out(&stats)),
            Some(true) => {
                stats.basis_added = candidate.len();
                stats.elapsed = start.elapsed();
                return Ok(ModularOutcome::Basis(GroebnerBasis::from_verified(&ring, order, candidate, gens.len(), stats)));
            }
            Some(false) => {}
        }
    }
    Err(LimitExceeded { kind: LimitKind::Primes, stats: RunStats { elapsed: start.elapsed(), ..stats } })
}

/// Whether `basis` (monic, nonzero) is a Gröbner basis under `order` and
/// every element of `gens` reduces to zero by it. `None` past the deadline.
pub fn is_groebner_basis_of(
    basis: &[Polynomial<Rational>],
    gens: &[Polynomial<Rational>],
    order: &MonomialOrder,
    deadline: Option<Instant>,
) -> Option<bool> {
    let sorted: Vec<Terms<Rational>> = basis.iter().map(|g| to_sorted(g, order)).collect();
    if sorted.iter().any(|t| t.is_empty() || !t[0].1.is_one()) {
        return Some(false);
    }
    let late = || matches!(deadline, Some(d) if Instant::now() > d);
    for g in gens {
        if late() {
            return None;
        }
        if !reduces_to_zero(to_sorted(g, order), &sorted, order) {
            return Some(false);
        }
    }
    let lm: Vec<&Monomial> = sorted.iter().map(|t| &t[0].0).collect();
    let n = sorted.len();
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    let key = |i: usize, j: usize| if i < j { (i, j) } else { (j, i) };
    let mut pairs: Vec<(usize, usize, Monomial)> =
        (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| (i, j, lm[i].lcm(lm[j]))).collect();
    pairs.sort_by(|a, b| order.cmp(&a.2, &b.2).then((a.1, a.0).cmp(&(b.1, b.0))));
    for (i, j, l) in pairs {
        if late() {
            return None;
        }
        // product criterion, then the chain criterion over settled pairs
        let skip = lm[i].coprime(lm[j])
            || (0..n).any(|k| k != i && k != j && lm[k].divides(&l) && done.contains(&key(i, k)) && done.contains(&key(j, k)));
        if !skip {
            let mi = lm[i].divide_into(&l).unwrap();
            let mj = lm[j].divide_into(&l).unwrap();
            let one = Rational::one();
            let s = sub_scaled(&sub_scaled(&[], &-one.clone(), &mi, &sorted[i], order), &one, &mj, &sorted[j], order);
            if !reduces_to_zero(s, &sorted, order) {
                return Some(false);
            }
        }
        done.insert((i, j));
    }
    Some(true)
}

/// Top-reduces until zero or an irreducible leading term.
fn reduces_to_zero(mut p: Terms<Rational>, basis: &[Terms<Rational>], order: &MonomialOrder) -> bool {
    while let Some((lm, lc)) = p.first().cloned() {
        let Some(g) = basis.iter().find(|g| g[0].0.divides(&lm)) else { return false };
        let m = g[0].0.divide_into(&lm).unwrap();
        p = sub_scaled(&p, &lc, &m, g, order);
        debug_assert!(p.first().is_none_or(|(m2, _)| order.cmp(m2, &lm) == Ordering::Less));
    }
    true
}

#[cfg(test)]
mod tests;
