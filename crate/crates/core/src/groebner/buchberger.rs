//! Buchberger's algorithm with the Gebauer–Möller pair criteria, normal
//! selection strategy and optional cofactor tracking.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use super::order::MonomialOrder;
use crate::ring::{GradedRing, Monomial, Polynomial};
use crate::scalar::{Field, Rational};

/// Terms sorted descending under some monomial order.
pub(crate) type Terms<C> = Vec<(Monomial, C)>;

/// Resource guards for a single Gröbner computation.
#[derive(Debug, Clone, PartialEq)]
pub struct Limits {
    /// Maximum number of S-pairs reduced.
    pub max_pairs: u64,
    /// Maximum number of polynomials ever added to the basis.
    pub max_basis: usize,
    pub max_time: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_pairs: 1_000_000, max_basis: 10_000, max_time: Some(Duration::from_secs(60)) }
    }
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits { max_pairs: u64::MAX, max_basis: usize::MAX, max_time: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Pairs,
    BasisSize,
    Time,
    /// A multi-modular run used up its primes without a checked lift.
    Primes,
}

/// Counters reported by a Buchberger run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunStats {
    pub pairs_reduced: u64,
    pub pairs_skipped: u64,
    pub zero_reductions: u64,
    pub basis_added: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitExceeded {
    pub kind: LimitKind,
    pub stats: RunStats,
}

impl fmt::Display for LimitExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            LimitKind::Pairs => "pair limit",
            LimitKind::BasisSize => "basis size limit",
            LimitKind::Time => "time limit",
            LimitKind::Primes => "prime limit",
        };
        write!(
            f,
            "{} reached after {} pairs, {} basis polynomials, {:.1}s",
            what,
            self.stats.pairs_reduced,
            self.stats.basis_added,
            self.stats.elapsed.as_secs_f64()
        )
    }
}

impl std::error::Error for LimitExceeded {}

/// A reduced Gröbner basis.
///
/// Basis elements are monic with respect to [`GroebnerBasis::order`]. The zero
/// ideal has an empty basis.
#[derive(Clone)]
pub struct GroebnerBasis<C = Rational> {
    ring: Arc<GradedRing>,
    order: MonomialOrder,
    sorted: Vec<Terms<C>>,
    generators: Vec<Polynomial<C>>,
    cofactors: Option<Vec<Vec<Polynomial<C>>>>,
    input_len: usize,
    stats: RunStats,
}

impl<C: Field> fmt::Debug for GroebnerBasis<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroebnerBasis").field("order", &self.order).field("generators", &self.generators).finish()
    }
}

impl<C: Field> GroebnerBasis<C> {
    /// Wraps polynomials already known to form a reduced, monic Gröbner
    /// basis under `order`.
    pub(crate) fn from_verified(
        ring: &Arc<GradedRing>,
        order: &MonomialOrder,
        generators: Vec<Polynomial<C>>,
        input_len: usize,
        stats: RunStats,
    ) -> Self {
        let mut sorted: Vec<Terms<C>> = generators.iter().map(|g| to_sorted(g, order)).collect();
        sorted.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
        let generators = sorted.iter().map(|t| Polynomial::from_terms(ring, t.iter().cloned())).collect();
        GroebnerBasis { ring: ring.clone(), order: order.clone(), sorted, generators, cofactors: None, input_len, stats }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn generators(&self) -> &[Polynomial<C>] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `cofactors()[k][j]` is the coefficient of input generator `j` in basis
    /// element `k`.
    pub fn cofactors(&self) -> Option<&[Vec<Polynomial<C>>]> {
        self.cofactors.as_deref()
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    /// Leading monomials under the basis order.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.sorted.iter().map(|t| t[0].0.clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.sorted.len() == 1 && self.sorted[0].len() == 1 && self.sorted[0][0].0.is_one()
    }

    pub fn normal_form(&self, p: &Polynomial<C>) -> Polynomial<C> {
        let t = to_sorted(p, &self.order);
        let (r, _) = reduce_full(t, &self.sorted, None, &self.order, None).expect("no deadline");
        Polynomial::from_terms(&self.ring, r)
    }

    /// Remainder together with quotients `q` such that
    /// `p = Σ q_k · generators[k] + remainder`.
    pub fn normal_form_with_quotients(&self, p: &Polynomial<C>) -> (Polynomial<C>, Vec<Polynomial<C>>) {
        let t = to_sorted(p, &self.order);
        let mut quotients: Vec<Terms<C>> = vec![Vec::new(); self.sorted.len()];
        let (r, _) = reduce_full(t, &self.sorted, Some(&mut quotients), &self.order, None).expect("no deadline");
        let q = quotients.into_iter().map(|t| Polynomial::from_terms(&self.ring, t)).collect();
        (Polynomial::from_terms(&self.ring, r), q)
    }

    pub fn contains(&self, p: &Polynomial<C>) -> bool {
        self.normal_form(p).is_zero()
    }
}

pub(crate) fn to_sorted<C: Field>(p: &Polynomial<C>, order: &MonomialOrder) -> Terms<C> {
    let mut t = p.terms().to_vec();
    if !matches!(order, MonomialOrder::DegRevLex(perm) if is_identity(perm)) {
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    }
    t
}

fn is_identity(perm: &[usize]) -> bool {
    perm.iter().enumerate().all(|(i, &p)| i == p)
}

/// `p - c · m · g` for sorted term lists.
pub(crate) fn sub_scaled<C: Field>(p: &[(Monomial, C)], c: &C, m: &Monomial, g: &[(Monomial, C)], order: &MonomialOrder) -> Terms<C> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut shifted: Option<(Monomial, C)> = g.first().map(|(gm, gc)| (gm.mul(m), gc.clone() * c));
    while let Some((gm, gc)) = shifted.take() {
        while i < p.len() && order.cmp(&p[i].0, &gm) == Ordering::Greater {
            out.push(p[i].clone());
            i += 1;
        }
        if i < p.len() && p[i].0 == gm {
            let v = p[i].1.clone() - &gc;
            if !v.is_zero() {
                out.push((gm, v));
            }
            i += 1;
        } else {
            out.push((gm, -gc));
        }
        j += 1;
        shifted = g.get(j).map(|(gm, gcc)| (gm.mul(m), gcc.clone() * c));
    }
    out.extend_from_slice(&p[i..]);
    out
}

fn add_scaled<C: Field>(p: &[(Monomial, C)], c: &C, m: &Monomial, g: &[(Monomial, C)], order: &MonomialOrder) -> Terms<C> {
    sub_scaled(p, &-c.clone(), m, g, order)
}

struct Deadline {
    start: Instant,
    max: Option<Duration>,
    counter: u32,
}

impl Deadline {
    fn expired(&mut self) -> bool {
        self.counter += 1;
        if !self.counter.is_multiple_of(256) {
            return false;
        }
        matches!(self.max, Some(m) if self.start.elapsed() > m)
    }
}

/// Full reduction of `p` by `basis` (each element monic, sorted).
/// Returns `None` when the deadline expires.
fn reduce_full<C: Field>(
    mut p: Terms<C>,
    basis: &[Terms<C>],
    mut quotients: Option<&mut Vec<Terms<C>>>,
    order: &MonomialOrder,
    mut deadline: Option<&mut Deadline>,
) -> Option<(Terms<C>, ())> {
    let mut rem: Terms<C> = Vec::new();
    // p is consumed from the front; finished terms move to rem
    let mut start = 0usize;
    while start < p.len() {
        if let Some(d) = deadline.as_deref_mut() {
            if d.expired() {
                return None;
            }
        }
        let (lm, lc) = p[start].clone();
        let reducer = basis.iter().position(|g| g[0].0.divides(&lm));
        match reducer {
            Some(k) => {
                let g = &basis[k];
                let m = g[0].0.divide_into(&lm).unwrap();
                let c = lc.clone() / &g[0].1;
                if let Some(q) = quotients.as_deref_mut() {
                    q[k] = add_scaled(&q[k], &c, &Monomial::one(lm.nvars()), &[(m.clone(), C::one())], order);
                }
                p = sub_scaled(&p[start..], &c, &m, g, order);
                start = 0;
            }
            None => {
                rem.push((lm, lc));
                start += 1;
            }
        }
    }
    Some((rem, ()))
}

struct Element<C> {
    terms: Terms<C>,
    cof: Option<Vec<Terms<C>>>,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State<'a, C> {
    order: &'a MonomialOrder,
    elems: Vec<Element<C>>,
    /// indices into `elems` of the current basis
    basis: Vec<usize>,
    pairs: Vec<Pair>,
    stats: RunStats,
}

impl<'a, C: Field> State<'a, C> {
    fn lm(&self, k: usize) -> &Monomial {
        &self.elems[k].terms[0].0
    }

    /// Gebauer–Möller update with the new element `h`.
    fn update(&mut self, h: usize) {
        let lm_h = self.lm(h).clone();
        let mut cands: Vec<(usize, Monomial, bool)> = self
            .basis
            .iter()
            .map(|&g| {
                let lm_g = self.lm(g);
                (g, lm_g.lcm(&lm_h), lm_g.coprime(&lm_h))
            })
            .collect();
        // chain criterion among the new pairs
        let mut keep: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some((g, l, coprime)) = cands.pop() {
            let dominated = !coprime && cands.iter().chain(keep.iter()).any(|(_, l2, _)| l2.divides(&l));
            if coprime || !dominated {
                keep.push((g, l, coprime));
            } else {
                self.stats.pairs_skipped += 1;
            }
        }
        // drop duplicates with equal lcm, preferring a coprime representative
        let mut fresh: Vec<(usize, Monomial)> = Vec::new();
        let mut seen: Vec<Monomial> = Vec::new();
        keep.sort_by(|a, b| b.2.cmp(&a.2));
        for (g, l, coprime) in keep {
            if seen.contains(&l) {
                self.stats.pairs_skipped += 1;
                continue;
            }
            seen.push(l.clone());
            if coprime {
                self.stats.pairs_skipped += 1;
            } else {
                fresh.push((g, l));
            }
        }
        // old pairs made redundant by h
        let before = self.pairs.len();
        let elems = &self.elems;
        self.pairs.retain(|p| {
            if !lm_h.divides(&p.lcm) {
                return true;
            }
            let li = elems[p.i].terms[0].0.lcm(&lm_h);
            let lj = elems[p.j].terms[0].0.lcm(&lm_h);
            li == p.lcm || lj == p.lcm
        });
        self.stats.pairs_skipped += (before - self.pairs.len()) as u64;
        for (g, l) in fresh {
            self.pairs.push(Pair { i: g, j: h, lcm: l });
        }
        let elems = &self.elems;
        self.basis.retain(|&g| !lm_h.divides(&elems[g].terms[0].0));
        self.basis.push(h);
    }

    fn take_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let o = order.cmp(&self.pairs[k].lcm, &self.pairs[best].lcm);
            if o == Ordering::Less
                || (o == Ordering::Equal && (self.pairs[k].j, self.pairs[k].i) < (self.pairs[best].j, self.pairs[best].i))
            {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }
}

fn make_monic<C: Field>(e: &mut Element<C>) {
    let lc = e.terms[0].1.clone();
    if lc.is_one() {
        return;
    }
    let inv = lc.inverse();
    for t in &mut e.terms {
        t.1 = t.1.clone() * &inv;
    }
    if let Some(cof) = &mut e.cof {
        for c in cof.iter_mut() {
            for t in c.iter_mut() {
                t.1 = t.1.clone() * &inv;
            }
        }
    }
}

/// Reduces `e` by the current basis, updating cofactors.
fn reduce_element<C: Field>(mut e: Element<C>, st: &State<'_, C>, tail: bool, deadline: Option<&mut Deadline>) -> Option<Element<C>> {
    let basis: Vec<&Element<C>> = st.basis.iter().map(|&k| &st.elems[k]).collect();
    reduce_against(&mut e, &basis, st.order, tail, deadline)?;
    Some(e)
}

fn reduce_against<C: Field>(
    e: &mut Element<C>,
    basis: &[&Element<C>],
    order: &MonomialOrder,
    tail: bool,
    mut deadline: Option<&mut Deadline>,
) -> Option<()> {
    let mut rem: Terms<C> = Vec::new();
    let mut p = std::mem::take(&mut e.terms);
    loop {
        if p.is_empty() {
            break;
        }
        if let Some(d) = deadline.as_deref_mut() {
            if d.expired() {
                return None;
            }
        }
        let (lm, lc) = p[0].clone();
        match basis.iter().find(|g| g.terms[0].0.divides(&lm)) {
            Some(g) => {
                let m = g.terms[0].0.divide_into(&lm).unwrap();
                let c = lc / &g.terms[0].1;
                p = sub_scaled(&p, &c, &m, &g.terms, order);
                if let (Some(ec), Some(gc)) = (e.cof.as_mut(), g.cof.as_ref()) {
                    for (a, b) in ec.iter_mut().zip(gc) {
                        *a = sub_scaled(a, &c, &m, b, order);
                    }
                }
            }
            None => {
                if !tail {
                    rem.extend(p);
                    break;
                }
                rem.push(p.remove(0));
            }
        }
    }
    e.terms = rem;
    Some(())
}

/// Computes a reduced Gröbner basis without resource limits.
pub fn buchberger<C: Field>(gens: &[Polynomial<C>], order: &MonomialOrder, track_cofactors: bool) -> GroebnerBasis<C> {
    buchberger_with_limits(gens, order, track_cofactors, &Limits::unlimited()).expect("unlimited run cannot hit a limit")
}

/// Computes a reduced Gröbner basis, giving up when a limit trips.
///
/// All generators must live in the same ring; an empty list or a list of
/// zeros yields the zero ideal (empty basis).
pub fn buchberger_with_limits<C: Field>(
    gens: &[Polynomial<C>],
    order: &MonomialOrder,
    track_cofactors: bool,
    limits: &Limits,
) -> Result<GroebnerBasis<C>, LimitExceeded> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => {
            return Ok(GroebnerBasis {
                ring: GradedRing::new(Vec::new()).unwrap(),
                order: order.clone(),
                sorted: Vec::new(),
                generators: Vec::new(),
                cofactors: track_cofactors.then(Vec::new),
                input_len: 0,
                stats: RunStats::default(),
            })
        }
    };
    let n_in = gens.len();
    let mut deadline = Deadline { start: Instant::now(), max: limits.max_time, counter: 0 };
    let mut st = State { order, elems: Vec::new(), basis: Vec::new(), pairs: Vec::new(), stats: RunStats::default() };
    let nv = ring.nvars();
    let one_m = Monomial::one(nv);

    let exceeded = |kind, st: &State<'_, C>, deadline: &Deadline| {
        let mut stats = st.stats.clone();
        stats.elapsed = deadline.start.elapsed();
        Err(LimitExceeded { kind, stats })
    };

    for (j, g) in gens.iter().enumerate() {
        assert!(crate::ring::same_ring(g.ring(), &ring), "generators live in different rings");
        if g.is_zero() {
            continue;
        }
        let cof = track_cofactors.then(|| {
            let mut v: Vec<Terms<C>> = vec![Vec::new(); n_in];
            v[j] = vec![(one_m.clone(), C::one())];
            v
        });
        let e = Element { terms: to_sorted(g, order), cof };
        let Some(mut e) = reduce_element(e, &st, false, Some(&mut deadline)) else {
            return exceeded(LimitKind::Time, &st, &deadline);
        };
        if e.terms.is_empty() {
            continue;
        }
        make_monic(&mut e);
        st.elems.push(e);
        st.stats.basis_added += 1;
        let h = st.elems.len() - 1;
        if st.lm(h).is_one() {
            st.basis = vec![h];
            st.pairs.clear();
            break;
        }
        st.update(h);
    }

    while let Some(pair) = st.take_pair() {
        if st.stats.pairs_reduced >= limits.max_pairs {
            return exceeded(LimitKind::Pairs, &st, &deadline);
        }
        if matches!(limits.max_time, Some(m) if deadline.start.elapsed() > m) {
            return exceeded(LimitKind::Time, &st, &deadline);
        }
        st.stats.pairs_reduced += 1;
        let s = s_polynomial(&st.elems[pair.i], &st.elems[pair.j], &pair.lcm, order);
        let Some(mut h) = reduce_element(s, &st, false, Some(&mut deadline)) else {
            return exceeded(LimitKind::Time, &st, &deadline);
        };
        if h.terms.is_empty() {
            st.stats.zero_reductions += 1;
            continue;
        }
        if st.stats.basis_added >= limits.max_basis {
            return exceeded(LimitKind::BasisSize, &st, &deadline);
        }
        make_monic(&mut h);
        st.elems.push(h);
        st.stats.basis_added += 1;
        let k = st.elems.len() - 1;
        if st.lm(k).is_one() {
            st.basis = vec![k];
            st.pairs.clear();
            break;
        }
        st.update(k);
    }

    // inter-reduction: minimal basis, then reduce tails
    let mut idx = st.basis.clone();
    idx.sort_by(|&a, &b| order.cmp(st.lm(a), st.lm(b)));
    let mut reduced: Vec<Element<C>> = Vec::with_capacity(idx.len());
    for &k in &idx {
        let e = &st.elems[k];
        reduced.push(Element { terms: e.terms.clone(), cof: e.cof.clone() });
    }
    for i in 0..reduced.len() {
        let mut e = Element { terms: std::mem::take(&mut reduced[i].terms), cof: reduced[i].cof.take() };
        let others: Vec<&Element<C>> = reduced.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x).collect();
        // leading monomial is irreducible by the others in a minimal basis
        let head = e.terms.remove(0);
        let rest_cof = e.cof.clone();
        let mut tail = Element { terms: e.terms, cof: rest_cof.map(|_| vec![Vec::new(); n_in]) };
        if reduce_against(&mut tail, &others, order, true, Some(&mut deadline)).is_none() {
            return exceeded(LimitKind::Time, &st, &deadline);
        }
        let mut terms = vec![head];
        terms.extend(tail.terms);
        let cof = match (e.cof, tail.cof) {
            (Some(a), Some(b)) => Some(a.iter().zip(&b).map(|(x, y)| add_scaled(x, &C::one(), &one_m, y, order)).collect()),
            _ => None,
        };
        reduced[i] = Element { terms, cof };
    }

    let generators = reduced.iter().map(|e| Polynomial::from_terms(&ring, e.terms.clone())).collect();
    let cofactors = track_cofactors.then(|| {
        reduced.iter().map(|e| e.cof.as_ref().unwrap().iter().map(|t| Polynomial::from_terms(&ring, t.clone())).collect()).collect()
    });
    let mut stats = st.stats.clone();
    stats.elapsed = deadline.start.elapsed();
    Ok(GroebnerBasis {
        ring,
        order: order.clone(),
        sorted: reduced.into_iter().map(|e| e.terms).collect(),
        generators,
        cofactors,
        input_len: n_in,
        stats,
    })
}

fn s_polynomial<C: Field>(a: &Element<C>, b: &Element<C>, lcm: &Monomial, order: &MonomialOrder) -> Element<C> {
    // both are monic
    let ma = a.terms[0].0.divide_into(lcm).unwrap();
    let mb = b.terms[0].0.divide_into(lcm).unwrap();
    let one = C::one();
    let pa = sub_scaled(&[], &-one.clone(), &ma, &a.terms, order);
    let terms = sub_scaled(&pa, &one, &mb, &b.terms, order);
    let cof = match (&a.cof, &b.cof) {
        (Some(ca), Some(cb)) => Some(
            ca.iter()
                .zip(cb)
                .map(|(x, y)| {
                    let t = sub_scaled(&[], &-one.clone(), &ma, x, order);
                    sub_scaled(&t, &one, &mb, y, order)
                })
                .collect(),
        ),
        _ => None,
    };
    Element { terms, cof }
}

/// Reduction of an arbitrary polynomial by raw sorted generators (not
/// necessarily a Gröbner basis). Used by tests as a plain division routine.
#[allow(dead_code)]
pub(crate) fn divide<C: Field>(p: &Polynomial<C>, divisors: &[Polynomial<C>], order: &MonomialOrder) -> Polynomial<C> {
    let basis: Vec<Terms<C>> = divisors.iter().filter(|d| !d.is_zero()).map(|d| to_sorted(d, order)).collect();
    let (r, _) = reduce_full(to_sorted(p, order), &basis, None, order, None).unwrap();
    Polynomial::from_terms(p.ring(), r)
}
