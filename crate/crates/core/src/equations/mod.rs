//! Coefficient systems of `sharp · flat = (f − g) · Id` in the ansatz
//! parameters, quantum-dimension helper constraints and linear elimination.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ansatz::GenericMF;
use crate::error::{Error, ParseError};
use crate::mf::{MatrixFactorization, QdimEngine, Side};
use crate::ring::{parse_polynomial, GradedRing, Monomial, Polynomial};
use crate::scalar::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Product {
    SharpFlat,
    FlatSharp,
}

/// Where an equation came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Source {
    /// Coefficient of `monomial` (pair ring) in entry `(row, col)` of the
    /// product minus `(f − g) · Id`.
    Entry { product: Product, row: usize, col: usize, monomial: Monomial },
    /// `c · q − 1` for one side's quantum dimension `q`.
    Helper(Side),
    /// Read from a dump.
    External,
}

/// Equations in the parameters of an ansatz.
///
/// The ring holds every parameter ever introduced; eliminated parameters
/// stay in it but occur in no equation and in no eliminated value.
/// Equations are monic, nonzero and pairwise distinct.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    ring: Arc<GradedRing>,
    live: Vec<bool>,
    equations: Vec<Polynomial>,
    provenance: Vec<Source>,
    eliminated: Vec<(usize, Polynomial)>,
    inconsistent: bool,
    /// Nonzero equations offered before deduplication; elimination leaves
    /// it alone.
    collected: usize,
}

impl EquationSystem {
    pub fn new(ring: &Arc<GradedRing>) -> Self {
        EquationSystem {
            ring: ring.clone(),
            live: vec![true; ring.nvars()],
            equations: Vec::new(),
            provenance: Vec::new(),
            eliminated: Vec::new(),
            inconsistent: false,
            collected: 0,
        }
    }

    /// Builds a system from raw equations, normalizing and deduplicating.
    pub fn from_equations(ring: &Arc<GradedRing>, eqs: impl IntoIterator<Item = (Polynomial, Source)>) -> Self {
        let mut sys = Self::new(ring);
        let mut seen = HashSet::new();
        for (e, s) in eqs {
            sys.collected += usize::from(sys.push(e, s, &mut seen));
        }
        sys
    }

    /// False for the zero polynomial, which is dropped.
    fn push(&mut self, e: Polynomial, source: Source, seen: &mut HashSet<Vec<(Monomial, Rational)>>) -> bool {
        if e.is_zero() {
            return false;
        }
        let e = e.monic();
        if e.is_constant() {
            self.inconsistent = true;
        }
        if seen.insert(e.terms().to_vec()) {
            self.equations.push(e);
            self.provenance.push(source);
        }
        true
    }

    /// Number of nonzero coefficient equations collected, counting those
    /// that coincided up to scaling.
    pub fn collected(&self) -> usize {
        self.collected
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    /// Indices of parameters not yet eliminated.
    pub fn live_parameters(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&i| self.live[i]).collect()
    }

    pub fn parameter_names(&self) -> Vec<&str> {
        self.live_parameters().into_iter().map(|i| self.ring.name(i)).collect()
    }

    pub fn parameter_count(&self) -> usize {
        self.live.iter().filter(|&&l| l).count()
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn provenance(&self) -> &[Source] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Substitutions `parameter ↦ value`, values in live parameters only.
    pub fn eliminated(&self) -> &[(usize, Polynomial)] {
        &self.eliminated
    }

    /// True once a nonzero constant equation is present, so `1` lies in
    /// the ideal without further work.
    pub fn is_marked_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Live parameters and equations moved to a ring holding only the live
    /// parameters, for Gröbner work.
    pub fn live_system(&self) -> (Arc<GradedRing>, Vec<Polynomial>) {
        let live = self.ring.restrict(&self.live_parameters());
        let eqs = self.equations.iter().map(|e| e.embed(&live).expect("equations use live parameters")).collect();
        (live, eqs)
    }

    /// Values of every parameter from values of the live ones: eliminated
    /// parameters are evaluated through their substitutions.
    pub fn complete_point(&self, live_values: &[Rational]) -> Vec<Rational> {
        let live = self.live_parameters();
        assert_eq!(live.len(), live_values.len());
        let mut point = vec![Rational::zero(); self.ring.nvars()];
        let assign: Vec<(usize, Rational)> = live.iter().copied().zip(live_values.iter().cloned()).collect();
        for (i, v) in &assign {
            point[*i] = v.clone();
        }
        for (v, val) in &self.eliminated {
            point[*v] = val.evaluate_partial(&assign).constant_term();
        }
        point
    }

    /// Evaluates every equation at a full point.
    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        let assign: Vec<(usize, Rational)> = point.iter().cloned().enumerate().collect();
        self.equations.iter().all(|e| e.evaluate_partial(&assign).is_zero())
    }

    /// Adds parameters to the ring, keeping everything else.
    fn with_parameters(&self, names: &[&str]) -> Result<Self, Error> {
        let ring = self.ring.with_parameters(names.iter().copied())?;
        let mv = |p: &Polynomial| p.embed(&ring).expect("ring grows");
        let mut live = self.live.clone();
        live.extend(names.iter().map(|_| true));
        Ok(EquationSystem {
            equations: self.equations.iter().map(mv).collect(),
            eliminated: self.eliminated.iter().map(|(v, p)| (*v, mv(p))).collect(),
            provenance: self.provenance.clone(),
            inconsistent: self.inconsistent,
            collected: self.collected,
            live,
            ring,
        })
    }
}

/// Collects every coefficient of `sharp · flat − (f − g) · Id`, and with
/// `half == false` also of `flat · sharp − (f − g) · Id`.
pub fn extract(gmf: &GenericMF, half: bool) -> EquationSystem {
    let ring = GradedRing::parameters(gmf.parameters.iter().cloned()).expect("distinct parameter names");
    let joint = gmf.ring();
    let n0 = gmf.pair.ring().nvars();
    let mask: Vec<bool> = (0..joint.nvars()).map(|i| i < n0).collect();
    let mf = &gmf.mf;
    let mut products = vec![(Product::SharpFlat, mf.sharp.mul(&mf.flat))];
    if !half {
        products.push((Product::FlatSharp, mf.flat.mul(&mf.sharp)));
    }
    let mut eqs = Vec::new();
    for (product, m) in products {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let mut entry = m.get(i, j).clone();
                if i == j {
                    entry = &entry - &mf.target;
                }
                for (mono, coef) in entry.split(&mask) {
                    let monomial = Monomial::new(mono.exponents()[..n0].to_vec());
                    eqs.push((to_parameters(&coef, n0, &ring), Source::Entry { product, row: i, col: j, monomial }));
                }
            }
        }
    }
    EquationSystem::from_equations(&ring, eqs)
}

/// Drops the first `n0` (geometric, absent) variables.
fn to_parameters(p: &Polynomial, n0: usize, ring: &Arc<GradedRing>) -> Polynomial {
    let terms = p.terms().iter().map(|(m, c)| {
        debug_assert!(m.exponents()[..n0].iter().all(|&e| e == 0));
        (Monomial::new(m.exponents()[n0..].to_vec()), c.clone())
    });
    Polynomial::from_terms(ring, terms.collect::<Vec<_>>())
}

/// The ansatz with the system's eliminated substitutions applied.
pub fn apply_eliminated(gmf: &GenericMF, sys: &EquationSystem) -> MatrixFactorization {
    let joint = gmf.ring();
    let subs: Vec<(usize, Polynomial)> = sys
        .eliminated()
        .iter()
        .filter_map(|(v, val)| {
            let k = joint.index_of(sys.ring().name(*v))?;
            Some((k, val.embed(joint)?))
        })
        .collect();
    gmf.mf.map_entries(|p| subs.iter().fold(p.clone(), |acc, (k, val)| acc.substitute(*k, val)))
}

/// Quantum dimensions of the (eliminated) ansatz as polynomials in the
/// system's parameters.
pub fn symbolic_quantum_dimensions(sys: &EquationSystem, gmf: &GenericMF) -> Result<[Polynomial; 2], Error> {
    let mf = apply_eliminated(gmf, sys);
    let engine = QdimEngine::new(&gmf.pair, gmf.ring())?;
    let mut out = Vec::with_capacity(2);
    for side in [Side::Left, Side::Right] {
        let q = engine.quantum_dimension(&mf, side)?;
        let q = q.embed(sys.ring()).ok_or_else(|| Error::Invalid(format!("quantum dimension depends on geometric variables: {q}")))?;
        out.push(q);
    }
    let r = out.pop().unwrap();
    let l = out.pop().unwrap();
    Ok([l, r])
}

/// Adds `c_l` and `c_r` with `c_l · q_l − 1` and `c_r · q_r − 1`. A zero
/// quantum dimension leaves the constant equation `1`, marking the system
/// inconsistent.
pub fn append_nonvanishing(sys: &EquationSystem, gmf: &GenericMF) -> Result<EquationSystem, Error> {
    let [ql, qr] = symbolic_quantum_dimensions(sys, gmf)?;
    let mut out = sys.with_parameters(&["c_l", "c_r"])?;
    let ring = out.ring.clone();
    let mut seen: HashSet<Vec<(Monomial, Rational)>> = out.equations.iter().map(|e| e.terms().to_vec()).collect();
    for (side, q, name) in [(Side::Left, ql, "c_l"), (Side::Right, qr, "c_r")] {
        let c = Polynomial::var(&ring, ring.index_of(name).unwrap());
        let e = &(&c * &q.embed(&ring).unwrap()) - &Polynomial::one(&ring);
        out.collected += usize::from(out.push(e, Source::Helper(side), &mut seen));
    }
    Ok(out)
}

/// Evaluates both quantum dimensions at random small integer parameter
/// points. A nonzero value certifies that the symbolic quantum dimension is
/// not the zero polynomial; `false` means every attempt gave zero.
pub fn certify_nonvanishing(gmf: &GenericMF, seed: u64, attempts: usize) -> Result<[bool; 2], Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let engine = QdimEngine::new(&gmf.pair, gmf.pair.ring())?;
    let mut found = [false; 2];
    for _ in 0..attempts {
        let point: Vec<Rational> = gmf.parameters.iter().map(|_| int(rng.gen_range(-7..=7))).collect();
        let mf = gmf.specialize(&point);
        for (k, side) in [Side::Left, Side::Right].into_iter().enumerate() {
            if !found[k] && !engine.quantum_dimension(&mf, side)?.is_zero() {
                found[k] = true;
            }
        }
        if found == [true, true] {
            break;
        }
    }
    Ok(found)
}

/// Solves linear equations `c · v + r` (`c` a nonzero constant, `r` free of
/// `v`) by substitution until none remain or `max_steps` substitutions are
/// done. Among eligible variables the one in the fewest equations wins, ties
/// going to the lower index; the equation used is the first eligible one.
pub fn linear_eliminate(sys: &EquationSystem, max_steps: usize) -> EquationSystem {
    let mut out = sys.clone();
    for _ in 0..max_steps {
        if out.inconsistent {
            break;
        }
        let Some((v, k)) = pick_pivot(&out) else { break };
        let e = &out.equations[k];
        let c = e.coefficient(&Monomial::var(out.ring.nvars(), v, 1));
        let vpoly = Polynomial::var(&out.ring, v).scale(&c);
        let value = (&vpoly - e).scale(&c.recip());
        out.eliminated = out.eliminated.iter().map(|(w, p)| (*w, p.substitute(v, &value))).collect();
        out.eliminated.push((v, value.clone()));
        out.live[v] = false;
        let old_eqs = std::mem::take(&mut out.equations);
        let old_src = std::mem::take(&mut out.provenance);
        let mut seen = HashSet::new();
        for (i, (eq, src)) in old_eqs.into_iter().zip(old_src).enumerate() {
            if i == k {
                continue;
            }
            let eq = if eq.contains_var(v) { eq.substitute(v, &value) } else { eq };
            out.push(eq, src, &mut seen);
        }
    }
    out
}

fn pick_pivot(sys: &EquationSystem) -> Option<(usize, usize)> {
    let n = sys.ring.nvars();
    let mut count = vec![0usize; n];
    for e in &sys.equations {
        for v in e.support() {
            count[v] += 1;
        }
    }
    let mut best: Option<(usize, usize, usize)> = None;
    for (k, e) in sys.equations.iter().enumerate() {
        for v in e.support() {
            if !is_linear_in(e, v) {
                continue;
            }
            let better = match best {
                None => true,
                Some((cnt, bv, _)) => (count[v], v) < (cnt, bv),
            };
            if better {
                best = Some((count[v], v, k));
            }
        }
    }
    best.map(|(_, v, k)| (v, k))
}

/// `e = c · v + r` with `c` constant and `v ∉ r`.
fn is_linear_in(e: &Polynomial, v: usize) -> bool {
    let mut hits = e.terms().iter().filter(|(m, _)| m.exponent(v) > 0);
    matches!(hits.next(), Some((m, _)) if m.degree() == 1) && hits.next().is_none()
}

/// Size summary in the shape of a Gröbner challenge table row.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemStats {
    pub parameters: usize,
    pub equations: usize,
    /// Coefficient equations before deduplication up to scaling.
    pub collected: usize,
    /// Total degree → number of equations.
    pub degrees: BTreeMap<u32, usize>,
    pub terms: usize,
    /// Filled fraction of the dense coefficient table over all monomials of
    /// degree at most the maximal equation degree.
    pub density: f64,
}

impl SystemStats {
    /// Accounts for the two helper equations and parameters without
    /// computing them; `degree` is their total degree.
    pub fn with_helpers(mut self, degree: u32) -> Self {
        self.parameters += 2;
        self.equations += 2;
        self.collected += 2;
        *self.degrees.entry(degree).or_default() += 2;
        self
    }

    pub fn table_row(&self, name: &str) -> String {
        format!("{name} | {} | {}", self.parameters, self.equations)
    }
}

impl fmt::Display for SystemStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hist: Vec<String> = self.degrees.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        write!(
            f,
            "vars {} eqs {} collected {} degrees {} terms {} density {:.6}",
            self.parameters,
            self.equations,
            self.collected,
            hist.join(","),
            self.terms,
            self.density
        )
    }
}

pub fn stats(sys: &EquationSystem) -> SystemStats {
    let mut degrees = BTreeMap::new();
    let mut terms = 0;
    for e in &sys.equations {
        *degrees.entry(e.total_degree()).or_insert(0) += 1;
        terms += e.len();
    }
    let n = sys.parameter_count();
    let dmax = degrees.keys().next_back().copied().unwrap_or(0);
    // C(n + d, d) monomials of degree ≤ d in n variables
    let width = (1..=dmax as usize).fold(1f64, |acc, k| acc * (n + k) as f64 / k as f64);
    let density = if sys.is_empty() { 0.0 } else { terms as f64 / (sys.len() as f64 * width) };
    SystemStats { parameters: n, equations: sys.len(), collected: sys.collected(), degrees, terms, density }
}

/// `system vars <n> eqs <m>`, then `v <name>` per live parameter and
/// `e <polynomial>` per equation.
pub fn dump(sys: &EquationSystem) -> String {
    let mut out = String::new();
    writeln!(out, "system vars {} eqs {}", sys.parameter_count(), sys.len()).unwrap();
    for name in sys.parameter_names() {
        writeln!(out, "v {name}").unwrap();
    }
    for e in &sys.equations {
        writeln!(out, "e {e}").unwrap();
    }
    out
}

pub fn parse_dump(text: &str) -> Result<EquationSystem, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (n, header) = lines.next().ok_or_else(|| ParseError::line(1, "empty system dump"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let (nv, ne) = match words[..] {
        ["system", "vars", a, "eqs", b] => (
            a.parse::<usize>().map_err(|_| ParseError::line(n, "bad variable count"))?,
            b.parse::<usize>().map_err(|_| ParseError::line(n, "bad equation count"))?,
        ),
        _ => return Err(ParseError::line(n, "expected `system vars <n> eqs <m>`")),
    };
    let mut names = Vec::new();
    let mut raw = Vec::new();
    for (n, l) in lines {
        match l.split_once(' ') {
            Some(("v", name)) if raw.is_empty() => names.push(name.trim().to_string()),
            Some(("e", poly)) => raw.push((n, poly.to_string())),
            _ => return Err(ParseError::line(n, format!("unexpected line `{l}`"))),
        }
    }
    if names.len() != nv || raw.len() != ne {
        return Err(ParseError::line(n, format!("header promises {nv} vars and {ne} eqs")));
    }
    let ring = GradedRing::parameters(names).map_err(|e| ParseError::line(n, e.to_string()))?;
    let mut eqs = Vec::with_capacity(ne);
    for (n, src) in raw {
        let p = parse_polynomial(&src, &ring).map_err(|e| ParseError::line(n, e.to_string()))?;
        eqs.push((p, Source::External));
    }
    Ok(EquationSystem::from_equations(&ring, eqs))
}

impl EquationSystem {
    /// Convenience for tests and small examples: equations from strings.
    pub fn parse_equations(names: &[&str], eqs: &[&str]) -> Result<Self, Error> {
        let ring = GradedRing::parameters(names.iter().copied())?;
        let mut out = Vec::new();
        for e in eqs {
            out.push((parse_polynomial(e, &ring)?, Source::External));
        }
        Ok(Self::from_equations(&ring, out))
    }
}
