//! Consistency of equation systems by Gröbner bases, exports for external
//! solvers, and the bounded search for orbifold equivalences.
//!
//! A system is inconsistent over the algebraic closure exactly when its
//! ideal is the unit ideal. Verdicts are computed over the rationals, which
//! is enough because reduced Gröbner bases do not change under field
//! extension.

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use crate::ansatz::{build_generic, enumerate_specs, AnsatzSpec, GenericMF};
use crate::equations::{append_nonvanishing, extract, linear_eliminate, stats, EquationSystem, SystemStats};
use crate::error::Error;
use crate::groebner::{
    buchberger_with_limits, groebner_mod_prime, modular_groebner, GroebnerBasis, Limits, ModularOptions, ModularOutcome, MonomialOrder,
    PrimeImage, RunStats,
};
use crate::mf::{verify_factorization, QdimEngine, Side, TensorRingPair};
use crate::ring::Polynomial;
use crate::scalar::{int, large_primes, Rational};

#[derive(Debug, Clone)]
pub enum Outcome {
    /// `basis` is a reduced Gröbner basis, other than `{1}`, of an ideal
    /// containing the system with the variables in `specialization` fixed.
    /// Any common zero of that basis solves the system.
    Consistent {
        basis: GroebnerBasis,
        specialization: Vec<(String, Rational)>,
    },
    Inconsistent,
    ResourceLimit(String),
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Consistent { .. } => "consistent",
            Outcome::Inconsistent => "inconsistent",
            Outcome::ResourceLimit(_) => "resource_limit",
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self, Outcome::Consistent { .. })
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub outcome: Outcome,
    pub elapsed: Duration,
    pub stats: RunStats,
}

impl fmt::Display for Verdict {
    /// Deterministic: no timings.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Consistent { basis, specialization } => {
                write!(f, "consistent (basis of {} polynomials", basis.len())?;
                if !specialization.is_empty() {
                    let fixed: Vec<String> = specialization.iter().map(|(v, x)| format!("{v}={x}")).collect();
                    write!(f, " after fixing {}", fixed.join(", "))?;
                }
                write!(f, ")")
            }
            Outcome::Inconsistent => write!(f, "inconsistent"),
            Outcome::ResourceLimit(why) => write!(f, "resource_limit ({why})"),
        }
    }
}

fn remaining(limits: &Limits, start: Instant) -> Option<Limits> {
    let mut out = limits.clone();
    if let Some(max) = limits.max_time {
        out.max_time = Some(max.checked_sub(start.elapsed())?);
    }
    Some(out)
}

fn out_of_time() -> Outcome {
    Outcome::ResourceLimit("time limit reached".into())
}

/// Decides whether `gens` have a common zero over the algebraic closure.
fn decide(gens: &[Polynomial], limits: &Limits, start: Instant) -> (Outcome, RunStats) {
    let Some(first) = gens.first() else {
        return (
            Outcome::Consistent {
                basis: GroebnerBasis::from_verified(
                    &crate::ring::GradedRing::new(Vec::new()).unwrap(),
                    &MonomialOrder::degrevlex(0),
                    Vec::new(),
                    0,
                    RunStats::default(),
                ),
                specialization: Vec::new(),
            },
            RunStats::default(),
        );
    };
    let order = MonomialOrder::degrevlex(first.ring().nvars());
    match modular_groebner(gens, &order, limits, &ModularOptions::default()) {
        Ok(ModularOutcome::Basis(basis)) => {
            let stats = basis.stats().clone();
            (Outcome::Consistent { basis, specialization: Vec::new() }, stats)
        }
        // the images vote for the unit ideal; only an exact run proves it
        Ok(ModularOutcome::UnitModPrimes(_)) => {
            let Some(lim) = remaining(limits, start) else { return (out_of_time(), RunStats::default()) };
            match buchberger_with_limits(gens, &order, false, &lim) {
                Ok(gb) if gb.is_unit() => (Outcome::Inconsistent, gb.stats().clone()),
                Ok(basis) => {
                    let stats = basis.stats().clone();
                    (Outcome::Consistent { basis, specialization: Vec::new() }, stats)
                }
                Err(e) => (Outcome::ResourceLimit(e.to_string()), e.stats),
            }
        }
        Err(e) => (Outcome::ResourceLimit(e.to_string()), e.stats),
    }
}

/// Gröbner consistency check of the system as given, in degrevlex over its
/// live parameters.
pub fn check(sys: &EquationSystem, limits: &Limits) -> Verdict {
    let start = Instant::now();
    if sys.is_marked_inconsistent() {
        return Verdict { outcome: Outcome::Inconsistent, elapsed: start.elapsed(), stats: RunStats::default() };
    }
    let (_, eqs) = sys.live_system();
    let (outcome, stats) = decide(&eqs, limits, start);
    Verdict { outcome, elapsed: start.elapsed(), stats }
}

/// Values tried, in order, when fixing a variable.
const TRIAL_VALUES: [i64; 5] = [0, 1, -1, 2, -2];

/// Greedy specialization guided by images modulo one prime.
struct Specializer<'a> {
    gens: Vec<Polynomial>,
    order: MonomialOrder,
    trial: Limits,
    prime: u64,
    deadline: Option<Instant>,
    fixed: Vec<(usize, Rational)>,
    image: Option<PrimeImage>,
    names: &'a dyn Fn(usize) -> String,
}

enum Trial {
    Unit,
    Accepted(Option<PrimeImage>),
}

impl Specializer<'_> {
    fn late(&self) -> bool {
        matches!(self.deadline, Some(d) if Instant::now() > d)
    }

    fn try_fix(&self, v: usize, value: &Rational) -> (Vec<Polynomial>, Trial) {
        let gens: Vec<Polynomial> = self.gens.iter().map(|g| g.evaluate_partial(&[(v, value.clone())])).filter(|g| !g.is_zero()).collect();
        if gens.iter().any(|g| g.is_constant()) {
            return (gens, Trial::Unit);
        }
        let trial = match groebner_mod_prime(&gens, &self.order, &self.trial, self.prime) {
            Ok(Some(im)) if im.is_unit() => Trial::Unit,
            Ok(im) => Trial::Accepted(im),
            // unknown: keep it and let later steps or the exact run decide
            Err(_) => Trial::Accepted(None),
        };
        (gens, trial)
    }

    /// Fixes `v` to the first trial value that is not refuted modulo the
    /// prime. Returns whether a value was fixed.
    fn fix(&mut self, v: usize) -> bool {
        for value in TRIAL_VALUES.map(int) {
            if self.late() {
                return false;
            }
            let (gens, trial) = self.try_fix(v, &value);
            if let Trial::Accepted(im) = trial {
                self.gens = gens;
                self.fixed.push((v, value));
                self.image = im;
                return true;
            }
        }
        false
    }

    fn free(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|v| !self.fixed.iter().any(|(w, _)| w == v)).collect()
    }

    fn specialization(&self) -> Vec<(String, Rational)> {
        self.fixed.iter().map(|(v, x)| ((self.names)(*v), x.clone())).collect()
    }
}

/// Trial runs get a twentieth of the time budget; the whole walk stops at
/// `deadline`.
fn specializer<'a>(gens: Vec<Polynomial>, limits: &Limits, deadline: Instant, names: &'a dyn Fn(usize) -> String) -> Specializer<'a> {
    let n = gens.first().map_or(0, |g| g.ring().nvars());
    let budget = limits.max_time.unwrap_or(DEFAULT_BUDGET);
    let trial = Limits { max_time: Some(budget / 20), ..limits.clone() };
    // a prime dividing no denominator in practice; a `None` image only
    // costs guidance
    let prime = large_primes().next().unwrap();
    let image = groebner_mod_prime(&gens, &MonomialOrder::degrevlex(n), &trial, prime).ok().flatten();
    Specializer { gens, order: MonomialOrder::degrevlex(n), trial, prime, deadline: Some(deadline), fixed: Vec::new(), image, names }
}

/// Time budget for the specialization walks when the limits set none.
const DEFAULT_BUDGET: Duration = Duration::from_secs(60);

/// [`check`], and when that runs out of resources, a search for a
/// specialization of some variables to small integers whose exact Gröbner
/// basis is not `{1}`. A specialized system with a solution gives a solution
/// of the original one, so this can only ever prove consistency.
///
/// The whole run stays within `limits.max_time`: a quarter for the plain
/// check, up to half for choosing values, the rest for the exact basis.
pub fn certify(sys: &EquationSystem, limits: &Limits) -> Verdict {
    let start = Instant::now();
    let budget = limits.max_time.unwrap_or(DEFAULT_BUDGET);
    let first = check(sys, &Limits { max_time: Some(budget / 4), ..limits.clone() });
    let Outcome::ResourceLimit(why) = &first.outcome else { return first };
    let (ring, eqs) = sys.live_system();
    let n = ring.nvars();
    let names = |v: usize| ring.name(v).to_string();
    let mut sp = specializer(eqs, limits, start + budget / 2, &names);
    for v in 0..n {
        if sp.late() {
            break;
        }
        if sp.image.as_ref().is_some_and(|im| im.determined(v).is_some()) {
            continue;
        }
        if sp.fix(v) && sp.image.as_ref().is_some_and(|im| im.is_zero_dimensional(&sp.free(n), &sp.order)) {
            break;
        }
    }
    let full = Limits { max_time: Some(budget), ..limits.clone() };
    if !sp.fixed.is_empty() {
        if let Some(lim) = remaining(&full, start) {
            if let (Outcome::Consistent { basis, .. }, stats) = decide(&sp.gens, &lim, Instant::now()) {
                let outcome = Outcome::Consistent { basis, specialization: sp.specialization() };
                return Verdict { outcome, elapsed: start.elapsed(), stats };
            }
        }
    }
    let why = format!("{why}; no specialization certified consistency");
    Verdict { outcome: Outcome::ResourceLimit(why), elapsed: start.elapsed(), stats: first.stats }
}

/// Best effort rational point of the system: fixes variables to small
/// integers while the image modulo a prime stays proper, reads the remaining
/// values off an exact basis, and checks the point by substitution.
///
/// Returns values for every parameter of the system's ring, eliminated ones
/// included.
pub fn find_witness(sys: &EquationSystem, limits: &Limits) -> Option<Vec<Rational>> {
    if sys.is_marked_inconsistent() {
        return None;
    }
    let (ring, eqs) = sys.live_system();
    let n = ring.nvars();
    let names = |v: usize| ring.name(v).to_string();
    let mut values: Vec<Option<Rational>> = vec![None; n];
    if !eqs.is_empty() {
        let deadline = Instant::now() + limits.max_time.unwrap_or(DEFAULT_BUDGET) / 2;
        let mut sp = specializer(eqs, limits, deadline, &names);
        for v in 0..n {
            if sp.image.as_ref().is_some_and(|im| im.determined(v).is_some()) {
                continue;
            }
            if !sp.fix(v) {
                return None;
            }
        }
        for (v, x) in &sp.fixed {
            values[*v] = Some(x.clone());
        }
        let start = Instant::now();
        let (outcome, _) = decide(&sp.gens, &remaining(limits, start)?, start);
        let Outcome::Consistent { basis, .. } = outcome else { return None };
        for v in sp.free(n) {
            values[v] = Some(linear_value(&basis, v)?);
        }
    }
    let live: Vec<Rational> = values.into_iter().map(|v| v.unwrap_or_else(|| int(0))).collect();
    let point = sys.complete_point(&live);
    sys.satisfied_by(&point).then_some(point)
}

/// `a` when `x_v − a` is in the basis.
fn linear_value(basis: &GroebnerBasis, v: usize) -> Option<Rational> {
    basis.generators().iter().find_map(|g| {
        let terms = g.terms();
        let lin = terms.iter().find(|(m, _)| m.pure_power_of() == Some((v, 1)))?;
        let rest: Vec<_> = terms.iter().filter(|(m, _)| *m != lin.0).collect();
        match rest.as_slice() {
            [] => Some(int(0)),
            [(m, c)] if m.is_one() => Some(-(c / &lin.1)),
            _ => None,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// The equation dump format.
    Native,
    /// Dense coefficient rows over the monomials of degree at most 2.
    MqStyle,
}

/// Renders the system for an external solver. `MqStyle` requires every
/// equation to have degree at most 2.
///
/// `MqStyle` layout: a header line `# mq-style system: <n> variables, <m>
/// equations`, a `# variables:` line, then one row per equation of
/// space-separated `p/q` coefficients over the monomials `x_i x_j` (`i ≤ j`,
/// lexicographic), then `x_1 … x_n`, then the constant: graded lex order,
/// highest degree first.
pub fn export(sys: &EquationSystem, format: ExportFormat) -> Result<String, Error> {
    match format {
        ExportFormat::Native => Ok(crate::equations::dump(sys)),
        ExportFormat::MqStyle => mq_style(sys),
    }
}

fn mq_style(sys: &EquationSystem) -> Result<String, Error> {
    let (ring, eqs) = sys.live_system();
    let n = ring.nvars();
    if let Some(e) = eqs.iter().find(|e| e.total_degree() > 2) {
        return Err(Error::Invalid(format!("mq_style export needs degree at most 2, found degree {}", e.total_degree())));
    }
    let mut columns = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut e = vec![0; n];
            e[i] += 1;
            e[j] += 1;
            columns.push(crate::ring::Monomial::new(e));
        }
    }
    columns.extend((0..n).map(|i| crate::ring::Monomial::var(n, i, 1)));
    columns.push(crate::ring::Monomial::one(n));
    let mut out = String::new();
    writeln!(out, "# mq-style system: {n} variables, {} equations", eqs.len()).unwrap();
    let names: Vec<&str> = (0..n).map(|i| ring.name(i)).collect();
    writeln!(out, "# variables: {}", names.join(" ")).unwrap();
    for e in &eqs {
        let row: Vec<String> = columns.iter().map(|m| e.coefficient(m).to_string()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub max_rank: usize,
    pub shift_bound: Rational,
    /// Extract only the `sharp · flat` block.
    pub half: bool,
    pub limits: Limits,
    /// Linear substitutions allowed per elimination round.
    pub max_passes: usize,
    /// Candidates evaluated concurrently.
    pub jobs: usize,
    /// Live parameters above which the symbolic quantum dimensions are not
    /// attempted and the candidate is reported as resource limited.
    pub helper_bound: usize,
    pub witness: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_rank: 1,
            shift_bound: int(1),
            half: true,
            limits: Limits::default(),
            max_passes: usize::MAX,
            jobs: 1,
            helper_bound: 40,
            witness: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    /// Position in the enumeration, from 0.
    pub index: usize,
    pub spec: String,
    /// Parameters and equations as extracted.
    pub extracted: (usize, usize),
    /// Parameters and equations after elimination, before the helpers.
    pub residual: (usize, usize),
    /// The system handed to the consistency check.
    pub stats: SystemStats,
    pub verdict: Verdict,
    /// Values of the ansatz parameters at a verified solution.
    pub witness: Option<Vec<(String, Rational)>>,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "#{} {}: extracted {} vars {} eqs, residual {} vars {} eqs, checked {} vars {} eqs: {}",
            self.index,
            self.spec,
            self.extracted.0,
            self.extracted.1,
            self.residual.0,
            self.residual.1,
            self.stats.parameters,
            self.stats.equations,
            self.verdict
        )?;
        if let Some(w) = &self.witness {
            let nonzero: Vec<String> = w.iter().filter(|(_, x)| !num_traits::Zero::is_zero(x)).map(|(v, x)| format!("{v}={x}")).collect();
            write!(f, "\n  witness: {}", if nonzero.is_empty() { "all zero".to_string() } else { nonzero.join(", ") })?;
        }
        Ok(())
    }
}

/// The pipeline for one ansatz: extract, eliminate, add the nonvanishing
/// helpers, eliminate again, certify.
pub fn evaluate(index: usize, spec: &AnsatzSpec, options: &SearchOptions) -> Result<SearchReport, Error> {
    let start = Instant::now();
    let gmf = build_generic(spec)?;
    let sys = extract(&gmf, options.half);
    let extracted = (sys.parameter_count(), sys.len());
    let reduced = linear_eliminate(&sys, options.max_passes);
    let residual = (reduced.parameter_count(), reduced.len());
    let report = |sys: &EquationSystem, outcome: Outcome, witness| SearchReport {
        index,
        spec: spec.to_string(),
        extracted,
        residual,
        stats: stats(sys),
        verdict: Verdict { outcome, elapsed: start.elapsed(), stats: RunStats::default() },
        witness,
    };
    if reduced.is_marked_inconsistent() {
        return Ok(report(&reduced, Outcome::Inconsistent, None));
    }
    if reduced.parameter_count() > options.helper_bound {
        let why = format!("{} live parameters exceed the helper bound {}", reduced.parameter_count(), options.helper_bound);
        return Ok(report(&reduced, Outcome::ResourceLimit(why), None));
    }
    let with_helpers = linear_eliminate(&append_nonvanishing(&reduced, &gmf)?, options.max_passes);
    let mut verdict = certify(&with_helpers, &options.limits);
    verdict.elapsed = start.elapsed();
    let witness = if options.witness && verdict.outcome.is_consistent() {
        find_witness(&with_helpers, &options.limits).and_then(|point| verified_witness(&gmf, &point))
    } else {
        None
    };
    Ok(SearchReport { index, spec: spec.to_string(), extracted, residual, stats: stats(&with_helpers), verdict, witness })
}

/// Keeps the ansatz coordinates of `point` if they give a factorization with
/// both quantum dimensions nonzero.
fn verified_witness(gmf: &GenericMF, point: &[Rational]) -> Option<Vec<(String, Rational)>> {
    let values = &point[..gmf.parameters.len()];
    let mf = gmf.specialize(values);
    if !verify_factorization(&mf).is_verified() {
        return None;
    }
    let engine = QdimEngine::new(&gmf.pair, gmf.pair.ring()).ok()?;
    for side in [Side::Left, Side::Right] {
        if engine.quantum_dimension(&mf, side).ok()?.is_zero() {
            return None;
        }
    }
    Some(gmf.parameters.iter().cloned().zip(values.iter().cloned()).collect())
}

/// How a search ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchEnd {
    /// Index of the first consistent candidate.
    Found(usize),
    /// Every candidate was decided inconsistent or some were.
    Exhausted,
    /// No candidate got a verdict.
    AllResourceLimited,
}

#[derive(Debug, Clone)]
pub struct SearchSummary {
    pub warning: Option<String>,
    pub candidates: usize,
    pub end: SearchEnd,
}

/// Warning for potentials with different central charges, which cannot be
/// orbifold equivalent.
pub fn central_charge_warning(pair: &TensorRingPair) -> Option<String> {
    (!pair.central_charges_agree()).then(|| {
        format!(
            "warning: central charges differ ({} vs {}); the potentials cannot be orbifold equivalent",
            pair.left().central_charge(),
            pair.right().central_charge()
        )
    })
}

/// Runs [`evaluate`] over `specs` in order, reporting each result through
/// `on_report` in enumeration order, and stops after the first consistent
/// candidate.
pub fn search_specs(
    specs: impl IntoIterator<Item = AnsatzSpec>,
    options: &SearchOptions,
    mut on_report: impl FnMut(&SearchReport),
) -> Result<(usize, SearchEnd), Error> {
    let mut specs = specs.into_iter().enumerate().peekable();
    let (mut count, mut limited) = (0usize, 0usize);
    let jobs = options.jobs.max(1);
    while specs.peek().is_some() {
        let batch: Vec<(usize, AnsatzSpec)> = specs.by_ref().take(jobs).collect();
        let results: Vec<Result<SearchReport, Error>> = if jobs == 1 {
            batch.iter().map(|(i, s)| evaluate(*i, s, options)).collect()
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = batch.iter().map(|(i, s)| scope.spawn(move || evaluate(*i, s, options))).collect();
                handles.into_iter().map(|h| h.join().expect("candidate evaluation panicked")).collect()
            })
        };
        for r in results {
            let r = r?;
            on_report(&r);
            count += 1;
            match r.verdict.outcome {
                Outcome::Consistent { .. } => return Ok((count, SearchEnd::Found(r.index))),
                Outcome::ResourceLimit(_) => limited += 1,
                Outcome::Inconsistent => {}
            }
        }
    }
    let end = if count > 0 && limited == count { SearchEnd::AllResourceLimited } else { SearchEnd::Exhausted };
    Ok((count, end))
}

/// The bounded search: every ansatz from [`enumerate_specs`] up to
/// `max_rank` and `shift_bound`, after a central charge check that only
/// warns.
pub fn search(pair: &TensorRingPair, options: &SearchOptions, on_report: impl FnMut(&SearchReport)) -> Result<SearchSummary, Error> {
    let warning = central_charge_warning(pair);
    let specs = enumerate_specs(pair, options.max_rank, &options.shift_bound);
    let (candidates, end) = search_specs(specs, options, on_report)?;
    Ok(SearchSummary { warning, candidates, end })
}
