//! "Most general" factorizations: every entry is the full span of monomials
//! of the grading its position demands, one fresh parameter per monomial.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{AnsatzError, ParseError};
use crate::matrix::PolyMatrix;
use crate::mf::{flat_from_adjugate, parse_layout, FlatLayout, MatrixFactorization, SuperModule, TensorRingPair};
use crate::ring::{monomials_of_grading, parse_polynomial, GradedRing, Monomial, Polynomial};
use crate::scalar::{lcm_of_denominators, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Sharp,
    Flat,
}

impl Block {
    pub fn name(self) -> &'static str {
        match self {
            Block::Sharp => "sharp",
            Block::Flat => "flat",
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `(n_j − n_i + 1)_{ij}` for row shifts `n_i` and column shifts `n_j`.
pub fn entry_grading_matrix(rows: &[Rational], cols: &[Rational]) -> Vec<Vec<Rational>> {
    rows.iter().map(|ni| cols.iter().map(|nj| nj - ni + Rational::one()).collect()).collect()
}

/// Recovers `(even, odd)` shifts from the two grading blocks, with the first
/// even shift pinned to 0. Both blocks must be consistent with them.
pub fn shifts_from_gradings(sharp: &[Vec<Rational>], flat: &[Vec<Rational>]) -> Result<(Vec<Rational>, Vec<Rational>), AnsatzError> {
    let (re, ro) = (sharp.len(), sharp.first().map_or(0, Vec::len));
    if re == 0 || ro == 0 {
        return Err(AnsatzError::EmptyShifts);
    }
    let one = Rational::one();
    let odd: Vec<Rational> = sharp[0].iter().map(|g| g - &one).collect();
    let even: Vec<Rational> = sharp.iter().map(|row| &odd[0] - &row[0] + &one).collect();
    for (block, given, want) in
        [(Block::Sharp, sharp, entry_grading_matrix(&even, &odd)), (Block::Flat, flat, entry_grading_matrix(&odd, &even))]
    {
        if given.len() != want.len() {
            return Err(AnsatzError::SeedShape(format!("{block} grading block has {} rows", given.len())));
        }
        for (i, (g, w)) in given.iter().zip(&want).enumerate() {
            if g.len() != w.len() {
                return Err(AnsatzError::SeedShape(format!("{block} grading row {i} has {} entries", g.len())));
            }
            if let Some(j) = g.iter().zip(w).position(|(a, b)| a != b) {
                return Err(AnsatzError::InconsistentGradings { block: block.name(), row: i, col: j });
            }
        }
    }
    Ok((even, odd))
}

/// Reads a grading file: the matrix layout with rational cells.
pub fn parse_grading_file(text: &str) -> Result<(Vec<Rational>, Vec<Rational>), AnsatzError> {
    let layout = parse_layout(text)?;
    let table = |rows: &[Vec<String>]| -> Result<Vec<Vec<Rational>>, ParseError> {
        rows.iter().map(|r| r.iter().map(|c| parse_rational(c)).collect()).collect()
    };
    let FlatLayout::Rows(flat) = &layout.flat else {
        return Err(ParseError::line(0, "a grading file needs an explicit flat block").into());
    };
    shifts_from_gradings(&table(&layout.sharp)?, &table(flat)?)
}

/// One seeded entry.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedCell {
    /// `_`: forced zero, even where monomials exist.
    Zero,
    /// `?`: the full generic span.
    Free,
    /// A polynomial copied verbatim.
    Fixed(Polynomial),
    /// `expr + ?`: the polynomial plus one parameter for every monomial of
    /// the right grading not already present in it.
    Perturbed(Polynomial),
}

impl SeedCell {
    fn fixed_part(&self, ring: &Arc<GradedRing>) -> Polynomial {
        match self {
            SeedCell::Fixed(p) | SeedCell::Perturbed(p) => p.clone(),
            SeedCell::Zero | SeedCell::Free => Polynomial::zero(ring),
        }
    }
}

/// Partial matrices for the inspired-guess workflow. Cells live in the pair
/// ring (no parameters).
#[derive(Debug, Clone, PartialEq)]
pub struct Seed {
    pub sharp: Vec<Vec<SeedCell>>,
    pub flat: Vec<Vec<SeedCell>>,
    pub shifts: Option<(Vec<Rational>, Vec<Rational>)>,
}

impl Seed {
    /// Seed files use the matrix layout; cells are `_`, `?`, a polynomial,
    /// or `<polynomial> + ?`. After `flat adjugate <h>`, `adj` stands for
    /// the matching entry of `adj(S) / h`, where `S` collects the fixed
    /// parts of the sharp cells. Without a cell block the flat is exactly
    /// that matrix.
    pub fn parse(text: &str, ring: &Arc<GradedRing>) -> Result<Seed, AnsatzError> {
        let layout = parse_layout(text)?;
        let sharp = cell_rows(&layout.sharp, ring, None)?;
        let flat = match &layout.flat {
            FlatLayout::Rows(rows) => cell_rows(rows, ring, None)?,
            FlatLayout::Adjugate { h, cells } => {
                let fixed = PolyMatrix::from_rows(ring, sharp.iter().map(|r| r.iter().map(|c| c.fixed_part(ring)).collect()).collect());
                let adj = flat_from_adjugate(&fixed, &parse_polynomial(h, ring)?)?;
                match cells {
                    Some(rows) => cell_rows(rows, ring, Some(&adj))?,
                    None => (0..adj.rows()).map(|i| (0..adj.cols()).map(|j| SeedCell::Fixed(adj.get(i, j).clone())).collect()).collect(),
                }
            }
        };
        Ok(Seed { sharp, flat, shifts: layout.shifts })
    }

    pub fn rank_even(&self) -> usize {
        self.sharp.len()
    }

    pub fn rank_odd(&self) -> usize {
        self.flat.len()
    }

    /// Marks the listed positions as forced zeros.
    pub fn force_zero(&mut self, positions: &[(Block, usize, usize)]) {
        for &(b, i, j) in positions {
            match b {
                Block::Sharp => self.sharp[i][j] = SeedCell::Zero,
                Block::Flat => self.flat[i][j] = SeedCell::Zero,
            }
        }
    }
}

fn cell_rows(rows: &[Vec<String>], ring: &Arc<GradedRing>, adj: Option<&PolyMatrix>) -> Result<Vec<Vec<SeedCell>>, ParseError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, c)| parse_cell(c, ring, adj.map(|a| a.get(i, j)))).collect())
        .collect()
}

fn parse_cell(src: &str, ring: &Arc<GradedRing>, adj: Option<&Polynomial>) -> Result<SeedCell, ParseError> {
    let s = src.trim();
    match s {
        "_" => return Ok(SeedCell::Zero),
        "?" => return Ok(SeedCell::Free),
        _ => {}
    }
    let (body, perturbed) = match s.strip_suffix('?') {
        Some(rest) => match rest.trim_end().strip_suffix('+') {
            Some(b) => (b.trim(), true),
            None => return Err(ParseError::line(0, format!("`?` must be a separate last summand in `{s}`"))),
        },
        None => (s, false),
    };
    let p = if body == "adj" {
        adj.cloned().ok_or_else(|| ParseError::line(0, "`adj` needs `flat adjugate <h>`"))?
    } else {
        parse_polynomial(body, ring)?
    };
    Ok(if perturbed { SeedCell::Perturbed(p) } else { SeedCell::Fixed(p) })
}

/// Rank, shifts and optional seed for one ansatz.
#[derive(Debug, Clone)]
pub struct AnsatzSpec {
    pub pair: TensorRingPair,
    pub shifts_even: Vec<Rational>,
    pub shifts_odd: Vec<Rational>,
    pub seed: Option<Seed>,
    pub prefix: String,
}

impl AnsatzSpec {
    pub fn new(pair: TensorRingPair, shifts_even: Vec<Rational>, shifts_odd: Vec<Rational>) -> Result<Self, AnsatzError> {
        if shifts_even.is_empty() || shifts_odd.is_empty() {
            return Err(AnsatzError::EmptyShifts);
        }
        Ok(AnsatzSpec { pair, shifts_even, shifts_odd, seed: None, prefix: "c".into() })
    }

    pub fn with_seed(mut self, seed: Seed) -> Result<Self, AnsatzError> {
        let (re, ro) = (self.shifts_even.len(), self.shifts_odd.len());
        let shape_ok = seed.sharp.len() == re
            && seed.sharp.iter().all(|r| r.len() == ro)
            && seed.flat.len() == ro
            && seed.flat.iter().all(|r| r.len() == re);
        if !shape_ok {
            return Err(AnsatzError::SeedShape(format!("seed does not have rank ({re}|{ro})")));
        }
        self.seed = Some(seed);
        Ok(self)
    }

    pub fn with_prefix(mut self, prefix: impl Into<String>) -> Self {
        self.prefix = prefix.into();
        self
    }

    pub fn module(&self) -> SuperModule {
        SuperModule::new(self.shifts_even.clone(), self.shifts_odd.clone())
    }

    pub fn gradings(&self, block: Block) -> Vec<Vec<Rational>> {
        match block {
            Block::Sharp => entry_grading_matrix(&self.shifts_even, &self.shifts_odd),
            Block::Flat => entry_grading_matrix(&self.shifts_odd, &self.shifts_even),
        }
    }

    fn cell(&self, block: Block, i: usize, j: usize) -> SeedCell {
        match (&self.seed, block) {
            (Some(s), Block::Sharp) => s.sharp[i][j].clone(),
            (Some(s), Block::Flat) => s.flat[i][j].clone(),
            (None, _) => SeedCell::Free,
        }
    }
}

impl fmt::Display for AnsatzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(
            f,
            "rank {}|{} shifts {}|{}",
            self.shifts_even.len(),
            self.shifts_odd.len(),
            list(&self.shifts_even),
            list(&self.shifts_odd)
        )?;
        if self.seed.is_some() {
            write!(f, " seeded")?;
        }
        Ok(())
    }
}

/// Where a parameter sits: it multiplies `monomial` (in the pair ring) in
/// one entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Provenance {
    pub block: Block,
    pub row: usize,
    pub col: usize,
    pub monomial: Monomial,
}

/// A factorization ansatz over the pair ring extended by its parameters,
/// which follow the pair variables in ring order.
#[derive(Debug, Clone)]
pub struct GenericMF {
    pub pair: TensorRingPair,
    pub mf: MatrixFactorization,
    pub parameters: Vec<String>,
    pub provenance: Vec<Provenance>,
}

impl GenericMF {
    pub fn ring(&self) -> &Arc<GradedRing> {
        self.mf.ring()
    }

    /// Ring index of parameter `k`.
    pub fn parameter_index(&self, k: usize) -> usize {
        self.pair.ring().nvars() + k
    }

    /// Sets every parameter; the result lives in the pair ring.
    pub fn specialize(&self, values: &[Rational]) -> MatrixFactorization {
        assert_eq!(values.len(), self.parameters.len());
        let vals: Vec<(usize, Rational)> = values.iter().enumerate().map(|(k, v)| (self.parameter_index(k), v.clone())).collect();
        let ring = self.pair.ring();
        let at = self.mf.map_entries(|p| p.evaluate_partial(&vals));
        at.embed(ring).expect("all parameters evaluated")
    }
}

/// Builds the ansatz. Unseeded entries are full spans; an empty span is a
/// forced zero.
pub fn build_generic(spec: &AnsatzSpec) -> Result<GenericMF, AnsatzError> {
    let base = spec.pair.ring();
    let module = spec.module();
    let (re, ro) = (spec.shifts_even.len(), spec.shifts_odd.len());
    // first pass: fixed parts and monomial lists, in naming order
    let mut layout: Vec<(Block, usize, usize, Polynomial, Vec<Monomial>)> = Vec::new();
    let mut provenance = Vec::new();
    for (block, rows, cols) in [(Block::Sharp, re, ro), (Block::Flat, ro, re)] {
        let gradings = spec.gradings(block);
        for i in 0..rows {
            for j in 0..cols {
                let q = &gradings[i][j];
                let cell = spec.cell(block, i, j);
                let fixed = cell.fixed_part(base);
                if !fixed.is_zero() && fixed.homogeneous_grading().as_ref() != Some(q) {
                    return Err(AnsatzError::SeedGrading { block: block.name(), row: i, col: j, expected: Box::new(q.clone()) });
                }
                let monos: Vec<Monomial> = match cell {
                    SeedCell::Zero | SeedCell::Fixed(_) => Vec::new(),
                    SeedCell::Free => monomials_of_grading(base, q),
                    SeedCell::Perturbed(ref p) => {
                        monomials_of_grading(base, q).into_iter().filter(|m| p.coefficient(m).is_zero()).collect()
                    }
                };
                provenance.extend(monos.iter().map(|m| Provenance { block, row: i, col: j, monomial: m.clone() }));
                layout.push((block, i, j, fixed, monos));
            }
        }
    }
    let parameters: Vec<String> = (1..=provenance.len()).map(|k| format!("{}{k}", spec.prefix)).collect();
    let ring = base.with_parameters(parameters.iter().cloned())?;
    let n0 = base.nvars();
    let mut sharp = PolyMatrix::zeros(&ring, re, ro);
    let mut flat = PolyMatrix::zeros(&ring, ro, re);
    let mut k = 0;
    for (block, i, j, fixed, monos) in layout {
        let mut terms: Vec<(Monomial, Rational)> = fixed.embed(&ring).expect("pair variables embed").into_terms();
        for m in monos {
            let mut e = m.exponents().to_vec();
            e.resize(ring.nvars(), 0);
            e[n0 + k] = 1;
            terms.push((Monomial::new(e), Rational::one()));
            k += 1;
        }
        let entry = Polynomial::from_terms(&ring, terms);
        match block {
            Block::Sharp => sharp.set(i, j, entry),
            Block::Flat => flat.set(i, j, entry),
        }
    }
    let mf = MatrixFactorization::new(module, sharp, flat, spec.pair.target().clone())?;
    Ok(GenericMF { pair: spec.pair.clone(), mf, parameters, provenance })
}

/// Diagonal enumeration of rank-`(m|m)` specs for `m = 1..=max_rank`.
///
/// Shifts lie on the grid `k / L`, `L` the lcm of the weight denominators,
/// with `|shift| ≤ shift_bound`. Even and odd shift lists are multisets
/// written in descending order; the largest even shift is pinned to 0,
/// which quotients out common translation. Within a rank, specs are ordered
/// lexicographically by (even list, odd list), each list compared
/// entrywise in increasing order.
pub fn enumerate_specs(pair: &TensorRingPair, max_rank: usize, shift_bound: &Rational) -> SpecEnumerator {
    let weights: Vec<Rational> = (0..pair.ring().nvars()).map(|i| pair.ring().weight(i).clone()).collect();
    let l = lcm_of_denominators(&weights);
    let steps = (shift_bound * Rational::from_integer(l.clone())).floor().to_integer();
    let steps: i64 = steps.try_into().unwrap_or(0).max(0);
    let at = |k: i64| Rational::new(BigInt::from(k), l.clone());
    let odd_grid: Vec<Rational> = (-steps..=steps).map(at).collect();
    let even_grid: Vec<Rational> = (-steps..=0).map(at).collect();
    SpecEnumerator { pair: pair.clone(), max_rank, even_grid, odd_grid, rank: 1, even: vec![0; 0], odd: vec![0; 1], done: max_rank == 0 }
}

pub struct SpecEnumerator {
    pair: TensorRingPair,
    max_rank: usize,
    even_grid: Vec<Rational>,
    odd_grid: Vec<Rational>,
    rank: usize,
    /// Indices into `even_grid` of the even shifts after the pinned 0.
    even: Vec<usize>,
    odd: Vec<usize>,
    done: bool,
}

/// Steps a non-increasing index sequence to its lexicographic successor.
fn next_multiset(idx: &mut [usize], n: usize) -> bool {
    for p in (0..idx.len()).rev() {
        let cap = if p == 0 { n - 1 } else { idx[p - 1] };
        if idx[p] < cap {
            idx[p] += 1;
            for q in &mut idx[p + 1..] {
                *q = 0;
            }
            return true;
        }
    }
    false
}

impl Iterator for SpecEnumerator {
    type Item = AnsatzSpec;

    fn next(&mut self) -> Option<AnsatzSpec> {
        if self.done {
            return None;
        }
        let mut even = vec![Rational::zero()];
        even.extend(self.even.iter().map(|&k| self.even_grid[k].clone()));
        let odd = self.odd.iter().map(|&k| self.odd_grid[k].clone()).collect();
        let spec = AnsatzSpec::new(self.pair.clone(), even, odd).expect("nonempty shifts");
        if !next_multiset(&mut self.odd, self.odd_grid.len()) {
            self.odd.iter_mut().for_each(|k| *k = 0);
            if !next_multiset(&mut self.even, self.even_grid.len()) {
                self.rank += 1;
                if self.rank > self.max_rank {
                    self.done = true;
                } else {
                    self.even = vec![0; self.rank - 1];
                    self.odd = vec![0; self.rank];
                }
            }
        }
        Some(spec)
    }
}
