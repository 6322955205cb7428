//! Graded matrix factorizations, supertraces and quantum dimensions.
//!
//! Block convention: `sharp` maps the odd part to the even part (`r+ × r-`),
//! `flat` maps the even part to the odd part (`r- × r+`), so that
//! `d = [[0, sharp], [flat, 0]]` in the basis (even, odd).

mod io;

use std::sync::Arc;

use num_traits::Zero;

pub use io::{format_matrix_file, parse_layout, parse_matrix_file, FlatLayout, Layout};

use crate::error::{MfError, RingError};
use crate::matrix::PolyMatrix;
use crate::residue::ResidueContext;
use crate::ring::{GradedRing, Polynomial, Potential, VariableSpec};
use crate::scalar::{int, Rational};

/// `R(n_1) ⊕ … ⊕ R(n_ℓ)`.
///
/// Shifts are kept in the order given: the grading matrix, and hence entry
/// positions, depend on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedFreeModule {
    pub shifts: Vec<Rational>,
}

impl GradedFreeModule {
    pub fn new(shifts: Vec<Rational>) -> Self {
        GradedFreeModule { shifts }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn translate(&self, delta: &Rational) -> Self {
        GradedFreeModule { shifts: self.shifts.iter().map(|s| s + delta).collect() }
    }

    pub fn is_sorted_descending(&self) -> bool {
        self.shifts.windows(2).all(|w| w[0] >= w[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuperModule {
    pub even: GradedFreeModule,
    pub odd: GradedFreeModule,
}

impl SuperModule {
    pub fn new(even: Vec<Rational>, odd: Vec<Rational>) -> Self {
        SuperModule { even: GradedFreeModule::new(even), odd: GradedFreeModule::new(odd) }
    }

    /// All shifts zero; used when gradings are irrelevant.
    pub fn ungraded(r_even: usize, r_odd: usize) -> Self {
        Self::new(vec![Rational::zero(); r_even], vec![Rational::zero(); r_odd])
    }

    pub fn translate(&self, delta: &Rational) -> Self {
        SuperModule { even: self.even.translate(delta), odd: self.odd.translate(delta) }
    }

    /// Required grading of `sharp[i][j]`: `n⁻_j − n⁺_i + 1`.
    pub fn sharp_grading(&self, i: usize, j: usize) -> Rational {
        &self.odd.shifts[j] - &self.even.shifts[i] + int(1)
    }

    /// Required grading of `flat[i][j]`: `n⁺_j − n⁻_i + 1`.
    pub fn flat_grading(&self, i: usize, j: usize) -> Rational {
        &self.even.shifts[j] - &self.odd.shifts[i] + int(1)
    }
}

/// Potentials `f` on the left and `g` on the right, with the joint ring
/// carrying the left variables followed by the right ones.
#[derive(Debug, Clone)]
pub struct TensorRingPair {
    left: Potential,
    right: Potential,
    ring: Arc<GradedRing>,
    target: Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl TensorRingPair {
    pub fn new(left: Potential, right: Potential) -> Result<Self, RingError> {
        let vars: Vec<VariableSpec> = left.ring().variables().iter().chain(right.ring().variables()).cloned().collect();
        let ring = GradedRing::new(vars)?;
        let target = &left.poly().embed(&ring).unwrap() - &right.poly().embed(&ring).unwrap();
        Ok(TensorRingPair { left, right, ring, target })
    }

    /// Validates both sides; their degrees under the given weights must agree.
    pub fn from_polynomials(f: &Polynomial, g: &Polynomial) -> Result<Self, RingError> {
        let df = crate::ring::quasi_homogeneous_degree(f)?;
        let dg = crate::ring::quasi_homogeneous_degree(g)?;
        if df != dg {
            return Err(RingError::DegreeMismatch(Box::new((df, dg))));
        }
        Self::new(Potential::validate(f)?, Potential::validate(g)?)
    }

    pub fn left(&self) -> &Potential {
        &self.left
    }

    pub fn right(&self) -> &Potential {
        &self.right
    }

    pub fn potential(&self, side: Side) -> &Potential {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Joint ring without parameters.
    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    /// `f ⊗ 1 − 1 ⊗ g` in the joint ring.
    pub fn target(&self) -> &Polynomial {
        &self.target
    }

    pub fn central_charges_agree(&self) -> bool {
        self.left.central_charge() == self.right.central_charge()
    }

    /// Indices in `ring` of the given side's variables, in declared order.
    pub fn side_indices(&self, side: Side, ring: &GradedRing) -> Vec<usize> {
        let p = self.potential(side);
        (0..p.ring().nvars()).map(|i| ring.index_of(p.ring().name(i)).expect("pair variable")).collect()
    }

    /// Jacobian generators of one side, moved into `ring`.
    pub fn side_jacobian(&self, side: Side, ring: &Arc<GradedRing>) -> Vec<Polynomial> {
        self.potential(side).jacobian_ideal().iter().map(|p| p.embed(ring).expect("pair variable")).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFactorization {
    pub module: SuperModule,
    pub sharp: PolyMatrix,
    pub flat: PolyMatrix,
    pub target: Polynomial,
}

impl MatrixFactorization {
    pub fn new(module: SuperModule, sharp: PolyMatrix, flat: PolyMatrix, target: Polynomial) -> Result<Self, MfError> {
        let (rp, rm) = (module.even.rank(), module.odd.rank());
        if (sharp.rows(), sharp.cols()) != (rp, rm) {
            return Err(MfError::Shape(format!("sharp is {}x{}, expected {rp}x{rm}", sharp.rows(), sharp.cols())));
        }
        if (flat.rows(), flat.cols()) != (rm, rp) {
            return Err(MfError::Shape(format!("flat is {}x{}, expected {rm}x{rp}", flat.rows(), flat.cols())));
        }
        let ring = sharp.ring();
        let target = target.embed(ring).ok_or_else(|| MfError::Shape("target outside the matrix ring".into()))?;
        let flat = if crate::ring::same_ring(flat.ring(), ring) { flat } else { flat.map(|p| p.embed(ring).expect("flat entries embed")) };
        Ok(MatrixFactorization { module, sharp, flat, target })
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        self.sharp.ring()
    }

    pub fn rank_even(&self) -> usize {
        self.module.even.rank()
    }

    pub fn rank_odd(&self) -> usize {
        self.module.odd.rank()
    }

    /// `[[0, sharp], [flat, 0]]`.
    pub fn differential(&self) -> PolyMatrix {
        let (rp, rm) = (self.rank_even(), self.rank_odd());
        let mut d = PolyMatrix::zeros(self.ring(), rp + rm, rp + rm);
        for (i, j, p) in self.sharp.entries() {
            d.set(i, rp + j, p.clone());
        }
        for (i, j, p) in self.flat.entries() {
            d.set(rp + i, j, p.clone());
        }
        d
    }

    pub fn map_entries(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        MatrixFactorization { module: self.module.clone(), sharp: self.sharp.map(&f), flat: self.flat.map(&f), target: self.target.clone() }
    }

    /// Moves everything into `ring`, matching variables by name.
    pub fn embed(&self, ring: &Arc<GradedRing>) -> Option<Self> {
        let e = |p: &Polynomial| p.embed(ring);
        let sharp = PolyMatrix::from_rows(
            ring,
            (0..self.sharp.rows()).map(|i| (0..self.sharp.cols()).map(|j| e(self.sharp.get(i, j))).collect()).collect::<Option<_>>()?,
        );
        let flat = PolyMatrix::from_rows(
            ring,
            (0..self.flat.rows()).map(|i| (0..self.flat.cols()).map(|j| e(self.flat.get(i, j))).collect()).collect::<Option<_>>()?,
        );
        Some(MatrixFactorization { module: self.module.clone(), sharp, flat, target: e(&self.target)? })
    }
}

/// Residuals `sharp·flat − target·Id` and `flat·sharp − target·Id`.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub sharp_flat: PolyMatrix,
    pub flat_sharp: PolyMatrix,
}

impl Verification {
    pub fn is_verified(&self) -> bool {
        self.sharp_flat.is_zero() && self.flat_sharp.is_zero()
    }
}

pub fn verify_factorization(mf: &MatrixFactorization) -> Verification {
    let t = -mf.target.clone();
    Verification {
        sharp_flat: mf.sharp.mul(&mf.flat).add(&PolyMatrix::scalar(&t, mf.rank_even())),
        flat_sharp: mf.flat.mul(&mf.sharp).add(&PolyMatrix::scalar(&t, mf.rank_odd())),
    }
}

/// Every nonzero entry must be quasi-homogeneous of the grading its position
/// demands; parameters carry weight zero.
pub fn check_gradings(mf: &MatrixFactorization) -> Result<(), MfError> {
    let ring = mf.ring();
    let blocks: [(&'static str, &PolyMatrix, &dyn Fn(usize, usize) -> Rational); 2] =
        [("sharp", &mf.sharp, &|i, j| mf.module.sharp_grading(i, j)), ("flat", &mf.flat, &|i, j| mf.module.flat_grading(i, j))];
    for (name, m, want) in blocks {
        for (i, j, p) in m.entries() {
            let expected = want(i, j);
            for (mono, _) in p.terms() {
                let g = ring.grading(mono);
                if g != expected {
                    return Err(MfError::Grading { block: name, row: i, col: j, found: g.to_string(), expected: Box::new(expected) });
                }
            }
        }
    }
    Ok(())
}

pub fn grading_matrix_check(mf: &MatrixFactorization) -> bool {
    check_gradings(mf).is_ok()
}

/// Trace of the even-even block minus trace of the odd-odd block; the first
/// `r_even` rows and columns are even.
pub fn supertrace(m: &PolyMatrix, r_even: usize) -> Result<Polynomial, MfError> {
    if !m.is_square() || r_even > m.rows() {
        return Err(MfError::Shape(format!("supertrace of a {}x{} matrix", m.rows(), m.cols())));
    }
    let mut acc = Polynomial::zero(m.ring());
    for i in 0..m.rows() {
        acc = if i < r_even { &acc + m.get(i, i) } else { &acc - m.get(i, i) };
    }
    Ok(acc)
}

/// `sharp` with `det(sharp) = h²` gives `flat = adj(sharp) / h`, so that
/// `sharp · flat = h · Id`.
pub fn flat_from_adjugate(sharp: &PolyMatrix, h: &Polynomial) -> Result<PolyMatrix, MfError> {
    if !sharp.is_square() {
        return Err(MfError::Shape("sharp must be square".into()));
    }
    if sharp.determinant() != h * h {
        return Err(MfError::NotASquare);
    }
    let adj = sharp.adjugate();
    let mut out = PolyMatrix::zeros(sharp.ring(), sharp.rows(), sharp.cols());
    for (i, j, p) in adj.entries() {
        out.set(i, j, p.div_exact(h).ok_or(MfError::NotDivisible)?);
    }
    Ok(out)
}

/// Quantum dimensions of factorizations over one ring: caches the residue
/// data of both sides.
pub struct QdimEngine<'a> {
    pair: &'a TensorRingPair,
    ring: Arc<GradedRing>,
    deriv_vars: Vec<usize>,
    sides: [(Vec<usize>, ResidueContext); 2],
}

impl<'a> QdimEngine<'a> {
    /// `ring` must contain the pair's variables (parameters may be added).
    pub fn new(pair: &'a TensorRingPair, ring: &Arc<GradedRing>) -> Result<Self, MfError> {
        let mut sides = Vec::with_capacity(2);
        for side in [Side::Left, Side::Right] {
            let vars = pair.side_indices(side, ring);
            let ctx = ResidueContext::new(ring, &pair.side_jacobian(side, ring), &vars)?;
            sides.push((vars, ctx));
        }
        let right = sides.pop().unwrap();
        let left = sides.pop().unwrap();
        let deriv_vars = left.0.iter().chain(&right.0).copied().collect();
        Ok(QdimEngine { pair, ring: ring.clone(), deriv_vars, sides: [left, right] })
    }

    /// `res(str(∂_{x_1}d ⋯ ∂_{x_m}d ∂_{y_1}d ⋯ ∂_{y_n}d) dx / ∂f)` for the
    /// chosen side, up to the global sign the definition leaves open.
    ///
    /// Products are reduced modulo the side's Jacobian ideal after every
    /// multiplication. When the factorization is graded and the central
    /// charges agree, every term carrying a variable of the other side has
    /// the wrong grading for a nonzero residue, so those variables are set to
    /// zero up front.
    pub fn quantum_dimension(&self, mf: &MatrixFactorization, side: Side) -> Result<Polynomial, MfError> {
        let mf = if crate::ring::same_ring(mf.ring(), &self.ring) {
            mf.clone()
        } else {
            mf.embed(&self.ring).ok_or_else(|| MfError::Shape("factorization outside the engine ring".into()))?
        };
        let (own, ctx) = match side {
            Side::Left => (&self.sides[0].0, &self.sides[0].1),
            Side::Right => (&self.sides[1].0, &self.sides[1].1),
        };
        let other: Vec<(usize, Rational)> = if self.pair.central_charges_agree() && grading_matrix_check(&mf) {
            self.deriv_vars.iter().filter(|v| !own.contains(v)).map(|&v| (v, Rational::zero())).collect()
        } else {
            Vec::new()
        };
        let d = mf.differential();
        let reduce = |m: &PolyMatrix| m.map(|p| ctx.reduce(&p.evaluate_partial(&other)));
        let mut acc: Option<PolyMatrix> = None;
        for &v in &self.deriv_vars {
            let dv = reduce(&d.map(|p| p.derivative(v)));
            acc = Some(match acc {
                None => dv,
                Some(a) => reduce(&a.mul(&dv)),
            });
        }
        let prod = acc.unwrap_or_else(|| PolyMatrix::identity(&self.ring, d.rows()));
        let st = supertrace(&prod, mf.rank_even())?;
        Ok(ctx.residue(&st))
    }
}

pub fn quantum_dimension(mf: &MatrixFactorization, pair: &TensorRingPair, side: Side) -> Result<Polynomial, MfError> {
    QdimEngine::new(pair, mf.ring())?.quantum_dimension(mf, side)
}

/// Translating every shift by `delta` leaves entries, and therefore both
/// quantum dimensions and the grading check, unchanged.
pub fn shift_invariance_check(mf: &MatrixFactorization, pair: &TensorRingPair, delta: &Rational) -> Result<bool, MfError> {
    let moved = MatrixFactorization { module: mf.module.translate(delta), ..mf.clone() };
    let engine = QdimEngine::new(pair, mf.ring())?;
    for side in [Side::Left, Side::Right] {
        if engine.quantum_dimension(mf, side)? != engine.quantum_dimension(&moved, side)? {
            return Ok(false);
        }
    }
    Ok(grading_matrix_check(mf) == grading_matrix_check(&moved))
}
