use thiserror::Error;

use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
}

impl ParseError {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax { pos, msg: msg.into() }
    }

    pub(crate) fn line(line: usize, msg: impl Into<String>) -> Self {
        ParseError::Line { line, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RingError {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("geometric variable `{0}` must have positive weight")]
    NonPositiveWeight(String),
    #[error("parameter variable `{0}` must have weight 0")]
    ParameterWeight(String),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not quasi-homogeneous")]
    NotQuasiHomogeneous,
    #[error("potential must not contain parameter variable `{0}`")]
    ContainsParameter(String),
    #[error("infinite-dimensional Jacobian")]
    InfiniteJacobian,
    #[error("Jacobian quotient is zero")]
    TrivialJacobian,
    #[error("not of invertible type: {0}")]
    NotInvertible(String),
    #[error("exponent matrix is singular")]
    SingularExponentMatrix,
    #[error("rings differ")]
    RingMismatch,
    #[error("potentials have different degrees {} and {}", .0.0, .0.1)]
    DegreeMismatch(Box<(Rational, Rational)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("quotient is infinite-dimensional: no pure power of variable {0}")]
    InfiniteQuotient(usize),
    #[error("ideal is not supported at the origin (variable {0})")]
    NotLocal(usize),
    #[error("empty generator list")]
    NoGenerators,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("expected {expected} denominators, got {got}")]
    DenominatorCount { expected: usize, got: usize },
    #[error("denominator involves a variable outside the residue variables")]
    ForeignDenominator,
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("transformation matrix has wrong shape")]
    Shape,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MfError {
    #[error("block dimensions do not match: {0}")]
    Shape(String),
    #[error("determinant is not the square of the given polynomial")]
    NotASquare,
    #[error("adjugate entry not divisible by the target")]
    NotDivisible,
    #[error("entry ({block}, {row}, {col}) has grading {found}, expected {expected}")]
    Grading { block: &'static str, row: usize, col: usize, found: String, expected: Box<Rational> },
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnsatzError {
    #[error("shift lists must be nonempty")]
    EmptyShifts,
    #[error("seed shape: {0}")]
    SeedShape(String),
    #[error("seeded {block} entry ({row}, {col}) is not homogeneous of grading {expected}")]
    SeedGrading { block: &'static str, row: usize, col: usize, expected: Box<Rational> },
    #[error("grading matrices are not of the form n_j - n_i + 1 (at {block} ({row}, {col}))")]
    InconsistentGradings { block: &'static str, row: usize, col: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Mf(#[from] MfError),
}

/// Crate-level error used by the pipeline entry points.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Mf(#[from] MfError),
    #[error(transparent)]
    Ansatz(#[from] AnsatzError),
    #[error("{0}")]
    Invalid(String),
}
