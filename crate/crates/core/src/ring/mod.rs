//! Graded polynomial rings over an exact field.
//!
//! A [`GradedRing`] is an ordered list of variables. Geometric variables carry
//! a positive rational weight; parameter variables (the unknown coefficients of
//! an ansatz) carry weight zero and are ignored by every grading computation.

mod grading;
mod monomial;
mod parse;
mod polynomial;
mod potential;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

pub use grading::{monomials_of_grading, monomials_of_grading_in};
pub use monomial::{degrevlex_cmp, Monomial};
pub use parse::parse_polynomial;
pub(crate) use polynomial::same_ring;
pub use polynomial::Polynomial;
pub use potential::{berglund_huebsch_transpose, euler_defect, quasi_homogeneous_degree, Potential};

use crate::error::RingError;
use crate::scalar::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariableKind {
    Geometric,
    Parameter,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableSpec {
    pub name: String,
    pub weight: Rational,
    pub kind: VariableKind,
}

impl VariableSpec {
    pub fn geometric(name: impl Into<String>, weight: Rational) -> Self {
        VariableSpec { name: name.into(), weight, kind: VariableKind::Geometric }
    }

    pub fn parameter(name: impl Into<String>) -> Self {
        VariableSpec { name: name.into(), weight: Rational::zero(), kind: VariableKind::Parameter }
    }

    pub fn is_parameter(&self) -> bool {
        self.kind == VariableKind::Parameter
    }
}

/// Polynomial ring `k[x_1, …, x_n]` with a fixed variable order.
///
/// Two rings are equal iff their ordered variable lists are equal.
#[derive(Clone)]
pub struct GradedRing {
    vars: Vec<VariableSpec>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedRing {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for GradedRing {}

impl fmt::Debug for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for v in &self.vars {
            match v.kind {
                VariableKind::Geometric => l.entry(&format_args!("{}:{}", v.name, v.weight)),
                VariableKind::Parameter => l.entry(&format_args!("{}:param", v.name)),
            };
        }
        l.finish()
    }
}

impl GradedRing {
    pub fn new(vars: Vec<VariableSpec>) -> Result<Arc<Self>, RingError> {
        let mut index = HashMap::with_capacity(vars.len());
        for (i, v) in vars.iter().enumerate() {
            match v.kind {
                VariableKind::Geometric if !v.weight.is_positive() => return Err(RingError::NonPositiveWeight(v.name.clone())),
                VariableKind::Parameter if !v.weight.is_zero() => return Err(RingError::ParameterWeight(v.name.clone())),
                _ => {}
            }
            if index.insert(v.name.clone(), i).is_some() {
                return Err(RingError::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Arc::new(GradedRing { vars, index }))
    }

    /// Ring of geometric variables from `(name, weight)` pairs.
    pub fn geometric<S: Into<String>>(vars: impl IntoIterator<Item = (S, Rational)>) -> Result<Arc<Self>, RingError> {
        Self::new(vars.into_iter().map(|(n, w)| VariableSpec::geometric(n, w)).collect())
    }

    /// Ring of parameter variables only.
    pub fn parameters<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>, RingError> {
        Self::new(names.into_iter().map(VariableSpec::parameter).collect())
    }

    /// This ring with `names` appended as parameter variables.
    pub fn with_parameters<S: Into<String>>(&self, names: impl IntoIterator<Item = S>) -> Result<Arc<Self>, RingError> {
        let mut vars = self.vars.clone();
        vars.extend(names.into_iter().map(VariableSpec::parameter));
        Self::new(vars)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.vars
    }

    pub fn variable(&self, i: usize) -> &VariableSpec {
        &self.vars[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.vars[i].weight
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn is_parameter(&self, i: usize) -> bool {
        self.vars[i].is_parameter()
    }

    pub fn geometric_indices(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| !self.is_parameter(i)).collect()
    }

    pub fn parameter_indices(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.is_parameter(i)).collect()
    }

    /// Grading of a monomial; parameter exponents contribute nothing.
    pub fn grading(&self, m: &Monomial) -> Rational {
        let mut g = Rational::zero();
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 && !self.is_parameter(i) {
                g += &self.vars[i].weight * Rational::from_integer(e.into());
            }
        }
        g
    }

    /// Sub-ring on the given variables, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Arc<Self> {
        let vars = indices.iter().map(|&i| self.vars[i].clone()).collect();
        Self::new(vars).expect("restriction of a valid ring is valid")
    }
}
