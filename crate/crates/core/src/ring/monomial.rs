use std::cmp::Ordering;
use std::fmt;

/// Dense exponent vector, one entry per ring variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Monomial(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn divide_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// The single variable this monomial is a power of, if any.
    pub fn pure_power_of(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    /// Projection onto the variables selected by `mask`.
    pub fn select(&self, mask: &[bool]) -> (Monomial, Monomial) {
        let mut inside = vec![0; self.0.len()];
        let mut outside = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            if mask[i] {
                inside[i] = e;
            } else {
                outside[i] = e;
            }
        }
        (Monomial(inside), Monomial(outside))
    }

    pub(crate) fn exponents_mut(&mut self) -> &mut Vec<u32> {
        &mut self.0
    }
}

/// Graded reverse lexicographic comparison with `x_1 > x_2 > … > x_n`.
pub fn degrevlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.0.iter().zip(&b.0).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrevlex_examples() {
        // x^2 > xy > y^2 > xz > yz > z^2 in degree two
        let m = |e: [u32; 3]| Monomial::new(e.to_vec());
        let seq = [m([2, 0, 0]), m([1, 1, 0]), m([0, 2, 0]), m([1, 0, 1]), m([0, 1, 1]), m([0, 0, 2])];
        for w in seq.windows(2) {
            assert_eq!(degrevlex_cmp(&w[0], &w[1]), Ordering::Greater);
        }
        assert_eq!(degrevlex_cmp(&m([0, 0, 1]), &m([1, 1, 0])), Ordering::Less);
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = Monomial::new(vec![2, 0, 1]);
        let b = Monomial::new(vec![3, 1, 1]);
        assert!(a.divides(&b));
        assert_eq!(a.divide_into(&b), Some(Monomial::new(vec![1, 1, 0])));
        assert_eq!(a.lcm(&Monomial::new(vec![0, 2, 3])), Monomial::new(vec![2, 2, 3]));
        assert_eq!(Monomial::new(vec![0, 4, 0]).pure_power_of(), Some((1, 4)));
        assert_eq!(b.pure_power_of(), None);
    }
}
