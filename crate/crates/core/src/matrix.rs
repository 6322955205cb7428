//! Dense matrices over a field and over a polynomial ring.

use std::fmt;
use std::sync::Arc;

use crate::ring::{GradedRing, Polynomial};
use crate::scalar::Field;

/// Solves `a · x = b`. Returns `None` unless the solution exists and is
/// unique.
pub fn solve_linear<C: Field>(a: &[Vec<C>], b: &[C]) -> Option<Vec<C>> {
    let n = a.first().map_or(0, |r| r.len());
    let m = a.len();
    if b.len() != m {
        return None;
    }
    let mut rows: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..n {
        let Some(p) = (pivot_row..m).find(|&r| !rows[r][col].is_zero()) else {
            return None;
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].inverse();
        for x in rows[pivot_row].iter_mut() {
            *x = x.clone() * &inv;
        }
        for r in 0..m {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for k in col..=n {
                    let d = rows[pivot_row][k].clone() * &f;
                    rows[r][k] = rows[r][k].clone() - d;
                }
            }
        }
        pivot_row += 1;
    }
    if rows[n..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    Some(rows[..n].iter().map(|r| r[n].clone()).collect())
}

/// Square-or-rectangular matrix of polynomials over one ring.
#[derive(Clone, PartialEq)]
pub struct PolyMatrix<C: Field = crate::scalar::Rational> {
    ring: Arc<GradedRing>,
    rows: usize,
    cols: usize,
    data: Vec<Polynomial<C>>,
}

impl<C: Field> fmt::Debug for PolyMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join("; "))?;
        }
        write!(f, "]")
    }
}

impl<C: Field> PolyMatrix<C> {
    pub fn zeros(ring: &Arc<GradedRing>, rows: usize, cols: usize) -> Self {
        PolyMatrix { ring: ring.clone(), rows, cols, data: vec![Polynomial::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Arc<GradedRing>, n: usize) -> Self {
        Self::scalar(&Polynomial::one(ring), n)
    }

    /// `p · Id_n`.
    pub fn scalar(p: &Polynomial<C>, n: usize) -> Self {
        let mut m = Self::zeros(p.ring(), n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(ring: &Arc<GradedRing>, rows: Vec<Vec<Polynomial<C>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        PolyMatrix { ring: ring.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<C> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial<C>) {
        self.data[i * self.cols + j] = p;
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Polynomial<C>)> {
        self.data.iter().enumerate().map(move |(k, p)| (k / self.cols, k % self.cols, p))
    }

    pub fn map(&self, f: impl Fn(&Polynomial<C>) -> Polynomial<C>) -> Self {
        PolyMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Polynomial::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ring, self.cols, self.rows);
        for (i, j, p) in self.entries() {
            t.set(j, i, p.clone());
        }
        t
    }

    /// Panics on a shape mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shapes do not chain");
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero(&self.ring);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        PolyMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, p: &Polynomial<C>) -> Self {
        self.map(|q| q * p)
    }

    pub fn trace(&self) -> Polynomial<C> {
        (0..self.rows.min(self.cols)).fold(Polynomial::zero(&self.ring), |acc, i| &acc + self.get(i, i))
    }

    /// Fraction-free Bareiss elimination; every division is exact.
    pub fn determinant(&self) -> Polynomial<C> {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Polynomial::one(&self.ring);
        }
        let mut a: Vec<Vec<Polynomial<C>>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = false;
        let mut prev = Polynomial::one(&self.ring);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = !sign;
                    }
                    None => return Polynomial::zero(&self.ring),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = Polynomial::zero(&self.ring);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign {
            -d
        } else {
            d
        }
    }

    /// Matrix with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let mut rows = Vec::with_capacity(self.rows - 1);
        for r in (0..self.rows).filter(|&r| r != i) {
            rows.push((0..self.cols).filter(|&c| c != j).map(|c| self.get(r, c).clone()).collect());
        }
        if rows.is_empty() {
            return Self::zeros(&self.ring, 0, 0);
        }
        Self::from_rows(&self.ring, rows)
    }

    /// `adj(M)` with `M · adj(M) = det(M) · Id`.
    pub fn adjugate(&self) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        let mut out = Self::zeros(&self.ring, n, n);
        if n == 1 {
            out.set(0, 0, Polynomial::one(&self.ring));
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                let d = self.minor(i, j).determinant();
                out.set(j, i, if (i + j) % 2 == 0 { d } else { -d });
            }
        }
        out
    }
}
