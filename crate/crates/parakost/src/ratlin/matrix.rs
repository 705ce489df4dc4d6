use alloc::vec::Vec;
use core::fmt;

use super::subspace::Echelon;
use super::{Rational, SparseVec, Subspace};

/// Returned by the solvers when the right-hand side is not in the column space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Infeasible;

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("INFEASIBLE")
    }
}

impl core::error::Error for Infeasible {}

/// Dense exact matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
        }
        f.write_str("]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: alloc::vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let s = out.get(i, j) + a * b;
                        out.set(i, j, s);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, x.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn add(&self, o: &RationalMatrix) -> RationalMatrix {
        self.add_scaled(&Rational::one(), o)
    }

    pub fn sub(&self, o: &RationalMatrix) -> RationalMatrix {
        self.add_scaled(&-Rational::one(), o)
    }

    /// `self + c * o`.
    pub fn add_scaled(&self, c: &Rational, o: &RationalMatrix) -> RationalMatrix {
        let mut out = self.clone();
        out.add_scaled_assign(c, o);
        out
    }

    pub fn add_scaled_assign(&mut self, c: &Rational, o: &RationalMatrix) {
        assert!(self.rows == o.rows && self.cols == o.cols, "shape mismatch");
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> RationalMatrix {
        RationalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        let c = self.cols;
        self.data.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(k, x)| (k / c, k % c, x))
    }

    fn sparse_columns(&self) -> Vec<SparseVec> {
        (0..self.cols).map(|j| SparseVec::from_dense(&self.column(j))).collect()
    }

    /// Reduced row echelon form (zero rows at the bottom) and rank.
    pub fn rref(&self) -> (RationalMatrix, usize) {
        let s = Subspace::from_rows(self);
        let mut out = Self::zeros(self.rows, self.cols);
        for (i, r) in s.basis().iter().enumerate() {
            for (j, x) in r.iter() {
                out.set(i, j, x.clone());
            }
        }
        (out, s.dim())
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// `{x : self · x = 0}`.
    pub fn kernel_basis(&self) -> Subspace {
        LinearMap::from_columns(self.rows, self.sparse_columns()).kernel()
    }

    /// Some `x` with `self · x = b`.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>, Infeasible> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let x = LinearMap::from_columns(self.rows, self.sparse_columns()).solve(&SparseVec::from_dense(b))?;
        Ok(x.to_dense(self.cols))
    }
}

/// Linear map ℚ^cols → ℚ^rows stored by sparse columns (images of the
/// standard basis vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    rows: usize,
    columns: Vec<SparseVec>,
}

impl LinearMap {
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        assert!(columns.iter().all(|c| c.support_bound() <= rows), "column longer than codomain");
        LinearMap { rows, columns }
    }

    /// Tabulates `f` on the standard basis of ℚ^cols.
    pub fn tabulate(rows: usize, cols: usize, mut f: impl FnMut(usize) -> SparseVec) -> Self {
        Self::from_columns(rows, (0..cols).map(&mut f).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in x.iter() {
            out = out.add_scaled(c, &self.columns[j]);
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> LinearMap {
        assert_eq!(inner.rows, self.cols(), "shape mismatch");
        LinearMap::from_columns(self.rows, inner.columns.iter().map(|c| self.apply(c)).collect())
    }

    pub fn add(&self, o: &LinearMap) -> LinearMap {
        assert!(self.rows == o.rows && self.cols() == o.cols(), "shape mismatch");
        LinearMap::from_columns(self.rows, self.columns.iter().zip(&o.columns).map(|(a, b)| a.add(b)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn to_dense(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.rows, self.cols());
        for (j, c) in self.columns.iter().enumerate() {
            for (i, x) in c.iter() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn kernel(&self) -> Subspace {
        let mut e = Echelon::new();
        let mut ker = Vec::new();
        for (j, c) in self.columns.iter().enumerate() {
            if let Some(combo) = e.insert(c.clone(), SparseVec::unit(j)) {
                ker.push(combo);
            }
        }
        Subspace::span(self.cols(), ker.iter())
    }

    pub fn image(&self) -> Subspace {
        Subspace::span(self.rows, self.columns.iter())
    }

    /// Image of a subspace of the domain.
    pub fn image_of(&self, s: &Subspace) -> Subspace {
        assert_eq!(s.ambient_dim(), self.cols(), "shape mismatch");
        let imgs: Vec<SparseVec> = s.basis().iter().map(|v| self.apply(v)).collect();
        Subspace::span(self.rows, imgs.iter())
    }

    /// `{x : self · x ∈ target}`.
    pub fn preimage(&self, target: &Subspace) -> Subspace {
        assert_eq!(target.ambient_dim(), self.rows, "shape mismatch");
        let reduced = self.columns.iter().map(|c| target.reduce(c)).collect();
        LinearMap::from_columns(self.rows, reduced).kernel()
    }

    /// Restriction to `s` is injective.
    pub fn is_injective_on(&self, s: &Subspace) -> bool {
        self.image_of(s).dim() == s.dim()
    }

    pub fn solve(&self, b: &SparseVec) -> Result<SparseVec, Infeasible> {
        let mut e = Echelon::new();
        for (j, c) in self.columns.iter().enumerate() {
            e.insert(c.clone(), SparseVec::unit(j));
        }
        let (rest, combo) = e.reduce(b.clone(), SparseVec::new());
        if rest.is_zero() {
            Ok(combo.neg())
        } else {
            Err(Infeasible)
        }
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new();
        for c in &self.columns {
            e.insert(c.clone(), SparseVec::new());
        }
        e.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn rref_examples() {
        let (r, k) = RationalMatrix::identity(3).rref();
        assert_eq!((r, k), (RationalMatrix::identity(3), 3));
        let (r, k) = RationalMatrix::from_ints(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r, RationalMatrix::from_ints(&[&[1, 2], &[0, 0]]));
        assert_eq!(k, 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(RationalMatrix::identity(2).kernel_basis().is_zero());
        let k = RationalMatrix::from_ints(&[&[1, 1]]).kernel_basis();
        assert_eq!(k, Subspace::span(2, [SparseVec::from_dense(&[q(1), q(-1)])].iter()));
    }

    #[test]
    fn solve_examples() {
        let x = RationalMatrix::identity(2).solve(&[q(3), Rational::new(-1, 2)]).unwrap();
        assert_eq!(x, alloc::vec![q(3), Rational::new(-1, 2)]);
        let a = RationalMatrix::from_ints(&[&[1, 1], &[2, 2]]);
        assert_eq!(a.solve(&[q(1), q(3)]), Err(Infeasible));
    }

    #[test]
    fn solve_returns_a_solution() {
        let a = RationalMatrix::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let b = [q(6), q(12), q(2)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b.to_vec());
    }
}
