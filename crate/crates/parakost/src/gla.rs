//! sl(m) with a block grading.
//!
//! A composition `(c_1, …, c_r)` of `m` splits indices into consecutive
//! blocks; `E_ab` has degree `block(b) - block(a)` and diagonal matrices have
//! degree 0. The parabolic `p` is the block upper triangular part.
//!
//! Basis of sl(m): strictly lower `E_ab` row-major, then strictly upper
//! `E_ab` row-major, then `H_a = E_aa - E_{a+1,a+1}` for `a = 0..m-1`. Indices are 0-based
//! throughout the crate.

use alloc::format;
use alloc::vec::Vec;

use crate::ratlin::{Rational, RationalMatrix, SparseVec, Subspace};
use crate::report::Report;

/// Elements of sl(m) are plain m×m matrices.
pub type Mat = RationalMatrix;

pub fn elementary(m: usize, a: usize, b: usize) -> Mat {
    let mut x = Mat::zeros(m, m);
    x.set(a, b, Rational::one());
    x
}

pub fn bracket(x: &Mat, y: &Mat) -> Mat {
    x.mul(y).sub(&y.mul(x))
}

pub fn trace_pairing(x: &Mat, y: &Mat) -> Rational {
    let mut s = Rational::zero();
    for (i, k, a) in x.nonzeros() {
        let b = y.get(k, i);
        if !b.is_zero() {
            s += a * b;
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    m: usize,
    blocks: Vec<usize>,
    block_of: Vec<usize>,
    offdiag: Vec<(usize, usize)>,
    index: Vec<usize>,
}

impl GradedLieAlgebra {
    pub fn new(blocks: &[usize]) -> Self {
        assert!(blocks.len() >= 2 && blocks.iter().all(|&c| c > 0), "need at least two nonempty blocks");
        let block_of: Vec<usize> =
            blocks.iter().enumerate().flat_map(|(i, &c)| core::iter::repeat_n(i, c)).collect();
        let m = block_of.len();
        let lower = (0..m).flat_map(|a| (0..a).map(move |b| (a, b)));
        let upper = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b)));
        let offdiag: Vec<(usize, usize)> = lower.chain(upper).collect();
        let mut index = alloc::vec![usize::MAX; m * m];
        for (i, &(a, b)) in offdiag.iter().enumerate() {
            index[a * m + b] = i;
        }
        GradedLieAlgebra { m, blocks: blocks.to_vec(), block_of, offdiag, index }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn depth(&self) -> i32 {
        self.blocks.len() as i32 - 1
    }

    pub fn dim(&self) -> usize {
        self.m * self.m - 1
    }

    pub fn block_of(&self, a: usize) -> usize {
        self.block_of[a]
    }

    /// Degree of the position `(a, b)`.
    pub fn degree(&self, a: usize, b: usize) -> i32 {
        self.block_of[b] as i32 - self.block_of[a] as i32
    }

    pub fn elementary(&self, a: usize, b: usize) -> Mat {
        elementary(self.m, a, b)
    }

    fn offdiag_index(&self, a: usize, b: usize) -> usize {
        self.index[a * self.m + b]
    }

    /// Basis index of `E_ab` (`a != b`).
    pub fn index_of(&self, a: usize, b: usize) -> usize {
        assert!(a != b);
        self.offdiag_index(a, b)
    }

    /// Basis index of `H_a`.
    pub fn h_index(&self, a: usize) -> usize {
        self.m * (self.m - 1) + a
    }

    /// The position `(a, b)` of an off-diagonal basis element, or `None` for `H_a`.
    pub fn position(&self, i: usize) -> Option<(usize, usize)> {
        self.offdiag.get(i).copied()
    }

    pub fn basis_element(&self, i: usize) -> Mat {
        match self.position(i) {
            Some((a, b)) => self.elementary(a, b),
            None => {
                let a = i - self.m * (self.m - 1);
                let mut x = Mat::zeros(self.m, self.m);
                x.set(a, a, Rational::one());
                x.set(a + 1, a + 1, -Rational::one());
                x
            }
        }
    }

    pub fn basis_degree(&self, i: usize) -> i32 {
        self.position(i).map_or(0, |(a, b)| self.degree(a, b))
    }

    /// Coordinates of a traceless matrix in the basis.
    pub fn coords(&self, x: &Mat) -> SparseVec {
        debug_assert!(x.trace().is_zero(), "not traceless");
        let m = self.m;
        let mut pairs = Vec::new();
        let mut h = Rational::zero();
        for a in 0..m {
            for b in 0..m {
                let v = x.get(a, b);
                if a != b && !v.is_zero() {
                    pairs.push((self.offdiag_index(a, b), v.clone()));
                }
            }
            if a + 1 < m {
                h += x.get(a, a);
                if !h.is_zero() {
                    pairs.push((self.h_index(a), h.clone()));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }

    pub fn from_coords(&self, v: &SparseVec) -> Mat {
        let mut x = Mat::zeros(self.m, self.m);
        for (i, c) in v.iter() {
            match self.position(i) {
                Some((a, b)) => x.set(a, b, c.clone()),
                None => {
                    let a = i - self.m * (self.m - 1);
                    let d = x.get(a, a) + c;
                    x.set(a, a, d);
                    let d = x.get(a + 1, a + 1) - c;
                    x.set(a + 1, a + 1, d);
                }
            }
        }
        x
    }

    /// Projection onto the degree-`k` component.
    pub fn grading_component(&self, x: &Mat, k: i32) -> Mat {
        let mut y = Mat::zeros(self.m, self.m);
        for (a, b, v) in x.nonzeros() {
            if self.degree(a, b) == k {
                y.set(a, b, v.clone());
            }
        }
        y
    }

    /// Basis coordinates whose degree satisfies `pred`.
    pub fn degree_subspace(&self, pred: impl Fn(i32) -> bool) -> Subspace {
        Subspace::coordinate(self.dim(), (0..self.dim()).filter(|&i| pred(self.basis_degree(i))))
    }

    pub fn parabolic(&self) -> Subspace {
        self.degree_subspace(|d| d >= 0)
    }

    pub fn p_plus(&self) -> Subspace {
        self.degree_subspace(|d| d > 0)
    }

    pub fn p_minus(&self) -> Subspace {
        self.degree_subspace(|d| d < 0)
    }

    pub fn quotient_basis(&self) -> QuotientBasis {
        let mut positions = Vec::new();
        for a in 0..self.m {
            for b in 0..self.m {
                if self.degree(a, b) < 0 {
                    positions.push((a, b));
                }
            }
        }
        QuotientBasis { m: self.m, positions, degrees: Vec::new() }.with_degrees(self)
    }
}

/// Ordered basis `X^i` of g/p (classes of lower-block `E_ab`, row-major) and
/// its dual basis `Z_i = E_ba` of p_+ under the trace pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientBasis {
    m: usize,
    positions: Vec<(usize, usize)>,
    degrees: Vec<i32>,
}

impl QuotientBasis {
    fn with_degrees(mut self, g: &GradedLieAlgebra) -> Self {
        self.degrees = self.positions.iter().map(|&(a, b)| g.degree(a, b)).collect();
        self
    }

    pub fn dim(&self) -> usize {
        self.positions.len()
    }

    pub fn position(&self, i: usize) -> (usize, usize) {
        self.positions[i]
    }

    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.positions.iter().position(|&p| p == (a, b))
    }

    /// Degree of `X^i` (negative).
    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    /// The lower-block lift of `X^i`.
    pub fn lift(&self, i: usize) -> Mat {
        let (a, b) = self.positions[i];
        elementary(self.m, a, b)
    }

    pub fn lift_vec(&self, v: &SparseVec) -> Mat {
        let mut x = Mat::zeros(self.m, self.m);
        for (i, c) in v.iter() {
            let (a, b) = self.positions[i];
            x.set(a, b, c.clone());
        }
        x
    }

    pub fn dual(&self, i: usize) -> Mat {
        let (a, b) = self.positions[i];
        elementary(self.m, b, a)
    }

    /// Class of `x` in g/p.
    pub fn project(&self, x: &Mat) -> SparseVec {
        SparseVec::from_pairs(self.positions.iter().enumerate().map(|(i, &(a, b))| (i, x.get(a, b).clone())))
    }

    /// Coefficients of `z` ∈ p_+ in the dual basis, i.e. `i ↦ trace(z · X^i)`.
    pub fn dual_coords(&self, z: &Mat) -> SparseVec {
        SparseVec::from_pairs(self.positions.iter().enumerate().map(|(i, &(a, b))| (i, z.get(b, a).clone())))
    }
}

/// Exhaustive structure checks: antisymmetry and Jacobi on basis triples,
/// tracelessness, the grading axiom on basis pairs, generation of `p_-` by
/// `p_{-1}`, and the trace pairing facts.
pub fn verify_structure(g: &GradedLieAlgebra, check: &str, n: usize) -> Report {
    let mut r = Report::new(check, n);
    let d = g.dim();
    let basis: Vec<Mat> = (0..d).map(|i| g.basis_element(i)).collect();
    let mut table = Vec::with_capacity(d * d);
    for x in &basis {
        for y in &basis {
            table.push(bracket(x, y));
        }
    }
    let br = |i: usize, j: usize| &table[i * d + j];
    for i in 0..d {
        for j in 0..d {
            let z = br(i, j);
            if !r.check(z.add(br(j, i)).is_zero() && z.trace().is_zero(), || format!("antisymmetry/trace at ({i},{j})")) {
                return r;
            }
            let want = g.basis_degree(i) + g.basis_degree(j);
            let ok = z.nonzeros().all(|(a, b, _)| g.degree(a, b) == want);
            if !r.check(ok, || format!("[x_{i}, x_{j}] leaves degree {want}")) {
                return r;
            }
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let mut s = bracket(&basis[i], br(j, k));
                s.add_scaled_assign(&Rational::one(), &bracket(&basis[j], br(k, i)));
                s.add_scaled_assign(&Rational::one(), &bracket(&basis[k], br(i, j)));
                if !r.check(s.is_zero(), || format!("Jacobi fails on ({i},{j},{k})")) {
                    return r;
                }
            }
        }
    }
    // p_- is generated by p_{-1}
    let minus_one: Vec<usize> = (0..d).filter(|&i| g.basis_degree(i) == -1).collect();
    let mut span = g.degree_subspace(|k| k == -1);
    loop {
        let mut gens = span.basis().to_vec();
        for v in span.basis() {
            let x = g.from_coords(v);
            for &i in &minus_one {
                gens.push(g.coords(&bracket(&basis[i], &x)));
            }
        }
        let next = Subspace::span(d, gens);
        if next == span {
            break;
        }
        span = next;
    }
    r.check(span == g.p_minus(), || format!("p_-1 generates dim {} of p_- (dim {})", span.dim(), g.p_minus().dim()));
    let q = g.quotient_basis();
    for i in 0..q.dim() {
        for j in 0..q.dim() {
            let t = trace_pairing(&q.dual(i), &q.lift(j));
            let want = if i == j { Rational::one() } else { Rational::zero() };
            r.check(t == want, || format!("duality fails at ({i},{j})"));
        }
    }
    let plus: Vec<usize> = (0..d).filter(|&i| g.basis_degree(i) > 0).collect();
    r.check(Subspace::span(d, (0..q.dim()).map(|i| g.coords(&q.dual(i)))) == g.p_plus(), || "span Z_i != p_+".into());
    for &i in &plus {
        for j in (0..d).filter(|&j| g.basis_degree(j) >= 0) {
            if !r.check(trace_pairing(&basis[i], &basis[j]).is_zero(), || format!("trace(x_{i} x_{j}) != 0")) {
                return r;
            }
        }
    }
    r.detail("dim", d);
    r.detail("dim_g_mod_p", q.dim());
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_triple_and_disjoint_indices() {
        let g = GradedLieAlgebra::new(&[1, 1, 2]);
        let h = g.elementary(0, 0).sub(&g.elementary(1, 1));
        assert_eq!(bracket(&g.elementary(0, 1), &g.elementary(1, 0)), h);
        assert!(bracket(&g.elementary(0, 1), &g.elementary(0, 2)).is_zero());
    }

    #[test]
    fn degrees_in_path_grading() {
        let g = GradedLieAlgebra::new(&[1, 1, 3]);
        assert_eq!(g.degree(0, 2), 2);
        assert_eq!(g.degree(1, 0), -1);
        assert_eq!(g.degree(2, 1), -1);
        assert_eq!(g.degree(3, 0), -2);
        let x = g.elementary(0, 2);
        assert_eq!(g.grading_component(&x, 2), x);
        assert!(g.grading_component(&x, 1).is_zero());
        let d = g.basis_element(g.h_index(2));
        assert_eq!(g.grading_component(&d, 0), d);
    }

    #[test]
    fn coordinates_round_trip() {
        let g = GradedLieAlgebra::new(&[2, 3]);
        for i in 0..g.dim() {
            let x = g.basis_element(i);
            assert_eq!(g.coords(&x), SparseVec::unit(i));
            assert_eq!(g.from_coords(&SparseVec::unit(i)), x);
        }
    }

    #[test]
    fn structure_suite_small() {
        for blocks in [[1, 1, 2], [2, 1, 1]] {
            let r = verify_structure(&GradedLieAlgebra::new(&blocks), "jacobi", 2);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn basis_order_lower_then_upper() {
        let g = GradedLieAlgebra::new(&[1, 2]);
        assert_eq!(g.position(0), Some((1, 0)));
        assert_eq!(g.position(3), Some((0, 1)));
        assert_eq!(g.position(6), None);
        for i in 0..6 {
            let (a, b) = g.position(i).unwrap();
            assert_eq!(g.index_of(a, b), i);
        }
    }

    #[test]
    fn dual_pairs() {
        let g = GradedLieAlgebra::new(&[1, 1, 2]);
        let q = g.quotient_basis();
        assert_eq!(q.position(0), (1, 0));
        assert_eq!(q.dual(0), g.elementary(0, 1));
        assert_eq!(GradedLieAlgebra::new(&[2, 3]).quotient_basis().dim(), 6);
        for i in 0..q.dim() {
            for j in 0..q.dim() {
                let t = trace_pairing(&q.dual(i), &q.lift(j));
                assert_eq!(t, if i == j { Rational::one() } else { Rational::zero() });
            }
        }
    }
}
