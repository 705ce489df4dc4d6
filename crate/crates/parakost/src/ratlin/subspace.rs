use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::borrow::Borrow;
use core::fmt;

use super::{RationalMatrix, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

impl fmt::Display for DimensionMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ambient dimensions differ: {} vs {}", self.left, self.right)
    }
}

impl core::error::Error for DimensionMismatch {}

/// Incremental row echelon form keyed by pivot column. Each row optionally
/// carries the combination of inserted vectors that produced it.
#[derive(Clone, Default)]
pub(crate) struct Echelon {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` (and its tracked combination) against the stored rows.
    pub(crate) fn reduce(&self, mut v: SparseVec, mut combo: SparseVec) -> (SparseVec, SparseVec) {
        let mut pos = 0;
        while pos < v.nnz() {
            let (idx, c) = v.entries()[pos].clone();
            match self.rows.get(&idx) {
                Some((row, rc)) => {
                    let c = -c;
                    v = v.add_scaled(&c, row);
                    if !rc.is_zero() {
                        combo = combo.add_scaled(&c, rc);
                    }
                }
                None => pos += 1,
            }
        }
        (v, combo)
    }

    /// Inserts `v`; returns the reduced combination when `v` is dependent.
    pub(crate) fn insert(&mut self, v: SparseVec, combo: SparseVec) -> Option<SparseVec> {
        let (v, combo) = self.reduce(v, combo);
        match v.leading() {
            None => Some(combo),
            Some((p, lead)) => {
                let inv = lead.recip();
                let (v, combo) = (v.scale(&inv), combo.scale(&inv));
                self.rows.insert(p, (v, combo));
                None
            }
        }
    }

    /// Back-substitutes to reduced form and returns rows sorted by pivot.
    pub(crate) fn into_rref(mut self) -> Vec<SparseVec> {
        let keys: Vec<usize> = self.rows.keys().copied().collect();
        for &k in keys.iter().rev() {
            let mut r = self.rows[&k].0.clone();
            let mut pos = 1;
            while pos < r.nnz() {
                let (idx, c) = r.entries()[pos].clone();
                match self.rows.get(&idx) {
                    Some((row, _)) => r = r.add_scaled(&-c, row),
                    None => pos += 1,
                }
            }
            self.rows.get_mut(&k).unwrap().0 = r;
        }
        self.rows.into_values().map(|(v, _)| v).collect()
    }
}

/// A linear subspace of ℚ^ambient stored as its reduced row echelon basis.
/// Equal subspaces have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SparseVec>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {})", self.rows.len(), self.ambient)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::coordinate(ambient, 0..ambient)
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate<I: IntoIterator<Item = usize>>(ambient: usize, idx: I) -> Self {
        let mut ix: Vec<usize> = idx.into_iter().collect();
        ix.sort_unstable();
        ix.dedup();
        assert!(ix.last().is_none_or(|&i| i < ambient), "coordinate out of range");
        Subspace { ambient, rows: ix.into_iter().map(SparseVec::unit).collect() }
    }

    pub fn span<B: Borrow<SparseVec>, I: IntoIterator<Item = B>>(ambient: usize, vs: I) -> Self {
        let mut e = Echelon::new();
        for v in vs {
            let v = v.borrow();
            assert!(v.support_bound() <= ambient, "vector longer than ambient space");
            e.insert(v.clone(), SparseVec::new());
        }
        Subspace { ambient, rows: e.into_rref() }
    }

    pub fn from_rows(m: &RationalMatrix) -> Self {
        let rows: Vec<SparseVec> = (0..m.rows()).map(|i| SparseVec::from_dense(m.row(i))).collect();
        Self::span(m.cols(), rows.iter())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Canonical basis rows (reduced echelon form, sorted by pivot).
    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn basis_matrix(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.rows.len(), self.ambient);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r.iter() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.leading().unwrap().0)
    }

    fn row_at_pivot(&self, p: usize) -> Option<&SparseVec> {
        self.rows
            .binary_search_by_key(&p, |r| r.leading().unwrap().0)
            .ok()
            .map(|k| &self.rows[k])
    }

    /// Remainder of `v` after elimination against the basis; zero iff `v`
    /// lies in the subspace. Linear in `v` with kernel exactly this subspace.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut pos = 0;
        while pos < v.nnz() {
            let (idx, c) = v.entries()[pos].clone();
            match self.row_at_pivot(idx) {
                Some(row) => v = v.add_scaled(&-c, row),
                None => pos += 1,
            }
        }
        v
    }

    /// Coordinates of `v` in the canonical basis, if `v` is in the subspace.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let coeffs = SparseVec::from_pairs(
            self.rows.iter().enumerate().map(|(k, r)| (k, v.get(r.leading().unwrap().0))),
        );
        let mut back = SparseVec::new();
        for (k, c) in coeffs.iter() {
            back = back.add_scaled(c, &self.rows[k]);
        }
        (back == *v).then_some(coeffs)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        assert!(v.support_bound() <= self.ambient, "vector longer than ambient space");
        self.reduce(v).is_zero()
    }

    fn check(&self, o: &Subspace) -> Result<(), DimensionMismatch> {
        if self.ambient == o.ambient {
            Ok(())
        } else {
            Err(DimensionMismatch { left: self.ambient, right: o.ambient })
        }
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace, DimensionMismatch> {
        self.check(o)?;
        Ok(Self::span(self.ambient, self.rows.iter().chain(o.rows.iter())))
    }

    pub fn intersect(&self, o: &Subspace) -> Result<Subspace, DimensionMismatch> {
        self.check(o)?;
        let (small, large) = if self.dim() <= o.dim() { (self, o) } else { (o, self) };
        // Dependencies of the smaller basis on the larger one, read off in
        // terms of the smaller basis only.
        let p = large.dim();
        let mut e = Echelon::new();
        for (j, u) in large.rows.iter().enumerate() {
            e.insert(u.clone(), SparseVec::unit(j));
        }
        let mut common = Vec::new();
        for (j, v) in small.rows.iter().enumerate() {
            if let Some(combo) = e.insert(v.clone(), SparseVec::unit(p + j)) {
                let mut w = SparseVec::new();
                for (k, c) in combo.iter() {
                    if k >= p {
                        w = w.add_scaled(c, &small.rows[k - p]);
                    }
                }
                common.push(w);
            }
        }
        Ok(Self::span(self.ambient, common.iter()))
    }

    pub fn is_subspace_of(&self, o: &Subspace) -> Result<bool, DimensionMismatch> {
        self.check(o)?;
        Ok(self.rows.iter().all(|r| o.contains(r)))
    }

    /// True when the sum of the parts is direct.
    pub fn is_direct_sum(parts: &[&Subspace]) -> Result<bool, DimensionMismatch> {
        let Some(first) = parts.first() else { return Ok(true) };
        let mut acc = Subspace::zero(first.ambient);
        for p in parts {
            acc = acc.sum(p)?;
        }
        Ok(acc.dim() == parts.iter().map(|p| p.dim()).sum::<usize>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::Rational;

    fn v(xs: &[i64]) -> SparseVec {
        SparseVec::from_pairs(xs.iter().enumerate().map(|(i, &x)| (i, Rational::from_int(x))))
    }

    #[test]
    fn sum_and_intersection_of_coordinate_planes() {
        let e1 = Subspace::coordinate(3, [0]);
        let e2 = Subspace::coordinate(3, [1]);
        assert_eq!(e1.sum(&e2).unwrap(), Subspace::coordinate(3, [0, 1]));
        let a = Subspace::coordinate(3, [0, 1]);
        let b = Subspace::coordinate(3, [1, 2]);
        assert_eq!(a.intersect(&b).unwrap(), Subspace::coordinate(3, [1]));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert_eq!(a.sum(&b), Err(DimensionMismatch { left: 2, right: 3 }));
        assert!(a.intersect(&b).is_err());
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let a = Subspace::span(3, [v(&[1, 2, 3]), v(&[0, 1, 1])].iter());
        let b = Subspace::span(3, [v(&[1, 3, 4]), v(&[2, 5, 7])].iter());
        assert_eq!(a, b);
        assert!(a.contains(&v(&[3, 7, 10])));
        assert!(!a.contains(&v(&[0, 0, 1])));
        assert_eq!(a.coordinates(&v(&[3, 7, 10])).unwrap(), v(&[3, 7]));
    }
}
