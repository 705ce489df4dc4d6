//! Chain spaces `L(Λ^k g/p, g)` with the Lie algebra differential, the
//! Kostant codifferential, the Kostant Laplacian and the Hodge splitting.
//!
//! A k-cochain is stored by its values on increasing k-tuples of the g/p
//! basis. As an element of `Λ^k p_+ ⊗ g`, `Z_{i_1}∧…∧Z_{i_k}` acts on
//! arguments by `(1/k!)·det(Z_{i_a}(X_b))`, which is the normalization under
//! which the wedge formula and the degree-2 lift formula for `∂*` agree.
//! Arguments of `∂` live in p_−, identified with g/p through the lower-block
//! elementary lifts.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::gla::{bracket, GradedLieAlgebra, Mat, QuotientBasis};
use crate::ratlin::{LinearMap, Rational, SparseVec, Subspace};
use crate::report::Report;
use crate::sample::Sampler;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Sorts a short index list in place, returning the permutation sign, or
/// `None` when an index repeats.
pub fn sort_with_sign(v: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

fn signed(s: i64) -> Rational {
    Rational::from_int(s)
}

/// Shared data for all cochains over one graded algebra.
pub struct ChainContext {
    alg: GradedLieAlgebra,
    quot: QuotientBasis,
    basis: Vec<Mat>,
    lifts: Vec<Mat>,
    duals: Vec<Mat>,
    /// `[X^i, X^j]` for the lifts, as g/p coordinates (p_− is a subalgebra).
    xx: Vec<Vec<SparseVec>>,
    /// `[Z_i, Z_j]` in dual coordinates.
    zz: Vec<Vec<SparseVec>>,
    tuples: Vec<Vec<Vec<usize>>>,
}

impl fmt::Debug for ChainContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainContext(sl({}), blocks {:?})", self.alg.m(), self.alg.blocks())
    }
}

pub const MAX_DEGREE: usize = 4;

impl ChainContext {
    pub fn new(blocks: &[usize]) -> Arc<Self> {
        let alg = GradedLieAlgebra::new(blocks);
        let quot = alg.quotient_basis();
        let d = quot.dim();
        let basis = (0..alg.dim()).map(|i| alg.basis_element(i)).collect();
        let lifts: Vec<Mat> = (0..d).map(|i| quot.lift(i)).collect();
        let duals: Vec<Mat> = (0..d).map(|i| quot.dual(i)).collect();
        let xx = (0..d)
            .map(|i| (0..d).map(|j| quot.project(&bracket(&lifts[i], &lifts[j]))).collect())
            .collect();
        let zz = (0..d)
            .map(|i| (0..d).map(|j| quot.dual_coords(&bracket(&duals[i], &duals[j]))).collect())
            .collect();
        let tuples = (0..=MAX_DEGREE).map(|k| combinations(d, k)).collect();
        Arc::new(ChainContext { alg, quot, basis, lifts, duals, xx, zz, tuples })
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.alg
    }

    pub fn quotient(&self) -> &QuotientBasis {
        &self.quot
    }

    pub fn dim_g(&self) -> usize {
        self.alg.dim()
    }

    pub fn dim_q(&self) -> usize {
        self.quot.dim()
    }

    pub fn tuples(&self, k: usize) -> &[Vec<usize>] {
        &self.tuples[k]
    }

    pub fn chain_dim(&self, k: usize) -> usize {
        self.tuples[k].len() * self.dim_g()
    }

    /// Lexicographic rank of an increasing tuple.
    pub fn tuple_rank(&self, t: &[usize]) -> usize {
        let (d, k) = (self.dim_q(), t.len());
        let mut rank = 0;
        let mut start = 0;
        for (i, &c) in t.iter().enumerate() {
            for v in start..c {
                rank += binomial(d - v - 1, k - i - 1);
            }
            start = c + 1;
        }
        rank
    }

    /// Coordinate index of (tuple rank, g-basis index) in `C^k`.
    pub fn coord(&self, tuple: usize, b: usize) -> usize {
        tuple * self.dim_g() + b
    }

    pub fn split_coord(&self, c: usize) -> (usize, usize) {
        (c / self.dim_g(), c % self.dim_g())
    }

    pub fn basis_matrix(&self, b: usize) -> &Mat {
        &self.basis[b]
    }

    pub fn lift(&self, i: usize) -> &Mat {
        &self.lifts[i]
    }

    pub fn dual(&self, i: usize) -> &Mat {
        &self.duals[i]
    }

    /// Total degree of the arguments of a tuple (sum of negative degrees).
    pub fn tuple_degree(&self, t: &[usize]) -> i32 {
        t.iter().map(|&i| self.quot.degree(i)).sum()
    }

    /// Coordinate subspace of `C^k` spanned by basis cochains `(tuple, b)` with
    /// `keep(tuple, b)`.
    pub fn block_subspace(&self, k: usize, keep: impl Fn(&[usize], usize) -> bool) -> Subspace {
        let mut idx = Vec::new();
        for (r, t) in self.tuples[k].iter().enumerate() {
            for b in 0..self.dim_g() {
                if keep(t, b) {
                    idx.push(self.coord(r, b));
                }
            }
        }
        Subspace::coordinate(self.chain_dim(k), idx)
    }

    /// `∂: C^k → C^{k+1}` as a matrix.
    pub fn partial_map(self: &Arc<Self>, k: usize) -> LinearMap {
        LinearMap::tabulate(self.chain_dim(k + 1), self.chain_dim(k), |c| {
            partial(&Cochain::basis_element(self, k, c)).coords()
        })
    }

    /// `∂*: C^k → C^{k-1}` as a matrix.
    pub fn costar_map(self: &Arc<Self>, k: usize) -> LinearMap {
        LinearMap::tabulate(self.chain_dim(k - 1), self.chain_dim(k), |c| {
            costar(&Cochain::basis_element(self, k, c)).coords()
        })
    }

    /// `□ = ∂∂* + ∂*∂` on `C^k`.
    pub fn laplacian_map(self: &Arc<Self>, k: usize) -> LinearMap {
        let down_up = self.partial_map(k - 1).compose(&self.costar_map(k));
        let up_down = self.costar_map(k + 1).compose(&self.partial_map(k));
        down_up.add(&up_down)
    }
}

fn combinations(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(d: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..d {
            cur.push(v);
            go(d, k, v + 1, cur, out);
            cur.pop();
        }
    }
    go(d, k, 0, &mut cur, &mut out);
    out
}

/// Alternating k-linear map `(g/p)^k → g`.
#[derive(Clone)]
pub struct Cochain {
    ctx: Arc<ChainContext>,
    degree: usize,
    values: Vec<Mat>,
}

impl PartialEq for Cochain {
    fn eq(&self, o: &Self) -> bool {
        self.degree == o.degree && self.ctx.alg == o.ctx.alg && self.values == o.values
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(degree {}", self.degree)?;
        for (t, v) in self.ctx.tuples[self.degree].iter().zip(&self.values) {
            if !v.is_zero() {
                write!(f, ", {t:?} ↦ {v:?}")?;
            }
        }
        f.write_str(")")
    }
}

impl Cochain {
    pub fn zero(ctx: &Arc<ChainContext>, degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE);
        let m = ctx.alg.m();
        let n = ctx.tuples[degree].len();
        Cochain { ctx: ctx.clone(), degree, values: alloc::vec![Mat::zeros(m, m); n] }
    }

    /// The basis cochain with coordinate index `c`.
    pub fn basis_element(ctx: &Arc<ChainContext>, degree: usize, c: usize) -> Self {
        let mut z = Self::zero(ctx, degree);
        let (t, b) = ctx.split_coord(c);
        z.values[t] = ctx.basis[b].clone();
        z
    }

    pub fn from_coords(ctx: &Arc<ChainContext>, degree: usize, v: &SparseVec) -> Self {
        let mut z = Self::zero(ctx, degree);
        for (c, x) in v.iter() {
            let (t, b) = ctx.split_coord(c);
            z.values[t].add_scaled_assign(x, &ctx.basis[b]);
        }
        z
    }

    /// Builds from a function of the increasing tuple.
    pub fn from_fn(ctx: &Arc<ChainContext>, degree: usize, mut f: impl FnMut(&[usize]) -> Mat) -> Self {
        let values = ctx.tuples[degree].iter().map(|t| f(t)).collect();
        Cochain { ctx: ctx.clone(), degree, values }
    }

    pub fn coords(&self) -> SparseVec {
        let dg = self.ctx.dim_g();
        let mut pairs = Vec::new();
        for (t, v) in self.values.iter().enumerate() {
            if !v.is_zero() {
                for (b, x) in self.ctx.alg.coords(v).iter() {
                    pairs.push((t * dg + b, x.clone()));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }

    pub fn context(&self) -> &Arc<ChainContext> {
        &self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Mat] {
        &self.values
    }

    /// Value on the increasing tuple of rank `r`.
    pub fn value(&self, r: usize) -> &Mat {
        &self.values[r]
    }

    pub fn set(&mut self, tuple: &[usize], x: Mat) {
        let mut t = tuple.to_vec();
        let s = sort_with_sign(&mut t).expect("repeated argument");
        let r = self.ctx.tuple_rank(&t);
        self.values[r] = if s < 0 { x.scale(&-Rational::one()) } else { x };
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Mat::is_zero)
    }

    pub fn add(&self, o: &Cochain) -> Cochain {
        self.add_scaled(&Rational::one(), o)
    }

    pub fn sub(&self, o: &Cochain) -> Cochain {
        self.add_scaled(&-Rational::one(), o)
    }

    pub fn add_scaled(&self, c: &Rational, o: &Cochain) -> Cochain {
        assert_eq!(self.degree, o.degree);
        let values = self.values.iter().zip(&o.values).map(|(a, b)| a.add_scaled(c, b)).collect();
        Cochain { ctx: self.ctx.clone(), degree: self.degree, values }
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        Cochain { ctx: self.ctx.clone(), degree: self.degree, values: self.values.iter().map(|v| v.scale(c)).collect() }
    }

    /// Applies `f` to every value.
    pub fn map_values(&self, f: impl Fn(&Mat) -> Mat) -> Cochain {
        Cochain { ctx: self.ctx.clone(), degree: self.degree, values: self.values.iter().map(f).collect() }
    }

    /// Value on basis arguments in any order.
    pub fn eval_basis(&self, args: &[usize]) -> Mat {
        assert_eq!(args.len(), self.degree);
        let mut t = args.to_vec();
        let m = self.ctx.alg.m();
        match sort_with_sign(&mut t) {
            None => Mat::zeros(m, m),
            Some(s) => {
                let v = &self.values[self.ctx.tuple_rank(&t)];
                if s < 0 {
                    v.scale(&-Rational::one())
                } else {
                    v.clone()
                }
            }
        }
    }

    /// Value on arbitrary arguments given in g/p coordinates.
    pub fn eval(&self, args: &[SparseVec]) -> Mat {
        assert_eq!(args.len(), self.degree);
        let m = self.ctx.alg.m();
        let mut out = Mat::zeros(m, m);
        let mut idx = alloc::vec![0usize; args.len()];
        self.eval_rec(args, 0, Rational::one(), &mut idx, &mut out);
        out
    }

    fn eval_rec(&self, args: &[SparseVec], pos: usize, c: Rational, idx: &mut Vec<usize>, out: &mut Mat) {
        if pos == args.len() {
            let mut t = idx.clone();
            if let Some(s) = sort_with_sign(&mut t) {
                out.add_scaled_assign(&(c * signed(s)), &self.values[self.ctx.tuple_rank(&t)]);
            }
            return;
        }
        for (i, x) in args[pos].iter() {
            idx[pos] = i;
            self.eval_rec(args, pos + 1, &c * x, idx, out);
        }
    }

    /// Value with one argument given in coordinates and the rest basis indices.
    fn eval_first(&self, first: &SparseVec, rest: &[usize]) -> Mat {
        let m = self.ctx.alg.m();
        let mut out = Mat::zeros(m, m);
        let mut args = Vec::with_capacity(rest.len() + 1);
        for (i, x) in first.iter() {
            args.clear();
            args.push(i);
            args.extend_from_slice(rest);
            if let Some(s) = sort_with_sign(&mut args) {
                out.add_scaled_assign(&(x * signed(s)), &self.values[self.ctx.tuple_rank(&args)]);
            }
        }
        out
    }
}

/// Lie algebra differential of p_− with values in g:
/// `(∂φ)(X_0..X_k) = Σ (-1)^i [X_i, φ(..X̂_i..)] + Σ_{i<j} (-1)^{i+j} φ([X_i,X_j], ..X̂_i..X̂_j..)`.
pub fn partial(c: &Cochain) -> Cochain {
    let ctx = c.ctx.clone();
    let k = c.degree;
    assert!(k < MAX_DEGREE);
    let m = ctx.alg.m();
    let mut rest = Vec::with_capacity(k);
    Cochain::from_fn(&ctx, k + 1, |t| {
        let mut v = Mat::zeros(m, m);
        for i in 0..t.len() {
            rest.clear();
            rest.extend(t.iter().enumerate().filter(|&(a, _)| a != i).map(|(_, &x)| x));
            let inner = &c.values[ctx.tuple_rank(&rest)];
            if !inner.is_zero() {
                let s = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
                v.add_scaled_assign(&s, &bracket(&ctx.lifts[t[i]], inner));
            }
        }
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                let y = &ctx.xx[t[i]][t[j]];
                if y.is_zero() {
                    continue;
                }
                rest.clear();
                rest.extend(t.iter().enumerate().filter(|&(a, _)| a != i && a != j).map(|(_, &x)| x));
                let s = if (i + j) % 2 == 0 { Rational::one() } else { -Rational::one() };
                v.add_scaled_assign(&s, &c.eval_first(y, &rest));
            }
        }
        v
    })
}

/// Kostant codifferential. Degree 2 uses the lift formula with the standard
/// lifts; other degrees use the wedge formula.
pub fn costar(c: &Cochain) -> Cochain {
    if c.degree == 2 {
        let ctx = c.ctx.clone();
        costar2_with_lift(c, |j| ctx.lifts[j].clone())
    } else {
        costar_wedge(c)
    }
}

/// Wedge formula
/// `∂*(Z_0∧…∧Z_p⊗A) = Σ (-1)^{i+1} …Ẑ_i…⊗[Z_i,A] + Σ_{i<j} (-1)^{i+j} [Z_i,Z_j]∧…Ẑ_i…Ẑ_j…⊗A`.
pub fn costar_wedge(c: &Cochain) -> Cochain {
    let ctx = c.ctx.clone();
    let p = c.degree;
    assert!(p >= 1, "codifferential of a 0-cochain");
    let mut out = Cochain::zero(&ctx, p - 1);
    let mut rest: Vec<usize> = Vec::with_capacity(p);
    for (r, t) in ctx.tuples[p].iter().enumerate() {
        let a = &c.values[r];
        if a.is_zero() {
            continue;
        }
        for i in 0..p {
            rest.clear();
            rest.extend(t.iter().enumerate().filter(|&(x, _)| x != i).map(|(_, &y)| y));
            let s = if i % 2 == 1 { Rational::one() } else { -Rational::one() };
            let target = ctx.tuple_rank(&rest);
            out.values[target].add_scaled_assign(&s, &bracket(&ctx.duals[t[i]], a));
        }
        for i in 0..p {
            for j in i + 1..p {
                let w = &ctx.zz[t[i]][t[j]];
                if w.is_zero() {
                    continue;
                }
                let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                for (l, x) in w.iter() {
                    rest.clear();
                    rest.push(l);
                    rest.extend(t.iter().enumerate().filter(|&(y, _)| y != i && y != j).map(|(_, &z)| z));
                    if let Some(s2) = sort_with_sign(&mut rest) {
                        let target = ctx.tuple_rank(&rest);
                        out.values[target].add_scaled_assign(&(x * signed(s * s2)), a);
                    }
                }
            }
        }
    }
    // Wedge coefficients to values under the 1/k! normalization.
    out.scale(&Rational::from_int(p as i64))
}

/// `(∂*φ)(X) = 2 Σ_i [Z_i, φ(X, X^i)] − Σ_i φ([Z_i, X̃] mod p, X^i)` with the
/// lift `X̃` of `X^j` supplied by `lift(j)`.
pub fn costar2_with_lift(c: &Cochain, lift: impl Fn(usize) -> Mat) -> Cochain {
    assert_eq!(c.degree, 2);
    let ctx = c.ctx.clone();
    let d = ctx.dim_q();
    let m = ctx.alg.m();
    let two = Rational::from_int(2);
    Cochain::from_fn(&ctx, 1, |t| {
        let j = t[0];
        let xt = lift(j);
        let mut v = Mat::zeros(m, m);
        for i in 0..d {
            let phi = c.eval_basis(&[j, i]);
            if !phi.is_zero() {
                v.add_scaled_assign(&two, &bracket(&ctx.duals[i], &phi));
            }
            let y = ctx.quot.project(&bracket(&ctx.duals[i], &xt));
            if !y.is_zero() {
                v.add_scaled_assign(&-Rational::one(), &c.eval_first(&y, &[i]));
            }
        }
        v
    })
}

pub fn laplacian(c: &Cochain) -> Cochain {
    let up = costar(&partial(c));
    if c.degree == 0 {
        return up;
    }
    partial(&costar(c)).add(&up)
}

/// Minimal `l` with `c(p^i, p^j, …) ⊆ p^{i+j+…+l}`; `None` for the zero cochain.
pub fn homogeneity(c: &Cochain) -> Option<i32> {
    homogeneities(c).first().copied()
}

/// Sorted distinct homogeneities of the nonzero components of `c`.
pub fn homogeneities(c: &Cochain) -> Vec<i32> {
    let ctx = &c.ctx;
    let mut out = Vec::new();
    for (t, v) in ctx.tuples[c.degree].iter().zip(&c.values) {
        let base = ctx.tuple_degree(t);
        for (a, b, _) in v.nonzeros() {
            out.push(ctx.alg.degree(a, b) - base);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Component of homogeneity exactly `l`.
pub fn homogeneous_part(c: &Cochain, l: i32) -> Cochain {
    let ctx = c.ctx.clone();
    let m = ctx.alg.m();
    let mut out = c.clone();
    for (t, v) in ctx.tuples[c.degree].iter().zip(out.values.iter_mut()) {
        let base = ctx.tuple_degree(t);
        let mut w = Mat::zeros(m, m);
        for (a, b, x) in v.nonzeros() {
            if ctx.alg.degree(a, b) - base == l {
                w.set(a, b, x.clone());
            }
        }
        *v = w;
    }
    out
}

/// `ι_φψ(X,Y,Z) = ψ(φ(X,Y),Z) + ψ(φ(Y,Z),X) + ψ(φ(Z,X),Y)` with the values
/// of φ taken modulo p.
pub fn insertion(phi: &Cochain, psi: &Cochain) -> Cochain {
    assert!(phi.degree == 2 && psi.degree == 2);
    let ctx = phi.ctx.clone();
    Cochain::from_fn(&ctx, 3, |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        let mut v = psi.eval_first(&ctx.quot.project(&phi.eval_basis(&[x, y])), &[z]);
        v.add_scaled_assign(&Rational::one(), &psi.eval_first(&ctx.quot.project(&phi.eval_basis(&[y, z])), &[x]));
        v.add_scaled_assign(&Rational::one(), &psi.eval_first(&ctx.quot.project(&phi.eval_basis(&[z, x])), &[y]));
        v
    })
}

/// A named subspace of a chain space.
#[derive(Clone, Debug)]
pub struct ChainSubmodule {
    pub name: String,
    pub degree: usize,
    pub space: Subspace,
}

impl ChainSubmodule {
    pub fn new(name: &str, degree: usize, space: Subspace) -> Self {
        ChainSubmodule { name: name.into(), degree, space }
    }

    pub fn contains(&self, c: &Cochain) -> bool {
        c.degree == self.degree && self.space.contains(&c.coords())
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis_cochains<'a>(&'a self, ctx: &'a Arc<ChainContext>) -> impl Iterator<Item = Cochain> + 'a {
        self.space.basis().iter().map(move |v| Cochain::from_coords(ctx, self.degree, v))
    }
}

/// The pieces of the Hodge splitting of `C^k`.
#[derive(Clone, Debug)]
pub struct Hodge {
    pub degree: usize,
    pub im_costar: ChainSubmodule,
    pub harmonic: ChainSubmodule,
    pub im_partial: ChainSubmodule,
    pub ker_costar: ChainSubmodule,
    pub ker_partial: ChainSubmodule,
}

pub fn hodge(ctx: &Arc<ChainContext>, k: usize) -> Hodge {
    assert!((1..MAX_DEGREE).contains(&k));
    let d_in = ctx.partial_map(k - 1);
    let d_out = ctx.partial_map(k);
    let s_in = ctx.costar_map(k + 1);
    let s_out = ctx.costar_map(k);
    let lap = d_in.compose(&s_out).add(&s_in.compose(&d_out));
    Hodge {
        degree: k,
        im_costar: ChainSubmodule::new("im ∂*", k, s_in.image()),
        harmonic: ChainSubmodule::new("ker □", k, lap.kernel()),
        im_partial: ChainSubmodule::new("im ∂", k, d_in.image()),
        ker_costar: ChainSubmodule::new("ker ∂*", k, s_out.kernel()),
        ker_partial: ChainSubmodule::new("ker ∂", k, d_out.kernel()),
    }
}

/// Kernel of `∂*` on `C^k` without the rest of the splitting.
pub fn ker_costar(ctx: &Arc<ChainContext>, k: usize) -> Subspace {
    ctx.costar_map(k).kernel()
}

/// Checks that the Hodge splitting is an exact direct sum with both
/// refinements, and that `ker □ = ker ∂ ∩ ker ∂*`.
pub fn verify_hodge(ctx: &Arc<ChainContext>, k: usize, label: &str, n: usize) -> Report {
    let h = hodge(ctx, k);
    let mut r = Report::new(label, n);
    let total = ctx.chain_dim(k);
    let (a, b, c) = (&h.im_costar.space, &h.harmonic.space, &h.im_partial.space);
    let direct = Subspace::is_direct_sum(&[a, b, c]).unwrap();
    r.check(direct, || "im∂*, ker□, im∂ not independent".into());
    r.check(a.dim() + b.dim() + c.dim() == total, || {
        alloc::format!("dims {} + {} + {} != {}", a.dim(), b.dim(), c.dim(), total)
    });
    let both = h.ker_partial.space.intersect(&h.ker_costar.space).unwrap();
    r.check(both == *b, || alloc::format!("ker□ (dim {}) != ker∂ ∩ ker∂* (dim {})", b.dim(), both.dim()));
    let left = a.sum(b).unwrap();
    r.check(left == h.ker_costar.space, || "im∂* ⊕ ker□ != ker∂*".into());
    let right = b.sum(c).unwrap();
    r.check(right == h.ker_partial.space, || "ker□ ⊕ im∂ != ker∂".into());
    r.detail("im_costar", a.dim());
    r.detail("harmonic", b.dim());
    r.detail("im_partial", c.dim());
    r.detail("total", total);
    r
}

/// Index of the coordinate's homogeneity: value degree minus argument degrees.
fn coord_homogeneity(ctx: &ChainContext, k: usize, c: usize) -> i32 {
    let (t, b) = ctx.split_coord(c);
    ctx.algebra().basis_degree(b) - ctx.tuple_degree(&ctx.tuples(k)[t])
}

fn preserves_homogeneity(ctx: &ChainContext, map: &LinearMap, from: usize, to: usize) -> Option<usize> {
    (0..map.cols()).find(|&c| {
        let h = coord_homogeneity(ctx, from, c);
        map.column(c).iter().any(|(r, _)| coord_homogeneity(ctx, to, r) != h)
    })
}

/// `∂∂ = 0`, `∂*∂* = 0`, lift-independence of the degree-2 `∂*` and
/// homogeneity preservation, each on full chain-space bases.
pub fn verify_complex(ctx: &Arc<ChainContext>, label: &str, n: usize, sampler: &mut Sampler) -> Report {
    let mut r = Report::new(label, n);
    let d: Vec<LinearMap> = (0..MAX_DEGREE).map(|k| ctx.partial_map(k)).collect();
    let s: Vec<LinearMap> = (1..=MAX_DEGREE).map(|k| ctx.costar_map(k)).collect();
    for k in 0..MAX_DEGREE - 1 {
        r.check(d[k + 1].compose(&d[k]).is_zero(), || format!("∂∂ != 0 on C^{k}"));
    }
    for k in 2..=MAX_DEGREE {
        r.check(s[k - 2].compose(&s[k - 1]).is_zero(), || format!("∂*∂* != 0 on C^{k}"));
    }
    for k in 0..MAX_DEGREE {
        if let Some(c) = preserves_homogeneity(ctx, &d[k], k, k + 1) {
            r.fail(format!("∂ changes homogeneity of basis element {c} of C^{k}"));
        }
        r.cases_run += 1;
        if let Some(c) = preserves_homogeneity(ctx, &s[k], k + 1, k) {
            r.fail(format!("∂* changes homogeneity of basis element {c} of C^{}", k + 1));
        }
        r.cases_run += 1;
    }
    let g = ctx.algebra();
    let p = g.parabolic();
    let perturb: Vec<Mat> = (0..ctx.dim_q()).map(|_| g.from_coords(&sampler.combo(&p))).collect();
    for c in 0..ctx.chain_dim(2) {
        let phi = Cochain::basis_element(ctx, 2, c);
        let moved = costar2_with_lift(&phi, |j| ctx.lift(j).add(&perturb[j]));
        if !r.check(moved == costar(&phi), || format!("∂* depends on the lift for basis element {c} of C^2")) {
            break;
        }
        if !r.check(costar_wedge(&phi) == costar(&phi), || format!("wedge and lift formulas differ on basis element {c}")) {
            break;
        }
    }
    r
}
