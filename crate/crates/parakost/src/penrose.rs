//! E/F tensors for the (2,n) grading with abstract-index style contractions.
//!
//! `TM ≅ E*⊗F` is realized by the g/p basis: the argument slot pair
//! `(A, A')` is the class of `E_{2+A', A}`. Pairs are enumerated E-major.
//! Curvature blocks of a 2-cochain `κ` on g/p:
//!
//! ```text
//! W^A_{A'}^B_{B'}^C_D      = κ(X_{AA'}, X_{BB'})[C][D]
//! Y^A_{A'}^B_{B'}^C_{D'}   = κ(X_{AA'}, X_{BB'})[C][2+D']
//! τ^A_{A'}^B_{B'}^{C'}_D   = κ(X_{AA'}, X_{BB'})[2+C'][D]
//! W'^A_{A'}^B_{B'}^{C'}_{D'} = κ(X_{AA'}, X_{BB'})[2+C'][2+D']
//! ```

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gla::Mat;
use crate::kostant::{hodge, partial, ChainContext, Cochain};
use crate::ratlin::{LinearMap, Rational, SparseVec, Subspace};
use crate::report::Report;
use crate::sample::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    E,
    EStar,
    F,
    FStar,
}

impl Slot {
    fn dual(self) -> Slot {
        match self {
            Slot::E => Slot::EStar,
            Slot::EStar => Slot::E,
            Slot::F => Slot::FStar,
            Slot::FStar => Slot::F,
        }
    }

    fn dim(self, n: usize) -> usize {
        match self {
            Slot::E | Slot::EStar => 2,
            Slot::F | Slot::FStar => n,
        }
    }
}

use Slot::{EStar, FStar, E, F};

/// Slots of a 2-form with values in `L(E,E)`: `W^A_{A'}^B_{B'}^C_D`.
pub const W_SLOTS: [Slot; 6] = [E, FStar, E, FStar, E, EStar];
pub const Y_SLOTS: [Slot; 6] = [E, FStar, E, FStar, E, FStar];
pub const TAU_SLOTS: [Slot; 6] = [E, FStar, E, FStar, F, EStar];
pub const WP_SLOTS: [Slot; 6] = [E, FStar, E, FStar, F, FStar];
/// Slots of a bilinear form on TM, e.g. `P^A_{A'}^B_{B'}`.
pub const FORM_SLOTS: [Slot; 4] = [E, FStar, E, FStar];

#[derive(Clone, PartialEq, Eq)]
pub struct EFTensor {
    n: usize,
    slots: Vec<Slot>,
    data: Vec<Rational>,
}

impl fmt::Debug for EFTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EFTensor(n={}, {:?}", self.n, self.slots)?;
        for (k, x) in self.data.iter().enumerate() {
            if !x.is_zero() {
                write!(f, ", {:?}: {}", self.multi_index(k), x)?;
            }
        }
        f.write_str(")")
    }
}

impl EFTensor {
    pub fn zeros(n: usize, slots: &[Slot]) -> Self {
        let len = slots.iter().map(|s| s.dim(n)).product();
        EFTensor { n, slots: slots.to_vec(), data: vec![Rational::zero(); len] }
    }

    pub fn from_fn(n: usize, slots: &[Slot], mut f: impl FnMut(&[usize]) -> Rational) -> Self {
        let mut t = Self::zeros(n, slots);
        for k in 0..t.data.len() {
            let ix = t.multi_index(k);
            t.data[k] = f(&ix);
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn dims(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.dim(self.n)).collect()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn offset(&self, ix: &[usize]) -> usize {
        assert_eq!(ix.len(), self.slots.len());
        let mut k = 0;
        for (s, &i) in self.slots.iter().zip(ix) {
            let d = s.dim(self.n);
            assert!(i < d, "index out of range");
            k = k * d + i;
        }
        k
    }

    fn multi_index(&self, mut k: usize) -> Vec<usize> {
        let mut ix = vec![0; self.slots.len()];
        for (p, s) in self.slots.iter().enumerate().rev() {
            let d = s.dim(self.n);
            ix[p] = k % d;
            k /= d;
        }
        ix
    }

    pub fn get(&self, ix: &[usize]) -> &Rational {
        &self.data[self.offset(ix)]
    }

    pub fn set(&mut self, ix: &[usize], x: Rational) {
        let k = self.offset(ix);
        self.data[k] = x;
    }

    /// Nonzero entries with their multi-indices.
    pub fn nonzeros(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> + '_ {
        self.data.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (self.multi_index(k), x))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    /// Entries in row-major order of the slot dimensions.
    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    fn zip(&self, o: &EFTensor, f: impl Fn(&Rational, &Rational) -> Rational) -> EFTensor {
        assert!(self.n == o.n && self.slots == o.slots, "signature mismatch");
        EFTensor { n: self.n, slots: self.slots.clone(), data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &EFTensor) -> EFTensor {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &EFTensor) -> EFTensor {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> EFTensor {
        EFTensor { n: self.n, slots: self.slots.clone(), data: self.data.iter().map(|x| x * c).collect() }
    }

    /// Contracts slot `i` against slot `j`, which must have dual types.
    pub fn contract(&self, i: usize, j: usize) -> EFTensor {
        assert!(i != j && self.slots[i].dual() == self.slots[j], "slots {i} and {j} are not dual");
        let rest: Vec<Slot> = self.slots.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &s)| s).collect();
        let d = self.slots[i].dim(self.n);
        EFTensor::from_fn(self.n, &rest, |ix| {
            let mut full = Vec::with_capacity(ix.len() + 2);
            let mut it = ix.iter();
            let mut s = Rational::zero();
            for t in 0..d {
                full.clear();
                for k in 0..self.slots.len() {
                    full.push(if k == i || k == j { t } else { *it.next().unwrap() });
                }
                it = ix.iter();
                s += self.get(&full);
            }
            s
        })
    }

    /// Exchanges the values of slots `i` and `j` (same type).
    pub fn swap_slots(&self, i: usize, j: usize) -> EFTensor {
        assert_eq!(self.slots[i], self.slots[j], "cannot swap slots of different type");
        EFTensor::from_fn(self.n, &self.slots, |ix| {
            let mut s = ix.to_vec();
            s.swap(i, j);
            self.get(&s).clone()
        })
    }

    pub fn symmetrize(&self, i: usize, j: usize) -> EFTensor {
        self.add(&self.swap_slots(i, j)).scale(&Rational::new(1, 2))
    }

    pub fn antisymmetrize(&self, i: usize, j: usize) -> EFTensor {
        self.sub(&self.swap_slots(i, j)).scale(&Rational::new(1, 2))
    }
}

/// Position in g/p of the argument `X_{AA'}`, i.e. of `E_{2+A', A}`.
fn arg_index(ctx: &ChainContext, a: usize, ap: usize) -> usize {
    ctx.quotient().index_of(2 + ap, a).expect("not a (2,n) grading")
}

fn f_rank(ctx: &ChainContext) -> usize {
    let b = ctx.algebra().blocks();
    assert!(b.len() == 2 && b[0] == 2, "expected a (2,n) grading, got {b:?}");
    b[1]
}

/// The four blocks of a 2-cochain on the (2,n) grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureBlocks {
    pub tau: EFTensor,
    pub w: EFTensor,
    pub wp: EFTensor,
    pub y: EFTensor,
}

pub fn extract_blocks(kappa: &Cochain) -> CurvatureBlocks {
    assert_eq!(kappa.degree(), 2);
    let ctx = kappa.context();
    let n = f_rank(ctx);
    let value = |ix: &[usize]| kappa.eval_basis(&[arg_index(ctx, ix[0], ix[1]), arg_index(ctx, ix[2], ix[3])]);
    // Evaluate each argument pair once.
    let mut cache: Vec<Option<Mat>> = vec![None; (2 * n) * (2 * n)];
    let mut get = |ix: &[usize], r: usize, c: usize| -> Rational {
        let k = (ix[0] * n + ix[1]) * 2 * n + ix[2] * n + ix[3];
        cache[k].get_or_insert_with(|| value(ix)).get(r, c).clone()
    };
    let w = EFTensor::from_fn(n, &W_SLOTS, |ix| get(ix, ix[4], ix[5]));
    let y = EFTensor::from_fn(n, &Y_SLOTS, |ix| get(ix, ix[4], 2 + ix[5]));
    let tau = EFTensor::from_fn(n, &TAU_SLOTS, |ix| get(ix, 2 + ix[4], ix[5]));
    let wp = EFTensor::from_fn(n, &WP_SLOTS, |ix| get(ix, 2 + ix[4], 2 + ix[5]));
    CurvatureBlocks { tau, w, wp, y }
}

impl CurvatureBlocks {
    pub fn zero(n: usize) -> Self {
        CurvatureBlocks {
            tau: EFTensor::zeros(n, &TAU_SLOTS),
            w: EFTensor::zeros(n, &W_SLOTS),
            wp: EFTensor::zeros(n, &WP_SLOTS),
            y: EFTensor::zeros(n, &Y_SLOTS),
        }
    }

    /// Rebuilds the cochain; `None` if a value would not be traceless or the
    /// blocks are not skew in the argument pairs.
    pub fn reassemble(&self, ctx: &Arc<ChainContext>) -> Option<Cochain> {
        let n = f_rank(ctx);
        let m = n + 2;
        let mut out = Cochain::zero(ctx, 2);
        let mut ok = true;
        for a in 0..2 {
            for ap in 0..n {
                for b in 0..2 {
                    for bp in 0..n {
                        let mut v = Mat::zeros(m, m);
                        for r in 0..m {
                            for c in 0..m {
                                let x = match (r < 2, c < 2) {
                                    (true, true) => self.w.get(&[a, ap, b, bp, r, c]),
                                    (true, false) => self.y.get(&[a, ap, b, bp, r, c - 2]),
                                    (false, true) => self.tau.get(&[a, ap, b, bp, r - 2, c]),
                                    (false, false) => self.wp.get(&[a, ap, b, bp, r - 2, c - 2]),
                                };
                                v.set(r, c, x.clone());
                            }
                        }
                        let (i, j) = (arg_index(ctx, a, ap), arg_index(ctx, b, bp));
                        if i == j {
                            ok &= v.is_zero();
                        } else if i < j {
                            ok &= v.trace().is_zero();
                            out.set(&[i, j], v);
                        } else {
                            ok &= out.eval_basis(&[i, j]) == v.scale(&-Rational::one());
                        }
                    }
                }
            }
        }
        ok.then_some(out)
    }
}

/// `tr(i_τ σ)^A_{A'}^B_{B'} = τ^I_{I'}^A_{A'}^{J'}_J σ^J_{J'}^B_{B'}^{I'}_I`.
pub fn tr_itau_sigma(tau: &EFTensor, sigma: &EFTensor) -> EFTensor {
    assert!(tau.slots == TAU_SLOTS && sigma.slots == TAU_SLOTS);
    let n = tau.n;
    EFTensor::from_fn(n, &FORM_SLOTS, |ix| {
        let (a, ap, b, bp) = (ix[0], ix[1], ix[2], ix[3]);
        let mut s = Rational::zero();
        for i in 0..2 {
            for ipr in 0..n {
                for j in 0..2 {
                    for jp in 0..n {
                        let x = tau.get(&[i, ipr, a, ap, jp, j]);
                        if x.is_zero() {
                            continue;
                        }
                        let y = sigma.get(&[j, jp, b, bp, ipr, i]);
                        if !y.is_zero() {
                            s += x * y;
                        }
                    }
                }
            }
        }
        s
    })
}

pub fn tr_itau_tau(tau: &EFTensor) -> EFTensor {
    tr_itau_sigma(tau, tau)
}

/// Polarization `B(τ, σ) = tr(i_τ σ) + tr(i_σ τ)` of the quadratic map.
pub fn tr_itau_polarized(tau: &EFTensor, sigma: &EFTensor) -> EFTensor {
    tr_itau_sigma(tau, sigma).add(&tr_itau_sigma(sigma, tau))
}

/// `tr(W)^A_{A'}^B_{B'} = W^A_{A'}^I_{B'}^B_I`.
pub fn tr_w(w: &EFTensor) -> EFTensor {
    assert_eq!(w.slots, W_SLOTS);
    EFTensor::from_fn(w.n, &FORM_SLOTS, |ix| {
        let mut s = Rational::zero();
        for i in 0..2 {
            s += w.get(&[ix[0], ix[1], i, ix[3], ix[2], i]);
        }
        s
    })
}

/// `tr(W')^A_{A'}^B_{B'} = W'^A_{A'}^B_{I'}^{I'}_{B'}`.
pub fn tr_wp(wp: &EFTensor) -> EFTensor {
    assert_eq!(wp.slots, WP_SLOTS);
    EFTensor::from_fn(wp.n, &FORM_SLOTS, |ix| {
        let mut s = Rational::zero();
        for i in 0..wp.n {
            s += wp.get(&[ix[0], ix[1], ix[2], i, i, ix[3]]);
        }
        s
    })
}

/// The four projections `(AB)(A'B')`, `[AB][A'B']`, `(AB)[A'B']`, `[AB](A'B')`
/// of a form-type tensor.
pub fn sym_split(t: &EFTensor) -> [EFTensor; 4] {
    assert_eq!(t.slots, FORM_SLOTS);
    let (se, ae) = (t.symmetrize(0, 2), t.antisymmetrize(0, 2));
    [se.symmetrize(1, 3), ae.antisymmetrize(1, 3), se.antisymmetrize(1, 3), ae.symmetrize(1, 3)]
}

/// `Ric = (n+2) P^A_{A'}^B_{B'} − P^A_{B'}^B_{A'} − P^B_{A'}^A_{B'}`.
pub fn ric_from_rho(p: &EFTensor) -> EFTensor {
    assert_eq!(p.slots, FORM_SLOTS);
    let n = Rational::from_int(p.n as i64);
    p.scale(&(n + Rational::from_int(2))).sub(&p.swap_slots(1, 3)).sub(&p.swap_slots(0, 2))
}

pub fn rho_from_ric(ric: &EFTensor) -> EFTensor {
    let n = ric.n as i64;
    let [ss, aa, sa, as_] = sym_split(ric);
    ss.scale(&Rational::new(1, n))
        .add(&aa.scale(&Rational::new(1, n + 4)))
        .add(&sa.scale(&Rational::new(1, n + 2)))
        .add(&as_.scale(&Rational::new(1, n + 2)))
}

fn delta(i: usize, j: usize) -> bool {
    i == j
}

/// `W = R_E + Φ` and `W' = R_F + Ψ` with
/// `Φ = δ^B_D P^A_{A'}^C_{B'} − δ^A_D P^B_{B'}^C_{A'}` and
/// `Ψ = δ^{C'}_{A'} P^B_{B'}^A_{D'} − δ^{C'}_{B'} P^A_{A'}^B_{D'}`.
pub fn weyl_from_curvature(r_e: &EFTensor, r_f: &EFTensor, p: &EFTensor) -> (EFTensor, EFTensor) {
    assert_eq!(p.slots, FORM_SLOTS);
    let n = p.n;
    let phi = EFTensor::from_fn(n, &W_SLOTS, |ix| {
        let (a, ap, b, bp, c, d) = (ix[0], ix[1], ix[2], ix[3], ix[4], ix[5]);
        let mut s = Rational::zero();
        if delta(b, d) {
            s += p.get(&[a, ap, c, bp]);
        }
        if delta(a, d) {
            s -= p.get(&[b, bp, c, ap]);
        }
        s
    });
    let psi = EFTensor::from_fn(n, &WP_SLOTS, |ix| {
        let (a, ap, b, bp, cp, dp) = (ix[0], ix[1], ix[2], ix[3], ix[4], ix[5]);
        let mut s = Rational::zero();
        if delta(cp, ap) {
            s += p.get(&[b, bp, a, dp]);
        }
        if delta(cp, bp) {
            s -= p.get(&[a, ap, b, dp]);
        }
        s
    });
    (r_e.add(&phi), r_f.add(&psi))
}

/// `P` as a p_1-valued 1-cochain: `P(X_{AA'})[B][2+B'] = P^A_{A'}^B_{B'}`.
pub fn rho_cochain(ctx: &Arc<ChainContext>, p: &EFTensor) -> Cochain {
    let n = f_rank(ctx);
    assert_eq!(p.n, n);
    let mut out = Cochain::zero(ctx, 1);
    for a in 0..2 {
        for ap in 0..n {
            let mut v = Mat::zeros(n + 2, n + 2);
            for b in 0..2 {
                for bp in 0..n {
                    v.set(b, 2 + bp, p.get(&[a, ap, b, bp]).clone());
                }
            }
            out.set(&[arg_index(ctx, a, ap)], v);
        }
    }
    out
}

/// Residuals of the six trace relations between `W`, `W'` and `τ`:
/// `trW − trW'`, then per symmetry type the difference of `tr(i_τ τ)` and
/// `n·trW`, `(n+4)·trW`, and the two mixed parts of each.
pub fn weyl_identity_residuals(w: &EFTensor, wp: &EFTensor, tau: &EFTensor) -> Vec<(String, EFTensor)> {
    let n = w.n as i64;
    let trw = tr_w(w);
    let tt = tr_itau_tau(tau);
    let [w_ss, w_aa, w_sa, w_as] = sym_split(&trw);
    let [t_ss, t_aa, t_sa, t_as] = sym_split(&tt);
    vec![
        ("trW - trW'".into(), trw.sub(&tr_wp(wp))),
        ("sym-sym: tr(i_tau tau) - n trW".into(), t_ss.sub(&w_ss.scale(&Rational::from_int(n)))),
        ("skew-skew: tr(i_tau tau) - (n+4) trW".into(), t_aa.sub(&w_aa.scale(&Rational::from_int(n + 4)))),
        ("sym-skew: tr(i_tau tau)".into(), t_sa),
        ("sym-skew: trW".into(), w_sa),
        ("skew-sym: tr(i_tau tau)".into(), t_as),
        ("skew-sym: trW".into(), w_as),
    ]
}

/// Constraint map `C^2 → ⊕ residuals`, one column per chain basis element.
fn block_constraints(ctx: &Arc<ChainContext>, residuals: impl Fn(&CurvatureBlocks) -> Vec<EFTensor>) -> Subspace {
    let cols: Vec<SparseVec> = (0..ctx.chain_dim(2))
        .map(|c| {
            let parts = residuals(&extract_blocks(&Cochain::basis_element(ctx, 2, c)));
            let mut pairs = Vec::new();
            let mut off = 0;
            for t in &parts {
                pairs.extend(t.entries().iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (off + k, x.clone())));
                off += t.len();
            }
            SparseVec::from_pairs(pairs)
        })
        .collect();
    let rows = residuals(&CurvatureBlocks::zero(f_rank(ctx))).iter().map(EFTensor::len).sum();
    LinearMap::from_columns(rows, cols).kernel()
}

/// Torsion type `(Sym²E⊗E*)_o⊗(Λ²F*⊗F)_o`: only the τ block, symmetric in
/// the upper E indices and trace-free.
pub fn tau_type(ctx: &Arc<ChainContext>) -> Subspace {
    block_constraints(ctx, |b| {
        vec![
            b.w.clone(),
            b.wp.clone(),
            b.y.clone(),
            b.tau.sub(&b.tau.swap_slots(0, 2)),
            b.tau.contract(2, 5),
            b.tau.contract(3, 4),
        ]
    })
}

/// Curvature type `Λ²E⊗Sym²F*⊗sl(F)`: only the W' block, skew in the upper
/// E indices, symmetric in the F* indices.
pub fn rho_type(ctx: &Arc<ChainContext>) -> Subspace {
    block_constraints(ctx, |b| {
        vec![
            b.w.clone(),
            b.tau.clone(),
            b.y.clone(),
            b.wp.add(&b.wp.swap_slots(0, 2)),
            b.wp.sub(&b.wp.swap_slots(1, 3)),
            b.wp.contract(4, 5),
        ]
    })
}

/// Exchanges the argument pairs `(A,A') ↔ (B,B')` of a form-type tensor.
fn swap_pairs(t: &EFTensor) -> EFTensor {
    t.swap_slots(0, 2).swap_slots(1, 3)
}

/// Harmonic typing for the (2,n) grading, the contraction properties of
/// ∂*-closed torsion and the six-identity classification on ker∂*.
pub fn verify_harmonic_types_ag(n: usize) -> Report {
    let mut r = Report::new("harmonic-types", n);
    let ctx = ChainContext::new(&[2, n]);
    let h = hodge(&ctx, 2);
    let (tt, rt) = (tau_type(&ctx), rho_type(&ctx));
    let harm = &h.harmonic.space;
    let typed = tt.sum(&rt).unwrap();
    r.check(harm.is_subspace_of(&typed).unwrap(), || "harmonic space ⊄ τ-type ⊕ ρ-type".into());
    let h_tau = harm.intersect(&tt).unwrap();
    let h_rho = harm.intersect(&rt).unwrap();
    let oracle = 4 * (n * n * (n - 1) / 2 - n);
    r.check(h_tau.dim() == oracle, || format!("τ-type harmonic dim {} != 4·(n·C(n,2) − n) = {oracle}", h_tau.dim()));
    r.check(h_tau.dim() + h_rho.dim() == harm.dim(), || "harmonic space is not the sum of its typed parts".into());
    let ker = &h.ker_costar.space;
    let mut taus = Vec::new();
    let mut blocks = Vec::new();
    for (k, v) in ker.basis().iter().enumerate() {
        let b = extract_blocks(&Cochain::from_coords(&ctx, 2, v));
        for (i, j) in [(0, 5), (2, 5), (1, 4), (3, 4)] {
            if !r.check(b.tau.contract(i, j).is_zero(), || format!("τ of ker∂* basis element {k} has nonzero contraction ({i},{j})")) {
                return r;
            }
        }
        if !b.tau.is_zero() {
            taus.push(b.tau.clone());
        }
        blocks.push(b);
    }
    for a in 0..taus.len() {
        for b in a..taus.len() {
            let t = tr_itau_polarized(&taus[a], &taus[b]);
            if !r.check(swap_pairs(&t) == t, || format!("tr(i_τ τ) not symmetric on ker∂* τ-pair ({a}, {b})")) {
                return r;
            }
        }
    }
    for (name, _) in weyl_identity_residuals(&blocks[0].w, &blocks[0].wp, &blocks[0].tau) {
        let holds = blocks
            .iter()
            .all(|b| weyl_identity_residuals(&b.w, &b.wp, &b.tau).into_iter().find(|(m, _)| *m == name).unwrap().1.is_zero());
        r.detail(&format!("ker_costar_basis: {name}"), if holds { "vanishes" } else { "nonzero" });
    }
    r.detail("harmonic_dim", harm.dim());
    r.detail("tau_type_dim", h_tau.dim());
    r.detail("rho_type_dim", h_rho.dim());
    r.detail("ker_costar_tau_count", taus.len());
    r
}

/// Eigen-scalars of `P ↦ Ric` on the four symmetry types, the round trip
/// with `rho_from_ric`, the (Φ,Ψ) blocks against `∂P` and both contractions.
pub fn verify_rho_ricci(n: usize, sampler: &mut Sampler, trials: usize) -> Report {
    let mut r = Report::new("rho-ricci", n);
    let ctx = ChainContext::new(&[2, n]);
    let dim = 4 * n * n;
    let unit = |k: usize| {
        let mut t = EFTensor::zeros(n, &FORM_SLOTS);
        let ix = t.multi_index(k);
        t.set(&ix, Rational::one());
        t
    };
    let random = |s: &mut Sampler| EFTensor::from_fn(n, &FORM_SLOTS, |_| s.rational());
    let inputs: Vec<EFTensor> = (0..dim).map(unit).chain((0..trials).map(|_| random(sampler))).collect();
    let nn = n as i64;
    let scalars = [nn, nn + 4, nn + 2, nn + 2].map(Rational::from_int);
    let zero_w = EFTensor::zeros(n, &W_SLOTS);
    let zero_wp = EFTensor::zeros(n, &WP_SLOTS);
    let two = Rational::from_int(2);
    for (k, p) in inputs.iter().enumerate() {
        let parts = sym_split(p);
        let sum = parts.iter().skip(1).fold(parts[0].clone(), |acc, t| acc.add(t));
        r.check(sum == *p, || format!("symmetry components of input {k} do not sum to it"));
        for (part, lambda) in parts.iter().zip(&scalars) {
            r.check(ric_from_rho(part) == part.scale(lambda), || format!("input {k}: Ric ≠ {lambda}·P on a symmetry component"));
        }
        r.check(rho_from_ric(&ric_from_rho(p)) == *p, || format!("P → Ric → P is not the identity on input {k}"));
        r.check(ric_from_rho(&rho_from_ric(p)) == *p, || format!("Ric → P → Ric is not the identity on input {k}"));
        let (phi, psi) = weyl_from_curvature(&zero_w, &zero_wp, p);
        let b = extract_blocks(&partial(&rho_cochain(&ctx, p)));
        let ok = b.w == phi && b.wp == psi && b.tau.is_zero() && b.y.is_zero();
        if !r.check(ok, || format!("(Φ,Ψ) differ from the blocks of ∂P on input {k}")) {
            return r;
        }
        r.check(tr_w(&phi) == p.scale(&two).sub(&p.swap_slots(1, 3)), || format!("tr Φ ≠ 2P − P^A_B'^B_A' on input {k}"));
        r.check(
            tr_wp(&psi) == p.scale(&Rational::from_int(-nn)).add(&p.swap_slots(0, 2)),
            || format!("tr Ψ ≠ −nP + P^B_A'^A_B' on input {k}"),
        );
        r.check(tr_w(&phi).sub(&tr_wp(&psi)) == ric_from_rho(p), || format!("trΦ − trΨ ≠ Ric(P) on input {k}"));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, slots: &[Slot], seed: i64) -> EFTensor {
        let mut k = seed;
        EFTensor::from_fn(n, slots, |_| {
            k = (k * 37 + 11) % 19;
            Rational::from_int(k - 9)
        })
    }

    #[test]
    fn contraction_requires_dual_slots() {
        let t = EFTensor::zeros(3, &W_SLOTS);
        assert_eq!(t.contract(2, 5).slots(), &[E, FStar, FStar, E]);
        let r = std::panic::catch_unwind(|| t.contract(0, 2));
        assert!(r.is_err());
    }

    #[test]
    fn tr_w_is_a_contraction() {
        let w = sample(3, &W_SLOTS, 4);
        // contracting slots 2 and 5 leaves (A, A', B', B)
        let c = w.contract(2, 5);
        let want = EFTensor::from_fn(3, &FORM_SLOTS, |ix| c.get(&[ix[0], ix[1], ix[3], ix[2]]).clone());
        assert_eq!(tr_w(&w), want);
        let wp = sample(3, &WP_SLOTS, 5);
        assert_eq!(tr_wp(&wp), wp.contract(3, 4));
    }

    #[test]
    fn sym_split_of_symmetric_input() {
        let t = sample(3, &FORM_SLOTS, 1).symmetrize(0, 2).symmetrize(1, 3);
        let parts = sym_split(&t);
        assert_eq!(parts[0], t);
        assert!(parts[1..].iter().all(EFTensor::is_zero));
    }

    #[test]
    fn rho_ricci_eigenvalues() {
        let ric = EFTensor::from_fn(3, &FORM_SLOTS, |_| Rational::from_int(3));
        assert_eq!(sym_split(&ric)[0], ric);
        assert_eq!(rho_from_ric(&ric), EFTensor::from_fn(3, &FORM_SLOTS, |_| Rational::one()));
        let eps = |i: usize, j: usize| match (i, j) {
            (0, 1) => 1,
            (1, 0) => -1,
            _ => 0,
        };
        let skew = |c: i64| EFTensor::from_fn(3, &FORM_SLOTS, |ix| Rational::from_int(c * eps(ix[0], ix[2]) * eps(ix[1], ix[3])));
        assert_eq!(sym_split(&skew(7))[1], skew(7));
        assert_eq!(rho_from_ric(&skew(7)), skew(1));
    }

    #[test]
    fn ricci_round_trip() {
        for n in 3..5 {
            let p = sample(n, &FORM_SLOTS, n as i64);
            assert_eq!(rho_from_ric(&ric_from_rho(&p)), p);
            assert_eq!(ric_from_rho(&rho_from_ric(&p)), p);
        }
    }
}
