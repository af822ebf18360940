//! Takai duality for twisted systems: `(B ⋊_{β,v} G) ⋊ Ĝ` against
//! `B`-valued twisted kernels.
//!
//! Dual variables are indexed by group elements through the self-dual
//! pairing, and `β̂_η[g](x) = η(x) g(x)`. The kernels carry the conjugate
//! cocycle `φ̄`, so [`kprod_inv`] is their product.

use crate::coeff::{self, CoeffShape};
use crate::error::{Error, Result};
use crate::group::{fourier, inverse_fourier, FiniteAbelianGroup};
use crate::kernel::{kprod_inv, TwistedKernel};
use crate::scalar::{cmax_abs, roots_table, Real, C};
use crate::system::TwistedSystem;
use rand::Rng;
use serde::Serialize;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub struct DoubleCrossedElement<T: Real> {
    pub group: FiniteAbelianGroup,
    pub shape: CoeffShape,
    /// `F(x, ξ)` at `(x·|G| + ξ)·stride`.
    pub values: Vec<C<T>>,
}

fn czero<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

impl<T: Real> DoubleCrossedElement<T> {
    pub fn zeros(group: &FiniteAbelianGroup, shape: CoeffShape) -> Self {
        let n = group.order();
        Self {
            group: group.clone(),
            shape,
            values: vec![czero(); n * n * shape.stride()],
        }
    }

    pub fn delta(
        group: &FiniteAbelianGroup,
        shape: CoeffShape,
        x: usize,
        xi: usize,
        a: &[C<T>],
    ) -> Self {
        let mut f = Self::zeros(group, shape);
        f.at_mut(x, xi).copy_from_slice(a);
        f
    }

    pub fn random(group: &FiniteAbelianGroup, shape: CoeffShape, rng: &mut impl Rng) -> Self {
        let n = group.order();
        let values = (0..n * n * shape.stride())
            .map(|_| {
                C::new(
                    T::of(rng.gen_range(-1.0..1.0)),
                    T::of(rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        Self {
            group: group.clone(),
            shape,
            values,
        }
    }

    #[inline]
    pub fn at(&self, x: usize, xi: usize) -> &[C<T>] {
        let s = self.shape.stride();
        let k = (x * self.group.order() + xi) * s;
        &self.values[k..k + s]
    }

    pub fn at_mut(&mut self, x: usize, xi: usize) -> &mut [C<T>] {
        let s = self.shape.stride();
        let k = (x * self.group.order() + xi) * s;
        &mut self.values[k..k + s]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        cmax_abs(&self.values, &other.values)
    }

    /// Plain double-dual action `(y·F)(x, ξ) = ξ(y) F(x, ξ)`.
    pub fn dual_dual_translate(&self, y: usize) -> Self {
        let g = &self.group;
        let roots = roots_table::<T>(g.exponent());
        let mut out = self.clone();
        for x in 0..g.order() {
            for xi in 0..g.order() {
                let c = roots[g.pairing(xi, y) as usize];
                out.at_mut(x, xi).iter_mut().for_each(|a| *a *= c);
            }
        }
        out
    }

    fn ensure(&self, s: &TwistedSystem<T>) -> Result<()> {
        self.group
            .ensure_same(s.group(), "double crossed element")?;
        self.shape.ensure(&s.shape())
    }
}

/// `(F⋆G)(x,ξ) = (1/|G|) Σ_{y,η} F(y,η) β_y[η(x−y) G(x−y, ξ−η)] v(y, x−y)`.
pub fn double_convolve<T: Real>(
    f: &DoubleCrossedElement<T>,
    g: &DoubleCrossedElement<T>,
    s: &TwistedSystem<T>,
) -> Result<DoubleCrossedElement<T>> {
    f.ensure(s)?;
    g.ensure(s)?;
    let grp = s.group();
    let n = grp.order();
    let sh = s.shape();
    let st = sh.stride();
    let roots = roots_table::<T>(grp.exponent());
    let one = C::new(T::one(), T::zero());
    let inv_n = T::one() / T::of(n as f64);
    let mut out = DoubleCrossedElement::zeros(grp, sh);
    let mut h = vec![czero::<T>(); n * n * st];
    let mut acc = vec![czero::<T>(); n * st];
    for y in 0..n {
        let beta = s.beta(y);
        for k in 0..n * n {
            h[k * st..(k + 1) * st].copy_from_slice(&beta.apply(&g.values[k * st..(k + 1) * st]));
        }
        for z in 0..n {
            let x = grp.add(y, z);
            acc.iter_mut().for_each(|c| *c = czero());
            for eta in 0..n {
                let fy = f.at(y, eta);
                if fy.iter().all(|c| c.re == T::zero() && c.im == T::zero()) {
                    continue;
                }
                let c = roots[grp.pairing(eta, z) as usize] * inv_n;
                for xi in 0..n {
                    let k = (z * n + grp.sub(xi, eta)) * st;
                    coeff::mul_acc(sh, fy, &h[k..k + st], c, &mut acc[xi * st..(xi + 1) * st]);
                }
            }
            let v = s.v(y, z);
            for xi in 0..n {
                coeff::mul_acc(sh, &acc[xi * st..(xi + 1) * st], v, one, out.at_mut(x, xi));
            }
        }
    }
    Ok(out)
}

/// Fourier transform in the dual variable: `F̂(x, z) = (1/|G|) Σ_ξ F(x, ξ) ξ(z)`.
pub fn partial_fourier<T: Real>(f: &DoubleCrossedElement<T>) -> Result<Vec<C<T>>> {
    let n = f.group.order();
    let st = f.shape.stride();
    let mut out = Vec::with_capacity(f.values.len());
    for x in 0..n {
        out.extend(fourier(
            &f.group,
            &f.values[x * n * st..(x + 1) * n * st],
            st,
        )?);
    }
    Ok(out)
}

/// The twisted system's obstruction conjugated: the cocycle of the kernel side.
pub fn kernel_cocycle<T: Real>(s: &TwistedSystem<T>) -> Arc<crate::cochain::PhaseCochain> {
    Arc::new(s.phi().negated())
}

/// `k_F(w,u) = β_{−w}[F̂(w−u, u)] v(−w, w−u) φ(−w, w−u, u)`.
pub fn takai_kernel<T: Real>(
    f: &DoubleCrossedElement<T>,
    s: &TwistedSystem<T>,
) -> Result<TwistedKernel<T>> {
    f.ensure(s)?;
    let g = s.group();
    let n = g.order();
    let sh = s.shape();
    let st = sh.stride();
    let fh = partial_fourier(f)?;
    let phi = s.phi();
    let roots = roots_table::<T>(phi.modulus());
    let mut entries = Vec::with_capacity(n * n * st);
    for w in 0..n {
        let nw = g.neg(w);
        for u in 0..n {
            let x = g.sub(w, u);
            let k = (x * n + u) * st;
            let b = s.beta(nw).apply(&fh[k..k + st]);
            let p = roots[phi.num3(nw, x, u) as usize];
            let mut e = vec![czero::<T>(); st];
            coeff::mul_acc(sh, &b, s.v(nw, x), p, &mut e);
            entries.extend(e);
        }
    }
    TwistedKernel::from_entries(&kernel_cocycle(s), sh, entries)
}

/// Inverse of [`takai_kernel`], solving each step of the change of variables.
pub fn takai_inverse<T: Real>(
    k: &TwistedKernel<T>,
    s: &TwistedSystem<T>,
) -> Result<DoubleCrossedElement<T>> {
    k.group().ensure_same(s.group(), "kernel")?;
    let g = s.group();
    let n = g.order();
    let sh = s.shape();
    let st = sh.stride();
    let phi = s.phi();
    let roots = roots_table::<T>(phi.modulus());
    let mut fh = vec![czero::<T>(); n * n * st];
    for w in 0..n {
        let nw = g.neg(w);
        let binv = s.beta(nw).inverse();
        for u in 0..n {
            let x = g.sub(w, u);
            let p = roots[phi.num3(nw, x, u) as usize].conj();
            let vinv = coeff::unitary_inverse(sh, s.v(nw, x));
            let mut e = vec![czero::<T>(); st];
            coeff::mul_acc(sh, k.entry(w, u), &vinv, p, &mut e);
            fh[(x * n + u) * st..(x * n + u + 1) * st].copy_from_slice(&binv.apply(&e));
        }
    }
    let mut out = DoubleCrossedElement::zeros(g, sh);
    for x in 0..n {
        let row = inverse_fourier(g, &fh[x * n * st..(x + 1) * n * st], st)?;
        out.values[x * n * st..(x + 1) * n * st].copy_from_slice(&row);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TakaiReport {
    pub ok: bool,
    pub trials: usize,
    pub defect: f64,
    /// `(trial, w, z)` of the worst entry.
    pub witness: Option<(usize, usize, usize)>,
}

fn worst_entry<T: Real>(a: &TwistedKernel<T>, b: &TwistedKernel<T>) -> (T, (usize, usize)) {
    let n = a.group().order();
    let mut worst = (T::zero(), (0, 0));
    for w in 0..n {
        for z in 0..n {
            let d = cmax_abs(a.entry(w, z), b.entry(w, z));
            if d > worst.0 {
                worst = (d, (w, z));
            }
        }
    }
    worst
}

/// Checks `k_{F⋆G} = k_F ⋆ k_G` on `trials` random pairs.
pub fn certify_takai<T: Real>(
    s: &TwistedSystem<T>,
    trials: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<TakaiReport> {
    let mut defect = 0.0f64;
    let mut witness = None;
    for t in 0..trials {
        let f = DoubleCrossedElement::random(s.group(), s.shape(), rng);
        let g = DoubleCrossedElement::random(s.group(), s.shape(), rng);
        let lhs = takai_kernel(&double_convolve(&f, &g, s)?, s)?;
        let rhs = kprod_inv(&takai_kernel(&f, s)?, &takai_kernel(&g, s)?)?;
        let (d, (w, z)) = worst_entry(&lhs, &rhs);
        let d = d.to_f64();
        if d > defect || witness.is_none() {
            defect = d.max(defect);
            witness = Some((t, w, z));
        }
    }
    Ok(TakaiReport {
        ok: defect < tol,
        trials,
        defect,
        witness,
    })
}

/// `(β̂̂_y k)(w,z) = φ(w−z, z, y) V_y(w)^{-1} β_y[k(w+y, z+y)] V_y(z)` with
/// `V_y(z) = φ(y, −z, z) φ(y−z, z−y, y)^{-1} v(y, −z)`.
pub fn double_dual_action<T: Real>(
    y: usize,
    k: &TwistedKernel<T>,
    s: &TwistedSystem<T>,
) -> Result<TwistedKernel<T>> {
    k.group().ensure_same(s.group(), "kernel")?;
    let g = s.group();
    let n = g.order();
    let sh = s.shape();
    let phi = s.phi();
    let roots = roots_table::<T>(phi.modulus());
    let m = phi.modulus();
    let big_v: Vec<Vec<C<T>>> = (0..n)
        .map(|z| {
            let nz = g.neg(z);
            let t = (phi.num3(y, nz, z) + m - phi.num3(g.sub(y, z), g.sub(z, y), y)) % m;
            coeff::scale(s.v(y, nz), roots[t as usize])
        })
        .collect();
    let by = s.beta(y);
    let mut out = k.clone();
    for w in 0..n {
        let vw_inv = coeff::unitary_inverse(sh, &big_v[w]);
        for z in 0..n {
            let b = by.apply(k.entry(g.add(w, y), g.add(z, y)));
            let p = roots[phi.num3(g.sub(w, z), z, y) as usize];
            let e = coeff::scale(&coeff::mul3(sh, &vw_inv, &b, &big_v[z]), p);
            out.entry_mut(w, z).copy_from_slice(&e);
        }
    }
    Ok(out)
}

/// `k_{y·F}`: the plain double-dual action carried through [`takai_kernel`].
pub fn transported_double_dual<T: Real>(
    y: usize,
    f: &DoubleCrossedElement<T>,
    s: &TwistedSystem<T>,
) -> Result<TwistedKernel<T>> {
    takai_kernel(&f.dual_dual_translate(y), s)
}

/// Worst gap between [`double_dual_action`] and [`transported_double_dual`]
/// over every `y`, for one element `F`; returns `(defect, y)`.
pub fn double_dual_defect<T: Real>(
    f: &DoubleCrossedElement<T>,
    s: &TwistedSystem<T>,
) -> Result<(T, usize)> {
    let k = takai_kernel(f, s)?;
    let mut worst = (T::zero(), 0);
    for y in 0..s.group().order() {
        let a = double_dual_action(y, &k, s)?;
        let b = transported_double_dual(y, f, s)?;
        let d = a.max_abs_diff(&b);
        if d > worst.0 {
            worst = (d, y);
        }
    }
    Ok(worst)
}

/// Matrix of [`takai_kernel`] as a real-linear map, columns indexed by the
/// real and imaginary parts of each input coordinate. Intended for rank checks
/// on small groups.
pub fn takai_matrix<T: Real>(s: &TwistedSystem<T>) -> Result<(usize, Vec<C<T>>)> {
    let n = s.group().order();
    let dim = n * n * s.shape().stride();
    if dim > 4096 {
        return Err(Error::Config(format!(
            "takai matrix of dimension {dim} is too large"
        )));
    }
    let mut cols = Vec::with_capacity(dim * dim);
    let mut e = DoubleCrossedElement::zeros(s.group(), s.shape());
    for j in 0..dim {
        e.values[j] = C::new(T::one(), T::zero());
        cols.extend_from_slice(takai_kernel(&e, s)?.entries());
        e.values[j] = czero();
    }
    Ok((dim, cols))
}
