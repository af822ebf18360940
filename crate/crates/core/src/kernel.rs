//! Twisted kernels on `G x G` with coefficient values, composed with a
//! 3-cocycle weight.

use crate::cochain::{PhaseCochain, Tricharacter};
use crate::coeff::{self, CoeffShape};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::scalar::{Real, C};
use rand::Rng;
use serde::Serialize;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct TwistedKernel<T: Real> {
    group: FiniteAbelianGroup,
    phi: Arc<PhaseCochain>,
    shape: CoeffShape,
    entries: Vec<C<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HilbertVector<T: Real> {
    pub group: FiniteAbelianGroup,
    pub shape: CoeffShape,
    pub values: Vec<C<T>>,
}

fn czero<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

fn random_entries<T: Real>(len: usize, rng: &mut impl Rng) -> Vec<C<T>> {
    (0..len)
        .map(|_| {
            C::new(
                T::of(rng.gen_range(-1.0..1.0)),
                T::of(rng.gen_range(-1.0..1.0)),
            )
        })
        .collect()
}

impl<T: Real> HilbertVector<T> {
    pub fn new(group: &FiniteAbelianGroup, shape: CoeffShape, values: Vec<C<T>>) -> Result<Self> {
        if values.len() != group.order() * shape.stride() {
            return Err(Error::Shape("vector length".into()));
        }
        Ok(Self {
            group: group.clone(),
            shape,
            values,
        })
    }

    /// `δ_a ⊗ 1`.
    pub fn delta(group: &FiniteAbelianGroup, shape: CoeffShape, a: usize) -> Self {
        let s = shape.stride();
        let mut values = vec![czero(); group.order() * s];
        values[a * s..(a + 1) * s].copy_from_slice(&coeff::identity(shape));
        Self {
            group: group.clone(),
            shape,
            values,
        }
    }

    pub fn random(group: &FiniteAbelianGroup, shape: CoeffShape, rng: &mut impl Rng) -> Self {
        let values = random_entries(group.order() * shape.stride(), rng);
        Self {
            group: group.clone(),
            shape,
            values,
        }
    }

    pub fn at(&self, x: usize) -> &[C<T>] {
        let s = self.shape.stride();
        &self.values[x * s..(x + 1) * s]
    }

    /// Coefficient-valued inner product `Σ_y ψ(y)^* χ(y)`.
    pub fn inner(&self, other: &Self) -> Vec<C<T>> {
        let mut out = vec![czero(); self.shape.stride()];
        for y in 0..self.group.order() {
            let a = coeff::adjoint(self.shape, self.at(y));
            coeff::mul_acc(
                self.shape,
                &a,
                other.at(y),
                C::new(T::one(), T::zero()),
                &mut out,
            );
        }
        out
    }
}

#[derive(Serialize)]
struct DumpEntry {
    x: Vec<u32>,
    z: Vec<u32>,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl<T: Real> TwistedKernel<T> {
    pub fn zeros(phi: &Arc<PhaseCochain>, shape: CoeffShape) -> Result<Self> {
        if phi.degree() != 3 {
            return Err(Error::Degree {
                expected: 3,
                got: phi.degree(),
            });
        }
        let g = phi.group().clone();
        let n = g.order();
        Ok(Self {
            group: g,
            phi: phi.clone(),
            shape,
            entries: vec![czero(); n * n * shape.stride()],
        })
    }

    pub fn from_entries(
        phi: &Arc<PhaseCochain>,
        shape: CoeffShape,
        entries: Vec<C<T>>,
    ) -> Result<Self> {
        let mut k = Self::zeros(phi, shape)?;
        if entries.len() != k.entries.len() {
            return Err(Error::Shape(format!(
                "{} entries, expected {}",
                entries.len(),
                k.entries.len()
            )));
        }
        k.entries = entries;
        Ok(k)
    }

    pub fn identity(phi: &Arc<PhaseCochain>, shape: CoeffShape) -> Result<Self> {
        let mut k = Self::zeros(phi, shape)?;
        let one = coeff::identity(shape);
        for x in 0..k.group.order() {
            k.entry_mut(x, x).copy_from_slice(&one);
        }
        Ok(k)
    }

    /// `E_{a,b} ⊗ 1`.
    pub fn unit(phi: &Arc<PhaseCochain>, shape: CoeffShape, a: usize, b: usize) -> Result<Self> {
        let mut k = Self::zeros(phi, shape)?;
        k.entry_mut(a, b).copy_from_slice(&coeff::identity(shape));
        Ok(k)
    }

    pub fn random(phi: &Arc<PhaseCochain>, shape: CoeffShape, rng: &mut impl Rng) -> Result<Self> {
        let mut k = Self::zeros(phi, shape)?;
        k.entries = random_entries(k.entries.len(), rng);
        Ok(k)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }
    pub fn phi(&self) -> &Arc<PhaseCochain> {
        &self.phi
    }
    pub fn shape(&self) -> CoeffShape {
        self.shape
    }
    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    #[inline]
    pub fn entry(&self, x: usize, z: usize) -> &[C<T>] {
        let s = self.shape.stride();
        let i = (x * self.group.order() + z) * s;
        &self.entries[i..i + s]
    }

    #[inline]
    pub fn entry_mut(&mut self, x: usize, z: usize) -> &mut [C<T>] {
        let s = self.shape.stride();
        let i = (x * self.group.order() + z) * s;
        &mut self.entries[i..i + s]
    }

    /// Same entries under a different cocycle on the same group.
    pub fn with_phi(&self, phi: &Arc<PhaseCochain>) -> Result<Self> {
        self.group.ensure_same(phi.group(), "with_phi")?;
        Ok(Self {
            phi: phi.clone(),
            ..self.clone()
        })
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        self.group.ensure_same(&other.group, "kernel product")?;
        self.shape.ensure(&other.shape)?;
        if !Arc::ptr_eq(&self.phi, &other.phi) && *self.phi != *other.phi {
            return Err(Error::GroupMismatch(
                "kernels carry different cocycles".into(),
            ));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        crate::scalar::cmax_abs(&self.entries, &other.entries)
    }

    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), T::max)
    }

    /// JSON array of `{x, z, re, im}`; `re`/`im` list the coefficient entries.
    pub fn dump_json(&self) -> String {
        let n = self.group.order();
        let mut out = Vec::new();
        for x in 0..n {
            for z in 0..n {
                let e = self.entry(x, z);
                if e.iter().all(|c| c.norm() == T::zero()) {
                    continue;
                }
                out.push(DumpEntry {
                    x: self.group.coords(x),
                    z: self.group.coords(z),
                    re: e.iter().map(|c| c.re.to_f64()).collect(),
                    im: e.iter().map(|c| c.im.to_f64()).collect(),
                });
            }
        }
        serde_json::to_string(&out).expect("serializable")
    }
}

fn product_with_sign<T: Real>(
    k1: &TwistedKernel<T>,
    k2: &TwistedKernel<T>,
    inverse: bool,
) -> Result<TwistedKernel<T>> {
    k1.compatible(k2)?;
    let g = &k1.group;
    let n = g.order();
    let phi = if inverse {
        k1.phi.negated()
    } else {
        (*k1.phi).clone()
    };
    let ph = phi.phases::<T>();
    let s = k1.shape;
    let st = s.stride();
    let mut out = TwistedKernel::zeros(&k1.phi, s)?;
    for x in 0..n {
        for z in 0..n {
            let o = &mut out.entries[(x * n + z) * st..(x * n + z + 1) * st];
            for y in 0..n {
                let p = ph[(g.sub(x, y) * n + g.sub(y, z)) * n + z];
                coeff::mul_acc(s, k1.entry(x, y), k2.entry(y, z), p, o);
            }
        }
    }
    Ok(out)
}

/// `(k1⋆k2)(x,z) = Σ_y φ(x−y, y−z, z) k1(x,y) k2(y,z)`.
pub fn kprod<T: Real>(k1: &TwistedKernel<T>, k2: &TwistedKernel<T>) -> Result<TwistedKernel<T>> {
    product_with_sign(k1, k2, false)
}

/// As [`kprod`] with `φ` replaced by `φ^{-1}`.
pub fn kprod_inv<T: Real>(
    k1: &TwistedKernel<T>,
    k2: &TwistedKernel<T>,
) -> Result<TwistedKernel<T>> {
    product_with_sign(k1, k2, true)
}

/// `k*(x,y) = k(y,x)^*`.
pub fn adjoint<T: Real>(k: &TwistedKernel<T>) -> TwistedKernel<T> {
    let n = k.group.order();
    let mut out = k.clone();
    for x in 0..n {
        for y in 0..n {
            let a = coeff::adjoint(k.shape, k.entry(y, x));
            out.entry_mut(x, y).copy_from_slice(&a);
        }
    }
    out
}

/// Max-abs gap between `(k1⋆k2)⋆k3` and the Φ-corrected right bracketing
/// `Σ_{y,z} φ(x−y,y−z,z−w) φ(x−y,y−w,w) φ(y−z,z−w,w) k1(x,y) k2(y,z) k3(z,w)`,
/// with the worst `(x,w)`.
pub fn associator_defect<T: Real>(
    k1: &TwistedKernel<T>,
    k2: &TwistedKernel<T>,
    k3: &TwistedKernel<T>,
) -> Result<(T, (usize, usize))> {
    k1.compatible(k2)?;
    k2.compatible(k3)?;
    let lhs = kprod(&kprod(k1, k2)?, k3)?;
    let g = &k1.group;
    let n = g.order();
    let ph = k1.phi.phases::<T>();
    let s = k1.shape;
    let st = s.stride();
    let one = C::new(T::one(), T::zero());
    let mut worst = (T::zero(), (0, 0));
    if st == 1 {
        // m[y·n + z] = φ(y−z, z−w, w) k2(y,z) k3(z,w) for the current w.
        let mut m = vec![czero::<T>(); n * n];
        for w in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (yz, zw) = (g.sub(y, z), g.sub(z, w));
                    m[y * n + z] =
                        ph[(yz * n + zw) * n + w] * k2.entry(y, z)[0] * k3.entry(z, w)[0];
                }
            }
            for x in 0..n {
                let mut acc = czero::<T>();
                for y in 0..n {
                    let xy = g.sub(x, y);
                    let row = &ph[xy * n * n..(xy + 1) * n * n];
                    let mut inner = czero::<T>();
                    for z in 0..n {
                        inner += row[g.sub(y, z) * n + g.sub(z, w)] * m[y * n + z];
                    }
                    acc += k1.entry(x, y)[0] * ph[(xy * n + g.sub(y, w)) * n + w] * inner;
                }
                let d = (acc - lhs.entry(x, w)[0]).norm();
                if d > worst.0 {
                    worst = (d, (x, w));
                }
            }
        }
        return Ok(worst);
    }
    let mut acc = vec![czero::<T>(); st];
    let mut tmp = vec![czero::<T>(); st];
    for x in 0..n {
        for w in 0..n {
            acc.iter_mut().for_each(|c| *c = czero());
            for y in 0..n {
                let xy = g.sub(x, y);
                let yw = g.sub(y, w);
                let pw = ph[(xy * n + yw) * n + w];
                let a = k1.entry(x, y);
                for z in 0..n {
                    let yz = g.sub(y, z);
                    let zw = g.sub(z, w);
                    let p = ph[(xy * n + yz) * n + zw] * pw * ph[(yz * n + zw) * n + w];
                    if st == 1 {
                        acc[0] += a[0] * k2.entry(y, z)[0] * k3.entry(z, w)[0] * p;
                    } else {
                        tmp.iter_mut().for_each(|c| *c = czero());
                        coeff::mul_acc(s, a, k2.entry(y, z), p, &mut tmp);
                        coeff::mul_acc(s, &tmp, k3.entry(z, w), one, &mut acc);
                    }
                }
            }
            let d = crate::scalar::cmax_abs(&acc, lhs.entry(x, w));
            if d > worst.0 {
                worst = (d, (x, w));
            }
        }
    }
    Ok(worst)
}

/// `θ_x[k](z,w) = φ(x,z,w) k(z+x, w+x)`.
pub fn g_action<T: Real>(x: usize, k: &TwistedKernel<T>) -> TwistedKernel<T> {
    let g = &k.group;
    let n = g.order();
    let m = k.phi.modulus();
    let mut out = k.clone();
    for z in 0..n {
        for w in 0..n {
            let p = crate::scalar::root_of_unity::<T>(k.phi.num3(x, z, w), m);
            let src = coeff::scale(k.entry(g.add(z, x), g.add(w, x)), p);
            out.entry_mut(z, w).copy_from_slice(&src);
        }
    }
    out
}

/// `ad(σ(x,y))[k](z,w) = φ(x,y,z) k(z,w) φ(x,y,w)^{-1}`.
pub fn ad_sigma<T: Real>(x: usize, y: usize, k: &TwistedKernel<T>) -> TwistedKernel<T> {
    let n = k.group.order();
    let m = k.phi.modulus();
    let mut out = k.clone();
    for z in 0..n {
        for w in 0..n {
            let t = (k.phi.num3(x, y, z) + m - k.phi.num3(x, y, w)) % m;
            let p = crate::scalar::root_of_unity::<T>(t, m);
            let v = coeff::scale(k.entry(z, w), p);
            out.entry_mut(z, w).copy_from_slice(&v);
        }
    }
    out
}

fn ensure_phi(k_phi: &PhaseCochain, phi: &Tricharacter) -> Result<()> {
    if k_phi == phi.cochain() {
        Ok(())
    } else {
        Err(Error::NotTricharacter(
            "kernel cocycle differs from the supplied tricharacter".into(),
        ))
    }
}

/// `⟨ψ0|ψ1⟩(x,y) = ψ0(x) ψ1(y)^*`.
pub fn rank_one<T: Real>(
    psi0: &HilbertVector<T>,
    psi1: &HilbertVector<T>,
    phi: &Arc<Tricharacter>,
) -> Result<TwistedKernel<T>> {
    psi0.group.ensure_same(&psi1.group, "rank_one")?;
    psi0.shape.ensure(&psi1.shape)?;
    let cochain = Arc::new(phi.cochain().clone());
    let mut k = TwistedKernel::zeros(&cochain, psi0.shape)?;
    let n = psi0.group.order();
    for x in 0..n {
        for y in 0..n {
            let v = coeff::mul(
                psi0.shape,
                psi0.at(x),
                &coeff::adjoint(psi0.shape, psi1.at(y)),
            );
            k.entry_mut(x, y).copy_from_slice(&v);
        }
    }
    Ok(k)
}

/// `(k⋆ψ)(x) = Σ_y k(x,y) ψ(y)`; the weight `φ(x,y,y)` is 1 for tricharacters.
pub fn apply<T: Real>(
    k: &TwistedKernel<T>,
    psi: &HilbertVector<T>,
    phi: &Tricharacter,
) -> Result<HilbertVector<T>> {
    ensure_phi(&k.phi, phi)?;
    k.group.ensure_same(&psi.group, "apply")?;
    k.shape.ensure(&psi.shape)?;
    let n = k.group.order();
    let st = k.shape.stride();
    let mut values = vec![czero(); n * st];
    for x in 0..n {
        for y in 0..n {
            coeff::mul_acc(
                k.shape,
                k.entry(x, y),
                psi.at(y),
                C::new(T::one(), T::zero()),
                &mut values[x * st..(x + 1) * st],
            );
        }
    }
    Ok(HilbertVector {
        group: k.group.clone(),
        shape: k.shape,
        values,
    })
}

/// The kernel as a dense `(|G|·blocks·d)²` matrix, row-major.
pub fn flatten<T: Real>(k: &TwistedKernel<T>) -> (usize, Vec<C<T>>) {
    let n = k.group.order();
    let s = k.shape;
    let d = s.dim;
    let w = s.blocks * d;
    let big = n * w;
    let mut m = vec![czero(); big * big];
    for x in 0..n {
        for z in 0..n {
            let e = k.entry(x, z);
            for b in 0..s.blocks {
                for i in 0..d {
                    for j in 0..d {
                        m[(x * w + b * d + i) * big + z * w + b * d + j] = e[b * d * d + i * d + j];
                    }
                }
            }
        }
    }
    (big, m)
}

/// Spectral norm of [`flatten`], by power iteration on `A^†A`.
pub fn operator_norm<T: Real>(k: &TwistedKernel<T>) -> T {
    let (n, a) = flatten(k);
    let mut v: Vec<C<T>> = (0..n)
        .map(|i| {
            C::new(
                T::one() + T::of(i as f64 * 1e-3),
                T::of((i % 7) as f64 * 1e-2),
            )
        })
        .collect();
    let mut av = vec![czero::<T>(); n];
    let mut last = T::zero();
    for it in 0..200_000 {
        let norm = v
            .iter()
            .map(|c| c.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        if norm == T::zero() {
            return T::zero();
        }
        v.iter_mut().for_each(|c| *c /= norm);
        for i in 0..n {
            let mut s = czero();
            for j in 0..n {
                s += a[i * n + j] * v[j];
            }
            av[i] = s;
        }
        let sigma = av
            .iter()
            .map(|c| c.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        for j in 0..n {
            let mut s = czero();
            for i in 0..n {
                s += a[i * n + j].conj() * av[i];
            }
            v[j] = s;
        }
        if it > 10 && (sigma - last).abs() <= T::of(1e-15) * sigma {
            return sigma;
        }
        last = sigma;
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{octonion_cocycle, volume_tricharacter, Turn};
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256StarStar;

    fn oct() -> Arc<PhaseCochain> {
        Arc::new(octonion_cocycle().into_cochain())
    }

    #[test]
    fn identity_is_unit_for_trivial_cocycle() {
        let g = FiniteAbelianGroup::power(2, 3);
        let phi = Arc::new(PhaseCochain::zero(&g, 3, 1));
        let id = TwistedKernel::<f64>::identity(&phi, CoeffShape::SCALAR).unwrap();
        assert_eq!(kprod(&id, &id).unwrap().max_abs_diff(&id), 0.0);
    }

    #[test]
    fn delta_kernels_pick_up_cocycle() {
        let phi = oct();
        let s = CoeffShape::SCALAR;
        let (a, b, c) = (3, 5, 6);
        let e1 = TwistedKernel::<f64>::unit(&phi, s, a, b).unwrap();
        let e2 = TwistedKernel::<f64>::unit(&phi, s, b, c).unwrap();
        let g = phi.group();
        let p: C<f64> = phi.phase(&[g.sub(a, b), g.sub(b, c), c]);
        let mut want = TwistedKernel::unit(&phi, s, a, c).unwrap();
        want.entry_mut(a, c)[0] = p;
        assert_eq!(kprod(&e1, &e2).unwrap().max_abs_diff(&want), 0.0);
        want.entry_mut(a, c)[0] = p.conj();
        assert_eq!(kprod_inv(&e1, &e2).unwrap().max_abs_diff(&want), 0.0);
    }

    #[test]
    fn kprod_inv_is_kprod_of_conjugate() {
        let phi = Arc::new(
            volume_tricharacter(3, Turn::new(1, 3))
                .unwrap()
                .into_cochain(),
        );
        let bar = Arc::new(phi.negated());
        let mut rng = Xoshiro256StarStar::seed_from_u64(5);
        let k1 = TwistedKernel::<f64>::random(&phi, CoeffShape::SCALAR, &mut rng).unwrap();
        let k2 = TwistedKernel::<f64>::random(&phi, CoeffShape::SCALAR, &mut rng).unwrap();
        let a = kprod_inv(&k1, &k2).unwrap();
        let b = kprod(&k1.with_phi(&bar).unwrap(), &k2.with_phi(&bar).unwrap()).unwrap();
        assert!(crate::scalar::cmax_abs(a.entries(), b.entries()) < 1e-15);
    }

    #[test]
    fn adjoint_of_unit_and_identity() {
        let phi = oct();
        let e = TwistedKernel::<f64>::unit(&phi, CoeffShape::SCALAR, 2, 7).unwrap();
        let f = TwistedKernel::<f64>::unit(&phi, CoeffShape::SCALAR, 7, 2).unwrap();
        assert_eq!(adjoint(&e).max_abs_diff(&f), 0.0);
        let id = TwistedKernel::<f64>::identity(&phi, CoeffShape::matrix(2)).unwrap();
        assert_eq!(adjoint(&id).max_abs_diff(&id), 0.0);
    }

    #[test]
    fn g_action_identity_and_octonion_sign() {
        let phi = oct();
        let g = phi.group().clone();
        let s = CoeffShape::SCALAR;
        let mut rng = Xoshiro256StarStar::seed_from_u64(6);
        let k = TwistedKernel::<f64>::random(&phi, s, &mut rng).unwrap();
        assert_eq!(g_action(0, &k).max_abs_diff(&k), 0.0);
        let x = g.index_of_coords(&[1, 0, 0]).unwrap();
        let z = g.index_of_coords(&[0, 1, 0]).unwrap();
        let w = g.index_of_coords(&[0, 0, 1]).unwrap();
        // θ_x[k](z,w) reads k at (z+x, w+x) with sign φ(x,z,w) = −1.
        let e = TwistedKernel::<f64>::unit(&phi, s, g.add(z, x), g.add(w, x)).unwrap();
        let t = g_action(x, &e);
        assert_eq!(t.entry(z, w)[0], C::new(-1.0, 0.0));
        assert_eq!(t.max_abs(), 1.0);
    }

    #[test]
    fn rank_one_and_apply() {
        let tri = Arc::new(octonion_cocycle());
        let g = tri.group().clone();
        let s = CoeffShape::SCALAR;
        let d0 = HilbertVector::<f64>::delta(&g, s, 0);
        let k = rank_one(&d0, &d0, &tri).unwrap();
        let phi = Arc::new(tri.cochain().clone());
        assert_eq!(
            k.max_abs_diff(&TwistedKernel::unit(&phi, s, 0, 0).unwrap()),
            0.0
        );
        let mut rng = Xoshiro256StarStar::seed_from_u64(8);
        let (a, b, c) = (
            HilbertVector::<f64>::random(&g, s, &mut rng),
            HilbertVector::random(&g, s, &mut rng),
            HilbertVector::random(&g, s, &mut rng),
        );
        let r = apply(&rank_one(&a, &b, &tri).unwrap(), &c, &tri).unwrap();
        let ip = b.inner(&c)[0];
        for x in 0..8 {
            assert!((r.values[x] - a.values[x] * ip).norm() < 1e-13);
        }
        let id = TwistedKernel::identity(&phi, s).unwrap();
        assert!(crate::scalar::cmax_abs(&apply(&id, &c, &tri).unwrap().values, &c.values) < 1e-15);
    }

    #[test]
    fn apply_rejects_foreign_cocycle() {
        let tri = octonion_cocycle();
        let g = tri.group().clone();
        let other = Arc::new(PhaseCochain::zero(&g, 3, 1));
        let k = TwistedKernel::<f64>::identity(&other, CoeffShape::SCALAR).unwrap();
        let v = HilbertVector::delta(&g, CoeffShape::SCALAR, 0);
        assert!(apply(&k, &v, &tri).is_err());
    }

    #[test]
    fn operator_norm_of_units() {
        let phi = oct();
        let id = TwistedKernel::<f64>::identity(&phi, CoeffShape::matrix(2)).unwrap();
        assert!((operator_norm(&id) - 1.0).abs() < 1e-12);
        let e = TwistedKernel::<f64>::unit(&phi, CoeffShape::SCALAR, 1, 6).unwrap();
        assert!((operator_norm(&e) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dump_lists_nonzero_entries() {
        let phi = oct();
        let e = TwistedKernel::<f64>::unit(&phi, CoeffShape::SCALAR, 1, 6).unwrap();
        let v: serde_json::Value = serde_json::from_str(&e.dump_json()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 1);
        assert_eq!(v[0]["x"], serde_json::json!([0, 0, 1]));
        assert_eq!(v[0]["re"], serde_json::json!([1.0]));
    }
}
