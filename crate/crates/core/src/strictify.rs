//! Kernel-valued functions `k(u, w; x)` on `G`, their twisted product and the
//! strictification `k ↦ k^F` that turns the associator-corrected product into
//! fiberwise kernel composition.

use crate::cochain::PhaseCochain;
use crate::coeff::{self, CoeffShape};
use crate::error::Result;
use crate::group::FiniteAbelianGroup;
use crate::scalar::{cmax_abs, roots_table, Real, C};
use rand::Rng;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct KernelField<T: Real> {
    group: FiniteAbelianGroup,
    phi: Arc<PhaseCochain>,
    shape: CoeffShape,
    /// `k(u, w; x)` at `((u·|G| + w)·|G| + x)·stride`.
    values: Vec<C<T>>,
}

fn czero<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

impl<T: Real> KernelField<T> {
    pub fn zeros(phi: &Arc<PhaseCochain>, shape: CoeffShape) -> Self {
        let n = phi.group().order();
        Self {
            group: phi.group().clone(),
            phi: phi.clone(),
            shape,
            values: vec![czero(); n * n * n * shape.stride()],
        }
    }

    pub fn from_fn(
        phi: &Arc<PhaseCochain>,
        shape: CoeffShape,
        f: impl Fn(usize, usize, usize) -> Vec<C<T>>,
    ) -> Result<Self> {
        let mut k = Self::zeros(phi, shape);
        let n = k.group.order();
        for u in 0..n {
            for w in 0..n {
                for x in 0..n {
                    let v = f(u, w, x);
                    if v.len() != shape.stride() {
                        return Err(crate::Error::Shape("kernel field entry".into()));
                    }
                    k.at_mut(u, w, x).copy_from_slice(&v);
                }
            }
        }
        Ok(k)
    }

    pub fn random(phi: &Arc<PhaseCochain>, shape: CoeffShape, rng: &mut impl Rng) -> Self {
        let mut k = Self::zeros(phi, shape);
        for c in k.values.iter_mut() {
            *c = C::new(
                T::of(rng.gen_range(-1.0..1.0)),
                T::of(rng.gen_range(-1.0..1.0)),
            );
        }
        k
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
    pub fn values(&self) -> &[C<T>] {
        &self.values
    }

    #[inline]
    pub fn at(&self, u: usize, w: usize, x: usize) -> &[C<T>] {
        let n = self.group.order();
        let s = self.shape.stride();
        let k = ((u * n + w) * n + x) * s;
        &self.values[k..k + s]
    }

    pub fn at_mut(&mut self, u: usize, w: usize, x: usize) -> &mut [C<T>] {
        let n = self.group.order();
        let s = self.shape.stride();
        let k = ((u * n + w) * n + x) * s;
        &mut self.values[k..k + s]
    }

    pub fn with_phi(&self, phi: &Arc<PhaseCochain>) -> Result<Self> {
        self.group.ensure_same(phi.group(), "kernel field")?;
        Ok(Self {
            phi: phi.clone(),
            ..self.clone()
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        cmax_abs(&self.values, &other.values)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        self.group.ensure_same(&other.group, "kernel field")?;
        self.shape.ensure(&other.shape)?;
        if self.phi != other.phi {
            return Err(crate::Error::Invalid(
                "kernel fields carry different cocycles".into(),
            ));
        }
        Ok(())
    }
}

/// `Σ_v k₁(u, v; v−w+y) k₂(v, w; y) · weight(u−v, v−w, w, y)`.
fn weighted_product<T: Real>(
    k1: &KernelField<T>,
    k2: &KernelField<T>,
    weight: impl Fn(usize, usize, usize, usize) -> C<T>,
) -> Result<KernelField<T>> {
    k1.compatible(k2)?;
    let g = &k1.group;
    let n = g.order();
    let sh = k1.shape;
    let mut out = KernelField::zeros(&k1.phi, sh);
    for u in 0..n {
        for w in 0..n {
            for y in 0..n {
                let mut acc = vec![czero::<T>(); sh.stride()];
                for v in 0..n {
                    let (a, b) = (g.sub(u, v), g.sub(v, w));
                    let p = weight(a, b, w, y);
                    coeff::mul_acc(sh, k1.at(u, v, g.add(b, y)), k2.at(v, w, y), p, &mut acc);
                }
                out.at_mut(u, w, y).copy_from_slice(&acc);
            }
        }
    }
    Ok(out)
}

/// `(k₁⋆k₂)(u,w;x) = Σ_v k₁(u,v; v−w+x) k₂(v,w;x) φ(u−v, v−w, w)`.
pub fn field_product<T: Real>(k1: &KernelField<T>, k2: &KernelField<T>) -> Result<KernelField<T>> {
    let phi = k1.phi.clone();
    let roots = roots_table::<T>(phi.modulus());
    weighted_product(k1, k2, |a, b, w, _| roots[phi.num3(a, b, w) as usize])
}

/// The associator-corrected product: [`field_product`] with the extra factor
/// `φ(u−v, v−w, y)^{-1}`.
pub fn corrected_product<T: Real>(
    k1: &KernelField<T>,
    k2: &KernelField<T>,
) -> Result<KernelField<T>> {
    let phi = k1.phi.clone();
    let m = phi.modulus();
    let roots = roots_table::<T>(m);
    weighted_product(k1, k2, |a, b, w, y| {
        roots[((phi.num3(a, b, w) + m - phi.num3(a, b, y)) % m) as usize]
    })
}

/// `k^F(u,w;x) = k(u, w; w+x) φ(u−w, w, x)^{-1}`.
pub fn strictify<T: Real>(k: &KernelField<T>) -> KernelField<T> {
    let g = &k.group;
    let phi = &k.phi;
    let m = phi.modulus();
    let roots = roots_table::<T>(m);
    let n = g.order();
    let mut out = k.clone();
    for u in 0..n {
        for w in 0..n {
            let uw = g.sub(u, w);
            for x in 0..n {
                let p = roots[((m - phi.num3(uw, w, x)) % m) as usize];
                let v = coeff::scale(k.at(u, w, g.add(w, x)), p);
                out.at_mut(u, w, x).copy_from_slice(&v);
            }
        }
    }
    out
}

/// Inverse of [`strictify`].
pub fn unstrictify<T: Real>(kf: &KernelField<T>) -> KernelField<T> {
    let g = &kf.group;
    let phi = &kf.phi;
    let roots = roots_table::<T>(phi.modulus());
    let n = g.order();
    let mut out = kf.clone();
    for u in 0..n {
        for w in 0..n {
            let uw = g.sub(u, w);
            for y in 0..n {
                let x = g.sub(y, w);
                let v = coeff::scale(kf.at(u, w, x), roots[phi.num3(uw, w, x) as usize]);
                out.at_mut(u, w, y).copy_from_slice(&v);
            }
        }
    }
    out
}

/// `k'(u,w;x) = k(u, w; w+x)`.
pub fn shift_prime<T: Real>(k: &KernelField<T>) -> KernelField<T> {
    let g = &k.group;
    let n = g.order();
    let mut out = k.clone();
    for u in 0..n {
        for w in 0..n {
            for x in 0..n {
                let v = k.at(u, w, g.add(w, x)).to_vec();
                out.at_mut(u, w, x).copy_from_slice(&v);
            }
        }
    }
    out
}

/// `Σ_v k₁(u,v;x) k₂(v,w;x)`: composition in each fiber.
pub fn fiberwise_product<T: Real>(
    k1: &KernelField<T>,
    k2: &KernelField<T>,
) -> Result<KernelField<T>> {
    k1.compatible(k2)?;
    let n = k1.group.order();
    let sh = k1.shape;
    let one = C::new(T::one(), T::zero());
    let mut out = KernelField::zeros(&k1.phi, sh);
    for u in 0..n {
        for w in 0..n {
            for x in 0..n {
                let mut acc = vec![czero::<T>(); sh.stride()];
                for v in 0..n {
                    coeff::mul_acc(sh, k1.at(u, v, x), k2.at(v, w, x), one, &mut acc);
                }
                out.at_mut(u, w, x).copy_from_slice(&acc);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct StrictifyReport {
    pub ok: bool,
    /// `max |(k₁*k₂)^F − k₁^F ∘ k₂^F|`.
    pub fiber_defect: f64,
    /// `max |(k₁*k₂)*k₃ − k₁*(k₂*k₃)|` for the corrected product.
    pub assoc_defect: f64,
    /// Trial index of the worst case.
    pub witness: Option<usize>,
}

pub fn certify_strictification<T: Real>(
    phi: &Arc<PhaseCochain>,
    shape: CoeffShape,
    trials: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<StrictifyReport> {
    let (mut fd, mut ad, mut witness) = (0.0f64, 0.0f64, None);
    for t in 0..trials {
        let k1 = KernelField::<T>::random(phi, shape, rng);
        let k2 = KernelField::<T>::random(phi, shape, rng);
        let k3 = KernelField::<T>::random(phi, shape, rng);
        let p12 = corrected_product(&k1, &k2)?;
        let f = strictify(&p12)
            .max_abs_diff(&fiberwise_product(&strictify(&k1), &strictify(&k2))?)
            .to_f64();
        let left = corrected_product(&p12, &k3)?;
        let right = corrected_product(&k1, &corrected_product(&k2, &k3)?)?;
        let a = left.max_abs_diff(&right).to_f64();
        if f.max(a) > fd.max(ad) || witness.is_none() {
            witness = Some(t);
        }
        fd = fd.max(f);
        ad = ad.max(a);
    }
    Ok(StrictifyReport {
        ok: fd < tol && ad < tol,
        fiber_defect: fd,
        assoc_defect: ad,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{cyclic_generator, octonion_cocycle, volume_tricharacter, Turn};
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256StarStar;

    fn arc(p: PhaseCochain) -> Arc<PhaseCochain> {
        Arc::new(p)
    }

    /// Direct triple loop with the shift written as `x' = v − w + x`.
    fn naive_field_product(k1: &KernelField<f64>, k2: &KernelField<f64>) -> KernelField<f64> {
        let g = k1.group().clone();
        let n = g.order();
        let phi = k1.phi().clone();
        let mut out = KernelField::zeros(&phi, k1.shape());
        for u in 0..n {
            for w in 0..n {
                for x in 0..n {
                    let mut s = C::new(0.0, 0.0);
                    for v in 0..n {
                        let xs = g.add(g.sub(v, w), x);
                        let p: C<f64> = phi.phase(&[g.sub(u, v), g.sub(v, w), w]);
                        s += k1.at(u, v, xs)[0] * k2.at(v, w, x)[0] * p;
                    }
                    out.at_mut(u, w, x)[0] = s;
                }
            }
        }
        out
    }

    #[test]
    fn field_product_matches_oracle() {
        let phi = arc(octonion_cocycle().into_cochain());
        let mut rng = Xoshiro256StarStar::seed_from_u64(31);
        let k1 = KernelField::random(&phi, CoeffShape::SCALAR, &mut rng);
        let k2 = KernelField::random(&phi, CoeffShape::SCALAR, &mut rng);
        assert!(
            field_product(&k1, &k2)
                .unwrap()
                .max_abs_diff(&naive_field_product(&k1, &k2))
                < 1e-13
        );
    }

    #[test]
    fn delta_fields() {
        let phi = arc(volume_tricharacter(3, Turn::new(1, 3))
            .unwrap()
            .into_cochain());
        let g = phi.group().clone();
        let (u, v, w, x) = (4, 11, 19, 7);
        let xs = g.add(g.sub(v, w), x);
        let k1 = KernelField::from_fn(&phi, CoeffShape::SCALAR, |a, b, c| {
            vec![C::new(if (a, b, c) == (u, v, xs) { 1.0 } else { 0.0 }, 0.0)]
        })
        .unwrap();
        let k2 = KernelField::from_fn(&phi, CoeffShape::SCALAR, |a, b, c| {
            vec![C::new(if (a, b, c) == (v, w, x) { 1.0 } else { 0.0 }, 0.0)]
        })
        .unwrap();
        let p = field_product(&k1, &k2).unwrap();
        let want: C<f64> = phi.phase(&[g.sub(u, v), g.sub(v, w), w]);
        assert!((p.at(u, w, x)[0] - want).norm() < 1e-15);
        let total: f64 = p.values().iter().map(|c| c.norm()).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trivial_cocycle_prime_is_fiberwise() {
        let phi = arc(PhaseCochain::zero(
            &crate::group::FiniteAbelianGroup::cyclic(5),
            3,
            1,
        ));
        let mut rng = Xoshiro256StarStar::seed_from_u64(32);
        let k1 = KernelField::<f64>::random(&phi, CoeffShape::matrix(2), &mut rng);
        let k2 = KernelField::random(&phi, CoeffShape::matrix(2), &mut rng);
        let lhs = shift_prime(&field_product(&k1, &k2).unwrap());
        let rhs = fiberwise_product(&shift_prime(&k1), &shift_prime(&k2)).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-13);
        assert_eq!(strictify(&k1).values(), shift_prime(&k1).values());
    }

    #[test]
    fn strictify_round_trip() {
        let phi = arc(volume_tricharacter(3, Turn::new(2, 3))
            .unwrap()
            .into_cochain());
        let mut rng = Xoshiro256StarStar::seed_from_u64(33);
        let k = KernelField::<f64>::random(&phi, CoeffShape::SCALAR, &mut rng);
        let d = unstrictify(&strictify(&k)).max_abs_diff(&k);
        assert!(d < 1e-14, "{d}");
    }

    #[test]
    fn strictification_for_pentagon_cocycles() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(34);
        let cases = [
            (octonion_cocycle().into_cochain(), CoeffShape::SCALAR),
            (octonion_cocycle().into_cochain(), CoeffShape::matrix(2)),
            (
                volume_tricharacter(3, Turn::new(1, 3))
                    .unwrap()
                    .into_cochain(),
                CoeffShape::SCALAR,
            ),
            (cyclic_generator(4), CoeffShape::SCALAR),
            (cyclic_generator(5), CoeffShape::matrix(2)),
        ];
        for (phi, shape) in cases {
            let r = certify_strictification::<f64>(&arc(phi), shape, 3, 1e-12, &mut rng).unwrap();
            assert!(r.ok, "{r:?}");
        }
    }

    #[test]
    fn uncorrected_product_is_not_associative() {
        let phi = arc(cyclic_generator(3));
        let mut rng = Xoshiro256StarStar::seed_from_u64(35);
        let k: Vec<_> = (0..3)
            .map(|_| KernelField::<f64>::random(&phi, CoeffShape::SCALAR, &mut rng))
            .collect();
        let left = field_product(&field_product(&k[0], &k[1]).unwrap(), &k[2]).unwrap();
        let right = field_product(&k[0], &field_product(&k[1], &k[2]).unwrap()).unwrap();
        assert!(left.max_abs_diff(&right) > 1e-3);
    }
}
