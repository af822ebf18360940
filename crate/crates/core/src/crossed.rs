//! Twisted crossed products `A ⋊_{β,v} G`, exterior equivalence and the
//! Packer–Raeburn stabilization.

use crate::coeff::{self, Aut, CoeffShape};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::scalar::{cmax_abs, roots_table, Real, C};
use crate::system::TwistedSystem;
use rand::Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct CrossedElement<T: Real> {
    pub group: FiniteAbelianGroup,
    pub shape: CoeffShape,
    pub values: Vec<C<T>>,
}

fn czero<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

impl<T: Real> CrossedElement<T> {
    pub fn zeros(group: &FiniteAbelianGroup, shape: CoeffShape) -> Self {
        Self {
            group: group.clone(),
            shape,
            values: vec![czero(); group.order() * shape.stride()],
        }
    }

    /// `δ_x · a`.
    pub fn delta(group: &FiniteAbelianGroup, shape: CoeffShape, x: usize, a: &[C<T>]) -> Self {
        let mut f = Self::zeros(group, shape);
        f.at_mut(x).copy_from_slice(a);
        f
    }

    pub fn random(group: &FiniteAbelianGroup, shape: CoeffShape, rng: &mut impl Rng) -> Self {
        let values = (0..group.order() * shape.stride())
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
    pub fn at(&self, x: usize) -> &[C<T>] {
        let s = self.shape.stride();
        &self.values[x * s..(x + 1) * s]
    }

    pub fn at_mut(&mut self, x: usize) -> &mut [C<T>] {
        let s = self.shape.stride();
        &mut self.values[x * s..(x + 1) * s]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        cmax_abs(&self.values, &other.values)
    }

    pub fn scaled(&self, c: C<T>) -> Self {
        Self {
            values: coeff::scale(&self.values, c),
            ..self.clone()
        }
    }

    fn ensure(&self, s: &TwistedSystem<T>) -> Result<()> {
        self.group.ensure_same(s.group(), "crossed element")?;
        self.shape.ensure(&s.shape())
    }
}

/// `(f ⋆ g)(x) = Σ_y f(y) β_y[g(x−y)] v(y, x−y)`.
pub fn convolve<T: Real>(
    f: &CrossedElement<T>,
    g: &CrossedElement<T>,
    s: &TwistedSystem<T>,
) -> Result<CrossedElement<T>> {
    f.ensure(s)?;
    g.ensure(s)?;
    let grp = s.group();
    let n = grp.order();
    let sh = s.shape();
    let one = C::new(T::one(), T::zero());
    let mut out = CrossedElement::zeros(grp, sh);
    let mut tmp = vec![czero::<T>(); sh.stride()];
    for y in 0..n {
        let fy = f.at(y);
        if fy.iter().all(|c| c.re == T::zero() && c.im == T::zero()) {
            continue;
        }
        for z in 0..n {
            let x = grp.add(y, z);
            let bg = s.beta(y).apply(g.at(z));
            tmp.iter_mut().for_each(|c| *c = czero());
            coeff::mul_acc(sh, fy, &bg, one, &mut tmp);
            coeff::mul_acc(sh, &tmp, s.v(y, z), one, out.at_mut(x));
        }
    }
    Ok(out)
}

/// `f*(x) = v(x,−x)^{-1} β_x[f(−x)]^*`.
pub fn crossed_adjoint<T: Real>(
    f: &CrossedElement<T>,
    s: &TwistedSystem<T>,
) -> Result<CrossedElement<T>> {
    f.ensure(s)?;
    let g = s.group();
    let sh = s.shape();
    let mut out = CrossedElement::zeros(g, sh);
    for x in 0..g.order() {
        let nx = g.neg(x);
        let b = coeff::adjoint(sh, &s.beta(x).apply(f.at(nx)));
        let vinv = coeff::unitary_inverse(sh, s.v(x, nx));
        out.at_mut(x).copy_from_slice(&coeff::mul(sh, &vinv, &b));
    }
    Ok(out)
}

/// `(β, v)` with `β_x = ad(w_x) α_x` and `v(x,y) = w_x α_x[w_y] u(x,y) w_{x+y}^{-1}`;
/// `w` holds one unitary coefficient value per element.
pub fn exterior_equivalent<T: Real>(s: &TwistedSystem<T>, w: &[C<T>]) -> Result<TwistedSystem<T>> {
    let g = s.group();
    let n = g.order();
    let sh = s.shape();
    let st = sh.stride();
    if w.len() != n * st {
        return Err(Error::Shape("one unitary per group element".into()));
    }
    let wx = |x: usize| &w[x * st..(x + 1) * st];
    let beta = (0..n)
        .map(|x| Aut::inner(sh, wx(x)).compose(s.beta(x)))
        .collect();
    let mut v = Vec::with_capacity(n * n * st);
    for x in 0..n {
        for y in 0..n {
            let a = coeff::mul(sh, wx(x), &s.beta(x).apply(wx(y)));
            let b = coeff::mul(sh, &a, s.v(x, y));
            v.extend(coeff::mul(
                sh,
                &b,
                &coeff::unitary_inverse(sh, wx(g.add(x, y))),
            ));
        }
    }
    TwistedSystem::new(sh, beta, v, s.phi().clone())
}

/// `f_w(x) = f(x) w_x`.
pub fn exterior_transport<T: Real>(f: &CrossedElement<T>, w: &[C<T>]) -> Result<CrossedElement<T>> {
    let st = f.shape.stride();
    if w.len() != f.group.order() * st {
        return Err(Error::Shape("one unitary per group element".into()));
    }
    let mut out = f.clone();
    for x in 0..f.group.order() {
        let p = coeff::mul(f.shape, f.at(x), &w[x * st..(x + 1) * st]);
        out.at_mut(x).copy_from_slice(&p);
    }
    Ok(out)
}

/// Shape of `A ⊗ M_m`: each block `b` of `A` becomes `M_m ⊗ M_d` with
/// row index `(z, i) ↦ z·d + i`.
pub fn tensor_shape(sh: CoeffShape, m: usize) -> CoeffShape {
    CoeffShape {
        blocks: sh.blocks,
        dim: sh.dim * m,
    }
}

/// `Σ_z E_{z,z'} ⊗ a_z` style embedding: `entry(z, z')` gives the `d x d`
/// coefficient block placed at `(z, z')`.
fn assemble<T: Real>(
    sh: CoeffShape,
    m: usize,
    entry: impl Fn(usize, usize, usize) -> Option<Vec<C<T>>>,
) -> Vec<C<T>> {
    let big = tensor_shape(sh, m);
    let (d, bd) = (sh.dim, big.dim);
    let mut out = vec![czero(); big.stride()];
    for b in 0..sh.blocks {
        for z in 0..m {
            for z2 in 0..m {
                if let Some(blk) = entry(b, z, z2) {
                    for i in 0..d {
                        for j in 0..d {
                            out[b * bd * bd + (z * d + i) * bd + z2 * d + j] = blk[i * d + j];
                        }
                    }
                }
            }
        }
    }
    out
}

fn block<T: Real>(sh: CoeffShape, a: &[C<T>], b: usize) -> Vec<C<T>> {
    a[b * sh.block_len()..(b + 1) * sh.block_len()].to_vec()
}

/// `a ⊗ 1_m`.
pub fn tensor_one<T: Real>(sh: CoeffShape, a: &[C<T>], m: usize) -> Vec<C<T>> {
    assemble(sh, m, |b, z, z2| (z == z2).then(|| block(sh, a, b)))
}

/// `s ⊗ 1` on `A ⊗ M_m`.
pub fn tensor_identity<T: Real>(s: &TwistedSystem<T>, m: usize) -> Result<TwistedSystem<T>> {
    let sh = s.shape();
    let big = tensor_shape(sh, m);
    let n = s.group().order();
    let beta = (0..n)
        .map(|x| {
            let b = s.beta(x);
            Aut::new(big, b.perm().to_vec(), tensor_one(sh, &b.unitaries(), m))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut v = Vec::with_capacity(n * n * big.stride());
    for x in 0..n {
        for y in 0..n {
            v.extend(tensor_one(sh, s.v(x, y), m));
        }
    }
    TwistedSystem::new(big, beta, v, s.phi().clone())
}

/// Stabilized system on `A ⊗ M_{|G|}` (on `ℓ²(G)`):
/// `(w_x a)(z) = u(x, z−x)* a(z−x)`, `β_x = ad(w_x)(α_x ⊗ id)`,
/// `v'(x,y) = diag_z φ(x,y,z−x−y) ⊗ 1`. Returns the system and the unitaries `w`.
pub fn packer_raeburn_stabilize<T: Real>(
    s: &TwistedSystem<T>,
) -> Result<(TwistedSystem<T>, Vec<C<T>>)> {
    let rep = s.validate();
    if !rep.ok {
        return Err(Error::Invalid(format!("input system: {rep:?}")));
    }
    let g = s.group();
    let n = g.order();
    let sh = s.shape();
    let big = tensor_shape(sh, n);
    let base = tensor_identity(s, n)?;
    let mut w = Vec::with_capacity(n * big.stride());
    for x in 0..n {
        // Row z, column z−x carries u(x, z−x)*.
        let adj: Vec<Vec<C<T>>> = (0..n).map(|z2| coeff::adjoint(sh, s.v(x, z2))).collect();
        w.extend(assemble(sh, n, |b, z, z2| {
            (z2 == g.sub(z, x)).then(|| block(sh, &adj[z2], b))
        }));
    }
    let phi = s.phi();
    let roots = roots_table::<T>(phi.modulus());
    let beta = (0..n)
        .map(|x| {
            Aut::inner(big, &w[x * big.stride()..(x + 1) * big.stride()]).compose(base.beta(x))
        })
        .collect();
    let mut v = Vec::with_capacity(n * n * big.stride());
    let one = coeff::identity::<T>(CoeffShape::matrix(sh.dim));
    for x in 0..n {
        for y in 0..n {
            let xy = g.add(x, y);
            v.extend(assemble(sh, n, |_, z, z2| {
                (z == z2).then(|| {
                    let p = roots[phi.num3(x, y, g.sub(z, xy)) as usize];
                    coeff::scale(&one, p)
                })
            }));
        }
    }
    Ok((TwistedSystem::new(big, beta, v, phi.clone())?, w))
}

/// Largest commutator `‖[c, a ⊗ 1]‖` over `c = v'(x,y)` and the matrix units `a` of `A`.
pub fn central_defect<T: Real>(stab: &TwistedSystem<T>, base: CoeffShape, m: usize) -> T {
    let n = stab.group().order();
    let sh = stab.shape();
    let mut worst = T::zero();
    for b in 0..base.blocks {
        for i in 0..base.dim {
            for j in 0..base.dim {
                let mut e = vec![czero::<T>(); base.stride()];
                e[b * base.block_len() + i * base.dim + j] = C::new(T::one(), T::zero());
                let a = tensor_one(base, &e, m);
                for x in 0..n {
                    for y in 0..n {
                        let c = stab.v(x, y);
                        worst = worst.max(cmax_abs(&coeff::mul(sh, c, &a), &coeff::mul(sh, &a, c)));
                    }
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{octonion_cocycle, volume_tricharacter, PhaseCochain, Turn};
    use crate::system::build_canonical_system;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256StarStar;
    use std::sync::Arc;

    fn oct_system(dim: usize) -> TwistedSystem<f64> {
        build_canonical_system(&octonion_cocycle(), dim)
            .unwrap()
            .system
    }

    /// Independent double loop: Σ_{y,z: y+z=x}.
    fn naive_convolve(
        f: &CrossedElement<f64>,
        g: &CrossedElement<f64>,
        s: &TwistedSystem<f64>,
    ) -> CrossedElement<f64> {
        let grp = s.group();
        let n = grp.order();
        let sh = s.shape();
        let mut out = CrossedElement::zeros(grp, sh);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if grp.add(y, z) != x {
                        continue;
                    }
                    let t = coeff::mul3(sh, f.at(y), &s.beta(y).apply(g.at(z)), s.v(y, z));
                    for (o, t) in out.at_mut(x).iter_mut().zip(t) {
                        *o += t;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn trivial_system_is_group_algebra() {
        let g = FiniteAbelianGroup::cyclic(2);
        let s = TwistedSystem::<f64>::trivial(
            Arc::new(PhaseCochain::zero(&g, 3, 1)),
            CoeffShape::SCALAR,
        )
        .unwrap();
        let one = [C::new(1.0, 0.0)];
        for a in 0..2 {
            for b in 0..2 {
                let p = convolve(
                    &CrossedElement::delta(&g, s.shape(), a, &one),
                    &CrossedElement::delta(&g, s.shape(), b, &one),
                    &s,
                )
                .unwrap();
                assert_eq!(p, CrossedElement::delta(&g, s.shape(), g.add(a, b), &one));
            }
        }
        let f = CrossedElement::delta(&g, s.shape(), 1, &[C::new(0.5, 2.0)]);
        assert_eq!(crossed_adjoint(&f, &s).unwrap().at(1)[0], C::new(0.5, -2.0));
    }

    #[test]
    fn convolve_matches_oracle_and_delta_rule() {
        let s = oct_system(2);
        let mut rng = Xoshiro256StarStar::seed_from_u64(1);
        let f = CrossedElement::random(s.group(), s.shape(), &mut rng);
        let g = CrossedElement::random(s.group(), s.shape(), &mut rng);
        assert!(
            convolve(&f, &g, &s)
                .unwrap()
                .max_abs_diff(&naive_convolve(&f, &g, &s))
                < 1e-13
        );
        let a = CrossedElement::random(s.group(), s.shape(), &mut rng);
        let (y, z) = (3, 6);
        let fa = CrossedElement::delta(s.group(), s.shape(), y, a.at(0));
        let gb = CrossedElement::delta(s.group(), s.shape(), z, a.at(1));
        let want = coeff::mul3(s.shape(), a.at(0), &s.beta(y).apply(a.at(1)), s.v(y, z));
        let got = convolve(&fa, &gb, &s).unwrap();
        assert!(cmax_abs(got.at(s.group().add(y, z)), &want) < 1e-15);
    }

    #[test]
    fn adjoint_involution_and_antihomomorphism() {
        let s = oct_system(2);
        let mut rng = Xoshiro256StarStar::seed_from_u64(2);
        let f = CrossedElement::random(s.group(), s.shape(), &mut rng);
        let g = CrossedElement::random(s.group(), s.shape(), &mut rng);
        let ff = crossed_adjoint(&crossed_adjoint(&f, &s).unwrap(), &s).unwrap();
        assert!(ff.max_abs_diff(&f) < 1e-12);
        let lhs = crossed_adjoint(&convolve(&f, &g, &s).unwrap(), &s).unwrap();
        let rhs = convolve(
            &crossed_adjoint(&g, &s).unwrap(),
            &crossed_adjoint(&f, &s).unwrap(),
            &s,
        )
        .unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn delta_associator_is_phi() {
        let phi = volume_tricharacter(3, Turn::new(1, 3)).unwrap();
        let s = build_canonical_system::<f64>(&phi, 1).unwrap().system;
        let g = s.group().clone();
        let mut rng = Xoshiro256StarStar::seed_from_u64(3);
        let r = CrossedElement::random(&g, s.shape(), &mut rng);
        for (x, y, z) in [(1, 3, 9), (5, 7, 20), (26, 13, 4)] {
            let f = CrossedElement::delta(&g, s.shape(), x, r.at(0));
            let gg = CrossedElement::delta(&g, s.shape(), y, r.at(1));
            let h = CrossedElement::delta(&g, s.shape(), z, r.at(2));
            let left = convolve(&convolve(&f, &gg, &s).unwrap(), &h, &s).unwrap();
            let right = convolve(&f, &convolve(&gg, &h, &s).unwrap(), &s).unwrap();
            let p: C<f64> = phi.phase(&[x, y, z]);
            assert!(left.max_abs_diff(&right.scaled(p)) < 1e-13);
            assert!(left.max_abs_diff(&right) > 0.1 || phi.num3(x, y, z) == 0);
        }
    }

    fn random_diag_unitaries(n: usize, sh: CoeffShape, rng: &mut impl Rng) -> Vec<C<f64>> {
        let mut w = Vec::new();
        for x in 0..n {
            let ph: Vec<C<f64>> = (0..sh.blocks)
                .map(|_| C::from_polar(1.0, rng.gen_range(0.0..6.3)))
                .collect();
            let mut v = coeff::diagonal_phases(sh, &ph);
            if x == 0 {
                v = coeff::identity(sh);
            }
            w.extend(v);
        }
        w
    }

    #[test]
    fn exterior_transport_intertwines() {
        let s = oct_system(1);
        let mut rng = Xoshiro256StarStar::seed_from_u64(4);
        let w = random_diag_unitaries(8, s.shape(), &mut rng);
        let t = exterior_equivalent(&s, &w).unwrap();
        assert!(t.validate().ok);
        let f = CrossedElement::random(s.group(), s.shape(), &mut rng);
        let g = CrossedElement::random(s.group(), s.shape(), &mut rng);
        let lhs = exterior_transport(&convolve(&f, &g, &t).unwrap(), &w).unwrap();
        let rhs = convolve(
            &exterior_transport(&f, &w).unwrap(),
            &exterior_transport(&g, &w).unwrap(),
            &s,
        )
        .unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let id = coeff::identity::<f64>(s.shape()).repeat(8);
        assert_eq!(exterior_transport(&f, &id).unwrap(), f);
    }

    #[test]
    fn stabilization_validates_and_matches_exterior_equivalence() {
        for dim in [1, 2] {
            let s = oct_system(dim);
            let (stab, w) = packer_raeburn_stabilize(&s).unwrap();
            let r = stab.validate();
            assert!(r.ok, "{r:?}");
            assert!(central_defect(&stab, s.shape(), 8) < 1e-15);
            let ext = exterior_equivalent(&tensor_identity(&s, 8).unwrap(), &w).unwrap();
            assert!(cmax_abs(ext.v_all(), stab.v_all()) < 1e-13);
        }
    }

    #[test]
    fn stabilization_of_non_symmetric_cocycles() {
        for (n, dim) in [(4, 1), (5, 2)] {
            let phi = crate::cochain::cyclic_generator(n);
            let s = build_canonical_system::<f64>(&phi, dim).unwrap().system;
            let (stab, _) = packer_raeburn_stabilize(&s).unwrap();
            let r = stab.validate();
            assert!(r.ok, "Z{n}: {r:?}");
            assert!(central_defect(&stab, s.shape(), n as usize) < 1e-15);
        }
    }

    #[test]
    fn stabilization_of_trivial_system_is_trivial() {
        let g = FiniteAbelianGroup::cyclic(3);
        let s = TwistedSystem::<f64>::trivial(
            Arc::new(PhaseCochain::zero(&g, 3, 1)),
            CoeffShape::SCALAR,
        )
        .unwrap();
        let (stab, _) = packer_raeburn_stabilize(&s).unwrap();
        let one = coeff::identity::<f64>(stab.shape());
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(stab.v(x, y), &one[..]);
            }
        }
    }
}
