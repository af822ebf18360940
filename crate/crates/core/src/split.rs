//! Splitting a twisted action of `G = G₁ × G₂` into an iterated crossed
//! product, with the induced obstruction `varphi(xX, yY, zZ) = 3·φ(X, y, z)`.

use crate::cochain::{PhaseCochain, Turn};
use crate::coeff::{self, Aut, CoeffShape};
use crate::crossed::{convolve, CrossedElement};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::scalar::{roots_table, Real, C};
use crate::system::{canonical_phase_system, ExactReport, PhaseSystem, TwistedSystem, Witness};
use num_integer::Integer;
use std::sync::Arc;

/// One factor of a coordinate split, with projection from and embedding into `G`.
#[derive(Clone, Debug)]
pub struct Factor {
    pub group: FiniteAbelianGroup,
    pub embed: Vec<usize>,
    pub project: Vec<usize>,
}

impl Factor {
    fn new(g: &FiniteAbelianGroup, range: std::ops::Range<usize>) -> Result<Self> {
        let (group, embed) = g.factor_subgroup(range.clone());
        let project = (0..g.order())
            .map(|p| {
                let c: Vec<i64> = range.clone().map(|j| g.coord(p, j) as i64).collect();
                group.index_of_coords(&c)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            group,
            embed,
            project,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SplitSystem {
    /// The input, with `v` trivial on each factor.
    pub base: PhaseSystem,
    pub g1: Factor,
    pub g2: Factor,
    /// `ṽ(X, y)` for `X ∈ G₂`, `y ∈ G₁`, at `(X·|G₁| + y)·blocks`, over `modulus`.
    vt: Vec<u64>,
    modulus: u64,
    pub varphi: PhaseCochain,
    /// `β̂_{xX} = β_x β_X`, `v̂(xX, yY) = β_x[ṽ(X, y)]`, obstruction `varphi`.
    pub hat: PhaseSystem,
}

fn hypothesis(what: &str, args: &[usize]) -> Error {
    Error::SplitHypothesis(format!("{what} at {args:?}"))
}

/// `ṽ(X,y) = v(X,y) v(y,X)^{-1}` and the split system, after checking that
/// `φ` vanishes on `G₁³` and whenever two arguments lie in `G₂`, and that `v`
/// is trivial on `G₁ × G₁` and `G₂ × G₂`. `G₁` is spanned by the first
/// `rank1` coordinates.
pub fn split_system(base: &PhaseSystem, rank1: usize) -> Result<SplitSystem> {
    let g = base.group().clone();
    if rank1 == 0 || rank1 >= g.rank() {
        return Err(Error::Config(format!(
            "split rank {rank1} for a rank-{} group",
            g.rank()
        )));
    }
    let g1 = Factor::new(&g, 0..rank1)?;
    let g2 = Factor::new(&g, rank1..g.rank())?;
    let phi = base.phi();
    let b = base.blocks();
    for f in [&g1, &g2] {
        for &x in &f.embed {
            for &y in &f.embed {
                if let Some(i) = (0..b).find(|&i| base.v(x, y, i) != 0) {
                    return Err(hypothesis("v nontrivial on a factor", &[x, y, i]));
                }
            }
        }
    }
    for &x in &g1.embed {
        for &y in &g1.embed {
            for &z in &g1.embed {
                if phi.num3(x, y, z) != 0 {
                    return Err(hypothesis("phi nontrivial on G1", &[x, y, z]));
                }
            }
        }
    }
    let n = g.order();
    for &x in &g2.embed {
        for &y in &g2.embed {
            for z in 0..n {
                for a in [[x, y, z], [x, z, y], [z, x, y]] {
                    if phi.num(&a) != 0 {
                        return Err(hypothesis("phi nontrivial with two arguments in G2", &a));
                    }
                }
            }
        }
    }

    let m = base.modulus();
    let (n1, n2) = (g1.group.order(), g2.group.order());
    let mut vt = vec![0u64; n2 * n1 * b];
    for (xi, &x) in g2.embed.iter().enumerate() {
        for (yi, &y) in g1.embed.iter().enumerate() {
            for i in 0..b {
                vt[(xi * n1 + yi) * b + i] = (base.v(x, y, i) + m - base.v(y, x, i)) % m;
            }
        }
    }

    let varphi = PhaseCochain::from_fn(&g, 3, phi.modulus(), |a| {
        3 * phi.num3(
            g2.embed[g2.project[a[0]]],
            g1.embed[g1.project[a[1]]],
            g1.embed[g1.project[a[2]]],
        ) as i64
    });
    let mut vh = vec![0u64; n * n * b];
    for p in 0..n {
        let perm = base.perm(g1.embed[g1.project[p]]);
        for q in 0..n {
            let k = (g2.project[p] * n1 + g1.project[q]) * b;
            for i in 0..b {
                vh[(p * n + q) * b + i] = vt[k + perm[i]];
            }
        }
    }
    let perms = (0..n).map(|p| base.perm(p).to_vec()).collect();
    let hat = PhaseSystem::new(b, perms, vh, m, varphi.clone())?;
    Ok(SplitSystem {
        base: base.clone(),
        g1,
        g2,
        vt,
        modulus: m,
        varphi,
        hat,
    })
}

/// Canonical volume system on `Z_N² × Z_N`, gauged by
/// `w(α; x) = −s·θ·α₃(α₁x₂ − α₂x₁)` so that `v` is trivial on both factors.
pub fn volume_split_system(n: u32, theta: Turn) -> Result<SplitSystem> {
    let phi = crate::cochain::volume_tricharacter(n, theta)?.into_cochain();
    let (exact, sign) = [-1i64, 1]
        .into_iter()
        .map(|s| (canonical_phase_system(&phi, s), s))
        .find(|(e, _)| e.as_ref().map(|e| e.validate_exact().ok).unwrap_or(false))
        .ok_or_else(|| Error::Invalid("canonical system does not validate".into()))?;
    let exact = exact?;
    let g = phi.group().clone();
    let q = *theta.denom() as u64;
    let p = *theta.numer();
    let ord = g.order();
    let mut w = vec![0u64; ord * ord];
    for x in 0..ord {
        let xc = crate::cochain::coords_i64(&g, x);
        for a in 0..ord {
            let ac = crate::cochain::coords_i64(&g, a);
            let t = -sign * p * ac[2] * (ac[0] * xc[1] - ac[1] * xc[0]);
            w[x * ord + a] = t.rem_euclid(q as i64) as u64;
        }
    }
    split_system(&exact.exterior_gauge(&w, q)?, 2)
}

impl SplitSystem {
    pub fn blocks(&self) -> usize {
        self.base.blocks()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `ṽ(X, y)` with `X` indexed in `G₂` and `y` in `G₁`.
    pub fn vt(&self, x2: usize, y1: usize) -> &[u64] {
        let b = self.blocks();
        let k = (x2 * self.g1.group.order() + y1) * b;
        &self.vt[k..k + b]
    }

    /// Exhaustive exact check of
    /// `ṽ(X+Y, z) = β_X[ṽ(Y, z)] ṽ(X, z)` and
    /// `ṽ(X, y+z) = φ(X, y, z)^{-3} ṽ(X, y) β_y[ṽ(X, z)]`.
    pub fn vtilde_identities(&self) -> ExactReport {
        let phi = self.base.phi();
        let l = self.modulus.lcm(&phi.modulus());
        let (fv, fp) = (l / self.modulus, l / phi.modulus());
        let b = self.blocks();
        let (g1, g2) = (&self.g1.group, &self.g2.group);
        let fail = |check: &str, args: Vec<usize>| ExactReport {
            ok: false,
            witness: Some(Witness {
                check: check.into(),
                args,
            }),
        };
        for x in 0..g2.order() {
            let px = self.base.perm(self.g2.embed[x]);
            for y in 0..g2.order() {
                let xy = g2.add(x, y);
                for z in 0..g1.order() {
                    for i in 0..b {
                        let lhs = self.vt(xy, z)[i] * fv;
                        let rhs = (self.vt(y, z)[px[i]] + self.vt(x, z)[i]) * fv;
                        if lhs % l != rhs % l {
                            return fail("vt(X+Y,z)", vec![x, y, z, i]);
                        }
                    }
                }
            }
        }
        for x in 0..g2.order() {
            let xg = self.g2.embed[x];
            for y in 0..g1.order() {
                let py = self.base.perm(self.g1.embed[y]);
                for z in 0..g1.order() {
                    let yz = g1.add(y, z);
                    let ph = 3 * phi.num3(xg, self.g1.embed[y], self.g1.embed[z]) * fp;
                    for i in 0..b {
                        let lhs = (self.vt(x, yz)[i] * fv + ph) % l;
                        let rhs = (self.vt(x, y)[i] + self.vt(x, z)[py[i]]) * fv % l;
                        if lhs != rhs {
                            return fail("vt(X,y+z)", vec![x, y, z, i]);
                        }
                    }
                }
            }
        }
        ExactReport {
            ok: true,
            witness: None,
        }
    }

    /// `φ_X(y, z) = varphi(X, y, z)` on `G₁`, as a 2-cochain.
    pub fn phi_x(&self, x2: usize) -> PhaseCochain {
        let xg = self.g2.embed[x2];
        PhaseCochain::from_fn(&self.g1.group, 2, self.varphi.modulus(), |a| {
            self.varphi
                .num3(xg, self.g1.embed[a[0]], self.g1.embed[a[1]]) as i64
        })
    }

    /// Numerical `ŝ` on `C(blocks)`.
    pub fn hat_system<T: Real>(&self) -> Result<TwistedSystem<T>> {
        self.hat
            .to_system(1, &|_| vec![C::new(T::one(), T::zero())])
    }

    /// Restriction of `β` to `G₁` with `v ≡ 1` (trivial there by hypothesis).
    pub fn g1_system<T: Real>(&self) -> Result<TwistedSystem<T>> {
        let shape = CoeffShape::functions(self.blocks(), 1);
        let n1 = self.g1.group.order();
        let beta = self
            .g1
            .embed
            .iter()
            .map(|&y| Aut::permutation(shape, self.base.perm(y).to_vec()))
            .collect::<Result<Vec<_>>>()?;
        let v = coeff::identity::<T>(shape).repeat(n1 * n1);
        TwistedSystem::new(
            shape,
            beta,
            v,
            Arc::new(PhaseCochain::zero(&self.g1.group, 3, 1)),
        )
    }

    /// `G₁` system whose `v` is the scalar multiplier `σ`.
    pub fn g1_with_multiplier<T: Real>(&self, sigma: &PhaseCochain) -> Result<TwistedSystem<T>> {
        self.g1.group.ensure_same(sigma.group(), "multiplier")?;
        let s1 = self.g1_system::<T>()?;
        let shape = s1.shape();
        let n1 = self.g1.group.order();
        let mut v = Vec::with_capacity(n1 * n1 * shape.stride());
        for y in 0..n1 {
            for z in 0..n1 {
                v.extend(coeff::scale(&coeff::identity(shape), sigma.phase(&[y, z])));
            }
        }
        s1.with_v(v)
    }

    /// `G₁` system with the `C(G)`-valued multiplier
    /// `φ_•(y, z)(α) = varphi(α_{G₂}, y, z)`.
    pub fn g1_with_bullet<T: Real>(&self) -> Result<TwistedSystem<T>> {
        let s1 = self.g1_system::<T>()?;
        let shape = s1.shape();
        let b = self.blocks();
        if b != self.base.group().order() {
            return Err(Error::Config(
                "φ_• needs the coefficient algebra C(G)".into(),
            ));
        }
        let roots = roots_table::<T>(self.varphi.modulus());
        let n1 = self.g1.group.order();
        let mut v = Vec::with_capacity(n1 * n1 * shape.stride());
        for y in 0..n1 {
            for z in 0..n1 {
                let ph: Vec<C<T>> = (0..b)
                    .map(|a| {
                        let a2 = self.g2.embed[self.g2.project[a]];
                        roots[self.varphi.num3(a2, self.g1.embed[y], self.g1.embed[z]) as usize]
                    })
                    .collect();
                v.extend(coeff::diagonal_phases(shape, &ph));
            }
        }
        s1.with_v(v)
    }

    /// `β̃_X[f](y) = β_X[f(y)] ṽ(X, y)` on `C(blocks)`-valued functions on `G₁`.
    pub fn tilde_beta<T: Real>(
        &self,
        x2: usize,
        f: &CrossedElement<T>,
    ) -> Result<CrossedElement<T>> {
        f.group.ensure_same(&self.g1.group, "G1 element")?;
        let shape = CoeffShape::functions(self.blocks(), 1);
        shape.ensure(&f.shape)?;
        let roots = roots_table::<T>(self.modulus);
        let perm = self.base.perm(self.g2.embed[x2]);
        let mut out = f.clone();
        for y in 0..self.g1.group.order() {
            let src = f.at(y);
            let vt = self.vt(x2, y);
            for (i, o) in out.at_mut(y).iter_mut().enumerate() {
                *o = src[perm[i]] * roots[vt[i] as usize];
            }
        }
        Ok(out)
    }

    /// Slice `f_Y(y) = f(y + Y)`.
    pub fn slice<T: Real>(&self, f: &CrossedElement<T>, y2: usize) -> CrossedElement<T> {
        let mut out = CrossedElement::zeros(&self.g1.group, f.shape);
        let g = self.base.group();
        for (y1, &yg) in self.g1.embed.iter().enumerate() {
            out.at_mut(y1)
                .copy_from_slice(f.at(g.add(yg, self.g2.embed[y2])));
        }
        out
    }

    /// `(f⋆g)_X = Σ_Y f_Y ⋆₁ β̃_Y[g_{X−Y}]`, reassembled on `G`.
    pub fn repeated_convolve<T: Real>(
        &self,
        f: &CrossedElement<T>,
        g: &CrossedElement<T>,
    ) -> Result<CrossedElement<T>> {
        let grp = self.base.group();
        f.group.ensure_same(grp, "repeated_convolve")?;
        g.group.ensure_same(grp, "repeated_convolve")?;
        let s1 = self.g1_system::<T>()?;
        let g2 = &self.g2.group;
        let mut out = CrossedElement::zeros(grp, f.shape);
        for x in 0..g2.order() {
            let mut acc = CrossedElement::zeros(&self.g1.group, f.shape);
            for y in 0..g2.order() {
                let t = self.tilde_beta(y, &self.slice(g, g2.sub(x, y)))?;
                let p = convolve(&self.slice(f, y), &t, &s1)?;
                acc.values
                    .iter_mut()
                    .zip(&p.values)
                    .for_each(|(a, b)| *a += *b);
            }
            for (y1, &yg) in self.g1.embed.iter().enumerate() {
                out.at_mut(grp.add(yg, self.g2.embed[x]))
                    .copy_from_slice(acc.at(y1));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::antisymmetrize;
    use crate::crossed::packer_raeburn_stabilize;
    use crate::scalar::cmax_abs;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256StarStar;

    #[test]
    fn trivial_split_is_identity() {
        let g = FiniteAbelianGroup::power(2, 3);
        let phi = PhaseCochain::zero(&g, 3, 1);
        let base = canonical_phase_system(&phi, 1).unwrap();
        let sp = split_system(&base, 2).unwrap();
        assert!(sp.vt.iter().all(|&t| t == 0));
        assert_eq!(sp.hat, base);
    }

    #[test]
    fn ungauged_volume_system_violates_hypotheses() {
        let phi = crate::cochain::volume_tricharacter(3, Turn::new(1, 3)).unwrap();
        let base = canonical_phase_system(&phi, -1).unwrap();
        assert!(matches!(
            split_system(&base, 2),
            Err(Error::SplitHypothesis(_))
        ));
    }

    #[test]
    fn volume_split_identities_exact() {
        for (n, th) in [
            (2, Turn::new(1, 2)),
            (3, Turn::new(1, 3)),
            (3, Turn::new(2, 3)),
        ] {
            let sp = volume_split_system(n, th).unwrap();
            let r = sp.vtilde_identities();
            assert!(r.ok, "N={n}: {r:?}");
            let r = sp.hat.validate_exact();
            assert!(r.ok, "N={n}: {r:?}");
        }
    }

    #[test]
    fn varphi_recovers_phi_only_without_three_torsion() {
        let sp = volume_split_system(2, Turn::new(1, 2)).unwrap();
        assert_eq!(&antisymmetrize(&sp.varphi).unwrap(), sp.base.phi());
        let sp = volume_split_system(3, Turn::new(1, 3)).unwrap();
        assert!(sp.varphi.is_zero());
        assert_ne!(&antisymmetrize(&sp.varphi).unwrap(), sp.base.phi());
    }

    #[test]
    fn repeated_matches_direct() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(21);
        for n in [2, 3] {
            let sp = volume_split_system(n, Turn::new(1, n as i64)).unwrap();
            let s = sp.hat_system::<f64>().unwrap();
            let f = CrossedElement::random(s.group(), s.shape(), &mut rng);
            let g = CrossedElement::random(s.group(), s.shape(), &mut rng);
            let a = sp.repeated_convolve(&f, &g).unwrap();
            let b = convolve(&f, &g, &s).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-13);
        }
    }

    #[test]
    fn tilde_beta_is_a_homomorphism() {
        let sp = volume_split_system(3, Turn::new(1, 3)).unwrap();
        let mut rng = Xoshiro256StarStar::seed_from_u64(22);
        let f = CrossedElement::<f64>::random(&sp.g1.group, CoeffShape::functions(27, 1), &mut rng);
        for x in 0..3 {
            for y in 0..3 {
                let a = sp.tilde_beta(x, &sp.tilde_beta(y, &f).unwrap()).unwrap();
                let b = sp.tilde_beta((x + y) % 3, &f).unwrap();
                assert!(a.max_abs_diff(&b) < 1e-13);
            }
        }
    }

    fn random_multiplier(g: &FiniteAbelianGroup, m: u64, rng: &mut impl Rng) -> PhaseCochain {
        let n = g.order();
        let table: Vec<i64> = (0..n * n).map(|_| rng.gen_range(0..m as i64)).collect();
        PhaseCochain::from_fn(g, 2, m, |a| {
            if a[0] == 0 || a[1] == 0 {
                0
            } else {
                table[a[0] * n + a[1]]
            }
        })
    }

    #[test]
    fn multiplier_shift() {
        let sp = volume_split_system(2, Turn::new(1, 2)).unwrap();
        let mut rng = Xoshiro256StarStar::seed_from_u64(23);
        let sigma = random_multiplier(&sp.g1.group, 4, &mut rng);
        let shape = CoeffShape::functions(8, 1);
        let f = CrossedElement::random(&sp.g1.group, shape, &mut rng);
        let g = CrossedElement::random(&sp.g1.group, shape, &mut rng);
        let s_sigma = sp.g1_with_multiplier::<f64>(&sigma).unwrap();
        for x in 0..2 {
            let shifted = sigma.combine(1, &sp.phi_x(x), 1).unwrap();
            let s_shift = sp.g1_with_multiplier::<f64>(&shifted).unwrap();
            let lhs = sp
                .tilde_beta(x, &convolve(&f, &g, &s_sigma).unwrap())
                .unwrap();
            let rhs = convolve(
                &sp.tilde_beta(x, &f).unwrap(),
                &sp.tilde_beta(x, &g).unwrap(),
                &s_shift,
            )
            .unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-13, "X = {x}");
        }
    }

    #[test]
    fn bullet_product_is_preserved_after_stabilization() {
        let sp = volume_split_system(2, Turn::new(1, 2)).unwrap();
        let s = sp.g1_with_bullet::<f64>().unwrap();
        assert!(s.validate().ok);
        let (stab, _) = packer_raeburn_stabilize(&s).unwrap();
        assert!(stab.validate().ok);
        let one = coeff::identity::<f64>(stab.shape());
        assert!(cmax_abs(stab.v_all(), &one.repeat(16)) < 1e-15);
        let mut rng = Xoshiro256StarStar::seed_from_u64(24);
        let f = CrossedElement::random(&sp.g1.group, s.shape(), &mut rng);
        let g = CrossedElement::random(&sp.g1.group, s.shape(), &mut rng);
        for x in 0..2 {
            let lhs = sp.tilde_beta(x, &convolve(&f, &g, &s).unwrap()).unwrap();
            let rhs = convolve(
                &sp.tilde_beta(x, &f).unwrap(),
                &sp.tilde_beta(x, &g).unwrap(),
                &s,
            )
            .unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-11, "X = {x}");
        }
    }
}
