//! Twisted actions `(β, v)` of `G` on a coefficient algebra, with 3-cocycle
//! obstruction `φ` in the convention
//! `v(x,y) v(x+y,z) = φ(x,y,z) β_x[v(y,z)] v(x,y+z)`.

use crate::cochain::PhaseCochain;
use crate::coeff::{self, Aut, CoeffShape};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::scalar::{cmax_abs, roots_table, Real, C};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const VALIDATION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub args: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub defect: f64,
    pub witness: Option<Witness>,
}

impl ValidationReport {
    fn new() -> Self {
        Self {
            ok: true,
            defect: 0.0,
            witness: None,
        }
    }
    fn record(&mut self, d: f64, check: &str, args: &[usize]) {
        if d > self.defect || (d.is_nan() && !self.defect.is_nan()) {
            self.defect = d;
            self.witness = Some(Witness {
                check: check.into(),
                args: args.to_vec(),
            });
        }
    }
    fn finish(mut self) -> Self {
        self.ok = self.defect < VALIDATION_TOL;
        if self.ok {
            self.witness = None;
        }
        self
    }
}

#[derive(Clone, Debug)]
pub struct TwistedSystem<T: Real> {
    group: FiniteAbelianGroup,
    shape: CoeffShape,
    beta: Vec<Aut<T>>,
    v: Vec<C<T>>,
    phi: Arc<PhaseCochain>,
}

impl<T: Real> TwistedSystem<T> {
    pub fn new(
        shape: CoeffShape,
        beta: Vec<Aut<T>>,
        v: Vec<C<T>>,
        phi: Arc<PhaseCochain>,
    ) -> Result<Self> {
        let group = phi.group().clone();
        let n = group.order();
        if phi.degree() != 3 {
            return Err(Error::Degree {
                expected: 3,
                got: phi.degree(),
            });
        }
        if beta.len() != n || beta.iter().any(|b| b.shape() != shape) {
            return Err(Error::Shape(
                "one automorphism of the coefficient shape per element".into(),
            ));
        }
        if v.len() != n * n * shape.stride() {
            return Err(Error::Shape(
                "v needs one coefficient value per pair".into(),
            ));
        }
        Ok(Self {
            group,
            shape,
            beta,
            v,
            phi,
        })
    }

    /// `β ≡ id`, `v ≡ 1`, with the given obstruction (normally trivial).
    pub fn trivial(phi: Arc<PhaseCochain>, shape: CoeffShape) -> Result<Self> {
        let n = phi.group().order();
        let one = coeff::identity::<T>(shape);
        let v = (0..n * n).flat_map(|_| one.iter().copied()).collect();
        Self::new(shape, vec![Aut::identity(shape); n], v, phi)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }
    pub fn shape(&self) -> CoeffShape {
        self.shape
    }
    pub fn phi(&self) -> &Arc<PhaseCochain> {
        &self.phi
    }
    pub fn beta(&self, x: usize) -> &Aut<T> {
        &self.beta[x]
    }
    pub fn betas(&self) -> &[Aut<T>] {
        &self.beta
    }
    #[inline]
    pub fn v(&self, x: usize, y: usize) -> &[C<T>] {
        let s = self.shape.stride();
        let i = (x * self.group.order() + y) * s;
        &self.v[i..i + s]
    }
    pub fn v_all(&self) -> &[C<T>] {
        &self.v
    }

    /// Same action and `v`, declared obstruction replaced.
    pub fn with_phi(&self, phi: Arc<PhaseCochain>) -> Result<Self> {
        self.group.ensure_same(phi.group(), "with_phi")?;
        Ok(Self {
            phi,
            ..self.clone()
        })
    }

    /// Same action and obstruction, `v` replaced.
    pub fn with_v(&self, v: Vec<C<T>>) -> Result<Self> {
        Self::new(self.shape, self.beta.clone(), v, self.phi.clone())
    }

    /// Exhaustive check of normalization, `β_xβ_y = ad(v(x,y))β_{x+y}` on the
    /// matrix-unit spanning set, and the twisted cocycle identity.
    pub fn validate(&self) -> ValidationReport {
        let g = &self.group;
        let n = g.order();
        let s = self.shape;
        let one = coeff::identity::<T>(s);
        let mut r = ValidationReport::new();
        r.record(
            self.beta[0].spanning_defect(&Aut::identity(s)).0.to_f64(),
            "beta_0 = id",
            &[0],
        );
        for x in 0..n {
            r.record(cmax_abs(self.v(0, x), &one).to_f64(), "v(0,x) = 1", &[x]);
            r.record(cmax_abs(self.v(x, 0), &one).to_f64(), "v(x,0) = 1", &[x]);
            r.record(
                cmax_abs(
                    &coeff::mul(s, self.v(x, 0), &coeff::adjoint(s, self.v(x, 0))),
                    &one,
                )
                .to_f64(),
                "v unitary",
                &[x],
            );
        }
        for x in 0..n {
            for y in 0..n {
                let lhs = self.beta[x].compose(&self.beta[y]);
                let rhs = Aut::inner(s, self.v(x, y)).compose(&self.beta[g.add(x, y)]);
                r.record(
                    lhs.spanning_defect(&rhs).0.to_f64(),
                    "beta_x beta_y = ad(v) beta_x+y",
                    &[x, y],
                );
            }
        }
        let roots = roots_table::<T>(self.phi.modulus());
        for x in 0..n {
            for y in 0..n {
                let xy = g.add(x, y);
                for z in 0..n {
                    let lhs = coeff::mul(s, self.v(x, y), self.v(xy, z));
                    let p = roots[self.phi.num3(x, y, z) as usize];
                    let bv = self.beta[x].apply(self.v(y, z));
                    let mut rhs = vec![C::new(T::zero(), T::zero()); s.stride()];
                    coeff::mul_acc(s, &bv, self.v(x, g.add(y, z)), p, &mut rhs);
                    r.record(
                        cmax_abs(&lhs, &rhs).to_f64(),
                        "cocycle identity",
                        &[x, y, z],
                    );
                }
            }
        }
        r.finish()
    }
}

/// A twisted action on `C(blocks)` by block permutations, with `v` a phase
/// function on the blocks, all in exact turns.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSystem {
    group: FiniteAbelianGroup,
    blocks: usize,
    /// `β_x[f](i) = f(perms[x][i])`.
    perms: Vec<Vec<usize>>,
    /// `v(x,y)(i)` at `(x·|G| + y)·blocks + i`, over `modulus`.
    v: Vec<u64>,
    modulus: u64,
    phi: PhaseCochain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactReport {
    pub ok: bool,
    pub witness: Option<Witness>,
}

impl PhaseSystem {
    pub fn new(
        blocks: usize,
        perms: Vec<Vec<usize>>,
        v: Vec<u64>,
        modulus: u64,
        phi: PhaseCochain,
    ) -> Result<Self> {
        let group = phi.group().clone();
        let n = group.order();
        if perms.len() != n || perms.iter().any(|p| p.len() != blocks) || v.len() != n * n * blocks
        {
            return Err(Error::Shape("phase system tables".into()));
        }
        Ok(Self {
            group,
            blocks,
            perms,
            v: v.into_iter().map(|t| t % modulus).collect(),
            modulus,
            phi,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }
    pub fn blocks(&self) -> usize {
        self.blocks
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn phi(&self) -> &PhaseCochain {
        &self.phi
    }
    pub fn perm(&self, x: usize) -> &[usize] {
        &self.perms[x]
    }
    #[inline]
    pub fn v(&self, x: usize, y: usize, i: usize) -> u64 {
        self.v[(x * self.group.order() + y) * self.blocks + i]
    }
    pub fn v_fn(&self, x: usize, y: usize) -> &[u64] {
        let b = self.blocks;
        let k = (x * self.group.order() + y) * b;
        &self.v[k..k + b]
    }

    /// `β_x[f]` for a phase function `f` on the blocks.
    pub fn act(&self, x: usize, f: &[u64]) -> Vec<u64> {
        self.perms[x].iter().map(|&p| f[p]).collect()
    }

    pub fn with_phi(&self, phi: PhaseCochain) -> Self {
        Self {
            phi,
            ..self.clone()
        }
    }

    /// Same system over a modulus divisible by both `v`'s and `φ`'s.
    fn common_modulus(&self) -> (u64, u64, u64) {
        use num_integer::Integer;
        let m = self.modulus.lcm(&self.phi.modulus());
        (m, m / self.modulus, m / self.phi.modulus())
    }

    /// Exact check: permutations compose as a homomorphism and the twisted
    /// cocycle identity holds pointwise in turns.
    pub fn validate_exact(&self) -> ExactReport {
        let g = &self.group;
        let n = g.order();
        let fail = |check: &str, args: Vec<usize>| ExactReport {
            ok: false,
            witness: Some(Witness {
                check: check.into(),
                args,
            }),
        };
        for x in 0..n {
            for y in 0..n {
                let xy = g.add(x, y);
                for i in 0..self.blocks {
                    if self.perms[y][self.perms[x][i]] != self.perms[xy][i] {
                        return fail("beta_x beta_y = beta_x+y", vec![x, y, i]);
                    }
                }
            }
        }
        for x in 0..n {
            for i in 0..self.blocks {
                if self.v(0, x, i) != 0 || self.v(x, 0, i) != 0 {
                    return fail("v normalized", vec![x, i]);
                }
            }
        }
        let (m, fv, fp) = self.common_modulus();
        for x in 0..n {
            for y in 0..n {
                let xy = g.add(x, y);
                for z in 0..n {
                    let yz = g.add(y, z);
                    let ph = self.phi.num3(x, y, z) * fp;
                    for i in 0..self.blocks {
                        let lhs = (self.v(x, y, i) + self.v(xy, z, i)) * fv;
                        let rhs = ph + (self.v(y, z, self.perms[x][i]) + self.v(x, yz, i)) * fv;
                        if lhs % m != rhs % m {
                            return fail("cocycle identity", vec![x, y, z, i]);
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

    /// Numerical system on `C(blocks) ⊗ M_dim`, with `β_x = (translation) ⊗ ad(U_x)`
    /// for a unitary representation `U` of `G` on `C^dim`.
    pub fn to_system<T: Real>(
        &self,
        dim: usize,
        rep: &dyn Fn(usize) -> Vec<C<T>>,
    ) -> Result<TwistedSystem<T>> {
        let n = self.group.order();
        let shape = CoeffShape::functions(self.blocks, dim);
        let roots = roots_table::<T>(self.modulus);
        let mut beta = Vec::with_capacity(n);
        for x in 0..n {
            let ux = rep(x);
            if ux.len() != dim * dim {
                return Err(Error::Shape("representation matrix size".into()));
            }
            let u: Vec<C<T>> = (0..self.blocks).flat_map(|_| ux.iter().copied()).collect();
            let aut = if dim == 1 {
                Aut::permutation(shape, self.perms[x].clone())?
            } else {
                Aut::new(shape, self.perms[x].clone(), u)?
            };
            beta.push(aut);
        }
        let mut v = Vec::with_capacity(n * n * shape.stride());
        for x in 0..n {
            for y in 0..n {
                let ph: Vec<C<T>> = self.v_fn(x, y).iter().map(|&t| roots[t as usize]).collect();
                v.extend(coeff::diagonal_phases(shape, &ph));
            }
        }
        TwistedSystem::new(shape, beta, v, Arc::new(self.phi.clone()))
    }

    /// `(β', v') = (β, w_x β_x[w_y] v(x,y) w_{x+y}^{-1})` for a phase-valued `w`
    /// (`w[x*blocks + i]` over `modulus`). Since `C(blocks)` is commutative, `β' = β`.
    pub fn exterior_gauge(&self, w: &[u64], w_modulus: u64) -> Result<Self> {
        use num_integer::Integer;
        let g = &self.group;
        let n = g.order();
        let b = self.blocks;
        if w.len() != n * b {
            return Err(Error::Shape("gauge length".into()));
        }
        let m = self.modulus.lcm(&w_modulus);
        let (fv, fw) = ((m / self.modulus) as i64, (m / w_modulus) as i64);
        let mut v = vec![0u64; n * n * b];
        for x in 0..n {
            for y in 0..n {
                let xy = g.add(x, y);
                for i in 0..b {
                    let t = self.v(x, y, i) as i64 * fv
                        + fw * (w[x * b + i] as i64 + w[y * b + self.perms[x][i]] as i64
                            - w[xy * b + i] as i64);
                    v[(x * n + y) * b + i] = t.rem_euclid(m as i64) as u64;
                }
            }
        }
        Self::new(b, self.perms.clone(), v, m, self.phi.clone())
    }
}

/// The diagonal representation `x ↦ diag(ξ_{k·m}(x))_{k<dim}` with `m` the
/// all-ones element; trivial for `dim = 1`.
pub fn diagonal_rep<T: Real>(
    g: &FiniteAbelianGroup,
    dim: usize,
) -> impl Fn(usize) -> Vec<C<T>> + '_ {
    let ones: Vec<i64> = vec![1; g.rank()];
    let m = g.index_of_coords(&ones).expect("rank");
    let e = g.exponent();
    move |x| {
        let mut u = vec![C::new(T::zero(), T::zero()); dim * dim];
        for k in 0..dim {
            u[k * dim + k] = crate::scalar::root_of_unity(k as u64 * g.pairing(m, x), e);
        }
        u
    }
}

/// Translation action on `C(G)` with `v(x,y)(g) = s·φ(g,x,y)`.
pub fn canonical_phase_system(phi: &PhaseCochain, sign: i64) -> Result<PhaseSystem> {
    let g = phi.group().clone();
    let n = g.order();
    let m = phi.modulus();
    let perms = (0..n)
        .map(|x| (0..n).map(|i| g.add(i, x)).collect())
        .collect();
    let mut v = vec![0u64; n * n * n];
    for x in 0..n {
        for y in 0..n {
            for i in 0..n {
                v[(x * n + y) * n + i] =
                    (sign * phi.num3(i, x, y) as i64).rem_euclid(m as i64) as u64;
            }
        }
    }
    PhaseSystem::new(n, perms, v, m, phi.clone())
}

#[derive(Clone, Debug)]
pub struct CanonicalSystem<T: Real> {
    pub system: TwistedSystem<T>,
    pub exact: PhaseSystem,
    /// Exponent `s` in `v(β,γ)(g) = φ(g,β,γ)^s`.
    pub sign: i64,
}

/// Canonical system for a pentagon cocycle: `C(G) ⊗ M_dim`, `β_α` the
/// restriction of `ad ρ(α)` (right regular representation) to the diagonal,
/// tensored with `ad` of [`diagonal_rep`], and `v(β,γ) = φ(·,β,γ)^s` with the
/// sign chosen by exact validation.
pub fn build_canonical_system<T: Real>(
    phi: &PhaseCochain,
    dim: usize,
) -> Result<CanonicalSystem<T>> {
    for sign in [-1i64, 1] {
        let exact = canonical_phase_system(phi, sign)?;
        if exact.validate_exact().ok {
            let rep = diagonal_rep::<T>(phi.group(), dim);
            let system = exact.to_system(dim, &rep)?;
            return Ok(CanonicalSystem {
                system,
                exact,
                sign,
            });
        }
    }
    Err(Error::Invalid(
        "no sign validates; the cocycle fails the pentagon identity".into(),
    ))
}

/// The same data placed on the full matrix algebra `M_{|G|}`: `β_α = ad ρ(α)`,
/// `v` diagonal. Kept to exhibit that `β_xβ_y = ad(v)β_{x+y}` fails there.
pub fn regular_representation_system<T: Real>(
    phi: &PhaseCochain,
    sign: i64,
) -> Result<TwistedSystem<T>> {
    let g = phi.group();
    let n = g.order();
    let shape = CoeffShape::matrix(n);
    let m = phi.modulus();
    let roots = roots_table::<T>(m);
    let zero = C::new(T::zero(), T::zero());
    let mut beta = Vec::with_capacity(n);
    for a in 0..n {
        // (ρ(a)ψ)(g) = ψ(g+a): row g has its 1 in column g+a.
        let mut u = vec![zero; n * n];
        for i in 0..n {
            u[i * n + g.add(i, a)] = C::new(T::one(), T::zero());
        }
        beta.push(Aut::inner(shape, &u));
    }
    let mut v = Vec::with_capacity(n * n * n * n);
    for x in 0..n {
        for y in 0..n {
            let mut d = vec![zero; n * n];
            for i in 0..n {
                d[i * n + i] =
                    roots[(sign * phi.num3(i, x, y) as i64).rem_euclid(m as i64) as usize];
            }
            v.extend(d);
        }
    }
    TwistedSystem::new(shape, beta, v, Arc::new(phi.clone()))
}
