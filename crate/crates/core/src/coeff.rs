//! Coefficient *-algebras `⊕_{i<blocks} M_dim(C)` and their automorphisms.
//!
//! A value is a flat slice of `blocks·dim²` complex numbers (block-major,
//! row-major inside a block). `blocks = 1` gives scalars or `M_d`; `blocks = |G|`
//! gives `C(G) ⊗ M_d`. Automorphisms are kept in the form
//! `β[a]_i = U_i a_{p(i)} U_i^†`, which is closed under composition and inversion.

use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffShape {
    pub blocks: usize,
    pub dim: usize,
}

impl CoeffShape {
    pub const SCALAR: CoeffShape = CoeffShape { blocks: 1, dim: 1 };

    pub fn matrix(d: usize) -> Self {
        Self { blocks: 1, dim: d }
    }
    pub fn functions(n: usize, d: usize) -> Self {
        Self { blocks: n, dim: d }
    }
    pub fn block_len(&self) -> usize {
        self.dim * self.dim
    }
    pub fn stride(&self) -> usize {
        self.blocks * self.dim * self.dim
    }
    pub fn ensure(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Shape(format!("{self:?} vs {other:?}")))
        }
    }
}

fn zero<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

pub fn identity<T: Real>(s: CoeffShape) -> Vec<C<T>> {
    let mut v = vec![zero(); s.stride()];
    for b in 0..s.blocks {
        for i in 0..s.dim {
            v[b * s.block_len() + i * s.dim + i] = C::new(T::one(), T::zero());
        }
    }
    v
}

/// `out += scale · a·b`.
#[inline]
pub fn mul_acc<T: Real>(s: CoeffShape, a: &[C<T>], b: &[C<T>], scale: C<T>, out: &mut [C<T>]) {
    let d = s.dim;
    if d == 1 {
        for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
            *o += *x * *y * scale;
        }
        return;
    }
    let bl = s.block_len();
    for k in 0..s.blocks {
        let (ab, bb, ob) = (&a[k * bl..], &b[k * bl..], &mut out[k * bl..(k + 1) * bl]);
        for i in 0..d {
            for l in 0..d {
                let x = ab[i * d + l] * scale;
                if x.re == T::zero() && x.im == T::zero() {
                    continue;
                }
                for j in 0..d {
                    ob[i * d + j] += x * bb[l * d + j];
                }
            }
        }
    }
}

pub fn mul<T: Real>(s: CoeffShape, a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    let mut out = vec![zero(); s.stride()];
    mul_acc(s, a, b, C::new(T::one(), T::zero()), &mut out);
    out
}

pub fn mul3<T: Real>(s: CoeffShape, a: &[C<T>], b: &[C<T>], c: &[C<T>]) -> Vec<C<T>> {
    mul(s, &mul(s, a, b), c)
}

pub fn adjoint<T: Real>(s: CoeffShape, a: &[C<T>]) -> Vec<C<T>> {
    let d = s.dim;
    let bl = s.block_len();
    let mut out = vec![zero(); s.stride()];
    for k in 0..s.blocks {
        for i in 0..d {
            for j in 0..d {
                out[k * bl + i * d + j] = a[k * bl + j * d + i].conj();
            }
        }
    }
    out
}

pub fn scale<T: Real>(a: &[C<T>], c: C<T>) -> Vec<C<T>> {
    a.iter().map(|x| *x * c).collect()
}

/// `u·u^† = 1` up to `tol`.
pub fn is_unitary<T: Real>(s: CoeffShape, u: &[C<T>], tol: T) -> bool {
    let p = mul(s, u, &adjoint(s, u));
    crate::scalar::cmax_abs(&p, &identity(s)) <= tol
}

/// Inverse of a unitary value.
pub fn unitary_inverse<T: Real>(s: CoeffShape, u: &[C<T>]) -> Vec<C<T>> {
    adjoint(s, u)
}

/// Block-diagonal value from per-block phases times the identity.
pub fn diagonal_phases<T: Real>(s: CoeffShape, phases: &[C<T>]) -> Vec<C<T>> {
    let mut v = vec![zero(); s.stride()];
    for (b, p) in phases.iter().enumerate().take(s.blocks) {
        for i in 0..s.dim {
            v[b * s.block_len() + i * s.dim + i] = *p;
        }
    }
    v
}

/// `β[a]_i = U_i a_{perm[i]} U_i^†`.
#[derive(Clone, Debug, PartialEq)]
pub struct Aut<T: Real> {
    shape: CoeffShape,
    perm: Vec<usize>,
    u: Option<Vec<C<T>>>,
}

impl<T: Real> Aut<T> {
    pub fn identity(shape: CoeffShape) -> Self {
        Self {
            shape,
            perm: (0..shape.blocks).collect(),
            u: None,
        }
    }

    pub fn permutation(shape: CoeffShape, perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; shape.blocks];
        if perm.len() != shape.blocks
            || perm
                .iter()
                .any(|&p| p >= shape.blocks || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Shape(format!(
                "not a permutation of {} blocks",
                shape.blocks
            )));
        }
        Ok(Self {
            shape,
            perm,
            u: None,
        })
    }

    pub fn new(shape: CoeffShape, perm: Vec<usize>, u: Vec<C<T>>) -> Result<Self> {
        if u.len() != shape.stride() {
            return Err(Error::Shape("conjugating unitary has wrong length".into()));
        }
        let mut a = Self::permutation(shape, perm)?;
        a.u = Some(u);
        Ok(a)
    }

    /// `ad(w)`.
    pub fn inner(shape: CoeffShape, w: &[C<T>]) -> Self {
        Self {
            shape,
            perm: (0..shape.blocks).collect(),
            u: Some(w.to_vec()),
        }
    }

    pub fn shape(&self) -> CoeffShape {
        self.shape
    }
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }
    /// Conjugating unitaries (identity when absent).
    pub fn unitaries(&self) -> Vec<C<T>> {
        self.u.clone().unwrap_or_else(|| identity(self.shape))
    }

    pub fn apply(&self, a: &[C<T>]) -> Vec<C<T>> {
        let s = self.shape;
        let bl = s.block_len();
        let mut out = vec![zero(); s.stride()];
        for i in 0..s.blocks {
            let src = &a[self.perm[i] * bl..(self.perm[i] + 1) * bl];
            match &self.u {
                None => out[i * bl..(i + 1) * bl].copy_from_slice(src),
                Some(u) => {
                    let m = CoeffShape::matrix(s.dim);
                    let ui = &u[i * bl..(i + 1) * bl];
                    let r = mul(m, &mul(m, ui, src), &adjoint(m, ui));
                    out[i * bl..(i + 1) * bl].copy_from_slice(&r);
                }
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let s = self.shape;
        let bl = s.block_len();
        let perm: Vec<usize> = (0..s.blocks).map(|i| other.perm[self.perm[i]]).collect();
        let u = match (&self.u, &other.u) {
            (None, None) => None,
            _ => {
                let a = self.unitaries();
                let b = other.unitaries();
                let m = CoeffShape::matrix(s.dim);
                let mut u = vec![zero(); s.stride()];
                for i in 0..s.blocks {
                    let p = self.perm[i];
                    let r = mul(m, &a[i * bl..(i + 1) * bl], &b[p * bl..(p + 1) * bl]);
                    u[i * bl..(i + 1) * bl].copy_from_slice(&r);
                }
                Some(u)
            }
        };
        Self { shape: s, perm, u }
    }

    pub fn inverse(&self) -> Self {
        let s = self.shape;
        let bl = s.block_len();
        let mut perm = vec![0; s.blocks];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
        }
        let u = self.u.as_ref().map(|u| {
            let m = CoeffShape::matrix(s.dim);
            let mut v = vec![zero(); s.stride()];
            for j in 0..s.blocks {
                let q = perm[j];
                v[j * bl..(j + 1) * bl].copy_from_slice(&adjoint(m, &u[q * bl..(q + 1) * bl]));
            }
            v
        });
        Self { shape: s, perm, u }
    }

    /// Image of the matrix unit `E_{ij}` in block `b`: the target block and its entries.
    pub fn unit_image(&self, b: usize, i: usize, j: usize) -> (usize, Vec<C<T>>) {
        let s = self.shape;
        let d = s.dim;
        let bl = s.block_len();
        let target = self.perm.iter().position(|&p| p == b).expect("permutation");
        let mut m = vec![zero(); bl];
        match &self.u {
            None => m[i * d + j] = C::new(T::one(), T::zero()),
            Some(u) => {
                let ub = &u[target * bl..(target + 1) * bl];
                for r in 0..d {
                    for c in 0..d {
                        m[r * d + c] = ub[r * d + i] * ub[c * d + j].conj();
                    }
                }
            }
        }
        (target, m)
    }

    /// Largest deviation between `self` and `other` on the matrix-unit
    /// spanning set, with the worst unit `(block, i, j)`.
    pub fn spanning_defect(&self, other: &Self) -> (T, Option<(usize, usize, usize)>) {
        let s = self.shape;
        let mut worst = T::zero();
        let mut at = None;
        for b in 0..s.blocks {
            for i in 0..s.dim {
                for j in 0..s.dim {
                    let (tb, x) = self.unit_image(b, i, j);
                    let (ob, y) = other.unit_image(b, i, j);
                    let dft = if tb != ob {
                        T::one()
                    } else {
                        crate::scalar::cmax_abs(&x, &y)
                    };
                    if dft > worst {
                        worst = dft;
                        at = Some((b, i, j));
                    }
                }
            }
        }
        (worst, at)
    }
}
