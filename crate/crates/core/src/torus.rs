//! Finite nonassociative torus on `ℓ²(Z_N³)`: `u(β,γ)` acts diagonally by
//! `σ(·,β,γ)` and `ξ_α = ad ρ(α)` for the right regular representation `ρ`.
//!
//! The defining covariance `σ(α,β,γ)u(α,β)u(α+β,γ) = ξ_α[u(β,γ)]u(α,β+γ)`
//! has `σ` on the left, so the obstruction in the convention
//! `v(x,y)v(x+y,z) = φ(x,y,z)β_x[v(y,z)]v(x,y+z)` is `φ = σ̄`. The
//! `u(β,γ)` are diagonal, hence the system lives on the diagonal subalgebra
//! `C(Z_N³)`; on all of `M_{N³}` the action fails to be twisted by `ad u`.

use crate::cochain::{volume_tricharacter, PhaseCochain, Turn};
use crate::coeff;
use crate::crossed::{convolve, CrossedElement};
use crate::error::Result;
use crate::scalar::{Real, C};
use crate::system::{diagonal_rep, regular_representation_system, PhaseSystem, TwistedSystem};

#[derive(Clone, Debug)]
pub struct NonassociativeTorus {
    pub n: u32,
    pub theta: Turn,
    /// `σ(α,β,γ) = e^{2πiθ α·(β×γ)}`.
    pub sigma: PhaseCochain,
    /// Translation action on `C(Z_N³)` with `v(β,γ)(g) = σ(g,β,γ)` and `φ = σ̄`.
    pub exact: PhaseSystem,
}

pub fn nonassociative_torus(n: u32, theta: Turn) -> Result<NonassociativeTorus> {
    let sigma = volume_tricharacter(n, theta)?.into_cochain();
    let g = sigma.group().clone();
    let order = g.order();
    let perms = (0..order)
        .map(|x| (0..order).map(|i| g.add(i, x)).collect())
        .collect();
    let mut v = Vec::with_capacity(order * order * order);
    for b in 0..order {
        for c in 0..order {
            for i in 0..order {
                v.push(sigma.num3(i, b, c));
            }
        }
    }
    let exact = PhaseSystem::new(order, perms, v, sigma.modulus(), sigma.negated())?;
    Ok(NonassociativeTorus {
        n,
        theta,
        sigma,
        exact,
    })
}

impl NonassociativeTorus {
    /// First `(α, β, γ, g)` where the covariance identity fails at the
    /// diagonal entry `g`, checked in exact turns over every tuple.
    pub fn covariance_witness(&self) -> Option<[usize; 4]> {
        let s = &self.sigma;
        let g = s.group();
        let (n, m) = (g.order(), s.modulus());
        let u = |b: usize, c: usize, i: usize| s.num3(i, b, c);
        for a in 0..n {
            for b in 0..n {
                let ab = g.add(a, b);
                for c in 0..n {
                    let bc = g.add(b, c);
                    for i in 0..n {
                        // ξ_α[D](g) = D(g + α) for diagonal D.
                        let lhs = s.num3(a, b, c) + u(a, b, i) + u(ab, c, i);
                        let rhs = u(b, c, g.add(i, a)) + u(a, bc, i);
                        if lhs % m != rhs % m {
                            return Some([a, b, c, i]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn system<T: Real>(&self) -> Result<TwistedSystem<T>> {
        self.exact
            .to_system(1, &diagonal_rep::<T>(self.exact.group(), 1))
    }

    /// The same `(ξ, u)` on all of `M_{N³}`.
    pub fn full_matrix_system<T: Real>(&self) -> Result<TwistedSystem<T>> {
        regular_representation_system(&self.sigma.negated(), -1)
    }

    /// `max |(δ_α δ_β)δ_γ − σ̄(α,β,γ) δ_α(δ_β δ_γ)|` in the crossed product,
    /// together with `|(δ_α δ_β)δ_γ − δ_α(δ_β δ_γ)|`.
    pub fn delta_associator<T: Real>(
        &self,
        s: &TwistedSystem<T>,
        a: usize,
        b: usize,
        c: usize,
    ) -> Result<(T, T)> {
        let g = s.group();
        let one = coeff::identity::<T>(s.shape());
        let (da, db, dc) = (
            CrossedElement::delta(g, s.shape(), a, &one),
            CrossedElement::delta(g, s.shape(), b, &one),
            CrossedElement::delta(g, s.shape(), c, &one),
        );
        let left = convolve(&convolve(&da, &db, s)?, &dc, s)?;
        let right = convolve(&da, &convolve(&db, &dc, s)?, s)?;
        let p: C<T> = self.exact.phi().phase(&[a, b, c]);
        Ok((
            left.max_abs_diff(&right.scaled(p)),
            left.max_abs_diff(&right),
        ))
    }
}
