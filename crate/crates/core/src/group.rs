//! Finite abelian groups `Z_{n1} x ... x Z_{nk}`, their (self-)duals and the
//! finite Fourier transform.
//!
//! Measures: counting measure on `G`, normalized measure `(1/|G|) Σ` on the
//! dual. With these, `F̂(z) = (1/|G|) Σ_ξ F(ξ) ξ(z)` and
//! `F(ξ) = Σ_z F̂(z) conj ξ(z)`, and no other module carries a stray `|G|`.

use crate::error::{Error, Result};
use crate::scalar::{root_of_unity, Real, C};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

const TABLE_LIMIT: usize = 1 << 11;

#[derive(Debug)]
struct Inner {
    orders: Vec<u32>,
    strides: Vec<usize>,
    size: usize,
    exponent: u64,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

/// Elements are addressed by their index in lexicographic coordinate order
/// (last coordinate fastest). Cloning is cheap.
#[derive(Clone, Debug)]
pub struct FiniteAbelianGroup(Arc<Inner>);

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.orders == other.0.orders
    }
}
impl Eq for FiniteAbelianGroup {}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub coords: Vec<u32>,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The character `ξ_m(x) = exp(2πi Σ m_j x_j / n_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub label: GroupElement,
}

impl FiniteAbelianGroup {
    pub fn new(orders: &[u32]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::GroupSpec(format!("{orders:?}")));
        }
        let k = orders.len();
        let mut strides = vec![1usize; k];
        for j in (0..k.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * orders[j + 1] as usize;
        }
        let size: usize = orders.iter().map(|&n| n as usize).product();
        let exponent = orders.iter().fold(1u64, |a, &n| a.lcm(&(n as u64)));
        let mut g = Inner {
            orders: orders.to_vec(),
            strides,
            size,
            exponent,
            add: None,
            neg: Vec::new(),
        };
        g.neg = (0..size)
            .map(|i| {
                let mut idx = 0;
                for j in 0..k {
                    let c = (i / g.strides[j]) % orders[j] as usize;
                    idx += ((orders[j] as usize - c) % orders[j] as usize) * g.strides[j];
                }
                idx as u32
            })
            .collect();
        if size <= TABLE_LIMIT {
            let mut t = vec![0u32; size * size];
            for a in 0..size {
                for b in 0..size {
                    t[a * size + b] = slow_add(&g, a, b) as u32;
                }
            }
            g.add = Some(t);
        }
        Ok(Self(Arc::new(g)))
    }

    pub fn cyclic(n: u32) -> Self {
        Self::new(&[n]).expect("positive order")
    }

    /// `Z_n^k`.
    pub fn power(n: u32, k: usize) -> Self {
        Self::new(&vec![n; k]).expect("positive order")
    }

    /// Parses `"Z4^3"`, `"Z2xZ2xZ2"`, `"Z2^2xZ3"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::GroupSpec(spec.to_string());
        let mut orders = Vec::new();
        for part in spec.trim().split(['x', '*', '×']) {
            let part = part.trim();
            let body = part
                .strip_prefix('Z')
                .or_else(|| part.strip_prefix('z'))
                .ok_or_else(bad)?;
            let (n, k) = match body.split_once('^') {
                Some((n, k)) => (n, k.parse::<usize>().map_err(|_| bad())?),
                None => (body, 1),
            };
            let n: u32 = n.parse().map_err(|_| bad())?;
            if n == 0 || k == 0 {
                return Err(bad());
            }
            orders.extend(std::iter::repeat_n(n, k));
        }
        if orders.is_empty() {
            return Err(bad());
        }
        Self::new(&orders)
    }

    pub fn orders(&self) -> &[u32] {
        &self.0.orders
    }
    pub fn rank(&self) -> usize {
        self.0.orders.len()
    }
    pub fn order(&self) -> usize {
        self.0.size
    }
    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.0.exponent
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.0.add {
            Some(t) => t[a * self.0.size + b] as usize,
            None => slow_add(&self.0, a, b),
        }
    }
    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.0.neg[a] as usize
    }
    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn coord(&self, i: usize, j: usize) -> u32 {
        ((i / self.0.strides[j]) % self.0.orders[j] as usize) as u32
    }

    pub fn coords(&self, i: usize) -> Vec<u32> {
        (0..self.rank()).map(|j| self.coord(i, j)).collect()
    }

    pub fn element(&self, i: usize) -> GroupElement {
        GroupElement {
            coords: self.coords(i),
        }
    }

    /// Index of an element given by (possibly unreduced, possibly negative) coordinates.
    pub fn index_of_coords(&self, coords: &[i64]) -> Result<usize> {
        if coords.len() != self.rank() {
            return Err(Error::GroupMismatch(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        Ok(coords
            .iter()
            .zip(&self.0.orders)
            .zip(&self.0.strides)
            .map(|((&c, &n), &s)| c.rem_euclid(n as i64) as usize * s)
            .sum())
    }

    pub fn index(&self, x: &GroupElement) -> Result<usize> {
        for (&c, &n) in x.coords.iter().zip(&self.0.orders) {
            if c >= n {
                return Err(Error::Coordinate {
                    coord: c as i64,
                    order: n,
                });
            }
        }
        self.index_of_coords(&x.coords.iter().map(|&c| c as i64).collect::<Vec<_>>())
    }

    pub fn enumerate(&self) -> Vec<GroupElement> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }

    /// `G x H`, with `(g, h)` at index `g·|H| + h`.
    pub fn product(&self, other: &Self) -> Self {
        let mut o = self.orders().to_vec();
        o.extend_from_slice(other.orders());
        Self::new(&o).expect("positive orders")
    }

    /// The subgroup spanned by the factors in `range`, with the embedding of its indices.
    pub fn factor_subgroup(&self, range: std::ops::Range<usize>) -> (Self, Vec<usize>) {
        let sub = Self::new(&self.orders()[range.clone()]).expect("positive orders");
        let embed = (0..sub.order())
            .map(|i| {
                let mut c = vec![0i64; self.rank()];
                for (j, r) in range.clone().enumerate() {
                    c[r] = sub.coord(i, j) as i64;
                }
                self.index_of_coords(&c).expect("rank matches")
            })
            .collect();
        (sub, embed)
    }

    /// `ξ_m(x)` as a turn numerator over `exponent()`.
    pub fn pairing(&self, m: usize, x: usize) -> u64 {
        let e = self.0.exponent;
        let mut t = 0u64;
        for j in 0..self.rank() {
            let n = self.0.orders[j] as u64;
            t += self.coord(m, j) as u64 * self.coord(x, j) as u64 % n * (e / n);
        }
        t % e
    }

    pub fn character(&self, m: usize) -> Character {
        Character {
            label: self.element(m),
        }
    }

    pub fn ensure_same(&self, other: &Self, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!(
                "{what}: {:?} vs {:?}",
                self.orders(),
                other.orders()
            )))
        }
    }
}

fn slow_add(g: &Inner, a: usize, b: usize) -> usize {
    let mut idx = 0;
    for j in 0..g.orders.len() {
        let n = g.orders[j] as usize;
        let ca = (a / g.strides[j]) % n;
        let cb = (b / g.strides[j]) % n;
        idx += ((ca + cb) % n) * g.strides[j];
    }
    idx
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders().iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl Character {
    pub fn value<T: Real>(&self, g: &FiniteAbelianGroup, x: usize) -> Result<C<T>> {
        let m = g.index(&self.label)?;
        Ok(root_of_unity(g.pairing(m, x), g.exponent()))
    }
}

/// Table `chi[m*|G| + x] = ξ_m(x)`.
pub fn character_table<T: Real>(g: &FiniteAbelianGroup) -> Vec<C<T>> {
    let n = g.order();
    let e = g.exponent();
    let roots = crate::scalar::roots_table::<T>(e);
    let mut t = Vec::with_capacity(n * n);
    for m in 0..n {
        for x in 0..n {
            t.push(roots[g.pairing(m, x) as usize]);
        }
    }
    t
}

/// Fourier transform of `F: Ĝ → C^width` (laid out `[ξ][width]`), returning
/// `F̂: G → C^width` with `F̂(z) = (1/|G|) Σ_ξ F(ξ) ξ(z)`.
pub fn fourier<T: Real>(g: &FiniteAbelianGroup, f: &[C<T>], width: usize) -> Result<Vec<C<T>>> {
    let n = g.order();
    if f.len() != n * width {
        return Err(Error::Shape(format!(
            "fourier: {} values for |G|={n}, width {width}",
            f.len()
        )));
    }
    let chi = character_table::<T>(g);
    let scale = T::one() / T::of(n as f64);
    let mut out = vec![C::new(T::zero(), T::zero()); n * width];
    for z in 0..n {
        let o = &mut out[z * width..(z + 1) * width];
        for xi in 0..n {
            let c = chi[xi * n + z];
            for (acc, v) in o.iter_mut().zip(&f[xi * width..(xi + 1) * width]) {
                *acc += *v * c;
            }
        }
        for v in o.iter_mut() {
            *v *= scale;
        }
    }
    Ok(out)
}

/// Inverse of [`fourier`]: `F(ξ) = Σ_z F̂(z) conj ξ(z)`.
pub fn inverse_fourier<T: Real>(
    g: &FiniteAbelianGroup,
    fhat: &[C<T>],
    width: usize,
) -> Result<Vec<C<T>>> {
    let n = g.order();
    if fhat.len() != n * width {
        return Err(Error::Shape(format!(
            "inverse_fourier: {} values",
            fhat.len()
        )));
    }
    let chi = character_table::<T>(g);
    let mut out = vec![C::new(T::zero(), T::zero()); n * width];
    for xi in 0..n {
        let o = &mut out[xi * width..(xi + 1) * width];
        for z in 0..n {
            let c = chi[xi * n + z].conj();
            for (acc, v) in o.iter_mut().zip(&fhat[z * width..(z + 1) * width]) {
                *acc += *v * c;
            }
        }
    }
    Ok(out)
}
