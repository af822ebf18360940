//! Octonions as the sign-twisted group algebra of `Z₂³`, and the 64-dimensional
//! associative algebra obtained by strictifying `C(Z₂³, O)`.

use crate::cochain::{coords_i64, det3, PhaseCochain};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use rand::Rng;
use serde::Serialize;

const N: usize = 8;

/// `(−1)^{a·(b×c)}` as `±1`.
pub fn octonion_sign(a: usize, b: usize, c: usize) -> i8 {
    let g = FiniteAbelianGroup::power(2, 3);
    let d = det3(&coords_i64(&g, a), &coords_i64(&g, b), &coords_i64(&g, c));
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign of `φ` on `Z₂³` given by a cochain with turns in `{0, 1/2}`.
fn cochain_sign(phi: &PhaseCochain, a: usize, b: usize, c: usize) -> i8 {
    let t = phi.turn(&[a, b, c]);
    if t == crate::cochain::Turn::from_integer(0) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OctonionAlgebra {
    /// `e_a e_b = f[a·8 + b] e_{a⊕b}`.
    pub f: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OctonionReport {
    pub ok: bool,
    pub associator_ok: bool,
    pub associator_witness: Option<[usize; 3]>,
    pub cayley_ok: bool,
    pub quaternionic_triples: usize,
    pub norm_defect: f64,
    pub alternative_defect: f64,
}

/// `δF(a,b,c) = F(a,b) F(a+b,c) / (F(b,c) F(a,b+c))`, the sign in
/// `(e_a e_b) e_c = δF(a,b,c) · e_a (e_b e_c)`.
fn delta_f(f: &[i8], a: usize, b: usize, c: usize) -> i8 {
    f[a * N + b] * f[(a ^ b) * N + c] * f[b * N + c] * f[a * N + (b ^ c)]
}

/// Depth-first search for a sign table with `F(0,·) = F(·,0) = 1`,
/// `F(a,a) = −1` and `F(b,a) = −F(a,b)` off the diagonal, whose `δF` is the
/// given `±1` cocycle.
pub fn find_signs(target: &dyn Fn(usize, usize, usize) -> i8) -> Option<OctonionAlgebra> {
    let mut f = vec![1i8; N * N];
    for a in 1..N {
        f[a * N + a] = -1;
    }
    let pairs: Vec<(usize, usize)> = (1..N)
        .flat_map(|a| (a + 1..N).map(move |b| (a, b)))
        .collect();
    // A triple's δF is decided once every pair it touches is assigned.
    let rank = |a: usize, b: usize| -> usize {
        if a == 0 || b == 0 || a == b {
            0
        } else {
            let (p, q) = (a.min(b), a.max(b));
            1 + pairs.iter().position(|&x| x == (p, q)).expect("pair")
        }
    };
    let mut checks: Vec<Vec<[usize; 3]>> = vec![Vec::new(); pairs.len() + 1];
    for a in 0..N {
        for b in 0..N {
            for c in 0..N {
                let r = rank(a, b)
                    .max(rank(a ^ b, c))
                    .max(rank(b, c))
                    .max(rank(a, b ^ c));
                checks[r].push([a, b, c]);
            }
        }
    }
    if checks[0]
        .iter()
        .any(|&[a, b, c]| delta_f(&f, a, b, c) != target(a, b, c))
    {
        return None;
    }
    fn go(
        i: usize,
        f: &mut [i8],
        pairs: &[(usize, usize)],
        checks: &[Vec<[usize; 3]>],
        target: &dyn Fn(usize, usize, usize) -> i8,
    ) -> bool {
        if i == pairs.len() {
            return true;
        }
        let (a, b) = pairs[i];
        for s in [1i8, -1] {
            f[a * N + b] = s;
            f[b * N + a] = -s;
            if checks[i + 1]
                .iter()
                .all(|&[x, y, z]| delta_f(f, x, y, z) == target(x, y, z))
                && go(i + 1, f, pairs, checks, target)
            {
                return true;
            }
        }
        false
    }
    go(0, &mut f, &pairs, &checks, target).then_some(OctonionAlgebra { f })
}

pub fn find_octonion_signs() -> Result<OctonionAlgebra> {
    find_signs(&octonion_sign)
        .ok_or_else(|| Error::Search("no sign table realizes the octonion cocycle".into()))
}

impl OctonionAlgebra {
    pub fn sign(&self, a: usize, b: usize) -> i8 {
        self.f[a * N + b]
    }

    pub fn mul(&self, x: &[f64; N], y: &[f64; N]) -> [f64; N] {
        let mut out = [0.0; N];
        for a in 0..N {
            for b in 0..N {
                out[a ^ b] += self.f[a * N + b] as f64 * x[a] * y[b];
            }
        }
        out
    }

    pub fn associator_sign(&self, a: usize, b: usize, c: usize) -> i8 {
        delta_f(&self.f, a, b, c)
    }

    /// First basis triple whose associator sign differs from `(−1)^{a·(b×c)}`.
    pub fn associator_witness(&self) -> Option<[usize; 3]> {
        self.associator_witness_against(&octonion_sign)
    }

    pub fn associator_witness_against(
        &self,
        target: &dyn Fn(usize, usize, usize) -> i8,
    ) -> Option<[usize; 3]> {
        (0..N * N * N)
            .map(|i| [i / 64, (i / 8) % 8, i % 8])
            .find(|&[a, b, c]| self.associator_sign(a, b, c) != target(a, b, c))
    }

    /// Lines `{a, b, a⊕b}` of nonzero elements on which the product closes
    /// into an associative quaternion algebra with anticommuting units.
    pub fn quaternionic_triples(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for a in 1..N {
            for b in a + 1..N {
                let c = a ^ b;
                if c <= b {
                    continue;
                }
                let ok = [a, b, c].iter().all(|&x| {
                    [a, b, c].iter().all(|&y| {
                        [a, b, c]
                            .iter()
                            .all(|&z| self.associator_sign(x, y, z) == 1)
                    })
                });
                if ok {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    /// Seven imaginary units squaring to `−1`, pairwise anticommuting, and
    /// seven quaternionic lines.
    pub fn is_cayley(&self) -> bool {
        let units = (1..N).all(|a| self.sign(a, a) == -1);
        let anti = (1..N).all(|a| (1..N).all(|b| a == b || self.sign(a, b) == -self.sign(b, a)));
        units && anti && self.quaternionic_triples().len() == 7
    }

    pub fn random_element(rng: &mut impl Rng) -> [f64; N] {
        let mut x = [0.0; N];
        x.iter_mut().for_each(|c| *c = rng.gen_range(-1.0..1.0));
        x
    }

    pub fn report(&self, trials: usize, tol: f64, rng: &mut impl Rng) -> OctonionReport {
        let norm = |x: &[f64; N]| x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let (mut nd, mut ad) = (0.0f64, 0.0f64);
        for _ in 0..trials {
            let x = Self::random_element(rng);
            let y = Self::random_element(rng);
            nd = nd.max((norm(&self.mul(&x, &y)) - norm(&x) * norm(&y)).abs());
            let l = self.mul(&self.mul(&x, &x), &y);
            let r = self.mul(&x, &self.mul(&x, &y));
            let l2 = self.mul(&self.mul(&y, &x), &x);
            let r2 = self.mul(&y, &self.mul(&x, &x));
            for k in 0..N {
                ad = ad.max((l[k] - r[k]).abs()).max((l2[k] - r2[k]).abs());
            }
        }
        let witness = self.associator_witness();
        let cayley = self.is_cayley();
        OctonionReport {
            ok: witness.is_none() && cayley && nd < tol && ad < tol,
            associator_ok: witness.is_none(),
            associator_witness: witness,
            cayley_ok: cayley,
            quaternionic_triples: self.quaternionic_triples().len(),
            norm_defect: nd,
            alternative_defect: ad,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("a,b,sign\n");
        let g = FiniteAbelianGroup::power(2, 3);
        let lbl = |i: usize| {
            g.coords(i)
                .iter()
                .map(|c| c.to_string())
                .collect::<String>()
        };
        for a in 0..N {
            for b in 0..N {
                s.push_str(&format!("{},{},{}\n", lbl(a), lbl(b), self.sign(a, b)));
            }
        }
        s
    }
}

/// `C(Z₂³, O)` with basis `(a, x) = e_a ⊗ δ_x` and the strictified product
/// `(a,x) * (b,y) = [x = y + b] F(a,b) φ(a,b,y)^{-1} (a+b, y)`.
#[derive(Clone, Debug)]
pub struct StrictOctonions {
    /// Product of basis `i = a·8 + x` and `j = b·8 + y`: `(target, sign)`,
    /// sign 0 for a zero product.
    table: Vec<(usize, i8)>,
}

impl StrictOctonions {
    pub fn new(o: &OctonionAlgebra, phi: &PhaseCochain) -> Result<Self> {
        if phi.group().orders() != [2, 2, 2] || phi.degree() != 3 {
            return Err(Error::Config(
                "strictified octonions need a 3-cochain on Z2^3".into(),
            ));
        }
        let mut table = vec![(0, 0i8); 64 * 64];
        for a in 0..N {
            for x in 0..N {
                for b in 0..N {
                    for y in 0..N {
                        if x != y ^ b {
                            continue;
                        }
                        let s = o.sign(a, b) * cochain_sign(phi, a, b, y);
                        table[(a * N + x) * 64 + b * N + y] = ((a ^ b) * N + y, s);
                    }
                }
            }
        }
        Ok(Self { table })
    }

    pub fn dimension(&self) -> usize {
        64
    }

    pub fn basis_product(&self, i: usize, j: usize) -> (usize, i8) {
        self.table[i * 64 + j]
    }

    /// First basis triple with `(ij)k ≠ i(jk)`, compared exactly.
    pub fn associativity_witness(&self) -> Option<[usize; 3]> {
        for i in 0..64 {
            for j in 0..64 {
                let (ij, s1) = self.basis_product(i, j);
                for k in 0..64 {
                    let (jk, s2) = self.basis_product(j, k);
                    let left = if s1 == 0 {
                        (0, 0)
                    } else {
                        let (t, s) = self.basis_product(ij, k);
                        (t, s * s1)
                    };
                    let right = if s2 == 0 {
                        (0, 0)
                    } else {
                        let (t, s) = self.basis_product(i, jk);
                        (t, s * s2)
                    };
                    let same = (left.1 == 0 && right.1 == 0) || left == right;
                    if !same {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    /// Product of arbitrary elements in the 64-dimensional basis.
    pub fn mul(&self, p: &[f64], q: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; 64];
        for i in 0..64 {
            if p[i] == 0.0 {
                continue;
            }
            for j in 0..64 {
                let (t, s) = self.basis_product(i, j);
                if s != 0 {
                    out[t] += s as f64 * p[i] * q[j];
                }
            }
        }
        out
    }

    /// `e_a ⊗ 1`.
    pub fn constant(a: usize) -> Vec<f64> {
        let mut v = vec![0.0; 64];
        (0..N).for_each(|x| v[a * N + x] = 1.0);
        v
    }

    /// A pair of constants `(a, b)` whose product is not constant.
    pub fn non_closure_witness(&self) -> Option<(usize, usize)> {
        for a in 0..N {
            for b in 0..N {
                let p = self.mul(&Self::constant(a), &Self::constant(b));
                let c = a ^ b;
                let vals: Vec<f64> = (0..N).map(|x| p[c * N + x]).collect();
                if vals.iter().any(|v| *v != vals[0]) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::octonion_cocycle;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256StarStar;

    #[test]
    fn search_finds_octonions() {
        let o = find_octonion_signs().unwrap();
        assert!((1..8).all(|a| o.sign(a, a) == -1));
        assert_eq!(o.associator_witness(), None);
        // a = (1,0,0), b = (0,1,0), c = (0,0,1) have determinant 1.
        assert_eq!(o.associator_sign(4, 2, 1), -1);
        let mut rng = Xoshiro256StarStar::seed_from_u64(41);
        let r = o.report(1000, 1e-12, &mut rng);
        assert!(r.ok, "{r:?}");
        assert_eq!(r.quaternionic_triples, 7);
    }

    #[test]
    fn cocycle_sign_matches_cochain() {
        let phi = octonion_cocycle();
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    assert_eq!(octonion_sign(a, b, c), cochain_sign(&phi, a, b, c));
                }
            }
        }
    }

    #[test]
    fn trivial_target_has_no_solution() {
        // In an associative algebra e₁e₂e₄ would commute with e₁, but the
        // constraints make all imaginary units anticommute.
        assert!(find_signs(&|_, _, _| 1).is_none());
    }

    #[test]
    fn strict_algebra_is_associative_and_not_closed_on_constants() {
        let o = find_octonion_signs().unwrap();
        let s = StrictOctonions::new(&o, &octonion_cocycle()).unwrap();
        assert_eq!(s.dimension(), 64);
        assert_eq!(s.associativity_witness(), None);
        let (a, b) = s.non_closure_witness().expect("constants are not closed");
        assert!(a != 0 && b != 0 && a != b);
    }

    #[test]
    fn untwisted_grading_is_not_associative() {
        let o = find_octonion_signs().unwrap();
        let zero = PhaseCochain::zero(&FiniteAbelianGroup::power(2, 3), 3, 2);
        let s = StrictOctonions::new(&o, &zero).unwrap();
        assert!(s.associativity_witness().is_some());
    }
}
