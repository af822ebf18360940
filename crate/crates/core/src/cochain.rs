//! U(1)-valued group cochains stored exactly as rational turns mod 1.

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::scalar::{root_of_unity, roots_table, Real, C};
use crate::zmod::solve_mod;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub type Turn = Ratio<i64>;

/// A map `G^p → (1/M)Z/Z`. Entry `args` is stored as the numerator over `modulus`.
#[derive(Clone, Debug)]
pub struct PhaseCochain {
    group: FiniteAbelianGroup,
    degree: usize,
    modulus: u64,
    table: Vec<u64>,
}

impl PartialEq for PhaseCochain {
    /// Equality of the turn functions, independent of the declared modulus.
    fn eq(&self, other: &Self) -> bool {
        if self.group != other.group || self.degree != other.degree {
            return false;
        }
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = (m / self.modulus, m / other.modulus);
        self.table
            .iter()
            .zip(&other.table)
            .all(|(&x, &y)| x * a == y * b)
    }
}

impl PhaseCochain {
    pub fn zero(group: &FiniteAbelianGroup, degree: usize, modulus: u64) -> Self {
        let len = group.order().pow(degree as u32);
        Self {
            group: group.clone(),
            degree,
            modulus: modulus.max(1),
            table: vec![0; len],
        }
    }

    /// Builds from integer numerators over `modulus` (reduced mod `modulus`).
    pub fn from_fn(
        group: &FiniteAbelianGroup,
        degree: usize,
        modulus: u64,
        f: impl Fn(&[usize]) -> i64,
    ) -> Self {
        let mut c = Self::zero(group, degree, modulus);
        let n = group.order();
        let mut args = vec![0usize; degree];
        for idx in 0..c.table.len() {
            let mut r = idx;
            for a in args.iter_mut().rev() {
                *a = r % n;
                r /= n;
            }
            c.table[idx] = f(&args).rem_euclid(c.modulus as i64) as u64;
        }
        c
    }

    /// Builds from rational turns; the modulus is the lcm of the denominators.
    pub fn from_turns(
        group: &FiniteAbelianGroup,
        degree: usize,
        f: impl Fn(&[usize]) -> Turn,
    ) -> Self {
        let raw = Self::from_fn(group, degree, 1, |_| 0);
        let n = group.order();
        let mut turns = Vec::with_capacity(raw.table.len());
        let mut args = vec![0usize; degree];
        let mut m = 1u64;
        for idx in 0..raw.table.len() {
            let mut r = idx;
            for a in args.iter_mut().rev() {
                *a = r % n;
                r /= n;
            }
            let t = f(&args);
            m = m.lcm(&(*t.denom() as u64));
            turns.push(t);
        }
        let mut c = Self::zero(group, degree, m);
        for (slot, t) in c.table.iter_mut().zip(turns) {
            let num = (t * Turn::from_integer(m as i64)).to_integer();
            *slot = num.rem_euclid(m as i64) as u64;
        }
        c
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn index(&self, args: &[usize]) -> usize {
        let n = self.group.order();
        args.iter().fold(0, |acc, &a| acc * n + a)
    }

    pub fn num(&self, args: &[usize]) -> u64 {
        self.table[self.index(args)]
    }

    #[inline]
    pub fn num3(&self, x: usize, y: usize, z: usize) -> u64 {
        let n = self.group.order();
        self.table[(x * n + y) * n + z]
    }

    #[inline]
    pub fn num2(&self, x: usize, y: usize) -> u64 {
        self.table[x * self.group.order() + y]
    }

    pub fn turn(&self, args: &[usize]) -> Turn {
        Turn::new(self.num(args) as i64, self.modulus as i64)
    }

    pub fn phase<T: Real>(&self, args: &[usize]) -> C<T> {
        root_of_unity(self.num(args), self.modulus)
    }

    /// `exp(2πi·turn)` for every entry, in table order.
    pub fn phases<T: Real>(&self) -> Vec<C<T>> {
        let roots = roots_table::<T>(self.modulus);
        self.table.iter().map(|&t| roots[t as usize]).collect()
    }

    /// Same turns over the larger modulus `m` (a multiple of the current one).
    pub fn with_modulus(&self, m: u64) -> Result<Self> {
        if !m.is_multiple_of(self.modulus) {
            return Err(Error::Config(format!(
                "modulus {m} is not a multiple of {}",
                self.modulus
            )));
        }
        let f = m / self.modulus;
        Ok(Self {
            modulus: m,
            table: self.table.iter().map(|&t| t * f).collect(),
            ..self.clone()
        })
    }

    /// Same turns over the smallest possible modulus.
    pub fn reduced(&self) -> Self {
        let g = self.table.iter().fold(self.modulus, |g, &t| g.gcd(&t));
        Self {
            modulus: self.modulus / g,
            table: self.table.iter().map(|&t| t / g).collect(),
            ..self.clone()
        }
    }

    pub fn negated(&self) -> Self {
        let m = self.modulus;
        Self {
            table: self.table.iter().map(|&t| (m - t) % m).collect(),
            ..self.clone()
        }
    }

    /// Pointwise `a·self + b·other` in turns.
    pub fn combine(&self, a: i64, other: &Self, b: i64) -> Result<Self> {
        self.group.ensure_same(&other.group, "cochain combine")?;
        if self.degree != other.degree {
            return Err(Error::Degree {
                expected: self.degree,
                got: other.degree,
            });
        }
        let m = self.modulus.lcm(&other.modulus);
        let (p, q) = (self.with_modulus(m)?, other.with_modulus(m)?);
        let mi = m as i64;
        let table = p
            .table
            .iter()
            .zip(&q.table)
            .map(|(&x, &y)| ((a * x as i64 + b * y as i64).rem_euclid(mi)) as u64)
            .collect();
        Ok(Self {
            modulus: m,
            table,
            ..p
        })
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mi = self.modulus as i64;
        Self {
            table: self
                .table
                .iter()
                .map(|&t| (k * t as i64).rem_euclid(mi) as u64)
                .collect(),
            ..self.clone()
        }
    }

    /// Copy with one entry shifted by `shift` turns (for mutation tests).
    pub fn mutated(&self, args: &[usize], shift: Turn) -> Self {
        let m = self.modulus.lcm(&(*shift.denom() as u64));
        let mut c = self.with_modulus(m).expect("multiple");
        let idx = c.index(args);
        let s = (shift * Turn::from_integer(m as i64)).to_integer();
        c.table[idx] = (c.table[idx] as i64 + s).rem_euclid(m as i64) as u64;
        c
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&t| t == 0)
    }

    /// First argument tuple containing the identity with a nonzero turn.
    pub fn normalization_witness(&self) -> Option<Vec<usize>> {
        let n = self.group.order();
        let mut args = vec![0usize; self.degree];
        for (idx, &t) in self.table.iter().enumerate() {
            if t == 0 {
                continue;
            }
            let mut r = idx;
            for a in args.iter_mut().rev() {
                *a = r % n;
                r /= n;
            }
            if args.contains(&0) {
                return Some(args.clone());
            }
        }
        None
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization_witness().is_none()
    }

    pub fn to_serial(&self) -> SerialCochain {
        let n = self.group.order();
        let mut rows = Vec::new();
        for idx in 0..self.table.len() {
            let mut r = idx;
            let mut args = vec![0usize; self.degree];
            for a in args.iter_mut().rev() {
                *a = r % n;
                r /= n;
            }
            let t = Turn::new(self.table[idx] as i64, self.modulus as i64);
            if *t.numer() != 0 {
                rows.push(SerialRow {
                    args: args.iter().map(|&a| self.group.coords(a)).collect(),
                    numerator: *t.numer(),
                    denominator: *t.denom(),
                });
            }
        }
        SerialCochain {
            group: self.group.orders().to_vec(),
            degree: self.degree,
            rows,
        }
    }

    pub fn from_serial(s: &SerialCochain) -> Result<Self> {
        let g = FiniteAbelianGroup::new(&s.group)?;
        let mut m = 1u64;
        for r in &s.rows {
            if r.denominator <= 0 {
                return Err(Error::Io(format!("bad denominator {}", r.denominator)));
            }
            m = m.lcm(&(r.denominator as u64));
        }
        let mut c = Self::zero(&g, s.degree, m);
        for r in &s.rows {
            if r.args.len() != s.degree {
                return Err(Error::Degree {
                    expected: s.degree,
                    got: r.args.len(),
                });
            }
            let mut idx = 0;
            for a in &r.args {
                let e = crate::group::GroupElement { coords: a.clone() };
                idx = idx * g.order() + g.index(&e)?;
            }
            let num = Turn::new(r.numerator, r.denominator) * Turn::from_integer(m as i64);
            c.table[idx] = num.to_integer().rem_euclid(m as i64) as u64;
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_serial()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: SerialCochain = serde_json::from_str(s).map_err(|e| Error::Io(e.to_string()))?;
        Self::from_serial(&v)
    }

    /// CSV with a `# group=...,degree=...` line, then one row per nonzero entry:
    /// arguments as colon-joined coordinates, numerator, denominator.
    pub fn to_csv(&self) -> String {
        let s = self.to_serial();
        let orders: Vec<String> = s.group.iter().map(|n| n.to_string()).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut head: Vec<String> = (1..=s.degree).map(|i| format!("arg{i}")).collect();
        head.extend(["numerator".into(), "denominator".into()]);
        w.write_record(&head).expect("in-memory");
        for r in s.rows {
            let mut rec: Vec<String> = r
                .args
                .iter()
                .map(|a| {
                    a.iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(":")
                })
                .collect();
            rec.extend([r.numerator.to_string(), r.denominator.to_string()]);
            w.write_record(&rec).expect("in-memory");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory")).expect("ascii");
        format!("# group={} degree={}\n{body}", orders.join(":"), s.degree)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Io(format!("cochain csv: {m}"));
        let text = text.trim_start();
        let (meta, body) = text.split_once('\n').unwrap_or((text, ""));
        let meta = meta
            .strip_prefix('#')
            .ok_or_else(|| bad("missing # group=... degree=... line"))?;
        let mut group = None;
        let mut degree = None;
        for kv in meta.split_whitespace() {
            match kv.split_once('=') {
                Some(("group", v)) => {
                    group = Some(
                        v.split(':')
                            .map(|n| n.parse::<u32>().map_err(|_| bad("group")))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                Some(("degree", v)) => {
                    degree = Some(v.parse::<usize>().map_err(|_| bad("degree"))?)
                }
                _ => {}
            }
        }
        let (group, degree) = (
            group.ok_or_else(|| bad("group"))?,
            degree.ok_or_else(|| bad("degree"))?,
        );
        let mut rd = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(body.as_bytes());
        let mut rows = Vec::new();
        for rec in rd.records() {
            let f = rec.map_err(|e| bad(&e.to_string()))?;
            if f.len() != degree + 2 {
                return Err(bad("column count"));
            }
            let args = f
                .iter()
                .take(degree)
                .map(|a| {
                    a.split(':')
                        .map(|c| c.parse::<u32>().map_err(|_| bad("coordinate")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(SerialRow {
                args,
                numerator: f[degree].parse().map_err(|_| bad("numerator"))?,
                denominator: f[degree + 1].parse().map_err(|_| bad("denominator"))?,
            });
        }
        Self::from_serial(&SerialCochain {
            group,
            degree,
            rows,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SerialRow {
    pub args: Vec<Vec<u32>>,
    pub numerator: i64,
    pub denominator: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SerialCochain {
    pub group: Vec<u32>,
    pub degree: usize,
    pub rows: Vec<SerialRow>,
}

/// `(dc)(x,y,z) = c(x,y) + c(x+y,z) − c(x,y+z) − c(y,z)`.
pub fn coboundary(c: &PhaseCochain) -> Result<PhaseCochain> {
    if c.degree != 2 {
        return Err(Error::Degree {
            expected: 2,
            got: c.degree,
        });
    }
    let g = c.group.clone();
    let m = c.modulus as i64;
    Ok(PhaseCochain::from_fn(&g, 3, c.modulus, |a| {
        let (x, y, z) = (a[0], a[1], a[2]);
        (c.num2(x, y) as i64 + c.num2(g.add(x, y), z) as i64
            - c.num2(x, g.add(y, z)) as i64
            - c.num2(y, z) as i64)
            .rem_euclid(m)
    }))
}

/// Standard inhomogeneous coboundary for the trivial action, any degree:
/// `c(x2..) + Σ (−1)^i c(.., x_i + x_{i+1}, ..) + (−1)^{p+1} c(x1..xp)`.
pub fn coboundary_standard(c: &PhaseCochain) -> PhaseCochain {
    let g = c.group.clone();
    let p = c.degree;
    let m = c.modulus as i64;
    PhaseCochain::from_fn(&g, p + 1, c.modulus, |a| {
        let mut s = c.num(&a[1..]) as i64;
        let mut buf = vec![0usize; p];
        for i in 1..=p {
            for (k, slot) in buf.iter_mut().enumerate() {
                *slot = match k + 1 {
                    j if j < i => a[k],
                    j if j == i => g.add(a[k], a[k + 1]),
                    _ => a[k + 1],
                };
            }
            let v = c.num(&buf) as i64;
            s += if i % 2 == 1 { -v } else { v };
        }
        let last = c.num(&a[..p]) as i64;
        s += if (p + 1) % 2 == 1 { -last } else { last };
        s.rem_euclid(m)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PentagonReport {
    pub ok: bool,
    pub violation: Option<[usize; 4]>,
}

/// `φ(x,y,z) + φ(x,y+z,w) + φ(y,z,w) = φ(x+y,z,w) + φ(x,y,z+w)` for all quadruples.
pub fn pentagon_check(phi: &PhaseCochain) -> Result<PentagonReport> {
    if phi.degree != 3 {
        return Err(Error::Degree {
            expected: 3,
            got: phi.degree,
        });
    }
    let g = &phi.group;
    let n = g.order();
    let m = phi.modulus;
    for x in 0..n {
        for y in 0..n {
            let xy = g.add(x, y);
            for z in 0..n {
                let yz = g.add(y, z);
                let a = phi.num3(x, y, z);
                for w in 0..n {
                    let lhs = a + phi.num3(x, yz, w) + phi.num3(y, z, w);
                    let rhs = phi.num3(xy, z, w) + phi.num3(x, y, g.add(z, w));
                    if lhs % m != rhs % m {
                        return Ok(PentagonReport {
                            ok: false,
                            violation: Some([x, y, z, w]),
                        });
                    }
                }
            }
        }
    }
    Ok(PentagonReport {
        ok: true,
        violation: None,
    })
}

/// A degree-3 cochain known to be an antisymmetric tricharacter.
#[derive(Clone, Debug, PartialEq)]
pub struct Tricharacter(PhaseCochain);

impl Tricharacter {
    pub fn new(phi: PhaseCochain) -> Result<Self> {
        check_tricharacter(&phi)?;
        Ok(Self(phi))
    }
    pub fn cochain(&self) -> &PhaseCochain {
        &self.0
    }
    pub fn into_cochain(self) -> PhaseCochain {
        self.0
    }
}

impl std::ops::Deref for Tricharacter {
    type Target = PhaseCochain;
    fn deref(&self) -> &PhaseCochain {
        &self.0
    }
}

/// Exhaustive: additive in the first argument, negated by the transpositions
/// (12) and (23), zero on repeated arguments.
pub fn check_tricharacter(phi: &PhaseCochain) -> Result<()> {
    if phi.degree != 3 {
        return Err(Error::Degree {
            expected: 3,
            got: phi.degree,
        });
    }
    let g = &phi.group;
    let n = g.order();
    let m = phi.modulus;
    let fail = |what: &str, a: &[usize]| Err(Error::NotTricharacter(format!("{what} at {a:?}")));
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let t = phi.num3(x, y, z);
                if !(t + phi.num3(y, x, z)).is_multiple_of(m) {
                    return fail("antisymmetry (12)", &[x, y, z]);
                }
                if !(t + phi.num3(x, z, y)).is_multiple_of(m) {
                    return fail("antisymmetry (23)", &[x, y, z]);
                }
                if (x == y || y == z || x == z) && t != 0 {
                    return fail("repeated argument", &[x, y, z]);
                }
                for x2 in 0..n {
                    if phi.num3(g.add(x, x2), y, z) != (t + phi.num3(x2, y, z)) % m {
                        return fail("multiplicativity", &[x, x2, y, z]);
                    }
                }
            }
        }
    }
    Ok(())
}

/// `turn(a,b,c) = θ·a·(b×c)` on `Z_N^3`.
pub fn volume_tricharacter(n: u32, theta: Turn) -> Result<Tricharacter> {
    let tn = theta * Turn::from_integer(n as i64);
    if !tn.is_integer() {
        return Err(Error::Theta {
            theta: theta.to_string(),
            n,
        });
    }
    let g = FiniteAbelianGroup::power(n, 3);
    let m = *theta.denom() as u64;
    let p = *theta.numer();
    let phi = PhaseCochain::from_fn(&g, 3, m, |a| {
        let (u, v, w) = (
            coords_i64(&g, a[0]),
            coords_i64(&g, a[1]),
            coords_i64(&g, a[2]),
        );
        p * det3(&u, &v, &w)
    });
    Ok(Tricharacter(phi))
}

/// The volume tricharacter with `N = 2`, `θ = 1/2`.
pub fn octonion_cocycle() -> Tricharacter {
    volume_tricharacter(2, Turn::new(1, 2)).expect("admissible")
}

/// Generator of `H³(Z_N, U(1))`: turn `x·(y + z − [y+z]_N)/N²`.
pub fn cyclic_generator(n: u32) -> PhaseCochain {
    let g = FiniteAbelianGroup::cyclic(n);
    let n = n as i64;
    PhaseCochain::from_fn(&g, 3, (n * n) as u64, |a| {
        let (x, y, z) = (a[0] as i64, a[1] as i64, a[2] as i64);
        x * (y + z - (y + z) % n)
    })
}

pub(crate) fn coords_i64(g: &FiniteAbelianGroup, i: usize) -> [i64; 3] {
    [
        g.coord(i, 0) as i64,
        g.coord(i, 1) as i64,
        g.coord(i, 2) as i64,
    ]
}

pub fn det3(a: &[i64; 3], b: &[i64; 3], c: &[i64; 3]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Cube root of the cyclic sum `t(x,y,z) + t(y,z,x) + t(z,x,y)`.
///
/// When `3 ∤ M` the root in `(1/M)Z/Z` is unique. Otherwise the sum of the
/// representatives in `[0,1)` must be divisible by 3 in `(1/M)Z`, and that
/// quotient is returned.
pub fn antisymmetrize(phi: &PhaseCochain) -> Result<PhaseCochain> {
    if phi.degree != 3 {
        return Err(Error::Degree {
            expected: 3,
            got: phi.degree,
        });
    }
    let n = phi.group.order();
    let m = phi.modulus;
    let mut out = PhaseCochain::zero(&phi.group, 3, m);
    let inv3 = if !m.is_multiple_of(3) {
        Some((1..m.max(2)).find(|k| (3 * k) % m == 1 % m).unwrap_or(0))
    } else {
        None
    };
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let s = phi.num3(x, y, z) + phi.num3(y, z, x) + phi.num3(z, x, y);
                let r = match inv3 {
                    Some(k) => (s % m) * k % m,
                    None if s.is_multiple_of(3) => (s / 3) % m,
                    None => {
                        return Err(Error::CubeRoot {
                            args: vec![x, y, z],
                            reason: format!(
                                "cyclic sum {s}/{m} is not divisible by 3 and 3 divides {m}"
                            ),
                        })
                    }
                };
                let idx = (x * n + y) * n + z;
                out.table[idx] = r;
            }
        }
    }
    Ok(out)
}

/// Finds a normalized `c` with `dc = φ1 − φ2` in `(1/M)Z/Z`, `M` the lcm of
/// the two moduli, or `None` when no such cochain exists.
pub fn solve_cohomologous(
    phi1: &PhaseCochain,
    phi2: &PhaseCochain,
) -> Result<Option<PhaseCochain>> {
    let m = phi1.modulus.lcm(&phi2.modulus);
    solve_cohomologous_mod(phi1, phi2, m)
}

/// As [`solve_cohomologous`], searching `c` in `(1/m)Z/Z`.
pub fn solve_cohomologous_mod(
    phi1: &PhaseCochain,
    phi2: &PhaseCochain,
    m: u64,
) -> Result<Option<PhaseCochain>> {
    let diff = phi1.combine(1, phi2, -1)?.with_modulus(m)?;
    let g = &phi1.group;
    let n = g.order();
    // Unknowns: c(x,y) for x,y ≠ 0.
    let var = |x: usize, y: usize| -> Option<usize> {
        (x != 0 && y != 0).then(|| (x - 1) * (n - 1) + (y - 1))
    };
    let cols = (n - 1) * (n - 1);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for x in 1..n {
        for y in 1..n {
            for z in 1..n {
                let mut row = vec![0u64; cols];
                let mut put = |v: Option<usize>, s: i64| {
                    if let Some(j) = v {
                        row[j] = (row[j] as i64 + s).rem_euclid(m as i64) as u64;
                    }
                };
                put(var(x, y), 1);
                put(var(g.add(x, y), z), 1);
                put(var(x, g.add(y, z)), -1);
                put(var(y, z), -1);
                rows.push(row);
                rhs.push(diff.num3(x, y, z));
            }
        }
    }
    // Identity-containing triples: normalized φ's make these 0 = 0.
    if !diff.is_normalized() {
        return Ok(None);
    }
    let Some(sol) = solve_mod(&rows, &rhs, cols, m) else {
        return Ok(None);
    };
    let c = PhaseCochain::from_fn(g, 2, m, |a| var(a[0], a[1]).map_or(0, |j| sol[j] as i64));
    debug_assert!(coboundary(&c).map(|d| d == diff).unwrap_or(false));
    Ok(Some(c))
}

/// `σ((y,η),(x,ξ)) = η(x)` on `G x Ĝ` (the dual identified with `G`).
pub fn mackey_multiplier(g: &FiniteAbelianGroup) -> PhaseCochain {
    let gg = g.product(g);
    let n = g.order();
    PhaseCochain::from_fn(&gg, 2, g.exponent(), |a| {
        let eta = a[0] % n;
        let x = a[1] / n;
        g.pairing(eta, x) as i64
    })
}
