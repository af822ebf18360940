//! Polynomial differential forms on `R³`, the double complex
//! `Cᵖ(Z³, Ω^q(R³))`, and the descent from `H = k·vol` to a group 3-cocycle.
//!
//! Lattice identities are checked on the box `[−r, r]³` in every argument and
//! symbolically in `x`. Each identity is a polynomial in the lattice
//! coordinates of degree at most 2 in any single coordinate, so vanishing on
//! five points per coordinate (`r = 2`) proves it for all of `Z³`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub type Q = Ratio<i64>;
pub type Lattice = [i64; 3];

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// Polynomial in `x₁, x₂, x₃` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(BTreeMap<[u8; 3], Q>);

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn monomial(c: Q, e: [u8; 3]) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        Self(m)
    }

    /// `c·x_i`, with `i ∈ {0,1,2}`.
    pub fn var(c: Q, i: usize) -> Self {
        let mut e = [0u8; 3];
        e[i] = 1;
        Self::monomial(c, e)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; 3], &Q)> {
        self.0.iter()
    }

    fn add_term(&mut self, e: [u8; 3], c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(e).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.0 {
            out.add_term(*e, *c);
        }
        out
    }

    pub fn scale(&self, c: Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self(self.0.iter().map(|(e, v)| (*e, *v * c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(q(-1)))
    }

    pub fn deriv(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.0 {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                out.add_term(f, *c * q(e[i] as i64));
            }
        }
        out
    }

    /// `p(x + t)`.
    pub fn translate(&self, t: [Q; 3]) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.0 {
            // Expand each (x_i + t_i)^{e_i} binomially.
            let mut acc: Vec<([u8; 3], Q)> = vec![([0, 0, 0], *c)];
            for i in 0..3 {
                let mut next = Vec::new();
                for (f, v) in &acc {
                    let mut binom = 1i64;
                    for j in 0..=e[i] {
                        let mut g = *f;
                        g[i] = j;
                        let pw = (0..e[i] - j).fold(q(1), |a, _| a * t[i]);
                        next.push((g, *v * q(binom) * pw));
                        binom = binom * (e[i] - j) as i64 / (j as i64 + 1);
                    }
                }
                acc = next;
            }
            for (f, v) in acc {
                out.add_term(f, v);
            }
        }
        out
    }

    pub fn eval(&self, x: [Q; 3]) -> Q {
        self.0
            .iter()
            .map(|(e, c)| (0..3).fold(*c, |a, i| a * (0..e[i]).fold(q(1), |b, _| b * x[i])))
            .fold(Q::zero(), |a, b| a + b)
    }

    /// The value if `self` has no `x`-dependence.
    pub fn as_constant(&self) -> Option<Q> {
        match self.0.len() {
            0 => Some(Q::zero()),
            1 => self.0.get(&[0, 0, 0]).copied(),
            _ => None,
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.0 {
            let mono: Vec<String> = (0..3)
                .filter(|&i| e[i] > 0)
                .map(|i| {
                    if e[i] == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e[i])
                    }
                })
                .collect();
            let (sign, mag) = if c.is_negative() {
                ("-", -*c)
            } else {
                ("+", *c)
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Increasing index sets of size `q` in `{0,1,2}` as bitmasks, ordered
/// lexicographically: `dx₁, dx₂, dx₃`; `dx₁∧dx₂, dx₁∧dx₃, dx₂∧dx₃`.
fn basis(q: usize) -> Vec<u8> {
    match q {
        0 => vec![0],
        1 => vec![0b001, 0b010, 0b100],
        2 => vec![0b011, 0b101, 0b110],
        3 => vec![0b111],
        _ => vec![],
    }
}

fn basis_label(mask: u8) -> String {
    let parts: Vec<String> = (0..3)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| format!("dx{}", i + 1))
        .collect();
    parts.join("^")
}

/// Polynomial `q`-form on `R³`, one coefficient per increasing multi-index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyForm {
    degree: usize,
    comps: Vec<Poly>,
}

impl PolyForm {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            comps: vec![Poly::zero(); basis(degree).len()],
        }
    }

    /// Components in the order of the basis: `dx₁, dx₂, dx₃` for 1-forms,
    /// `dx₁∧dx₂, dx₁∧dx₃, dx₂∧dx₃` for 2-forms.
    pub fn new(degree: usize, comps: Vec<Poly>) -> Result<Self> {
        if degree > 3 || comps.len() != basis(degree).len() {
            return Err(Error::Shape(format!(
                "{}-form needs {} components",
                degree,
                basis(degree).len()
            )));
        }
        Ok(Self { degree, comps })
    }

    pub fn function(p: Poly) -> Self {
        Self {
            degree: 0,
            comps: vec![p],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "form degrees");
        Self {
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: Q) -> Self {
        Self {
            degree: self.degree,
            comps: self.comps.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(q(-1)))
    }

    /// Pullback along `x ↦ x + t`.
    pub fn translate(&self, t: [Q; 3]) -> Self {
        Self {
            degree: self.degree,
            comps: self.comps.iter().map(|a| a.translate(t)).collect(),
        }
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (p, m) in self.comps.iter().zip(basis(self.degree)) {
            if !p.is_zero() {
                parts.push(if m == 0 {
                    format!("{p}")
                } else {
                    format!("({p}) {}", basis_label(m))
                });
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// De Rham differential. A 3-form has no successor and is rejected.
pub fn exterior_d(w: &PolyForm) -> Result<PolyForm> {
    if w.degree >= 3 {
        return Err(Error::Degree {
            expected: 2,
            got: w.degree,
        });
    }
    let src = basis(w.degree);
    let dst = basis(w.degree + 1);
    let mut out = PolyForm::zero(w.degree + 1);
    for (p, &mask) in w.comps.iter().zip(&src) {
        for i in 0..3 {
            if mask & (1 << i) != 0 {
                continue;
            }
            let before = (0..i).filter(|j| mask & (1 << j) != 0).count();
            let sign = if before % 2 == 0 { 1 } else { -1 };
            let j = dst
                .iter()
                .position(|&m| m == mask | (1 << i))
                .expect("basis");
            out.comps[j] = out.comps[j].add(&p.deriv(i).scale(q(sign)));
        }
    }
    Ok(out)
}

/// Direction of the translation pullback defining `γ·ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Translation {
    /// `(γ·ω)(x) = ω(x + γ)`.
    Plus,
    /// `(γ·ω)(x) = ω(x − γ)`.
    Minus,
}

impl Translation {
    pub fn act(self, g: Lattice, w: &PolyForm) -> PolyForm {
        let s = if self == Translation::Plus { 1 } else { -1 };
        w.translate([q(s * g[0]), q(s * g[1]), q(s * g[2])])
    }
}

/// Signs in the descent equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DescentSigns {
    /// `δB = dA`, `δA = df`, `δf = c`, as displayed.
    Literal,
    /// The total differential `D = δ + (−1)ᵖ d`: `δB = dA`, `δA = −df`, `δf = c`.
    TotalDifferential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Convention {
    pub translation: Translation,
    pub signs: DescentSigns,
}

pub type Evaluator = Arc<dyn Fn(&[Lattice]) -> PolyForm + Send + Sync>;

/// `f: (Z³)ᵖ → Ω^q(R³)`, evaluated on demand.
#[derive(Clone)]
pub struct FormCochain {
    pub p: usize,
    pub q: usize,
    eval: Evaluator,
}

impl fmt::Debug for FormCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormCochain(p={}, q={})", self.p, self.q)
    }
}

fn add_lattice(a: Lattice, b: Lattice) -> Lattice {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

impl FormCochain {
    pub fn new(p: usize, q: usize, eval: Evaluator) -> Self {
        Self { p, q, eval }
    }

    pub fn constant(w: PolyForm) -> Self {
        let q = w.degree;
        Self {
            p: 0,
            q,
            eval: Arc::new(move |_| w.clone()),
        }
    }

    pub fn at(&self, args: &[Lattice]) -> PolyForm {
        assert_eq!(args.len(), self.p, "cochain arity");
        (self.eval)(args)
    }

    pub fn scale(&self, c: Q) -> Self {
        let f = self.eval.clone();
        Self {
            p: self.p,
            q: self.q,
            eval: Arc::new(move |a| f(a).scale(c)),
        }
    }

    /// Pointwise exterior derivative.
    pub fn d(&self) -> Result<Self> {
        if self.q >= 3 {
            return Err(Error::Degree {
                expected: 2,
                got: self.q,
            });
        }
        let f = self.eval.clone();
        Ok(Self {
            p: self.p,
            q: self.q + 1,
            eval: Arc::new(move |a| exterior_d(&f(a)).expect("degree checked")),
        })
    }
}

/// `(δf)(γ₁,…,γ_{p+1}) = γ₁·f(γ₂,…) + Σᵢ (−1)ⁱ f(…, γᵢ+γᵢ₊₁, …) + (−1)^{p+1} f(γ₁,…,γ_p)`.
pub fn group_delta(f: &FormCochain, action: Translation) -> FormCochain {
    let p = f.p;
    let inner = f.eval.clone();
    FormCochain {
        p: p + 1,
        q: f.q,
        eval: Arc::new(move |g: &[Lattice]| {
            let mut out = action.act(g[0], &inner(&g[1..]));
            for i in 0..p {
                let mut args: Vec<Lattice> = g[..i].to_vec();
                args.push(add_lattice(g[i], g[i + 1]));
                args.extend_from_slice(&g[i + 2..]);
                let t = inner(&args);
                out = if i % 2 == 0 { out.sub(&t) } else { out.add(&t) };
            }
            let last = inner(&g[..p]);
            if p.is_multiple_of(2) {
                out.sub(&last)
            } else {
                out.add(&last)
            }
        }),
    }
}

/// Primitives `B`, `A_γ`, `f_{β,γ}` for the descent.
#[derive(Clone, Debug)]
pub struct Primitives {
    pub name: String,
    pub b: PolyForm,
    pub a: FormCochain,
    pub f: FormCochain,
}

/// `H̃ = k dx₁∧dx₂∧dx₃`.
pub fn volume_form(k: Q) -> PolyForm {
    PolyForm {
        degree: 3,
        comps: vec![Poly::constant(k)],
    }
}

/// `B = ⅓k(x₁dx₂∧dx₃ + cycl)`, `A_n = ⅙k(n₁(x₂dx₃ − x₃dx₂) + cycl)`,
/// `f_{m,n} = ⅙k(m₁(n₂x₃ − n₃x₂) + cycl)`.
pub fn determinant_primitives(k: Q) -> Primitives {
    let (k3, k6) = (k / q(3), k / q(6));
    let b = PolyForm {
        degree: 2,
        comps: vec![Poly::var(k3, 2), Poly::var(-k3, 1), Poly::var(k3, 0)],
    };
    let a = FormCochain::new(
        1,
        1,
        Arc::new(move |g: &[Lattice]| {
            let n = g[0];
            PolyForm {
                degree: 1,
                comps: vec![
                    Poly::var(k6 * q(n[1]), 2).add(&Poly::var(-k6 * q(n[2]), 1)),
                    Poly::var(k6 * q(n[2]), 0).add(&Poly::var(-k6 * q(n[0]), 2)),
                    Poly::var(k6 * q(n[0]), 1).add(&Poly::var(-k6 * q(n[1]), 0)),
                ],
            }
        }),
    );
    let f = FormCochain::new(
        2,
        0,
        Arc::new(move |g: &[Lattice]| {
            let (m, n) = (g[0], g[1]);
            // m·(n × x) = x·(m × n).
            let c = [
                m[1] * n[2] - m[2] * n[1],
                m[2] * n[0] - m[0] * n[2],
                m[0] * n[1] - m[1] * n[0],
            ];
            let p = (0..3).fold(Poly::zero(), |acc, i| acc.add(&Poly::var(k6 * q(c[i]), i)));
            PolyForm::function(p)
        }),
    );
    Primitives {
        name: "antisymmetric".into(),
        b,
        a,
        f,
    }
}

/// `B = k x₃ dx₁∧dx₂`, `A_γ = −kγ₃x₂ dx₁`, `f_{β,γ} = kβ₂γ₃x₁`, giving `c = k l₁m₂n₃`
/// under translation `x ↦ x + γ` and total-differential signs.
pub fn product_primitives(k: Q) -> Primitives {
    let b = PolyForm {
        degree: 2,
        comps: vec![Poly::var(k, 2), Poly::zero(), Poly::zero()],
    };
    let a = FormCochain::new(
        1,
        1,
        Arc::new(move |g: &[Lattice]| PolyForm {
            degree: 1,
            comps: vec![Poly::var(-k * q(g[0][2]), 1), Poly::zero(), Poly::zero()],
        }),
    );
    let f = FormCochain::new(
        2,
        0,
        Arc::new(move |g: &[Lattice]| PolyForm::function(Poly::var(k * q(g[0][1] * g[1][2]), 0))),
    );
    Primitives {
        name: "product".into(),
        b,
        a,
        f,
    }
}

pub fn lattice_box(r: i64) -> Vec<Lattice> {
    let mut v = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                v.push([a, b, c]);
            }
        }
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationCheck {
    pub name: String,
    pub holds: bool,
    pub cases: usize,
    pub witness: Option<String>,
}

fn ser_opt_q<S: serde::Serializer>(v: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Descent {
    pub convention: Convention,
    pub primitives: String,
    pub radius: i64,
    pub equations: Vec<EquationCheck>,
    pub normalized: bool,
    /// `c(e₁, e₂, e₃)` when every `δf` is constant.
    #[serde(serialize_with = "ser_opt_q")]
    pub c_e123: Option<Q>,
    pub log: Vec<String>,
    #[serde(skip)]
    c: BTreeMap<[Lattice; 3], Q>,
}

impl Descent {
    pub fn ok(&self) -> bool {
        self.equations.iter().all(|e| e.holds)
    }

    /// The 3-cocycle on the box, when the last step succeeded.
    pub fn c(&self, a: Lattice, b: Lattice, g: Lattice) -> Option<Q> {
        self.c.get(&[a, b, g]).copied()
    }

    pub fn c_table(&self) -> &BTreeMap<[Lattice; 3], Q> {
        &self.c
    }
}

fn check_forms(name: &str, cases: impl Iterator<Item = (Vec<Lattice>, PolyForm)>) -> EquationCheck {
    let mut n = 0;
    for (args, residual) in cases {
        n += 1;
        if !residual.is_zero() {
            return EquationCheck {
                name: name.into(),
                holds: false,
                cases: n,
                witness: Some(format!("args {args:?}: residual {residual}")),
            };
        }
    }
    EquationCheck {
        name: name.into(),
        holds: true,
        cases: n,
        witness: None,
    }
}

/// Runs the four descent steps for `h` with the given primitives, every
/// lattice argument ranging over `[−r, r]³`.
pub fn zigzag(h: &PolyForm, prim: &Primitives, conv: Convention, r: i64) -> Result<Descent> {
    if h.degree != 3 {
        return Err(Error::Degree {
            expected: 3,
            got: h.degree,
        });
    }
    let pts = lattice_box(r);
    let act = conv.translation;
    let mut log = vec![
        format!("convention: {:?}, {:?}", conv.translation, conv.signs),
        format!("H = {h}"),
        format!("B = {}", prim.b),
        format!("A_(1,0,0) = {}", prim.a.at(&[[1, 0, 0]])),
        format!(
            "f_((1,0,0),(0,1,0)) = {}",
            prim.f.at(&[[1, 0, 0], [0, 1, 0]])
        ),
    ];
    let mut equations = Vec::new();

    let db = exterior_d(&prim.b)?;
    equations.push(check_forms("dB = H", std::iter::once((vec![], db.sub(h)))));

    let delta_b = group_delta(&FormCochain::constant(prim.b.clone()), act);
    let da = prim.a.d()?;
    equations.push(check_forms(
        "(δB)_γ = dA_γ",
        pts.iter()
            .map(|&g| (vec![g], delta_b.at(&[g]).sub(&da.at(&[g])))),
    ));

    let delta_a = group_delta(&prim.a, act);
    let df = prim.f.d()?;
    let eps = if conv.signs == DescentSigns::Literal {
        q(1)
    } else {
        q(-1)
    };
    let name = if conv.signs == DescentSigns::Literal {
        "(δA)_{β,γ} = df_{β,γ}"
    } else {
        "(δA)_{β,γ} = −df_{β,γ}"
    };
    equations.push(check_forms(
        name,
        pts.iter()
            .flat_map(|&b| pts.iter().map(move |&g| (b, g)))
            .map(|(b, g)| {
                (
                    vec![b, g],
                    delta_a.at(&[b, g]).sub(&df.at(&[b, g]).scale(eps)),
                )
            }),
    ));

    let normalized = pts.iter().all(|&b| {
        pts.iter().all(|&g| {
            prim.f.at(&[b, g]).comps[0]
                .eval([q(0), q(0), q(0)])
                .is_zero()
        })
    });

    let delta_f = group_delta(&prim.f, act);
    let mut c = BTreeMap::new();
    let mut constant = EquationCheck {
        name: "(δf)_{α,β,γ} = c constant".into(),
        holds: true,
        cases: 0,
        witness: None,
    };
    'outer: for &a in &pts {
        for &b in &pts {
            for &g in &pts {
                constant.cases += 1;
                let v = delta_f.at(&[a, b, g]);
                match v.comps[0].as_constant() {
                    Some(val) => {
                        c.insert([a, b, g], val);
                    }
                    None => {
                        constant.holds = false;
                        constant.witness = Some(format!("args {:?}: δf = {v}", [a, b, g]));
                        c.clear();
                        break 'outer;
                    }
                }
            }
        }
    }
    equations.push(constant);
    let c_e123 = c.get(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).copied();
    if let Some(v) = c_e123 {
        log.push(format!("c(e1,e2,e3) = {v}"));
    }
    for e in &equations {
        log.push(format!(
            "{}: {} over {} cases{}",
            e.name,
            if e.holds { "holds" } else { "FAILS" },
            e.cases,
            e.witness
                .as_ref()
                .map(|w| format!(" ({w})"))
                .unwrap_or_default()
        ));
    }
    Ok(Descent {
        convention: conv,
        primitives: prim.name.clone(),
        radius: r,
        equations,
        normalized,
        c_e123,
        log,
        c,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub chosen: Option<Convention>,
    /// Every convention tried, in order, with whether all four equations held.
    pub tried: Vec<(Convention, bool, Option<String>)>,
}

/// Tries `x ↦ x+γ` and `x ↦ x−γ` with the literal signs, then with the
/// total-differential signs, and picks the first under which all four
/// equations hold for the displayed primitives and `c(e₁,e₂,e₃) = k/6`.
pub fn calibrate_action(k: Q, r: i64) -> Result<Calibration> {
    let prim = determinant_primitives(k);
    let h = volume_form(k);
    let mut tried = Vec::new();
    let mut chosen = None;
    for signs in [DescentSigns::Literal, DescentSigns::TotalDifferential] {
        for translation in [Translation::Plus, Translation::Minus] {
            let conv = Convention { translation, signs };
            let d = zigzag(&h, &prim, conv, r)?;
            let ok = d.ok() && d.c_e123 == Some(k / q(6));
            let why = d
                .equations
                .iter()
                .find(|e| !e.holds)
                .map(|e| format!("{}: {}", e.name, e.witness.clone().unwrap_or_default()));
            tried.push((conv, ok, why));
            if ok && chosen.is_none() {
                chosen = Some(conv);
            }
        }
        if chosen.is_some() {
            break;
        }
    }
    Ok(Calibration { chosen, tried })
}

/// First transposition pair on the box where `c` is not alternating.
pub fn alternating_witness(d: &Descent) -> Option<[Lattice; 3]> {
    for (&[a, b, g], &v) in d.c_table() {
        for [x, y, z] in [[b, a, g], [a, g, b], [g, b, a]] {
            if d.c(x, y, z).map(|w| w != -v).unwrap_or(false) {
                return Some([a, b, g]);
            }
        }
    }
    None
}

/// `(δc)(α,β,γ,ε) = c(β,γ,ε) − c(α+β,γ,ε) + c(α,β+γ,ε) − c(α,β,γ+ε) + c(α,β,γ)`
/// for trivial action, over all quadruples in `[−r, r]³` whose sums stay in
/// the descent box.
pub fn cocycle_witness(d: &Descent, r: i64) -> Option<[Lattice; 4]> {
    let pts = lattice_box(r);
    let get = |a, b, g| d.c(a, b, g).expect("inside the descent box");
    if 2 * r > d.radius {
        return Some([[r, r, r]; 4]);
    }
    for &a in &pts {
        for &b in &pts {
            for &g in &pts {
                for &e in &pts {
                    let s = get(b, g, e) - get(add_lattice(a, b), g, e)
                        + get(a, add_lattice(b, g), e)
                        - get(a, b, add_lattice(g, e))
                        + get(a, b, g);
                    if !s.is_zero() {
                        return Some([a, b, g, e]);
                    }
                }
            }
        }
    }
    None
}

/// Polynomial 2-cochain on `Z³`: `g(m, n) = Σ c_e m^{e₀..₂} n^{e₃..₅}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyCochain2 {
    pub terms: Vec<([u8; 6], String)>,
    #[serde(skip)]
    coeffs: Vec<([u8; 6], BigRational)>,
}

fn mono6(e: &[u8; 6], m: Lattice, n: Lattice) -> BigInt {
    let v = [m[0], m[1], m[2], n[0], n[1], n[2]];
    let mut acc = BigInt::one();
    for i in 0..6 {
        for _ in 0..e[i] {
            acc *= BigInt::from(v[i]);
        }
    }
    acc
}

impl PolyCochain2 {
    pub fn eval(&self, m: Lattice, n: Lattice) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |a, (e, c)| {
            a + c * BigRational::from_integer(mono6(e, m, n))
        })
    }

    /// Trivial-action coboundary `g(β,γ) − g(α+β,γ) + g(α,β+γ) − g(α,β)`.
    pub fn delta(&self, a: Lattice, b: Lattice, g: Lattice) -> BigRational {
        self.eval(b, g) - self.eval(add_lattice(a, b), g) + self.eval(a, add_lattice(b, g))
            - self.eval(a, b)
    }
}

fn monomials6(max_deg: u8) -> Vec<[u8; 6]> {
    let mut out = Vec::new();
    let mut e = [0u8; 6];
    fn rec(i: usize, left: u8, e: &mut [u8; 6], out: &mut Vec<[u8; 6]>) {
        if i == 6 {
            if e.iter().sum::<u8>() > 0 {
                out.push(*e);
            }
            return;
        }
        for d in 0..=left {
            e[i] = d;
            rec(i + 1, left - d, e, out);
        }
        e[i] = 0;
    }
    rec(0, max_deg, &mut e, &mut out);
    out
}

fn to_big(v: Q) -> BigRational {
    BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
}

/// Exact Gauss–Jordan over `Q`; returns one solution with free variables at 0.
fn solve_rational(
    rows: &[Vec<BigRational>],
    rhs: &[BigRational],
    cols: usize,
) -> Option<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Finds a polynomial 2-cochain `g` of total degree ≤ 3 (no constant term)
/// with `δg = c₁ − c₂` under the trivial action. Equations are sampled from
/// the box, solved exactly, and the solution is then checked on every triple
/// of `[−r, r]³`; failing triples are added until the check passes.
pub fn solve_polynomial_coboundary(
    c1: &dyn Fn(Lattice, Lattice, Lattice) -> Q,
    c2: &dyn Fn(Lattice, Lattice, Lattice) -> Q,
    r: i64,
    seed: u64,
) -> Option<PolyCochain2> {
    let monos = monomials6(3);
    let pts = lattice_box(r);
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let mut sample: Vec<[Lattice; 3]> = (0..3 * monos.len())
        .map(|_| {
            let pick = |rng: &mut Xoshiro256StarStar| pts[rng.gen_range(0..pts.len())];
            [pick(&mut rng), pick(&mut rng), pick(&mut rng)]
        })
        .collect();
    for _ in 0..16 {
        let rows: Vec<Vec<BigRational>> = sample
            .iter()
            .map(|&[a, b, g]| {
                monos
                    .iter()
                    .map(|e| {
                        BigRational::from_integer(
                            mono6(e, b, g) - mono6(e, add_lattice(a, b), g)
                                + mono6(e, a, add_lattice(b, g))
                                - mono6(e, a, b),
                        )
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<BigRational> = sample
            .iter()
            .map(|&[a, b, g]| to_big(c1(a, b, g) - c2(a, b, g)))
            .collect();
        let x = solve_rational(&rows, &rhs, monos.len())?;
        let coeffs: Vec<([u8; 6], BigRational)> = monos
            .iter()
            .zip(x)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (*e, c))
            .collect();
        let g = PolyCochain2 {
            terms: coeffs.iter().map(|(e, c)| (*e, c.to_string())).collect(),
            coeffs,
        };
        match polynomial_coboundary_witness(&g, c1, c2, r) {
            None => return Some(g),
            Some(w) => sample.push(w),
        }
    }
    None
}

/// First triple on the box where `δg ≠ c₁ − c₂`. Evaluated with integer
/// arithmetic after clearing denominators.
pub fn polynomial_coboundary_witness(
    g: &PolyCochain2,
    c1: &dyn Fn(Lattice, Lattice, Lattice) -> Q,
    c2: &dyn Fn(Lattice, Lattice, Lattice) -> Q,
    r: i64,
) -> Option<[Lattice; 3]> {
    let den = g
        .coeffs
        .iter()
        .fold(BigInt::one(), |a, (_, c)| a.lcm(c.denom()));
    let int_terms: Vec<([u8; 6], i128)> = g
        .coeffs
        .iter()
        .map(|(e, c)| {
            let v = (c * BigRational::from_integer(den.clone())).to_integer();
            (*e, i128::try_from(v).expect("small coefficients"))
        })
        .collect();
    let den = i128::try_from(den).expect("small denominator");
    let ev = |m: Lattice, n: Lattice| -> i128 {
        let v = [m[0], m[1], m[2], n[0], n[1], n[2]];
        int_terms
            .iter()
            .map(|(e, c)| (0..6).fold(*c, |a, i| a * (v[i] as i128).pow(e[i] as u32)))
            .sum()
    };
    let pts = lattice_box(r);
    for &a in &pts {
        for &b in &pts {
            for &gm in &pts {
                let lhs =
                    ev(b, gm) - ev(add_lattice(a, b), gm) + ev(a, add_lattice(b, gm)) - ev(a, b);
                let diff = c1(a, b, gm) - c2(a, b, gm);
                // lhs/den == numer/denom  ⇔  lhs·denom == numer·den.
                if lhs * *diff.denom() as i128 != *diff.numer() as i128 * den {
                    return Some([a, b, gm]);
                }
            }
        }
    }
    None
}

pub fn det_lattice(a: Lattice, b: Lattice, c: Lattice) -> i64 {
    crate::cochain::det3(&a, &b, &c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Q {
        q(6)
    }

    const TD_PLUS: Convention = Convention {
        translation: Translation::Plus,
        signs: DescentSigns::TotalDifferential,
    };

    #[test]
    fn d_of_basic_forms() {
        // d(x₁ dx₂) = dx₁∧dx₂.
        let w = PolyForm::new(1, vec![Poly::zero(), Poly::var(q(1), 0), Poly::zero()]).unwrap();
        let dw = exterior_d(&w).unwrap();
        assert_eq!(
            dw.comps(),
            &[Poly::constant(q(1)), Poly::zero(), Poly::zero()]
        );
        // d(x₂ dx₁) = −dx₁∧dx₂.
        let w = PolyForm::new(1, vec![Poly::var(q(1), 1), Poly::zero(), Poly::zero()]).unwrap();
        assert_eq!(exterior_d(&w).unwrap().comps()[0], Poly::constant(q(-1)));
        assert!(exterior_d(&volume_form(q(1))).is_err());
    }

    #[test]
    fn dd_vanishes() {
        use rand::Rng;
        let mut rng = Xoshiro256StarStar::seed_from_u64(51);
        let rp = |rng: &mut Xoshiro256StarStar| {
            let mut p = Poly::zero();
            for _ in 0..6 {
                let e = [
                    rng.gen_range(0..3),
                    rng.gen_range(0..3),
                    rng.gen_range(0..3),
                ];
                p = p.add(&Poly::monomial(
                    Q::new(rng.gen_range(-9..9), rng.gen_range(1..5)),
                    e,
                ));
            }
            p
        };
        for _ in 0..20 {
            let f = PolyForm::function(rp(&mut rng));
            assert!(exterior_d(&exterior_d(&f).unwrap()).unwrap().is_zero());
            let w = PolyForm::new(1, vec![rp(&mut rng), rp(&mut rng), rp(&mut rng)]).unwrap();
            assert!(exterior_d(&exterior_d(&w).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn translation_matches_evaluation() {
        let p = Poly::monomial(q(2), [2, 1, 0])
            .add(&Poly::var(Q::new(1, 3), 2))
            .add(&Poly::constant(q(5)));
        let t = [q(1), q(-2), Q::new(1, 2)];
        let x = [q(3), Q::new(-1, 7), q(2)];
        assert_eq!(
            p.translate(t).eval(x),
            p.eval([x[0] + t[0], x[1] + t[1], x[2] + t[2]])
        );
    }

    #[test]
    fn determinant_b_is_a_primitive() {
        let p = determinant_primitives(k());
        assert_eq!(exterior_d(&p.b).unwrap(), volume_form(k()));
    }

    #[test]
    fn delta_squared_vanishes() {
        let p = determinant_primitives(k());
        for act in [Translation::Plus, Translation::Minus] {
            let b = FormCochain::constant(p.b.clone());
            let dd = group_delta(&group_delta(&b, act), act);
            let pts = lattice_box(2);
            for &x in &pts {
                for &y in &pts {
                    assert!(dd.at(&[x, y]).is_zero());
                }
            }
            let dda = group_delta(&group_delta(&p.a, act), act);
            for &x in pts.iter().step_by(7) {
                for &y in pts.iter().step_by(5) {
                    for &z in pts.iter().step_by(3) {
                        assert!(dda.at(&[x, y, z]).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn literal_signs_fail_in_both_directions() {
        let h = volume_form(k());
        let p = determinant_primitives(k());
        for translation in [Translation::Plus, Translation::Minus] {
            let d = zigzag(
                &h,
                &p,
                Convention {
                    translation,
                    signs: DescentSigns::Literal,
                },
                1,
            )
            .unwrap();
            assert!(!d.ok());
        }
    }

    #[test]
    fn calibration_picks_plus_with_total_differential() {
        let cal = calibrate_action(k(), 1).unwrap();
        assert_eq!(cal.chosen, Some(TD_PLUS));
        assert_eq!(cal.tried.len(), 4);
    }

    #[test]
    fn antisymmetric_representative() {
        let d = zigzag(&volume_form(k()), &determinant_primitives(k()), TD_PLUS, 1).unwrap();
        assert!(d.ok(), "{:?}", d.log);
        assert!(d.normalized);
        assert_eq!(d.c_e123, Some(q(1)));
        for (&[a, b, g], &v) in d.c_table() {
            assert_eq!(v, k() / q(6) * q(det_lattice(a, b, g)));
        }
        assert_eq!(alternating_witness(&d), None);
    }

    #[test]
    fn product_representative_and_cohomology() {
        let kk = Q::new(5, 2);
        let d = zigzag(&volume_form(kk), &product_primitives(kk), TD_PLUS, 1).unwrap();
        assert!(d.ok(), "{:?}", d.log);
        for (&[a, b, g], &v) in d.c_table() {
            assert_eq!(v, kk * q(a[0] * b[1] * g[2]));
        }
        let anti = move |a, b, g| kk / q(6) * q(det_lattice(a, b, g));
        let prod = move |a: Lattice, b: Lattice, g: Lattice| kk * q(a[0] * b[1] * g[2]);
        let sol = solve_polynomial_coboundary(&anti, &prod, 1, 7).expect("cohomologous");
        assert_eq!(polynomial_coboundary_witness(&sol, &anti, &prod, 2), None);
        // A non-coboundary difference is rejected.
        let twice = move |a, b, g| q(2) * anti(a, b, g);
        assert!(solve_polynomial_coboundary(&twice, &prod, 1, 7).is_none());
    }

    #[test]
    fn cocycle_on_small_box() {
        let d = zigzag(&volume_form(k()), &determinant_primitives(k()), TD_PLUS, 2).unwrap();
        assert_eq!(cocycle_witness(&d, 1), None);
    }
}
