//! Suite configuration, dispatch and JSON reports.

use crate::cochain::{
    antisymmetrize, check_tricharacter, cyclic_generator, octonion_cocycle, pentagon_check,
    volume_tricharacter, PhaseCochain, Turn,
};
use crate::coeff::{self, CoeffShape};
use crate::crossed::{
    central_defect, convolve, crossed_adjoint, exterior_equivalent, exterior_transport,
    packer_raeburn_stabilize, tensor_identity, tensor_shape, CrossedElement,
};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::kernel::{ad_sigma, adjoint, associator_defect, g_action, kprod, TwistedKernel};
use crate::octonion::{find_octonion_signs, octonion_sign, StrictOctonions};
use crate::scalar::{cmax_abs, C};
use crate::split::volume_split_system;
use crate::strictify::certify_strictification;
use crate::system::{build_canonical_system, canonical_phase_system, TwistedSystem};
use crate::takai::{certify_takai, double_dual_defect, DoubleCrossedElement};
use crate::torus::nonassociative_torus;
use crate::zigzag::{
    alternating_witness, calibrate_action, cocycle_witness, det_lattice, determinant_primitives,
    polynomial_coboundary_witness, product_primitives, solve_polynomial_coboundary, volume_form,
    zigzag, Convention, DescentSigns, FormCochain, Lattice, Poly, PolyForm, Primitives,
    Translation, Q,
};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

pub const SUITES: [&str; 9] = [
    "pentagon",
    "kernels",
    "crossed",
    "takai",
    "split",
    "strictify",
    "octonions",
    "zigzag",
    "natorus",
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Single products and algebraic laws.
    pub product: f64,
    /// Composed pipelines (associators, Takai).
    pub pipeline: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            product: 1e-12,
            pipeline: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: String,
    /// E.g. `Z2^3`, `Z3xZ3xZ3`.
    pub group: String,
    /// `trivial`, `octonion`, `volume`, `cyclic`, or a path to a JSON/CSV cochain.
    pub cocycle: String,
    /// `p/q`; defaults to `1/N` for `volume`.
    pub theta: Option<String>,
    /// `scalar` or `m<d>`.
    pub coeff: String,
    pub trials: usize,
    pub seed: u64,
    /// Shift one cocycle entry by half a turn before running.
    pub mutate: bool,
    pub tolerances: Tolerances,
    /// Coefficient of `H = k·vol` for the descent.
    pub k: String,
    /// Lattice box radius for the descent.
    pub radius: i64,
    /// `literal` or `total`: signs of the descent equations.
    pub signs: String,
    pub parallel: bool,
    /// Write sample kernels of the kernels suite to this path.
    pub dump_kernels: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: "all".into(),
            group: "Z2^3".into(),
            cocycle: "octonion".into(),
            theta: None,
            coeff: "scalar".into(),
            trials: 20,
            seed: 1,
            mutate: false,
            tolerances: Tolerances::default(),
            k: "6".into(),
            radius: 2,
            signs: "literal".into(),
            parallel: false,
            dump_kernels: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub defect: f64,
    pub tolerance: f64,
    pub witness: Option<Value>,
}

impl Check {
    fn exact(name: &str, witness: Option<Value>) -> Self {
        Self {
            name: name.into(),
            pass: witness.is_none(),
            defect: if witness.is_none() { 0.0 } else { 1.0 },
            tolerance: 0.0,
            witness,
        }
    }

    fn numeric(name: &str, defect: f64, tolerance: f64, witness: Value) -> Self {
        let pass = defect < tolerance;
        Self {
            name: name.into(),
            pass,
            defect,
            tolerance,
            witness: (!pass).then_some(witness),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub pass: bool,
    pub worst_defect: f64,
    /// First failing check's witness.
    pub witness: Option<Value>,
    pub checks: Vec<Check>,
    pub skipped: Vec<String>,
    pub notes: BTreeMap<String, Value>,
    pub timing_ms: u128,
    pub config: SuiteConfig,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Parsed and validated configuration.
#[derive(Clone, Debug)]
pub struct Setup {
    pub group: FiniteAbelianGroup,
    pub phi: PhaseCochain,
    pub clean_phi: PhaseCochain,
    pub theta: Option<Turn>,
    pub dim: usize,
    pub k: Q,
    pub signs: DescentSigns,
}

/// Where the mutation control shifts the cocycle.
pub const MUTATION_POINT: [usize; 3] = [1, 1, 1];

pub fn parse_turn(s: &str) -> Result<Turn> {
    let bad = || Error::Config(format!("expected a rational p/q, got {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (
            p.trim().parse().map_err(|_| bad())?,
            q.trim().parse().map_err(|_| bad())?,
        ),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if q == 0 {
        return Err(bad());
    }
    Ok(Turn::new(p, q))
}

fn parse_coeff(s: &str) -> Result<usize> {
    let t = s.trim().to_ascii_lowercase();
    if t == "scalar" || t == "c" {
        return Ok(1);
    }
    let digits = t
        .trim_start_matches("matrix")
        .trim_start_matches('m')
        .trim_matches(|c| c == '(' || c == ')');
    match digits.parse::<usize>() {
        Ok(d) if d >= 1 => Ok(d),
        _ => Err(Error::Config(format!(
            "coefficients must be `scalar` or `m<d>`, got {s:?}"
        ))),
    }
}

/// `Z_N³` as `N`, if that is the group.
fn cube_order(g: &FiniteAbelianGroup) -> Option<u32> {
    let o = g.orders();
    (o.len() == 3 && o.iter().all(|&x| x == o[0])).then_some(o[0])
}

pub fn load_cochain(path: &str) -> Result<PhaseCochain> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    if path.ends_with(".csv") {
        PhaseCochain::from_csv(&text)
    } else {
        PhaseCochain::from_json(&text)
    }
}

pub fn setup(cfg: &SuiteConfig) -> Result<Setup> {
    if cfg.suite != "all" && !SUITES.contains(&cfg.suite.as_str()) {
        return Err(Error::Config(format!(
            "unknown suite {:?}; expected one of all, {}",
            cfg.suite,
            SUITES.join(", ")
        )));
    }
    let group = FiniteAbelianGroup::parse(&cfg.group)?;
    let theta = cfg.theta.as_deref().map(parse_turn).transpose()?;
    let phi = match cfg.cocycle.as_str() {
        "trivial" => PhaseCochain::zero(&group, 3, 1),
        "octonion" => {
            if cube_order(&group) != Some(2) {
                return Err(Error::Config("the octonion cocycle lives on Z2^3".into()));
            }
            octonion_cocycle().into_cochain()
        }
        "volume" => {
            let n = cube_order(&group)
                .ok_or_else(|| Error::Config("the volume cocycle needs a group Z_N^3".into()))?;
            volume_tricharacter(n, theta.unwrap_or(Turn::new(1, n as i64)))?.into_cochain()
        }
        "cyclic" => match group.orders() {
            [n] => cyclic_generator(*n),
            _ => {
                return Err(Error::Config(
                    "the cyclic cocycle needs a cyclic group".into(),
                ))
            }
        },
        path => {
            let c = load_cochain(path)?;
            c.group().ensure_same(&group, "cocycle file")?;
            if c.degree() != 3 {
                return Err(Error::Degree {
                    expected: 3,
                    got: c.degree(),
                });
            }
            c
        }
    };
    let theta = match (cfg.cocycle.as_str(), theta) {
        ("volume", None) => cube_order(&group).map(|n| Turn::new(1, n as i64)),
        ("octonion", _) => Some(Turn::new(1, 2)),
        ("trivial", None) => Some(Turn::new(0, 1)),
        (_, t) => t,
    };
    let clean_phi = phi.clone();
    let phi = if cfg.mutate {
        if group.order() < 2 {
            return Err(Error::Config("mutation needs a nontrivial group".into()));
        }
        phi.mutated(&MUTATION_POINT, Turn::new(1, 2))
    } else {
        phi
    };
    let k = parse_turn(&cfg.k)?;
    let signs = match cfg.signs.as_str() {
        "literal" => DescentSigns::Literal,
        "total" => DescentSigns::TotalDifferential,
        s => {
            return Err(Error::Config(format!(
                "signs must be `literal` or `total`, got {s:?}"
            )))
        }
    };
    if cfg.trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }
    Ok(Setup {
        group,
        phi,
        clean_phi,
        theta,
        dim: parse_coeff(&cfg.coeff)?,
        k,
        signs,
    })
}

/// Independent stream per suite, derived from the master seed.
pub fn suite_rng(seed: u64, suite: &str) -> Xoshiro256StarStar {
    // FNV-1a of the name, folded into the seed.
    let h = suite.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    });
    Xoshiro256StarStar::seed_from_u64(seed ^ h)
}

#[derive(Default)]
struct Out {
    checks: Vec<Check>,
    skipped: Vec<String>,
    notes: BTreeMap<String, Value>,
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let st = setup(cfg)?;
    let start = Instant::now();
    let names: Vec<&str> = if cfg.suite == "all" {
        SUITES.to_vec()
    } else {
        vec![cfg.suite.as_str()]
    };
    let results: Vec<(String, Result<Out>)> = if cfg.parallel && names.len() > 1 {
        std::thread::scope(|scope| {
            let handles: Vec<_> = names
                .iter()
                .map(|&name| {
                    let st = &st;
                    (name, scope.spawn(move || dispatch(name, cfg, st)))
                })
                .collect();
            handles
                .into_iter()
                .map(|(n, h)| (n.to_string(), h.join().expect("suite thread")))
                .collect()
        })
    } else {
        names
            .iter()
            .map(|&n| (n.to_string(), dispatch(n, cfg, &st)))
            .collect()
    };
    let prefix = names.len() > 1;
    let mut out = Out::default();
    for (name, r) in results {
        let r = r?;
        let tag = |s: String| if prefix { format!("{name}: {s}") } else { s };
        out.checks.extend(r.checks.into_iter().map(|mut c| {
            c.name = tag(c.name);
            c
        }));
        out.skipped.extend(r.skipped.into_iter().map(tag));
        out.notes
            .extend(r.notes.into_iter().map(|(k, v)| (tag(k), v)));
    }
    let pass = out.checks.iter().all(|c| c.pass);
    let worst_defect = out.checks.iter().map(|c| c.defect).fold(0.0, f64::max);
    let witness = out
        .checks
        .iter()
        .find(|c| !c.pass)
        .map(|c| json!({"check": c.name, "witness": c.witness}));
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        suite: cfg.suite.clone(),
        pass,
        worst_defect,
        witness,
        checks: out.checks,
        skipped: out.skipped,
        notes: out.notes,
        timing_ms: start.elapsed().as_millis(),
        config: cfg.clone(),
    })
}

fn dispatch(name: &str, cfg: &SuiteConfig, st: &Setup) -> Result<Out> {
    let mut rng = suite_rng(cfg.seed, name);
    match name {
        "pentagon" => pentagon(st),
        "kernels" => kernels(cfg, st, &mut rng),
        "crossed" => crossed(cfg, st, &mut rng),
        "takai" => takai(cfg, st, &mut rng),
        "split" => split(cfg, st, &mut rng),
        "strictify" => strictify(cfg, st, &mut rng),
        "octonions" => octonions(cfg, st, &mut rng),
        "zigzag" => descent(cfg, st),
        "natorus" => natorus(cfg, st),
        _ => Err(Error::Config(format!("unknown suite {name:?}"))),
    }
}

fn coords(g: &FiniteAbelianGroup, xs: &[usize]) -> Value {
    json!(xs.iter().map(|&x| g.coords(x)).collect::<Vec<_>>())
}

fn pentagon(st: &Setup) -> Result<Out> {
    let mut o = Out::default();
    let r = pentagon_check(&st.phi)?;
    o.checks.push(Check::exact(
        "pentagon identity, all quadruples",
        r.violation.map(|v| coords(&st.group, &v)),
    ));
    o.checks.push(Check::exact(
        "normalized",
        st.phi
            .normalization_witness()
            .map(|v| coords(&st.group, &v)),
    ));
    o.notes.insert(
        "tricharacter".into(),
        json!(check_tricharacter(&st.phi).is_ok()),
    );
    Ok(o)
}

fn kernels(cfg: &SuiteConfig, st: &Setup, rng: &mut Xoshiro256StarStar) -> Result<Out> {
    let mut o = Out::default();
    let phi = Arc::new(st.phi.clone());
    let g = &st.group;
    let n = g.order();
    let shape = CoeffShape::matrix(st.dim);
    let tol = cfg.tolerances;

    let mut worst = (0.0f64, json!(null));
    for t in 0..cfg.trials {
        let k1 = TwistedKernel::<f64>::random(&phi, shape, rng)?;
        let k2 = TwistedKernel::random(&phi, shape, rng)?;
        let k3 = TwistedKernel::random(&phi, shape, rng)?;
        if t == 0 {
            if let Some(path) = &cfg.dump_kernels {
                let dump = format!(
                    "{{\"k1\":{},\"k2\":{},\"product\":{}}}",
                    k1.dump_json(),
                    k2.dump_json(),
                    kprod(&k1, &k2)?.dump_json()
                );
                std::fs::write(path, dump).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            }
        }
        let (d, (x, w)) = associator_defect(&k1, &k2, &k3)?;
        if d > worst.0 || t == 0 {
            worst = (
                d.max(worst.0),
                json!({"trial": t, "seed": cfg.seed, "entry": coords(g, &[x, w])}),
            );
        }
    }
    o.checks.push(Check::numeric(
        "associator on random kernels",
        worst.0,
        tol.pipeline,
        worst.1,
    ));

    // Unit kernels E_ab, E_bc, E_cd: every chained quadruple on small groups.
    let mut worst = (0.0f64, json!(null));
    let mut chain = |a: usize, b: usize, c: usize, d: usize| -> Result<()> {
        let e1 = TwistedKernel::<f64>::unit(&phi, shape, a, b)?;
        let e2 = TwistedKernel::unit(&phi, shape, b, c)?;
        let e3 = TwistedKernel::unit(&phi, shape, c, d)?;
        let (def, _) = associator_defect(&e1, &e2, &e3)?;
        if def > worst.0 || worst.1.is_null() {
            worst = (def.max(worst.0), coords(g, &[a, b, c, d]));
        }
        Ok(())
    };
    if n <= 8 {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        chain(a, b, c, d)?;
                    }
                }
            }
        }
    } else {
        for _ in 0..cfg.trials {
            chain(
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            )?;
        }
        o.notes.insert(
            "unit kernel chains".into(),
            json!(format!("{} random chains", cfg.trials)),
        );
    }
    o.checks.push(Check::numeric(
        "associator on unit kernels",
        worst.0,
        tol.product,
        worst.1,
    ));

    if check_tricharacter(&st.phi).is_err() {
        o.skipped
            .push("adjoint laws and G-action covariance need an antisymmetric tricharacter".into());
        return Ok(o);
    }
    let (mut rev, mut inv) = ((0.0f64, 0usize), (0.0f64, 0usize));
    for t in 0..cfg.trials {
        let s1 = TwistedKernel::<f64>::random(&phi, shape, rng)?;
        let s2 = TwistedKernel::random(&phi, shape, rng)?;
        let d = adjoint(&kprod(&s1, &s2)?).max_abs_diff(&kprod(&adjoint(&s2), &adjoint(&s1))?);
        if d > rev.0 {
            rev = (d, t);
        }
        let d = adjoint(&adjoint(&s1)).max_abs_diff(&s1);
        if d > inv.0 {
            inv = (d, t);
        }
    }
    o.checks.push(Check::numeric(
        "(S1*S2)^* = S2^* S1^*",
        rev.0,
        tol.product,
        json!({"trial": rev.1}),
    ));
    o.checks.push(Check::numeric(
        "S^** = S",
        inv.0,
        tol.product,
        json!({"trial": inv.1}),
    ));

    // θ_xθ_y[E_ab] = ad(σ(x,y))θ_{x+y}[E_ab], compared in exact turns.
    let m = st.phi.modulus();
    let p = |x, y, z| st.phi.num3(x, y, z);
    let mut witness = None;
    'cov: for x in 0..n {
        for y in 0..n {
            let xy = g.add(x, y);
            for a in 0..n {
                for b in 0..n {
                    let (ay, by) = (g.sub(a, y), g.sub(b, y));
                    let (axy, bxy) = (g.sub(a, xy), g.sub(b, xy));
                    let lhs = p(x, axy, bxy) + p(y, ay, by);
                    let rhs = p(x, y, axy) + m - p(x, y, bxy) + p(xy, axy, bxy);
                    if lhs % m != rhs % m {
                        witness = Some(coords(g, &[x, y, a, b]));
                        break 'cov;
                    }
                }
            }
        }
    }
    o.checks
        .push(Check::exact("G-action covariance on unit kernels", witness));
    let k = TwistedKernel::<f64>::random(&phi, shape, rng)?;
    let mut worst = (0.0f64, (0, 0));
    for x in 0..n.min(8) {
        for y in 0..n.min(8) {
            let d = g_action(x, &g_action(y, &k)).max_abs_diff(&ad_sigma(
                x,
                y,
                &g_action(g.add(x, y), &k),
            ));
            if d > worst.0 {
                worst = (d, (x, y));
            }
        }
    }
    o.checks.push(Check::numeric(
        "G-action covariance on a random kernel",
        worst.0,
        tol.product,
        coords(g, &[worst.1 .0, worst.1 .1]),
    ));
    Ok(o)
}

/// Canonical system, or a failing check carrying the exact validation witness.
fn canonical(st: &Setup, o: &mut Out) -> Result<Option<TwistedSystem<f64>>> {
    match build_canonical_system::<f64>(&st.phi, st.dim) {
        Ok(c) => {
            o.notes.insert("canonical sign".into(), json!(c.sign));
            o.checks
                .push(Check::exact("canonical system validates", None));
            Ok(Some(c.system))
        }
        Err(Error::Invalid(_)) => {
            let r = canonical_phase_system(&st.phi, -1)?.validate_exact();
            let w = r.witness.map(|w| json!({"check": w.check, "args": w.args}));
            o.checks.push(Check::exact(
                "canonical system validates",
                Some(w.unwrap_or(json!("no witness"))),
            ));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn random_diag_unitaries(n: usize, sh: CoeffShape, rng: &mut impl Rng) -> Vec<C<f64>> {
    let mut w = coeff::identity::<f64>(sh);
    for _ in 1..n {
        let ph: Vec<C<f64>> = (0..sh.blocks)
            .map(|_| C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        w.extend(coeff::diagonal_phases(sh, &ph));
    }
    w
}

fn crossed(cfg: &SuiteConfig, st: &Setup, rng: &mut Xoshiro256StarStar) -> Result<Out> {
    let mut o = Out::default();
    let Some(s) = canonical(st, &mut o)? else {
        return Ok(o);
    };
    let g = s.group().clone();
    let n = g.order();
    let sh = s.shape();
    let tol = cfg.tolerances;

    let one = coeff::identity::<f64>(sh);
    let mut worst = (0.0f64, json!(null));
    for _ in 0..cfg.trials {
        let (x, y, z) = (
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            rng.gen_range(0..n),
        );
        let d = |a| CrossedElement::delta(&g, sh, a, &one);
        let left = convolve(&convolve(&d(x), &d(y), &s)?, &d(z), &s)?;
        let right = convolve(&d(x), &convolve(&d(y), &d(z), &s)?, &s)?;
        let p: C<f64> = st.phi.phase(&[x, y, z]);
        let e = left.max_abs_diff(&right.scaled(p));
        if e > worst.0 || worst.1.is_null() {
            worst = (e.max(worst.0), coords(&g, &[x, y, z]));
        }
    }
    o.checks.push(Check::numeric(
        "delta associator equals phi",
        worst.0,
        tol.product,
        worst.1,
    ));

    let (mut rev, mut inv) = (0.0f64, 0.0f64);
    // f** = φ(x,−x,x)⁻¹ f, so the involution laws need a tricharacter.
    let tri = check_tricharacter(&st.phi).is_ok();
    for _ in 0..if tri { cfg.trials.min(10) } else { 0 } {
        let f = CrossedElement::random(&g, sh, rng);
        let h = CrossedElement::random(&g, sh, rng);
        let a = crossed_adjoint(&convolve(&f, &h, &s)?, &s)?;
        let b = convolve(&crossed_adjoint(&h, &s)?, &crossed_adjoint(&f, &s)?, &s)?;
        rev = rev.max(a.max_abs_diff(&b));
        inv = inv.max(crossed_adjoint(&crossed_adjoint(&f, &s)?, &s)?.max_abs_diff(&f));
    }
    if tri {
        o.checks.push(Check::numeric(
            "(f*g)^* = g^* f^*",
            rev,
            tol.product,
            json!({"seed": cfg.seed}),
        ));
        o.checks.push(Check::numeric(
            "f^** = f",
            inv,
            tol.product,
            json!({"seed": cfg.seed}),
        ));
    } else {
        o.skipped
            .push("crossed-product involution laws need an antisymmetric tricharacter".into());
    }

    let w = random_diag_unitaries(n, sh, rng);
    let t = exterior_equivalent(&s, &w)?;
    let r = t.validate();
    o.checks.push(Check::numeric(
        "exterior equivalent validates",
        r.defect,
        tol.product,
        json!(r.witness),
    ));
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials.min(10) {
        let f = CrossedElement::random(&g, sh, rng);
        let h = CrossedElement::random(&g, sh, rng);
        let lhs = exterior_transport(&convolve(&f, &h, &t)?, &w)?;
        let rhs = convolve(
            &exterior_transport(&f, &w)?,
            &exterior_transport(&h, &w)?,
            &s,
        )?;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    o.checks.push(Check::numeric(
        "exterior transport intertwines",
        worst,
        tol.product,
        json!({"seed": cfg.seed}),
    ));

    let big = tensor_shape(sh, n).stride();
    if n * n * big > 1 << 22 {
        o.skipped.push(format!(
            "Packer-Raeburn stabilization: {n}x{n} unitaries of size {big} exceed the size guard"
        ));
    } else {
        let (stab, w) = packer_raeburn_stabilize(&s)?;
        let r = stab.validate();
        o.checks.push(Check::numeric(
            "stabilized system validates",
            r.defect,
            tol.product,
            json!(r.witness),
        ));
        o.checks.push(Check::numeric(
            "stabilized cocycle is central",
            central_defect(&stab, sh, n),
            tol.product,
            json!(null),
        ));
        let ext = exterior_equivalent(&tensor_identity(&s, n)?, &w)?;
        o.checks.push(Check::numeric(
            "stabilization is an exterior equivalence",
            cmax_abs(ext.v_all(), stab.v_all()),
            tol.product,
            json!(null),
        ));
    }
    Ok(o)
}

fn takai(cfg: &SuiteConfig, st: &Setup, rng: &mut Xoshiro256StarStar) -> Result<Out> {
    let mut o = Out::default();
    let Some(s) = canonical(st, &mut o)? else {
        return Ok(o);
    };
    let tol = cfg.tolerances.pipeline;
    let r = certify_takai(&s, cfg.trials, tol, rng)?;
    o.checks.push(Check::numeric(
        "kernel map is multiplicative",
        r.defect,
        tol,
        json!({"seed": cfg.seed, "trial_w_z": r.witness}),
    ));
    let mut worst = (0.0f64, 0usize);
    for _ in 0..cfg.trials.min(5) {
        let f = DoubleCrossedElement::random(s.group(), s.shape(), rng);
        let (d, y) = double_dual_defect(&f, &s)?;
        if d > worst.0 {
            worst = (d, y);
        }
    }
    o.checks.push(Check::numeric(
        "double dual action matches the transported action",
        worst.0,
        tol,
        coords(s.group(), &[worst.1]),
    ));
    Ok(o)
}

fn split(cfg: &SuiteConfig, st: &Setup, rng: &mut Xoshiro256StarStar) -> Result<Out> {
    let mut o = Out::default();
    let (Some(n), Some(theta)) = (cube_order(&st.group), st.theta) else {
        o.skipped
            .push("split needs a volume cocycle on Z_N^3".into());
        return Ok(o);
    };
    if volume_tricharacter(n, theta)?.cochain() != &st.clean_phi {
        o.skipped
            .push("split needs a volume cocycle on Z_N^3".into());
        return Ok(o);
    }
    let sp = volume_split_system(n, theta)?;
    let sp = if cfg.mutate {
        match crate::split::split_system(&sp.base.with_phi(st.phi.clone()), 2) {
            Ok(s) => s,
            Err(Error::SplitHypothesis(w)) => {
                o.checks
                    .push(Check::exact("split hypotheses", Some(json!(w))));
                return Ok(o);
            }
            Err(e) => return Err(e),
        }
    } else {
        sp
    };
    let g = &st.group;
    let ex = |r: crate::system::ExactReport| {
        r.witness.map(|w| json!({"check": w.check, "args": w.args}))
    };
    o.checks.push(Check::exact(
        "v-tilde identities",
        ex(sp.vtilde_identities()),
    ));
    o.checks.push(Check::exact(
        "split system validates",
        ex(sp.hat.validate_exact()),
    ));

    // varphi(p,q,r) = 3·φ(p₂,q₁,r₁).
    let m = sp.varphi.modulus().max(1);
    let (m1, m2) = (st.phi.modulus(), m);
    let mut witness = None;
    'outer: for p in 0..g.order() {
        let p2 = sp.g2.embed[sp.g2.project[p]];
        for q in 0..g.order() {
            let q1 = sp.g1.embed[sp.g1.project[q]];
            for r in 0..g.order() {
                let r1 = sp.g1.embed[sp.g1.project[r]];
                let a = Turn::new(sp.varphi.num3(p, q, r) as i64, m2 as i64);
                let b = Turn::new(3 * st.phi.num3(p2, q1, r1) as i64, m1 as i64);
                if !(a - b).is_integer() {
                    witness = Some(coords(g, &[p, q, r]));
                    break 'outer;
                }
            }
        }
    }
    o.checks.push(Check::exact("varphi is phi cubed", witness));

    let anti = antisymmetrize(&sp.varphi)?;
    let witness = (0..g.order().pow(3))
        .map(|i| [i / (g.order() * g.order()), (i / g.order()) % g.order(), i % g.order()])
        .find(|a| Turn::new(anti.num3(a[0], a[1], a[2]) as i64, anti.modulus() as i64)
            != Turn::new(st.phi.num3(a[0], a[1], a[2]) as i64, st.phi.modulus() as i64))
        .map(|a| {
            json!({"args": coords(g, &a), "antisymmetrized": anti.turn(&a).to_string(), "phi": st.phi.turn(&a).to_string()})
        });
    o.checks
        .push(Check::exact("antisymmetrized varphi recovers phi", witness));

    let s = sp.hat_system::<f64>()?;
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials.min(10) {
        let f = CrossedElement::random(s.group(), s.shape(), rng);
        let h = CrossedElement::random(s.group(), s.shape(), rng);
        worst = worst.max(
            sp.repeated_convolve(&f, &h)?
                .max_abs_diff(&convolve(&f, &h, &s)?),
        );
    }
    o.checks.push(Check::numeric(
        "repeated crossed product",
        worst,
        1e-13,
        json!({"seed": cfg.seed}),
    ));

    let b = sp.g1_with_bullet::<f64>()?;
    let r = b.validate();
    o.checks.push(Check::numeric(
        "bullet system validates",
        r.defect,
        cfg.tolerances.product,
        json!(r.witness),
    ));
    let g1n = sp.g1.group.order();
    if g1n * g1n * tensor_shape(b.shape(), g1n).stride() <= 1 << 22 {
        let (stab, _) = packer_raeburn_stabilize(&b)?;
        let r = stab.validate();
        o.checks.push(Check::numeric(
            "stabilized bullet system validates",
            r.defect,
            cfg.tolerances.product,
            json!(r.witness),
        ));
    } else {
        o.skipped
            .push("stabilized bullet system exceeds the size guard".into());
    }
    let mut worst = (0.0f64, 0usize);
    for _ in 0..cfg.trials.min(5) {
        let f = CrossedElement::random(&sp.g1.group, b.shape(), rng);
        let h = CrossedElement::random(&sp.g1.group, b.shape(), rng);
        for x in 0..sp.g2.group.order() {
            let lhs = sp.tilde_beta(x, &convolve(&f, &h, &b)?)?;
            let rhs = convolve(&sp.tilde_beta(x, &f)?, &sp.tilde_beta(x, &h)?, &b)?;
            let d = lhs.max_abs_diff(&rhs);
            if d > worst.0 {
                worst = (d, x);
            }
        }
    }
    o.checks.push(Check::numeric(
        "tilde-beta multiplicative",
        worst.0,
        1e-11,
        json!({"X": worst.1}),
    ));
    Ok(o)
}

fn strictify(cfg: &SuiteConfig, st: &Setup, rng: &mut Xoshiro256StarStar) -> Result<Out> {
    let mut o = Out::default();
    let phi = Arc::new(st.phi.clone());
    let tol = cfg.tolerances.product;
    let r = certify_strictification::<f64>(&phi, CoeffShape::matrix(st.dim), cfg.trials, tol, rng)?;
    o.checks.push(Check::numeric(
        "strictified product is fiberwise",
        r.fiber_defect,
        tol,
        json!({"trial": r.witness, "seed": cfg.seed}),
    ));
    o.checks.push(Check::numeric(
        "corrected product is associative",
        r.assoc_defect,
        tol,
        json!({"trial": r.witness, "seed": cfg.seed}),
    ));
    Ok(o)
}

fn octonions(cfg: &SuiteConfig, st: &Setup, rng: &mut Xoshiro256StarStar) -> Result<Out> {
    let mut o = Out::default();
    let alg = match find_octonion_signs() {
        Ok(a) => a,
        Err(e) => {
            o.checks.push(Check::exact(
                "sign table search",
                Some(json!(e.to_string())),
            ));
            return Ok(o);
        }
    };
    o.checks.push(Check::exact("sign table search", None));
    o.checks.push(Check::exact(
        "associator sign",
        alg.associator_witness_against(&octonion_sign)
            .map(|w| json!(w)),
    ));
    let r = alg.report(cfg.trials, cfg.tolerances.product, rng);
    o.checks.push(Check::exact(
        "Cayley table",
        (!r.cayley_ok).then(|| json!(r.quaternionic_triples)),
    ));
    o.checks.push(Check::numeric(
        "norm is multiplicative",
        r.norm_defect,
        cfg.tolerances.product,
        json!({"seed": cfg.seed}),
    ));
    o.checks.push(Check::numeric(
        "alternative",
        r.alternative_defect,
        cfg.tolerances.product,
        json!({"seed": cfg.seed}),
    ));
    o.notes.insert("sign table".into(), json!(alg.to_csv()));
    let phi = if cube_order(&st.group) == Some(2) {
        st.phi.clone()
    } else {
        octonion_cocycle().into_cochain()
    };
    let strict = StrictOctonions::new(&alg, &phi)?;
    o.notes
        .insert("strict dimension".into(), json!(strict.dimension()));
    o.checks.push(Check::exact(
        "strict algebra has dimension 64",
        (strict.dimension() != 64).then(|| json!(strict.dimension())),
    ));
    o.checks.push(Check::exact(
        "strict algebra associative on basis triples",
        strict.associativity_witness().map(|w| json!(w)),
    ));
    Ok(o)
}

fn descent(cfg: &SuiteConfig, st: &Setup) -> Result<Out> {
    let mut o = Out::default();
    let k = st.k;
    let h = volume_form(k);
    let r = cfg.radius.max(1);
    let mut prim = determinant_primitives(k);
    if cfg.mutate {
        // Perturb f at one pair of lattice points.
        let f = prim.f.clone();
        prim = Primitives {
            f: FormCochain::new(
                2,
                0,
                Arc::new(move |a: &[Lattice]| {
                    let v = f.at(a);
                    if a == [[1, 0, 0], [0, 1, 0]] {
                        v.add(&PolyForm::function(Poly::var(Q::new(1, 2), 0)))
                    } else {
                        v
                    }
                }),
            ),
            ..prim
        };
    }
    let fail_of = |d: &crate::zigzag::Descent| {
        d.equations
            .iter()
            .find(|e| !e.holds)
            .map(|e| json!({"equation": e.name, "witness": e.witness}))
    };
    if st.signs == DescentSigns::Literal {
        let mut witness = json!({});
        let mut any = false;
        for tr in [Translation::Plus, Translation::Minus] {
            let d = zigzag(
                &h,
                &prim,
                Convention {
                    translation: tr,
                    signs: DescentSigns::Literal,
                },
                r,
            )?;
            any |= d.ok() && d.c_e123 == Some(k / Q::from_integer(6));
            witness[format!("{tr:?}")] = fail_of(&d).unwrap_or(json!("holds"));
        }
        o.checks.push(Check::exact(
            "descent equations with literal signs",
            (!any).then_some(witness),
        ));
    }
    let cal = calibrate_action(k, 1)?;
    o.notes.insert("calibration".into(), json!(cal));
    let Some(conv) = cal.chosen else {
        o.checks.push(Check::exact(
            "some convention validates",
            Some(json!(cal.tried)),
        ));
        return Ok(o);
    };
    let d = zigzag(&h, &prim, conv, r)?;
    o.notes.insert("derivation".into(), json!(d.log));
    o.checks.push(Check::exact(
        "descent equations, calibrated convention",
        fail_of(&d),
    ));
    if !d.ok() {
        return Ok(o);
    }
    o.checks.push(Check::exact(
        "f normalized at the origin",
        (!d.normalized).then(|| json!("f(0) != 0")),
    ));
    let anchor = d.c_e123.unwrap_or_default();
    o.checks.push(Check::exact(
        "c(e1,e2,e3) = k/6",
        (anchor != k / Q::from_integer(6)).then(|| json!(anchor.to_string())),
    ));
    let den = d
        .c_table()
        .values()
        .fold(1i64, |a, v| num_integer::lcm(a, *v.denom()));
    o.notes.insert("c denominator".into(), json!(den));
    o.checks.push(Check::exact(
        "c alternating",
        alternating_witness(&d).map(|w| json!(w)),
    ));
    o.checks.push(Check::exact(
        "c is a 3-cocycle",
        cocycle_witness(&d, r / 2).map(|w| json!(w)),
    ));

    let p = zigzag(&h, &product_primitives(k), conv, r)?;
    o.checks
        .push(Check::exact("product representative descent", fail_of(&p)));
    let anti = |a, b, g| k / Q::from_integer(6) * Q::from_integer(det_lattice(a, b, g));
    let prod = |a: Lattice, b: Lattice, g: Lattice| k * Q::from_integer(a[0] * b[1] * g[2]);
    match solve_polynomial_coboundary(&anti, &prod, 1, cfg.seed) {
        Some(sol) => {
            let w = polynomial_coboundary_witness(&sol, &anti, &prod, r);
            o.notes.insert("coboundary".into(), json!(sol.terms));
            o.checks.push(Check::exact(
                "product representative is cohomologous",
                w.map(|w| json!(w)),
            ));
        }
        None => o.checks.push(Check::exact(
            "product representative is cohomologous",
            Some(json!("no polynomial 2-cochain")),
        )),
    }
    Ok(o)
}

fn natorus(cfg: &SuiteConfig, st: &Setup) -> Result<Out> {
    let mut o = Out::default();
    let Some(n) = cube_order(&st.group) else {
        o.skipped.push("natorus needs a group Z_N^3".into());
        return Ok(o);
    };
    let theta = st.theta.unwrap_or(Turn::new(1, n as i64));
    let mut t = nonassociative_torus(n, theta)?;
    if cfg.mutate {
        t.sigma = t.sigma.mutated(&MUTATION_POINT, Turn::new(1, 2));
    }
    o.checks.push(Check::exact(
        "covariance identity, all tuples",
        t.covariance_witness().map(|w| coords(&st.group, &w)),
    ));
    if !cfg.mutate {
        let r = t.exact.validate_exact();
        o.checks.push(Check::exact(
            "twisted system validates",
            r.witness.map(|w| json!({"check": w.check, "args": w.args})),
        ));
        let s = t.system::<f64>()?;
        let (tw, _) = t.delta_associator(&s, 1, 2 % st.group.order(), 3 % st.group.order())?;
        o.checks.push(Check::numeric(
            "delta associator equals sigma-bar",
            tw,
            cfg.tolerances.product,
            json!(null),
        ));
    }
    let z = nonassociative_torus(n, Turn::new(0, 1))?;
    let s = z.system::<f64>()?;
    let r = s.validate();
    o.checks.push(Check::numeric(
        "theta = 0 validates",
        r.defect,
        cfg.tolerances.product,
        json!(r.witness),
    ));
    o.checks.push(Check::exact(
        "theta = 0 has trivial obstruction",
        (!z.sigma.is_zero()).then(|| json!("sigma != 0")),
    ));
    Ok(o)
}
