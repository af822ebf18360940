//! Acceptance criteria 1–11. Each test writes one `PASS`/`FAIL` line to
//! stderr (uncaptured) and asserts the outcome.
//!
//! Criteria 6 and 9 contain a sub-claim that does not hold (recorded in the
//! project notes): antisymmetrize cannot recover φ from varphi ≡ 0 on Z₃³,
//! and the displayed descent signs fail in both translation directions. Those
//! two tests print FAIL and assert exactly that failure and nothing else.

use nacalg::cochain::{octonion_cocycle, pentagon_check, volume_tricharacter, PhaseCochain, Turn};
use nacalg::coeff::CoeffShape;
use nacalg::kernel::{adjoint, associator_defect, kprod, TwistedKernel};
use nacalg::suite::{run_suite, SuiteConfig, SuiteReport, SUITES};
use nacalg::system::build_canonical_system;
use nacalg::takai::{certify_takai, double_dual_defect, DoubleCrossedElement};
use nacalg::FiniteAbelianGroup;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

fn line(n: u32, pass: bool, what: &str, detail: &str) {
    let mut e = std::io::stderr().lock();
    let _ = writeln!(
        e,
        "criterion {n:>2}: {} {what} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn rng(seed: u64) -> Xoshiro256StarStar {
    Xoshiro256StarStar::seed_from_u64(seed)
}

fn cocycles() -> Vec<(&'static str, PhaseCochain)> {
    vec![
        ("octonion Z2^3", octonion_cocycle().into_cochain()),
        (
            "volume 1/3 Z3^3",
            volume_tricharacter(3, Turn::new(1, 3))
                .unwrap()
                .into_cochain(),
        ),
        (
            "volume 1/4 Z4^3",
            volume_tricharacter(4, Turn::new(1, 4))
                .unwrap()
                .into_cochain(),
        ),
    ]
}

fn suite(
    name: &str,
    group: &str,
    cocycle: &str,
    theta: Option<&str>,
    trials: usize,
) -> SuiteConfig {
    SuiteConfig {
        suite: name.into(),
        group: group.into(),
        cocycle: cocycle.into(),
        theta: theta.map(Into::into),
        trials,
        ..Default::default()
    }
}

fn failing(r: &SuiteReport) -> Vec<String> {
    r.checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.clone())
        .collect()
}

#[test]
fn c01_pentagon_exhaustive() {
    let t = Instant::now();
    let r = pentagon_check(&octonion_cocycle().into_cochain()).unwrap();
    let ms = t.elapsed().as_millis();
    let pass = r.ok && ms < 1000;
    line(
        1,
        pass,
        "pentagon identity, octonion cocycle, 4096 quadruples",
        &format!("{ms} ms"),
    );
    assert!(pass, "{r:?}");
}

#[test]
fn c02_kernel_associator() {
    let t = Instant::now();
    let mut worst = 0.0f64;
    let mut rng = rng(2);
    for (name, phi) in cocycles() {
        let phi = Arc::new(phi);
        for _ in 0..100 {
            let k: Vec<TwistedKernel<f64>> = (0..3)
                .map(|_| TwistedKernel::random(&phi, CoeffShape::SCALAR, &mut rng).unwrap())
                .collect();
            let (d, _) = associator_defect(&k[0], &k[1], &k[2]).unwrap();
            assert!(d <= 1e-10, "{name}: {d}");
            worst = worst.max(d);
        }
    }
    let phi = Arc::new(octonion_cocycle().into_cochain());
    let mut unit = 0.0f64;
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                for d in 0..8 {
                    let e =
                        |x, y| TwistedKernel::<f64>::unit(&phi, CoeffShape::SCALAR, x, y).unwrap();
                    unit = unit.max(associator_defect(&e(a, b), &e(b, c), &e(c, d)).unwrap().0);
                }
            }
        }
    }
    let s = t.elapsed().as_secs_f64();
    let pass = worst <= 1e-10 && unit == 0.0 && s < 30.0;
    line(
        2,
        pass,
        "kernel associator",
        &format!("random {worst:.2e}, unit kernels {unit:.1e}, {s:.1} s"),
    );
    assert!(pass);
}

#[test]
fn c03_star_algebra_laws() {
    let mut rng = rng(3);
    let (mut rev, mut inv) = (0.0f64, 0.0f64);
    for (_, phi) in cocycles() {
        let phi = Arc::new(phi);
        for _ in 0..100 {
            let s1 = TwistedKernel::<f64>::random(&phi, CoeffShape::SCALAR, &mut rng).unwrap();
            let s2 = TwistedKernel::random(&phi, CoeffShape::SCALAR, &mut rng).unwrap();
            rev = rev.max(
                adjoint(&kprod(&s1, &s2).unwrap())
                    .max_abs_diff(&kprod(&adjoint(&s2), &adjoint(&s1)).unwrap()),
            );
            inv = inv.max(adjoint(&adjoint(&s1)).max_abs_diff(&s1));
        }
    }
    // Exact covariance on unit kernels comes from the kernels suite.
    let mut cov = true;
    for (group, cocycle, theta) in [
        ("Z2^3", "octonion", None),
        ("Z3^3", "volume", Some("1/3")),
        ("Z4^3", "volume", Some("1/4")),
    ] {
        let r = run_suite(&suite("kernels", group, cocycle, theta, 2)).unwrap();
        cov &= r
            .checks
            .iter()
            .any(|c| c.name == "G-action covariance on unit kernels" && c.pass);
    }
    let pass = rev < 1e-12 && inv < 1e-12 && cov;
    line(
        3,
        pass,
        "*-algebra laws and G-action covariance",
        &format!("reversal {rev:.2e}, involution {inv:.2e}, covariance exact {cov}"),
    );
    assert!(pass);
}

#[test]
fn c04_takai_duality() {
    let t = Instant::now();
    let mut rng = rng(4);
    let trivial = PhaseCochain::zero(&FiniteAbelianGroup::power(2, 3), 3, 1);
    let volume = volume_tricharacter(3, Turn::new(1, 3))
        .unwrap()
        .into_cochain();
    let (mut takai, mut dual) = (0.0f64, 0.0f64);
    for phi in [trivial, octonion_cocycle().into_cochain(), volume] {
        for dim in [1, 2] {
            let s = build_canonical_system::<f64>(&phi, dim).unwrap().system;
            let r = certify_takai(&s, 50, 1e-10, &mut rng).unwrap();
            takai = takai.max(r.defect);
            let f = DoubleCrossedElement::random(s.group(), s.shape(), &mut rng);
            dual = dual.max(double_dual_defect(&f, &s).unwrap().0);
        }
    }
    let s = t.elapsed().as_secs_f64();
    let pass = takai < 1e-10 && dual < 1e-10 && s < 120.0;
    line(
        4,
        pass,
        "Takai duality",
        &format!("kernel map {takai:.2e}, double dual {dual:.2e}, {s:.1} s"),
    );
    assert!(pass);
}

#[test]
fn c05_exterior_equivalence_and_stabilization() {
    let mut all = Vec::new();
    for (group, cocycle, coeff) in [
        ("Z2^3", "octonion", "scalar"),
        ("Z2^3", "octonion", "m2"),
        ("Z4", "cyclic", "scalar"),
        ("Z5", "cyclic", "m2"),
    ] {
        let mut c = suite("crossed", group, cocycle, None, 5);
        c.coeff = coeff.into();
        all.push(run_suite(&c).unwrap());
    }
    let mut c = suite("crossed", "Z3^3", "volume", Some("1/3"), 5);
    c.coeff = "scalar".into();
    all.push(run_suite(&c).unwrap());
    let stabilized = all
        .iter()
        .filter(|r| {
            r.checks
                .iter()
                .any(|c| c.name == "stabilized cocycle is central")
        })
        .count();
    let worst = all.iter().map(|r| r.worst_defect).fold(0.0, f64::max);
    let pass = all.iter().all(|r| r.pass) && stabilized == 4;
    line(
        5,
        pass,
        "exterior equivalence and Packer-Raeburn",
        &format!("worst {worst:.2e}, {stabilized} stabilizations"),
    );
    assert!(pass, "{:?}", all.iter().map(failing).collect::<Vec<_>>());
}

#[test]
fn c06_split() {
    let r2 = run_suite(&suite("split", "Z2^3", "volume", Some("1/2"), 5)).unwrap();
    let r3 = run_suite(&suite("split", "Z3^3", "volume", Some("1/3"), 5)).unwrap();
    let pass = r2.pass && r3.pass;
    let detail = format!(
        "Z2 failing {:?}; Z3 failing {:?}",
        failing(&r2),
        failing(&r3)
    );
    line(6, pass, "split of twisted actions", &detail);
    // Known: on Z3^3 varphi = 3φ ≡ 0, so only the recovery of φ fails.
    assert!(r2.pass, "{detail}");
    assert_eq!(
        failing(&r3),
        vec!["antisymmetrized varphi recovers phi".to_string()],
        "{detail}"
    );
}

#[test]
fn c07_strictification() {
    let mut rows = Vec::new();
    for (group, cocycle, theta, coeff) in [
        ("Z2^3", "trivial", None, "scalar"),
        ("Z2^3", "octonion", None, "scalar"),
        ("Z2^3", "octonion", None, "m2"),
        ("Z3^3", "volume", Some("1/3"), "scalar"),
        ("Z3^3", "volume", Some("2/3"), "scalar"),
        ("Z4", "cyclic", None, "scalar"),
        ("Z5", "cyclic", None, "m2"),
    ] {
        let mut c = suite("strictify", group, cocycle, theta, 5);
        c.coeff = coeff.into();
        rows.push(run_suite(&c).unwrap());
    }
    let worst = rows.iter().map(|r| r.worst_defect).fold(0.0, f64::max);
    let pass = rows.iter().all(|r| r.pass);
    line(
        7,
        pass,
        "strictification",
        &format!("{} cocycles, worst {worst:.2e}", rows.len()),
    );
    assert!(pass);
}

#[test]
fn c08_octonions() {
    let r = run_suite(&suite("octonions", "Z2^3", "octonion", None, 1000)).unwrap();
    let dim = r.notes.get("strict dimension").and_then(|v| v.as_u64());
    let pass = r.pass && dim == Some(64);
    line(
        8,
        pass,
        "octonions and their 64-dimensional strictification",
        &format!("dimension {dim:?}, worst {:.2e}", r.worst_defect),
    );
    assert!(pass, "{:?}", failing(&r));
}

#[test]
fn c09_zigzag() {
    let r = run_suite(&suite("zigzag", "Z2^3", "octonion", None, 1)).unwrap();
    let detail = format!("failing {:?}", failing(&r));
    line(9, r.pass, "zigzag descent with literal signs", &detail);
    // Known: every other step passes, including the anchor c(e1,e2,e3) = k/6
    // and the cohomology with the product representative.
    assert_eq!(
        failing(&r),
        vec!["descent equations with literal signs".to_string()],
        "{detail}"
    );
    assert!(r
        .checks
        .iter()
        .any(|c| c.name == "c(e1,e2,e3) = k/6" && c.pass));
    assert!(r
        .checks
        .iter()
        .any(|c| c.name == "product representative is cohomologous" && c.pass));
}

#[test]
fn c10_nonassociative_torus() {
    let r = run_suite(&suite("natorus", "Z2^3", "volume", Some("1/2"), 1)).unwrap();
    line(
        10,
        r.pass,
        "nonassociative torus",
        &format!("{} checks", r.checks.len()),
    );
    assert!(r.pass, "{:?}", failing(&r));
}

#[test]
fn c11_negative_controls() {
    let mut missing = Vec::new();
    for name in SUITES {
        let mut c = suite(name, "Z2^3", "octonion", None, 3);
        c.mutate = true;
        // Literal signs fail without mutation; use the calibrated ones here.
        c.signs = "total".into();
        let r = run_suite(&c).unwrap();
        let witnessed = r
            .checks
            .iter()
            .any(|c| !c.pass && c.witness.as_ref().is_some_and(|w| !w.is_null()));
        if r.pass || !witnessed {
            missing.push(name);
        }
    }
    let pass = missing.is_empty();
    line(
        11,
        pass,
        "mutated cocycle fails every suite with a witness",
        &format!("without witness: {missing:?}"),
    );
    assert!(pass);
}
