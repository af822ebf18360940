use nacalg::cochain::{coboundary, pentagon_check, volume_tricharacter, PhaseCochain, Turn};
use nacalg::coeff::CoeffShape;
use nacalg::kernel::{adjoint, kprod, TwistedKernel};
use nacalg::system::build_canonical_system;
use nacalg::zigzag::{exterior_d, Poly, PolyForm, Q};
use nacalg::FiniteAbelianGroup;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;
use std::sync::Arc;

fn orders() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..6, 1..4)
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-5i64..=5, 0u8..3, 0u8..3, 0u8..3), 0..6).prop_map(|ts| {
        ts.into_iter().fold(Poly::zero(), |p, (c, a, b, d)| {
            p.add(&Poly::monomial(Q::from_integer(c), [a, b, d]))
        })
    })
}

fn point() -> impl Strategy<Value = [Q; 3]> {
    prop::array::uniform3((-4i64..=4, 1i64..4)).prop_map(|a| a.map(|(n, d)| Q::new(n, d)))
}

fn random_cochain(g: &FiniteAbelianGroup, degree: usize, m: u64, seed: u64) -> PhaseCochain {
    PhaseCochain::from_fn(g, degree, m, |a| {
        let h = a.iter().fold(seed, |h, &x| {
            h.wrapping_mul(6364136223846793005)
                .wrapping_add(x as u64 + 1)
        });
        (h >> 33) as i64
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn group_axioms(orders in orders(), seed in any::<u64>()) {
        let g = FiniteAbelianGroup::new(&orders).unwrap();
        let n = g.order();
        let (a, b, c) = ((seed % n as u64) as usize, ((seed >> 16) % n as u64) as usize, ((seed >> 32) % n as u64) as usize);
        prop_assert_eq!(g.add(g.add(a, b), c), g.add(a, g.add(b, c)));
        prop_assert_eq!(g.add(a, b), g.add(b, a));
        prop_assert_eq!(g.add(a, 0), a);
        prop_assert_eq!(g.add(a, g.neg(a)), 0);
        prop_assert_eq!(g.sub(g.add(a, b), b), a);
        prop_assert_eq!(g.index(&g.element(a)).unwrap(), a);
    }

    #[test]
    fn coboundaries_satisfy_pentagon(orders in prop::collection::vec(1u32..4, 1..3), m in 1u64..12, seed in any::<u64>()) {
        let g = FiniteAbelianGroup::new(&orders).unwrap();
        let c = random_cochain(&g, 2, m, seed);
        prop_assert!(pentagon_check(&coboundary(&c).unwrap()).unwrap().ok);
    }

    #[test]
    fn combine_and_negate(m in 1u64..20, seed in any::<u64>()) {
        let g = FiniteAbelianGroup::power(2, 2);
        let c = random_cochain(&g, 3, m, seed);
        let d = random_cochain(&g, 3, m + 1, seed ^ 0x5555);
        prop_assert!(c.combine(1, &c.negated(), 1).unwrap().is_zero());
        prop_assert_eq!(c.combine(2, &d, 0).unwrap(), c.scaled(2));
        prop_assert_eq!(c.combine(1, &d, 1).unwrap(), d.combine(1, &c, 1).unwrap());
    }

    #[test]
    fn admissible_volume_tricharacters_are_cocycles(n in 2u32..4, p in 0i64..4) {
        let phi = volume_tricharacter(n, Turn::new(p, n as i64)).unwrap().into_cochain();
        prop_assert!(pentagon_check(&phi).unwrap().ok);
    }

    #[test]
    fn translation_matches_evaluation(p in poly(), t in point(), x in point()) {
        let sum = [x[0] + t[0], x[1] + t[1], x[2] + t[2]];
        prop_assert_eq!(p.translate(t).eval(x), p.eval(sum));
    }

    #[test]
    fn exterior_derivative_squares_to_zero(a in poly(), b in poly(), c in poly(), e in poly()) {
        let one = PolyForm::new(1, vec![a.clone(), b.clone(), c.clone()]).unwrap();
        prop_assert!(exterior_d(&exterior_d(&one).unwrap()).unwrap().is_zero());
        let zero = PolyForm::new(0, vec![e]).unwrap();
        prop_assert!(exterior_d(&exterior_d(&zero).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn twisted_kernel_star_laws(seed in any::<u64>(), p in 1i64..3) {
        let phi = Arc::new(volume_tricharacter(3, Turn::new(p, 3)).unwrap().into_cochain());
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let s = TwistedKernel::<f64>::random(&phi, CoeffShape::SCALAR, &mut rng).unwrap();
        let t = TwistedKernel::random(&phi, CoeffShape::SCALAR, &mut rng).unwrap();
        prop_assert!(adjoint(&adjoint(&s)).max_abs_diff(&s) < 1e-14);
        let lhs = adjoint(&kprod(&s, &t).unwrap());
        let rhs = kprod(&adjoint(&t), &adjoint(&s)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-11);
    }

    #[test]
    fn canonical_systems_validate(n in 2u32..4, p in 1i64..4, dim in 1usize..3) {
        prop_assume!(p < n as i64);
        let phi = volume_tricharacter(n, Turn::new(p, n as i64)).unwrap().into_cochain();
        let s = build_canonical_system::<f64>(&phi, dim).unwrap().system;
        prop_assert!(s.validate().ok);
    }
}

#[test]
fn single_precision_kernels() {
    let phi = Arc::new(nacalg::cochain::octonion_cocycle().into_cochain());
    let mut rng = Xoshiro256StarStar::seed_from_u64(9);
    let s = nacalg::Kernel32::random(&phi, CoeffShape::SCALAR, &mut rng).unwrap();
    let t = nacalg::Kernel32::random(&phi, CoeffShape::SCALAR, &mut rng).unwrap();
    let u = nacalg::Kernel32::random(&phi, CoeffShape::SCALAR, &mut rng).unwrap();
    assert!(nacalg::kernel::associator_defect(&s, &t, &u).unwrap().0 < 1e-4);
    assert!(
        adjoint(&kprod(&s, &t).unwrap()).max_abs_diff(&kprod(&adjoint(&t), &adjoint(&s)).unwrap())
            < 1e-5
    );
}
