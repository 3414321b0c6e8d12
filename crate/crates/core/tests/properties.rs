use num_bigint::BigUint;
use proptest::prelude::*;

use projdiv::group::DEFAULT_CAP;
use projdiv::{
    gl_order, j_degree, j_degree_bruteforce, units_order, GaloisImageSpec, Ideal, Mat, MatAlgebra, MatGroup,
    ResidueRing, RingSpec,
};

fn z(n: u64) -> Ideal {
    Ideal::integer(n).unwrap()
}

fn poly_ideal() -> impl Strategy<Value = Ideal> {
    (
        prop_oneof![Just(2u32), Just(3), Just(5)],
        prop::collection::vec(0u32..5, 0..5),
    )
        .prop_map(|(q, mut c)| {
            for x in &mut c {
                *x %= q;
            }
            c.push(1);
            Ideal::polynomial(&RingSpec::polynomial(q).unwrap(), c).unwrap()
        })
}

fn any_ideal() -> impl Strategy<Value = Ideal> {
    prop_oneof![(1u64..5_000).prop_map(z), poly_ideal()]
}

fn product(factors: &[(Ideal, u32)], unit: Ideal) -> Ideal {
    factors
        .iter()
        .fold(unit, |acc, (p, e)| acc.mul(&p.pow(*e).unwrap()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorization_round_trips(a in any_ideal()) {
        let factors = a.factor().unwrap().to_vec();
        for (p, e) in &factors {
            prop_assert!(p.is_prime().unwrap());
            prop_assert!(*e >= 1);
        }
        prop_assert_eq!(product(&factors, Ideal::unit(a.ring())), a);
    }

    #[test]
    fn decomposition_satisfies_its_predicates(a in 1u64..5_000, m in 1u64..200) {
        let d = z(a).decompose(&z(m)).unwrap();
        prop_assert!(d.violations(&z(a), &z(m)).unwrap().is_empty());
    }

    #[test]
    fn polynomial_decomposition_satisfies_its_predicates(a in poly_ideal(), m in poly_ideal()) {
        prop_assume!(a.ring() == m.ring());
        let d = a.decompose(&m).unwrap();
        prop_assert!(d.violations(&a, &m).unwrap().is_empty());
    }

    #[test]
    fn norm_is_multiplicative_on_coprime_ideals(a in any_ideal(), b in any_ideal()) {
        prop_assume!(a.ring() == b.ring());
        prop_assume!(a.gcd(&b).unwrap().is_unit());
        prop_assert_eq!(a.mul(&b).unwrap().norm(), a.norm() * b.norm());
        let r = 2;
        prop_assert_eq!(gl_order(r, &a.mul(&b).unwrap()).unwrap(), gl_order(r, &a).unwrap() * gl_order(r, &b).unwrap());
    }

    #[test]
    fn gcd_and_lcm_multiply_to_product(a in any_ideal(), b in any_ideal()) {
        prop_assume!(a.ring() == b.ring());
        let g = a.gcd(&b).unwrap();
        let l = a.lcm(&b).unwrap();
        prop_assert_eq!(g.norm() * l.norm(), a.norm() * b.norm());
        prop_assert!(g.divides(&a).unwrap() && g.divides(&b).unwrap());
        prop_assert!(a.divides(&l).unwrap() && b.divides(&l).unwrap());
        if let Some(p) = g.poly_generator() {
            prop_assert_eq!(p.coeffs().last().copied(), Some(1));
        }
    }

    #[test]
    fn unit_count_matches_enumeration(a in prop_oneof![(1u64..300).prop_map(z), poly_ideal()]) {
        prop_assume!(a.norm() <= BigUint::from(1_000u32));
        let ring = ResidueRing::new(&a).unwrap();
        prop_assert_eq!(BigUint::from(ring.units().len()), units_order(&a).unwrap());
    }

    #[test]
    fn determinant_is_multiplicative(
        n in 2u64..60,
        x in prop::collection::vec(0u64..1_000, 4),
        y in prop::collection::vec(0u64..1_000, 4),
    ) {
        let alg = MatAlgebra::new(ResidueRing::new(&z(n)).unwrap(), 2);
        let reduce = |v: &[u64]| Mat::from_entries(&v.iter().map(|e| e % n).collect::<Vec<_>>());
        let (a, b) = (reduce(&x), reduce(&y));
        let ring = alg.ring();
        prop_assert_eq!(alg.det(&alg.mul(&a, &b)), ring.mul(alg.det(&a), alg.det(&b)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduction_undoes_preimage(b in 2u64..9, k in 2u64..4, seed in 0usize..64) {
        let a = b * k;
        let alg = MatAlgebra::new(ResidueRing::new(&z(b)).unwrap(), 2);
        let full = MatGroup::full_linear(alg.clone(), DEFAULT_CAP).unwrap();
        let g = full.elements()[seed % full.order()].clone();
        let h = MatGroup::closure(alg, vec![g], DEFAULT_CAP).unwrap();
        let lifted = h.preimage(&z(a), DEFAULT_CAP).unwrap();
        prop_assert_eq!(lifted.order_big() * gl_order(2, &z(b)).unwrap(), h.order_big() * gl_order(2, &z(a)).unwrap());
        prop_assert_eq!(lifted.reduce_elementwise(&z(b)).unwrap(), h);
    }

    #[test]
    fn scalar_subgroup_is_closed(n in 2u64..30, seed in 0usize..256) {
        let alg = MatAlgebra::new(ResidueRing::new(&z(n)).unwrap(), 2);
        let full = MatGroup::full_linear(alg.clone(), DEFAULT_CAP).unwrap();
        let g = full.elements()[seed % full.order()].clone();
        let h = MatGroup::closure(alg, vec![g.clone(), full.elements()[(seed * 7 + 3) % full.order()].clone()], DEFAULT_CAP).unwrap();
        let scal = h.scalar_subgroup();
        prop_assert_eq!(&scal, &h.scalar_scan());
        let ring = h.ring();
        prop_assert!(scal.contains(&ring.one()));
        for &x in &scal {
            prop_assert!(scal.contains(&ring.inv(x).unwrap()));
            for &y in &scal {
                prop_assert!(scal.contains(&ring.mul(x, y)));
            }
        }
    }

    #[test]
    fn fast_path_matches_enumeration(m in 2u64..7, seed in 0usize..512, a in 1u64..30) {
        let alg = MatAlgebra::new(ResidueRing::new(&z(m)).unwrap(), 2);
        let full = MatGroup::full_linear(alg, DEFAULT_CAP).unwrap();
        let gens = vec![full.elements()[seed % full.order()].entries().to_vec()];
        let spec = GaloisImageSpec::from_generators("sample", 2, &z(m), &gens, DEFAULT_CAP).unwrap();
        let fast = j_degree(&spec, &z(a)).unwrap();
        let brute = j_degree_bruteforce(&spec, &z(a), DEFAULT_CAP).unwrap();
        prop_assert!(fast.agrees_with(&brute), "{fast:?} vs {brute:?}");
    }
}
