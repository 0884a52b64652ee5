mod common;

use proptest::prelude::*;

use nodalcone::coxeter::{closure, is_odd, mirror_support_check, pullback, FiniteDistribution, Hyperplane, Source};
use nodalcone::harmonic::{divides_all_laplacians, find_harmonic_multiple, gauss_decompose, HarmonicMultipleWitness};
use nodalcone::polyalg::{monomials_of_degree, monomials_up_to, OrthogonalAffineMap, Polynomial};
use nodalcone::stationary::predict_single_point;
use nodalcone::Rational;

use common::q;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| q(a, b))
}

/// Dense polynomial of degree at most `d` with small rational coefficients.
fn polynomial(n: usize, d: u32) -> impl Strategy<Value = Polynomial> {
    let monos = monomials_up_to(n, d);
    prop::collection::vec((-4i64..=4, 1i64..=3), monos.len()).prop_map(move |cs| {
        Polynomial::from_terms(n, monos.iter().cloned().zip(cs).map(|(e, (a, b))| (e, q(a, b)))).unwrap()
    })
}

fn homogeneous(n: usize, d: u32) -> impl Strategy<Value = Polynomial> {
    let monos = monomials_of_degree(n, d);
    prop::collection::vec(-4i64..=4, monos.len())
        .prop_map(move |cs| Polynomial::from_terms(n, monos.iter().cloned().zip(cs).map(|(e, c)| (e, q(c, 1)))).unwrap())
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn dims_and_degree() -> impl Strategy<Value = (usize, u32)> {
    (2usize..=3, 0u32..=5)
}

fn small_point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-8i32..=8).prop_map(|k| k as f64 / 4.0), n)
}

fn unit_normal(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n).prop_filter_map("degenerate normal", |v| {
        let len = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        (len > 0.1).then(|| v.iter().map(|c| c / len).collect())
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn laplacian_is_linear(
        (p, r) in dims_and_degree().prop_flat_map(|(n, d)| (polynomial(n, d), polynomial(n, d + 1))),
        a in rational(),
        b in rational(),
    ) {
        let lhs = (&p.scale(&a) + &r.scale(&b)).laplacian();
        let rhs = &p.laplacian().scale(&a) + &r.laplacian().scale(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn laplacian_of_norm_times_p(p in polynomial(3, 4)) {
        let n = 3;
        let r2 = Polynomial::norm_squared(n);
        let euler = p.euler_operator();
        let rhs = &(&p.scale(&q(2 * n as i64, 1)) + &euler.scale(&q(4, 1))) + &(&r2 * &p.laplacian());
        prop_assert_eq!((&r2 * &p).laplacian(), rhs);
    }

    #[test]
    fn euler_identity(p in homogeneous(3, 4)) {
        prop_assert_eq!(p.euler_operator(), p.scale(&q(4, 1)));
    }

    #[test]
    fn divides_reconstructs_product(g in polynomial(2, 3), h in polynomial(2, 2), extra in polynomial(2, 1)) {
        prop_assume!(!g.is_zero());
        let target = &(&g * &h) + &extra;
        let div = g.divides(&target).unwrap();
        if let Some(quot) = div.quotient() {
            prop_assert_eq!(&(&g * quot), &target);
        }
        let exact = g.divides(&(&g * &h)).unwrap();
        prop_assert_eq!(exact.quotient(), Some(&h));
    }

    #[test]
    fn iterated_laplacians_terminate(p in polynomial(3, 5)) {
        let chain = p.iterated_laplacians();
        let bound = p.degree().map_or(1, |d| d as usize / 2 + 1);
        prop_assert!(chain.len() <= bound + 1, "{} steps for degree {:?}", chain.len(), p.degree());
        prop_assert!(chain.last().unwrap().laplacian().is_zero());
    }

    #[test]
    fn compose_is_a_group_action(p in polynomial(3, 3), s1 in any::<u64>(), s2 in any::<u64>(), shift in prop::collection::vec(rational(), 3)) {
        use rand::SeedableRng;
        let a = common::rational_rotation(&mut rand_chacha::ChaCha8Rng::seed_from_u64(s1), 3);
        let rot = common::rational_rotation(&mut rand_chacha::ChaCha8Rng::seed_from_u64(s2), 3);
        let b = OrthogonalAffineMap::exact(rot.exact_matrix().unwrap().clone(), shift).unwrap();
        let lhs = p.compose_affine(&a).unwrap().compose_affine(&b).unwrap();
        prop_assert_eq!(lhs, p.compose_affine(&a.after(&b)).unwrap());
    }

    #[test]
    fn reflections_are_involutions(
        p in polynomial(3, 3),
        normal in prop::sample::select(vec![(1, 0, 0, 1), (3, 4, 0, 5), (2, 1, 2, 3), (2, 3, 6, 7), (1, 4, 8, 9)]),
        signs in prop::collection::vec(prop::bool::ANY, 3),
        offset in rational(),
    ) {
        let (a, b, c, len) = normal;
        let normal: Vec<Rational> = [a, b, c]
            .iter()
            .zip(&signs)
            .map(|(&v, &neg)| q(if neg { -v } else { v }, len))
            .collect();
        let s = OrthogonalAffineMap::exact_reflection(&normal, &offset).unwrap();
        prop_assert_eq!(p.compose_affine(&s).unwrap().compose_affine(&s).unwrap(), p);
    }

    #[test]
    fn decomposition_is_unique(n in 2usize..=3, d in 0u32..=5, seed in any::<u64>()) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let g = common::random_homogeneous(&mut rng, n, d, 4);
        let dec = gauss_decompose(&g).unwrap();
        let back = dec.reconstruct();
        prop_assert_eq!(&back, &g);
        prop_assert!(dec.components.iter().all(|h| h.laplacian().is_zero()));
        prop_assert_eq!(gauss_decompose(&back).unwrap(), dec);
    }

    #[test]
    fn harmonic_multiples_are_sound(p in homogeneous(2, 2)) {
        if let HarmonicMultipleWitness::Found { multiplier } = find_harmonic_multiple(&p, 3).unwrap() {
            let h = &p * &multiplier;
            prop_assert!(!h.is_zero());
            prop_assert!(h.laplacian().is_zero());
            prop_assert!(divides_all_laplacians(&p, &h).unwrap());
        }
    }

    #[test]
    fn predictions_are_cones(g in homogeneous(2, 3), x in small_point(2)) {
        let pred = predict_single_point(&g, &[0.0, 0.0]).unwrap();
        if pred.contains(&x, 1e-12).unwrap() {
            for lambda in [-2.0, -1.0, 0.5, 3.0] {
                let y: Vec<f64> = x.iter().map(|c| lambda * c).collect();
                prop_assert!(pred.contains(&y, 1e-12).unwrap(), "{x:?} in, {y:?} out");
            }
        }
    }

    #[test]
    fn pullback_by_a_reflection_is_an_involution(
        a in small_point(3),
        b in small_point(3),
        normal in unit_normal(3),
        offset in -1.0f64..1.0,
    ) {
        let f = FiniteDistribution::new(3, vec![
            Source::new(a, Polynomial::parse(3, "x - 2*y*z").unwrap()),
            Source::new(b, Polynomial::parse(3, "3 + z^2").unwrap()),
        ]).unwrap();
        let s = OrthogonalAffineMap::reflection(&normal, offset);
        let twice = pullback(&pullback(&f, &s).unwrap(), &s).unwrap();
        prop_assert!(twice.approx_eq(&f));
    }

    #[test]
    fn odd_implies_support_symmetric(a in small_point(2), normal in unit_normal(2), offset in -1.0f64..1.0, g in homogeneous(2, 2)) {
        let h = Hyperplane::new(normal.clone(), offset).unwrap();
        let s = OrthogonalAffineMap::reflection(&normal, offset);
        let f = FiniteDistribution::new(2, vec![Source::new(a.clone(), g.clone())]).unwrap();
        // f − f∘σ is odd by construction.
        let mirrored = pullback(&f, &s).unwrap();
        let mut sources: Vec<Source> = f.sources().to_vec();
        sources.extend(mirrored.neg().sources().iter().cloned());
        let odd = FiniteDistribution::new(2, sources).unwrap();
        if odd.support().next().is_some() {
            prop_assert!(is_odd(&odd, &h));
        }
        for candidate in [&f, &odd] {
            if is_odd(candidate, &h) {
                prop_assert!(mirror_support_check(candidate, &h));
            }
        }
    }

    #[test]
    fn closure_is_idempotent(p in 1u32..6, qd in 2u32..9, tilt in 0.0f64..1.0) {
        prop_assume!(p < qd && gcd(p, qd) == 1);
        let t = std::f64::consts::PI * p as f64 / qd as f64;
        let base = std::f64::consts::PI * tilt;
        let planes = vec![
            Hyperplane::new(vec![base.cos(), base.sin()], 0.0).unwrap(),
            Hyperplane::new(vec![(base + t).cos(), (base + t).sin()], 0.0).unwrap(),
        ];
        let once = closure(&planes, 64).unwrap();
        prop_assert!(once.is_closed());
        prop_assert_eq!(once.hyperplanes.len(), qd as usize);
        let twice = closure(&once.hyperplanes, 64).unwrap();
        prop_assert_eq!(twice.hyperplanes.len(), once.hyperplanes.len());
        for h in &twice.hyperplanes {
            prop_assert!(once.hyperplanes.iter().any(|g| g.approx_eq(h, 1e-9)));
        }
    }

    #[test]
    fn polynomial_json_round_trips(p in polynomial(3, 4)) {
        let text = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<Polynomial>(&text).unwrap(), p);
    }

    #[test]
    fn decomposition_json_round_trips(g in homogeneous(3, 3)) {
        let dec = gauss_decompose(&g).unwrap();
        let text = serde_json::to_string(&dec).unwrap();
        prop_assert_eq!(serde_json::from_str::<nodalcone::harmonic::HarmonicDecomposition>(&text).unwrap(), dec);
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
