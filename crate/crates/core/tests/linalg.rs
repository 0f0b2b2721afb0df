mod common;

use axial::linalg::sparse::{self, SVec};
use axial::linalg::{Field, Fp, Rat, Subspace};
use axial::linalg::field::{crt, rational_reconstruction, PRIMES};
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn randomized_oracles() {
    common::linalg_oracle_checks(500, 7).unwrap();
}

#[test]
fn randomized_oracles_other_seed() {
    common::linalg_oracle_checks(200, 12345).unwrap();
}

fn arb_vecs(n: usize) -> impl Strategy<Value = Vec<Vec<Rat>>> {
    prop::collection::vec(prop::collection::vec((-3i64..=3, 1i64..=3).prop_map(|(a, b)| Rat::new(a, b)), n), 0..=n)
}

fn arb_pair() -> impl Strategy<Value = (usize, Vec<Vec<Rat>>, Vec<Vec<Rat>>)> {
    (1usize..=6).prop_flat_map(|n| (Just(n), arb_vecs(n), arb_vecs(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_lies_in_both((n, a, b) in arb_pair()) {
        let s = Subspace::span_dense(n, &a);
        let t = Subspace::span_dense(n, &b);
        let m = s.intersect(&t);
        prop_assert!(m.is_subspace_of(&s) && m.is_subspace_of(&t));
        prop_assert!(s.is_subspace_of(&s.sum(&t)));
        prop_assert_eq!(s.intersect(&t), t.intersect(&s));
    }

    #[test]
    fn prefix_is_intersection_with_coordinate_space((n, a, _b) in arb_pair(), k in 0usize..=6) {
        let k = k.min(n);
        let s = Subspace::span_dense(n, &a);
        prop_assert_eq!(s.prefix(k), s.intersect(&Subspace::prefix_coords(n, k)));
    }

    #[test]
    fn reduction_is_idempotent_and_membership_agrees((n, a, b) in arb_pair()) {
        let s = Subspace::span_dense(n, &a);
        for v in &b {
            let x: SVec = sparse::from_dense(v);
            let r = s.reduce(&x);
            prop_assert_eq!(s.reduce(&r), r.clone());
            prop_assert_eq!(r.is_empty(), s.contains(&x));
            prop_assert!(s.contains(&sparse::sub(&x, &r)));
        }
    }

    #[test]
    fn modular_image_is_a_ring_map(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        type F = Fp<{ PRIMES[0] }>;
        let (x, y) = (Rat::new(a, b), Rat::new(c, d));
        let img = |r: &Rat| F::from_rat(r).unwrap();
        prop_assert_eq!(img(&(&x + &y)), img(&x).fadd(&img(&y)));
        prop_assert_eq!(img(&(&x * &y)), img(&x).fmul(&img(&y)));
    }

    #[test]
    fn reconstruction_inverts_reduction(a in -(1i64 << 40)..(1i64 << 40), b in 1i64..(1i64 << 40)) {
        let r = Rat::new(a, b);
        let res: Vec<u64> = vec![
            Fp::<{ PRIMES[0] }>::from_rat(&r).unwrap().value(),
            Fp::<{ PRIMES[1] }>::from_rat(&r).unwrap().value(),
        ];
        let (x, m) = crt(&res, &PRIMES[..2]);
        prop_assert!(x < m && x >= BigInt::from(0));
        prop_assert_eq!(rational_reconstruction(&x, &m), Some(r));
    }
}
