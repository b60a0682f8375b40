use kronlab::combinatorics::{
    decode_diagram, encode_diagram, enumerate_partitions, factorial, hook_dimension, kostka, transpose,
};
use kronlab::oracles::{kron_char, pleth_wreath, Method};
use kronlab::projectors::{apply_isotypic, apply_pipeline, kron_pipeline, pipeline_trace, pleth_pipeline, StateVector};
use kronlab::protocol::{run_verifier, VerifierMode};
use kronlab::symgroup::{decode_permutation, encode_permutation};
use kronlab::{Partition, Permutation};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn partition(max_n: usize) -> impl Strategy<Value = Partition> {
    (1..=max_n).prop_flat_map(|n| {
        let ps = enumerate_partitions(n);
        (0..ps.len()).prop_map(move |i| ps[i].clone())
    })
}

fn triple(max_n: usize) -> impl Strategy<Value = (Partition, Partition, Partition)> {
    (1..=max_n).prop_flat_map(|n| {
        let ps = enumerate_partitions(n);
        let k = ps.len();
        (0..k, 0..k, 0..k).prop_map(move |(a, b, c)| (ps[a].clone(), ps[b].clone(), ps[c].clone()))
    })
}

fn permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n).prop_flat_map(|n| {
        Just((1..=n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::from_images1(&v).unwrap())
    })
}

fn k(a: &Partition, b: &Partition, c: &Partition) -> u64 {
    kron_char(a, b, c).unwrap().value
}

fn state(n: usize, k: usize, amps: &[(usize, i64)]) -> StateVector {
    let dim = (factorial(n) as usize).pow(k as u32);
    StateVector::from_amplitudes(n, k, amps.iter().map(|(i, a)| (i % dim, BigRational::from_integer((*a).into()))))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_symmetric((a, b, c) in triple(7)) {
        let v = k(&a, &b, &c);
        for (x, y, z) in [(&a, &c, &b), (&b, &a, &c), (&b, &c, &a), (&c, &a, &b), (&c, &b, &a)] {
            prop_assert_eq!(k(x, y, z), v);
        }
        prop_assert_eq!(k(&transpose(&a), &transpose(&b), &c), v);
        prop_assert_eq!(k(&transpose(&a), &b, &transpose(&c)), v);
    }

    #[test]
    fn kron_with_trivial_and_sign(a in partition(7), seed in 0usize..100) {
        let n = a.size();
        let ps = enumerate_partitions(n);
        let b = &ps[seed % ps.len()];
        prop_assert_eq!(k(&a, b, &Partition::row(n)), u64::from(&a == b));
        prop_assert_eq!(k(&a, b, &Partition::column(n)), u64::from(a == transpose(b)));
    }

    #[test]
    fn kron_tensor_dimension(a in partition(6), seed in 0usize..100) {
        let ps = enumerate_partitions(a.size());
        let b = &ps[seed % ps.len()];
        let s: u64 = ps.iter().map(|c| k(&a, b, c) * hook_dimension(c)).sum();
        prop_assert_eq!(s, hook_dimension(&a) * hook_dimension(b));
    }

    #[test]
    fn kostka_diagonal_and_column(a in partition(8)) {
        prop_assert_eq!(kostka(&a, &a).unwrap(), 1);
        prop_assert_eq!(kostka(&a, &Partition::column(a.size())).unwrap(), hook_dimension(&a));
    }

    #[test]
    fn diagram_encoding_round_trips(a in partition(10)) {
        let bits = encode_diagram(&a).unwrap();
        prop_assert_eq!(bits.len(), a.size() - 1);
        prop_assert_eq!(decode_diagram(&bits).unwrap(), a);
    }

    #[test]
    fn permutation_encoding_round_trips(pi in permutation(8)) {
        let bits = encode_permutation(&pi);
        prop_assert_eq!(bits.len(), pi.degree() * pi.degree());
        prop_assert_eq!(bits.matches('1').count(), pi.degree());
        prop_assert_eq!(decode_permutation(&bits).unwrap(), pi);
    }

    #[test]
    fn permutation_rank_round_trips(pi in permutation(7)) {
        prop_assert_eq!(Permutation::unrank(pi.degree(), pi.rank()).unwrap(), pi);
    }

    #[test]
    fn pleth_induced_dimension(d in 1usize..=4, m in 1usize..=3) {
        // Σ_λ a_λ(d,m)·d(λ) is the index of S_m ≀ S_d in S_md
        let n = d * m;
        let s: u128 = enumerate_partitions(n)
            .iter()
            .map(|l| pleth_wreath(d, m, l).unwrap().value as u128 * hook_dimension(l) as u128)
            .sum();
        prop_assert_eq!(s, factorial(n) / (factorial(m).pow(d as u32) * factorial(d)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn isotypic_projectors_resolve_identity(n in 1usize..=4, amps in prop::collection::vec((0usize..10_000, -5i64..=5), 1..6)) {
        let psi = state(n, 1, &amps);
        let mut total = StateVector::zero(n, 1);
        for l in enumerate_partitions(n) {
            let part = apply_isotypic(&psi, 0, &l).unwrap();
            prop_assert_eq!(apply_isotypic(&part, 0, &l).unwrap(), part.clone());
            total = total.add(&part).unwrap();
        }
        prop_assert_eq!(total, psi);
    }

    #[test]
    fn pipeline_is_idempotent((a, b, c) in triple(3), amps in prop::collection::vec((0usize..10_000, -5i64..=5), 1..6)) {
        let pl = kron_pipeline(&a, &b, &c).unwrap();
        let psi = state(a.size(), 3, &amps);
        let once = apply_pipeline(&psi, &pl).unwrap();
        prop_assert_eq!(apply_pipeline(&once, &pl).unwrap(), once.clone());
        // E is an orthogonal projector, so ψ − Eψ ⟂ Eψ
        prop_assert!(psi.sub(&once).unwrap().dot(&once).unwrap().is_zero());
    }

    #[test]
    fn backends_agree((a, b, c) in triple(3)) {
        let pl = kron_pipeline(&a, &b, &c).unwrap();
        let v = k(&a, &b, &c);
        prop_assert_eq!(pipeline_trace(&pl, Method::Dense).unwrap(), v);
        prop_assert_eq!(pipeline_trace(&pl, Method::Collapsed).unwrap(), v);
    }

    #[test]
    fn pleth_backends_agree(d in 1usize..=3, m in 1usize..=2, seed in 0usize..100) {
        let n = d * m;
        let ps = enumerate_partitions(n);
        let l = &ps[seed % ps.len()];
        let pl = pleth_pipeline(d, m, l).unwrap();
        let v = pleth_wreath(d, m, l).unwrap().value;
        prop_assert_eq!(pipeline_trace(&pl, Method::Dense).unwrap(), v);
        prop_assert_eq!(pipeline_trace(&pl, Method::Collapsed).unwrap(), v);
    }

    #[test]
    fn sequential_and_single_shot_agree((a, b, c) in triple(3), amps in prop::collection::vec((0usize..10_000, -5i64..=5), 1..6)) {
        let psi = state(a.size(), 3, &amps);
        prop_assume!(!psi.is_zero());
        let pl = kron_pipeline(&a, &b, &c).unwrap();
        let exact = run_verifier(&pl, &psi, VerifierMode::Exact).unwrap();
        let single = run_verifier(&pl, &psi, VerifierMode::SingleShot).unwrap();
        prop_assert_eq!(&exact.p_accept, &single.p_accept);
        prop_assert!(exact.branch_total().unwrap().is_one());
        prop_assert!(exact.p_accept >= BigRational::zero() && exact.p_accept <= BigRational::one());
    }
}
