use num_rational::BigRational;
use num_traits::{One, Zero};

use super::*;
use crate::combinatorics::{enumerate_partitions, hook_dimension};
use crate::oracles::{kron_char, pleth_wreath};

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn ket(perms: &[&str]) -> StateVector {
    StateVector::from_basis_state(&TensorBasisState::new(perms.iter().map(|s| perm(s)).collect()).unwrap())
}

fn uniform(n: usize) -> StateVector {
    let nf = factorial(n) as usize;
    StateVector::from_amplitudes(n, 1, (0..nf).map(|i| (i, q(1, nf as i64)))).unwrap()
}

fn kron(a: &str, b: &str, c: &str) -> Pipeline {
    kron_pipeline(&p(a), &p(b), &p(c)).unwrap()
}

#[test]
fn basis_state_indexing() {
    let b = TensorBasisState::new(vec![perm("[2,1,3]"), perm("[1,2,3]"), perm("[3,2,1]")]).unwrap();
    let back = TensorBasisState::from_index(3, 3, b.index()).unwrap();
    assert_eq!(back, b);
    assert!(TensorBasisState::new(vec![perm("[1,2]"), perm("[1,2,3]")]).is_err());
    assert_eq!(tensor_dim(4, 3).unwrap(), 13_824);
}

#[test]
fn state_arithmetic_is_exact() {
    let a = ket(&["[1,2,3]"]);
    let b = ket(&["[2,1,3]"]);
    let s = a.combine(&q(1, 2), &b, &q(1, 3)).unwrap();
    assert_eq!(s.amplitude(0), q(1, 2));
    assert_eq!(s.norm_sq(), q(1, 4) + q(1, 9));
    assert!(s.sub(&s).unwrap().is_zero());
    assert_eq!(s.scale(&q(6, 1)).amplitude(b.iter().next().unwrap().0), q(2, 1));
    assert_eq!(a.dot(&b).unwrap(), BigRational::zero());
}

#[test]
fn action_examples() {
    let s = ket(&["[1,2,3]"]);
    let id = Permutation::identity(3);
    assert_eq!(apply_action(&s, 0, Side::L, &id).unwrap(), s);
    let g = perm("[2,3,1]");
    let moved = apply_action(&s, 0, Side::L, &g).unwrap();
    assert_eq!(apply_action(&moved, 0, Side::L, &g.inverse()).unwrap(), s);
    let c = ket(&["[2,3,1]"]);
    let t12 = perm("[2,1,3]");
    let t23 = perm("[1,3,2]");
    let lr = apply_action(&apply_action(&c, 0, Side::L, &t12).unwrap(), 0, Side::R, &t23).unwrap();
    let rl = apply_action(&apply_action(&c, 0, Side::R, &t23).unwrap(), 0, Side::L, &t12).unwrap();
    assert_eq!(lr, rl);
    // direct evaluation: (12)∘(231)∘(23)⁻¹
    let expected = t12.compose(&perm("[2,3,1]")).unwrap().compose(&t23.inverse()).unwrap();
    assert_eq!(lr, StateVector::from_basis_state(&TensorBasisState::new(vec![expected]).unwrap()));
    assert_eq!(lr.norm_sq(), BigRational::one());
}

#[test]
fn isotypic_examples() {
    let s = ket(&["[2,3,1]"]);
    assert_eq!(apply_isotypic(&s, 0, &p("3")).unwrap(), uniform(3));
    let pi21 =
        Pipeline::new(3, 1, vec![ProjectorSpec::isotypic(0, p("2,1"))], PipelineLabel::Custom { name: "iso".into() })
            .unwrap();
    assert_eq!(pipeline_trace_dense(&pi21).unwrap(), 4);
}

#[test]
fn resolution_of_identity() {
    for n in 1..=4 {
        let nf = factorial(n) as usize;
        for b in 0..nf {
            let e = StateVector::basis(n, 1, b).unwrap();
            let mut total = StateVector::zero(n, 1);
            for l in enumerate_partitions(n) {
                total = total.add(&apply_isotypic(&e, 0, &l).unwrap()).unwrap();
            }
            assert_eq!(total, e);
        }
    }
    // a non-basis rational vector with two factors at n = 3
    let psi = StateVector::from_amplitudes(3, 2, [(0, q(1, 2)), (7, q(-3, 5)), (35, q(2, 7))]).unwrap();
    for f in 0..2 {
        let mut total = StateVector::zero(3, 2);
        for l in enumerate_partitions(3) {
            total = total.add(&apply_isotypic(&psi, f, &l).unwrap()).unwrap();
        }
        assert_eq!(total, psi);
    }
}

#[test]
fn isotypic_trace_is_dimension_squared() {
    for n in 1..=5 {
        for l in enumerate_partitions(n) {
            let pl = Pipeline::new(
                n,
                1,
                vec![ProjectorSpec::isotypic(0, l.clone())],
                PipelineLabel::Custom { name: "iso".into() },
            )
            .unwrap();
            let d = hook_dimension(&l);
            assert_eq!(pipeline_trace_collapsed(&pl).unwrap(), d * d, "{l}");
            if n <= 4 {
                assert_eq!(pipeline_trace_dense(&pl).unwrap(), d * d, "{l}");
            }
        }
    }
}

#[test]
fn invariant_average_examples() {
    let s = ket(&["[3,1,2]"]);
    let full = SubgroupDescriptor::Full { n: 3 };
    assert_eq!(apply_invariant_average(&s, &full, &[Action::left(0)], None).unwrap(), uniform(3));
    let trivial = SubgroupDescriptor::young(p("1,1,1"));
    assert_eq!(apply_invariant_average(&s, &trivial, &[Action::right(0)], None).unwrap(), s);
    let young21 = Pipeline::new(
        3,
        1,
        vec![ProjectorSpec::average(SubgroupDescriptor::young(p("2,1")), vec![Action::right(0)])],
        PipelineLabel::Custom { name: "avg".into() },
    )
    .unwrap();
    assert_eq!(pipeline_trace_dense(&young21).unwrap(), 3);
}

#[test]
fn pipeline_construction() {
    let k = kron("2,1", "2,1", "3");
    assert_eq!(k.stages().len(), 7);
    assert_eq!(k.k(), 3);
    assert!(kron_pipeline(&p("2,1"), &p("2"), &p("3")).is_err());
    let pl = pleth_pipeline(2, 2, &p("2,2")).unwrap();
    assert_eq!(pl.stages().len(), 4);
    assert!(pleth_pipeline(2, 2, &p("3")).is_err());
    let json = k.to_json();
    assert_eq!(Pipeline::from_json(&json).unwrap(), k);
    let json = pl.to_json();
    assert!(json.contains("\"wreath\""));
    assert_eq!(Pipeline::from_json(&json).unwrap(), pl);
}

#[test]
fn kron_pipeline_examples() {
    let t = |a, b, c| pipeline_trace_dense(&kron(a, b, c)).unwrap();
    assert_eq!(t("3", "3", "3"), 1);
    assert_eq!(t("2,1", "2,1", "2,1"), 1);
    assert_eq!(t("2,1", "2,1", "3"), 1);
    assert_eq!(t("2,1", "3", "3"), 0);
    assert_eq!(t("2", "2", "2"), 1);
    assert_eq!(t("1,1", "1,1", "2"), 1);
    assert_eq!(t("1,1", "2", "2"), 0);
}

#[test]
fn dense_and_collapsed_match_oracle_small() {
    for n in 1..=3 {
        let parts = enumerate_partitions(n);
        for a in &parts {
            for b in &parts {
                for c in &parts {
                    let pl = kron_pipeline(a, b, c).unwrap();
                    let expected = kron_char(a, b, c).unwrap().value;
                    assert_eq!(pipeline_trace_dense(&pl).unwrap(), expected, "{a} {b} {c}");
                    assert_eq!(pipeline_trace_collapsed(&pl).unwrap(), expected, "{a} {b} {c}");
                }
            }
        }
    }
}

#[test]
fn collapsed_at_five() {
    let l = p("3,1,1");
    let pl = kron_pipeline(&l, &l, &l).unwrap();
    assert_eq!(pipeline_trace_collapsed(&pl).unwrap(), kron_char(&l, &l, &l).unwrap().value);
    assert!(matches!(pipeline_trace_dense(&pl), Err(Error::BoundExceeded { .. })));
}

#[test]
fn pleth_pipeline_examples() {
    let traces: Vec<u64> = enumerate_partitions(4)
        .iter()
        .map(|l| pipeline_trace_dense(&pleth_pipeline(2, 2, l).unwrap()).unwrap())
        .collect();
    assert_eq!(traces, vec![1, 0, 1, 0, 0]);
    for m in 1..=4 {
        assert_eq!(pipeline_trace_dense(&pleth_pipeline(1, m, &Partition::row(m)).unwrap()).unwrap(), 1);
    }
    assert_eq!(pipeline_trace_dense(&pleth_pipeline(2, 3, &p("6")).unwrap()).unwrap(), 1);
    for (d, m) in [(2, 2), (2, 3), (3, 2)] {
        for l in enumerate_partitions(d * m) {
            let pl = pleth_pipeline(d, m, &l).unwrap();
            let expected = pleth_wreath(d, m, &l).unwrap().value;
            assert_eq!(pipeline_trace_collapsed(&pl).unwrap(), expected, "({d},{m}) {l}");
        }
    }
}

#[test]
fn truncated_examples() {
    assert_eq!(truncated_kron_trace(&p("3"), &p("3"), &p("3")).unwrap(), 1);
    assert_eq!(truncated_kron_trace(&p("2,1"), &p("2,1"), &p("2,1")).unwrap(), 8);
    let l = p("2,2");
    let tp = truncated_kron_pipeline(&l, &l, &l).unwrap();
    assert_eq!(pipeline_trace_dense(&tp).unwrap(), 8);
    assert_eq!(pipeline_trace_collapsed(&tp).unwrap(), 8);
    assert_eq!(pipeline_trace_collapsed(&kron_pipeline(&l, &l, &l).unwrap()).unwrap(), 1);
}

#[test]
fn algebra_examples() {
    let r = check_projector_algebra(&kron("2,1", "2,1", "2,1")).unwrap();
    assert!(r.exhaustive);
    assert_eq!(r.basis_checked, 216);
    assert_eq!(r.pairs.len(), 21);
    assert!(r.all_pass(), "{:?}", r.failures());
    for (a, b, c) in [("2", "2", "2"), ("1,1", "2", "1,1"), ("1,1", "1,1", "1,1")] {
        assert!(check_projector_algebra(&kron(a, b, c)).unwrap().all_pass());
    }
    for l in enumerate_partitions(4) {
        assert!(check_projector_algebra(&pleth_pipeline(2, 2, &l).unwrap()).unwrap().all_pass());
    }
}

#[test]
fn mutated_pipeline_fails_commutation() {
    let good = kron("2,1", "2,1", "2,1");
    let mut stages = good.stages().to_vec();
    stages[4] = ProjectorSpec::average(SubgroupDescriptor::young(p("2,1")), vec![Action::left(0)]);
    let bad = Pipeline::new(3, 3, stages, PipelineLabel::Custom { name: "mutated".into() }).unwrap();
    let r = check_projector_algebra(&bad).unwrap();
    assert!(!r.all_pass());
    assert!(r.pairs.iter().any(|pc| (pc.first, pc.second) == (3, 4) && !pc.commute));
    // each stage on its own is still a symmetric idempotent
    assert!(r.stages.iter().all(|s| s.idempotent && s.symmetric));
}

#[test]
fn stage_order_does_not_matter() {
    let pl = pleth_pipeline(2, 2, &p("2,2")).unwrap();
    let orders = crate::symgroup::all_permutations(4);
    for o in &orders {
        let re = pl.reordered(o.images0()).unwrap();
        assert!(same_operator(&pl, &re, BasisSelection::Exhaustive).unwrap());
    }
    let k = kron("2,1", "2,1", "3");
    for o in [[6, 5, 4, 3, 2, 1, 0], [3, 0, 4, 1, 5, 2, 6], [4, 5, 6, 0, 1, 2, 3]] {
        assert!(same_operator(&k, &k.reordered(&o).unwrap(), BasisSelection::Exhaustive).unwrap());
    }
    assert!(k.reordered(&[0, 0, 1, 2, 3, 4, 5]).is_err());
}

#[test]
fn composed_operator_is_projector() {
    let pl = kron("2,1", "2,1", "2,1");
    let psi = StateVector::from_amplitudes(3, 3, [(0, q(1, 1)), (17, q(-2, 3)), (200, q(5, 7))]).unwrap();
    let once = apply_pipeline(&psi, &pl).unwrap();
    let twice = apply_pipeline(&once, &pl).unwrap();
    assert_eq!(once, twice);
    // E symmetric: ⟨φ, Eψ⟩ = ⟨Eφ, ψ⟩
    let phi = StateVector::from_amplitudes(3, 3, [(3, q(1, 1)), (100, q(4, 1))]).unwrap();
    let lhs = phi.dot(&once).unwrap();
    let rhs = apply_pipeline(&phi, &pl).unwrap().dot(&psi).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn unsupported_collapsed_shapes() {
    let n = 3;
    let two_iso = Pipeline::new(
        n,
        1,
        vec![ProjectorSpec::isotypic(0, p("3")), ProjectorSpec::isotypic(0, p("3"))],
        PipelineLabel::Custom { name: "x".into() },
    )
    .unwrap();
    assert!(matches!(pipeline_trace_collapsed(&two_iso), Err(Error::UnsupportedPipeline(_))));
    assert_eq!(pipeline_trace_dense(&two_iso).unwrap(), 1);
}

#[test]
fn orbit_reduced_dense_trace_matches_full_sum() {
    let mut pipelines = vec![
        kron("2,1", "2,1", "2,1"),
        kron("2,1", "2,1", "3"),
        kron("2,1", "1,1,1", "2,1"),
        truncated_kron_pipeline(&p("2,1"), &p("2,1"), &p("2,1")).unwrap(),
        pleth_pipeline(2, 2, &p("2,2")).unwrap(),
    ];
    let mut stages = kron("2,1", "2,1", "2,1").stages().to_vec();
    stages[4] = ProjectorSpec::average(SubgroupDescriptor::young(p("2,1")), vec![Action::left(0)]);
    pipelines.push(Pipeline::new(3, 3, stages, PipelineLabel::Custom { name: "mixed".into() }).unwrap());
    for pl in &pipelines {
        assert_eq!(dense::dense_trace(pl, true).unwrap(), dense::dense_trace(pl, false).unwrap(), "{}", pl.label());
    }
}
