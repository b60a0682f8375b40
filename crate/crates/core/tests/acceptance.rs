//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kronlab::characters::CharacterTable;
use kronlab::combinatorics::{encode_diagram, enumerate_partitions, factorial, hook_dimension, kostka, schur_dim_gl};
use kronlab::oracles::{pleth_wreath, Method};
use kronlab::specht::{build_seminormal, invariant_dim};
use kronlab::suites::{self, ProtocolOptions, SuiteReport};
use kronlab::symgroup::enumerate_subgroup;
use kronlab::{Partition, Permutation, SubgroupDescriptor};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn suite_ok(r: kronlab::Result<SuiteReport>) -> Result<SuiteReport, String> {
    let r = r.map_err(|e| e.to_string())?;
    if let Some(f) = r.failures().next() {
        return Err(format!(
            "{}: {} expected {} got {} ({} failing)",
            r.suite,
            f.case,
            f.expected,
            f.got,
            r.total - r.passed
        ));
    }
    Ok(r)
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn regular_representation() -> Outcome {
    for n in 1..=10 {
        let s: u128 = enumerate_partitions(n).iter().map(|l| (hook_dimension(l) as u128).pow(2)).sum();
        ensure(s == factorial(n), || format!("n = {n}: sum of squares {s}"))?;
    }
    Ok("n = 1..10".into())
}

fn character_tables() -> Outcome {
    for n in 1..=8 {
        CharacterTable::compute(n).and_then(|t| t.validate()).map_err(|e| format!("n = {n}: {e}"))?;
    }
    Ok("row and column orthogonality, n = 1..8".into())
}

fn young_invariants() -> Outcome {
    let mut pairs = 0;
    for n in 1..=6 {
        let parts = enumerate_partitions(n);
        let reps: Vec<_> = parts.iter().map(build_seminormal).collect();
        for (l, rep) in parts.iter().zip(&reps) {
            for mu in &parts {
                let inv = invariant_dim(&[rep], &SubgroupDescriptor::young(mu.clone())).map_err(|e| e.to_string())?;
                let k = kostka(l, mu).map_err(|e| e.to_string())?;
                ensure(inv == k, || format!("λ = {l}, μ = {mu}: invariant dim {inv}, Kostka {k}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs, n = 1..6"))
}

fn kron_dense() -> Outcome {
    let mut cases = Vec::new();
    for n in 2..=4 {
        cases.push(suite_ok(suites::verify_kron_all(n, Some(Method::Dense)))?.total.to_string());
    }
    Ok(format!("{} triples at n = 2, 3, 4", cases.join(" + ")))
}

fn kron_collapsed() -> Outcome {
    let mut cases = Vec::new();
    for n in 5..=6 {
        cases.push(suite_ok(suites::verify_kron_all(n, Some(Method::Collapsed)))?.total.to_string());
    }
    Ok(format!("{} triples at n = 5, 6", cases.join(" + ")))
}

fn projector_algebra() -> Outcome {
    let mut pipelines = 0;
    for n in 3..=4 {
        let r = suite_ok(suites::verify_algebra(n))?;
        let control = r.rows.last().ok_or("empty algebra report")?;
        ensure(control.case.starts_with("mutated") && control.got == "commutation fails", || {
            format!("negative control at n = {n}: {}", control.got)
        })?;
        pipelines += r.total - 1;
    }
    Ok(format!("{pipelines} pipelines (n = 3 exhaustive, n = 4 sampled), controls fail commutation"))
}

fn pleth_pipelines() -> Outcome {
    let mut total = 0;
    for (d, m) in [(2, 2), (3, 2), (2, 3)] {
        total += suite_ok(suites::verify_pleth_all(d, m, None))?.total;
    }
    Ok(format!("{total} cases over (d,m) = (2,2), (3,2), (2,3)"))
}

fn pleth_dimension_identity() -> Outcome {
    let mut shapes = 0;
    for d in 1..=8usize {
        for m in 1..=8 / d {
            let big_n = m * d;
            let mut lhs = 0u128;
            for l in enumerate_partitions(big_n) {
                let a = pleth_wreath(d, m, &l).map_err(|e| e.to_string())?.value as u128;
                lhs += a * schur_dim_gl(&l, big_n);
            }
            let inner = binomial((big_n + m - 1) as u128, m as u128);
            let rhs = binomial(inner + d as u128 - 1, d as u128);
            ensure(lhs == rhs, || format!("(d,m) = ({d},{m}): {lhs} vs {rhs}"))?;
            shapes += 1;
        }
    }
    Ok(format!("{shapes} shapes with md ≤ 8"))
}

fn verifier_perfection() -> Outcome {
    let kron = ProtocolOptions { seed: 2024, shots: 10_000, witnesses: 10, kron: true, pleth: true };
    let a = suite_ok(suites::verify_protocol(3, &kron))?;
    let pleth = ProtocolOptions { seed: 2024, shots: 10_000, witnesses: 10, kron: false, pleth: true };
    let b = suite_ok(suites::verify_protocol(4, &pleth))?;
    let count = |key: &str| a.counters.get(key).copied().unwrap_or(0) + b.counters.get(key).copied().unwrap_or(0);
    let (acc, rej, mc) = (count("accepting_witnesses"), count("rejecting_witnesses"), count("monte_carlo_runs"));
    ensure(acc >= 100 && rej >= 100, || format!("only {acc} accepting and {rej} rejecting witnesses"))?;
    Ok(format!("{acc} accepting at p = 1, {rej} rejecting at p = 0, {mc} Monte Carlo runs within 4σ"))
}

fn scaled_kron_relation() -> Outcome {
    let mut total = 0;
    for n in 1..=4 {
        total += suite_ok(suites::verify_truncated(n))?.total;
    }
    Ok(format!("{total} triples, n = 1..4"))
}

fn point_values() -> Outcome {
    let k = kostka(&p("3,1"), &p("2,1,1")).map_err(|e| e.to_string())?;
    ensure(k == 2, || format!("K = {k}"))?;
    let mut young = enumerate_subgroup(&SubgroupDescriptor::young(p("2,2")));
    young.sort();
    let mut listed: Vec<Permutation> =
        ["[1,2,3,4]", "[2,1,3,4]", "[1,2,4,3]", "[2,1,4,3]"].iter().map(|s| s.parse().unwrap()).collect();
    listed.sort();
    ensure(young == listed, || format!("Young subgroup (2,2): {young:?}"))?;
    let bits = encode_diagram(&p("5,3")).map_err(|e| e.to_string())?;
    ensure(bits == "0000100", || format!("encoding {bits}"))?;
    Ok("K_{(3,1),(2,1,1)} = 2, |S_(2,2)| = 4, (5,3) -> 0000100".into())
}

fn run(index: usize, name: &str, limit: Duration, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took {:.1?}, limit {:?}", elapsed, limit)),
        Err(e) => (false, e),
    };
    println!("criterion {index:>2} {} {name}: {detail} [{:.2?}]", if ok { "PASS" } else { "FAIL" }, elapsed);
    ok
}

fn main() -> ExitCode {
    let min = |m: u64| Duration::from_secs(60 * m);
    let criteria: [Criterion; 11] = [
        ("regular representation dimension", Duration::from_secs(1), regular_representation),
        ("character table orthogonality", Duration::from_secs(30), character_tables),
        ("Young-subgroup invariants equal Kostka numbers", min(5), young_invariants),
        ("Kronecker pipeline, dense backend", min(10), kron_dense),
        ("Kronecker pipeline, collapsed backend", min(30), kron_collapsed),
        ("projector algebra", min(10), projector_algebra),
        ("plethysm pipeline", min(5), pleth_pipelines),
        ("plethysm dimension identity", min(5), pleth_dimension_identity),
        ("verifier completeness and soundness", min(10), verifier_perfection),
        ("truncated pipeline scaling", min(10), scaled_kron_relation),
        ("point values", min(1), point_values),
    ];
    let passed = criteria.iter().enumerate().filter(|(i, (name, limit, f))| run(i + 1, name, *limit, *f)).count();
    println!("acceptance: {passed}/{} criteria pass", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
