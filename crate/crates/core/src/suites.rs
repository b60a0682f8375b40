//! Exhaustive verification sweeps shared by the CLI and the test suites.
//!
//! Every sweep returns one row per case in canonical order (partitions in
//! reverse-lex order, triples lexicographically). A bound violation anywhere
//! aborts the sweep with [`Error::BoundExceeded`]; any other per-case error
//! becomes a failing row.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{enumerate_partitions, Partition};
use crate::error::{Error, Result};
use crate::oracles::{kron_char, pleth_wreath, scaled_kron, Method};
use crate::projectors::{
    check_projector_algebra, kron_pipeline, mutated_kron_pipeline, pipeline_trace, pleth_pipeline,
    truncated_kron_trace, Pipeline, DENSE_MAX_DIM,
};
use crate::protocol::{run_verifier, sample_witness, witness_spaces, VerifierMode, WitnessKind};
use crate::symgroup::INDEXED_GROUP_MAX_N;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRow {
    pub case: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub rows: Vec<CaseRow>,
    pub passed: usize,
    pub total: usize,
    /// Suite-specific tallies, e.g. witnesses tested.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub counters: BTreeMap<String, u64>,
    /// Wall time; not serialized so reports are reproducible byte for byte.
    #[serde(skip)]
    pub millis: u64,
}

impl SuiteReport {
    fn new(suite: String, rows: Vec<CaseRow>, counters: BTreeMap<String, u64>, start: Instant) -> Self {
        let passed = rows.iter().filter(|r| r.pass).count();
        let total = rows.len();
        SuiteReport { suite, rows, passed, total, counters, millis: start.elapsed().as_millis() as u64 }
    }

    pub fn all_pass(&self) -> bool {
        self.passed == self.total
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

fn join(ps: &[&Partition]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

fn triples(n: usize) -> Vec<(Partition, Partition, Partition)> {
    let ps = enumerate_partitions(n);
    let mut out = Vec::with_capacity(ps.len().pow(3));
    for a in &ps {
        for b in &ps {
            for c in &ps {
                out.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    out
}

/// Surfaces the first bound violation, otherwise turns errors into rows.
fn collect_rows(results: Vec<(String, String, Result<String>)>) -> Result<Vec<CaseRow>> {
    let mut rows = Vec::with_capacity(results.len());
    for (case, expected, got) in results {
        match got {
            Err(e @ Error::BoundExceeded { .. }) => return Err(e),
            Err(e) => rows.push(CaseRow { case, expected, got: format!("error: {e}"), pass: false }),
            Ok(got) => {
                let pass = got == expected;
                rows.push(CaseRow { case, expected, got, pass });
            }
        }
    }
    Ok(rows)
}

fn check_method(method: Method) -> Result<Method> {
    match method {
        Method::Dense | Method::Collapsed => Ok(method),
        other => Err(Error::UnsupportedPipeline(format!("{} is not a pipeline backend", other.as_str()))),
    }
}

fn default_method(n: usize, k: usize) -> Method {
    let dense_ok = n <= INDEXED_GROUP_MAX_N && crate::projectors::tensor_dim(n, k).is_ok_and(|d| d <= DENSE_MAX_DIM);
    if dense_ok {
        Method::Dense
    } else {
        Method::Collapsed
    }
}

/// Pipeline trace against the character oracle for every triple `λ, μ, ν ⊢ n`.
/// Without a method, dense is used where it fits and collapsed otherwise.
pub fn verify_kron_all(n: usize, method: Option<Method>) -> Result<SuiteReport> {
    let start = Instant::now();
    let method = check_method(method.unwrap_or_else(|| default_method(n, 3)))?;
    let results = triples(n)
        .par_iter()
        .map(|(a, b, c)| {
            let case = join(&[a, b, c]);
            match kron_char(a, b, c) {
                Err(e) => (case, String::new(), Err(e)),
                Ok(o) => {
                    let got = kron_pipeline(a, b, c).and_then(|p| pipeline_trace(&p, method)).map(|v| v.to_string());
                    (case, o.value.to_string(), got)
                }
            }
        })
        .collect();
    let rows = collect_rows(results)?;
    Ok(SuiteReport::new(format!("kron-all {n} ({})", method.as_str()), rows, BTreeMap::new(), start))
}

/// Pipeline trace against the wreath census for every `λ ⊢ md`.
pub fn verify_pleth_all(d: usize, m: usize, method: Option<Method>) -> Result<SuiteReport> {
    let start = Instant::now();
    let n = d * m;
    if n == 0 {
        return Err(Error::InvalidPartition("d and m must be positive".into()));
    }
    let method = check_method(method.unwrap_or_else(|| default_method(n, 1)))?;
    let results = enumerate_partitions(n)
        .par_iter()
        .map(|l| match pleth_wreath(d, m, l) {
            Err(e) => (l.to_string(), String::new(), Err(e)),
            Ok(o) => {
                let got = pleth_pipeline(d, m, l).and_then(|p| pipeline_trace(&p, method)).map(|v| v.to_string());
                (l.to_string(), o.value.to_string(), got)
            }
        })
        .collect();
    let rows = collect_rows(results)?;
    Ok(SuiteReport::new(format!("pleth-all {d} {m} ({})", method.as_str()), rows, BTreeMap::new(), start))
}

/// Truncated (three-stage) pipeline trace against `d(λ)d(μ)d(ν)·k(λ,μ,ν)`.
pub fn verify_truncated(n: usize) -> Result<SuiteReport> {
    let start = Instant::now();
    let results = triples(n)
        .par_iter()
        .map(|(a, b, c)| {
            let case = join(&[a, b, c]);
            match scaled_kron(a, b, c) {
                Err(e) => (case, String::new(), Err(e)),
                Ok(v) => (case, v.to_string(), truncated_kron_trace(a, b, c).map(|t| t.to_string())),
            }
        })
        .collect();
    let rows = collect_rows(results)?;
    Ok(SuiteReport::new(format!("truncated {n}"), rows, BTreeMap::new(), start))
}

fn pleth_shapes(n: usize) -> Vec<(usize, usize)> {
    (1..=n).filter(|d| n % d == 0).map(|d| (d, n / d)).collect()
}

fn algebra_row(p: &Pipeline) -> (String, String, Result<String>) {
    let got =
        check_projector_algebra(p).map(|r| if r.all_pass() { "all pass".to_string() } else { r.failures().join("; ") });
    (p.label().to_string(), "all pass".into(), got)
}

/// Idempotence, symmetry and pairwise commutation for every Kronecker
/// pipeline at `n` and every plethysm pipeline with `md = n`, plus a
/// mutated pipeline that must fail commutation (for `n ≥ 3`).
pub fn verify_algebra(n: usize) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut pipelines = Vec::new();
    for (a, b, c) in triples(n) {
        pipelines.push(kron_pipeline(&a, &b, &c)?);
    }
    for (d, m) in pleth_shapes(n) {
        for l in enumerate_partitions(n) {
            pipelines.push(pleth_pipeline(d, m, &l)?);
        }
    }
    let mut results: Vec<_> = pipelines.par_iter().map(algebra_row).collect();
    if n >= 3 {
        let top = Partition::row(n);
        let hook = Partition::new(vec![n - 1, 1])?;
        let bad = mutated_kron_pipeline(&hook, &hook, &top)?;
        let got = check_projector_algebra(&bad).map(|r| {
            if r.pairs.iter().any(|p| !p.commute) {
                "commutation fails".to_string()
            } else {
                "all pass".to_string()
            }
        });
        results.push((bad.label().to_string(), "commutation fails".into(), got));
    }
    let rows = collect_rows(results)?;
    Ok(SuiteReport::new(format!("algebra {n}"), rows, BTreeMap::new(), start))
}

/// Settings for [`verify_protocol`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolOptions {
    pub seed: u64,
    pub shots: u64,
    /// Accepting and rejecting witnesses drawn per case.
    pub witnesses: usize,
    pub kron: bool,
    pub pleth: bool,
}

impl Default for ProtocolOptions {
    fn default() -> Self {
        ProtocolOptions { seed: 0, shots: 10_000, witnesses: 2, kron: true, pleth: true }
    }
}

#[derive(Default)]
struct ProtocolTally {
    accepting: u64,
    rejecting: u64,
    monte_carlo: u64,
}

fn protocol_case(p: &Pipeline, oracle: u64, opts: &ProtocolOptions) -> Result<(String, String, ProtocolTally)> {
    let ws = witness_spaces(p)?;
    let w = opts.witnesses;
    let mut tally = ProtocolTally::default();
    let mut acc_ok = 0;
    let mut rej_ok = 0;
    let has_accept = ws.dim_accept() > 0;
    for i in 0..w as u64 {
        let seed = opts.seed.wrapping_add(i);
        if has_accept {
            let a = sample_witness(&ws, WitnessKind::Accept, seed)?;
            if run_verifier(p, &a, VerifierMode::Exact)?.p_accept.is_one() {
                acc_ok += 1;
            }
            tally.accepting += 1;
        }
        let r = sample_witness(&ws, WitnessKind::Reject, seed)?;
        if run_verifier(p, &r, VerifierMode::Exact)?.p_accept.is_zero() {
            rej_ok += 1;
        }
        tally.rejecting += 1;
    }
    // balanced mixture t·a + r with t ≈ |r|/|a|, so p_accept ≈ 1/2
    let r = sample_witness(&ws, WitnessKind::Reject, opts.seed)?;
    let psi = if has_accept {
        let a = sample_witness(&ws, WitnessKind::Accept, opts.seed)?;
        let ratio = (r.norm_sq() / a.norm_sq()).to_f64().unwrap_or(1.0).sqrt().round().max(1.0);
        let t = BigRational::from_integer(BigInt::from(ratio as u64));
        a.scale(&t).add(&r)?
    } else {
        r
    };
    let single = run_verifier(p, &psi, VerifierMode::SingleShot)?;
    let mc = run_verifier(p, &psi, VerifierMode::MonteCarlo { seed: opts.seed, shots: opts.shots })?;
    let summary = mc.monte_carlo.clone().expect("Monte Carlo summary");
    let exact = single.p_accept.to_f64().unwrap_or(f64::NAN);
    let mc_ok = mc.p_accept == single.p_accept && summary.within_sigmas(exact, 4.0);
    tally.monte_carlo += 1;

    let dims_ok = ws.dim_accept() as u64 == oracle && ws.dim_accept() + ws.dim_reject() == ws.dim_total();
    let na = if has_accept { w } else { 0 };
    let expected = format!("dimA={oracle} accept={na}/{na} reject={w}/{w} mc=ok");
    let got = format!(
        "dimA={} accept={acc_ok}/{na} reject={rej_ok}/{w} mc={}",
        ws.dim_accept(),
        if mc_ok && dims_ok { "ok".to_string() } else { format!("{:.4} vs {exact:.4}", summary.frequency) }
    );
    Ok((expected, got, tally))
}

/// Exact completeness and soundness on seeded witnesses, `dim A` against the
/// oracle, and a Monte Carlo run on a mixed witness, for every Kronecker
/// and plethysm case at `n` that fits the dense bound.
pub fn verify_protocol(n: usize, opts: &ProtocolOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut cases: Vec<(String, Pipeline, Result<u64>)> = Vec::new();
    if opts.kron {
        for (a, b, c) in triples(n) {
            let oracle = kron_char(&a, &b, &c).map(|o| o.value);
            cases.push((format!("kron {}", join(&[&a, &b, &c])), kron_pipeline(&a, &b, &c)?, oracle));
        }
    }
    if opts.pleth {
        for (d, m) in pleth_shapes(n) {
            for l in enumerate_partitions(n) {
                let oracle = pleth_wreath(d, m, &l).map(|o| o.value);
                cases.push((format!("pleth {d} {m} {l}"), pleth_pipeline(d, m, &l)?, oracle));
            }
        }
    }
    let outcomes: Vec<_> = cases
        .par_iter()
        .map(|(case, p, oracle)| match oracle {
            Err(e) => (case.clone(), String::new(), Err(e.clone())),
            Ok(o) => match protocol_case(p, *o, opts) {
                Ok((expected, got, tally)) => (case.clone(), expected, Ok((got, tally))),
                Err(e) => (case.clone(), String::new(), Err(e)),
            },
        })
        .collect();
    let mut counters: BTreeMap<String, u64> = BTreeMap::new();
    let mut results = Vec::with_capacity(outcomes.len());
    for (case, expected, got) in outcomes {
        let got = got.map(|(g, t)| {
            if g == expected {
                *counters.entry("accepting_witnesses".into()).or_default() += t.accepting;
                *counters.entry("rejecting_witnesses".into()).or_default() += t.rejecting;
                *counters.entry("monte_carlo_runs".into()).or_default() += t.monte_carlo;
            }
            g
        });
        results.push((case, expected, got));
    }
    let rows = collect_rows(results)?;
    Ok(SuiteReport::new(format!("protocol {n} (seed {}, shots {})", opts.seed, opts.shots), rows, counters, start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        for n in 1..=3 {
            let r = verify_kron_all(n, None).unwrap();
            assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
            assert_eq!(r.total, enumerate_partitions(n).len().pow(3));
        }
        assert_eq!(verify_kron_all(3, None).unwrap().total, 27);
        assert!(verify_kron_all(3, Some(Method::Collapsed)).unwrap().all_pass());
        assert!(verify_pleth_all(2, 2, None).unwrap().all_pass());
        assert!(verify_truncated(3).unwrap().all_pass());
    }

    #[test]
    fn bound_errors_abort() {
        assert!(matches!(verify_kron_all(5, Some(Method::Dense)), Err(Error::BoundExceeded { .. })));
        assert!(verify_kron_all(3, Some(Method::Character)).is_err());
    }

    #[test]
    fn algebra_sweep_has_control() {
        let r = verify_algebra(3).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        // 27 kron + 3 (1,3) + 3 (3,1) + control
        assert_eq!(r.total, 34);
        assert_eq!(r.rows.last().unwrap().got, "commutation fails");
    }

    #[test]
    fn protocol_sweep_small() {
        let opts = ProtocolOptions { seed: 5, shots: 2_000, witnesses: 1, kron: true, pleth: true };
        let r = verify_protocol(2, &opts).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.counters["rejecting_witnesses"], r.total as u64);
        assert_eq!(
            r.rows.iter().map(|x| x.case.clone()).collect::<Vec<_>>(),
            verify_protocol(2, &opts).unwrap().rows.iter().map(|x| x.case.clone()).collect::<Vec<_>>()
        );
    }
}
