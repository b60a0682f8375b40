//! The verifier as a sequence of projective measurements.
//!
//! Each isotypic stage becomes the measurement `{Π^μ}_{μ⊢n}` on its factor;
//! any outcome other than the stage's own partition rejects. Each average
//! becomes the two-outcome measurement `{P, I − P}`, accepting on `P`.
//! Probabilities are exact rationals. States are kept unnormalized: the
//! post-measurement state is the projected vector itself, and every
//! probability is a ratio of squared norms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{enumerate_partitions, Partition};
use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::projectors::engine::{indexed_group, Accumulator, CompiledPipeline, CompiledStage, Layout};
use crate::projectors::{apply_compiled, pipeline_trace_dense, Pipeline, ProjectorSpec, StateVector, DENSE_MAX_DIM};

fn ratio_of(num: &BigRational, den: &BigRational) -> BigRational {
    num / den
}

fn check_nonzero(state: &StateVector, what: &str) -> Result<()> {
    if state.is_zero() {
        return Err(Error::ZeroState(what.to_string()));
    }
    Ok(())
}

/// One outcome of weak Fourier sampling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierOutcome {
    pub lambda: Partition,
    pub probability: BigRational,
    /// `Π^λ ψ` (unnormalized).
    pub post_state: StateVector,
}

/// How [`weak_fourier_sample`] reports its result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Every outcome with its probability.
    Exhaustive,
    /// Every outcome, plus one drawn with `ChaCha8Rng::seed_from_u64(seed)`.
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierSample {
    /// Outcomes with nonzero probability, in reverse-lex order of `λ`.
    pub distribution: Vec<FourierOutcome>,
    pub sampled: Option<Partition>,
}

/// Measures `{Π^λ}_{λ⊢n}` on one factor.
pub fn weak_fourier_sample(state: &StateVector, factor: usize, sampling: Sampling) -> Result<FourierSample> {
    check_nonzero(state, "weak Fourier sampling of the zero vector")?;
    if factor >= state.k() {
        return Err(Error::UnsupportedPipeline(format!("factor {factor} of {}", state.k())));
    }
    let (n, k) = (state.n(), state.k());
    let group = indexed_group(n)?;
    let layout = Layout::new(n, k);
    let norm = state.norm_sq();
    let mut distribution = Vec::new();
    let mut total = BigRational::zero();
    for lambda in enumerate_partitions(n) {
        let stage = CompiledStage::compile(&ProjectorSpec::isotypic(factor, lambda.clone()), n, &group)?;
        let post = apply_compiled(state, &stage, &layout, false);
        let probability = ratio_of(&post.norm_sq(), &norm);
        total += &probability;
        if !probability.is_zero() {
            distribution.push(FourierOutcome { lambda, probability, post_state: post });
        }
    }
    if !total.is_one() {
        return Err(Error::Consistency(format!("Fourier outcome probabilities sum to {total}")));
    }
    let sampled = match sampling {
        Sampling::Exhaustive => None,
        Sampling::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let probs: Vec<f64> = distribution.iter().map(|o| to_f64(&o.probability)).collect();
            Some(distribution[draw(&mut rng, &probs)].lambda.clone())
        }
    };
    Ok(FourierSample { distribution, sampled })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpeResult {
    pub p_accept: BigRational,
    /// `Pψ` (unnormalized).
    pub accept_state: StateVector,
    /// `(I − P)ψ` (unnormalized).
    pub reject_state: StateVector,
}

/// Measures `{P, I − P}` for an invariant-average stage.
pub fn gpe_accept_probability(state: &StateVector, stage: &ProjectorSpec) -> Result<GpeResult> {
    check_nonzero(state, "phase estimation on the zero vector")?;
    if !matches!(stage, ProjectorSpec::InvariantAverage { .. }) {
        return Err(Error::UnsupportedPipeline(format!("{stage} is not an invariant average")));
    }
    let accept_state = crate::projectors::apply_stage(state, stage)?;
    let reject_state = state.sub(&accept_state)?;
    let p_accept = ratio_of(&accept_state.norm_sq(), &state.norm_sq());
    Ok(GpeResult { p_accept, accept_state, reject_state })
}

/// The accepting space `im E` and rejecting space `im(I − E)` of a pipeline.
///
/// The accepting basis is explicit. The rejecting basis is
/// `{e_b − E e_b : b ∉ pivots}`, where the pivots are coordinates on which
/// the accepting basis is invertible; it is generated on demand because it
/// has `(n!)^k − dim A` members.
#[derive(Clone, Debug)]
pub struct WitnessSpaces {
    pipeline: Pipeline,
    accepting: Vec<StateVector>,
    pivots: Vec<usize>,
    dim: usize,
}

impl WitnessSpaces {
    pub fn pipeline(&self) -> &Pipeline {
        &self.pipeline
    }

    pub fn dim_accept(&self) -> usize {
        self.accepting.len()
    }

    pub fn dim_reject(&self) -> usize {
        self.dim - self.accepting.len()
    }

    pub fn dim_total(&self) -> usize {
        self.dim
    }

    pub fn accepting_basis(&self) -> &[StateVector] {
        &self.accepting
    }

    /// Basis coordinates that index the rejecting basis, in increasing order.
    pub fn rejecting_coordinates(&self) -> impl Iterator<Item = usize> + '_ {
        let mut pivots = self.pivots.clone();
        pivots.sort_unstable();
        (0..self.dim).filter(move |b| pivots.binary_search(b).is_err())
    }

    /// `e_b − E e_b` for the `j`-th rejecting coordinate `b`.
    pub fn rejecting_basis_vector(&self, j: usize) -> Result<StateVector> {
        let b = self
            .rejecting_coordinates()
            .nth(j)
            .ok_or_else(|| Error::EmptySpace(format!("rejecting basis has {} vectors", self.dim_reject())))?;
        let e = StateVector::basis(self.pipeline.n(), self.pipeline.k(), b)?;
        e.sub(&crate::projectors::apply_pipeline(&e, &self.pipeline)?)
    }

    /// Every rejecting basis vector; only for small spaces.
    pub fn rejecting_basis(&self) -> Result<Vec<StateVector>> {
        (0..self.dim_reject()).map(|j| self.rejecting_basis_vector(j)).collect()
    }
}

/// Computes `A = im E` exactly: columns `E e_b` are fed to an echelon basis
/// until its rank reaches `tr E`, and every basis vector is checked to be
/// fixed by `E`.
pub fn witness_spaces(p: &Pipeline) -> Result<WitnessSpaces> {
    let dim = p.dim()?;
    if dim > DENSE_MAX_DIM {
        return Err(Error::bound(format!("witness spaces of dimension {dim}"), DENSE_MAX_DIM as u64));
    }
    let trace = pipeline_trace_dense(p)? as usize;
    let cp = CompiledPipeline::new(p)?;
    let mut acc = Accumulator::<i128>::new(dim);
    let mut echelon = EchelonBasis::new();
    for b in 0..dim {
        if echelon.rank() == trace {
            break;
        }
        let col = cp.push(0..cp.stages.len(), vec![(b, 1i128)], false, &mut acc);
        if col.is_empty() {
            continue;
        }
        let mut dense = vec![BigInt::zero(); dim];
        for (i, v) in col {
            dense[i] = BigInt::from(v);
        }
        echelon.insert(dense);
    }
    if echelon.rank() != trace {
        return Err(Error::Consistency(format!("rank of E is {} but its trace is {trace}", echelon.rank())));
    }
    let pivots: Vec<usize> = echelon.pivots().collect();
    let accepting: Vec<StateVector> = echelon
        .into_rows()
        .into_iter()
        .map(|row| {
            let entries = row.into_iter().enumerate().filter(|(_, v)| !v.is_zero());
            StateVector::from_scaled(p.n(), p.k(), BigInt::one(), entries)
        })
        .collect();
    for v in &accepting {
        let ev = cp.stages.iter().fold(v.clone(), |s, st| apply_compiled(&s, st, &cp.layout, false));
        if &ev != v {
            return Err(Error::Consistency("accepting basis vector not fixed by E".into()));
        }
    }
    Ok(WitnessSpaces { pipeline: p.clone(), accepting, pivots, dim })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Accept,
    Reject,
}

/// A combination of the requested basis with integer coefficients in
/// `[−9, 9]` drawn from `ChaCha8Rng::seed_from_u64(seed)`; never zero.
pub fn sample_witness(ws: &WitnessSpaces, which: WitnessKind, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, k) = (ws.pipeline.n(), ws.pipeline.k());
    let mut coeffs = |count: usize| loop {
        let c: Vec<i64> = (0..count).map(|_| rng.gen_range(-9..=9)).collect();
        if c.iter().any(|&x| x != 0) {
            return c;
        }
    };
    match which {
        WitnessKind::Accept => {
            if ws.accepting.is_empty() {
                return Err(Error::EmptySpace(format!("no accepting witnesses for {}", ws.pipeline.label())));
            }
            let c = coeffs(ws.accepting.len());
            let mut out = StateVector::zero(n, k);
            for (v, ci) in ws.accepting.iter().zip(c) {
                out = out.combine(&BigRational::one(), v, &BigRational::from_integer(ci.into()))?;
            }
            Ok(out)
        }
        WitnessKind::Reject => {
            if ws.dim_reject() == 0 {
                return Err(Error::EmptySpace(format!("no rejecting witnesses for {}", ws.pipeline.label())));
            }
            // Σ c_b (e_b − E e_b) = v − E v with v supported off the pivots
            let coords: Vec<usize> = ws.rejecting_coordinates().collect();
            let c = coeffs(coords.len());
            let v =
                StateVector::from_scaled(n, k, BigInt::one(), coords.into_iter().zip(c.into_iter().map(BigInt::from)));
            v.sub(&crate::projectors::apply_pipeline(&v, &ws.pipeline)?)
        }
    }
}

/// A probability written as an exact fraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for Fraction {
    fn from(r: &BigRational) -> Self {
        Fraction { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

impl Fraction {
    pub fn to_rational(&self) -> Result<BigRational> {
        let parse = |s: &str| s.parse::<BigInt>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        Ok(BigRational::new(parse(&self.num)?, parse(&self.den)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageKind {
    /// Weak Fourier sampling; the outcome is a partition.
    Wfs,
    /// Invariant-subspace measurement; the outcome is accept or reject.
    Gpe,
    /// The whole of `E` measured at once.
    Projector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub kind: StageKind,
    pub outcome: String,
    /// Probability of this outcome given the earlier ones.
    pub prob_num: String,
    pub prob_den: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

/// One measurement trajectory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifierOutcome {
    pub stages: Vec<StageRecord>,
    pub verdict: Verdict,
    /// Overall acceptance probability of the witness.
    pub p_accept: Fraction,
    /// Probability of this trajectory.
    pub probability: Fraction,
    /// Times this trajectory was drawn (Monte Carlo only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
}

impl VerifierOutcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("outcome serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifierMode {
    /// Every branch of the sequential measurement with its exact probability.
    Exact,
    /// `E` applied at once, then a single accept/reject measurement.
    SingleShot,
    /// `shots` sequential runs; shot `i` draws from `ChaCha8Rng` seeded with
    /// `seed` on stream `i`, using the exact conditional probabilities
    /// converted to `f64`.
    MonteCarlo { seed: u64, shots: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub seed: u64,
    pub shots: u64,
    pub accepted: u64,
    pub frequency: f64,
    /// `sqrt(p(1−p)/shots)` for the exact `p`.
    pub sigma: f64,
}

impl MonteCarloSummary {
    /// `|frequency − p| ≤ 4σ` (exact equality when `σ = 0`).
    pub fn within_sigmas(&self, p: f64, k: f64) -> bool {
        let dev = (self.frequency - p).abs();
        if self.sigma == 0.0 {
            dev == 0.0
        } else {
            dev <= k * self.sigma
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifierRun {
    pub outcomes: Vec<VerifierOutcome>,
    pub p_accept: BigRational,
    pub monte_carlo: Option<MonteCarloSummary>,
}

impl VerifierRun {
    pub fn branch_total(&self) -> Result<BigRational> {
        self.outcomes.iter().map(|o| o.probability.to_rational()).sum()
    }
}

/// A node of the exact branch tree: one stage's outcomes.
struct Branch {
    record: StageRecord,
    prob: BigRational,
    /// `None` once the trajectory has rejected.
    next: Option<usize>,
}

struct Tree {
    /// `levels[s]` holds the outcomes of stage `s` along the surviving path.
    levels: Vec<Vec<Branch>>,
    p_accept: BigRational,
}

fn build_tree(p: &Pipeline, witness: &StateVector) -> Result<Tree> {
    let cp = CompiledPipeline::new(p)?;
    let group = indexed_group(p.n())?;
    let mut psi = witness.clone();
    let mut levels = Vec::with_capacity(p.stages().len());
    let mut survive = BigRational::one();
    for (s, spec) in p.stages().iter().enumerate() {
        if psi.is_zero() {
            break;
        }
        let norm = psi.norm_sq();
        let mut branches = Vec::new();
        match spec {
            ProjectorSpec::Isotypic { factor, lambda } => {
                let mut total = BigRational::zero();
                let mut kept = None;
                for mu in enumerate_partitions(p.n()) {
                    let post = if &mu == lambda {
                        apply_compiled(&psi, &cp.stages[s], &cp.layout, false)
                    } else {
                        let st = CompiledStage::compile(&ProjectorSpec::isotypic(*factor, mu.clone()), p.n(), &group)?;
                        apply_compiled(&psi, &st, &cp.layout, false)
                    };
                    let prob = ratio_of(&post.norm_sq(), &norm);
                    total += &prob;
                    if prob.is_zero() {
                        continue;
                    }
                    let f = Fraction::from(&prob);
                    let continues = &mu == lambda;
                    branches.push(Branch {
                        record: StageRecord {
                            kind: StageKind::Wfs,
                            outcome: mu.to_string(),
                            prob_num: f.num,
                            prob_den: f.den,
                        },
                        prob,
                        next: continues.then_some(s + 1),
                    });
                    if continues {
                        kept = Some(post);
                    }
                }
                if !total.is_one() {
                    return Err(Error::Consistency(format!("stage {s}: outcome probabilities sum to {total}")));
                }
                psi = kept.unwrap_or_else(|| StateVector::zero(p.n(), p.k()));
            }
            ProjectorSpec::InvariantAverage { .. } => {
                let post = apply_compiled(&psi, &cp.stages[s], &cp.layout, false);
                let prob = ratio_of(&post.norm_sq(), &norm);
                let reject = BigRational::one() - &prob;
                if !prob.is_zero() {
                    let f = Fraction::from(&prob);
                    branches.push(Branch {
                        record: StageRecord {
                            kind: StageKind::Gpe,
                            outcome: "accept".into(),
                            prob_num: f.num,
                            prob_den: f.den,
                        },
                        prob,
                        next: Some(s + 1),
                    });
                }
                if !reject.is_zero() {
                    let f = Fraction::from(&reject);
                    branches.push(Branch {
                        record: StageRecord {
                            kind: StageKind::Gpe,
                            outcome: "reject".into(),
                            prob_num: f.num,
                            prob_den: f.den,
                        },
                        prob: reject,
                        next: None,
                    });
                }
                psi = post;
            }
        }
        let cont: BigRational = branches.iter().filter(|b| b.next.is_some()).map(|b| b.prob.clone()).sum();
        survive *= cont;
        levels.push(branches);
    }
    let p_accept = if levels.len() == p.stages().len() && !psi.is_zero() { survive } else { BigRational::zero() };
    Ok(Tree { levels, p_accept })
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn draw(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let x: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if x < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Runs the verifier on `witness`.
///
/// In every mode the reported `p_accept` is the exact sequential acceptance
/// probability; single-shot mode additionally checks that it equals
/// `⟨ψ|E|ψ⟩/⟨ψ|ψ⟩`.
pub fn run_verifier(p: &Pipeline, witness: &StateVector, mode: VerifierMode) -> Result<VerifierRun> {
    check_nonzero(witness, "verifier witness is the zero vector")?;
    if (witness.n(), witness.k()) != (p.n(), p.k()) {
        return Err(Error::SizeMismatch(format!("witness in C[S_{}]^{}", witness.n(), witness.k())));
    }
    let tree = build_tree(p, witness)?;
    let pa = Fraction::from(&tree.p_accept);
    match mode {
        VerifierMode::Exact => {
            let mut outcomes = Vec::new();
            let mut prefix: Vec<StageRecord> = Vec::new();
            let mut prob = BigRational::one();
            for (s, level) in tree.levels.iter().enumerate() {
                let mut cont = None;
                for b in level {
                    let mut stages = prefix.clone();
                    stages.push(b.record.clone());
                    let bp = &prob * &b.prob;
                    match b.next {
                        None => outcomes.push(VerifierOutcome {
                            stages,
                            verdict: Verdict::Reject,
                            p_accept: pa.clone(),
                            probability: Fraction::from(&bp),
                            count: None,
                        }),
                        Some(_) => cont = Some((b.record.clone(), bp)),
                    }
                }
                let Some((rec, bp)) = cont else { break };
                prefix.push(rec);
                prob = bp;
                if s + 1 == p.stages().len() {
                    outcomes.push(VerifierOutcome {
                        stages: prefix.clone(),
                        verdict: Verdict::Accept,
                        p_accept: pa.clone(),
                        probability: Fraction::from(&prob),
                        count: None,
                    });
                }
            }
            let run = VerifierRun { outcomes, p_accept: tree.p_accept, monte_carlo: None };
            let total = run.branch_total()?;
            if !total.is_one() {
                return Err(Error::Consistency(format!("branch probabilities sum to {total}")));
            }
            Ok(run)
        }
        VerifierMode::SingleShot => {
            let e_psi = crate::projectors::apply_pipeline(witness, p)?;
            let p_single = ratio_of(&witness.dot(&e_psi)?, &witness.norm_sq());
            if p_single != tree.p_accept {
                return Err(Error::Consistency(format!(
                    "single-shot acceptance {p_single} differs from sequential {}",
                    tree.p_accept
                )));
            }
            let reject = BigRational::one() - &p_single;
            let mut outcomes = Vec::new();
            for (verdict, prob) in [(Verdict::Accept, &p_single), (Verdict::Reject, &reject)] {
                if prob.is_zero() {
                    continue;
                }
                let f = Fraction::from(prob);
                let outcome = if verdict == Verdict::Accept { "accept" } else { "reject" };
                outcomes.push(VerifierOutcome {
                    stages: vec![StageRecord {
                        kind: StageKind::Projector,
                        outcome: outcome.into(),
                        prob_num: f.num.clone(),
                        prob_den: f.den.clone(),
                    }],
                    verdict,
                    p_accept: pa.clone(),
                    probability: f,
                    count: None,
                });
            }
            Ok(VerifierRun { outcomes, p_accept: p_single, monte_carlo: None })
        }
        VerifierMode::MonteCarlo { seed, shots } => {
            let float_levels: Vec<Vec<f64>> =
                tree.levels.iter().map(|l| l.iter().map(|b| to_f64(&b.prob)).collect()).collect();
            let paths: Vec<Vec<usize>> = (0..shots)
                .into_par_iter()
                .map(|shot| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(shot);
                    let mut path = Vec::new();
                    for (level, probs) in tree.levels.iter().zip(&float_levels) {
                        let i = draw(&mut rng, probs);
                        path.push(i);
                        if level[i].next.is_none() {
                            break;
                        }
                    }
                    path
                })
                .collect();
            let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
            for path in paths {
                *counts.entry(path).or_default() += 1;
            }
            let mut accepted = 0;
            let mut outcomes = Vec::new();
            for (path, count) in counts {
                let mut prob = BigRational::one();
                let stages: Vec<StageRecord> = path
                    .iter()
                    .enumerate()
                    .map(|(s, &i)| {
                        prob *= &tree.levels[s][i].prob;
                        tree.levels[s][i].record.clone()
                    })
                    .collect();
                let last = &tree.levels[path.len() - 1][*path.last().unwrap()];
                let verdict = if last.next.is_some() && path.len() == p.stages().len() {
                    Verdict::Accept
                } else {
                    Verdict::Reject
                };
                if verdict == Verdict::Accept {
                    accepted += count;
                }
                outcomes.push(VerifierOutcome {
                    stages,
                    verdict,
                    p_accept: pa.clone(),
                    probability: Fraction::from(&prob),
                    count: Some(count),
                });
            }
            let pf = to_f64(&tree.p_accept);
            let summary = MonteCarloSummary {
                seed,
                shots,
                accepted,
                frequency: if shots == 0 { 0.0 } else { accepted as f64 / shots as f64 },
                sigma: if shots == 0 { 0.0 } else { (pf * (1.0 - pf) / shots as f64).sqrt() },
            };
            Ok(VerifierRun { outcomes, p_accept: tree.p_accept, monte_carlo: Some(summary) })
        }
    }
}

impl fmt::Display for VerifierOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> = self.stages.iter().map(|s| format!("{:?}:{}", s.kind, s.outcome)).collect();
        write!(f, "{} -> {:?} (p = {}/{})", steps.join(" "), self.verdict, self.probability.num, self.probability.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::factorial;
    use crate::oracles::{kron_char, pleth_wreath};
    use crate::projectors::{kron_pipeline, pleth_pipeline, Action, PipelineLabel};
    use crate::symgroup::SubgroupDescriptor;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn uniform(n: usize) -> StateVector {
        let nf = factorial(n) as usize;
        StateVector::from_amplitudes(n, 1, (0..nf).map(|i| (i, q(1, 1)))).unwrap()
    }

    #[test]
    fn fourier_sampling_examples() {
        let u = weak_fourier_sample(&uniform(3), 0, Sampling::Exhaustive).unwrap();
        assert_eq!(u.distribution.len(), 1);
        assert_eq!(u.distribution[0].lambda, p("3"));
        assert!(u.distribution[0].probability.is_one());

        let id = StateVector::basis(3, 1, 0).unwrap();
        let s = weak_fourier_sample(&id, 0, Sampling::Seeded(7)).unwrap();
        let probs: Vec<(String, BigRational)> =
            s.distribution.iter().map(|o| (o.lambda.to_string(), o.probability.clone())).collect();
        assert_eq!(probs, vec![("3".into(), q(1, 6)), ("2,1".into(), q(4, 6)), ("1,1,1".into(), q(1, 6))]);
        assert!(s.sampled.is_some());
        assert_eq!(weak_fourier_sample(&id, 0, Sampling::Seeded(7)).unwrap().sampled, s.sampled);

        let iso = s.distribution[1].post_state.clone();
        let again = weak_fourier_sample(&iso, 0, Sampling::Exhaustive).unwrap();
        assert_eq!(again.distribution.len(), 1);
        assert!(again.distribution[0].probability.is_one());

        assert!(matches!(
            weak_fourier_sample(&StateVector::zero(3, 1), 0, Sampling::Exhaustive),
            Err(Error::ZeroState(_))
        ));
    }

    #[test]
    fn gpe_examples() {
        let full = ProjectorSpec::average(SubgroupDescriptor::Full { n: 3 }, vec![Action::left(0)]);
        assert!(gpe_accept_probability(&uniform(3), &full).unwrap().p_accept.is_one());
        let id = StateVector::basis(3, 1, 0).unwrap();
        let r = gpe_accept_probability(&id, &full).unwrap();
        assert_eq!(r.p_accept, q(1, 6));
        assert!(gpe_accept_probability(&r.reject_state, &full).unwrap().p_accept.is_zero());
        assert!(gpe_accept_probability(&id, &ProjectorSpec::isotypic(0, p("3"))).is_err());
    }

    #[test]
    fn witness_space_examples() {
        let ws = witness_spaces(&kron_pipeline(&p("2,1"), &p("2,1"), &p("2,1")).unwrap()).unwrap();
        assert_eq!(ws.dim_accept(), 1);
        assert_eq!(ws.dim_reject(), 215);
        let ws0 = witness_spaces(&kron_pipeline(&p("2,1"), &p("3"), &p("3")).unwrap()).unwrap();
        assert_eq!(ws0.dim_accept(), 0);
        assert!(matches!(sample_witness(&ws0, WitnessKind::Accept, 1), Err(Error::EmptySpace(_))));
        let wp = witness_spaces(&pleth_pipeline(2, 2, &p("2,2")).unwrap()).unwrap();
        assert_eq!(wp.dim_accept(), 1);
        let rejecting = wp.rejecting_basis().unwrap();
        assert_eq!(rejecting.len(), 23);
        let pl = wp.pipeline().clone();
        for r in &rejecting {
            assert!(crate::projectors::apply_pipeline(r, &pl).unwrap().is_zero());
        }
    }

    #[test]
    fn witnesses_are_seed_deterministic() {
        let ws = witness_spaces(&kron_pipeline(&p("2,1"), &p("2,1"), &p("3")).unwrap()).unwrap();
        for kind in [WitnessKind::Accept, WitnessKind::Reject] {
            assert_eq!(sample_witness(&ws, kind, 42).unwrap(), sample_witness(&ws, kind, 42).unwrap());
        }
        let a = sample_witness(&ws, WitnessKind::Accept, 1).unwrap();
        let b = sample_witness(&ws, WitnessKind::Accept, 2).unwrap();
        // one-dimensional space: same ray
        assert_eq!(ws.dim_accept(), 1);
        let (ia, va) = a.iter().next().unwrap();
        assert_eq!(b.scale(&(va / b.amplitude(ia))), a);
    }

    #[test]
    fn perfect_completeness_and_soundness() {
        for (a, b, c) in [("2,1", "2,1", "2,1"), ("2,1", "2,1", "3"), ("1,1,1", "2,1", "2,1")] {
            let pl = kron_pipeline(&p(a), &p(b), &p(c)).unwrap();
            let ws = witness_spaces(&pl).unwrap();
            assert_eq!(ws.dim_accept() as u64, kron_char(&p(a), &p(b), &p(c)).unwrap().value);
            for seed in 0..10 {
                let acc =
                    run_verifier(&pl, &sample_witness(&ws, WitnessKind::Accept, seed).unwrap(), VerifierMode::Exact)
                        .unwrap();
                assert!(acc.p_accept.is_one());
                assert!(acc.branch_total().unwrap().is_one());
                let rej =
                    run_verifier(&pl, &sample_witness(&ws, WitnessKind::Reject, seed).unwrap(), VerifierMode::Exact)
                        .unwrap();
                assert!(rej.p_accept.is_zero());
                assert!(rej.branch_total().unwrap().is_one());
            }
        }
    }

    #[test]
    fn equal_mixture_accepts_half() {
        let pl =
            Pipeline::new(2, 1, vec![ProjectorSpec::isotypic(0, p("2"))], PipelineLabel::Custom { name: "avg".into() })
                .unwrap();
        let ws = witness_spaces(&pl).unwrap();
        let a = ws.accepting_basis()[0].clone();
        let r = ws.rejecting_basis_vector(0).unwrap();
        assert_eq!(a.norm_sq() * q(1, 4), r.norm_sq());
        // a = e0 + e1 up to scale, r = (e0 − e1)/2 up to sign
        let psi = a.add(&r.scale(&q(2, 1))).unwrap();
        for mode in [VerifierMode::Exact, VerifierMode::SingleShot] {
            assert_eq!(run_verifier(&pl, &psi, mode).unwrap().p_accept, q(1, 2));
        }
    }

    #[test]
    fn sequential_matches_single_shot_and_monte_carlo() {
        let pl = kron_pipeline(&p("2,1"), &p("2,1"), &p("3")).unwrap();
        let psi = StateVector::from_amplitudes(3, 3, [(0, q(1, 1)), (7, q(2, 1)), (50, q(-1, 3))]).unwrap();
        let exact = run_verifier(&pl, &psi, VerifierMode::Exact).unwrap();
        let single = run_verifier(&pl, &psi, VerifierMode::SingleShot).unwrap();
        assert_eq!(exact.p_accept, single.p_accept);
        assert!(!exact.p_accept.is_zero());
        let mc = run_verifier(&pl, &psi, VerifierMode::MonteCarlo { seed: 3, shots: 10_000 }).unwrap();
        let s = mc.monte_carlo.clone().unwrap();
        assert!(s.within_sigmas(to_f64(&exact.p_accept), 4.0), "{s:?} vs {}", exact.p_accept);
        let again = run_verifier(&pl, &psi, VerifierMode::MonteCarlo { seed: 3, shots: 10_000 }).unwrap();
        assert_eq!(again.monte_carlo, mc.monte_carlo);
        assert_eq!(again.outcomes, mc.outcomes);
    }

    #[test]
    fn outcome_json_shape() {
        let pl = pleth_pipeline(2, 2, &p("4")).unwrap();
        let psi = StateVector::basis(4, 1, 3).unwrap();
        let run = run_verifier(&pl, &psi, VerifierMode::Exact).unwrap();
        assert_eq!(run.p_accept, BigRational::new(pleth_wreath(2, 2, &p("4")).unwrap().value.into(), 24.into()));
        let v: serde_json::Value = serde_json::from_str(&run.outcomes[0].to_json()).unwrap();
        for key in ["stages", "verdict", "p_accept"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let st = &v["stages"][0];
        for key in ["kind", "outcome", "prob_num", "prob_den"] {
            assert!(st.get(key).is_some(), "{key}");
        }
        assert!(v["p_accept"].get("num").is_some() && v["p_accept"].get("den").is_some());
        let back: VerifierOutcome = serde_json::from_value(v).unwrap();
        assert_eq!(back, run.outcomes[0]);
    }

    #[test]
    fn acceptance_is_invariant_under_stage_order() {
        let pl = kron_pipeline(&p("2,1"), &p("2,1"), &p("3")).unwrap();
        let psi = StateVector::from_amplitudes(3, 3, [(1, q(1, 1)), (40, q(-2, 1)), (100, q(1, 2)), (215, q(3, 1))]).unwrap();
        let expected = run_verifier(&pl, &psi, VerifierMode::Exact).unwrap().p_accept;
        assert!(!expected.is_zero());
        let orders = crate::symgroup::all_permutations(pl.stages().len());
        assert_eq!(orders.len(), 5040);
        let all_equal = orders.par_iter().all(|o| {
            let re = pl.reordered(o.images0()).unwrap();
            run_verifier(&re, &psi, VerifierMode::Exact).unwrap().p_accept == expected
        });
        assert!(all_equal);
    }
}
