//! Commuting projectors on `C[S_n]^{⊗k}` and the pipelines built from them.
//!
//! Two kinds of stage exist. An isotypic stage on factor `f` is
//! `(d(λ)/n!) Σ_g χ_λ(g) L_g`, the projector onto the `λ`-isotypic part of
//! that factor. An invariant average is `(1/|G|) Σ_{g∈G} ∏ actions(g)`,
//! where each action is a left (`σ ↦ gσ`) or right (`σ ↦ σg⁻¹`)
//! multiplication on one factor, optionally after embedding `g` into a
//! larger symmetric group. Both are real symmetric matrices in the
//! permutation basis, so every computation here is exact over `Q`.
//!
//! Traces are available from two independent backends:
//! [`pipeline_trace_dense`] evaluates every diagonal entry, and
//! [`pipeline_trace_collapsed`] contracts the group sums through
//! class-multiplication counts.

mod collapsed;
mod dense;
pub(crate) mod engine;
mod state;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use collapsed::{pipeline_trace_collapsed, COLLAPSED_MAX_N};
pub use dense::{
    check_projector_algebra, check_projector_algebra_with, pipeline_trace_dense, same_operator, AlgebraReport,
    BasisSelection, PairCheck, StageCheck, DENSE_MAX_DIM, EXHAUSTIVE_ALGEBRA_DIM,
};
pub use state::{tensor_dim, StateVector, TensorBasisState};

use crate::combinatorics::{factorial, Partition};
use crate::error::{Error, Result};
use crate::oracles::{check_same_size, Method};
use crate::symgroup::{Permutation, SubgroupDescriptor};
use engine::{Accumulator, CompiledStage, Layout};

/// Which multiplication a group element performs on a tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// `σ ↦ gσ`.
    L,
    /// `σ ↦ σg⁻¹`.
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Action {
    pub factor: usize,
    pub side: Side,
}

impl Action {
    pub fn left(factor: usize) -> Self {
        Action { factor, side: Side::L }
    }

    pub fn right(factor: usize) -> Self {
        Action { factor, side: Side::R }
    }
}

/// A homomorphism applied to group elements before they act.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Embedding {
    /// `S_d → S_{md}` permuting blocks of size `m`.
    Wreath { m: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProjectorSpec {
    Isotypic {
        factor: usize,
        lambda: Partition,
    },
    InvariantAverage {
        group: SubgroupDescriptor,
        actions: Vec<Action>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        embedding: Option<Embedding>,
    },
}

impl ProjectorSpec {
    pub fn isotypic(factor: usize, lambda: Partition) -> Self {
        ProjectorSpec::Isotypic { factor, lambda }
    }

    pub fn average(group: SubgroupDescriptor, actions: Vec<Action>) -> Self {
        ProjectorSpec::InvariantAverage { group, actions, embedding: None }
    }

    /// The group elements as they act on `C[S_n]`, after any embedding.
    pub(crate) fn acting_elements(&self) -> Option<Vec<Permutation>> {
        match self {
            ProjectorSpec::Isotypic { .. } => None,
            ProjectorSpec::InvariantAverage { group, embedding, .. } => {
                let els = crate::symgroup::enumerate_subgroup(group);
                Some(match embedding {
                    Some(Embedding::Wreath { m }) => els.iter().map(|g| crate::symgroup::wreath_embed(g, *m)).collect(),
                    None => els,
                })
            }
        }
    }
}

impl fmt::Display for ProjectorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectorSpec::Isotypic { factor, lambda } => write!(f, "iso[{factor}]({lambda})"),
            ProjectorSpec::InvariantAverage { group, actions, embedding } => {
                let acts: Vec<String> = actions.iter().map(|a| format!("{:?}{}", a.side, a.factor)).collect();
                write!(f, "avg[{}] {group}", acts.join(","))?;
                if let Some(Embedding::Wreath { m }) = embedding {
                    write!(f, " via phi_{m}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PipelineLabel {
    Kron { lambda: Partition, mu: Partition, nu: Partition },
    TruncatedKron { lambda: Partition, mu: Partition, nu: Partition },
    Pleth { d: usize, m: usize, lambda: Partition },
    Custom { name: String },
}

impl fmt::Display for PipelineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineLabel::Kron { lambda, mu, nu } => write!(f, "kron({lambda} | {mu} | {nu})"),
            PipelineLabel::TruncatedKron { lambda, mu, nu } => write!(f, "kron-truncated({lambda} | {mu} | {nu})"),
            PipelineLabel::Pleth { d, m, lambda } => write!(f, "pleth({d}, {m}, {lambda})"),
            PipelineLabel::Custom { name } => write!(f, "{name}"),
        }
    }
}

/// Largest number of tensor factors a pipeline may have.
pub const MAX_FACTORS: usize = 8;

/// An ordered list of stages on `C[S_n]^{⊗k}`; the composed operator applies
/// `stages[0]` first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pipeline {
    n: usize,
    k: usize,
    stages: Vec<ProjectorSpec>,
    label: PipelineLabel,
}

impl Pipeline {
    pub fn new(n: usize, k: usize, stages: Vec<ProjectorSpec>, label: PipelineLabel) -> Result<Self> {
        if n == 0 || k == 0 || k > MAX_FACTORS {
            return Err(Error::UnsupportedPipeline(format!("n = {n}, k = {k}")));
        }
        for s in &stages {
            match s {
                ProjectorSpec::Isotypic { factor, lambda } => {
                    if *factor >= k {
                        return Err(Error::UnsupportedPipeline(format!("{s}: factor out of range")));
                    }
                    if lambda.size() != n {
                        return Err(Error::SizeMismatch(format!("{s}: |{lambda}| ≠ {n}")));
                    }
                }
                ProjectorSpec::InvariantAverage { group, actions, embedding } => {
                    if actions.is_empty() || actions.iter().any(|a| a.factor >= k) {
                        return Err(Error::UnsupportedPipeline(format!("{s}: bad action list")));
                    }
                    let acting = match embedding {
                        None => group.degree(),
                        Some(Embedding::Wreath { m }) => group.degree() * m,
                    };
                    if acting != n {
                        return Err(Error::DegreeMismatch { expected: n, got: acting });
                    }
                    if let SubgroupDescriptor::DiagonalFull { factors, .. } = group {
                        let mut acted: Vec<usize> = actions.iter().map(|a| a.factor).collect();
                        acted.sort_unstable();
                        acted.dedup();
                        if &acted != factors {
                            return Err(Error::UnsupportedPipeline(format!("{s}: factors disagree with actions")));
                        }
                    }
                }
            }
        }
        Ok(Pipeline { n, k, stages, label })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn stages(&self) -> &[ProjectorSpec] {
        &self.stages
    }

    pub fn label(&self) -> &PipelineLabel {
        &self.label
    }

    pub fn dim(&self) -> Result<usize> {
        tensor_dim(self.n, self.k)
    }

    /// Same operator family, stages listed in the order `perm`.
    pub fn reordered(&self, perm: &[usize]) -> Result<Pipeline> {
        let mut seen = vec![false; self.stages.len()];
        if perm.len() != self.stages.len()
            || perm.iter().any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a stage order")));
        }
        let stages = perm.iter().map(|&i| self.stages[i].clone()).collect();
        Ok(Pipeline { stages, ..self.clone() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pipeline serializes")
    }

    pub fn from_json(s: &str) -> Result<Pipeline> {
        let raw: Pipeline = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Pipeline::new(raw.n, raw.k, raw.stages, raw.label)
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} on C[S_{}]^{}", self.label, self.n, self.k)?;
        for (i, s) in self.stages.iter().enumerate() {
            writeln!(f, "  {i}: {s}")?;
        }
        Ok(())
    }
}

fn kron_stages(lambda: &Partition, mu: &Partition, nu: &Partition, with_right: bool) -> Vec<ProjectorSpec> {
    let n = lambda.size();
    let parts = [lambda, mu, nu];
    let mut stages: Vec<ProjectorSpec> =
        parts.iter().enumerate().map(|(f, p)| ProjectorSpec::isotypic(f, (*p).clone())).collect();
    stages.push(ProjectorSpec::average(
        SubgroupDescriptor::DiagonalFull { n, factors: vec![0, 1, 2] },
        (0..3).map(Action::left).collect(),
    ));
    if with_right {
        for (f, p) in parts.iter().enumerate() {
            stages.push(ProjectorSpec::average(SubgroupDescriptor::young((*p).clone()), vec![Action::right(f)]));
        }
    }
    stages
}

/// Isotypic projections on three factors, the diagonal left `S_n` average,
/// then right Young averages; image dimension `k(λ,μ,ν)`.
pub fn kron_pipeline(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<Pipeline> {
    let n = check_same_size(&[lambda, mu, nu])?;
    let label = PipelineLabel::Kron { lambda: lambda.clone(), mu: mu.clone(), nu: nu.clone() };
    Pipeline::new(n, 3, kron_stages(lambda, mu, nu, true), label)
}

/// [`kron_pipeline`] without the right Young averages; image dimension
/// `d(λ)d(μ)d(ν)·k(λ,μ,ν)`.
pub fn truncated_kron_pipeline(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<Pipeline> {
    let n = check_same_size(&[lambda, mu, nu])?;
    let label = PipelineLabel::TruncatedKron { lambda: lambda.clone(), mu: mu.clone(), nu: nu.clone() };
    Pipeline::new(n, 3, kron_stages(lambda, mu, nu, false), label)
}

/// One factor: isotypic `λ`, left average over `S_{(m^d)}`, left average over
/// `S_d` embedded block-wise, right average over `S_λ`; image dimension
/// `a_λ(d, m)`.
pub fn pleth_pipeline(d: usize, m: usize, lambda: &Partition) -> Result<Pipeline> {
    let n = m * d;
    if lambda.size() != n {
        return Err(Error::SizeMismatch(format!("|{lambda}| = {} but md = {n}", lambda.size())));
    }
    let stages = vec![
        ProjectorSpec::isotypic(0, lambda.clone()),
        ProjectorSpec::average(SubgroupDescriptor::young(Partition::rectangle(m, d)), vec![Action::left(0)]),
        ProjectorSpec::InvariantAverage {
            group: SubgroupDescriptor::Full { n: d },
            actions: vec![Action::left(0)],
            embedding: Some(Embedding::Wreath { m }),
        },
        ProjectorSpec::average(SubgroupDescriptor::young(lambda.clone()), vec![Action::right(0)]),
    ];
    Pipeline::new(n, 1, stages, PipelineLabel::Pleth { d, m, lambda: lambda.clone() })
}

/// [`kron_pipeline`] with its right `𝔖_λ` average replaced by a left
/// `𝔖_{(n−1,1)}` average on factor 0. Each stage is still a projector but the
/// stages no longer commute; used as a negative control. Needs `n ≥ 3`.
pub fn mutated_kron_pipeline(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<Pipeline> {
    let good = kron_pipeline(lambda, mu, nu)?;
    let n = good.n();
    if n < 3 {
        return Err(Error::UnsupportedPipeline(format!("negative control needs n >= 3, got {n}")));
    }
    let mut stages = good.stages().to_vec();
    let hook = Partition::new(vec![n - 1, 1])?;
    stages[4] = ProjectorSpec::average(SubgroupDescriptor::young(hook), vec![Action::left(0)]);
    Pipeline::new(n, 3, stages, PipelineLabel::Custom { name: format!("mutated {}", good.label()) })
}

/// Trace by the requested backend.
pub fn pipeline_trace(p: &Pipeline, method: Method) -> Result<u64> {
    match method {
        Method::Dense => pipeline_trace_dense(p),
        Method::Collapsed => pipeline_trace_collapsed(p),
        other => Err(Error::UnsupportedPipeline(format!("{} is not a pipeline backend", other.as_str()))),
    }
}

/// Trace of [`truncated_kron_pipeline`], densely when the space is small
/// enough and by contraction otherwise.
pub fn truncated_kron_trace(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<u64> {
    let p = truncated_kron_pipeline(lambda, mu, nu)?;
    match pipeline_trace_dense(&p) {
        Err(Error::BoundExceeded { .. }) => pipeline_trace_collapsed(&p),
        r => r,
    }
}

fn check_state(state: &StateVector, n: usize, k: usize) -> Result<()> {
    if (state.n(), state.k()) != (n, k) {
        return Err(Error::SizeMismatch(format!(
            "state lives in C[S_{}]^{}, operator in C[S_{n}]^{k}",
            state.n(),
            state.k()
        )));
    }
    Ok(())
}

/// Relabels basis states: `L_g` sends `σ_f` to `gσ_f`, `R_g` sends it to `σ_f g⁻¹`.
pub fn apply_action(state: &StateVector, factor: usize, side: Side, g: &Permutation) -> Result<StateVector> {
    let n = state.n();
    if g.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, got: g.degree() });
    }
    if factor >= state.k() {
        return Err(Error::UnsupportedPipeline(format!("factor {factor} of {}", state.k())));
    }
    let nf = factorial(n) as usize;
    let stride = nf.pow(factor as u32);
    let ginv = g.inverse();
    let mut entries = Vec::with_capacity(state.support_len());
    for (&idx, v) in state.numerators() {
        let r = (idx / stride) % nf;
        let sigma = Permutation::unrank(n, r)?;
        let image = match side {
            Side::L => g.compose_unchecked(&sigma),
            Side::R => sigma.compose_unchecked(&ginv),
        };
        entries.push((idx - r * stride + image.rank() * stride, v.clone()));
    }
    Ok(StateVector::from_scaled(n, state.k(), state.denominator().clone(), entries))
}

pub(crate) fn apply_compiled(
    state: &StateVector,
    stage: &CompiledStage,
    layout: &Layout,
    transpose: bool,
) -> StateVector {
    let mut acc = Accumulator::<BigInt>::new(layout.dim);
    let input: Vec<(usize, BigInt)> = state.numerators().iter().map(|(i, v)| (*i, v.clone())).collect();
    let out = stage.apply(layout, &input, transpose, &mut acc);
    StateVector::from_scaled(state.n(), state.k(), state.denominator() * stage.den, out)
}

/// Applies one stage exactly.
pub fn apply_stage(state: &StateVector, spec: &ProjectorSpec) -> Result<StateVector> {
    let (n, k) = (state.n(), state.k());
    let p = Pipeline::new(n, k, vec![spec.clone()], PipelineLabel::Custom { name: "stage".into() })?;
    let group = engine::indexed_group(n)?;
    let stage = CompiledStage::compile(&p.stages[0], n, &group)?;
    Ok(apply_compiled(state, &stage, &Layout::new(n, k), false))
}

/// `Π^λ` on one factor.
pub fn apply_isotypic(state: &StateVector, factor: usize, lambda: &Partition) -> Result<StateVector> {
    apply_stage(state, &ProjectorSpec::isotypic(factor, lambda.clone()))
}

/// `(1/|G|) Σ_g ∏ actions(g)`.
pub fn apply_invariant_average(
    state: &StateVector,
    group: &SubgroupDescriptor,
    actions: &[Action],
    embedding: Option<Embedding>,
) -> Result<StateVector> {
    let spec = ProjectorSpec::InvariantAverage { group: group.clone(), actions: actions.to_vec(), embedding };
    apply_stage(state, &spec)
}

/// The composed operator `E` of the pipeline applied to `state`.
pub fn apply_pipeline(state: &StateVector, p: &Pipeline) -> Result<StateVector> {
    check_state(state, p.n(), p.k())?;
    let cp = engine::CompiledPipeline::new(p)?;
    Ok(cp.stages.iter().fold(state.clone(), |v, s| apply_compiled(&v, s, &cp.layout, false)))
}

#[cfg(test)]
mod tests;
