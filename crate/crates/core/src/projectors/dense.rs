use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::engine::{Accumulator, CompiledPipeline, Sparse};
use super::{Pipeline, ProjectorSpec, Side};
use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::oracles::exact_quotient;
use crate::symgroup::{SubgroupDescriptor, INDEXED_GROUP_MAX_N};

/// Largest `(n!)^k` the dense backend accepts: `k = 3` up to `n = 4`,
/// `k = 1` up to `n = 6`.
pub const DENSE_MAX_DIM: usize = 13_824;

/// Spaces up to this dimension are checked on every basis vector by
/// [`check_projector_algebra`].
pub const EXHAUSTIVE_ALGEBRA_DIM: usize = 1_000;

fn check_dense_bound(p: &Pipeline) -> Result<usize> {
    let dim = p.dim()?;
    if p.n() > INDEXED_GROUP_MAX_N || dim > DENSE_MAX_DIM {
        return Err(Error::bound(format!("dense dimension (n!)^k = ({}!)^{}", p.n(), p.k()), DENSE_MAX_DIM as u64));
    }
    Ok(dim)
}

/// Work of pushing `e_0` through each prefix and each transposed suffix.
/// The split with the least total work is used for every basis vector.
fn choose_split(cp: &CompiledPipeline) -> usize {
    let len = cp.stages.len();
    let mut acc = Accumulator::<i128>::new(cp.layout.dim);
    let mut fwd_cost = vec![0usize; len + 1];
    let mut fwd_size = vec![1usize; len + 1];
    let mut v: Sparse<i128> = vec![(0, 1)];
    for s in 0..len {
        fwd_cost[s + 1] = fwd_cost[s] + v.len() * cp.stages[s].fanout();
        v = cp.stages[s].apply(&cp.layout, &v, false, &mut acc);
        fwd_size[s + 1] = v.len();
    }
    let mut bwd_cost = vec![0usize; len + 1];
    let mut bwd_size = vec![1usize; len + 1];
    let mut w: Sparse<i128> = vec![(0, 1)];
    for s in (0..len).rev() {
        bwd_cost[s] = bwd_cost[s + 1] + w.len() * cp.stages[s].fanout();
        w = cp.stages[s].apply(&cp.layout, &w, true, &mut acc);
        bwd_size[s] = w.len();
    }
    (0..=len).min_by_key(|&s| fwd_cost[s] + bwd_cost[s] + fwd_size[s].min(bwd_size[s])).unwrap_or(0)
}

/// `⟨b|E|b⟩·den`, computed as `⟨(S_s⋯S_1)e_b, (S_{s+1}^T⋯S_k^T)e_b⟩`.
fn scaled_diagonal(
    cp: &CompiledPipeline,
    split: usize,
    b: usize,
    acc: &mut Accumulator<i128>,
    probe: &mut [i128],
) -> i128 {
    let front = cp.push(0..split, vec![(b, 1i128)], false, acc);
    if front.is_empty() {
        return 0;
    }
    let back = cp.push(split..cp.stages.len(), vec![(b, 1i128)], true, acc);
    for (i, v) in &front {
        probe[*i] = *v;
    }
    let dot = back.iter().fold(0i128, |s, (i, v)| {
        s.checked_add(probe[*i].checked_mul(*v).expect("i128 overflow")).expect("i128 overflow")
    });
    for (i, _) in &front {
        probe[*i] = 0;
    }
    dot
}

/// Whether every stage commutes with `L(g)^{⊗k}` for all `g ∈ S_n`: isotypic
/// stages, right-only averages, and left averages of all of `S_n` acting on
/// every factor at once.
fn left_diagonal_invariant(p: &Pipeline) -> bool {
    p.stages().iter().all(|s| match s {
        ProjectorSpec::Isotypic { .. } => true,
        ProjectorSpec::InvariantAverage { group, actions, embedding } => {
            if actions.iter().all(|a| a.side == Side::R) {
                return true;
            }
            let mut factors: Vec<usize> = actions.iter().map(|a| a.factor).collect();
            factors.sort_unstable();
            embedding.is_none()
                && matches!(group, SubgroupDescriptor::Full { .. } | SubgroupDescriptor::DiagonalFull { .. })
                && actions.iter().all(|a| a.side == Side::L)
                && factors == (0..p.k()).collect::<Vec<_>>()
        }
    })
}

/// `tr E = Σ_b ⟨b|E|b⟩` over every basis vector, exactly.
///
/// When `E` commutes with the diagonal left action, `⟨b|E|b⟩` is constant
/// on its free orbits, so only basis vectors with `σ_0 = id` are visited and
/// the sum is multiplied by `n!`.
pub fn pipeline_trace_dense(p: &Pipeline) -> Result<u64> {
    dense_trace(p, true)
}

pub(crate) fn dense_trace(p: &Pipeline, use_symmetry: bool) -> Result<u64> {
    let dim = check_dense_bound(p)?;
    let cp = CompiledPipeline::new(p)?;
    let split = choose_split(&cp);
    let nf = factorial(p.n()) as usize;
    let (step, mult) = if use_symmetry && p.k() > 0 && left_diagonal_invariant(p) { (nf, nf as i128) } else { (1, 1) };
    let total: i128 = (0..dim / step)
        .into_par_iter()
        .map_init(
            || (Accumulator::<i128>::new(dim), vec![0i128; dim]),
            |(acc, probe), j| scaled_diagonal(&cp, split, j * step, acc, probe),
        )
        .reduce(|| 0, |a, b| a.checked_add(b).expect("i128 overflow"));
    let total = total.checked_mul(mult).expect("i128 overflow");
    let den: BigInt = cp.stages.iter().map(|s| BigInt::from(s.den)).product();
    exact_quotient(&BigInt::from(total), &den, &format!("dense trace of {}", p.label()))
}

/// Which basis vectors [`check_projector_algebra_with`] tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisSelection {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCheck {
    pub index: usize,
    pub stage: String,
    pub idempotent: bool,
    pub symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub first: usize,
    pub second: usize,
    pub commute: bool,
}

/// Per-stage and per-pair results of [`check_projector_algebra`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub pipeline: String,
    pub basis_checked: usize,
    pub exhaustive: bool,
    pub stages: Vec<StageCheck>,
    pub pairs: Vec<PairCheck>,
}

impl AlgebraReport {
    pub fn all_pass(&self) -> bool {
        self.stages.iter().all(|s| s.idempotent && s.symmetric) && self.pairs.iter().all(|p| p.commute)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.stages {
            if !s.idempotent {
                out.push(format!("stage {} ({}) not idempotent", s.index, s.stage));
            }
            if !s.symmetric {
                out.push(format!("stage {} ({}) not symmetric", s.index, s.stage));
            }
        }
        for p in self.pairs.iter().filter(|p| !p.commute) {
            out.push(format!("stages {} and {} do not commute", p.first, p.second));
        }
        out
    }
}

fn sorted(mut v: Sparse<i128>) -> Sparse<i128> {
    v.sort_unstable_by_key(|(i, _)| *i);
    v
}

/// Exhaustive when the space has at most [`EXHAUSTIVE_ALGEBRA_DIM`] basis
/// vectors, otherwise 64 basis vectors drawn with seed 0.
pub fn check_projector_algebra(p: &Pipeline) -> Result<AlgebraReport> {
    let sel = if p.dim()? <= EXHAUSTIVE_ALGEBRA_DIM {
        BasisSelection::Exhaustive
    } else {
        BasisSelection::Sampled { count: 64, seed: 0 }
    };
    check_projector_algebra_with(p, sel)
}

/// Checks `S² = S`, `S^T = S` per stage and `S_i S_j = S_j S_i` per pair,
/// column by column on the selected basis vectors.
pub fn check_projector_algebra_with(p: &Pipeline, sel: BasisSelection) -> Result<AlgebraReport> {
    let dim = check_dense_bound(p)?;
    let cp = CompiledPipeline::new(p)?;
    let basis: Vec<usize> = match sel {
        BasisSelection::Exhaustive => (0..dim).collect(),
        BasisSelection::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = rand::seq::index::sample(&mut rng, dim, count.min(dim)).into_vec();
            v.sort_unstable();
            v
        }
    };
    let len = cp.stages.len();
    let npairs = len * len.saturating_sub(1) / 2;
    // failure flags: per stage (idempotent, symmetric), per pair
    let (stage_ok, pair_ok) = basis
        .par_iter()
        .map_init(
            || Accumulator::<i128>::new(dim),
            |acc, &b| {
                let e = vec![(b, 1i128)];
                let cols: Vec<Sparse<i128>> =
                    cp.stages.iter().map(|s| sorted(s.apply(&cp.layout, &e, false, acc))).collect();
                let mut st = vec![(true, true); len];
                for (i, s) in cp.stages.iter().enumerate() {
                    let twice = sorted(s.apply(&cp.layout, &cols[i], false, acc));
                    let once: Sparse<i128> = cols[i].iter().map(|(j, v)| (*j, v * s.den as i128)).collect();
                    st[i].0 = twice == once;
                    st[i].1 = sorted(s.apply(&cp.layout, &e, true, acc)) == cols[i];
                }
                let mut pr = Vec::with_capacity(npairs);
                for i in 0..len {
                    for j in i + 1..len {
                        let ij = sorted(cp.stages[i].apply(&cp.layout, &cols[j], false, acc));
                        let ji = sorted(cp.stages[j].apply(&cp.layout, &cols[i], false, acc));
                        pr.push(ij == ji);
                    }
                }
                (st, pr)
            },
        )
        .reduce(
            || (vec![(true, true); len], vec![true; npairs]),
            |(mut s1, mut p1), (s2, p2)| {
                for (a, b) in s1.iter_mut().zip(s2) {
                    a.0 &= b.0;
                    a.1 &= b.1;
                }
                for (a, b) in p1.iter_mut().zip(p2) {
                    *a &= b;
                }
                (s1, p1)
            },
        );
    let stages = p
        .stages()
        .iter()
        .enumerate()
        .map(|(i, s)| StageCheck {
            index: i,
            stage: s.to_string(),
            idempotent: stage_ok[i].0,
            symmetric: stage_ok[i].1,
        })
        .collect();
    let mut pairs = Vec::with_capacity(npairs);
    let mut it = pair_ok.into_iter();
    for i in 0..len {
        for j in i + 1..len {
            pairs.push(PairCheck { first: i, second: j, commute: it.next().unwrap() });
        }
    }
    Ok(AlgebraReport {
        pipeline: p.label().to_string(),
        basis_checked: basis.len(),
        exhaustive: matches!(sel, BasisSelection::Exhaustive) || basis.len() == dim,
        stages,
        pairs,
    })
}

/// Whether two pipelines on the same space compose to the same operator,
/// compared column by column on the selected basis vectors.
pub fn same_operator(p: &Pipeline, q: &Pipeline, sel: BasisSelection) -> Result<bool> {
    if (p.n(), p.k()) != (q.n(), q.k()) {
        return Err(Error::SizeMismatch(format!("{} vs {}", p.label(), q.label())));
    }
    let dim = check_dense_bound(p)?;
    let (cp, cq) = (CompiledPipeline::new(p)?, CompiledPipeline::new(q)?);
    let dp: i128 = cp.stages.iter().map(|s| s.den as i128).product();
    let dq: i128 = cq.stages.iter().map(|s| s.den as i128).product();
    let basis: Vec<usize> = match sel {
        BasisSelection::Exhaustive => (0..dim).collect(),
        BasisSelection::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rand::seq::index::sample(&mut rng, dim, count.min(dim)).into_vec()
        }
    };
    Ok(basis.par_iter().all(|&b| {
        let mut acc = Accumulator::<i128>::new(dim);
        let x = cp.push(0..cp.stages.len(), vec![(b, dq)], false, &mut acc);
        let y = cq.push(0..cq.stages.len(), vec![(b, dp)], false, &mut acc);
        sorted(x) == sorted(y)
    }))
}
