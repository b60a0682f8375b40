//! Matrix-free stage application over packed basis indices.
//!
//! A compiled stage is `(1/den) Σ_t w_t M_t` with each `M_t` a permutation of
//! the tensor basis that acts factorwise through precomputed maps on `S_n`
//! indices. Scalars are integers; denominators are tracked by the caller.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Embedding, Pipeline, ProjectorSpec, Side};
use crate::characters::character_table;
use crate::combinatorics::{factorial, hook_dimension};
use crate::error::Result;
use crate::symgroup::{enumerate_subgroup, wreath_embed, IndexedGroup};

pub(crate) fn indexed_group(n: usize) -> Result<Arc<IndexedGroup>> {
    static GROUPS: OnceLock<Mutex<HashMap<usize, Arc<IndexedGroup>>>> = OnceLock::new();
    let groups = GROUPS.get_or_init(Default::default);
    if let Some(g) = groups.lock().unwrap().get(&n) {
        return Ok(g.clone());
    }
    let g = Arc::new(IndexedGroup::new(n)?);
    groups.lock().unwrap().insert(n, g.clone());
    Ok(g)
}

pub(crate) trait Scalar: Clone + Zero + Send + Sync {
    fn add_mul(&mut self, x: &Self, w: i64);
}

impl Scalar for i128 {
    #[inline]
    fn add_mul(&mut self, x: &Self, w: i64) {
        *self = x.checked_mul(w as i128).and_then(|p| self.checked_add(p)).expect("i128 overflow in projector engine");
    }
}

impl Scalar for BigInt {
    #[inline]
    fn add_mul(&mut self, x: &Self, w: i64) {
        *self += x * w;
    }
}

pub(crate) type Sparse<T> = Vec<(usize, T)>;

#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub k: usize,
    pub nf: usize,
    pub strides: Vec<usize>,
    pub dim: usize,
}

impl Layout {
    pub fn new(n: usize, k: usize) -> Self {
        let nf = factorial(n) as usize;
        let strides: Vec<usize> = (0..k).map(|f| nf.pow(f as u32)).collect();
        Layout { k, nf, strides, dim: nf.pow(k as u32) }
    }

    #[inline]
    fn digits(&self, idx: usize, out: &mut [usize]) {
        let mut x = idx;
        for d in out.iter_mut().take(self.k) {
            *d = x % self.nf;
            x /= self.nf;
        }
    }
}

#[derive(Clone, Debug)]
struct Term {
    weight: i64,
    maps: Vec<(usize, Arc<[u32]>)>,
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledStage {
    terms: Vec<Term>,
    transposed: Vec<Term>,
    pub den: i64,
}

fn invert_map(map: &[u32]) -> Arc<[u32]> {
    let mut inv = vec![0u32; map.len()];
    for (i, &x) in map.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv.into()
}

impl CompiledStage {
    pub fn compile(spec: &ProjectorSpec, n: usize, group: &IndexedGroup) -> Result<Self> {
        let nf = group.order();
        let (terms, den) = match spec {
            ProjectorSpec::Isotypic { factor, lambda } => {
                let table = character_table(n)?;
                let row = table.index_of(lambda).expect("validated partition");
                let d = hook_dimension(lambda) as i64;
                let per_class: Vec<i64> =
                    group.classes().iter().map(|c| table.value_at(row, table.index_of(c).unwrap())).collect();
                let terms: Vec<Term> = (0..nf)
                    .filter_map(|g| {
                        let chi = per_class[group.class_of(g)];
                        (chi != 0).then(|| {
                            let map: Arc<[u32]> = (0..nf).map(|s| group.mul(g, s) as u32).collect();
                            Term { weight: d * chi, maps: vec![(*factor, map)] }
                        })
                    })
                    .collect();
                (terms, nf as i64)
            }
            ProjectorSpec::InvariantAverage { group: desc, actions, embedding } => {
                let elements = enumerate_subgroup(desc);
                let terms: Vec<Term> = elements
                    .iter()
                    .map(|g| {
                        let acting = match embedding {
                            Some(Embedding::Wreath { m }) => wreath_embed(g, *m),
                            None => g.clone(),
                        };
                        let a = group.index_of(&acting);
                        let ainv = group.inv(a);
                        let mut per_factor: Vec<(usize, Vec<u32>)> = Vec::new();
                        for act in actions {
                            let slot = match per_factor.iter().position(|(f, _)| *f == act.factor) {
                                Some(p) => p,
                                None => {
                                    per_factor.push((act.factor, (0..nf as u32).collect()));
                                    per_factor.len() - 1
                                }
                            };
                            let map = &mut per_factor[slot].1;
                            for x in map.iter_mut() {
                                *x = match act.side {
                                    Side::L => group.mul(a, *x as usize),
                                    Side::R => group.mul(*x as usize, ainv),
                                } as u32;
                            }
                        }
                        Term { weight: 1, maps: per_factor.into_iter().map(|(f, m)| (f, m.into())).collect() }
                    })
                    .collect();
                (terms, elements.len() as i64)
            }
        };
        let transposed = terms
            .iter()
            .map(|t: &Term| Term { weight: t.weight, maps: t.maps.iter().map(|(f, m)| (*f, invert_map(m))).collect() })
            .collect();
        Ok(CompiledStage { terms, transposed, den })
    }

    pub fn fanout(&self) -> usize {
        self.terms.len()
    }

    /// `acc ← Σ_t w_t M_t input` (or with `M_t^T`), drained into a sparse list.
    pub fn apply<T: Scalar>(
        &self,
        layout: &Layout,
        input: &[(usize, T)],
        transpose: bool,
        acc: &mut Accumulator<T>,
    ) -> Sparse<T> {
        let terms = if transpose { &self.transposed } else { &self.terms };
        let mut digits = [0usize; 8];
        for (idx, v) in input {
            layout.digits(*idx, &mut digits);
            for t in terms {
                let mut j = *idx;
                for (f, map) in &t.maps {
                    let d = digits[*f];
                    j = j + map[d] as usize * layout.strides[*f] - d * layout.strides[*f];
                }
                acc.add(j, v, t.weight);
            }
        }
        acc.drain()
    }
}

/// Dense scratch space with a touched list, reused across applications.
pub(crate) struct Accumulator<T> {
    vals: Vec<T>,
    seen: Vec<bool>,
    touched: Vec<usize>,
}

impl<T: Scalar> Accumulator<T> {
    pub fn new(dim: usize) -> Self {
        Accumulator { vals: vec![T::zero(); dim], seen: vec![false; dim], touched: Vec::new() }
    }

    #[inline]
    pub fn add(&mut self, idx: usize, v: &T, w: i64) {
        if !self.seen[idx] {
            self.seen[idx] = true;
            self.touched.push(idx);
        }
        self.vals[idx].add_mul(v, w);
    }

    pub fn drain(&mut self) -> Sparse<T> {
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.seen[i] = false;
            let v = std::mem::replace(&mut self.vals[i], T::zero());
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        self.touched.clear();
        out
    }
}

/// A pipeline compiled against `IndexedGroup(n)`.
pub(crate) struct CompiledPipeline {
    pub layout: Layout,
    pub stages: Vec<CompiledStage>,
}

impl CompiledPipeline {
    pub fn new(p: &Pipeline) -> Result<Self> {
        let group = indexed_group(p.n())?;
        let stages = p.stages().iter().map(|s| CompiledStage::compile(s, p.n(), &group)).collect::<Result<Vec<_>>>()?;
        Ok(CompiledPipeline { layout: Layout::new(p.n(), p.k()), stages })
    }

    /// Runs `stages[range]` in order (or their transposes in reverse order).
    pub fn push<T: Scalar>(
        &self,
        range: std::ops::Range<usize>,
        start: Sparse<T>,
        transpose: bool,
        acc: &mut Accumulator<T>,
    ) -> Sparse<T> {
        let mut v = start;
        let order: Vec<usize> = if transpose { range.rev().collect() } else { range.collect() };
        for s in order {
            if v.is_empty() {
                break;
            }
            v = self.stages[s].apply(&self.layout, &v, transpose, acc);
        }
        v
    }
}
